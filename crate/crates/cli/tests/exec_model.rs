mod common;

use std::time::{Duration, Instant};

use ablate_core::models::{exec_model, fit_ols, ExecModel, ExecOptions};
use ablate_core::pipeline::run_with_model;
use ablate_core::{Error, FnModel, Model, ModelSpec};
use common::{config, linear_data, mock_command};
use ndarray::Array2;

fn launch(args: &[&str], n_features: usize, timeout: Duration) -> Result<ExecModel<f64>, Error> {
    exec_model(&mock_command(args), n_features, ExecOptions { serial: true, batch_timeout: timeout })
}

fn rows(n: usize, m: usize) -> Array2<f64> {
    Array2::from_shape_fn((n, m), |(j, i)| j as f64 * 0.37 - i as f64 * 1.1)
}

fn contract_message(result: Result<impl std::fmt::Debug, Error>) -> String {
    match result {
        Err(e @ Error::ModelContract(_)) => e.to_string(),
        other => panic!("expected a model-contract error, got {other:?}"),
    }
}

#[test]
fn echo_child_matches_in_process_model() {
    let data = linear_data(60, 1);
    let cfg = config("unused", ModelSpec::Constant { value: None }, 8, 11);
    let child = launch(&["echo", "1"], 3, Duration::from_secs(30)).unwrap();
    let local = FnModel::new(|r: ndarray::ArrayView1<'_, f64>| r[1]);
    let remote = run_with_model(&child, &data, &cfg).unwrap();
    let expected = run_with_model(&local, &data, &cfg).unwrap();
    assert_eq!(remote.baseline_risk.to_bits(), expected.baseline_risk.to_bits());
    assert_eq!(remote.estimates, expected.estimates);
    assert!(child.shutdown().unwrap().success());
}

#[test]
fn linear_child_reproduces_fitted_ols() {
    let data = linear_data(80, 2);
    let ols = fit_ols(&data, 0.0).unwrap();
    let mut args = vec![ols.intercept.to_string()];
    args.extend(ols.weights.iter().map(f64::to_string));
    let mut argv = vec!["linear"];
    argv.extend(args.iter().map(String::as_str));
    let child = launch(&argv, 3, Duration::from_secs(30)).unwrap();

    let cfg = config("unused", ModelSpec::Ols { ridge_lambda: 0.0 }, 10, 5);
    let remote = run_with_model(&child, &data, &cfg).unwrap();
    let local = run_with_model(&ols, &data, &cfg).unwrap();
    for (r, l) in remote.estimates.iter().zip(&local.estimates) {
        assert!((r.point - l.point).abs() <= 1e-9 * l.point.abs().max(1.0), "{} vs {}", r.point, l.point);
        assert!((r.ci_low - l.ci_low).abs() <= 1e-9 * l.ci_low.abs().max(1.0));
        assert!((r.ci_high - l.ci_high).abs() <= 1e-9 * l.ci_high.abs().max(1.0));
    }
}

#[test]
fn predictions_keep_row_order_in_large_batches() {
    let child = launch(&["row-index"], 4, Duration::from_secs(30)).unwrap();
    let p = child.predict_batch(rows(1000, 4).view()).unwrap();
    assert_eq!(p, (0..1000).map(|b| b as f64).collect::<Vec<_>>());

    let echo = launch(&["echo", "2"], 4, Duration::from_secs(30)).unwrap();
    let batch = rows(1000, 4);
    let p = echo.predict_batch(batch.view()).unwrap();
    assert_eq!(p, batch.column(2).to_vec());
}

#[test]
fn short_answer_times_out_as_contract_error() {
    let child = launch(&["short"], 2, Duration::from_millis(500)).unwrap();
    let start = Instant::now();
    let msg = contract_message(child.predict_batch(rows(5, 2).view()));
    assert!(msg.contains("no response"), "{msg}");
    assert!(start.elapsed() < Duration::from_secs(10));
    // the session is unusable afterwards
    let msg = contract_message(child.predict_batch(rows(1, 2).view()));
    assert!(msg.contains("earlier failure"), "{msg}");
}

#[test]
fn err_line_aborts_with_message() {
    let child = launch(&["err"], 2, Duration::from_secs(30)).unwrap();
    let msg = contract_message(child.predict_batch(rows(3, 2).view()));
    assert!(msg.contains("cannot score this batch"), "{msg}");
}

#[test]
fn crash_reports_status_and_stderr() {
    let child = launch(&["crash"], 2, Duration::from_secs(30)).unwrap();
    let msg = contract_message(child.predict_batch(rows(3, 2).view()));
    assert!(msg.contains("simulated crash"), "{msg}");
}

#[test]
fn slow_child_hits_batch_timeout() {
    let fast_enough = launch(&["slow", "50", "0"], 2, Duration::from_secs(30)).unwrap();
    assert_eq!(fast_enough.predict_batch(rows(2, 2).view()).unwrap(), vec![0.0, 0.37]);
    let too_slow = launch(&["slow", "3000", "0"], 2, Duration::from_millis(300)).unwrap();
    contract_message(too_slow.predict_batch(rows(2, 2).view()));
}

#[test]
fn stray_output_is_detected() {
    let child = launch(&["chatty", "0"], 2, Duration::from_secs(30)).unwrap();
    child.predict_batch(rows(2, 2).view()).unwrap();
    std::thread::sleep(Duration::from_millis(200));
    let msg = contract_message(child.predict_batch(rows(2, 2).view()));
    assert!(msg.contains("unexpected output"), "{msg}");
}

#[test]
fn non_finite_predictions_break_the_contract() {
    let data = linear_data(20, 3);
    let child = launch(&["nan"], 3, Duration::from_secs(30)).unwrap();
    let cfg = config("unused", ModelSpec::Constant { value: None }, 4, 0);
    contract_message(run_with_model(&child, &data, &cfg));
}

#[test]
fn failed_handshake_and_missing_program() {
    let msg = contract_message(launch(&["bad-hello"], 2, Duration::from_secs(30)));
    assert!(msg.contains("expected READY"), "{msg}");
    let missing = exec_model::<f64>(
        &["/nonexistent/model-binary".to_string()],
        2,
        ExecOptions::default(),
    );
    contract_message(missing);
}

#[test]
fn exec_models_are_serial_and_reject_wrong_width() {
    let child = launch(&["echo", "0"], 2, Duration::from_secs(30)).unwrap();
    assert!(child.is_serial());
    assert!(matches!(child.predict_batch(rows(2, 3).view()), Err(Error::InvalidInput(_))));
}
