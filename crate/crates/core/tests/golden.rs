//! Byte-stable output for the two-row hand example.
//!
//! x = [0, 1], y = [0, 1], f(x) = x, squared loss, exact tables. Every delta
//! is (x_k − x_j)², so the grid is [[0, 1], [1, 0]]:
//! rv samples [0, 1, 1, 0] → mean 0.5, MLE variance 0.25, SEM 0.25;
//! fd samples [0.5, 0.5] → SEM 0 and a degenerate interval at 0.5.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test --test golden`.

use std::path::PathBuf;

use ablate_core::io::{write_result, FormulationChoice, OutputFormat, RunConfig, RunResult};
use ablate_core::pipeline::run_with_model;
use ablate_core::{AblationMode, CiMethod, Dataset, FnModel, LossSpec, ModelSpec, VarianceEstimator};
use ndarray::array;

fn hand_result() -> RunResult<f64> {
    let data = Dataset::new(array![[0.0], [1.0]], array![0.0, 1.0], vec!["x1".into()]).unwrap();
    let config = RunConfig {
        data_path: "hand.csv".into(),
        target_column: "y".into(),
        feature_columns: None,
        model: ModelSpec::Constant { value: None },
        loss: LossSpec::squared(),
        k: 2,
        mode: AblationMode::Exact,
        formulation: FormulationChoice::Both,
        confidence_level: 0.95,
        ci_method: CiMethod::StudentT,
        seed: 0,
        variance: VarianceEstimator::Mle,
        serial: false,
    };
    let model = FnModel::new(|r: ndarray::ArrayView1<'_, f64>| r[0]);
    let mut result = run_with_model(&model, &data, &config).unwrap();
    result.library_version = "0.0.0-golden".into();
    result
}

fn check(name: &str, format: OutputFormat) {
    let mut bytes = Vec::new();
    write_result(&hand_result(), format, &mut bytes).unwrap();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &bytes).unwrap();
    }
    let golden = std::fs::read(&path).unwrap();
    assert_eq!(String::from_utf8(bytes).unwrap(), String::from_utf8(golden).unwrap());
}

#[test]
fn hand_values() {
    let r = hand_result();
    assert_eq!(r.baseline_risk, 0.0);
    let (rv, fd) = (&r.estimates[0], &r.estimates[1]);
    assert_eq!((rv.point, rv.sem, rv.n_samples), (0.5, 0.25, 4));
    assert_eq!((fd.point, fd.sem, fd.n_samples), (0.5, 0.0, 2));
    assert_eq!((fd.ci_low, fd.ci_high), (0.5, 0.5));
    // t quantile at 0.975 with 3 degrees of freedom
    let half = 0.25 * 3.182446305284263;
    assert!((rv.ci_high - 0.5 - half).abs() < 1e-12);
    assert!((0.5 - rv.ci_low - half).abs() < 1e-12);
}

#[test]
fn json_is_byte_stable() {
    check("hand_example.json", OutputFormat::Json);
}

#[test]
fn csv_is_byte_stable() {
    check("hand_example.csv", OutputFormat::Csv);
}

#[test]
fn json_round_trips() {
    let result = hand_result();
    let mut bytes = Vec::new();
    write_result(&result, OutputFormat::Json, &mut bytes).unwrap();
    let back: RunResult<f64> = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(back, result);
}
