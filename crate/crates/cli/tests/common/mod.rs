#![allow(dead_code)]

use std::path::{Path, PathBuf};

use ablate_core::io::{write_dataset_csv, FormulationChoice, RunConfig};
use ablate_core::{AblationMode, CiMethod, Dataset, LossSpec, ModelSpec, VarianceEstimator};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn mock_command(args: &[&str]) -> Vec<String> {
    let mut command = vec![env!("CARGO_BIN_EXE_mock-model").to_string()];
    command.extend(args.iter().map(|a| a.to_string()));
    command
}

pub fn cli_path() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_ablate-ci"))
}

/// `y = 1 + 2·x0 − x1 + 0·x2 + noise`, features uniform on [−1, 1].
pub fn linear_data(n: usize, seed: u64) -> Dataset<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let features = Array2::from_shape_fn((n, 3), |_| rng.random_range(-1.0..1.0));
    let target = Array1::from_shape_fn(n, |j| {
        1.0 + 2.0 * features[[j, 0]] - features[[j, 1]] + 0.1 * rng.random_range(-1.0..1.0)
    });
    Dataset::new(features, target, vec!["x0".into(), "x1".into(), "x2".into()]).unwrap()
}

pub fn write_csv(data: &Dataset<f64>, dir: &Path) -> PathBuf {
    let path = dir.join("data.csv");
    let file = std::fs::File::create(&path).unwrap();
    write_dataset_csv(data, "y", file).unwrap();
    path
}

pub fn config(data_path: &str, model: ModelSpec<f64>, k: usize, seed: u64) -> RunConfig<f64> {
    RunConfig {
        data_path: data_path.into(),
        target_column: "y".into(),
        feature_columns: None,
        model,
        loss: LossSpec::squared(),
        k,
        mode: AblationMode::Resample,
        formulation: FormulationChoice::Both,
        confidence_level: 0.95,
        ci_method: CiMethod::StudentT,
        seed,
        variance: VarianceEstimator::Mle,
        serial: false,
    }
}
