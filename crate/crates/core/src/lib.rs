//! Randomized-ablation feature importance with confidence intervals.
//!
//! A feature is ablated by replacing its value with a draw from its own
//! empirical column. Its importance is the average increase in loss this
//! causes, and the increase is estimated over an N×K grid of (row,
//! replacement) pairs. Two interval constructions are offered over the same
//! grid:
//!
//! * `rv`: every delta is a sample, so the interval reflects uncertainty over
//!   the data distribution;
//! * `fd`: each replicate's mean is a sample, so the interval reflects only
//!   the ablation randomness with the dataset held fixed.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64` or `f32`.

pub mod ablation;
pub mod dataset;
pub mod error;
pub mod estimator;
pub mod io;
pub mod loss;
pub mod model;
pub mod models;
pub mod oracle;
pub mod pipeline;
pub mod risk;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod uncertainty;

pub use ablation::{
    ablate_row, compute_delta_matrix, compute_delta_matrix_with_baseline, draw_replacement_table,
    AblationMode, DeltaMatrix, ReplacementTable,
};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use estimator::{fd_samples, point_estimate, rv_samples, Formulation, SampleSequence};
pub use loss::{compute_loss, LossKind, LossSpec};
pub use model::{FnModel, Model, Serial};
pub use models::ModelSpec;
pub use oracle::{exact_fd_importance, simulate_coverage, CoverageConfig, CoverageReport};
pub use io::{load_csv, write_result, FormulationChoice, OutputFormat, RunConfig, RunResult};
pub use risk::{fixed_data_risk, RiskReport};
pub use scalar::Scalar;
pub use uncertainty::{
    confidence_interval, mle_variance, sem, t_quantile, CiMethod, CiOptions, ImportanceEstimate, Interval,
    VarianceEstimator,
};

pub type Dataset64 = Dataset<f64>;
pub type Dataset32 = Dataset<f32>;
pub type LossSpec64 = LossSpec<f64>;
pub type LossSpec32 = LossSpec<f32>;
pub type DeltaMatrix64 = DeltaMatrix<f64>;
pub type DeltaMatrix32 = DeltaMatrix<f32>;
pub type ReplacementTable64 = ReplacementTable<f64>;
pub type ReplacementTable32 = ReplacementTable<f32>;
pub type ImportanceEstimate64 = ImportanceEstimate<f64>;
pub type ImportanceEstimate32 = ImportanceEstimate<f32>;
pub type RunConfig64 = RunConfig<f64>;
pub type RunResult64 = RunResult<f64>;
