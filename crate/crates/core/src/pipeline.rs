//! End-to-end runs: baseline risk, then per feature a replacement table, its
//! delta grid, the point estimate and one interval per formulation.

use rayon::prelude::*;

use crate::ablation::{compute_delta_matrix_with_baseline, draw_replacement_table, AblationMode};
use crate::dataset::Dataset;
use crate::error::Result;
use crate::estimator::{point_estimate, samples, Formulation};
use crate::io::{load_csv, CoverageResult, FormulationChoice, RunConfig, RunResult};
use crate::loss::LossSpec;
use crate::model::{Model, Serial};
use crate::oracle::{simulate_coverage, CoverageConfig};
use crate::risk::{fixed_data_risk, RiskReport};
use crate::scalar::Scalar;
use crate::uncertainty::{confidence_interval, CiOptions, ImportanceEstimate};

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions<T> {
    pub k: usize,
    pub mode: AblationMode,
    pub formulation: FormulationChoice,
    pub seed: u64,
    pub ci: CiOptions<T>,
}

impl<T: Scalar> EstimateOptions<T> {
    pub fn from_config(config: &RunConfig<T>) -> Self {
        Self {
            k: config.k,
            mode: config.mode,
            formulation: config.formulation,
            seed: config.seed,
            ci: CiOptions { level: config.confidence_level, method: config.ci_method, variance: config.variance },
        }
    }
}

/// Estimates for one feature, one per requested formulation, all computed
/// from a single delta grid.
pub fn estimate_feature<T: Scalar, M: Model<T> + ?Sized>(
    model: &M,
    data: &Dataset<T>,
    loss: &LossSpec<T>,
    feature_index: usize,
    options: &EstimateOptions<T>,
    baseline: &RiskReport<T>,
) -> Result<Vec<ImportanceEstimate<T>>> {
    let table = draw_replacement_table(data, feature_index, options.k, options.seed, options.mode)?;
    let deltas = compute_delta_matrix_with_baseline(model, data, loss, &table, baseline)?;
    let point = point_estimate(&deltas);
    options
        .formulation
        .formulations()
        .iter()
        .map(|&formulation| {
            let interval = confidence_interval(&samples(&deltas, formulation), &options.ci)?;
            Ok(ImportanceEstimate {
                feature_index,
                feature_name: data.feature_names()[feature_index].clone(),
                point,
                sem: interval.sem,
                ci_low: point - interval.half_width(),
                ci_high: point + interval.half_width(),
                confidence_level: options.ci.level,
                formulation,
                n_samples: interval.n_samples,
                k: table.k,
                mode: table.mode,
                seed: options.seed,
                ci_method: options.ci.method,
                cross_product_samples: formulation == Formulation::Rv && table.k > 1,
            })
        })
        .collect()
}

pub fn run_with_model<T: Scalar, M: Model<T> + ?Sized>(
    model: &M,
    data: &Dataset<T>,
    config: &RunConfig<T>,
) -> Result<RunResult<T>> {
    config.validate()?;
    let options = EstimateOptions::from_config(config);
    let baseline = fixed_data_risk(model, data, &config.loss)?;
    let feature = |i: usize| estimate_feature(model, data, &config.loss, i, &options, &baseline);
    let per_feature: Vec<Vec<ImportanceEstimate<T>>> = if model.is_serial() {
        (0..data.n_features()).map(feature).collect::<Result<_>>()?
    } else {
        (0..data.n_features()).into_par_iter().map(feature).collect::<Result<_>>()?
    };
    Ok(RunResult {
        baseline_risk: baseline.risk,
        estimates: per_feature.into_iter().flatten().collect(),
        config_echo: config.clone(),
        library_version: LIBRARY_VERSION.to_string(),
    })
}

fn build_model<T: Scalar>(config: &RunConfig<T>, data: &Dataset<T>) -> Result<Box<dyn Model<T>>> {
    let model = config.model.build(data)?;
    Ok(if config.serial { Box::new(Serial(model)) } else { model })
}

/// Loads the configured dataset, builds the model and runs every feature.
pub fn run<T: Scalar>(config: &RunConfig<T>) -> Result<RunResult<T>> {
    config.validate()?;
    let data = load_csv(&config.data_path, &config.target_column, config.feature_columns.as_deref())?;
    let model = build_model(config, &data)?;
    run_with_model(model.as_ref(), &data, config)
}

/// Coverage simulation for every feature and requested formulation.
pub fn run_coverage<T: Scalar>(config: &RunConfig<T>, replicates: usize) -> Result<CoverageResult<T>> {
    config.validate()?;
    let data = load_csv(&config.data_path, &config.target_column, config.feature_columns.as_deref())?;
    let model = build_model(config, &data)?;
    let options = EstimateOptions::from_config(config);
    let mut coverage = Vec::new();
    for i in 0..data.n_features() {
        for &formulation in config.formulation.formulations() {
            let cfg = CoverageConfig {
                k: options.k,
                mode: options.mode,
                formulation,
                ci: options.ci,
                replicates,
                seed: options.seed,
            };
            coverage.push(simulate_coverage(model.as_ref(), &data, i, &config.loss, &cfg)?);
        }
    }
    Ok(CoverageResult { coverage, config_echo: config.clone(), library_version: LIBRARY_VERSION.to_string() })
}
