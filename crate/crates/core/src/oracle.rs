//! Exact fixed-data importance by full enumeration, and Monte-Carlo coverage
//! checks of the intervals against it.

use ndarray::Axis;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ablation::{compute_delta_matrix_with_baseline, draw_replacement_table, AblationMode};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::estimator::{samples, Formulation};
use crate::loss::LossSpec;
use crate::model::{predict_checked, Model};
use crate::risk::fixed_data_risk;
use crate::rng::replicate_seed;
use crate::scalar::Scalar;
use crate::uncertainty::{confidence_interval, CiOptions};

/// Fixed-data importance with the expectation over the replacement value
/// taken exactly under the empirical marginal:
/// `(1/N²) Σ_j Σ_r [ℓ(f(x⁽ʲ⁾ with x_i = x_i⁽ʳ⁾), y⁽ʲ⁾) − ℓ(f(x⁽ʲ⁾), y⁽ʲ⁾)]`.
///
/// Costs N² model evaluations, issued as one batch per data row.
pub fn exact_fd_importance<T: Scalar, M: Model<T> + ?Sized>(
    model: &M,
    data: &Dataset<T>,
    feature_index: usize,
    loss: &LossSpec<T>,
) -> Result<T> {
    let column = data.column(feature_index)?;
    let n = data.n_rows();
    let mut total = T::zero();
    for j in 0..n {
        let y = data.target()[j];
        let original = data.row(j).insert_axis(Axis(0));
        let base = loss.compute(predict_checked(model, original)?[0], y)?;

        let mut batch = original.broadcast((n, data.n_features())).expect("row broadcasts").to_owned();
        batch.column_mut(feature_index).assign(&column);
        let predictions = predict_checked(model, batch.view())?;
        let mut row_sum = T::zero();
        for p in predictions {
            row_sum += loss.compute(p, y)? - base;
        }
        total += row_sum;
    }
    let n = T::from_usize_lossy(n);
    Ok(total / (n * n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CoverageConfig<T> {
    pub k: usize,
    pub mode: AblationMode,
    pub formulation: Formulation,
    pub ci: CiOptions<T>,
    pub replicates: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CoverageReport<T> {
    pub feature_index: usize,
    pub feature_name: String,
    pub replicates: usize,
    pub hits: usize,
    pub coverage: f64,
    pub target_level: T,
    pub formulation: Formulation,
    /// The enumerated fixed-data importance used as ground truth.
    pub truth: T,
}

/// Fraction of replicate intervals containing the exact fixed-data
/// importance. Replicate `r` draws its table with seed
/// [`replicate_seed`]`(seed, r)`.
pub fn simulate_coverage<T: Scalar, M: Model<T> + ?Sized>(
    model: &M,
    data: &Dataset<T>,
    feature_index: usize,
    loss: &LossSpec<T>,
    config: &CoverageConfig<T>,
) -> Result<CoverageReport<T>> {
    if config.replicates < 100 {
        return Err(Error::InvalidArgument(format!(
            "coverage needs at least 100 replicates, got {}",
            config.replicates
        )));
    }
    if config.formulation == Formulation::Fd && config.mode != AblationMode::Exact && config.k < 2 {
        return Err(Error::InvalidArgument("fd coverage needs K ≥ 2".into()));
    }
    data.check_feature(feature_index)?;
    let truth = exact_fd_importance(model, data, feature_index, loss)?;
    let baseline = fixed_data_risk(model, data, loss)?;

    let hit = |r: usize| -> Result<bool> {
        let seed = replicate_seed(config.seed, r as u64);
        let table = draw_replacement_table(data, feature_index, config.k, seed, config.mode)?;
        let deltas = compute_delta_matrix_with_baseline(model, data, loss, &table, &baseline)?;
        let interval = confidence_interval(&samples(&deltas, config.formulation), &config.ci)?;
        Ok(interval.contains(truth))
    };
    let outcomes: Vec<bool> = if model.is_serial() {
        (0..config.replicates).map(hit).collect::<Result<_>>()?
    } else {
        (0..config.replicates).into_par_iter().map(hit).collect::<Result<_>>()?
    };
    let hits = outcomes.iter().filter(|&&h| h).count();
    Ok(CoverageReport {
        feature_index,
        feature_name: data.feature_names()[feature_index].clone(),
        replicates: config.replicates,
        hits,
        coverage: hits as f64 / config.replicates as f64,
        target_level: config.ci.level,
        formulation: config.formulation,
        truth,
    })
}
