//! Standard error of the mean and confidence intervals over a sample sequence.

use serde::{Deserialize, Serialize};

use crate::ablation::AblationMode;
use crate::error::{Error, Result};
use crate::estimator::{Formulation, SampleSequence};
use crate::risk::mean;
use crate::scalar::Scalar;
pub use crate::special::{normal_quantile, t_quantile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    /// Student-t quantile with `n − 1` degrees of freedom.
    #[default]
    StudentT,
    /// Standard normal quantile (1.96 at the 95% level).
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceEstimator {
    /// Maximum-likelihood variance, divisor `n`.
    #[default]
    Mle,
    /// Bessel-corrected variance, divisor `n − 1`. Not the default.
    Unbiased,
}

fn check_nonempty<T>(samples: &[T]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("variance of an empty sample".into()));
    }
    Ok(())
}

fn sum_sq_dev<T: Scalar>(samples: &[T]) -> T {
    let m = mean(samples);
    let mut acc = T::zero();
    for &s in samples {
        let d = s - m;
        acc += d * d;
    }
    acc
}

/// σ̂² = (1/n)·Σ(s − mean)².
pub fn mle_variance<T: Scalar>(samples: &[T]) -> Result<T> {
    check_nonempty(samples)?;
    Ok(sum_sq_dev(samples) / T::from_usize_lossy(samples.len()))
}

pub fn variance<T: Scalar>(samples: &[T], estimator: VarianceEstimator) -> Result<T> {
    match estimator {
        VarianceEstimator::Mle => mle_variance(samples),
        VarianceEstimator::Unbiased => {
            if samples.len() < 2 {
                return Err(Error::InsufficientSamples("unbiased variance needs at least 2 samples".into()));
            }
            Ok(sum_sq_dev(samples) / T::from_usize_lossy(samples.len() - 1))
        }
    }
}

/// Standard error of the mean, sqrt(σ̂²/n), with the MLE variance.
pub fn sem<T: Scalar>(samples: &[T]) -> Result<T> {
    sem_with(samples, VarianceEstimator::Mle)
}

pub fn sem_with<T: Scalar>(samples: &[T], estimator: VarianceEstimator) -> Result<T> {
    Ok((variance(samples, estimator)? / T::from_usize_lossy(samples.len())).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiOptions<T> {
    pub level: T,
    pub method: CiMethod,
    pub variance: VarianceEstimator,
}

impl<T: Scalar> Default for CiOptions<T> {
    fn default() -> Self {
        Self { level: T::lit(0.95), method: CiMethod::StudentT, variance: VarianceEstimator::Mle }
    }
}

impl<T: Scalar> CiOptions<T> {
    pub fn with_level(level: T) -> Self {
        Self { level, ..Self::default() }
    }
}

/// A symmetric interval `point ∓ quantile·sem`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Interval<T> {
    pub point: T,
    pub sem: T,
    pub ci_low: T,
    pub ci_high: T,
    pub quantile: T,
    pub n_samples: usize,
}

impl<T: Scalar> Interval<T> {
    pub fn half_width(&self) -> T {
        self.quantile * self.sem
    }

    pub fn contains(&self, value: T) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Two-sided quantile multiplier for `level`, given `n` samples.
pub fn ci_multiplier<T: Scalar>(level: T, method: CiMethod, n: usize) -> Result<T> {
    if !(level > T::zero() && level < T::one()) {
        return Err(Error::InvalidArgument(format!("confidence level must lie in (0, 1), got {level}")));
    }
    let p = (T::one() + level) / T::lit(2.0);
    match method {
        CiMethod::StudentT => t_quantile(p, (n - 1) as u64),
        CiMethod::Normal => normal_quantile(p),
    }
}

pub fn confidence_interval<T: Scalar>(samples: &SampleSequence<T>, options: &CiOptions<T>) -> Result<Interval<T>> {
    let n = samples.values.len();
    if n < 2 {
        return Err(Error::InsufficientSamples(format!(
            "{} interval needs at least 2 samples, got {n}",
            samples.formulation.as_str()
        )));
    }
    let quantile = ci_multiplier(options.level, options.method, n)?;
    let point = mean(&samples.values);
    let sem = sem_with(&samples.values, options.variance)?;
    let half = quantile * sem;
    Ok(Interval { point, sem, ci_low: point - half, ci_high: point + half, quantile, n_samples: n })
}

/// One importance estimate for one feature under one formulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ImportanceEstimate<T> {
    pub feature_index: usize,
    pub feature_name: String,
    pub point: T,
    pub sem: T,
    pub ci_low: T,
    pub ci_high: T,
    pub confidence_level: T,
    pub formulation: Formulation,
    pub n_samples: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub mode: AblationMode,
    pub seed: u64,
    pub ci_method: CiMethod,
    /// Set for the rv formulation with K > 1, where the N·K deltas share
    /// rows and replacement values and so are not fully independent.
    pub cross_product_samples: bool,
}
