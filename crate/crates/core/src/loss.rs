//! Pointwise loss functions ℓ(prediction, target).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Squared,
    Absolute,
    ZeroOne,
    LogLoss,
}

/// A loss function together with its kind-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LossSpec<T> {
    pub kind: LossKind,
    /// Decision threshold, used by `zero_one` only.
    pub threshold: T,
    /// Probability clipping bound, used by `log_loss` only.
    pub epsilon: T,
}

impl<T: Scalar> LossSpec<T> {
    pub fn new(kind: LossKind) -> Self {
        Self { kind, threshold: T::lit(0.5), epsilon: T::lit(1e-12) }
    }

    pub fn squared() -> Self {
        Self::new(LossKind::Squared)
    }

    pub fn absolute() -> Self {
        Self::new(LossKind::Absolute)
    }

    pub fn zero_one(threshold: T) -> Self {
        Self { threshold, ..Self::new(LossKind::ZeroOne) }
    }

    pub fn log_loss() -> Self {
        Self::new(LossKind::LogLoss)
    }

    /// Rejects targets the loss is undefined for, before any model is queried.
    pub fn check_target(&self, target: T) -> Result<()> {
        if !target.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite target {target}")));
        }
        if self.kind == LossKind::LogLoss && target != T::zero() && target != T::one() {
            return Err(Error::InvalidTarget(format!("log_loss needs targets in {{0,1}}, got {target}")));
        }
        Ok(())
    }

    pub fn compute(&self, prediction: T, target: T) -> Result<T> {
        if !prediction.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite prediction {prediction}")));
        }
        self.check_target(target)?;
        let value = match self.kind {
            LossKind::Squared => {
                let d = prediction - target;
                d * d
            }
            LossKind::Absolute => (prediction - target).abs(),
            LossKind::ZeroOne => {
                if (prediction >= self.threshold) == (target >= self.threshold) {
                    T::zero()
                } else {
                    T::one()
                }
            }
            LossKind::LogLoss => {
                let p = prediction.max(self.epsilon).min(T::one() - self.epsilon);
                if target == T::one() {
                    -p.ln()
                } else {
                    -(T::one() - p).ln()
                }
            }
        };
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "loss overflowed for prediction {prediction}, target {target}"
            )));
        }
        Ok(value)
    }
}

/// Free-function form of [`LossSpec::compute`].
pub fn compute_loss<T: Scalar>(loss: &LossSpec<T>, prediction: T, target: T) -> Result<T> {
    loss.compute(prediction, target)
}
