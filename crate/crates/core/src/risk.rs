use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::Result;
use crate::loss::LossSpec;
use crate::model::{predict_checked, Model};
use crate::scalar::Scalar;

/// Fixed-data (empirical) risk of a model on a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RiskReport<T> {
    pub risk: T,
    pub per_point_losses: Vec<T>,
}

/// Losses of `predictions` against `targets`, one per row.
pub(crate) fn pointwise_losses<T: Scalar>(
    loss: &LossSpec<T>,
    predictions: &[T],
    targets: impl IntoIterator<Item = T>,
) -> Result<Vec<T>> {
    predictions
        .iter()
        .zip(targets)
        .map(|(&p, y)| loss.compute(p, y))
        .collect()
}

pub(crate) fn mean<T: Scalar>(values: &[T]) -> T {
    let mut acc = T::zero();
    for &v in values {
        acc += v;
    }
    acc / T::from_usize_lossy(values.len())
}

/// Mean loss of `model` over every row of `data`.
pub fn fixed_data_risk<T: Scalar, M: Model<T> + ?Sized>(
    model: &M,
    data: &Dataset<T>,
    loss: &LossSpec<T>,
) -> Result<RiskReport<T>> {
    for &y in data.target() {
        loss.check_target(y)?;
    }
    let predictions = predict_checked(model, data.features())?;
    let per_point_losses = pointwise_losses(loss, &predictions, data.target().iter().copied())?;
    Ok(RiskReport { risk: mean(&per_point_losses), per_point_losses })
}
