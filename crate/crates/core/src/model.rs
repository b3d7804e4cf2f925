//! The contract every predictor satisfies, regardless of where it runs.

use std::marker::PhantomData;

use ndarray::{ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A fitted model `f` that predicts one real value per input row.
///
/// Implementations must be deterministic (the same batch always yields the
/// same vector), order-preserving (prediction `b` belongs to row `b`) and free
/// of observable state changes between calls.
pub trait Model<T: Scalar>: Send + Sync {
    fn predict_batch(&self, rows: ArrayView2<'_, T>) -> Result<Vec<T>>;

    /// Serial models are only ever called from one thread at a time.
    fn is_serial(&self) -> bool {
        false
    }
}

impl<T: Scalar, M: Model<T> + ?Sized> Model<T> for Box<M> {
    fn predict_batch(&self, rows: ArrayView2<'_, T>) -> Result<Vec<T>> {
        (**self).predict_batch(rows)
    }

    fn is_serial(&self) -> bool {
        (**self).is_serial()
    }
}

impl<T: Scalar, M: Model<T> + ?Sized> Model<T> for &M {
    fn predict_batch(&self, rows: ArrayView2<'_, T>) -> Result<Vec<T>> {
        (**self).predict_batch(rows)
    }

    fn is_serial(&self) -> bool {
        (**self).is_serial()
    }
}

/// Forces the wrapped model to be called from one thread at a time.
pub struct Serial<M>(pub M);

impl<T: Scalar, M: Model<T>> Model<T> for Serial<M> {
    fn predict_batch(&self, rows: ArrayView2<'_, T>) -> Result<Vec<T>> {
        self.0.predict_batch(rows)
    }

    fn is_serial(&self) -> bool {
        true
    }
}

/// Calls the model and enforces the length and finiteness parts of the contract.
pub fn predict_checked<T: Scalar, M: Model<T> + ?Sized>(
    model: &M,
    rows: ArrayView2<'_, T>,
) -> Result<Vec<T>> {
    let predictions = model.predict_batch(rows)?;
    if predictions.len() != rows.nrows() {
        return Err(Error::ModelContract(format!(
            "model returned {} predictions for {} rows",
            predictions.len(),
            rows.nrows()
        )));
    }
    if let Some((b, p)) = predictions.iter().enumerate().find(|(_, p)| !p.is_finite()) {
        return Err(Error::ModelContract(format!("model returned non-finite prediction {p} for row {b}")));
    }
    Ok(predictions)
}

/// Adapts a pure per-row function into a [`Model`].
pub struct FnModel<T, F> {
    f: F,
    _scalar: PhantomData<fn() -> T>,
}

impl<T, F> FnModel<T, F>
where
    T: Scalar,
    F: Fn(ArrayView1<'_, T>) -> T + Send + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f, _scalar: PhantomData }
    }
}

impl<T, F> Model<T> for FnModel<T, F>
where
    T: Scalar,
    F: Fn(ArrayView1<'_, T>) -> T + Send + Sync,
{
    fn predict_batch(&self, rows: ArrayView2<'_, T>) -> Result<Vec<T>> {
        Ok(rows.rows().into_iter().map(|r| (self.f)(r)).collect())
    }
}
