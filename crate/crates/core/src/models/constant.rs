use ndarray::ArrayView2;

use crate::dataset::Dataset;
use crate::error::Result;
use crate::model::Model;
use crate::risk::mean;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantModel<T> {
    pub value: T,
}

impl<T: Scalar> ConstantModel<T> {
    pub fn new(value: T) -> Self {
        Self { value }
    }
}

impl<T: Scalar> Model<T> for ConstantModel<T> {
    fn predict_batch(&self, rows: ArrayView2<'_, T>) -> Result<Vec<T>> {
        Ok(vec![self.value; rows.nrows()])
    }
}

/// Predicts the target mean everywhere.
pub fn fit_constant<T: Scalar>(data: &Dataset<T>) -> ConstantModel<T> {
    ConstantModel::new(mean(&data.target().to_vec()))
}
