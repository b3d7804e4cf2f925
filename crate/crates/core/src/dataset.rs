use std::collections::HashSet;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An N×M feature matrix with a length-N target and one name per column.
///
/// Construction validates every invariant: at least two rows, at least one
/// feature, unique names and finite values throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    features: Array2<T>,
    target: Array1<T>,
    feature_names: Vec<String>,
    source_columns: Vec<usize>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(features: Array2<T>, target: Array1<T>, feature_names: Vec<String>) -> Result<Self> {
        let (n, m) = features.dim();
        if n < 2 {
            return Err(Error::InvalidInput(format!("dataset needs at least 2 rows, got {n}")));
        }
        if m < 1 {
            return Err(Error::InvalidInput("dataset needs at least 1 feature".into()));
        }
        if target.len() != n {
            return Err(Error::InvalidInput(format!(
                "target has {} entries but features have {n} rows",
                target.len()
            )));
        }
        if feature_names.len() != m {
            return Err(Error::InvalidInput(format!(
                "{} feature names for {m} columns",
                feature_names.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate feature name `{name}`")));
            }
        }
        if let Some(((row, col), _)) = features.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite feature at row {row}, column {col}")));
        }
        if let Some((row, _)) = target.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite target at row {row}")));
        }
        let source_columns = (0..m).collect();
        Ok(Self { features, target, feature_names, source_columns })
    }

    /// Records where each feature column came from (e.g. its position in a
    /// CSV header). Replacement draws for a feature are keyed on this, so
    /// selecting a different subset of columns leaves the draws unchanged.
    pub fn with_source_columns(mut self, source_columns: Vec<usize>) -> Result<Self> {
        if source_columns.len() != self.n_features() {
            return Err(Error::InvalidInput("one source column per feature required".into()));
        }
        self.source_columns = source_columns;
        Ok(self)
    }

    pub fn source_column(&self, i: usize) -> usize {
        self.source_columns[i]
    }

    /// Builds a dataset from row vectors, naming columns `x0`, `x1`, ...
    pub fn from_rows(rows: &[Vec<T>], target: &[T]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput("ragged feature rows".into()));
        }
        let flat: Vec<T> = rows.iter().flatten().copied().collect();
        let features = Array2::from_shape_vec((rows.len(), m), flat)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        let names = (0..m).map(|i| format!("x{i}")).collect();
        Self::new(features, Array1::from(target.to_vec()), names)
    }

    pub fn n_rows(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> ArrayView2<'_, T> {
        self.features.view()
    }

    pub fn target(&self) -> ArrayView1<'_, T> {
        self.target.view()
    }

    pub fn row(&self, j: usize) -> ArrayView1<'_, T> {
        self.features.row(j)
    }

    pub fn column(&self, i: usize) -> Result<ArrayView1<'_, T>> {
        self.check_feature(i)?;
        Ok(self.features.column(i))
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn check_feature(&self, i: usize) -> Result<()> {
        if i >= self.n_features() {
            return Err(Error::Index { index: i, len: self.n_features() });
        }
        Ok(())
    }

    /// Reorders rows; `order[j]` names the source row placed at position `j`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_rows() {
            return Err(Error::InvalidArgument("row order has wrong length".into()));
        }
        let features = self.features.select(ndarray::Axis(0), order);
        let target = self.target.select(ndarray::Axis(0), order);
        Self::new(features, target, self.feature_names.clone())?.with_source_columns(self.source_columns.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn rejects_single_row() {
        let err = Dataset::from_rows(&[vec![1.0]], &[0.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn rejects_duplicate_names() {
        let err = Dataset::new(
            array![[1.0, 2.0], [3.0, 4.0]],
            array![0.0, 1.0],
            vec!["a".into(), "a".into()],
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Dataset::from_rows(&[vec![f64::NAN], vec![1.0]], &[0.0, 1.0]).is_err());
        assert!(Dataset::from_rows(&[vec![0.0], vec![1.0]], &[0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn index_error_for_missing_feature() {
        let d = Dataset::from_rows(&[vec![1.0], vec![2.0]], &[0.0, 1.0]).unwrap();
        assert!(matches!(d.column(1), Err(Error::Index { index: 1, len: 1 })));
    }
}
