use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::scalar::Scalar;

/// k-nearest-neighbour regressor with Euclidean distance. Ties on distance
/// go to the lower training-row index.
#[derive(Debug, Clone)]
pub struct KnnModel<T> {
    k: usize,
    features: Array2<T>,
    target: Array1<T>,
}

pub fn fit_knn<T: Scalar>(data: &Dataset<T>, k: usize) -> Result<KnnModel<T>> {
    if k < 1 || k > data.n_rows() {
        return Err(Error::InvalidArgument(format!("knn k must lie in 1..={}, got {k}", data.n_rows())));
    }
    Ok(KnnModel { k, features: data.features().to_owned(), target: data.target().to_owned() })
}

impl<T: Scalar> KnnModel<T> {
    fn predict_one(&self, query: ArrayView1<'_, T>) -> T {
        let mut order: Vec<(T, usize)> = self
            .features
            .rows()
            .into_iter()
            .enumerate()
            .map(|(idx, row)| {
                let d = row.iter().zip(query).fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b));
                (d, idx)
            })
            .collect();
        order.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances").then(a.1.cmp(&b.1)));
        let mut acc = T::zero();
        for &(_, idx) in &order[..self.k] {
            acc += self.target[idx];
        }
        acc / T::from_usize_lossy(self.k)
    }
}

impl<T: Scalar> Model<T> for KnnModel<T> {
    fn predict_batch(&self, rows: ArrayView2<'_, T>) -> Result<Vec<T>> {
        if rows.ncols() != self.features.ncols() {
            return Err(Error::InvalidInput(format!(
                "knn fitted on {} features, got rows of {}",
                self.features.ncols(),
                rows.ncols()
            )));
        }
        Ok(rows.rows().into_iter().map(|r| self.predict_one(r)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn data() -> Dataset<f64> {
        Dataset::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 3.0], vec![5.0, 5.0]], &[1.0, 2.0, 3.0, 10.0])
            .unwrap()
    }

    #[test]
    fn k_equals_n_gives_mean() {
        let m = fit_knn(&data(), 4).unwrap();
        assert_eq!(m.predict_batch(array![[100.0, -3.0], [0.5, 0.5]].view()).unwrap(), vec![4.0, 4.0]);
    }

    #[test]
    fn training_row_is_its_own_neighbour() {
        let d = data();
        let m = fit_knn(&d, 1).unwrap();
        assert_eq!(m.predict_batch(d.features()).unwrap(), vec![1.0, 2.0, 3.0, 10.0]);
    }

    #[test]
    fn ties_go_to_lower_index() {
        // (0.5, 0) is equidistant from rows 0 and 1
        let m = fit_knn(&data(), 1).unwrap();
        assert_eq!(m.predict_batch(array![[0.5, 0.0]].view()).unwrap(), vec![1.0]);
        let two = fit_knn(&data(), 2).unwrap();
        assert_eq!(two.predict_batch(array![[0.5, 0.0]].view()).unwrap(), vec![1.5]);
    }

    #[test]
    fn k_out_of_range() {
        assert!(matches!(fit_knn(&data(), 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(fit_knn(&data(), 5), Err(Error::InvalidArgument(_))));
    }
}
