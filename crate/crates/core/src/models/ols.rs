use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::scalar::Scalar;

/// Linear model `w·x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsModel<T> {
    pub weights: Array1<T>,
    pub intercept: T,
}

impl<T: Scalar> OlsModel<T> {
    pub fn new(weights: Array1<T>, intercept: T) -> Self {
        Self { weights, intercept }
    }
}

impl<T: Scalar> Model<T> for OlsModel<T> {
    fn predict_batch(&self, rows: ArrayView2<'_, T>) -> Result<Vec<T>> {
        if rows.ncols() != self.weights.len() {
            return Err(Error::InvalidInput(format!(
                "linear model has {} weights, got rows of {}",
                self.weights.len(),
                rows.ncols()
            )));
        }
        Ok(rows.rows().into_iter().map(|r| r.dot(&self.weights) + self.intercept).collect())
    }
}

/// Least squares with an unpenalized intercept, solving
/// `(XcᵀXc + λI) w = Xcᵀ yc` on centered data and recovering `b = ȳ − w·x̄`.
pub fn fit_ols<T: Scalar>(data: &Dataset<T>, ridge_lambda: T) -> Result<OlsModel<T>> {
    if ridge_lambda < T::zero() || !ridge_lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("ridge_lambda must be ≥ 0, got {ridge_lambda}")));
    }
    let x = data.features();
    let y = data.target();
    let x_mean = x.mean_axis(Axis(0)).expect("at least two rows");
    let y_mean = y.mean().expect("at least two rows");
    let xc = &x - &x_mean.view().insert_axis(Axis(0));
    let yc = &y - y_mean;

    let mut gram = xc.t().dot(&xc);
    for d in gram.diag_mut() {
        *d += ridge_lambda;
    }
    let rhs = xc.t().dot(&yc);
    let weights = cholesky_solve(gram, rhs).map_err(|_| {
        Error::SingularFit(if ridge_lambda > T::zero() {
            "normal matrix is numerically singular".into()
        } else {
            "normal matrix is singular (constant or collinear features); retry with ridge_lambda > 0".into()
        })
    })?;
    let intercept = y_mean - weights.dot(&x_mean);
    Ok(OlsModel { weights, intercept })
}

/// Solves `A v = rhs` for symmetric positive definite `A`.
fn cholesky_solve<T: Scalar>(mut a: Array2<T>, rhs: Array1<T>) -> std::result::Result<Array1<T>, ()> {
    let n = a.nrows();
    let scale = a.diag().iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let tol = T::epsilon() * T::from_usize_lossy(n.max(1) * 16) * scale;
    for j in 0..n {
        let mut d = a[[j, j]];
        for k in 0..j {
            d -= a[[j, k]] * a[[j, k]];
        }
        if d.is_nan() || d <= tol {
            return Err(());
        }
        let d = d.sqrt();
        a[[j, j]] = d;
        for i in j + 1..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= a[[i, k]] * a[[j, k]];
            }
            a[[i, j]] = s / d;
        }
    }
    let mut v = rhs;
    for i in 0..n {
        let mut s = v[i];
        for k in 0..i {
            s -= a[[i, k]] * v[k];
        }
        v[i] = s / a[[i, i]];
    }
    for i in (0..n).rev() {
        let mut s = v[i];
        for k in i + 1..n {
            s -= a[[k, i]] * v[k];
        }
        v[i] = s / a[[i, i]];
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::LossSpec;
    use crate::risk::fixed_data_risk;

    #[test]
    fn recovers_exact_line() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.5 - 1.0).collect();
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 2.0 * x + 1.0).collect();
        let data = Dataset::from_rows(&rows, &ys).unwrap();
        let m = fit_ols(&data, 0.0).unwrap();
        assert!((m.weights[0] - 2.0).abs() < 1e-8);
        assert!((m.intercept - 1.0).abs() < 1e-8);
        assert!(fixed_data_risk(&m, &data, &LossSpec::squared()).unwrap().risk < 1e-16);
    }

    #[test]
    fn constant_features_with_ridge_predict_mean() {
        let data = Dataset::from_rows(&[vec![1.0, 5.0], vec![1.0, 5.0], vec![1.0, 5.0]], &[1.0, 2.0, 6.0]).unwrap();
        let m = fit_ols(&data, 0.1).unwrap();
        assert_eq!(m.weights.to_vec(), vec![0.0, 0.0]);
        assert_eq!(m.predict_batch(data.features()).unwrap(), vec![3.0; 3]);
    }

    #[test]
    fn singular_without_ridge() {
        let data = Dataset::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]], &[1.0, 2.0, 3.0]).unwrap();
        let err = fit_ols(&data, 0.0).unwrap_err();
        assert!(matches!(err, Error::SingularFit(_)));
        assert!(err.to_string().contains("ridge_lambda > 0"));
    }

    #[test]
    fn orthogonal_design_ignores_unrelated_feature() {
        // ±1 factorial design: columns are centered and mutually orthogonal
        let mut rows = Vec::new();
        let mut ys = Vec::new();
        for a in [-1.0, 1.0] {
            for b in [-1.0, 1.0] {
                for c in [-1.0, 1.0] {
                    rows.push(vec![a, b, c]);
                    ys.push(3.0 * a - 0.5 * c + 4.0);
                }
            }
        }
        let data: Dataset<f64> = Dataset::from_rows(&rows, &ys).unwrap();
        let m = fit_ols(&data, 0.0).unwrap();
        assert!(m.weights[1].abs() < 1e-8);
        assert!((m.weights[0] - 3.0).abs() < 1e-8);
        assert!((m.weights[2] + 0.5).abs() < 1e-8);
    }

    #[test]
    fn duplicated_column_with_ridge_is_finite() {
        let rows: Vec<Vec<f64>> = (0..8).map(|j| vec![j as f64, j as f64, (j % 3) as f64]).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r[0] - r[2]).collect();
        let data = Dataset::from_rows(&rows, &ys).unwrap();
        let m = fit_ols(&data, 1e-3).unwrap();
        assert!(m.weights.iter().all(|w| w.is_finite()));
        assert!((m.weights[0] - m.weights[1]).abs() < 1e-9);
    }

    #[test]
    fn rejects_negative_lambda() {
        let data = Dataset::from_rows(&[vec![0.0], vec![1.0]], &[0.0, 1.0]).unwrap();
        assert!(matches!(fit_ols(&data, -1.0), Err(Error::InvalidArgument(_))));
    }
}
