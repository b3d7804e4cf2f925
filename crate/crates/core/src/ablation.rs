//! Replacement tables, ablated rows and the N×K grid of ablation loss deltas.
//!
//! Flat indexing: value `s = k·N + j` (zero-based) of a table is the
//! replacement used for row `j` in replicate `k`.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::loss::LossSpec;
use crate::model::{predict_checked, Model};
use crate::risk::{fixed_data_risk, pointwise_losses, RiskReport};
use crate::rng::derive_rng;
use crate::scalar::Scalar;

/// How replacement values are drawn from a feature's empirical column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AblationMode {
    /// i.i.d. uniform draws with replacement.
    Resample,
    /// `K` independent shuffles of the column.
    Permute,
    /// Deterministic enumeration: `K = N`, replicate `k` uses row `k`'s value everywhere.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ReplacementTable<T> {
    pub feature_index: usize,
    pub values: Vec<T>,
    pub n_rows: usize,
    pub k: usize,
    pub mode: AblationMode,
    pub seed: u64,
}

impl<T: Scalar> ReplacementTable<T> {
    /// The `N` replacements used by replicate `k`.
    pub fn replicate(&self, k: usize) -> &[T] {
        &self.values[k * self.n_rows..(k + 1) * self.n_rows]
    }

    pub fn get(&self, row: usize, replicate: usize) -> T {
        self.values[replicate * self.n_rows + row]
    }
}

/// Draws the `N·K` replacement values for one feature.
///
/// The generator is seeded from `(seed, source column of the feature)`, see
/// [`crate::rng`].
/// `k` is ignored in exact mode, where it becomes `N`.
pub fn draw_replacement_table<T: Scalar>(
    data: &Dataset<T>,
    feature_index: usize,
    k: usize,
    seed: u64,
    mode: AblationMode,
) -> Result<ReplacementTable<T>> {
    let column = data.column(feature_index)?;
    let n = column.len();
    if mode != AblationMode::Exact && k < 1 {
        return Err(Error::InvalidArgument(format!("K must be at least 1, got {k}")));
    }
    let mut rng = derive_rng(seed, data.source_column(feature_index) as u64);
    let (k, values) = match mode {
        AblationMode::Resample => {
            let values = (0..n * k).map(|_| column[rng.random_range(0..n)]).collect();
            (k, values)
        }
        AblationMode::Permute => {
            let mut values = Vec::with_capacity(n * k);
            for _ in 0..k {
                let mut block = column.to_vec();
                block.shuffle(&mut rng);
                values.extend(block);
            }
            (k, values)
        }
        AblationMode::Exact => {
            let values = column.iter().flat_map(|&z| std::iter::repeat_n(z, n)).collect();
            (n, values)
        }
    };
    Ok(ReplacementTable { feature_index, values, n_rows: n, k, mode, seed })
}

/// Copy of `row` with position `feature_index` set to `z`.
pub fn ablate_row<T: Scalar>(row: ArrayView1<'_, T>, feature_index: usize, z: T) -> Result<Array1<T>> {
    if feature_index >= row.len() {
        return Err(Error::Index { index: feature_index, len: row.len() });
    }
    let mut out = row.to_owned();
    out[feature_index] = z;
    Ok(out)
}

/// Ablation loss deltas `ℓ(ablated) − ℓ(original)`, one row per data point
/// and one column per replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMatrix<T> {
    pub deltas: Array2<T>,
    pub feature_index: usize,
    pub baseline_risk: T,
}

impl<T: Scalar> DeltaMatrix<T> {
    pub fn n_rows(&self) -> usize {
        self.deltas.nrows()
    }

    pub fn k(&self) -> usize {
        self.deltas.ncols()
    }
}

pub fn compute_delta_matrix<T: Scalar, M: Model<T> + ?Sized>(
    model: &M,
    data: &Dataset<T>,
    loss: &LossSpec<T>,
    table: &ReplacementTable<T>,
) -> Result<DeltaMatrix<T>> {
    let baseline = fixed_data_risk(model, data, loss)?;
    compute_delta_matrix_with_baseline(model, data, loss, table, &baseline)
}

/// As [`compute_delta_matrix`], reusing baseline losses computed earlier on
/// the same model, data and loss.
pub fn compute_delta_matrix_with_baseline<T: Scalar, M: Model<T> + ?Sized>(
    model: &M,
    data: &Dataset<T>,
    loss: &LossSpec<T>,
    table: &ReplacementTable<T>,
    baseline: &RiskReport<T>,
) -> Result<DeltaMatrix<T>> {
    let n = data.n_rows();
    data.check_feature(table.feature_index)?;
    if table.n_rows != n || table.values.len() != n * table.k {
        return Err(Error::InvalidArgument(format!(
            "replacement table is {}×{} but dataset has {n} rows",
            table.n_rows, table.k
        )));
    }
    if baseline.per_point_losses.len() != n {
        return Err(Error::InvalidArgument("baseline does not match dataset".into()));
    }

    let replicate = |k: usize| -> Result<Vec<T>> {
        let mut batch = data.features().to_owned();
        batch
            .column_mut(table.feature_index)
            .assign(&ArrayView1::from(table.replicate(k)));
        let predictions = predict_checked(model, batch.view())?;
        let ablated = pointwise_losses(loss, &predictions, data.target().iter().copied())?;
        Ok(ablated
            .iter()
            .zip(&baseline.per_point_losses)
            .map(|(&a, &b)| a - b)
            .collect())
    };

    let columns: Vec<Vec<T>> = if model.is_serial() {
        (0..table.k).map(replicate).collect::<Result<_>>()?
    } else {
        (0..table.k).into_par_iter().map(replicate).collect::<Result<_>>()?
    };

    let mut deltas = Array2::zeros((n, table.k));
    for (mut dst, src) in deltas.axis_iter_mut(Axis(1)).zip(&columns) {
        dst.assign(&ArrayView1::from(src.as_slice()));
    }
    Ok(DeltaMatrix { deltas, feature_index: table.feature_index, baseline_risk: baseline.risk })
}
