//! Reductions of a [`DeltaMatrix`] into the importance estimate and the two
//! sample sequences used for interval construction.

use serde::{Deserialize, Serialize};

use crate::ablation::DeltaMatrix;
use crate::risk::mean;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// Every one of the N·K deltas is a sample.
    Rv,
    /// Each replicate's average over the N rows is a sample.
    Fd,
}

impl Formulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::Rv => "rv",
            Formulation::Fd => "fd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SampleSequence<T> {
    pub values: Vec<T>,
    pub formulation: Formulation,
}

/// Grand mean of all deltas, accumulated replicate by replicate.
pub fn point_estimate<T: Scalar>(deltas: &DeltaMatrix<T>) -> T {
    mean(&flatten(deltas))
}

fn flatten<T: Scalar>(deltas: &DeltaMatrix<T>) -> Vec<T> {
    // column-major: s = k·N + j
    deltas.deltas.t().iter().copied().collect()
}

pub fn rv_samples<T: Scalar>(deltas: &DeltaMatrix<T>) -> SampleSequence<T> {
    SampleSequence { values: flatten(deltas), formulation: Formulation::Rv }
}

/// One sample per replicate. With `K = 1` the sequence has a single value,
/// which interval construction rejects.
pub fn fd_samples<T: Scalar>(deltas: &DeltaMatrix<T>) -> SampleSequence<T> {
    let values = deltas
        .deltas
        .columns()
        .into_iter()
        .map(|col| mean(&col.to_vec()))
        .collect();
    SampleSequence { values, formulation: Formulation::Fd }
}

pub fn samples<T: Scalar>(deltas: &DeltaMatrix<T>, formulation: Formulation) -> SampleSequence<T> {
    match formulation {
        Formulation::Rv => rv_samples(deltas),
        Formulation::Fd => fd_samples(deltas),
    }
}
