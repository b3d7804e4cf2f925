use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use ndarray::ScalarOperand;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar the whole library is generic over (`f32` or `f64`).
///
/// `Display` must print the shortest decimal that parses back to the same
/// value, which holds for the primitive float types.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + ScalarOperand
    + NumAssign
    + Sum
    + Display
    + Debug
    + FromStr
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant, panicking only if the type cannot hold it.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("scalar cannot represent constant")
    }

    fn from_usize_lossy(value: usize) -> Self {
        Self::from_usize(value).expect("scalar cannot represent count")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
