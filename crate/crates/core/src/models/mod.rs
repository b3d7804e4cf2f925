//! Built-in fixture models and the bridge to external model processes.

mod constant;
mod exec;
mod knn;
mod ols;
pub mod protocol;

use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use constant::{fit_constant, ConstantModel};
pub use exec::{exec_model, ExecModel, ExecOptions};
pub use knn::{fit_knn, KnnModel};
pub use ols::{fit_ols, OlsModel};

use crate::dataset::Dataset;
use crate::error::Result;
use crate::model::Model;
use crate::scalar::Scalar;

pub const DEFAULT_BATCH_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Scalar")]
pub enum ModelSpec<T> {
    /// Fixed prediction, or the target mean when `value` is absent.
    Constant { value: Option<T> },
    Ols { ridge_lambda: T },
    Knn { k: usize },
    Exec { command: Vec<String>, serial: bool, batch_timeout_secs: f64 },
}

impl<T: Scalar> ModelSpec<T> {
    /// Fits a built-in model on `data`, or launches an external one.
    pub fn build(&self, data: &Dataset<T>) -> Result<Box<dyn Model<T>>> {
        Ok(match self {
            ModelSpec::Constant { value: Some(v) } => Box::new(ConstantModel::new(*v)),
            ModelSpec::Constant { value: None } => Box::new(fit_constant(data)),
            ModelSpec::Ols { ridge_lambda } => Box::new(fit_ols(data, *ridge_lambda)?),
            ModelSpec::Knn { k } => Box::new(fit_knn(data, *k)?),
            ModelSpec::Exec { command, serial, batch_timeout_secs } => {
                let options = ExecOptions {
                    serial: *serial,
                    batch_timeout: Duration::from_secs_f64(*batch_timeout_secs),
                };
                Box::new(exec_model(command, data.n_features(), options)?)
            }
        })
    }
}
