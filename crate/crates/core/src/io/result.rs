use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::ablation::AblationMode;
use crate::error::{Error, Result};
use crate::estimator::Formulation;
use crate::loss::LossSpec;
use crate::models::ModelSpec;
use crate::oracle::CoverageReport;
use crate::scalar::Scalar;
use crate::uncertainty::{CiMethod, ImportanceEstimate, VarianceEstimator};

pub const ESTIMATE_CSV_HEADER: &str = "feature,formulation,importance,sem,ci_low,ci_high,level,n_samples,K,seed";
const COVERAGE_CSV_HEADER: &str = "feature,formulation,replicates,hits,coverage,target_level,truth";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulationChoice {
    Rv,
    Fd,
    Both,
}

impl FormulationChoice {
    pub fn formulations(self) -> &'static [Formulation] {
        match self {
            FormulationChoice::Rv => &[Formulation::Rv],
            FormulationChoice::Fd => &[Formulation::Fd],
            FormulationChoice::Both => &[Formulation::Rv, Formulation::Fd],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RunConfig<T> {
    pub data_path: String,
    pub target_column: String,
    pub feature_columns: Option<Vec<String>>,
    pub model: ModelSpec<T>,
    pub loss: LossSpec<T>,
    #[serde(rename = "K")]
    pub k: usize,
    pub mode: AblationMode,
    pub formulation: FormulationChoice,
    pub confidence_level: T,
    pub ci_method: CiMethod,
    pub seed: u64,
    pub variance: VarianceEstimator,
    /// Call the model from one thread at a time. External models are always serial.
    #[serde(default)]
    pub serial: bool,
}

impl<T: Scalar> RunConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.mode != AblationMode::Exact {
            if self.k < 1 {
                return Err(Error::InvalidArgument("K must be at least 1".into()));
            }
            if self.formulation != FormulationChoice::Rv && self.k < 2 {
                return Err(Error::InvalidArgument(
                    "the fd formulation needs K ≥ 2 (one replicate average has no spread)".into(),
                ));
            }
        }
        if !(self.confidence_level > T::zero() && self.confidence_level < T::one()) {
            return Err(Error::InvalidArgument(format!(
                "confidence level must lie in (0, 1), got {}",
                self.confidence_level
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RunResult<T> {
    pub baseline_risk: T,
    /// Sorted by feature index, then formulation (`rv` before `fd`).
    pub estimates: Vec<ImportanceEstimate<T>>,
    pub config_echo: RunConfig<T>,
    pub library_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CoverageResult<T> {
    pub coverage: Vec<CoverageReport<T>>,
    pub config_echo: RunConfig<T>,
    pub library_version: String,
}

fn json<W: Write, V: Serialize>(value: &V, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Serialize(e.to_string()))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn csv_rows<W: Write>(header: &str, rows: impl IntoIterator<Item = Vec<String>>, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(header.split(',')).map_err(|e| Error::Serialize(e.to_string()))?;
    for row in rows {
        w.write_record(&row).map_err(|e| Error::Serialize(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_result<T: Scalar, W: Write>(result: &RunResult<T>, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => json(result, out),
        OutputFormat::Csv => csv_rows(
            ESTIMATE_CSV_HEADER,
            result.estimates.iter().map(|e| {
                vec![
                    e.feature_name.clone(),
                    e.formulation.as_str().to_string(),
                    e.point.to_string(),
                    e.sem.to_string(),
                    e.ci_low.to_string(),
                    e.ci_high.to_string(),
                    e.confidence_level.to_string(),
                    e.n_samples.to_string(),
                    e.k.to_string(),
                    e.seed.to_string(),
                ]
            }),
            out,
        ),
    }
}

pub fn write_coverage<T: Scalar, W: Write>(result: &CoverageResult<T>, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => json(result, out),
        OutputFormat::Csv => {
            csv_rows(
                COVERAGE_CSV_HEADER,
                result.coverage.iter().map(|c| {
                    vec![
                        c.feature_name.clone(),
                        c.formulation.as_str().to_string(),
                        c.replicates.to_string(),
                        c.hits.to_string(),
                        c.coverage.to_string(),
                        c.target_level.to_string(),
                        c.truth.to_string(),
                    ]
                }),
                out,
            )
        }
    }
}
