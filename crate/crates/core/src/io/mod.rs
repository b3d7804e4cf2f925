//! CSV ingestion, run configuration and result serialization.

mod data;
mod result;

pub use data::{load_csv, write_dataset_csv};
pub use result::{
    write_coverage, write_result, CoverageResult, FormulationChoice, OutputFormat, RunConfig, RunResult,
    ESTIMATE_CSV_HEADER,
};
