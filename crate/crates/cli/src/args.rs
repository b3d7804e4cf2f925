use std::path::PathBuf;

use ablate_core::io::{FormulationChoice, OutputFormat, RunConfig};
use ablate_core::models::{ModelSpec, DEFAULT_BATCH_TIMEOUT};
use ablate_core::{AblationMode, CiMethod, Error, LossKind, LossSpec, VarianceEstimator};
use clap::Parser;

#[derive(Debug, Parser)]
#[command(name = "ablate-ci", version, about = "Randomized-ablation feature importance with confidence intervals")]
pub struct Args {
    /// CSV file with a header row
    #[arg(long)]
    pub data: PathBuf,

    /// Name of the target column
    #[arg(long)]
    pub target: String,

    /// Comma-separated feature columns (default: every non-target column)
    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<String>>,

    /// builtin:constant[:v=<x>] | builtin:ols[:lambda=<x>] | builtin:knn[:k=<n>] | exec:<command>
    #[arg(long, default_value = "builtin:ols")]
    pub model: String,

    /// squared | absolute | zero_one[:t=<x>] | log_loss[:eps=<x>]
    #[arg(long, default_value = "squared")]
    pub loss: String,

    /// Replicates per feature (ignored with --mode exact, where K = N)
    #[arg(long = "K", default_value_t = 30)]
    pub k: usize,

    /// resample | permute | exact
    #[arg(long, default_value = "resample")]
    pub mode: String,

    /// rv | fd | both
    #[arg(long, default_value = "both")]
    pub formulation: String,

    /// Confidence level in (0, 1)
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    /// t | normal
    #[arg(long = "ci-method", default_value = "t")]
    pub ci_method: String,

    /// mle (divide by n) | unbiased (divide by n − 1)
    #[arg(long, default_value = "mle")]
    pub variance: String,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// json | csv
    #[arg(long, default_value = "json", value_parser = parse_format)]
    pub format: OutputFormat,

    /// Run a coverage simulation with this many replicates instead
    #[arg(long)]
    pub coverage: Option<usize>,

    /// Call the model from one thread at a time
    #[arg(long)]
    pub serial: bool,

    /// Seconds to wait for an external model's reply to one batch
    #[arg(long = "batch-timeout", default_value_t = DEFAULT_BATCH_TIMEOUT.as_secs_f64())]
    pub batch_timeout: f64,
}

fn invalid(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        other => Err(format!("unknown format `{other}` (json|csv)")),
    }
}

/// Splits `name:key=value` into the name and its optional parameter.
fn split_param<'a>(spec: &'a str, key: &str) -> Result<(&'a str, Option<&'a str>), Error> {
    match spec.split_once(':') {
        None => Ok((spec, None)),
        Some((name, param)) => {
            let value = param
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| invalid(format!("`{spec}`: expected `{name}:{key}=<value>`")))?;
            Ok((name, Some(value)))
        }
    }
}

fn number<V: std::str::FromStr>(spec: &str, raw: &str) -> Result<V, Error> {
    raw.parse().map_err(|_| invalid(format!("`{spec}`: cannot parse `{raw}`")))
}

pub fn parse_model(spec: &str, serial: bool, batch_timeout_secs: f64) -> Result<ModelSpec<f64>, Error> {
    if let Some(command) = spec.strip_prefix("exec:") {
        let command: Vec<String> = command.split_whitespace().map(str::to_owned).collect();
        if command.is_empty() {
            return Err(invalid("exec: needs a command".into()));
        }
        if !(batch_timeout_secs > 0.0 && batch_timeout_secs.is_finite()) {
            return Err(invalid(format!("--batch-timeout must be positive, got {batch_timeout_secs}")));
        }
        // one child process, so never more than one batch in flight
        let _ = serial;
        return Ok(ModelSpec::Exec { command, serial: true, batch_timeout_secs });
    }
    let builtin = spec
        .strip_prefix("builtin:")
        .ok_or_else(|| invalid(format!("unknown model `{spec}` (builtin:... or exec:...)")))?;
    let kind = builtin.split(':').next().unwrap_or_default();
    match kind {
        "constant" => {
            let (_, v) = split_param(builtin, "v")?;
            Ok(ModelSpec::Constant { value: v.map(|v| number(spec, v)).transpose()? })
        }
        "ols" => {
            let (_, lambda) = split_param(builtin, "lambda")?;
            Ok(ModelSpec::Ols { ridge_lambda: lambda.map(|v| number(spec, v)).transpose()?.unwrap_or(0.0) })
        }
        "knn" => {
            let (_, k) = split_param(builtin, "k")?;
            Ok(ModelSpec::Knn { k: k.map(|v| number(spec, v)).transpose()?.unwrap_or(5) })
        }
        other => Err(invalid(format!("unknown builtin model `{other}` (constant|ols|knn)"))),
    }
}

pub fn parse_loss(spec: &str) -> Result<LossSpec<f64>, Error> {
    let name = spec.split(':').next().unwrap_or_default();
    match name {
        "squared" | "absolute" if spec != name => Err(invalid(format!("`{name}` takes no parameters"))),
        "squared" => Ok(LossSpec::squared()),
        "absolute" => Ok(LossSpec::absolute()),
        "zero_one" => {
            let (_, t) = split_param(spec, "t")?;
            Ok(LossSpec::zero_one(t.map(|t| number(spec, t)).transpose()?.unwrap_or(0.5)))
        }
        "log_loss" => {
            let (_, eps) = split_param(spec, "eps")?;
            let mut loss = LossSpec::new(LossKind::LogLoss);
            if let Some(eps) = eps {
                let eps: f64 = number(spec, eps)?;
                if !(eps > 0.0 && eps < 0.5) {
                    return Err(invalid(format!("log_loss eps must lie in (0, 0.5), got {eps}")));
                }
                loss.epsilon = eps;
            }
            Ok(loss)
        }
        other => Err(invalid(format!("unknown loss `{other}` (squared|absolute|zero_one|log_loss)"))),
    }
}

fn parse_mode(s: &str) -> Result<AblationMode, Error> {
    match s {
        "resample" => Ok(AblationMode::Resample),
        "permute" => Ok(AblationMode::Permute),
        "exact" => Ok(AblationMode::Exact),
        other => Err(invalid(format!("unknown mode `{other}` (resample|permute|exact)"))),
    }
}

fn parse_formulation(s: &str) -> Result<FormulationChoice, Error> {
    match s {
        "rv" => Ok(FormulationChoice::Rv),
        "fd" => Ok(FormulationChoice::Fd),
        "both" => Ok(FormulationChoice::Both),
        other => Err(invalid(format!("unknown formulation `{other}` (rv|fd|both)"))),
    }
}

fn parse_ci_method(s: &str) -> Result<CiMethod, Error> {
    match s {
        "t" => Ok(CiMethod::StudentT),
        "normal" => Ok(CiMethod::Normal),
        other => Err(invalid(format!("unknown ci method `{other}` (t|normal)"))),
    }
}

fn parse_variance(s: &str) -> Result<VarianceEstimator, Error> {
    match s {
        "mle" => Ok(VarianceEstimator::Mle),
        "unbiased" => Ok(VarianceEstimator::Unbiased),
        other => Err(invalid(format!("unknown variance `{other}` (mle|unbiased)"))),
    }
}

impl Args {
    pub fn to_config(&self) -> Result<RunConfig<f64>, Error> {
        Ok(RunConfig {
            data_path: self.data.display().to_string(),
            target_column: self.target.clone(),
            feature_columns: self.features.clone(),
            model: parse_model(&self.model, self.serial, self.batch_timeout)?,
            loss: parse_loss(&self.loss)?,
            k: self.k,
            mode: parse_mode(&self.mode)?,
            formulation: parse_formulation(&self.formulation)?,
            confidence_level: self.level,
            ci_method: parse_ci_method(&self.ci_method)?,
            seed: self.seed,
            variance: parse_variance(&self.variance)?,
            serial: self.serial,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_specs() {
        assert_eq!(parse_model("builtin:constant", false, 60.0).unwrap(), ModelSpec::Constant { value: None });
        assert_eq!(
            parse_model("builtin:constant:v=2.5", false, 60.0).unwrap(),
            ModelSpec::Constant { value: Some(2.5) }
        );
        assert_eq!(parse_model("builtin:ols", false, 60.0).unwrap(), ModelSpec::Ols { ridge_lambda: 0.0 });
        assert_eq!(parse_model("builtin:ols:lambda=0.1", false, 60.0).unwrap(), ModelSpec::Ols { ridge_lambda: 0.1 });
        assert_eq!(parse_model("builtin:knn", false, 60.0).unwrap(), ModelSpec::Knn { k: 5 });
        assert_eq!(parse_model("builtin:knn:k=3", false, 60.0).unwrap(), ModelSpec::Knn { k: 3 });
        assert_eq!(
            parse_model("exec:python3 adapter.py model.json", false, 5.0).unwrap(),
            ModelSpec::Exec {
                command: vec!["python3".into(), "adapter.py".into(), "model.json".into()],
                serial: true,
                batch_timeout_secs: 5.0
            }
        );
        for bad in ["ols", "builtin:forest", "builtin:knn:k=x", "builtin:ols:alpha=1", "exec:", "exec:  "] {
            assert!(parse_model(bad, false, 60.0).is_err(), "{bad}");
        }
    }

    #[test]
    fn loss_specs() {
        assert_eq!(parse_loss("squared").unwrap(), LossSpec::squared());
        assert_eq!(parse_loss("zero_one").unwrap(), LossSpec::zero_one(0.5));
        assert_eq!(parse_loss("zero_one:t=0.3").unwrap(), LossSpec::zero_one(0.3));
        assert_eq!(parse_loss("log_loss").unwrap(), LossSpec::log_loss());
        assert_eq!(parse_loss("log_loss:eps=1e-6").unwrap().epsilon, 1e-6);
        for bad in ["hinge", "squared:t=1", "zero_one:x=1", "log_loss:eps=0.7"] {
            assert!(parse_loss(bad).is_err(), "{bad}");
        }
    }
}
