//! Command-line front end: `run`, `estimate` and `validate`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 I/O failure,
//! 3 statistical or estimator failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{
    backdoor_ate, dml_estimate, erm_predictor, irm_fit, iv_estimate, regression_effect,
    CausalEstimate, DmlConfig, IrmConfig,
};
use crate::experiments::{default_plan, run_demo, write_long_csv, DemoReport};
use crate::scm::{Dataset, RngHandle, Role};
use crate::validate::{
    fisher_z_test, invariance_test, CiTestResult, InvarianceReport, DEFAULT_INVARIANCE_THRESHOLD,
};

pub const SCHEMA_VERSION: &str = "1";
pub const SEED_ENV_VAR: &str = "CAUSALAB_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "causalab",
    version,
    about = "Causal estimation demos and tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one of the four demonstrations and write a long-format table.
    Run(RunArgs),
    /// Estimate a treatment effect from a CSV file.
    Estimate(EstimateArgs),
    /// Conditional-independence and invariance checks on a CSV file.
    #[command(subcommand)]
    Validate(ValidateCommand),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    demo: u8,
    /// Override the demo's replication count.
    #[arg(long)]
    reps: Option<u64>,
    /// Base seed; defaults to $CAUSALAB_SEED, else 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for replications (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: EstimateMethod,
    #[arg(long)]
    treatment: String,
    #[arg(long)]
    outcome: String,
    #[arg(long, value_delimiter = ',')]
    covariates: Vec<String>,
    #[arg(long)]
    instrument: Option<String>,
    /// Polynomial degree of the DML nuisance fits.
    #[arg(long)]
    degree: Option<usize>,
    /// Cross-fitting folds for DML.
    #[arg(long)]
    folds: Option<usize>,
    /// Strata for backdoor adjustment of a continuous covariate.
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ValidateCommand {
    /// Fisher-z partial-correlation test of X ⫫ Y | cond.
    Ci(CiArgs),
    /// Intervene on one feature of a fitted model and measure prediction change.
    Invariance(InvarianceArgs),
}

#[derive(Debug, Args)]
struct CiArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long, value_delimiter = ',')]
    cond: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InvarianceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    feature: String,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    values: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_INVARIANCE_THRESHOLD)]
    threshold: f64,
    /// Model features; the model is refitted on the input data.
    #[arg(long, value_delimiter = ',', required = true)]
    features: Vec<String>,
    #[arg(long)]
    outcome: String,
    /// Fit the model by invariant risk minimisation with this penalty weight.
    #[arg(long, requires = "env")]
    lambda: Option<f64>,
    /// Environment-label column used with --lambda.
    #[arg(long, requires = "lambda")]
    env: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    Ols,
    Backdoor,
    Iv,
    Dml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Run,
    Estimate,
    Validate,
}

/// Echo of the effective configuration, stored in every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub demo_id: Option<u8>,
    pub reps: Option<u64>,
    pub seed: u64,
    pub input_path: Option<String>,
    pub output_path: Option<String>,
    pub format: Format,
    pub method: Option<String>,
    pub treatment: Option<String>,
    pub outcome: Option<String>,
    pub covariates: Vec<String>,
    pub instrument: Option<String>,
    pub degree: Option<usize>,
    pub folds: Option<usize>,
    pub lambda: Option<f64>,
    pub bins: Option<usize>,
    pub threshold: Option<f64>,
}

impl RunConfig {
    fn new(command: CommandKind, seed: u64) -> Self {
        Self {
            command,
            demo_id: None,
            reps: None,
            seed,
            input_path: None,
            output_path: None,
            format: Format::Json,
            method: None,
            treatment: None,
            outcome: None,
            covariates: Vec::new(),
            instrument: None,
            degree: None,
            folds: None,
            lambda: None,
            bins: None,
            threshold: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Results {
    Demo(DemoReport),
    Estimate(CausalEstimate),
    CiTest(CiTestResult),
    Invariance(InvarianceReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub schema_version: String,
    pub config: RunConfig,
    pub results: Results,
}

impl ReportFile {
    pub fn new(config: RunConfig, results: Results) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            config,
            results,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Parses a report, rejecting unknown fields and other schema versions.
    pub fn from_json(s: &str) -> Result<Self> {
        let report: ReportFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {:?}",
                report.schema_version
            )));
        }
        Ok(report)
    }
}

/// Resolves the seed: explicit flag, then `$CAUSALAB_SEED`, then 42.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::config(format!("{SEED_ENV_VAR}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io("<stdout>", e));
    };
    let shown = path.display().to_string();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(&shown, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(&shown, e))?;
    tmp.persist(path).map_err(|e| Error::io(&shown, e.error))?;
    Ok(())
}

fn read_input(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Dataset::read_csv(std::io::BufReader::new(file))
}

fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

/// Runs a demonstration and renders it in the requested format.
pub fn render_run(
    demo: u8,
    reps: Option<u64>,
    seed: u64,
    format: Format,
    threads: usize,
) -> Result<Vec<u8>> {
    let mut plan = default_plan(demo, seed)?;
    if let Some(r) = reps {
        plan.replications = r;
    }
    plan.validate()?;
    let report = if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::config(format!("cannot build thread pool: {e}")))?
            .install(|| run_demo(demo, &plan))?
    } else {
        run_demo(demo, &plan)?
    };
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_long_csv(&report.long_rows(), &mut buf)?;
            Ok(buf)
        }
        Format::Json => {
            let mut cfg = RunConfig::new(CommandKind::Run, seed);
            cfg.demo_id = Some(demo);
            cfg.reps = Some(plan.replications);
            cfg.format = format;
            Ok(ReportFile::new(cfg, Results::Demo(report))
                .to_json()?
                .into_bytes())
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let bytes = render_run(args.demo, args.reps, seed, args.format, args.threads)?;
    write_output(args.out.as_deref(), &bytes)
}

fn cmd_estimate(args: EstimateArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let mut data = read_input(&args.input)?;
    data.column(&args.treatment)?;
    data.column(&args.outcome)?;
    for c in &args.covariates {
        data.column(c)?;
    }
    let estimate = match args.method {
        EstimateMethod::Ols => {
            regression_effect(&data, &args.treatment, &args.outcome, &args.covariates)?
        }
        EstimateMethod::Backdoor => {
            let [z] = args.covariates.as_slice() else {
                return Err(Error::config(
                    "backdoor needs exactly one --covariates column",
                ));
            };
            backdoor_ate(&data, &args.treatment, &args.outcome, z, args.bins)?
        }
        EstimateMethod::Iv => {
            let z = args
                .instrument
                .as_deref()
                .ok_or_else(|| Error::config("iv needs --instrument"))?;
            iv_estimate(
                data.column(z)?,
                data.column(&args.treatment)?,
                data.column(&args.outcome)?,
            )?
        }
        EstimateMethod::Dml => {
            let mut cfg = DmlConfig::default();
            if let Some(d) = args.degree {
                cfg.poly_degree = d;
            }
            if let Some(k) = args.folds {
                cfg.n_folds = k;
            }
            data.set_role(&args.treatment, Role::Treatment)?;
            data.set_role(&args.outcome, Role::Outcome)?;
            for c in &args.covariates {
                data.set_role(c, Role::Covariate)?;
            }
            dml_estimate(&data, &cfg, RngHandle::new(seed, 0))?
        }
    };
    let mut cfg = RunConfig::new(CommandKind::Estimate, seed);
    cfg.input_path = Some(args.input.display().to_string());
    cfg.output_path = path_string(&args.out);
    cfg.method = Some(format!("{:?}", args.method).to_lowercase());
    cfg.treatment = Some(args.treatment);
    cfg.outcome = Some(args.outcome);
    cfg.covariates = args.covariates;
    cfg.instrument = args.instrument;
    cfg.degree = args.degree;
    cfg.folds = args.folds;
    cfg.bins = (args.method == EstimateMethod::Backdoor).then_some(args.bins);
    let json = ReportFile::new(cfg, Results::Estimate(estimate)).to_json()?;
    write_output(args.out.as_deref(), json.as_bytes())
}

fn cmd_ci(args: CiArgs) -> Result<()> {
    let data = read_input(&args.input)?;
    let result = fisher_z_test(&data, &args.x, &args.y, &args.cond)?;
    let mut cfg = RunConfig::new(CommandKind::Validate, resolve_seed(None)?);
    cfg.input_path = Some(args.input.display().to_string());
    cfg.output_path = path_string(&args.out);
    cfg.method = Some("fisher_z".into());
    cfg.treatment = Some(args.x);
    cfg.outcome = Some(args.y);
    cfg.covariates = args.cond;
    let json = ReportFile::new(cfg, Results::CiTest(result)).to_json()?;
    write_output(args.out.as_deref(), json.as_bytes())
}

fn cmd_invariance(args: InvarianceArgs) -> Result<()> {
    let mut data = read_input(&args.input)?;
    data.set_role(&args.outcome, Role::Outcome)?;
    let fit = match (args.lambda, &args.env) {
        (Some(lambda), Some(env_col)) => {
            let labels = data.column(env_col)?.to_vec();
            let mut levels: Vec<f64> = labels.clone();
            levels.sort_by(f64::total_cmp);
            levels.dedup();
            let envs: Vec<Dataset> = levels
                .iter()
                .map(|&lvl| {
                    let rows: Vec<usize> =
                        (0..labels.len()).filter(|&i| labels[i] == lvl).collect();
                    data.select_rows(&rows)
                })
                .collect();
            let cfg = IrmConfig {
                penalty_weight: lambda,
                ..IrmConfig::default()
            };
            irm_fit(&envs, &args.features, &cfg)?.fit
        }
        _ => erm_predictor(&data, &args.features)?,
    };
    let report = invariance_test(&fit, &data, &args.feature, &args.values, args.threshold)?;
    let mut cfg = RunConfig::new(CommandKind::Validate, resolve_seed(None)?);
    cfg.input_path = Some(args.input.display().to_string());
    cfg.output_path = path_string(&args.out);
    cfg.method = Some(if args.lambda.is_some() { "irm" } else { "erm" }.into());
    cfg.outcome = Some(args.outcome);
    cfg.covariates = args.features;
    cfg.lambda = args.lambda;
    cfg.threshold = Some(args.threshold);
    let json = ReportFile::new(cfg, Results::Invariance(report)).to_json()?;
    write_output(args.out.as_deref(), json.as_bytes())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code; messages go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Validate(ValidateCommand::Ci(a)) => cmd_ci(a),
        Command::Validate(ValidateCommand::Invariance(a)) => cmd_invariance(a),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 1 {
                eprintln!("run `causalab --help` for usage");
            }
            e.exit_code()
        }
    }
}
