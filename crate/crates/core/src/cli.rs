//! Command-line front end: argument and config-file parsing, dispatch to the
//! experiment protocols, CSV output.
//!
//! A config file (`--config path.toml`) is a flat TOML table whose keys are
//! flag names without the leading dashes. Its entries are applied before the
//! command-line flags, so flags win. Unknown keys are rejected like unknown flags.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};
use thiserror::Error;

use crate::approximation::{learning_curve_approx, ApproxConfig, ApproxGrid, GammaSpec};
use crate::data::{load_csv_dataset, GaussianProblem, LabelColumn, Seed};
use crate::experiments::{
    run_benchmark, run_contributions, run_infinite_unlabeled, run_synthetic_curves, BenchmarkConfig,
    ContributionsConfig, InfiniteConfig, LearningCurve, SyntheticCurveConfig,
};
use crate::parallel::Execution;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "PEAKING_OUTPUT_DIR";

pub const CSV_HEADER: &str = "curve_id,n_labeled,n_unlabeled,mean_error,std_error,repetitions";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config file {path}: {reason}")]
    ConfigFile { path: PathBuf, reason: String },
    #[error(transparent)]
    Run(#[from] crate::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage(_) | CliError::ConfigFile { .. } => 2,
            CliError::Run(_) | CliError::Output { .. } => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "peaking",
    version,
    about = "Learning curves of supervised and semi-supervised least squares classifiers"
)]
#[command(args_override_self = true)]
struct Cli {
    /// Flat TOML file with default flag values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// A validated subcommand with every parameter resolved.
#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Supervised, semi-supervised and base learning curves on two Gaussians.
    Curve(CurveArgs),
    /// Change in error from adding two objects, split into covariance and label effects.
    Contributions(ContributionsArgs),
    /// Supervised learner versus the infinite-unlabeled-data limit.
    Infinite(InfiniteArgs),
    /// Resampled learning curves on a CSV dataset.
    Benchmark(BenchmarkArgs),
    /// Closed-form learning-curve approximations.
    Approx(ApproxArgs),
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct OutputArgs {
    /// Output CSV path [default: $PEAKING_OUTPUT_DIR/<subcommand>.csv or ./<subcommand>.csv]
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Run repetitions on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 50)]
    pub p: usize,
    #[arg(long, default_value_t = 4.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 10)]
    pub n_labeled_per_class: usize,
    #[arg(long, default_value_t = 150)]
    pub max_total: usize,
    #[arg(long, default_value_t = 2)]
    pub step: usize,
    #[arg(long, default_value_t = 500)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ContributionsArgs {
    #[arg(long, default_value_t = 50)]
    pub p: usize,
    #[arg(long, default_value_t = 4.0)]
    pub delta: f64,
    /// Largest labeled-set size n on the grid.
    #[arg(long, default_value_t = 100)]
    pub max_total: usize,
    /// Grid spacing; the grid is step, 2·step, ..., so it must be even.
    #[arg(long, default_value_t = 2)]
    pub step: usize,
    #[arg(long, default_value_t = 500)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct InfiniteArgs {
    /// Comma-separated dimensionalities.
    #[arg(long, action = ArgAction::Set, value_delimiter = ',', default_values_t = vec![50, 100, 200])]
    pub p: Vec<usize>,
    /// Comma-separated distances between the class means.
    #[arg(long, action = ArgAction::Set, value_delimiter = ',', default_values_t = vec![2.0, 4.0, 6.0])]
    pub delta: Vec<f64>,
    /// Largest labeled-set size on the grid.
    #[arg(long, default_value_t = 300)]
    pub max_total: usize,
    /// Grid spacing; the grid is step, 2·step, ... up to max-total.
    #[arg(long, default_value_t = 10)]
    pub step: usize,
    #[arg(long, default_value_t = 500)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Label column name, or zero-based index.
    #[arg(long, default_value = "class")]
    pub label_column: String,
    #[arg(long, default_value_t = 100)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 1000)]
    pub test_size: usize,
    /// Largest number of additional objects [default: 100 below 1000 rows, else 1000]
    #[arg(long)]
    pub max_extra: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ApproxArgs {
    #[arg(long, default_value_t = 50)]
    pub p: usize,
    #[arg(long, default_value_t = 4.65)]
    pub delta: f64,
    /// Labeled objects per class for the semi-supervised curve.
    #[arg(long, default_value_t = 5)]
    pub n_labeled_per_class: usize,
    /// Largest total number of objects.
    #[arg(long, default_value_t = 150)]
    pub max_total: usize,
    /// Grid spacing in objects; must be even.
    #[arg(long, default_value_t = 2)]
    pub step: usize,
    /// Constant eigenvalue-estimation term γ (0 disables the penalty).
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Fully resolved run: the subcommand with defaults applied and validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
}

impl RunConfig {
    pub fn subcommand(&self) -> &'static str {
        match self.command {
            Command::Curve(_) => "curve",
            Command::Contributions(_) => "contributions",
            Command::Infinite(_) => "infinite",
            Command::Benchmark(_) => "benchmark",
            Command::Approx(_) => "approx",
        }
    }

    fn out(&self) -> &OutputArgs {
        match &self.command {
            Command::Curve(a) => &a.out,
            Command::Contributions(a) => &a.out,
            Command::Infinite(a) => &a.out,
            Command::Benchmark(a) => &a.out,
            Command::Approx(a) => &a.out,
        }
    }

    pub fn execution(&self) -> Execution {
        if self.out().sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    /// Explicit `--output`, else `$PEAKING_OUTPUT_DIR/<subcommand>.csv`, else the working directory.
    pub fn output_path(&self) -> PathBuf {
        if let Some(p) = &self.out().output {
            return p.clone();
        }
        let file = format!("{}.csv", self.subcommand());
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Path::new(&dir).join(file),
            _ => PathBuf::from(file),
        }
    }

    /// Every parameter as `(flag, value)`, defaults included.
    pub fn parameters(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[String]| v.join(",");
        let mut kv: Vec<(&'static str, String)> = match &self.command {
            Command::Curve(a) => vec![
                ("p", a.p.to_string()),
                ("delta", a.delta.to_string()),
                ("n-labeled-per-class", a.n_labeled_per_class.to_string()),
                ("max-total", a.max_total.to_string()),
                ("step", a.step.to_string()),
                ("repetitions", a.repetitions.to_string()),
                ("seed", a.seed.to_string()),
            ],
            Command::Contributions(a) => vec![
                ("p", a.p.to_string()),
                ("delta", a.delta.to_string()),
                ("max-total", a.max_total.to_string()),
                ("step", a.step.to_string()),
                ("repetitions", a.repetitions.to_string()),
                ("seed", a.seed.to_string()),
            ],
            Command::Infinite(a) => vec![
                (
                    "p",
                    list(&a.p.iter().map(ToString::to_string).collect::<Vec<_>>()),
                ),
                (
                    "delta",
                    list(&a.delta.iter().map(ToString::to_string).collect::<Vec<_>>()),
                ),
                ("max-total", a.max_total.to_string()),
                ("step", a.step.to_string()),
                ("repetitions", a.repetitions.to_string()),
                ("seed", a.seed.to_string()),
            ],
            Command::Benchmark(a) => {
                let mut kv = vec![
                    ("dataset", a.dataset.display().to_string()),
                    ("label-column", a.label_column.clone()),
                    ("repetitions", a.repetitions.to_string()),
                    ("test-size", a.test_size.to_string()),
                ];
                if let Some(m) = a.max_extra {
                    kv.push(("max-extra", m.to_string()));
                }
                kv.push(("seed", a.seed.to_string()));
                kv
            }
            Command::Approx(a) => vec![
                ("p", a.p.to_string()),
                ("delta", a.delta.to_string()),
                ("n-labeled-per-class", a.n_labeled_per_class.to_string()),
                ("max-total", a.max_total.to_string()),
                ("step", a.step.to_string()),
                ("gamma", a.gamma.to_string()),
            ],
        };
        kv.push(("output", self.output_path().display().to_string()));
        if self.out().sequential {
            kv.push(("sequential", "true".into()));
        }
        kv
    }

    /// Command line that reproduces this run.
    pub fn resolved_command_line(&self) -> String {
        let mut s = format!("peaking {}", self.subcommand());
        for (k, v) in self.parameters() {
            if k == "sequential" {
                s.push_str(" --sequential");
            } else {
                let _ = write!(s, " --{k} {v}");
            }
        }
        s
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        let positive = |name: &str, v: usize| {
            if v == 0 {
                usage(format!("--{name} must be at least 1"))
            } else {
                Ok(())
            }
        };
        let delta_ok = |d: f64| {
            if d.is_finite() && d > 0.0 {
                Ok(())
            } else {
                usage(format!("--delta must be positive, got {d}"))
            }
        };
        match &self.command {
            Command::Curve(a) => {
                positive("p", a.p)?;
                delta_ok(a.delta)?;
                positive("n-labeled-per-class", a.n_labeled_per_class)?;
                positive("step", a.step)?;
                positive("repetitions", a.repetitions)?;
                if a.max_total < 2 * a.n_labeled_per_class {
                    return usage(format!(
                        "--max-total ({}) must be at least twice --n-labeled-per-class ({})",
                        a.max_total, a.n_labeled_per_class
                    ));
                }
            }
            Command::Contributions(a) => {
                positive("p", a.p)?;
                delta_ok(a.delta)?;
                positive("repetitions", a.repetitions)?;
                if a.step == 0 || a.step % 2 == 1 {
                    return usage(format!("--step must be a positive even number, got {}", a.step));
                }
                if a.max_total < a.step {
                    return usage("--max-total must be at least --step".into());
                }
            }
            Command::Infinite(a) => {
                positive("repetitions", a.repetitions)?;
                positive("step", a.step)?;
                if a.p.is_empty() || a.p.contains(&0) {
                    return usage("--p must list positive dimensions".into());
                }
                if a.delta.is_empty() {
                    return usage("--delta must list at least one distance".into());
                }
                for &d in &a.delta {
                    delta_ok(d)?;
                }
                if a.step < 2 || a.max_total < a.step {
                    return usage("--step must be at least 2 and --max-total at least --step".into());
                }
            }
            Command::Benchmark(a) => {
                positive("repetitions", a.repetitions)?;
                positive("test-size", a.test_size)?;
                if a.max_extra == Some(0) {
                    return usage("--max-extra must be at least 1".into());
                }
            }
            Command::Approx(a) => {
                positive("p", a.p)?;
                delta_ok(a.delta)?;
                if a.n_labeled_per_class < 2 {
                    return usage("--n-labeled-per-class must be at least 2".into());
                }
                if a.step == 0 || a.step % 2 == 1 {
                    return usage(format!("--step must be a positive even number, got {}", a.step));
                }
                if a.max_total < 2 * a.n_labeled_per_class {
                    return usage("--max-total must be at least twice --n-labeled-per-class".into());
                }
                if !(a.gamma.is_finite() && a.gamma >= 0.0) {
                    return usage(format!("--gamma must be non-negative, got {}", a.gamma));
                }
            }
        }
        Ok(())
    }
}

const SUBCOMMANDS: [&str; 5] = ["curve", "contributions", "infinite", "benchmark", "approx"];

fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

/// Turns a flat TOML table into `--key value` arguments.
pub fn config_file_args(path: &Path) -> Result<Vec<OsString>, CliError> {
    let fail = |reason: String| CliError::ConfigFile {
        path: path.to_path_buf(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| fail(e.message().to_string()))?;
    let mut args = Vec::new();
    for (key, value) in table {
        let flag = format!("--{key}");
        let scalar = |v: &toml::Value| -> Result<String, CliError> {
            match v {
                toml::Value::String(s) => Ok(s.clone()),
                toml::Value::Integer(i) => Ok(i.to_string()),
                toml::Value::Float(f) => Ok(f.to_string()),
                toml::Value::Boolean(b) => Ok(b.to_string()),
                _ => Err(fail(format!("key {key:?}: nested values are not supported"))),
            }
        };
        match &value {
            toml::Value::Boolean(true) => args.push(flag.into()),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                args.push(flag.into());
                args.push(parts.join(",").into());
            }
            v => {
                args.push(flag.into());
                args.push(scalar(v)?.into());
            }
        }
    }
    Ok(args)
}

/// Parses `argv` (program name first). Values from `--config` are applied
/// first and overridden by explicit flags.
pub fn parse_config(argv: Vec<OsString>) -> Result<RunConfig, CliError> {
    let mut argv = argv;
    if let Some(path) = config_path(&argv) {
        let extra = config_file_args(&path)?;
        if let Some(pos) = argv
            .iter()
            .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        {
            argv.splice(pos + 1..pos + 1, extra);
        }
    }
    let cli = Cli::try_parse_from(argv)?;
    let config = RunConfig { command: cli.command };
    config.validate()?;
    Ok(config)
}

fn grid(step: usize, max: usize) -> Vec<usize> {
    (step..=max).step_by(step).collect()
}

/// Runs the configured experiment and returns its curves.
pub fn execute(config: &RunConfig) -> Result<LearningCurve, CliError> {
    let exec = config.execution();
    let curve = match &config.command {
        Command::Curve(a) => run_synthetic_curves(
            &SyntheticCurveConfig {
                problem: GaussianProblem::new(a.p, a.delta)?,
                n_labeled_per_class: a.n_labeled_per_class,
                max_total: a.max_total,
                step: a.step,
                repetitions: a.repetitions,
                seed: Seed::new(a.seed),
            },
            exec,
        )?,
        Command::Contributions(a) => run_contributions(
            &ContributionsConfig {
                problem: GaussianProblem::new(a.p, a.delta)?,
                n_grid: grid(a.step, a.max_total),
                repetitions: a.repetitions,
                seed: Seed::new(a.seed),
            },
            exec,
        )?,
        Command::Infinite(a) => run_infinite_unlabeled(
            &InfiniteConfig {
                p_list: a.p.clone(),
                delta_list: a.delta.clone(),
                n_labeled_grid: grid(a.step, a.max_total),
                repetitions: a.repetitions,
                seed: Seed::new(a.seed),
            },
            exec,
        )?,
        Command::Benchmark(a) => {
            let label: LabelColumn = a.label_column.parse().expect("infallible");
            let data = load_csv_dataset(&a.dataset, &label)?;
            let bench = BenchmarkConfig {
                repetitions: a.repetitions,
                test_size: a.test_size,
                max_extra: a
                    .max_extra
                    .unwrap_or_else(|| BenchmarkConfig::default_max_extra(data.len())),
                seed: Seed::new(a.seed),
            };
            let name = a
                .dataset
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            run_benchmark(&data, &name, &bench, exec)?
        }
        Command::Approx(a) => {
            let gamma = GammaSpec::Constant(a.gamma);
            let half_step = a.step / 2;
            let max_n = a.max_total / 2;
            let sup = learning_curve_approx(&ApproxConfig {
                grid: ApproxGrid::Supervised {
                    n_per_class: grid(half_step, max_n),
                },
                p: a.p,
                delta: a.delta,
                gamma: gamma.clone(),
            })?;
            let semi = learning_curve_approx(&ApproxConfig {
                grid: ApproxGrid::SemiSupervised {
                    n_labeled_per_class: a.n_labeled_per_class,
                    n_total_per_class: (a.n_labeled_per_class..=max_n).step_by(half_step).collect(),
                },
                p: a.p,
                delta: a.delta,
                gamma,
            })?;
            let mut curve = sup;
            curve.config_digest = format!(
                "approx;p={};delta={};n_labeled_per_class={};max_total={};step={};gamma={}",
                a.p, a.delta, a.n_labeled_per_class, a.max_total, a.step, a.gamma
            );
            curve.points.extend(semi.points);
            curve.warnings.extend(semi.warnings);
            curve
        }
    };
    Ok(curve)
}

/// `%.10g`-style rendering: 10 significant digits, trailing zeros trimmed.
pub fn format_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..10).contains(&exp) {
        trim(&format!("{:.*}", (9 - exp) as usize, v))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

/// Writes the CSV body: header, rows sorted by `(curve_id, total n)`,
/// warnings as `#` comments and a final `# config:` line.
pub fn write_csv<W: Write>(curve: &LearningCurve, mut out: W) -> io::Result<()> {
    let mut rows: Vec<_> = curve.points.iter().collect();
    rows.sort_by(|a, b| a.curve_id.cmp(&b.curve_id).then(a.total().cmp(&b.total())));
    writeln!(out, "{CSV_HEADER}")?;
    for p in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            p.curve_id,
            p.n_labeled,
            p.n_unlabeled,
            format_sig10(p.error.mean_error),
            format_sig10(p.error.std_error),
            p.error.repetitions
        )?;
    }
    for w in &curve.warnings {
        writeln!(out, "# warning: {w}")?;
    }
    writeln!(out, "# config: {}", curve.config_digest)?;
    out.flush()
}

pub fn emit_csv(curve: &LearningCurve, path: &Path) -> Result<(), CliError> {
    if curve.points.is_empty() {
        return Err(CliError::Usage("no curve points to write".into()));
    }
    let wrap = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(wrap)?;
    write_csv(curve, io::BufWriter::new(file)).map_err(wrap)
}

/// Parse, echo the resolved configuration to stderr, run, write the CSV.
pub fn run(argv: Vec<OsString>) -> Result<PathBuf, CliError> {
    let config = parse_config(argv)?;
    eprintln!("# resolved: {}", config.resolved_command_line());
    let curve = execute(&config)?;
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }
    let path = config.output_path();
    emit_csv(&curve, &path)?;
    Ok(path)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<OsString> {
        std::iter::once("peaking")
            .chain(s.split_whitespace())
            .map(OsString::from)
            .collect()
    }

    #[test]
    fn curve_flags_parse() {
        let c = parse_config(argv("curve --p 50 --delta 4 --n-labeled-per-class 10 --seed 42")).unwrap();
        let Command::Curve(a) = &c.command else {
            panic!("wrong subcommand")
        };
        assert_eq!((a.p, a.delta, a.n_labeled_per_class, a.seed), (50, 4.0, 10, 42));
        assert_eq!((a.max_total, a.step, a.repetitions), (150, 2, 500));
    }

    #[test]
    fn usage_errors() {
        let e = parse_config(argv("curve --repetitions 0")).unwrap_err();
        assert!(matches!(e, CliError::Usage(_)));
        assert_eq!(e.exit_code(), 2);
        assert!(matches!(
            parse_config(argv("curve --bogus 3")),
            Err(CliError::Clap(_))
        ));
        assert!(matches!(
            parse_config(argv("curve --p notanumber")),
            Err(CliError::Clap(_))
        ));
        assert!(matches!(parse_config(argv("benchmark")), Err(CliError::Clap(_))));
        assert!(matches!(
            parse_config(argv("contributions --step 3")),
            Err(CliError::Usage(_))
        ));
        assert!(parse_config(argv("approx --gamma -1")).is_err());
    }

    #[test]
    fn config_file_then_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "p = 20\ndelta = 2.5\nrepetitions = 7\n").unwrap();
        let cmd = format!("curve --config {} --p 30", path.display());
        let c = parse_config(argv(&cmd)).unwrap();
        let Command::Curve(a) = &c.command else { panic!() };
        assert_eq!((a.p, a.delta, a.repetitions), (30, 2.5, 7));

        std::fs::write(&path, "p = [50, 100]\ndelta = [2, 6.5]\nsequential = true\n").unwrap();
        let cmd = format!("--config {} infinite", path.display());
        let c = parse_config(argv(&cmd)).unwrap();
        let Command::Infinite(a) = &c.command else {
            panic!()
        };
        assert_eq!(a.p, vec![50, 100]);
        assert_eq!(a.delta, vec![2.0, 6.5]);
        assert_eq!(c.execution(), Execution::Sequential);

        std::fs::write(&path, "unknown_key = 1\n").unwrap();
        let cmd = format!("curve --config {}", path.display());
        assert!(matches!(parse_config(argv(&cmd)), Err(CliError::Clap(_))));
        std::fs::write(&path, "p = {a = 1}\n").unwrap();
        assert!(matches!(
            parse_config(argv(&cmd)),
            Err(CliError::ConfigFile { .. })
        ));
    }

    #[test]
    fn resolved_line_round_trips() {
        let c = parse_config(argv("benchmark --dataset x.csv --max-extra 20 --output o.csv")).unwrap();
        let line = c.resolved_command_line();
        assert!(line.starts_with("peaking benchmark --dataset x.csv --label-column class"));
        let again = parse_config(line.split_whitespace().map(OsString::from).collect()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn sig10_formatting() {
        assert_eq!(format_sig10(0.0), "0");
        assert_eq!(format_sig10(0.5), "0.5");
        assert_eq!(format_sig10(0.022750131948179207), "0.02275013195");
        assert_eq!(format_sig10(-0.0012345678912345), "-0.001234567891");
        assert_eq!(format_sig10(1.0e-7 / 3.0), "3.333333333e-8");
        assert_eq!(format_sig10(123.0), "123");
        assert_eq!(format_sig10(2.5e12), "2.5e12");
    }

    #[test]
    fn csv_layout() {
        use crate::evaluation::ErrorEstimate;
        use crate::experiments::CurvePoint;
        let mut curve = LearningCurve::new("x=1".into());
        for (id, n) in [
            ("b", 4),
            ("a", 6),
            ("a", 2),
            ("b", 2),
            ("a", 4),
            ("b", 6),
            ("a", 8),
            ("b", 8),
            ("a", 10),
            ("b", 10),
        ] {
            curve.points.push(CurvePoint {
                curve_id: id.into(),
                n_labeled: n,
                n_unlabeled: 0,
                error: ErrorEstimate {
                    mean_error: 0.25,
                    std_error: 0.01,
                    repetitions: 3,
                },
            });
        }
        let mut buf = Vec::new();
        write_csv(&curve, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 12);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "a,2,0,0.25,0.01,3");
        assert_eq!(lines[5], "a,10,0,0.25,0.01,3");
        assert_eq!(lines[6], "b,2,0,0.25,0.01,3");
        assert_eq!(lines[11], "# config: x=1");
        assert!(!text.contains('\r'));
        assert!(emit_csv(&LearningCurve::default(), Path::new("/tmp/never.csv")).is_err());
    }

    #[test]
    fn unwritable_output() {
        let curve = {
            let mut c = LearningCurve::new("d".into());
            c.points.push(crate::experiments::CurvePoint {
                curve_id: "a".into(),
                n_labeled: 1,
                n_unlabeled: 0,
                error: crate::evaluation::ErrorEstimate::exact(0.1),
            });
            c
        };
        let e = emit_csv(&curve, Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(matches!(e, CliError::Output { .. }));
        assert_eq!(e.exit_code(), 1);
    }
}
