//! Command-line front end.
//!
//! `addt fit` runs one or all estimators on a CSV file and prints the text
//! summary; `--output` writes the JSON report and `--plot-dir` the plot-data
//! CSVs. `addt datasets NAME` prints a bundled dataset.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arrhenius::DEFAULT_TARGET_TIME_H;
use crate::dataset::{DegradationDataset, Subset};
use crate::error::{AddtError, Result};
use crate::fixtures;
use crate::mlfit::{fit_ml, MLFit, MlOptions};
use crate::report::{write_plot_data, Metadata, MethodError, Report, SemiSection};
use crate::semifit::{fit_semi, SemiFit, SemiOptions};
use crate::tradls::{fit_ls, LSFit, LsOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "addt",
    version,
    about = "Thermal index estimation from ADDT data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one or all methods to a dataset.
    Fit(FitArgs),
    /// Print a bundled dataset as CSV, or list the names when none is given.
    Datasets { name: Option<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ls,
    Ml,
    Semi,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
    /// CSV file (TempC, TimeH, Response) or the name of a bundled dataset.
    #[arg(long)]
    pub input: PathBuf,
    /// Failure threshold in percent of the initial level (industry practice is often 50).
    #[arg(long, default_value_t = 70.0)]
    pub failure_threshold: f64,
    /// Target time in hours defining the thermal index.
    #[arg(long, default_value_t = DEFAULT_TARGET_TIME_H)]
    pub time_rti: f64,
    #[arg(long, default_value_t = 0.95)]
    pub conf_level: f64,
    /// Include the within-cell correlation in the semiparametric model.
    #[arg(long)]
    pub semi_cor: bool,
    /// Interior spline knots in scaled time, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub knots: Option<Vec<f64>>,
    #[arg(long)]
    pub initial_value: Option<f64>,
    /// Row filter such as `TempC>=250,TimeH<=3000`.
    #[arg(long)]
    pub subset: Option<String>,
    /// Path of the JSON report.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Directory for plot-data CSVs.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
    /// Write the sections that succeeded even when another method fails.
    #[arg(long)]
    pub keep_partial: bool,
    /// Keep time-0 rows at their recorded temperature.
    #[arg(long)]
    pub no_remap: bool,
}

/// What the process should print and return.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(err: &AddtError) -> i32 {
    use AddtError::*;
    match err {
        InvalidArgument(_) | UnknownDataset { .. } => EXIT_USAGE,
        Io { .. }
        | Csv(_)
        | MissingColumn(_)
        | NonNumeric { .. }
        | NonPositiveResponse { .. }
        | NegativeTime { .. }
        | NonPhysicalTemperature(_)
        | TooFewLevels(_)
        | NoInitialValue => EXIT_DATA,
        DegenerateLine { .. }
        | NoCrossing { .. }
        | NoSignChange { .. }
        | NonFinite { .. }
        | RankDeficient(_)
        | NonConvergence { .. }
        | MissingCovariance => EXIT_CONVERGENCE,
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Fit(args) => cmd_fit(&args),
        Command::Datasets { name } => cmd_datasets(name.as_deref()),
    }
}

fn failure(err: &AddtError) -> Outcome {
    Outcome {
        code: exit_code(err),
        stdout: String::new(),
        stderr: format!("error: {err}\n"),
    }
}

pub fn cmd_datasets(name: Option<&str>) -> Outcome {
    match name {
        None => Outcome {
            stdout: fixtures::NAMES.iter().map(|n| format!("{n}\n")).collect(),
            ..Outcome::default()
        },
        Some(name) => match fixtures::csv_text(name) {
            Ok(text) => Outcome {
                stdout: text,
                ..Outcome::default()
            },
            Err(e) => failure(&e),
        },
    }
}

fn check_args(args: &FitArgs) -> Result<()> {
    let bad = |msg: String| Err(AddtError::InvalidArgument(msg));
    if !(args.failure_threshold > 0.0 && args.failure_threshold < 100.0) {
        return bad(format!(
            "--failure-threshold must be in (0, 100), got {}",
            args.failure_threshold
        ));
    }
    if !(args.time_rti > 0.0 && args.time_rti.is_finite()) {
        return bad(format!(
            "--time-rti must be positive, got {}",
            args.time_rti
        ));
    }
    if !(args.conf_level > 0.0 && args.conf_level < 1.0) {
        return bad(format!(
            "--conf-level must be in (0, 1), got {}",
            args.conf_level
        ));
    }
    if let Some(k) = &args.knots {
        if k.is_empty() || k.iter().any(|v| !v.is_finite()) {
            return bad("--knots must be a non-empty list of numbers".into());
        }
    }
    if let Some(v) = args.initial_value {
        if !(v > 0.0 && v.is_finite()) {
            return bad(format!("--initial-value must be positive, got {v}"));
        }
    }
    Ok(())
}

/// Reads `input` as a file, falling back to a bundled dataset name.
pub fn load_input(input: &Path) -> Result<DegradationDataset> {
    if !input.exists() {
        if let Some(name) = input.to_str().filter(|n| fixtures::NAMES.contains(n)) {
            return fixtures::load(name);
        }
    }
    DegradationDataset::load_csv(input)
}

/// Loads, filters and (unless disabled) remaps the input.
pub fn prepare_dataset(args: &FitArgs) -> Result<(DegradationDataset, Vec<String>)> {
    let mut ds = load_input(&args.input)?;
    let mut warnings = Vec::new();
    if let Some(expr) = &args.subset {
        ds = ds.filter(&Subset::parse(expr)?)?;
    }
    if !args.no_remap {
        let (remapped, moved) = ds.remap_time_zero();
        if moved {
            warnings.push(format!(
                "time-0 rows assigned to the lowest stressed level ({} C)",
                remapped.stressed_levels()[0]
            ));
        }
        ds = remapped;
    }
    Ok((ds, warnings))
}

type Fits = (
    Option<Result<LSFit>>,
    Option<Result<MLFit>>,
    Option<Result<SemiFit>>,
);

fn run_methods(ds: &DegradationDataset, args: &FitArgs) -> Fits {
    let want = |m: Method| args.method == m || args.method == Method::All;
    let ls = || {
        want(Method::Ls).then(|| {
            fit_ls(
                ds,
                &LsOptions {
                    threshold_pct: args.failure_threshold,
                    target_time_h: args.time_rti,
                    initial_value: args.initial_value,
                },
            )
        })
    };
    let ml = || {
        want(Method::Ml).then(|| {
            fit_ml(
                ds,
                &MlOptions {
                    threshold_pct: args.failure_threshold,
                    target_time_h: args.time_rti,
                    conf_level: args.conf_level,
                    initial_value: args.initial_value,
                    ..MlOptions::default()
                },
            )
        })
    };
    let semi = || {
        want(Method::Semi).then(|| {
            fit_semi(
                ds,
                &SemiOptions {
                    threshold_pct: args.failure_threshold,
                    target_time_h: args.time_rti,
                    with_rho: args.semi_cor,
                    knots: args.knots.clone(),
                    ..SemiOptions::default()
                },
            )
        })
    };
    let (a, (b, c)) = rayon::join(ls, || rayon::join(ml, semi));
    (a, b, c)
}

fn take<T>(
    name: &str,
    r: Option<Result<T>>,
    errors: &mut Vec<AddtError>,
    method_errors: &mut Vec<MethodError>,
) -> Option<T> {
    match r? {
        Ok(v) => Some(v),
        Err(e) => {
            method_errors.push(MethodError {
                method: name.to_string(),
                message: e.to_string(),
            });
            errors.push(e);
            None
        }
    }
}

/// Runs the requested fits and assembles the report. The second value holds
/// the failures in the order LS, ML, SEMI.
pub fn build_report(args: &FitArgs) -> Result<(Report, DegradationDataset, Vec<AddtError>)> {
    check_args(args)?;
    let (ds, mut warnings) = prepare_dataset(args)?;
    let (ls, ml, semi) = run_methods(&ds, args);
    let mut errors = Vec::new();
    let mut method_errors = Vec::new();
    let ls = take("LS", ls, &mut errors, &mut method_errors);
    let ml = take("ML", ml, &mut errors, &mut method_errors);
    let semi = take("SEMI", semi, &mut errors, &mut method_errors);
    for (tag, ws) in [
        ("LS", ls.as_ref().map(|f| &f.warnings)),
        ("ML", ml.as_ref().map(|f| &f.warnings)),
        ("SEMI", semi.as_ref().map(|f| &f.warnings)),
    ] {
        warnings.extend(ws.into_iter().flatten().map(|w| format!("{tag}: {w}")));
    }
    let semi = semi.map(|f| SemiSection::new(f, &ds)).transpose()?;
    let methods = match args.method {
        Method::Ls => vec!["ls"],
        Method::Ml => vec!["ml"],
        Method::Semi => vec!["semi"],
        Method::All => vec!["ls", "ml", "semi"],
    };
    let report = Report {
        schema_version: crate::report::SCHEMA_VERSION,
        metadata: Metadata {
            input: args.input.display().to_string(),
            n_obs: ds.len(),
            threshold_pct: args.failure_threshold,
            target_time_h: args.time_rti,
            conf_level: args.conf_level,
            methods: methods.into_iter().map(String::from).collect(),
            semi_cor: args.semi_cor,
            knots: args.knots.clone(),
            initial_value: args.initial_value,
            subset: args.subset.clone(),
            time_zero_remapped: !args.no_remap,
        },
        ls,
        ml,
        semi,
        errors: method_errors,
        warnings,
    };
    Ok((report, ds, errors))
}

fn write_outputs(args: &FitArgs, report: &Report, ds: &DegradationDataset) -> Result<()> {
    if let Some(path) = &args.output {
        std::fs::write(path, report.to_json()?).map_err(|source| AddtError::Io {
            path: path.clone(),
            source,
        })?;
    }
    if let Some(dir) = &args.plot_dir {
        write_plot_data(
            dir,
            ds,
            report.ls.as_ref(),
            report.ml.as_ref(),
            report.semi.as_ref().map(|s| &s.fit),
        )?;
    }
    Ok(())
}

pub fn cmd_fit(args: &FitArgs) -> Outcome {
    let (report, ds, errors) = match build_report(args) {
        Ok(v) => v,
        Err(e) => return failure(&e),
    };
    let mut out = Outcome::default();
    for e in &report.errors {
        out.stderr
            .push_str(&format!("error: {}: {}\n", e.method, e.message));
    }
    if let Some(first) = errors.first() {
        out.code = exit_code(first);
        if !args.keep_partial {
            return out;
        }
    }
    if let Err(e) = write_outputs(args, &report, &ds) {
        let f = failure(&e);
        out.stderr.push_str(&f.stderr);
        out.code = f.code;
        return out;
    }
    out.stdout = report.to_text();
    out
}
