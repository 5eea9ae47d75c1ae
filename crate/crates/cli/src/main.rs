//! `prodsurf` — curvature and substitution reports for production functions.

mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use prodsurf::json::family_from_json;
use prodsurf::{build_family, FunctionSpec, SampleBox, SampleGrid, TolerancePolicy};
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(name = "prodsurf", version, about = "Curvature and substitution analysis of production functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-point curvature and economic indicators over a grid.
    Analyze(Run),
    /// Evaluate every curvature / substitution predicate over a grid.
    Classify(Run),
    /// Run the built-in reference fixtures; exit 1 if any expectation fails.
    Verify(Run),
}

#[derive(Args)]
struct Run {
    /// Spec document: a file path, `-` for stdin, or inline JSON.
    #[arg(long, conflicts_with = "family")]
    spec: Option<String>,
    /// Catalog family, e.g. CobbDouglas, ACMS, Spillman, Transcendental.
    #[arg(long, requires = "params")]
    family: Option<String>,
    /// Family parameters `key=value,...`; list values are colon-separated (`k=0.4:0.6`).
    #[arg(long)]
    params: Option<String>,
    /// Sample box `lo:hi[,lo:hi...]`; a single interval applies to every axis.
    #[arg(long = "box")]
    sample_box: Option<String>,
    #[arg(long)]
    points_per_axis: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Absolute and relative zero threshold.
    #[arg(long)]
    tol_zero: Option<f64>,
    /// Relative spread accepted as constant.
    #[arg(long)]
    tol_const: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Exit status classes.
enum Failure {
    Input(anyhow::Error),
    Domain(prodsurf::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

/// Evaluation errors exit 3; anything else about the request exits 2.
fn lib_failure(e: prodsurf::Error) -> Failure {
    if e.is_evaluation_error() {
        Failure::Domain(e)
    } else {
        Failure::Input(e.into())
    }
}

fn read_spec(src: &str) -> anyhow::Result<FunctionSpec> {
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else if src == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading spec from stdin")?;
        s
    } else {
        fs::read_to_string(src).with_context(|| format!("reading spec file {src}"))?
    };
    Ok(FunctionSpec::from_json_str(&text)?)
}

/// `A=1,k=0.4:0.6` → `{"A": 1, "k": [0.4, 0.6]}`.
fn parse_params(s: &str) -> anyhow::Result<Value> {
    let num = |v: &str| -> anyhow::Result<Value> {
        let x: f64 = v.trim().parse().with_context(|| format!("bad number {v:?} in --params"))?;
        Ok(Value::String(prodsurf::json::format_f64(x)))
    };
    let mut m = Map::new();
    for item in s.split(',').filter(|t| !t.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| anyhow!("--params item {item:?} is not key=value"))?;
        let value = if v.contains(':') {
            Value::Array(v.split(':').map(num).collect::<anyhow::Result<_>>()?)
        } else {
            num(v)?
        };
        m.insert(k.trim().to_string(), value);
    }
    Ok(Value::Object(m))
}

fn resolve_spec(run: &Run) -> anyhow::Result<FunctionSpec> {
    match (&run.spec, &run.family) {
        (Some(src), _) => read_spec(src),
        (None, Some(name)) => {
            let params = parse_params(run.params.as_deref().unwrap_or(""))?;
            Ok(build_family(family_from_json(name, &params)?)?)
        }
        (None, None) => bail!("a function is required: pass --spec or --family/--params"),
    }
}

fn parse_box(s: &str, n: usize) -> anyhow::Result<SampleBox> {
    let intervals = s
        .split(',')
        .map(|iv| {
            let (lo, hi) = iv.split_once(':').ok_or_else(|| anyhow!("box interval {iv:?} is not lo:hi"))?;
            Ok((lo.trim().parse::<f64>()?, hi.trim().parse::<f64>()?))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let bounds = match intervals.len() {
        1 => vec![intervals[0]; n],
        k if k == n => intervals,
        k => bail!("--box has {k} intervals but the function has {n} inputs"),
    };
    Ok(SampleBox::new(bounds)?)
}

fn grid_for(run: &Run, n: usize) -> anyhow::Result<SampleGrid> {
    let default = SampleGrid::default_for(n);
    let sample_box = match &run.sample_box {
        Some(b) => parse_box(b, n)?,
        None => default.sample_box().clone(),
    };
    Ok(SampleGrid::new(
        sample_box,
        run.points_per_axis.unwrap_or(default.points_per_axis()),
        run.seed.unwrap_or(default.seed()),
    )?)
}

fn tolerance(run: &Run) -> anyhow::Result<TolerancePolicy> {
    let d = TolerancePolicy::default();
    let zero = run.tol_zero;
    Ok(TolerancePolicy::new(
        zero.unwrap_or(d.zero_abs),
        zero.unwrap_or(d.zero_rel),
        run.tol_const.unwrap_or(d.constancy_rel),
    )?)
}

fn emit(run: &Run, text: &str) -> anyhow::Result<()> {
    match &run.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn execute(cmd: Command) -> Result<ExitCode, Failure> {
    match cmd {
        Command::Analyze(run) => {
            let spec = resolve_spec(&run)?;
            let grid = grid_for(&run, spec.n())?;
            let table = report::analyze(&spec, &grid).map_err(lib_failure)?;
            emit(&run, &table.render(run.format == Format::Csv))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify(run) => {
            let spec = resolve_spec(&run)?;
            let grid = grid_for(&run, spec.n())?;
            let verdict = prodsurf::classify(&spec, &grid, &tolerance(&run)?).map_err(lib_failure)?;
            let text = match run.format {
                Format::Json => prodsurf::json::to_report_json(&verdict) + "\n",
                Format::Csv => report::verdict_csv(&verdict),
            };
            emit(&run, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(run) => {
            if run.spec.is_some() || run.family.is_some() {
                return Err(Failure::Input(anyhow!("verify runs the built-in fixtures and takes no function")));
            }
            if run.sample_box.is_some() || run.points_per_axis.is_some() || run.seed.is_some() {
                return Err(Failure::Input(anyhow!("verify uses each fixture's own grid; grid flags are not accepted")));
            }
            let report = prodsurf::verify_catalog(&tolerance(&run)?);
            let text = match run.format {
                Format::Json => prodsurf::json::to_report_json(&report) + "\n",
                Format::Csv => report::theorem_csv(&report),
            };
            emit(&run, &text)?;
            for e in report.entries.iter().filter(|e| !e.passed) {
                eprintln!("FAILED {} {} (expected {})", e.fixture, e.property, e.expected);
            }
            Ok(if report.all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
