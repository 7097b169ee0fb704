//! `genrank` command-line front end.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use genrank::gentest::{
    brute_force_generates, brute_force_generates_unital, generates_direct_sum,
    generates_direct_sum_unital, BRUTE_FORCE_LIMIT,
};
use genrank::io::CheckDocument;
use genrank::mc::{
    finite_dim_gr_experiment, frontier_probe, genericity_experiment, planted_repair_experiment,
    stratum_dim_survey,
};
use genrank::rank::gr_subhomogeneous;
use genrank::strata::strata_table;
use genrank::{
    DimensionProfile, ExperimentConfig, ExperimentReport, ExtNat, FiniteFiberAlgebra,
    GenerationReport, OrbitType, RankResult, Real, StrataRow,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Parser)]
#[command(name = "genrank", version, about = "Generator rank and matrix-tuple generation toolkit")]
struct Cli {
    /// Master seed for every randomised step.
    #[arg(long, global = true, default_value_t = genrank::DEFAULT_SEED)]
    seed: u64,

    /// Output format (default: table for `strata`, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Floating-point precision for numerical work.
    #[arg(long, global = true, value_enum, default_value_t = Precision::F64)]
    precision: Precision,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Precision {
    F64,
    F32,
}

#[derive(Subcommand)]
enum Command {
    /// Generator rank of a subhomogeneous algebra from its dimension profile.
    Rank(RankArgs),
    /// Orbit-type strata of (n+1)-tuples of hermitian d x d matrices.
    Strata(StrataArgs),
    /// Decide whether a tuple generates a finite direct sum of matrix algebras.
    Check(CheckArgs),
    /// Seeded Monte Carlo experiments.
    Mc(McArgs),
}

#[derive(Args)]
struct RankArgs {
    /// Profile JSON file.
    #[arg(long, conflicts_with = "dim")]
    profile: Option<PathBuf>,
    /// Inline entry `d=locdim` (locdim may be `inf`); repeatable.
    #[arg(long, value_parser = parse_dim_entry)]
    dim: Vec<(usize, ExtNat)>,
    /// locdim(X_1 x X_1), used only with inline entries.
    #[arg(long, requires = "dim")]
    square: Option<ExtNat>,
}

#[derive(Args)]
struct StrataArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    /// Random samples per orbit type for the tangent-rank oracle.
    #[arg(long, default_value_t = 5)]
    samples: usize,
}

#[derive(Args)]
struct CheckArgs {
    /// Input JSON with `fibers` and `tuple`.
    file: PathBuf,
    /// Test generation together with the unit.
    #[arg(long)]
    unital: bool,
    /// Cross-check against brute-force span saturation.
    #[arg(long)]
    oracle: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Genericity,
    Repair,
    Frontier,
    FiniteGr,
    Survey,
}

#[derive(Args)]
struct McArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// Orbit type for `frontier`, e.g. "[(1,1),(1,1)]" or "1x1,1x1".
    #[arg(long)]
    orbit_type: Option<OrbitType>,
    /// Fiber sizes for `finite-gr`, comma separated.
    #[arg(long, value_delimiter = ',')]
    fibers: Vec<usize>,
    /// Write per-trial records to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn usage(err: anyhow::Error) -> Self {
        Self { code: EXIT_USAGE, err }
    }
}

impl From<genrank::Error> for Failure {
    fn from(e: genrank::Error) -> Self {
        let code = match e {
            genrank::Error::OracleMismatch(_) => EXIT_ORACLE,
            _ => EXIT_USAGE,
        };
        Self { code, err: e.into() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(e.into())
    }
}

type Outcome = Result<u8, Failure>;

fn parse_dim_entry(s: &str) -> Result<(usize, ExtNat), String> {
    let (d, x) = s.split_once('=').ok_or("expected d=locdim")?;
    let d = d.trim().parse().map_err(|_| format!("bad dimension {d:?}"))?;
    Ok((d, x.parse()?))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::usage)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("genrank: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match (&cli.command, cli.precision) {
        (Command::Rank(a), _) => rank(cli, a),
        (Command::Strata(a), Precision::F64) => strata::<f64>(cli, a),
        (Command::Strata(a), Precision::F32) => strata::<f32>(cli, a),
        (Command::Check(a), Precision::F64) => check::<f64>(cli, a),
        (Command::Check(a), Precision::F32) => check::<f32>(cli, a),
        (Command::Mc(a), Precision::F64) => mc::<f64>(cli, a),
        (Command::Mc(a), Precision::F32) => mc::<f32>(cli, a),
    }
}

fn emit_json<S: Serialize>(value: &S) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

fn emit_csv(header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(header).map_err(|e| Failure::usage(e.into()))?;
    for r in rows {
        w.write_record(r).map_err(|e| Failure::usage(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

fn emit_table(header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = io::stdout().lock();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "))?;
    for r in rows {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn emit(format: Format, value: &impl Serialize, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    match format {
        Format::Json => emit_json(value)?,
        Format::Csv => emit_csv(header, rows)?,
        Format::Table => emit_table(header, rows)?,
    }
    Ok(())
}

fn rank(cli: &Cli, a: &RankArgs) -> Outcome {
    let profile = match &a.profile {
        Some(path) => DimensionProfile::from_json_str(&read_file(path)?)
            .with_context(|| format!("invalid profile {}", path.display()))
            .map_err(Failure::usage)?,
        None => {
            if a.dim.is_empty() {
                return Err(Failure::usage(anyhow!("rank needs --profile FILE or at least one --dim d=locdim")));
            }
            let mut dims = BTreeMap::new();
            for &(d, x) in &a.dim {
                if dims.insert(d, x).is_some() {
                    return Err(Failure::usage(anyhow!("--dim {d} given twice")));
                }
            }
            DimensionProfile::with_basic_default(dims, a.square)?
        }
    };
    let result: RankResult = gr_subhomogeneous(&profile)?;
    let rows: Vec<Vec<String>> = result
        .per_d_contributions
        .iter()
        .map(|(d, c)| {
            vec![
                d.to_string(),
                profile.dims()[d].to_string(),
                c.to_string(),
                (*d == result.dominating_d).to_string(),
            ]
        })
        .collect();
    let format = cli.format.unwrap_or(Format::Json);
    emit(format, &result, &["d", "locdim", "contribution", "dominating"], &rows)?;
    if format == Format::Table {
        println!("gr = {}", result.gr);
        if result.square_defaulted {
            println!("note: locdim(X_1 x X_1) assumed to be 2 locdim(X_1)");
        }
    }
    Ok(0)
}

fn strata<T: Real>(cli: &Cli, a: &StrataArgs) -> Outcome {
    if a.samples == 0 {
        return Err(Failure::usage(anyhow!("--samples must be >= 1")));
    }
    let rows: Vec<StrataRow> = strata_table::<T>(a.d, a.n, a.samples, cli.seed)?;
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.orbit_type.to_string(),
                r.dim_f.to_string(),
                r.dim_n_formula.to_string(),
                r.dim_n_numeric.to_string(),
                r.dim_stratum_formula.to_string(),
                r.dim_stratum_tangent.to_string(),
            ]
        })
        .collect();
    let header = ["orbit_type", "dim_f", "dim_n", "dim_n_numeric", "dim_stratum", "dim_stratum_tangent"];
    let format = cli.format.unwrap_or(Format::Table);
    emit(format, &rows, &header, &cells)?;
    if format == Format::Table {
        if let Some(max) = rows.iter().filter(|r| !r.orbit_type.is_trivial()).map(|r| r.dim_stratum_formula).max() {
            println!("max non-trivial stratum dimension: {max}");
        }
    }
    if let Some(bad) = rows.iter().find(|r| !r.matches()) {
        return Err(Failure {
            code: EXIT_ORACLE,
            err: anyhow!("closed form and oracle disagree on {}", bad.orbit_type),
        });
    }
    Ok(0)
}

#[derive(Serialize)]
struct CheckOutput {
    #[serde(flatten)]
    report: GenerationReport,
    unital: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_generates: Option<bool>,
}

fn check<T: Real>(cli: &Cli, a: &CheckArgs) -> Outcome {
    let text = read_file(&a.file)?;
    let (alg, t): (FiniteFiberAlgebra, _) = CheckDocument::from_json_str(&text)
        .and_then(|doc| doc.decode::<T>())
        .with_context(|| format!("invalid check input {}", a.file.display()))
        .map_err(Failure::usage)?;
    let report = if a.unital {
        generates_direct_sum_unital(&alg, &t)?
    } else {
        generates_direct_sum(&alg, &t)?
    };
    let oracle_generates = if a.oracle {
        if alg.ambient_size() > BRUTE_FORCE_LIMIT {
            return Err(Failure::usage(anyhow!(
                "--oracle supports total size <= {BRUTE_FORCE_LIMIT}, input has {}",
                alg.ambient_size()
            )));
        }
        Some(if a.unital {
            brute_force_generates_unital(&alg, &t)?
        } else {
            brute_force_generates(&alg, &t)?
        })
    } else {
        None
    };
    let out = CheckOutput {
        report,
        unital: a.unital,
        oracle_generates,
    };
    let r = &out.report;
    let pairs = r
        .conflict_pairs
        .iter()
        .map(|(x, y)| format!("({x},{y})"))
        .collect::<Vec<_>>()
        .join(" ");
    let fiber_ok = r.fiber_ok.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
    let mut header = vec!["generates", "fiber_ok", "conflict_pairs"];
    let mut row = vec![r.generates.to_string(), fiber_ok, pairs];
    if let Some(o) = oracle_generates {
        header.push("oracle_generates");
        row.push(o.to_string());
    }
    emit(cli.format.unwrap_or(Format::Json), &out, &header, &[row])?;
    if oracle_generates.is_some_and(|o| o != r.generates) {
        return Err(Failure {
            code: EXIT_ORACLE,
            err: anyhow!("Schur test and brute-force oracle disagree"),
        });
    }
    Ok(if r.generates { 0 } else { EXIT_NEGATIVE })
}

fn mc<T: Real>(cli: &Cli, a: &McArgs) -> Outcome {
    let cfg = ExperimentConfig::new(a.d, a.n, a.trials, cli.seed, a.epsilon);
    let format = cli.format.unwrap_or(Format::Json);
    let report: ExperimentReport = match a.experiment {
        Experiment::Survey => {
            let rows = stratum_dim_survey::<T>(a.d, a.n, &cfg)?;
            emit_json_or_rows(format, &rows)?;
            return Ok(0);
        }
        Experiment::Genericity => genericity_experiment::<T>(&cfg)?,
        Experiment::Repair => planted_repair_experiment::<T>(&cfg)?,
        Experiment::Frontier => {
            let ot = a
                .orbit_type
                .as_ref()
                .ok_or_else(|| Failure::usage(anyhow!("frontier needs --orbit-type")))?;
            frontier_probe::<T>(ot, &cfg)?
        }
        Experiment::FiniteGr => {
            if a.fibers.is_empty() {
                return Err(Failure::usage(anyhow!("finite-gr needs --fibers, e.g. --fibers 2,2,1")));
            }
            let alg = FiniteFiberAlgebra::new(a.fibers.clone())?;
            finite_dim_gr_experiment::<T>(&alg, &cfg)?
        }
    };
    if let Some(path) = &a.csv {
        write_outcomes(path, &report).with_context(|| format!("cannot write {}", path.display())).map_err(Failure::usage)?;
    }
    let mut rows = vec![vec![
        report.experiment.clone(),
        report.config.d.to_string(),
        report.config.n.to_string(),
        report.trials.to_string(),
        report.success_count.to_string(),
        report.empirical_rate.to_string(),
    ]];
    for (label, count) in &report.tallies {
        rows.push(vec![format!("  {label}"), String::new(), String::new(), String::new(), count.to_string(), String::new()]);
    }
    emit(format, &report, &["experiment", "d", "n", "trials", "successes", "rate"], &rows)?;
    Ok(0)
}

fn emit_json_or_rows(format: Format, rows: &[StrataRow]) -> Result<(), Failure> {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.orbit_type.to_string(),
                r.dim_stratum_formula.to_string(),
                r.dim_stratum_tangent.to_string(),
                r.matches().to_string(),
            ]
        })
        .collect();
    emit(format, &rows, &["orbit_type", "dim_stratum", "dim_stratum_tangent", "match"], &cells)
}

fn write_outcomes(path: &Path, report: &ExperimentReport) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["trial", "success", "detail"])?;
    for o in &report.outcomes {
        w.write_record([o.trial.to_string(), o.success.to_string(), o.detail.clone()])?;
    }
    w.flush()?;
    Ok(())
}
