use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::instance::{evaluate, Instance, Latent, Params};
use super::io::{load_matrix, save_matrix};
use super::report::{write_csv, write_jsonl, ReportRow};
use super::search::{minimize_gap, SearchConfig};
use super::suite::{run_suite, SuiteConfig, DEFAULT_ALPHAS, DEFAULT_QS};
use super::HarnessError;
use crate::blockops::BlockShape;
use crate::inequalities::{CheckId, HypothesisClass};

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_VIOLATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "blockineq", version, about = "Check trace and determinant inequalities for block matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run randomized verification suites.
    Verify(VerifyArgs),
    /// Search for the smallest gap of one check.
    Search(SearchArgs),
    /// Write a random instance to a matrix file.
    Gen(GenArgs),
    /// Evaluate checks on a matrix file.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Comma-separated sector half-angles in radians.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    /// Comma-separated Schatten exponents; `inf` allowed.
    #[arg(long, value_delimiter = ',', value_parser = parse_q)]
    q: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Comma-separated check ids, or `all`.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Comma-separated block shapes `MxN`.
    #[arg(long, default_value = "2x2")]
    dims: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance coefficient: `1e-8` for every check, or `main=1e-12,ando=1e-7`.
    #[arg(long)]
    tol: Option<String>,
    #[command(flatten)]
    common: Common,
    /// Report file; rows go to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// The check to probe.
    #[arg(long)]
    checks: String,
    /// Block shape `MxN`.
    #[arg(long, default_value = "2x2")]
    dims: String,
    /// Evaluation budget.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
    /// Stop once the best gap is at or below this value.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<f64>,
    /// Evaluate determinantal checks on plain PSD input without their hypothesis test.
    #[arg(long)]
    explore: bool,
    /// Write the record here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenClass::Psd)]
    class: GenClass,
    /// Block shape `MxN`.
    #[arg(long, default_value = "2x2")]
    dims: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// ChaCha stream index.
    #[arg(long, default_value_t = 0)]
    index: u64,
    /// Rank of a PSD instance (default: full).
    #[arg(long)]
    rank: Option<usize>,
    /// Half-angle of a sector instance.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Matrix file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated check ids, or `all`.
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long)]
    tol: Option<String>,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenClass {
    Psd,
    Ppt,
    Sector,
}

fn parse_q(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "Inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse().map_err(|e| format!("`{t}`: {e}")),
    }
}

fn parse_checks(s: &str) -> Result<Vec<CheckId>, HarnessError> {
    if s.trim() == "all" {
        return Ok(CheckId::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let id: CheckId = part.parse().map_err(HarnessError::Usage)?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    if out.is_empty() {
        return Err(HarnessError::Usage("no checks given".into()));
    }
    Ok(out)
}

fn parse_shape(s: &str) -> Result<BlockShape, HarnessError> {
    let bad = || HarnessError::Usage(format!("bad block shape `{s}`, expected MxN"));
    let (m, n) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    let m: usize = m.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if m == 0 || n == 0 {
        return Err(bad());
    }
    Ok(BlockShape::new(m, n))
}

fn parse_dims(s: &str) -> Result<Vec<BlockShape>, HarnessError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_shape).collect()
}

/// `1e-8` applies to every selected check; `id=value` pairs set single checks.
fn parse_tol(s: &str, checks: &[CheckId]) -> Result<Vec<(CheckId, f64)>, HarnessError> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| HarnessError::Usage(format!("bad tolerance `{t}`")))
    };
    if !s.contains('=') {
        let v = num(s)?;
        return Ok(checks.iter().map(|&c| (c, v)).collect());
    }
    s.split(',')
        .map(|part| {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| HarnessError::Usage(format!("bad tolerance entry `{part}`")))?;
            Ok((k.trim().parse().map_err(HarnessError::Usage)?, num(v)?))
        })
        .collect()
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|source| {
            super::io::FileError::Io {
                path: path.clone(),
                source,
            }
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_rows(rows: &[ReportRow], format: Format, out: &Option<PathBuf>) -> Result<(), HarnessError> {
    let w = sink(out)?;
    let res = match format {
        Format::Jsonl => write_jsonl(rows, w).map_err(|e| e.to_string()),
        Format::Csv => write_csv(rows, w).map_err(|e| e.to_string()),
    };
    res.map_err(|e| HarnessError::Usage(format!("cannot write report: {e}")))
}

/// Runs the CLI on `argv` (program name first) and returns the exit code:
/// 0 when every evaluated inequality holds, 2 on a violation, 1 on usage,
/// I/O or hypothesis-configuration errors.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Gen(a) => gen(a),
        Command::Eval(a) => eval(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn verify(a: VerifyArgs) -> Result<i32, HarnessError> {
    let checks = parse_checks(&a.checks)?;
    let mut cfg = SuiteConfig::new(checks.clone(), parse_dims(&a.dims)?, a.trials, a.seed);
    if let Some(t) = &a.tol {
        cfg.tol = parse_tol(t, &checks)?.into_iter().collect();
    }
    cfg.alphas = a.common.alpha.unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
    cfg.qs = a.common.q.unwrap_or_else(|| DEFAULT_QS.to_vec());
    if a.workers == Some(0) {
        return Err(HarnessError::Usage("workers must be at least 1".into()));
    }
    let report = run_suite(&cfg, a.workers)?;
    write_rows(&report.rows, a.format, &a.out)?;

    let mut summary: Box<dyn Write> = if a.out.is_some() {
        Box::new(io::stdout().lock())
    } else {
        Box::new(io::stderr().lock())
    };
    let _ = writeln!(summary, "{:<13} {:>7} {:>7} {:>6} {:>6} {:>12}", "check", "count", "holds", "viol", "hyp", "min_gap");
    for g in &report.aggregates {
        let min = g.min_gap.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            summary,
            "{:<13} {:>7} {:>7} {:>6} {:>6} {:>12}",
            g.check.as_str(),
            g.count,
            g.holds,
            g.violations,
            g.hypothesis_errors,
            min
        );
    }
    let _ = writeln!(summary, "wall time {:.2}s", report.wall_time_s);
    Ok(if report.has_violation() { EXIT_VIOLATION } else { EXIT_OK })
}

fn search(a: SearchArgs) -> Result<i32, HarnessError> {
    let checks = parse_checks(&a.checks)?;
    let [check] = checks[..] else {
        return Err(HarnessError::Usage("search takes exactly one check".into()));
    };
    let shape = parse_shape(&a.dims)?;
    let mut cfg = SearchConfig::new(check, shape, a.budget, a.seed);
    cfg.explore = a.explore;
    cfg.target_gap = a.target;
    cfg.params = Params {
        q: if check == CheckId::Schatten { Some(first(a.common.q, 1.0)) } else { None },
        alpha: if check.class() == HypothesisClass::Sector && !a.explore {
            Some(first(a.common.alpha, std::f64::consts::FRAC_PI_4))
        } else {
            None
        },
    };
    let rec = minimize_gap(&cfg)?;
    let mut w = sink(&a.out)?;
    serde_json::to_writer(&mut w, &rec)
        .map_err(io::Error::from)
        .and_then(|_| writeln!(w))
        .and_then(|_| w.flush())
        .map_err(|e| HarnessError::Usage(format!("cannot write record: {e}")))?;
    eprintln!(
        "{}: best gap {:.6e} after {} evaluations (restart {}, {} accepted steps)",
        check, rec.best_gap, rec.evaluations, rec.restart_index, rec.perturbation_steps
    );
    Ok(if !cfg.explore && rec.best.is_violation() { EXIT_VIOLATION } else { EXIT_OK })
}

fn first(list: Option<Vec<f64>>, default: f64) -> f64 {
    list.and_then(|v| v.first().copied()).unwrap_or(default)
}

fn gen(a: GenArgs) -> Result<i32, HarnessError> {
    let shape = parse_shape(&a.dims)?;
    let class = match a.class {
        GenClass::Psd => HypothesisClass::Psd,
        GenClass::Ppt => HypothesisClass::Ppt,
        GenClass::Sector => HypothesisClass::Sector,
    };
    let latent = match (class, a.rank) {
        (HypothesisClass::Psd, Some(rank)) => {
            let cfg = crate::generators::GeneratorConfig::new(a.seed, shape.m, shape.n).index(a.index).rank(rank);
            Latent::Psd(crate::generators::PsdLatent::sample(&cfg)?)
        }
        _ => Latent::sample(class, shape, a.seed, a.index, Some(a.alpha))?,
    };
    let Instance::Block(block) = latent.build()? else {
        unreachable!("block classes build block instances")
    };
    save_matrix(&a.out, &block)?;
    Ok(EXIT_OK)
}

fn eval(a: EvalArgs) -> Result<i32, HarnessError> {
    let named = a.checks.trim() != "all";
    let checks = parse_checks(&a.checks)?;
    let block = load_matrix(&a.input)?;
    let shape = block.shape();
    let inst = Instance::Block(block);
    let tol: std::collections::BTreeMap<CheckId, f64> = match &a.tol {
        Some(t) => parse_tol(t, &checks)?.into_iter().collect(),
        None => Default::default(),
    };
    let qs = a.common.q.unwrap_or_else(|| DEFAULT_QS.to_vec());
    let alphas: Vec<Option<f64>> = match a.common.alpha {
        Some(v) => v.into_iter().map(Some).collect(),
        None => vec![None],
    };

    let mut rows = Vec::new();
    for &check in &checks {
        if matches!(check, CheckId::DetFour | CheckId::ThreeTerm) {
            if named {
                return Err(HarnessError::Usage(format!("{check} takes several matrices; eval reads one")));
            }
            continue;
        }
        let params: Vec<Params> = match check {
            CheckId::Schatten => qs.iter().map(|&q| Params { q: Some(q), alpha: None }).collect(),
            CheckId::SectorMain => alphas.iter().map(|&alpha| Params { q: None, alpha }).collect(),
            _ => vec![Params::default()],
        };
        for p in params {
            let row = match evaluate(check, &inst, p, false) {
                Ok(v) => {
                    let v = match tol.get(&check) {
                        Some(&c) => v.with_tolerance_coefficient(c),
                        None => v,
                    };
                    ReportRow::from_verdict(v, shape, 0, 0, p)
                }
                Err(e) if named => return Err(HarnessError::Usage(e.to_string())),
                Err(e) => ReportRow::from_check_error(check, shape, 0, 0, p, e),
            };
            rows.push(row);
        }
    }
    write_rows(&rows, a.format, &a.out)?;
    Ok(if rows.iter().any(ReportRow::is_violation) { EXIT_VIOLATION } else { EXIT_OK })
}
