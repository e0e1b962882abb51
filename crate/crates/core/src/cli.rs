//! The `hazard` command line.
//!
//! Exit codes: 0 success, 2 usage, 3 bad input, 4 budget or search limit
//! exceeded, 5 internal invariant violated. Errors are printed to stderr as a
//! single JSON object.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::boolfn::{
    block_compose, chain_rule_mismatches, hazard_derivative, is_monotone, is_unate, unateness, TruthTable,
};
use crate::error::{Error, Result};
use crate::experiments::{andreev_study, monogap_report, random_derivative_study, range_study};
use crate::formula::{
    derivative_cover_synthesis, greedy_cover, hazard_check, hazard_check_sampled, universal_hazard_free, CoverSide,
    Formula,
};
use crate::implicants::{composition_primes, monotone_prime_implicants, prime_sets};
use crate::kw::analysis::{composition_reduction, unate_criterion};
use crate::kw::matrix::kwu_matrix;
use crate::kw::protocol::{monorect_exact, SearchConfig, DEFAULT_LABEL_LIMIT};
use crate::trit::BitWord;

#[derive(Debug, Parser)]
#[command(name = "hazard", version, about = "Hazard-free formula analysis toolkit")]
pub struct Cli {
    /// Worker threads for parallel studies.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Mux,
    Cover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Implicates,
    Implicants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Study {
    RandomDerivative,
    Monogap,
    Range,
    Andreev,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monotonicity, unateness, prime sets, derivatives and the monotone gap.
    Analyze {
        table: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds a hazard-free formula; writes the s-expression to `--out`.
    Synthesize {
        table: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, value_enum, default_value = "implicates")]
        side: Side,
        /// Comma-separated base points, e.g. `00,11`; greedy cover if omitted.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hazard report of a formula given as a file or an inline s-expression.
    Check {
        formula: String,
        #[arg(long)]
        arity: usize,
        /// Check this many random ternary inputs instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hazard-free KW matrix, and with `--exact` a minimum protocol.
    Kw {
        table: PathBuf,
        #[arg(long)]
        exact: bool,
        /// Include the protocol tree.
        #[arg(long)]
        tree: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prime sets and extension of `f ⋄ g`; `--verify` checks the direct-sum reduction.
    Compose {
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a study and prints its JSON report.
    Study {
        #[arg(value_enum)]
        name: Study,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 20)]
        x_samples: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        a: usize,
        #[arg(long, default_value_t = 3)]
        b: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Truth table for `monogap`.
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct SearchArgs {
    /// Wall-clock budget in seconds for exact search.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Largest `rows + cols` handed to exact search.
    #[arg(long, default_value_t = DEFAULT_LABEL_LIMIT)]
    pub label_limit: usize,
}

impl SearchArgs {
    fn config(&self, build_tree: bool) -> SearchConfig {
        SearchConfig {
            label_limit: self.label_limit,
            deadline: self.budget.map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
            build_tree,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SearchLimit { .. } | Error::BudgetExceeded => 4,
        Error::Invariant(_) => 5,
        _ => 3,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::LengthMismatch(..) | Error::CoordinateOutOfRange { .. } | Error::GateArity { .. } => "arity",
        Error::Parse(_) | Error::Json(_) => "parse",
        Error::ArityTooLarge { .. } => "arity-limit",
        Error::Precondition(_) => "precondition",
        Error::SearchLimit { .. } => "search-limit",
        Error::BudgetExceeded => "budget",
        Error::Invariant(_) => "invariant",
        Error::Io(_) => "io",
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    match run(&cli.command) {
        Ok(stdout) => {
            if !stdout.is_empty() {
                println!("{stdout}");
            }
            0
        }
        Err(e) => {
            let code = exit_code(&e);
            let body = json!({ "error": error_kind(&e), "message": e.to_string(), "exit_code": code });
            eprintln!("{body}");
            code
        }
    }
}

/// Runs a command, writing any `--out` artifact, and returns what belongs on stdout.
pub fn run(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Analyze { table, search, out } => {
            let f = read_table(table)?;
            emit(&analyze_report(&f, &search.config(false))?, out.as_deref())
        }
        Command::Synthesize { table, method, side, base, out } => {
            let f = read_table(table)?;
            let side = match side {
                Side::Implicates => CoverSide::Implicates,
                Side::Implicants => CoverSide::Implicants,
            };
            let (formula, extra) = match method {
                Method::Mux => (universal_hazard_free(&f)?, Value::Null),
                Method::Cover => {
                    let xs = match base {
                        Some(s) => parse_points(s, f.arity())?,
                        None => greedy_cover(&f, side)?,
                    };
                    let c = derivative_cover_synthesis(&f, &xs, side)?;
                    let extra = serde_json::to_value(&c)?;
                    (c.formula, extra)
                }
            };
            let report = hazard_check(&formula, f.arity())?;
            if report.function != f {
                return Err(Error::Invariant("synthesized formula computes a different function".into()));
            }
            if let Some(path) = out {
                write_atomic(path, &format!("{formula}\n"))?;
            }
            let body = json!({
                "formula": formula.to_string(),
                "size": formula.size(),
                "depth": formula.depth(),
                "cover": extra,
                "hazard_report": report,
            });
            Ok(serde_json::to_string_pretty(&body)?)
        }
        Command::Check { formula, arity, samples, seed, out } => {
            let phi = read_formula(formula)?;
            let report = match samples {
                Some(s) => serde_json::to_value(hazard_check_sampled(&phi, *arity, *s, *seed)?)?,
                None => serde_json::to_value(hazard_check(&phi, *arity)?)?,
            };
            emit(&report, out.as_deref())
        }
        Command::Kw { table, exact, tree, search, out } => {
            let f = read_table(table)?;
            let cfg = search.config(*tree);
            emit(&kw_report(&f, exact.then_some(&cfg))?, out.as_deref())
        }
        Command::Compose { f, g, verify, out } => {
            let (f, g) = (read_table(f)?, read_table(g)?);
            emit(&compose_report(&f, &g, *verify)?, out.as_deref())
        }
        Command::Study { name, n, trials, x_samples, samples, seed, a, b, k, m, table, search, out } => {
            let cfg = search.config(false);
            let report = match name {
                Study::RandomDerivative => random_derivative_study(*n, *trials, *x_samples, *seed)?,
                Study::Monogap => {
                    let path = table.as_ref().ok_or_else(|| Error::precondition("monogap needs --table"))?;
                    monogap_report(&read_table(path)?, &cfg)?
                }
                Study::Range => range_study(*n, *a, *b, &cfg)?,
                Study::Andreev => andreev_study(*k, *m, *samples, *seed)?,
            };
            emit(&serde_json::to_value(&report)?, out.as_deref())
        }
    }
}

/// Static properties, prime sets, per-point derivatives and, when exact
/// search fits in `cfg`, the monotone gap.
pub fn analyze_report(f: &TruthTable, cfg: &SearchConfig) -> Result<Value> {
    let n = f.arity();
    let (p1, p0) = prime_sets(f)?;
    let derivatives: Vec<Value> = BitWord::all(n)
        .map(|x| {
            let d = hazard_derivative(f, &x)?;
            let primes = monotone_prime_implicants(&d)?;
            Ok(json!({
                "x": x.to_string(),
                "value": f.get(x.index()) as u8,
                "derivative": d.bit_string(),
                "prime_implicants": primes.len(),
                "max_weight": primes.words().iter().map(|p| p.ones_mask().count_ones()).max(),
            }))
        })
        .collect::<Result<_>>()?;
    let monogap = if f.is_constant().is_some() {
        json!({ "skipped": "constant function" })
    } else {
        match unate_criterion(f, cfg) {
            Ok(v) => json!({
                "hazard_free_size": v.hazard_free_size,
                "max_derivative_size": v.max_derivative_size,
                "gap": v.hazard_free_size as f64 / v.max_derivative_size as f64,
                "argmax": v.argmax.to_string(),
                "witness": v.witness,
            }),
            Err(e @ (Error::SearchLimit { .. } | Error::BudgetExceeded)) => json!({ "skipped": e.to_string() }),
            Err(e) => return Err(e),
        }
    };
    Ok(json!({
        "arity": n,
        "function": f.bit_string(),
        "monotone": is_monotone(f),
        "unate": is_unate(f),
        "unateness": unateness(f),
        "prime_implicants": p1.words().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "prime_implicates": p0.words().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "derivatives": derivatives,
        "monogap": monogap,
    }))
}

/// The hazard-free KW matrix and, given a config, its minimum protocol.
pub fn kw_report(f: &TruthTable, exact: Option<&SearchConfig>) -> Result<Value> {
    let m = kwu_matrix(f)?;
    let mut body = json!({ "matrix": m });
    if let Some(cfg) = exact {
        body["protocol"] = serde_json::to_value(monorect_exact(&m, cfg)?)?;
    }
    Ok(body)
}

pub fn compose_report(f: &TruthTable, g: &TruthTable, verify: bool) -> Result<Value> {
    let h = block_compose(f, g)?;
    let (h1, h0) = prime_sets(&h)?;
    let primes_match = composition_primes(f, g, true)? == h1 && composition_primes(f, g, false)? == h0;
    let mut body = json!({
        "composed": h.bit_string(),
        "arity": h.arity(),
        "prime_implicants": h1.len(),
        "prime_implicates": h0.len(),
        "composition_primes_match": primes_match,
        "chain_rule_mismatches": chain_rule_mismatches(f, g)?,
    });
    if verify {
        body["reduction"] = serde_json::to_value(composition_reduction(f, g)?)?;
    }
    Ok(body)
}

pub fn parse_points(s: &str, n: usize) -> Result<Vec<BitWord>> {
    s.split(',')
        .map(|p| {
            let p = p.trim();
            if p.len() != n || !p.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::Parse(format!("bad base point `{p}` for arity {n}")));
            }
            let bits = p.chars().enumerate().fold(0u32, |acc, (i, c)| acc | ((c == '1') as u32) << i);
            BitWord::new(n, bits)
        })
        .collect()
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    Ok(std::fs::read_to_string(path)?)
}

fn read_table(path: &Path) -> Result<TruthTable> {
    read_input(path)?.parse()
}

fn read_formula(arg: &str) -> Result<Formula> {
    let path = Path::new(arg);
    if arg == "-" || path.is_file() {
        read_input(path)?.trim().parse()
    } else {
        arg.parse()
    }
}

fn emit(body: &Value, out: Option<&Path>) -> Result<String> {
    let text = serde_json::to_string_pretty(body)?;
    match out {
        Some(path) => {
            write_atomic(path, &format!("{text}\n"))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Writes through a temporary file in the target directory, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
