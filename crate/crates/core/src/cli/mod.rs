//! Command-line interface. `main` only forwards to [`run`].

mod manifest;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::conjectures::{scan, ConjectureId, ScanOptions, ScanSpace, ScanState, DEFAULT_SHARD_SIZE};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, Exponent};
use crate::functional::parse_function;
use crate::group::{compress, format_point_set, parse_point_set, Homomorphism, PointSet};
use crate::laws::{check_two_point, run_suite, Status, TwoPointGrid, DEFAULT_SUITE_COUNT};
use crate::quasicube::{is_quasicube, make_quasicube, random_spec};
use crate::search::{alpha_estimate, beta_estimate, gamma_estimate, parse_box, SearchConfig};

pub use manifest::{sha256_hex, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LAW_FAILURE: i32 = 2;
pub const EXIT_DISPROOF: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Parser, Debug)]
#[command(name = "sumsetlab", version, about = "Sumset estimates, law checks and conjecture scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Witnessed upper estimate of alpha, beta or gamma.
    Estimate(EstimateArgs),
    /// Generate or recognize quasicubes.
    #[command(subcommand)]
    Quasicube(QuasicubeCommand),
    /// Compress a set along one free coordinate.
    Compress(CompressArgs),
    /// Run law suites.
    #[command(subcommand)]
    Laws(LawsCommand),
    /// Counterexample scans.
    #[command(subcommand)]
    Conjecture(ConjectureCommand),
    /// Check two-point functions on a grid of deltas and exponents.
    TwoPoint(TwoPointArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum QuantityArg {
    Alpha,
    Beta,
    Gamma,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Exponent p > 1 as `num/den`.
    #[arg(long)]
    p: Option<String>,
    /// unrestricted, isometric or isomeric.
    #[arg(long)]
    variant: Option<String>,
    /// Search box `a..b[,a..b...]`.
    #[arg(long = "box", allow_hyphen_values = true)]
    bounds: Option<String>,
    #[arg(long)]
    max_card: Option<usize>,
    /// exhaustive, hill_climb or geometric_family.
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    budget_ms: Option<u64>,
}

impl SearchArgs {
    fn config(&self, m: &mut RunManifest) -> Result<SearchConfig> {
        let mut cfg = SearchConfig::default();
        if let Some(p) = &self.p {
            cfg.p = Exponent::parse(p)?;
            m.flag("p", cfg.p.to_string());
        }
        if let Some(v) = &self.variant {
            cfg.variant = v.parse()?;
            m.flag("variant", v.as_str());
        }
        if let Some(b) = &self.bounds {
            cfg.bounds = parse_box(b)?;
            m.flag("box", b.as_str());
        }
        if let Some(c) = self.max_card {
            cfg.max_card = c;
            m.flag("max_card", c);
        }
        if let Some(s) = &self.strategy {
            cfg.strategy = s.parse()?;
            m.flag("strategy", s.as_str());
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
            m.flag("seed", s);
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        if let Some(b) = self.budget_ms {
            cfg.budget_ms = Some(b);
            m.flag("budget_ms", b);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(value_enum)]
    quantity: QuantityArg,
    /// Point-set file (alpha, beta).
    #[arg(long)]
    set: Option<PathBuf>,
    /// Function file (gamma).
    #[arg(long = "fn")]
    function: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum QuasicubeCommand {
    /// Random quasicube from a seeded spec.
    Gen {
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        radius: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a set is a quasicube.
    Check {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct CompressArgs {
    #[arg(long)]
    set: PathBuf,
    /// Free coordinate along which fibers are compressed.
    #[arg(long, default_value_t = 0)]
    coord: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum LawsCommand {
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per suite.
        #[arg(long, default_value_t = DEFAULT_SUITE_COUNT)]
        count: usize,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ConjectureCommand {
    Scan {
        #[arg(long)]
        id: String,
        #[arg(long = "box", default_value = "-2..3", allow_hyphen_values = true)]
        bounds: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = 4)]
        max_card: usize,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SHARD_SIZE)]
        shard_size: u64,
        /// Stop after this many shards; resume later from the checkpoint.
        #[arg(long)]
        max_shards: Option<u64>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct TwoPointArgs {
    /// Comma-separated deltas in [0, 1]; defaults to 0, 1/10, ..., 1.
    #[arg(long)]
    delta: Option<String>,
    /// Comma-separated exponents; defaults to 2, 3/2, 3.
    #[arg(long)]
    p: Option<String>,
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    #[arg(long, default_value_t = 3)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    let start = Instant::now();
    match cmd {
        Command::Estimate(a) => estimate(a, start),
        Command::Quasicube(QuasicubeCommand::Gen { depth, radius, seed, out }) => {
            let mut m = RunManifest::new("quasicube gen");
            m.flag("depth", depth);
            m.flag("radius", radius);
            m.flag("seed", seed);
            let spec = random_spec(depth, radius, &mut ChaCha8Rng::seed_from_u64(seed))?;
            let set = make_quasicube(&spec)?;
            finish(&mut m, start, EXIT_OK);
            let text = format!(
                "# spec: {spec}\n# manifest: {}\n{}",
                m.to_json(),
                format_point_set(&set)
            );
            write_out(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Quasicube(QuasicubeCommand::Check { set, out }) => {
            let mut m = RunManifest::new("quasicube check");
            m.flag("set", set.display().to_string());
            let u = read_set(&set, &mut m)?;
            let witness = is_quasicube(&u)?;
            finish(&mut m, start, EXIT_OK);
            let report = json!({
                "is_quasicube": witness.is_some(),
                "dimension": witness.as_ref().map(|_| u.len().trailing_zeros()),
                "witness": witness.map(|w| serde_json::to_value(w)).transpose()?,
                "manifest": m.to_json(),
            });
            write_json(out.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
        Command::Compress(CompressArgs { set, coord, out }) => {
            let mut m = RunManifest::new("compress");
            m.flag("set", set.display().to_string());
            m.flag("coord", coord);
            let u = read_set(&set, &mut m)?;
            let h = Homomorphism::drop_free_coordinate(u.context(), coord)?;
            let c = compress(&u, &h)?;
            finish(&mut m, start, EXIT_OK);
            write_out(out.as_deref(), &format!("# manifest: {}\n{}", m.to_json(), format_point_set(&c)))?;
            Ok(EXIT_OK)
        }
        Command::Laws(LawsCommand::Run { suite, seed, count, threads, out }) => {
            let mut m = RunManifest::new("laws run");
            m.flag("suite", suite.as_str());
            m.flag("seed", seed);
            m.flag("count", count);
            let verdicts = with_threads(threads, || run_suite(&suite, seed, count))??;
            let failed = verdicts.iter().filter(|v| v.status == Status::Violated).count();
            let code = if failed > 0 { EXIT_LAW_FAILURE } else { EXIT_OK };
            finish(&mut m, start, code);
            let mut text = String::new();
            for v in &verdicts {
                text.push_str(&serde_json::to_string(&v.to_json())?);
                text.push('\n');
            }
            let summary = json!({
                "summary": {"verdicts": verdicts.len(), "violated": failed},
                "manifest": m.to_json(),
            });
            text.push_str(&serde_json::to_string(&summary)?);
            text.push('\n');
            write_out(out.as_deref(), &text)?;
            Ok(code)
        }
        Command::Conjecture(ConjectureCommand::Scan {
            id,
            bounds,
            dim,
            max_size,
            max_card,
            threads,
            shard_size,
            max_shards,
            checkpoint,
            out,
        }) => {
            let mut m = RunManifest::new("conjecture scan");
            m.flag("id", id.as_str());
            m.flag("box", bounds.as_str());
            m.flag("dim", dim);
            m.flag("max_size", max_size);
            m.flag("max_card", max_card);
            m.flag("shard_size", shard_size);
            let id: ConjectureId = id.parse()?;
            let mut cfg = SearchConfig::default().with_box(&parse_box(&bounds)?).with_card(max_card);
            if let Some(t) = threads {
                cfg = cfg.with_threads(t);
            }
            cfg.validate()?;
            let space = ScanSpace::from_config(&cfg, dim, max_size)?;
            let resume = match &checkpoint {
                Some(p) => ScanState::load(p)?,
                None => None,
            };
            let mut sink: Box<dyn Write> = match &out {
                Some(p) => {
                    let keep = resume.as_ref().map_or(0, |s| s.records_emitted);
                    Box::new(open_truncated_to_lines(p, keep)?)
                }
                None => Box::new(io::stdout()),
            };
            let opts = ScanOptions { shard_size, max_shards };
            let state = scan(id, &space, &cfg, resume, checkpoint.as_deref(), &opts, &mut |rec| {
                writeln!(sink, "{}", serde_json::to_string(rec)?)?;
                sink.flush()?;
                Ok(())
            })?;
            let code = if state.counters.bugs > 0 {
                EXIT_LAW_FAILURE
            } else if state.counterexample.is_some() {
                EXIT_DISPROOF
            } else {
                EXIT_OK
            };
            finish(&mut m, start, code);
            let summary = json!({
                "conjecture": state.conjecture.as_str(),
                "cursor": state.cursor,
                "total": state.total,
                "done": state.is_done(),
                "counters": state.counters,
                "near_violations": state.near_violations.iter().take(10).collect::<Vec<_>>(),
                "counterexample": state.counterexample,
                "manifest": m.to_json(),
            });
            let text = serde_json::to_string_pretty(&summary)?;
            if out.is_some() {
                println!("{text}");
            } else {
                eprintln!("{text}");
            }
            Ok(code)
        }
        Command::TwoPoint(a) => {
            let mut m = RunManifest::new("two-point");
            let mut grid = TwoPointGrid {
                max_len: a.max_len,
                descent_starts: a.starts,
                seed: a.seed,
                ..TwoPointGrid::default()
            };
            if let Some(d) = &a.delta {
                grid.deltas = d.split(',').map(|t| parse_rational(t.trim())).collect::<Result<_>>()?;
                m.flag("delta", d.as_str());
            }
            if let Some(p) = &a.p {
                grid.ps = p.split(',').map(|t| Exponent::parse(t.trim())).collect::<Result<_>>()?;
                m.flag("p", p.as_str());
            }
            m.flag("max_len", a.max_len);
            m.flag("starts", a.starts);
            m.flag("seed", a.seed);
            let v = check_two_point(&grid)?;
            let code = if v.status == Status::Violated { EXIT_LAW_FAILURE } else { EXIT_OK };
            finish(&mut m, start, code);
            let mut report = v.to_json();
            report["manifest"] = m.to_json();
            write_json(a.out.as_deref(), &report)?;
            Ok(code)
        }
    }
}

fn estimate(a: EstimateArgs, start: Instant) -> Result<i32> {
    let name = match a.quantity {
        QuantityArg::Alpha => "alpha",
        QuantityArg::Beta => "beta",
        QuantityArg::Gamma => "gamma",
    };
    let mut m = RunManifest::new(format!("estimate {name}"));
    let cfg = a.search.config(&mut m)?;
    let report = match a.quantity {
        QuantityArg::Alpha | QuantityArg::Beta => {
            let path = a.set.as_ref().ok_or_else(|| Error::invalid("--set is required"))?;
            if a.function.is_some() {
                return Err(Error::invalid("--fn applies to gamma only"));
            }
            m.flag("set", path.display().to_string());
            let u = read_set(path, &mut m)?;
            match a.quantity {
                QuantityArg::Alpha => alpha_estimate(&u, &cfg)?,
                _ => beta_estimate(&u, &cfg)?,
            }
        }
        QuantityArg::Gamma => {
            let path = a.function.as_ref().ok_or_else(|| Error::invalid("--fn is required"))?;
            if a.set.is_some() {
                return Err(Error::invalid("--set applies to alpha and beta only"));
            }
            m.flag("fn", path.display().to_string());
            let bytes = read_input(path, &mut m)?;
            let f = parse_function(&String::from_utf8_lossy(&bytes))?;
            gamma_estimate(&f, &cfg)?
        }
    };
    finish(&mut m, start, EXIT_OK);
    write_json(a.out.as_deref(), &report.to_json(Some(m.to_json())))?;
    Ok(EXIT_OK)
}

fn finish(m: &mut RunManifest, start: Instant, code: i32) {
    m.wall_clock_ms = start.elapsed().as_millis() as u64;
    m.exit_status = code;
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::invalid("threads must be >= 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn read_input(path: &Path, m: &mut RunManifest) -> Result<Vec<u8>> {
    let bytes = fs::read(path)?;
    m.input(path, &bytes);
    Ok(bytes)
}

fn read_set(path: &Path, m: &mut RunManifest) -> Result<PointSet> {
    let bytes = read_input(path, m)?;
    parse_point_set(&String::from_utf8_lossy(&bytes))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_json(path: Option<&Path>, v: &Value) -> Result<()> {
    write_out(path, &format!("{}\n", serde_json::to_string_pretty(v)?))
}

/// Opens `path` for appending after cutting it to its first `keep` lines, so
/// a resumed scan continues exactly where its checkpoint left off.
fn open_truncated_to_lines(path: &Path, keep: u64) -> Result<fs::File> {
    let existing = if keep > 0 { fs::read_to_string(path)? } else { String::new() };
    let mut kept = String::new();
    for line in existing.lines().take(keep as usize) {
        kept.push_str(line);
        kept.push('\n');
    }
    if (kept.lines().count() as u64) < keep {
        return Err(Error::invalid("report file has fewer records than the checkpoint"));
    }
    fs::write(path, &kept)?;
    Ok(fs::OpenOptions::new().append(true).open(path)?)
}
