//! Checkpointed counterexample scans for the open conjectures.

pub mod canonical;
mod matroid;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Exponent, Rational};
use crate::group::{GroupContext, PointSet};
use crate::laws::set_json;
use crate::quasicube::log_span_check;
use crate::search::{alpha_estimate, beta_estimate, beta_ratio_power, EstimateReport, SearchConfig, Strategy, Variant};

pub use canonical::{anchor, canonical_form, SubsetEnumeration};
pub use matroid::{check_matroid_pair, MatroidMap, MATROID_MAX};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureId {
    LogSpan,
    Matroid,
    DoublingTripling,
    Projection,
    MultiplicativityAlpha,
}

impl ConjectureId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConjectureId::LogSpan => "log_span",
            ConjectureId::Matroid => "matroid",
            ConjectureId::DoublingTripling => "doubling_tripling",
            ConjectureId::Projection => "projection",
            ConjectureId::MultiplicativityAlpha => "multiplicativity_alpha",
        }
    }
}

impl FromStr for ConjectureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "log_span" => ConjectureId::LogSpan,
            "matroid" => ConjectureId::Matroid,
            "doubling_tripling" => ConjectureId::DoublingTripling,
            "projection" => ConjectureId::Projection,
            "multiplicativity_alpha" => ConjectureId::MultiplicativityAlpha,
            _ => return Err(Error::invalid(format!("unknown conjecture id {s:?}"))),
        })
    }
}

/// Number of smallest margins kept in a scan state.
pub const NEAR_VIOLATIONS_KEPT: usize = 100;

/// Default number of enumeration indices per shard.
pub const DEFAULT_SHARD_SIZE: u64 = 1024;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Enumeration indices consumed.
    pub enumerated: u64,
    /// Canonical representatives among them.
    pub canonical: u64,
    /// Representatives failing the scan's precondition.
    pub skipped: u64,
    /// Representatives evaluated.
    pub checked: u64,
    /// Evaluations whose searches hit the node ceiling.
    pub incomplete: u64,
    /// Estimates contradicting a proved statement.
    pub bugs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearViolation {
    /// Exact margin as "num/den"; smaller is closer to a violation.
    pub margin: String,
    pub index: u64,
    pub set: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanState {
    pub conjecture: ConjectureId,
    /// Echo of the enumeration space and search window; a resume must match it.
    pub params: Value,
    /// Next enumeration index to process.
    pub cursor: u64,
    pub total: u64,
    pub counters: Counters,
    pub near_violations: Vec<NearViolation>,
    pub counterexample: Option<Value>,
    /// Report records emitted up to `cursor`.
    pub records_emitted: u64,
}

impl ScanState {
    pub fn new(conjecture: ConjectureId, params: Value, total: u64) -> Self {
        ScanState {
            conjecture,
            params,
            cursor: 0,
            total,
            counters: Counters::default(),
            near_violations: Vec::new(),
            counterexample: None,
            records_emitted: 0,
        }
    }

    pub fn is_done(&self) -> bool {
        self.cursor >= self.total
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a checkpoint; `None` when the file does not exist.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(text) => Ok(Some(Self::from_json_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes the checkpoint through a temporary file and a rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut tmp = PathBuf::from(path);
        let name = path
            .file_name()
            .ok_or_else(|| Error::invalid("checkpoint path has no file name"))?
            .to_string_lossy()
            .into_owned();
        tmp.set_file_name(format!(".{name}.tmp"));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_json_string()?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    fn note_margin(&mut self, margin: &Rational, index: u64, set: &[Vec<i64>]) {
        let pos = self
            .near_violations
            .iter()
            .position(|n| parse_rational(&n.margin).map_or(false, |m| *margin < m))
            .unwrap_or(self.near_violations.len());
        if pos < NEAR_VIOLATIONS_KEPT {
            self.near_violations.insert(
                pos,
                NearViolation {
                    margin: format_rational(margin),
                    index,
                    set: set.to_vec(),
                },
            );
            self.near_violations.truncate(NEAR_VIOLATIONS_KEPT);
        }
    }
}

/// Sets to scan: subsets of a cube of side `width` in `Z^dim` with at most
/// `max_size` points, one per translation and signed-permutation class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSpace {
    pub dim: usize,
    pub width: usize,
    pub max_size: usize,
}

impl ScanSpace {
    /// Uses the search box as the enumeration cube too; all intervals of the
    /// box must have the same length.
    pub fn from_config(cfg: &SearchConfig, dim: usize, max_size: usize) -> Result<Self> {
        let widths = cfg.widths(&GroupContext::free(dim))?;
        if widths.iter().any(|w| *w != widths[0]) {
            return Err(Error::invalid("conjecture scans need a cube-shaped box"));
        }
        Ok(ScanSpace { dim, width: widths[0], max_size })
    }

    fn enumeration(&self) -> Result<SubsetEnumeration> {
        SubsetEnumeration::new(self.dim, self.width, self.max_size)
    }
}

pub struct ScanOptions {
    pub shard_size: u64,
    /// Stop after this many shards in this call (the state stays resumable).
    pub max_shards: Option<u64>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            shard_size: DEFAULT_SHARD_SIZE,
            max_shards: None,
        }
    }
}

fn scan_params(id: ConjectureId, space: &ScanSpace, cfg: &SearchConfig) -> Value {
    json!({
        "conjecture": id.as_str(),
        "dim": space.dim,
        "width": space.width,
        "max_size": space.max_size,
        "config": cfg.to_json(),
    })
}

/// Outcome of evaluating one representative.
struct Evaluation {
    record: Option<Value>,
    margin: Option<Rational>,
    incomplete: bool,
    bug: bool,
    disproof: Option<Value>,
}

fn skipped() -> Evaluation {
    Evaluation {
        record: None,
        margin: None,
        incomplete: false,
        bug: false,
        disproof: None,
    }
}

fn exact(r: &EstimateReport) -> Rational {
    r.exact_power.clone().expect("set witnesses carry exact values")
}

fn report_summary(r: &EstimateReport) -> Value {
    json!({
        "value_exact": r.exact_power.as_ref().map(format_rational),
        "witness_a": r.witness_a.to_json(),
        "witness_b": r.witness_b.to_json(),
        "complete": r.complete,
    })
}

fn evaluate_log_span(index: u64, v: &PointSet, cfg: &SearchConfig) -> Result<Evaluation> {
    if log_span_check(v)?.is_some() {
        return Ok(skipped());
    }
    let r = beta_estimate(v, cfg)?;
    let target = Rational::from_integer((v.len() * v.len()).into());
    let value = exact(&r);
    let margin = &value - &target;
    let mut disproof = None;
    if margin.is_negative() {
        // Recompute the witness ratio directly before calling it a disproof.
        let (a, b) = (r.witness_a.as_set().unwrap(), r.witness_b.as_set().unwrap());
        if beta_ratio_power(v, a, b, &cfg.p)? < target {
            disproof = Some(json!({"set": set_json(v), "witness_a": set_json(a), "witness_b": set_json(b)}));
        }
    }
    let record = json!({
        "conjecture": "log_span",
        "index": index,
        "set": set_json(v),
        "beta": report_summary(&r),
        "target": format_rational(&target),
        "margin": format_rational(&margin),
        "disproof": disproof.is_some(),
    });
    Ok(Evaluation {
        record: Some(record),
        margin: Some(margin),
        incomplete: !r.complete,
        bug: false,
        disproof,
    })
}

fn evaluate_doubling_tripling(index: u64, u: &PointSet, cfg: &SearchConfig) -> Result<Evaluation> {
    // Alpha needs room for U itself.
    let cfg = cfg.clone().with_card(cfg.max_card.max(u.len())).with_p(Exponent::TWO);
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    for v in Variant::ALL {
        let c = cfg.clone().with_variant(v);
        alphas.push(alpha_estimate(u, &c)?);
        betas.push(beta_estimate(u, &c)?);
    }
    let complete = alphas.iter().chain(&betas).all(|r| r.complete);
    let ordered = |rs: &[EstimateReport]| exact(&rs[0]) <= exact(&rs[1]) && exact(&rs[1]) <= exact(&rs[2]);
    let d = u.dimension()?;
    let beta_lower = exact(&betas[0]) >= Rational::from_integer(((d + 1) * (d + 1)).into());
    // Chains are guaranteed only for complete searches; the lower bound for any enumerated pair.
    let bug = !beta_lower || (complete && !(ordered(&alphas) && ordered(&betas)));
    // beta <= alpha^2 in squared units: beta^2 <= (alpha^2)^2.
    let a2 = exact(&alphas[0]);
    let margin = &a2 * &a2 - exact(&betas[0]);
    let by_variant = |rs: &[EstimateReport]| -> Value {
        Variant::ALL
            .iter()
            .zip(rs)
            .map(|(v, r)| (v.as_str().to_string(), json!(r.exact_power.as_ref().map(format_rational))))
            .collect::<serde_json::Map<_, _>>()
            .into()
    };
    let record = json!({
        "conjecture": "doubling_tripling",
        "index": index,
        "set": set_json(u),
        "alpha_squared": by_variant(&alphas),
        "beta_squared": by_variant(&betas),
        "alpha_gap": format_rational(&(exact(&alphas[2]) - exact(&alphas[0]))),
        "beta_gap": format_rational(&(exact(&betas[2]) - exact(&betas[0]))),
        "margin": format_rational(&margin),
        "complete": complete,
        "bug": bug,
    });
    Ok(Evaluation {
        record: Some(record),
        margin: Some(margin),
        incomplete: !complete,
        bug,
        disproof: None,
    })
}

/// Runs or resumes a scan.
///
/// `emit` receives the report records in enumeration order. With a
/// checkpoint path the state is saved after every shard; a resumed run emits
/// exactly the records an uninterrupted run would have emitted after the
/// saved cursor.
pub fn scan(
    id: ConjectureId,
    space: &ScanSpace,
    cfg: &SearchConfig,
    resume: Option<ScanState>,
    checkpoint: Option<&Path>,
    opts: &ScanOptions,
    emit: &mut dyn FnMut(&Value) -> Result<()>,
) -> Result<ScanState> {
    if cfg.strategy != Strategy::Exhaustive {
        return Err(Error::invalid("conjecture scans use exhaustive searches"));
    }
    if opts.shard_size == 0 {
        return Err(Error::invalid("shard size must be positive"));
    }
    let evaluate: fn(u64, &PointSet, &SearchConfig) -> Result<Evaluation> = match id {
        ConjectureId::LogSpan => evaluate_log_span,
        ConjectureId::DoublingTripling => evaluate_doubling_tripling,
        other => {
            return Err(Error::invalid(format!(
                "no scan is defined for {}; use the matroid pair check for single maps",
                other.as_str()
            )))
        }
    };
    let enumeration = space.enumeration()?;
    let params = scan_params(id, space, cfg);
    let mut state = match resume {
        Some(s) => {
            if s.params != params || s.conjecture != id {
                return Err(Error::invalid("checkpoint was written for a different scan"));
            }
            s
        }
        None => ScanState::new(id, params, enumeration.total()),
    };
    let search_cfg = cfg.clone().with_threads(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let ctx = GroupContext::free(space.dim);
    let mut shards = 0u64;
    while !state.is_done() && opts.max_shards.map_or(true, |m| shards < m) {
        let end = (state.cursor + opts.shard_size).min(state.total);
        let batch = enumeration.range(state.cursor, end);
        let reps: Vec<(u64, Vec<Vec<i64>>)> = batch
            .iter()
            .filter_map(|(i, c)| enumeration.is_canonical(c).map(|pts| (*i, pts)))
            .collect();
        let results: Vec<Result<(u64, Vec<Vec<i64>>, Evaluation)>> = pool.install(|| {
            reps.par_iter()
                .map(|(i, pts)| {
                    let set = PointSet::new(ctx.clone(), pts.iter().map(|p| ctx.point(p)).collect::<Result<Vec<_>>>()?)?;
                    Ok((*i, pts.clone(), evaluate(*i, &set, &search_cfg)?))
                })
                .collect()
        });
        let mut next = state.clone();
        next.counters.enumerated += end - state.cursor;
        next.counters.canonical += reps.len() as u64;
        let mut records = Vec::new();
        for r in results {
            let (i, pts, ev) = r?;
            match ev.record {
                None => next.counters.skipped += 1,
                Some(rec) => {
                    next.counters.checked += 1;
                    next.counters.incomplete += ev.incomplete as u64;
                    next.counters.bugs += ev.bug as u64;
                    if let Some(m) = &ev.margin {
                        next.note_margin(m, i, &pts);
                    }
                    if next.counterexample.is_none() {
                        next.counterexample = ev.disproof;
                    }
                    records.push(rec);
                }
            }
        }
        for rec in &records {
            emit(rec)?;
        }
        next.records_emitted += records.len() as u64;
        next.cursor = end;
        if let Some(path) = checkpoint {
            next.save(path)?;
        }
        state = next;
        shards += 1;
    }
    Ok(state)
}
