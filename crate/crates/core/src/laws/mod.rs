//! Verifiers for the proved inequalities, each returning a [`Verdict`].
//!
//! Checks use exact arithmetic wherever the exponents allow it. Float checks
//! share the single tolerance [`TOLERANCE`].

mod suites;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::conjectures::{check_matroid_pair, MatroidMap};
use crate::error::{Error, Result};
use crate::exact::{format_rational, rational_to_f64, Exponent, Rational};
use crate::functional::{
    max_convolve, min_over_permutations, rearrange_nonincreasing, ExactFunction, DEFAULT_PERMUTATION_BOUND,
};
use crate::group::{compress, iterated_sumset, sumset, sumset_many, GroupContext, GroupVector, Homomorphism, PointSet};
use crate::quasicube::is_quasicube;
use crate::search::{
    alpha_estimate, beta_estimate, beta_ratio_power, c_p_constant, descent_for, gamma_estimate,
    gamma_indicator_estimate, geometric_family_ratio, two_point_constant, EstimateReport, SearchConfig, Strategy,
    Variant, Witness,
};

pub use suites::{random_interval_function, run_suite, DEFAULT_SUITE_COUNT, SUITES};

/// Tolerance for every float comparison.
pub const TOLERANCE: f64 = 1e-9;

/// Largest `|X|` for the Petridis subset precondition.
pub const PETRIDIS_MAX: usize = 6;
/// Largest `|X|` for the Plünnecke subset search.
pub const PLUNNECKE_MAX: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum Margin {
    Exact(Rational),
    Float(f64),
}

impl Margin {
    fn to_json(&self) -> Value {
        match self {
            Margin::Exact(r) => json!(format_rational(r)),
            Margin::Float(x) => json!(x),
        }
    }
}

/// How much a `holds = true` verdict establishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// The inequality was checked completely on the given inputs.
    Verified,
    /// Only a finite window was examined, or the check compares estimates
    /// rather than true values; nothing in it contradicts the claim.
    NoCounterexampleInWindow,
    Violated,
    /// Estimates point against a conjecture without settling it.
    EvidenceAgainst,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::NoCounterexampleInWindow => "no_counterexample_in_window",
            Status::Violated => "violated",
            Status::EvidenceAgainst => "evidence_against",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Typed inputs of one law instance; [`Instance::check`] reruns it.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    QuasicubeBeta { v: PointSet, cube: PointSet, cfg: SearchConfig },
    Prekopa { v: PointSet, cube: PointSet, p: Exponent, cfg: SearchConfig },
    BmCorollary { u: PointSet, d: usize, a: PointSet, b: PointSet },
    Petridis { x: PointSet, y: PointSet, z: PointSet },
    Plunnecke { x: PointSet, y: PointSet, k: usize },
    Compression { a: PointSet, b: PointSet, h: Homomorphism },
    BetaIsGamma { u: PointSet, p: Exponent, cfg: SearchConfig },
    Tensorization { f: ExactFunction, base_rank: usize, cfg: SearchConfig },
    TrivialLowerBounds { u: PointSet, cfg: SearchConfig },
    Independence { u: PointSet, m: i64, cfg: SearchConfig },
    BasicChains { u: PointSet, cfg: SearchConfig },
    TwoPoint(TwoPointGrid),
    Freiman { a: PointSet },
    Rearrangement { f: ExactFunction, g: ExactFunction, h: ExactFunction },
    MatroidPair { map: MatroidMap, cfg: SearchConfig },
}

impl Instance {
    pub fn law(&self) -> &'static str {
        match self {
            Instance::QuasicubeBeta { .. } => "quasicube_beta",
            Instance::Prekopa { .. } => "prekopa_discrete",
            Instance::BmCorollary { .. } => "bm_corollary",
            Instance::Petridis { .. } => "petridis",
            Instance::Plunnecke { .. } => "plunnecke",
            Instance::Compression { .. } => "compression_shrinks",
            Instance::BetaIsGamma { .. } => "beta_is_gamma",
            Instance::Tensorization { .. } => "tensorization",
            Instance::TrivialLowerBounds { .. } => "trivial_lower_bounds",
            Instance::Independence { .. } => "independence_beta",
            Instance::BasicChains { .. } => "basic_chains",
            Instance::TwoPoint(_) => "two_point",
            Instance::Freiman { .. } => "freiman",
            Instance::Rearrangement { .. } => "rearrangement",
            Instance::MatroidPair { .. } => "linear_matroid",
        }
    }

    pub fn check(&self) -> Result<Verdict> {
        match self {
            Instance::QuasicubeBeta { v, cube, cfg } => check_quasicube_beta(v, cube, cfg),
            Instance::Prekopa { v, cube, p, cfg } => check_prekopa_discrete(v, cube, p, cfg),
            Instance::BmCorollary { u, d, a, b } => check_bm_corollary(u, *d, a, b),
            Instance::Petridis { x, y, z } => check_petridis_instance(x, y, z),
            Instance::Plunnecke { x, y, k } => check_plunnecke(x, y, *k),
            Instance::Compression { a, b, h } => check_compression_shrinks(a, b, h),
            Instance::BetaIsGamma { u, p, cfg } => check_beta_is_gamma(u, p, cfg),
            Instance::Tensorization { f, base_rank, cfg } => check_tensorization(f, *base_rank, cfg),
            Instance::TrivialLowerBounds { u, cfg } => check_trivial_lower_bounds(u, cfg),
            Instance::Independence { u, m, cfg } => check_independence_beta(u, *m, cfg),
            Instance::BasicChains { u, cfg } => check_basic_chains(u, cfg),
            Instance::TwoPoint(grid) => check_two_point(grid),
            Instance::Freiman { a } => check_freiman(a),
            Instance::Rearrangement { f, g, h } => check_rearrangement(f, g, h),
            Instance::MatroidPair { map, cfg } => check_matroid_pair(map, cfg),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Instance::QuasicubeBeta { v, cube, cfg } => {
                json!({"v": set_json(v), "cube": set_json(cube), "config": cfg.to_json()})
            }
            Instance::Prekopa { v, cube, p, cfg } => {
                json!({"v": set_json(v), "cube": set_json(cube), "p": p.to_string(), "config": cfg.to_json()})
            }
            Instance::BmCorollary { u, d, a, b } => {
                json!({"u": set_json(u), "d": d, "a": set_json(a), "b": set_json(b)})
            }
            Instance::Petridis { x, y, z } => json!({"x": set_json(x), "y": set_json(y), "z": set_json(z)}),
            Instance::Plunnecke { x, y, k } => json!({"x": set_json(x), "y": set_json(y), "k": k}),
            Instance::Compression { a, b, h } => {
                json!({"a": set_json(a), "b": set_json(b), "dropped_coordinate": h.dropped_free_coordinate()})
            }
            Instance::BetaIsGamma { u, p, cfg } => {
                json!({"u": set_json(u), "p": p.to_string(), "config": cfg.to_json()})
            }
            Instance::Tensorization { f, base_rank, cfg } => {
                json!({"f": fn_json(f), "base_rank": base_rank, "config": cfg.to_json()})
            }
            Instance::TrivialLowerBounds { u, cfg } | Instance::BasicChains { u, cfg } => {
                json!({"u": set_json(u), "config": cfg.to_json()})
            }
            Instance::Independence { u, m, cfg } => json!({"u": set_json(u), "m": m, "config": cfg.to_json()}),
            Instance::TwoPoint(g) => json!({
                "deltas": g.deltas.iter().map(format_rational).collect::<Vec<_>>(),
                "ps": g.ps.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "max_len": g.max_len,
                "descent_starts": g.descent_starts,
                "seed": g.seed,
            }),
            Instance::Freiman { a } => json!({"a": set_json(a)}),
            Instance::Rearrangement { f, g, h } => json!({"f": fn_json(f), "g": fn_json(g), "h": fn_json(h)}),
            Instance::MatroidPair { map, cfg } => json!({"map": map.to_json(), "config": cfg.to_json()}),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub law: &'static str,
    pub holds: bool,
    pub status: Status,
    pub margin: Option<Margin>,
    pub instance: Instance,
    /// Supporting data (witnesses, intermediate values).
    pub evidence: Value,
    /// Present exactly when `holds` is false.
    pub counterexample: Option<Value>,
}

impl Verdict {
    pub(crate) fn new(instance: Instance, holds: bool, complete: bool) -> Self {
        Verdict {
            law: instance.law(),
            holds,
            status: if !holds {
                Status::Violated
            } else if complete {
                Status::Verified
            } else {
                Status::NoCounterexampleInWindow
            },
            margin: None,
            instance,
            evidence: Value::Null,
            counterexample: None,
        }
    }

    pub(crate) fn margin(mut self, m: Margin) -> Self {
        self.margin = Some(m);
        self
    }

    pub(crate) fn evidence(mut self, e: Value) -> Self {
        self.evidence = e;
        self
    }

    /// Attaches `cx` when the verdict is false.
    fn counterexample(mut self, cx: impl FnOnce() -> Value) -> Self {
        if !self.holds {
            self.counterexample = Some(cx());
        }
        self
    }

    /// Recomputes the verdict from its inputs.
    pub fn replay(&self) -> Result<Verdict> {
        self.instance.check()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "law": self.law,
            "holds": self.holds,
            "status": self.status.as_str(),
            "margin": self.margin.as_ref().map(Margin::to_json),
            "inputs": self.instance.to_json(),
            "evidence": self.evidence,
            "counterexample": self.counterexample,
        })
    }
}

pub fn set_json(s: &PointSet) -> Value {
    Value::Array(s.iter().map(|p| json!(p.coords())).collect())
}

fn fn_json(f: &ExactFunction) -> Value {
    Witness::Function(f.clone()).to_json()
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn pow(r: &Rational, k: u32) -> Rational {
    num_traits::pow(r.clone(), k as usize)
}

fn require_exhaustive(cfg: &SearchConfig) -> Result<()> {
    if cfg.strategy != Strategy::Exhaustive {
        return Err(Error::invalid("this check needs an exhaustive search configuration"));
    }
    Ok(())
}

fn report_json(r: &EstimateReport) -> Value {
    json!({
        "value_float": r.value_float,
        "value_exact": r.exact_power.as_ref().map(format_rational),
        "witness_a": r.witness_a.to_json(),
        "witness_b": r.witness_b.to_json(),
        "complete": r.complete,
        "nodes": r.nodes,
    })
}

fn witness_pair(r: &EstimateReport) -> Value {
    json!({"a": r.witness_a.to_json(), "b": r.witness_b.to_json()})
}

fn exact(r: &EstimateReport) -> Rational {
    r.exact_power.clone().expect("set witnesses carry exact values")
}

/// Dimension of a verified quasicube containing `v`.
fn cube_dimension(v: &PointSet, cube: &PointSet) -> Result<usize> {
    if v.is_empty() {
        return Err(Error::Empty("V"));
    }
    if !v.is_subset(cube) {
        return Err(Error::Precondition("V is not a subset of the given quasicube".into()));
    }
    if is_quasicube(cube)?.is_none() {
        return Err(Error::Precondition("the given set is not a quasicube".into()));
    }
    Ok(cube.len().trailing_zeros() as usize)
}

/// Every pair in the window satisfies `|A+B+V|^2 >= |V|^2 |A||B|`, with
/// equality attained.
pub fn check_quasicube_beta(v: &PointSet, cube: &PointSet, cfg: &SearchConfig) -> Result<Verdict> {
    require_exhaustive(cfg)?;
    if !cfg.p.is_two() {
        return Err(Error::invalid("the quasicube check runs at p = 2"));
    }
    cube_dimension(v, cube)?;
    let r = beta_estimate(v, cfg)?;
    let margin = exact(&r) - pow(&int(v.len()), 2);
    let instance = Instance::QuasicubeBeta { v: v.clone(), cube: cube.clone(), cfg: cfg.clone() };
    Ok(Verdict::new(instance, margin.is_zero(), r.complete)
        .margin(Margin::Exact(margin))
        .evidence(report_json(&r))
        .counterexample(|| witness_pair(&r)))
}

/// `beta_p(V) >= c_p^d |V|` on the window, `d` the dimension of the quasicube.
pub fn check_prekopa_discrete(v: &PointSet, cube: &PointSet, p: &Exponent, cfg: &SearchConfig) -> Result<Verdict> {
    require_exhaustive(cfg)?;
    let d = cube_dimension(v, cube)?;
    let run_cfg = cfg.clone().with_p(*p);
    let r = beta_estimate(v, &run_cfg)?;
    let (holds, margin) = if p.is_two() {
        let m = exact(&r) - pow(&int(v.len()), 2);
        (!m.is_negative(), Margin::Exact(m))
    } else {
        let bound = c_p_constant(p).powi(d as i32) * v.len() as f64;
        let m = r.value_float - bound;
        (m >= -TOLERANCE, Margin::Float(m))
    };
    let instance = Instance::Prekopa { v: v.clone(), cube: cube.clone(), p: *p, cfg: cfg.clone() };
    Ok(Verdict::new(instance, holds, r.complete)
        .margin(margin)
        .evidence(report_json(&r))
        .counterexample(|| witness_pair(&r)))
}

/// `|A+B+U|^{1/d} >= (|U|/2^d)(|A|^{1/d} + |B|^{1/d})`, exact for `d <= 2`.
pub fn check_bm_corollary(u: &PointSet, d: usize, a: &PointSet, b: &PointSet) -> Result<Verdict> {
    if d == 0 {
        return Err(Error::invalid("the Brunn-Minkowski form needs d >= 1"));
    }
    let n = sumset_many(&[a, b, u])?.len();
    let (na, nb, nu) = (a.len(), b.len(), u.len());
    let lhs = (n as f64).powf(1.0 / d as f64);
    let rhs = nu as f64 / 2f64.powi(d as i32) * ((na as f64).powf(1.0 / d as f64) + (nb as f64).powf(1.0 / d as f64));
    let holds = match d {
        // 2n >= |U|(|A| + |B|)
        1 => BigInt::from(2 * n) >= BigInt::from(nu) * BigInt::from(na + nb),
        // 16n - |U|^2(|A| + |B|) >= 2|U|^2 sqrt(|A||B|)
        2 => {
            let u2 = BigInt::from(nu * nu);
            let l = BigInt::from(16 * n) - &u2 * BigInt::from(na + nb);
            !l.is_negative() && &l * &l >= BigInt::from(4) * &u2 * &u2 * BigInt::from(na * nb)
        }
        _ => lhs >= rhs - TOLERANCE * rhs.max(1.0),
    };
    let instance = Instance::BmCorollary { u: u.clone(), d, a: a.clone(), b: b.clone() };
    Ok(Verdict::new(instance, holds, true)
        .margin(Margin::Float(lhs - rhs))
        .evidence(json!({"sumset_size": n}))
        .counterexample(|| json!({"sumset_size": n, "lhs": lhs, "rhs": rhs})))
}

/// A nonempty `X' ⊆ X` with `|X'+Y|/|X'| < |X+Y|/|X|`, if any.
pub fn petridis_smaller_subset(x: &PointSet, y: &PointSet) -> Result<Option<PointSet>> {
    if x.len() > PETRIDIS_MAX {
        return Err(Error::SizeBound {
            what: "Petridis X",
            size: x.len(),
            limit: PETRIDIS_MAX,
        });
    }
    let full = sumset(x, y)?.len();
    for mask in 1u64..(1 << x.len()) {
        let xs = x.subset_by_mask(mask);
        if sumset(&xs, y)?.len() * x.len() < full * xs.len() {
            return Ok(Some(xs));
        }
    }
    Ok(None)
}

/// `|X+Y+Z| |X| <= |X+Y| |X+Z|` for `X` minimizing `|X'+Y|/|X'|`.
///
/// Instances where the minimality hypothesis fails are rejected with
/// [`Error::Precondition`]; they are not counterexamples.
pub fn check_petridis_instance(x: &PointSet, y: &PointSet, z: &PointSet) -> Result<Verdict> {
    if x.is_empty() || y.is_empty() || z.is_empty() {
        return Err(Error::Empty("Petridis operand"));
    }
    if let Some(better) = petridis_smaller_subset(x, y)? {
        return Err(Error::Precondition(format!(
            "X is not minimal: the subset {} has a smaller ratio",
            set_json(&better)
        )));
    }
    let lhs = sumset_many(&[x, y, z])?.len() * x.len();
    let rhs = sumset(x, y)?.len() * sumset(x, z)?.len();
    let instance = Instance::Petridis { x: x.clone(), y: y.clone(), z: z.clone() };
    Ok(Verdict::new(instance, lhs <= rhs, true)
        .margin(Margin::Exact(int(rhs) - int(lhs)))
        .counterexample(|| json!({"lhs": lhs, "rhs": rhs})))
}

/// Some nonempty `X' ⊆ X` has `|X'+kY| |X|^k <= |X+Y|^k |X'|`.
pub fn check_plunnecke(x: &PointSet, y: &PointSet, k: usize) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    if x.len() > PLUNNECKE_MAX {
        return Err(Error::SizeBound {
            what: "Plünnecke X",
            size: x.len(),
            limit: PLUNNECKE_MAX,
        });
    }
    if x.is_empty() || y.is_empty() {
        return Err(Error::Empty("Plünnecke operand"));
    }
    let ky = iterated_sumset(y, k)?;
    let xy = int(sumset(x, y)?.len());
    let nx = int(x.len());
    let kk = k as u32;
    // Smallest |X'+kY| / |X'|; ties keep the first mask.
    let mut best: Option<(Rational, PointSet, usize)> = None;
    for mask in 1u64..(1 << x.len()) {
        let xs = x.subset_by_mask(mask);
        let s = sumset(&xs, &ky)?.len();
        let ratio = int(s) / int(xs.len());
        if best.as_ref().map_or(true, |(r, _, _)| ratio < *r) {
            best = Some((ratio, xs, s));
        }
    }
    let (_, xs, s) = best.expect("X is nonempty");
    let margin = pow(&xy, kk) * int(xs.len()) - int(s) * pow(&nx, kk);
    let instance = Instance::Plunnecke { x: x.clone(), y: y.clone(), k };
    Ok(Verdict::new(instance, !margin.is_negative(), true)
        .margin(Margin::Exact(margin))
        .evidence(json!({"x_prime": set_json(&xs), "sumset_size": s}))
        .counterexample(|| json!({"best_x_prime": set_json(&xs), "sumset_size": s})))
}

/// `C(A) + C(B) ⊆ C(A+B)`, and compression preserves size.
pub fn check_compression_shrinks(a: &PointSet, b: &PointSet, h: &Homomorphism) -> Result<Verdict> {
    let ca = compress(a, h)?;
    let cb = compress(b, h)?;
    let cab = compress(&sumset(a, b)?, h)?;
    let lhs = sumset(&ca, &cb)?;
    let missing: Vec<Vec<i64>> = lhs.iter().filter(|p| !cab.contains(p)).map(|p| p.coords()).collect();
    let sizes_ok = ca.len() == a.len() && cb.len() == b.len();
    let holds = missing.is_empty() && sizes_ok;
    let instance = Instance::Compression { a: a.clone(), b: b.clone(), h: h.clone() };
    Ok(Verdict::new(instance, holds, true)
        .margin(Margin::Exact(int(cab.len()) - int(lhs.len())))
        .evidence(json!({"ca": set_json(&ca), "cb": set_json(&cb), "c_sum": set_json(&cab)}))
        .counterexample(|| json!({"missing": missing, "sizes_preserved": sizes_ok})))
}

/// The set search and the indicator-function search agree exactly on one
/// window, and weighted refinement does not undercut the set value.
pub fn check_beta_is_gamma(u: &PointSet, p: &Exponent, cfg: &SearchConfig) -> Result<Verdict> {
    require_exhaustive(cfg)?;
    let run_cfg = cfg.clone().with_p(*p);
    let beta = beta_estimate(u, &run_cfg)?;
    let f = ExactFunction::indicator(u);
    let gi = gamma_indicator_estimate(&f, &run_cfg)?;
    let gw = gamma_estimate(&f, &run_cfg)?;
    let same = beta.exact_power == gi.exact_power;
    let weighted_ok = gw.value_float >= beta.value_float - TOLERANCE;
    let instance = Instance::BetaIsGamma { u: u.clone(), p: *p, cfg: cfg.clone() };
    Ok(Verdict::new(instance, same && weighted_ok, beta.complete && gi.complete)
        .margin(Margin::Float(gw.value_float - beta.value_float))
        .evidence(json!({
            "beta": report_json(&beta),
            "gamma_indicators": report_json(&gi),
            "gamma_weighted": report_json(&gw),
        }))
        .counterexample(|| json!({"indicator_values_equal": same, "weighted": report_json(&gw)})))
}

/// Splits a configuration on `Z^n` into the windows for the first `k`
/// coordinates and for the rest.
fn split_config(cfg: &SearchConfig, n: usize, k: usize) -> Result<(SearchConfig, SearchConfig)> {
    let bounds = match cfg.bounds.len() {
        1 => vec![cfg.bounds[0]; n],
        m if m == n => cfg.bounds.clone(),
        m => return Err(Error::invalid(format!("box has {m} intervals for {n} coordinates"))),
    };
    Ok((cfg.clone().with_box(&bounds[..k]), cfg.clone().with_box(&bounds[k..])))
}

/// Restriction of `f` to each fiber of the projection onto the first `k`
/// coordinates, as a function of the remaining coordinates.
fn fiber_functions(f: &ExactFunction, k: usize) -> Result<Vec<(GroupVector, ExactFunction)>> {
    let n = f.context().free_rank();
    let base_ctx = GroupContext::free(k);
    let fiber_ctx = GroupContext::free(n - k);
    let mut groups: BTreeMap<GroupVector, Vec<(GroupVector, Rational)>> = BTreeMap::new();
    for (x, w) in f.iter() {
        let c = x.free_coords();
        groups
            .entry(base_ctx.point(&c[..k])?)
            .or_default()
            .push((fiber_ctx.point(&c[k..])?, w.clone()));
    }
    groups
        .into_iter()
        .map(|(b, entries)| Ok((b, ExactFunction::new(fiber_ctx.clone(), entries)?)))
        .collect()
}

/// `(U, V)` when `f` is the indicator of `U × V`.
fn product_factors(f: &ExactFunction, k: usize) -> Result<Option<(PointSet, PointSet)>> {
    if f.weights().any(|w| !w.is_one()) {
        return Ok(None);
    }
    let fibers = fiber_functions(f, k)?;
    let first = fibers[0].1.support();
    if fibers.iter().any(|(_, g)| g.support() != first) {
        return Ok(None);
    }
    let base = PointSet::new(GroupContext::free(k), fibers.iter().map(|(b, _)| b.clone()))?;
    Ok(Some((base, first)))
}

/// Fiber estimates are irrational in general; they enter the base function
/// rounded to this grid, well inside [`TOLERANCE`] relative error.
const FIBER_VALUE_BITS: u32 = 34;

fn round_fiber_value(x: f64) -> Result<Rational> {
    let scale = (1u64 << FIBER_VALUE_BITS) as f64;
    let n = (x * scale).round();
    if !n.is_finite() || n < 1.0 {
        return Err(Error::invalid("fiber estimate out of range"));
    }
    Ok(Rational::new(BigInt::from(n as u64), BigInt::from(1u64 << FIBER_VALUE_BITS)))
}

/// Fiber-wise estimates combine into a base function whose estimate does not
/// exceed that of `f`; for product indicators the estimates multiply.
///
/// Fibers are taken along the projection onto the first `base_rank` free
/// coordinates. All estimates are indicator-pair searches on matched
/// windows (same intervals, same cardinality bound).
pub fn check_tensorization(f: &ExactFunction, base_rank: usize, cfg: &SearchConfig) -> Result<Verdict> {
    require_exhaustive(cfg)?;
    let ctx = f.context();
    if !ctx.is_torsion_free() || base_rank == 0 || base_rank >= ctx.free_rank() {
        return Err(Error::invalid("tensorization needs f on Z^n and 0 < base_rank < n"));
    }
    let n = ctx.free_rank();
    let (base_cfg, fiber_cfg) = split_config(cfg, n, base_rank)?;
    let whole = gamma_indicator_estimate(f, cfg)?;
    let mut complete = whole.complete;
    let mut fiber_values = Vec::new();
    for (b, g) in fiber_functions(f, base_rank)? {
        let r = gamma_indicator_estimate(&g, &fiber_cfg)?;
        complete &= r.complete;
        fiber_values.push((b, round_fiber_value(r.value_float)?));
    }
    let f_phi = ExactFunction::new(GroupContext::free(base_rank), fiber_values)?;
    let reduced = gamma_indicator_estimate(&f_phi, &base_cfg)?;
    complete &= reduced.complete;
    let scale = whole.value_float.max(1.0);
    let mut holds = whole.value_float >= reduced.value_float - TOLERANCE * scale;
    let mut evidence = json!({
        "whole": report_json(&whole),
        "fiber_function": fn_json(&f_phi),
        "reduced": report_json(&reduced),
    });
    let mut multiplicative = None;
    if let Some((u, v)) = product_factors(f, base_rank)? {
        let ru = gamma_indicator_estimate(&ExactFunction::indicator(&u), &base_cfg)?;
        let rv = gamma_indicator_estimate(&ExactFunction::indicator(&v), &fiber_cfg)?;
        complete &= ru.complete && rv.complete;
        let ok = if cfg.p.is_two() {
            whole.exact_power == Some(exact(&ru) * exact(&rv))
        } else {
            (whole.value_float - ru.value_float * rv.value_float).abs() <= TOLERANCE * scale
        };
        evidence["factor_u"] = report_json(&ru);
        evidence["factor_v"] = report_json(&rv);
        multiplicative = Some(ok);
        holds &= ok;
    }
    evidence["multiplicative"] = json!(multiplicative);
    evidence["searches_complete"] = json!(complete);
    let instance = Instance::Tensorization { f: f.clone(), base_rank, cfg: cfg.clone() };
    // Both sides are upper estimates of infima, so agreement is evidence only.
    Ok(Verdict::new(instance, holds, false)
        .margin(Margin::Float(whole.value_float - reduced.value_float))
        .evidence(evidence)
        .counterexample(|| {
            json!({"whole": whole.value_float, "reduced": reduced.value_float, "multiplicative": multiplicative})
        }))
}

/// `beta >= 2` and `alpha >= 3/2` for `U` of positive dimension; for
/// zero-dimensional `U` both are 1.
pub fn check_trivial_lower_bounds(u: &PointSet, cfg: &SearchConfig) -> Result<Verdict> {
    require_exhaustive(cfg)?;
    let run_cfg = cfg.clone().with_p(Exponent::TWO).with_variant(Variant::Unrestricted);
    let beta = beta_estimate(u, &run_cfg)?;
    let alpha = alpha_estimate(u, &run_cfg)?;
    let (b2, a2) = (exact(&beta), exact(&alpha));
    let degenerate = u.dimension()? == 0;
    let (holds, margin) = if degenerate {
        (b2.is_one() && a2.is_one(), Margin::Exact(&b2 - Rational::one()))
    } else {
        let mb = &b2 - int(4);
        let ma = &a2 - Rational::new(9.into(), 4.into());
        (!mb.is_negative() && !ma.is_negative(), Margin::Exact(mb.min(ma)))
    };
    let instance = Instance::TrivialLowerBounds { u: u.clone(), cfg: cfg.clone() };
    Ok(Verdict::new(instance, holds, beta.complete && alpha.complete)
        .margin(margin)
        .evidence(json!({"degenerate": degenerate, "beta": report_json(&beta), "alpha": report_json(&alpha)}))
        .counterexample(|| json!({"beta": witness_pair(&beta), "alpha": witness_pair(&alpha)})))
}

/// The estimate for `mU` on the `m`-scaled window equals the estimate for
/// `U`, and the scaled base witness reproduces it.
pub fn check_independence_beta(u: &PointSet, m: i64, cfg: &SearchConfig) -> Result<Verdict> {
    require_exhaustive(cfg)?;
    let ctx = u.context();
    if ctx.free_rank() != 1 || !ctx.is_torsion_free() {
        return Err(Error::invalid("the independence check works on subsets of Z"));
    }
    if m < 1 {
        return Err(Error::invalid("m must be >= 1"));
    }
    let scale = |s: &PointSet| -> Result<PointSet> {
        PointSet::new(ctx.clone(), s.iter().map(|p| ctx.scale(m, p)).collect::<Result<Vec<_>>>()?)
    };
    let base = beta_estimate(u, cfg)?;
    let mu = scale(u)?;
    let bounds: Vec<(i64, i64)> = cfg.bounds.iter().map(|&(a, b)| (a * m, b * m)).collect();
    let scaled = beta_estimate(&mu, &cfg.clone().with_box(&bounds))?;
    let (a, b) = (base.witness_a.as_set().unwrap(), base.witness_b.as_set().unwrap());
    let transported = beta_ratio_power(&mu, &scale(a)?, &scale(b)?, &cfg.p)?;
    let transport_ok = transported == exact(&base);
    let margin = exact(&scaled) - exact(&base);
    let instance = Instance::Independence { u: u.clone(), m, cfg: cfg.clone() };
    Ok(Verdict::new(instance, margin.is_zero() && transport_ok, base.complete && scaled.complete)
        .margin(Margin::Exact(margin))
        .evidence(json!({"base": report_json(&base), "scaled": report_json(&scaled)}))
        .counterexample(|| json!({"scaled_witness": witness_pair(&scaled), "transport_ok": transport_ok})))
}

/// The six estimates on one window: both nesting chains, `beta >= d+1`,
/// `beta'' <= |U|`, plus cross-quantity comparisons recorded as evidence.
pub fn check_basic_chains(u: &PointSet, cfg: &SearchConfig) -> Result<Verdict> {
    require_exhaustive(cfg)?;
    let run_cfg = cfg.clone().with_p(Exponent::TWO);
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    for v in Variant::ALL {
        let c = run_cfg.clone().with_variant(v);
        alphas.push(alpha_estimate(u, &c)?);
        betas.push(beta_estimate(u, &c)?);
    }
    let ordered = |rs: &[EstimateReport]| exact(&rs[0]) <= exact(&rs[1]) && exact(&rs[1]) <= exact(&rs[2]);
    let d = u.dimension()?;
    let beta_lower = exact(&betas[0]) >= pow(&int(d + 1), 2);
    let beta_upper = exact(&betas[2]) <= pow(&int(u.len()), 2);
    let holds = ordered(&alphas) && ordered(&betas) && beta_lower && beta_upper;
    // Relations between different quantities compare two upper estimates;
    // they are reported but never decide the verdict.
    let a2 = exact(&alphas[0]);
    let beta_le_alpha_sq = exact(&betas[0]) <= &a2 * &a2;
    let alpha_le_beta = a2 <= exact(&betas[0]);
    let complete = alphas.iter().chain(&betas).all(|r| r.complete);
    let by_variant = |rs: &[EstimateReport]| -> Value {
        Variant::ALL
            .iter()
            .zip(rs)
            .map(|(v, r)| (v.as_str().to_string(), report_json(r)))
            .collect::<serde_json::Map<_, _>>()
            .into()
    };
    let instance = Instance::BasicChains { u: u.clone(), cfg: cfg.clone() };
    Ok(Verdict::new(instance, holds, complete)
        .margin(Margin::Exact(exact(&betas[0]) - pow(&int(d + 1), 2)))
        .evidence(json!({
            "alpha": by_variant(&alphas),
            "beta": by_variant(&betas),
            "dimension": d,
            "estimates_beta_le_alpha_squared": beta_le_alpha_sq,
            "estimates_alpha_le_beta": alpha_le_beta,
        }))
        .counterexample(|| {
            json!({
                "alpha_chain": ordered(&alphas),
                "beta_chain": ordered(&betas),
                "beta_at_least_d_plus_1": beta_lower,
                "isomeric_beta_at_most_size": beta_upper,
            })
        }))
}

/// Grid for the two-point checks.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPointGrid {
    pub deltas: Vec<Rational>,
    pub ps: Vec<Exponent>,
    /// Family members `r = s = 0..=max_len`.
    pub max_len: usize,
    /// Random starts per `(δ, p)` for the descent part.
    pub descent_starts: usize,
    pub seed: u64,
}

impl Default for TwoPointGrid {
    fn default() -> Self {
        TwoPointGrid {
            deltas: (0..=10).map(|k| Rational::new(k.into(), 10.into())).collect(),
            ps: vec![Exponent::TWO, Exponent::new(3, 2).unwrap(), Exponent::new(3, 1).unwrap()],
            max_len: 8,
            descent_starts: 3,
            seed: 0,
        }
    }
}

/// Two-point functions `f_δ = (1, δ)`.
///
/// Per `(δ, p)`: geometric-family ratios with `r = s` never drop below
/// `c_δ(p)` and move towards it as `r` grows; descent from random starts
/// stays above `c_δ(p)`; and `c_δ(p) >= c_p (1 + δ)`. At `p = 2` every
/// family member is exactly `1 + δ`.
pub fn check_two_point(grid: &TwoPointGrid) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut rows = Vec::new();
    let mut holds = true;
    let mut worst = f64::INFINITY;
    for delta in &grid.deltas {
        if delta.is_negative() || *delta > Rational::one() {
            return Err(Error::invalid("delta outside [0, 1]"));
        }
        let f = ExactFunction::sequence(&[Rational::one(), delta.clone()])?;
        let df = rational_to_f64(delta);
        let cells: Vec<GroupVector> =
            (0..=grid.max_len as i64).map(|i| f.context().point(&[i])).collect::<Result<_>>()?;
        for p in &grid.ps {
            let c = two_point_constant(df, p)?;
            let mut gaps = Vec::new();
            let mut exact_ok = true;
            for r in 0..=grid.max_len {
                let v = geometric_family_ratio(&f, delta, r, r, p)?;
                gaps.push(v.value - c);
                if p.is_two() {
                    let one_plus = Rational::one() + delta;
                    exact_ok &= v.exact_squared == Some(&one_plus * &one_plus);
                }
            }
            let above = gaps.iter().all(|g| *g >= -TOLERANCE);
            let approaching = gaps.windows(2).all(|w| w[1] <= w[0] + TOLERANCE);
            let descent = descent_for(&f, &cells, &cells, p)?;
            let mut descent_min = f64::INFINITY;
            for _ in 0..grid.descent_starts {
                let g0: Vec<f64> = cells.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
                let h0: Vec<f64> = cells.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
                descent_min = descent_min.min(descent(&g0, &h0));
            }
            let descent_ok = descent_min >= c - TOLERANCE;
            let lower = c - c_p_constant(p) * (1.0 + df);
            let ok = above && approaching && exact_ok && descent_ok && lower >= -TOLERANCE;
            holds &= ok;
            let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
            worst = worst.min(min_gap).min(descent_min - c).min(lower);
            rows.push(json!({
                "delta": format_rational(delta),
                "p": p.to_string(),
                "c_delta": c,
                "family_gaps": gaps,
                "descent_min": descent_min,
                "lower_bound_margin": lower,
                "exact_at_p2": exact_ok,
                "ok": ok,
            }));
        }
    }
    let failing: Vec<Value> = rows.iter().filter(|r| r["ok"] == json!(false)).cloned().collect();
    Ok(Verdict::new(Instance::TwoPoint(grid.clone()), holds, false)
        .margin(Margin::Float(worst))
        .evidence(json!(rows))
        .counterexample(|| json!(failing)))
}

/// `|A+A| >= (d+1)|A| - d(d+1)/2` with `d = dim A`.
pub fn check_freiman(a: &PointSet) -> Result<Verdict> {
    if a.is_empty() {
        return Err(Error::Empty("A"));
    }
    let d = a.dimension()? as i128;
    let lhs = sumset(a, a)?.len() as i128;
    let rhs = (d + 1) * a.len() as i128 - d * (d + 1) / 2;
    Ok(Verdict::new(Instance::Freiman { a: a.clone() }, lhs >= rhs, true)
        .margin(Margin::Exact(Rational::from_integer(BigInt::from(lhs - rhs))))
        .evidence(json!({"dimension": d, "sumset_size": lhs}))
        .counterexample(|| json!({"lhs": lhs, "rhs": rhs})))
}

fn is_interval(f: &ExactFunction) -> bool {
    let xs: Vec<i64> = f.iter().map(|(x, _)| x.free_coords()[0]).collect();
    xs.windows(2).all(|w| w[1] == w[0] + 1)
}

/// Nonincreasing rearrangements minimize `‖f ⊞ g ⊞ h‖_1` over permutations
/// of the three supports.
///
/// Supports must be integer intervals: with gaps the nonincreasing order is
/// often beaten.
pub fn check_rearrangement(f: &ExactFunction, g: &ExactFunction, h: &ExactFunction) -> Result<Verdict> {
    for (name, k) in [("f", f), ("g", g), ("h", h)] {
        let ctx = k.context();
        if ctx.free_rank() != 1 || !ctx.is_torsion_free() {
            return Err(Error::invalid("rearrangement works on functions on Z"));
        }
        if k.is_empty() {
            return Err(Error::Empty("rearrangement operand"));
        }
        if !is_interval(k) {
            return Err(Error::Precondition(format!("the support of {name} is not an interval")));
        }
    }
    let brute = min_over_permutations(f, g, h, DEFAULT_PERMUTATION_BOUND)?;
    let (rf, rg, rh) = (rearrange_nonincreasing(f)?, rearrange_nonincreasing(g)?, rearrange_nonincreasing(h)?);
    let value = max_convolve(&max_convolve(&rf, &rg)?, &rh)?.l1();
    let instance = Instance::Rearrangement { f: f.clone(), g: g.clone(), h: h.clone() };
    Ok(Verdict::new(instance, value == brute.value, true)
        .margin(Margin::Exact(&value - &brute.value))
        .evidence(json!({"rearranged_value": format_rational(&value), "minimum": format_rational(&brute.value)}))
        .counterexample(|| json!({"minimizer": brute.arrangement.iter().map(fn_json).collect::<Vec<_>>()})))
}

#[cfg(test)]
mod tests;
