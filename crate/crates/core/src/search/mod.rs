//! Witnessed upper bounds on the doubling and tripling infima.

pub mod closed_form;
pub mod config;
pub(crate) mod engine;
mod gamma;
mod hill;
pub mod report;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{Exponent, Rational};
use crate::functional::{gamma_ratio, max_convolve, ExactFunction};
use crate::group::{sumset, sumset_many, GroupContext, PointSet};

pub use closed_form::{c_p_constant, two_point_constant, two_point_constant_exact, C_P_LIMIT_AT_ONE};
pub use config::{node_ceiling_from_env, parse_box, SearchConfig, Strategy, Variant, DEFAULT_NODE_CEILING, NODE_CEILING_ENV};
pub use gamma::geometric_family_ratio;
pub use report::{exact_ratio_power, ratio_float, EstimateReport, HistoryEntry, Quantity, Witness, TOOL_VERSION};

use engine::{Exhaustive, Grid, NodeList, Params, SumSpace};
use hill::{hill_climb, HillParams};

/// Boxes with at most this many cells (and no more than the cardinality
/// bound) get weight refinement on the whole box.
const FULL_BOX_DESCENT_CELLS: usize = 16;

/// Outcome of a search over pairs of sets.
struct SetResult {
    a: PointSet,
    b: PointSet,
    numerator: u64,
    nodes: u64,
    complete: bool,
    /// `(nodes, numerator, |A|, |B|)`.
    history: Vec<(u64, u64, u32, u32)>,
}

struct Problem {
    ctx: GroupContext,
    space: SumSpace,
    contain: Option<Vec<(Vec<u64>, Vec<i64>)>>,
    contain_cells: Option<Vec<usize>>,
    p: Exponent,
}

impl Problem {
    fn new(
        ctx: &GroupContext,
        levels: &[(u64, PointSet)],
        contain: Option<&PointSet>,
        p: Exponent,
        cfg: &SearchConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        let grid = Grid::new(cfg.widths(ctx)?, ctx.torsion_moduli().to_vec())?;
        let (contain, contain_cells) = match contain {
            None => (None, None),
            Some(u) => {
                if u.len() > cfg.max_card {
                    return Err(Error::Precondition(format!(
                        "max_card {} is smaller than |U| = {}",
                        cfg.max_card,
                        u.len()
                    )));
                }
                let anchored = u.anchored()?;
                let coords: Vec<(Vec<u64>, Vec<i64>)> = anchored
                    .iter()
                    .map(|x| (x.torsion_coords().to_vec(), x.free_coords().to_vec()))
                    .collect();
                let cells = coords
                    .iter()
                    .map(|(t, f)| grid.cell_of(t, f))
                    .collect::<Option<Vec<usize>>>()
                    .ok_or_else(|| Error::Precondition("box is too small to contain a translate of U".into()))?;
                (Some(coords), Some(cells))
            }
        };
        let space = SumSpace::new(grid, levels)?;
        Ok(Problem {
            ctx: ctx.clone(),
            space,
            contain,
            contain_cells,
            p,
        })
    }

    fn solve(&self, cfg: &SearchConfig) -> Result<SetResult> {
        let grid = &self.space.grid;
        match cfg.strategy {
            Strategy::Exhaustive => {
                let nodes = NodeList::build(grid, cfg.max_card)?;
                let params = Params {
                    p: self.p,
                    variant: cfg.variant,
                    card: cfg.max_card,
                    symmetric: self.p.is_two() && cfg.variant != Variant::Isomeric,
                    contain: self.contain.clone(),
                    threads: cfg.threads,
                    budget_ms: cfg.budget_ms,
                    node_ceiling: cfg.node_ceiling,
                };
                let ex = Exhaustive {
                    space: &self.space,
                    nodes: &nodes,
                    params: &params,
                };
                let out = ex.run()?;
                let best = out
                    .best
                    .ok_or_else(|| Error::Precondition("no feasible pair in the search window".into()))?;
                Ok(SetResult {
                    a: grid.to_point_set(&self.ctx, &nodes.cells(best.ia as usize)),
                    b: grid.to_point_set(&self.ctx, &nodes.cells(best.ib as usize)),
                    numerator: best.n,
                    nodes: out.nodes,
                    complete: out.complete,
                    history: out.history.iter().map(|(k, b)| (*k, b.n, b.a, b.b)).collect(),
                })
            }
            Strategy::HillClimb => {
                let params = HillParams {
                    p: self.p,
                    variant: cfg.variant,
                    card: cfg.max_card,
                    contain: self.contain.as_deref(),
                    contain_cells: self.contain_cells.clone(),
                    seed: cfg.seed,
                    restarts: cfg.restarts,
                };
                let out = hill_climb(&self.space, &params);
                Ok(SetResult {
                    a: grid.to_point_set(&self.ctx, &out.a).anchored()?,
                    b: grid.to_point_set(&self.ctx, &out.b).anchored()?,
                    numerator: out.n,
                    nodes: out.evaluations,
                    complete: false,
                    history: out.history,
                })
            }
            Strategy::GeometricFamily => Err(Error::invalid(
                "the geometric family strategy applies to gamma estimates only",
            )),
        }
    }
}

fn history_entries(h: &[(u64, u64, u32, u32)], scale: &Rational, p: &Exponent) -> Vec<HistoryEntry> {
    h.iter()
        .map(|&(nodes, n, a, b)| HistoryEntry {
            nodes,
            value_float: ratio_float(&(Rational::from_integer(n.into()) / scale), a as usize, b as usize, p),
        })
        .collect()
}

fn check_nonempty(u: &PointSet) -> Result<()> {
    if u.is_empty() {
        Err(Error::Empty("U"))
    } else {
        Ok(())
    }
}

/// Upper bound on `inf |A+B+U| / (|A|^{1/p} |B|^{1/q})` over the window.
pub fn beta_estimate(u: &PointSet, cfg: &SearchConfig) -> Result<EstimateReport> {
    check_nonempty(u)?;
    let prob = Problem::new(u.context(), &[(1, u.clone())], None, cfg.p, cfg)?;
    let r = prob.solve(cfg)?;
    let one = Rational::from_integer(BigInt::from(1));
    let n = Rational::from_integer(r.numerator.into());
    let power = exact_ratio_power(&n, r.a.len(), r.b.len(), &cfg.p);
    Ok(EstimateReport {
        quantity: Quantity::Beta,
        p: cfg.p,
        variant: cfg.variant,
        value_float: ratio_float(&n, r.a.len(), r.b.len(), &cfg.p),
        exact_power: Some(power),
        witness_a: Witness::Set(r.a),
        witness_b: Witness::Set(r.b),
        nodes: r.nodes,
        complete: r.complete,
        config: cfg.clone(),
        history: history_entries(&r.history, &one, &cfg.p),
    })
}

/// Translate of `a` that contains `u`.
fn place_containing(a: &PointSet, u: &PointSet) -> Result<PointSet> {
    let ctx = a.context();
    let u0 = &u.points()[0];
    for x in a {
        let t = ctx.sub(x, u0)?;
        let shifted = u.translate(&t)?;
        if shifted.is_subset(a) {
            return a.translate(&ctx.neg(&t)?);
        }
    }
    Err(Error::Precondition("witness does not contain a translate of U".into()))
}

/// Upper bound on `inf |A+B| / sqrt(|A||B|)` over `A, B` containing translates of `U`.
///
/// Always uses `p = 2`; the configured `p` is ignored.
pub fn alpha_estimate(u: &PointSet, cfg: &SearchConfig) -> Result<EstimateReport> {
    check_nonempty(u)?;
    let ctx = u.context();
    let origin = PointSet::new(ctx.clone(), [ctx.zero()])?;
    let p = Exponent::TWO;
    let prob = Problem::new(ctx, &[(1, origin)], Some(u), p, cfg)?;
    let r = prob.solve(cfg)?;
    let one = Rational::from_integer(BigInt::from(1));
    let n = Rational::from_integer(r.numerator.into());
    let power = exact_ratio_power(&n, r.a.len(), r.b.len(), &p);
    let mut config = cfg.clone();
    config.p = p;
    Ok(EstimateReport {
        quantity: Quantity::Alpha,
        p,
        variant: cfg.variant,
        value_float: ratio_float(&n, r.a.len(), r.b.len(), &p),
        exact_power: Some(power),
        witness_a: Witness::Set(place_containing(&r.a, u)?),
        witness_b: Witness::Set(place_containing(&r.b, u)?),
        nodes: r.nodes,
        complete: r.complete,
        config,
        history: history_entries(&r.history, &one, &p),
    })
}

/// Upper bound on `inf ‖f ⊞ g ⊞ h‖_1 / (‖g‖_p ‖h‖_q)`.
///
/// Exhaustive and hill-climb strategies search indicator pairs, then refine
/// weights by coordinate descent on the best supports (on the whole box when
/// it is small). The geometric family strategy tries `g, h` of the form
/// `(1, δ, ..., δ^r)` and needs `f` on `Z`.
pub fn gamma_estimate(f: &ExactFunction, cfg: &SearchConfig) -> Result<EstimateReport> {
    if f.is_empty() {
        return Err(Error::Empty("f"));
    }
    cfg.validate()?;
    let p = cfg.p;
    if cfg.strategy == Strategy::GeometricFamily {
        let equal_lengths = cfg.variant != Variant::Unrestricted;
        let best = gamma::geometric_family_search(f, cfg.max_card, &p, equal_lengths)?;
        return Ok(EstimateReport {
            quantity: Quantity::Gamma,
            p,
            variant: cfg.variant,
            value_float: best.value.value,
            exact_power: best.value.exact_squared.clone(),
            witness_a: Witness::Function(best.g),
            witness_b: Witness::Function(best.h),
            nodes: best.evaluations,
            complete: true,
            config: cfg.clone(),
            history: Vec::new(),
        });
    }
    let (mut report, prob, r) = gamma_indicators(f, cfg)?;
    if let Some((g, h, value)) = refine(f, &prob, &r, cfg)? {
        let better = match (&value.exact_squared, &report.exact_power) {
            (Some(x), Some(y)) if p.is_two() => x < y,
            _ => value.value < report.value_float,
        };
        if better {
            report.value_float = value.value;
            report.exact_power = value.exact_squared;
            report.witness_a = Witness::Function(g);
            report.witness_b = Witness::Function(h);
            report.history.push(HistoryEntry {
                nodes: report.nodes,
                value_float: value.value,
            });
        }
    }
    Ok(report)
}

/// Upper bound on the functional infimum over indicator pairs `g = 1_A`,
/// `h = 1_B` only. At `p = 2` this is exact, and for `f = 1_U` it matches
/// [`beta_estimate`] on the same window.
pub fn gamma_indicator_estimate(f: &ExactFunction, cfg: &SearchConfig) -> Result<EstimateReport> {
    if f.is_empty() {
        return Err(Error::Empty("f"));
    }
    if cfg.strategy == Strategy::GeometricFamily {
        return Err(Error::invalid("indicator estimates need the exhaustive or hill-climb strategy"));
    }
    Ok(gamma_indicators(f, cfg)?.0)
}

fn gamma_indicators(f: &ExactFunction, cfg: &SearchConfig) -> Result<(EstimateReport, Problem, SetResult)> {
    let p = cfg.p;
    let levels = gamma::levels_of(f)?;
    let scale = Rational::from_integer(levels.scale.clone());
    let prob = Problem::new(f.context(), &levels.levels, None, p, cfg)?;
    let r = prob.solve(cfg)?;
    let n = Rational::from_integer(r.numerator.into()) / &scale;
    let (sa, sb) = (r.a.len(), r.b.len());
    let report = EstimateReport {
        quantity: Quantity::Gamma,
        p,
        variant: cfg.variant,
        value_float: ratio_float(&n, sa, sb, &p),
        exact_power: Some(exact_ratio_power(&n, sa, sb, &p)),
        witness_a: Witness::Set(r.a.clone()),
        witness_b: Witness::Set(r.b.clone()),
        nodes: r.nodes,
        complete: r.complete,
        config: cfg.clone(),
        history: history_entries(&r.history, &scale, &p),
    };
    Ok((report, prob, r))
}

/// Coordinate descent from the best indicator pair. Returns exact witnesses
/// and their value when descent found something below the indicator value.
fn refine(
    f: &ExactFunction,
    prob: &Problem,
    r: &SetResult,
    cfg: &SearchConfig,
) -> Result<Option<(ExactFunction, ExactFunction, crate::functional::GammaValue)>> {
    let grid = &prob.space.grid;
    let tied = cfg.variant != Variant::Unrestricted;
    let (g_cells, h_cells) = if grid.len() <= FULL_BOX_DESCENT_CELLS && grid.len() <= cfg.max_card {
        let all = grid.to_point_set(&prob.ctx, &(0..grid.len()).collect::<Vec<_>>());
        (all.points().to_vec(), all.points().to_vec())
    } else {
        (r.a.points().to_vec(), r.b.points().to_vec())
    };
    if tied && g_cells.len() != h_cells.len() {
        return Ok(None);
    }
    let start = |cells: &[crate::group::GroupVector], s: &PointSet| -> Vec<f64> {
        cells.iter().map(|c| if s.contains(c) { 1.0 } else { 0.0 }).collect()
    };
    let descent = gamma::Descent::new(&f.to_float(), &g_cells, &h_cells, &prob.p, tied)?;
    let out = descent.run(&start(&g_cells, &r.a), &start(&h_cells, &r.b));
    let indicator_value = ratio_float(
        &(Rational::from_integer(r.numerator.into())
            / Rational::from_integer(gamma::levels_of(f)?.scale)),
        r.a.len(),
        r.b.len(),
        &prob.p,
    );
    if !(out.value < indicator_value * (1.0 - 1e-12)) {
        return Ok(None);
    }
    let to_exact = |cells: &[crate::group::GroupVector], w: &[f64]| -> Result<ExactFunction> {
        let entries = cells
            .iter()
            .zip(w)
            .filter(|(_, &x)| x > 0.0)
            .map(|(c, &x)| {
                Rational::from_float(x)
                    .map(|r| (c.clone(), r))
                    .ok_or_else(|| Error::invalid("non-finite weight"))
            })
            .collect::<Result<Vec<_>>>()?;
        ExactFunction::new(prob.ctx.clone(), entries)
    };
    let g = to_exact(&g_cells, &out.g)?;
    let h = to_exact(&h_cells, &out.h)?;
    if g.is_empty() || h.is_empty() {
        return Ok(None);
    }
    let value = gamma_ratio(f, &g, &h, &prob.p)?;
    Ok(Some((g, h, value)))
}

/// `ratio^num` of `|A+B+U| / (|A|^{1/p} |B|^{1/q})` for `p = num/den`.
/// Weight descent for `f` on fixed supports: maps starting weights to the
/// ratio reached.
pub(crate) fn descent_for(
    f: &ExactFunction,
    g_cells: &[crate::group::GroupVector],
    h_cells: &[crate::group::GroupVector],
    p: &Exponent,
) -> Result<impl Fn(&[f64], &[f64]) -> f64> {
    let d = gamma::Descent::new(&f.to_float(), g_cells, h_cells, p, false)?;
    Ok(move |g0: &[f64], h0: &[f64]| d.run(g0, h0).value)
}

pub fn beta_ratio_power(u: &PointSet, a: &PointSet, b: &PointSet, p: &Exponent) -> Result<Rational> {
    let n = sumset_many(&[a, b, u])?.len() as u64;
    Ok(exact_ratio_power(&Rational::from_integer(n.into()), a.len(), b.len(), p))
}

/// `(|A+B| / sqrt(|A||B|))^2`.
pub fn alpha_ratio_squared(a: &PointSet, b: &PointSet) -> Result<Rational> {
    let n = sumset(a, b)?.len() as u64;
    Ok(exact_ratio_power(&Rational::from_integer(n.into()), a.len(), b.len(), &Exponent::TWO))
}

/// Recomputes a report's value from its witnesses alone. `target` is `U`
/// for set quantities and `f` for `gamma`.
pub fn replay(report: &EstimateReport, target: &Witness) -> Result<bool> {
    let p = report.p;
    let variant_ok = |a: usize, b: usize, same: bool| match report.variant {
        Variant::Unrestricted => true,
        Variant::Isometric => a == b,
        Variant::Isomeric => same,
    };
    let float_ok = |v: f64| (v - report.value_float).abs() <= 1e-9 * report.value_float.abs().max(1.0);
    match report.quantity {
        Quantity::Beta | Quantity::Alpha => {
            let (Some(a), Some(b), Some(u)) = (report.witness_a.as_set(), report.witness_b.as_set(), target.as_set())
            else {
                return Err(Error::invalid("set quantities need set witnesses and a set target"));
            };
            if !variant_ok(a.len(), b.len(), a == b) {
                return Ok(false);
            }
            let n = if report.quantity == Quantity::Beta {
                sumset_many(&[a, b, u])?.len()
            } else {
                if !(u.has_translate_in(a)? && u.has_translate_in(b)?) {
                    return Ok(false);
                }
                sumset(a, b)?.len()
            };
            let n = Rational::from_integer((n as u64).into());
            let power = exact_ratio_power(&n, a.len(), b.len(), &p);
            Ok(report.exact_power.as_ref() == Some(&power) && float_ok(ratio_float(&n, a.len(), b.len(), &p)))
        }
        Quantity::Gamma => {
            let f = target.to_function();
            let (g, h) = (report.witness_a.to_function(), report.witness_b.to_function());
            if let (Some(a), Some(b)) = (report.witness_a.as_set(), report.witness_b.as_set()) {
                if !variant_ok(a.len(), b.len(), a == b) {
                    return Ok(false);
                }
                let n = max_convolve(&max_convolve(&f, &g)?, &h)?.l1();
                let power = exact_ratio_power(&n, a.len(), b.len(), &p);
                return Ok(report.exact_power.as_ref() == Some(&power) && float_ok(ratio_float(&n, a.len(), b.len(), &p)));
            }
            let v = gamma_ratio(&f, &g, &h, &p)?;
            match (&v.exact_squared, &report.exact_power) {
                (Some(x), Some(y)) => Ok(x == y && float_ok(v.value)),
                (None, None) => Ok(float_ok(v.value)),
                _ => Ok(false),
            }
        }
    }
}
