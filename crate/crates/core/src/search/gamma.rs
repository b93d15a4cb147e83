//! Helpers for the functional infimum: level decomposition of `f`, weight
//! refinement by coordinate descent, and the geometric family.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{Exponent, Rational};
use crate::functional::{gamma_ratio, level_set, ExactFunction, FloatFunction, GammaValue};
use crate::group::{GroupVector, PointSet};

/// `f = sum_j w_j 1_{L_j}` with nested level sets `L_j` and integer weights
/// `w_j`, scaled by the common denominator `scale`.
#[derive(Clone, Debug)]
pub(crate) struct Levels {
    pub levels: Vec<(u64, PointSet)>,
    pub scale: BigInt,
}

pub(crate) fn levels_of(f: &ExactFunction) -> Result<Levels> {
    let mut values: Vec<Rational> = f.weights().cloned().collect();
    values.sort();
    values.dedup();
    values.reverse();
    if values.is_empty() {
        return Err(Error::Empty("function"));
    }
    let mut steps = Vec::with_capacity(values.len());
    for (j, v) in values.iter().enumerate() {
        let next = values.get(j + 1).cloned().unwrap_or_else(Rational::zero);
        steps.push((v - next, level_set(f, v)?));
    }
    let scale = steps
        .iter()
        .fold(BigInt::one(), |acc, (w, _)| acc.lcm(w.denom()));
    let levels = steps
        .into_iter()
        .map(|(w, set)| {
            let n = (w * Rational::from_integer(scale.clone())).to_integer();
            n.to_u64().map(|n| (n, set)).ok_or(Error::Overflow("level weights"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Levels { levels, scale })
}

/// Coordinate descent over the weights of `g` and `h` on fixed supports.
pub(crate) struct Descent {
    p: f64,
    q: f64,
    nvars: usize,
    /// Variable index of each cell of `g` and `h`.
    g_var: Vec<usize>,
    h_var: Vec<usize>,
    tied: bool,
    /// `(sum index, f weight, g cell, h cell)`.
    triples: Vec<(usize, f64, usize, usize)>,
    sums: usize,
}

pub(crate) struct DescentResult {
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub value: f64,
}

const SWEEP_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;
const GRID_POINTS: usize = 17;
const GOLDEN_STEPS: usize = 40;

impl Descent {
    /// With `tied`, `h` reuses the weights of `g` cell for cell (same support
    /// size required), so `g` and `h` stay identically distributed.
    pub fn new(
        f: &FloatFunction,
        g_cells: &[GroupVector],
        h_cells: &[GroupVector],
        p: &Exponent,
        tied: bool,
    ) -> Result<Self> {
        if tied && g_cells.len() != h_cells.len() {
            return Err(Error::invalid("tied descent needs equal supports sizes"));
        }
        let ctx = f.context();
        let mut index: BTreeMap<GroupVector, usize> = BTreeMap::new();
        let mut triples = Vec::new();
        for (x, &fx) in f.iter() {
            for (i, y) in g_cells.iter().enumerate() {
                let xy = ctx.add(x, y)?;
                for (k, w) in h_cells.iter().enumerate() {
                    let z = ctx.add(&xy, w)?;
                    let n = index.len();
                    let zi = *index.entry(z).or_insert(n);
                    triples.push((zi, fx, i, k));
                }
            }
        }
        let ng = g_cells.len();
        let (h_var, nvars) = if tied {
            ((0..ng).collect(), ng)
        } else {
            ((ng..ng + h_cells.len()).collect(), ng + h_cells.len())
        };
        Ok(Descent {
            p: p.to_f64(),
            q: p.conjugate().to_f64(),
            nvars,
            g_var: (0..ng).collect(),
            h_var,
            tied,
            triples,
            sums: index.len(),
        })
    }

    fn objective(&self, x: &[f64], buf: &mut [f64]) -> f64 {
        buf.iter_mut().for_each(|v| *v = 0.0);
        for &(z, fw, i, k) in &self.triples {
            let v = fw * x[self.g_var[i]] * x[self.h_var[k]];
            if v > buf[z] {
                buf[z] = v;
            }
        }
        let num: f64 = buf.iter().sum();
        let ng: f64 = self.g_var.iter().map(|&v| x[v].powf(self.p)).sum::<f64>().powf(1.0 / self.p);
        let nh: f64 = self.h_var.iter().map(|&v| x[v].powf(self.q)).sum::<f64>().powf(1.0 / self.q);
        if ng == 0.0 || nh == 0.0 {
            f64::INFINITY
        } else {
            num / (ng * nh)
        }
    }

    fn normalize(&self, x: &mut [f64]) {
        if self.tied {
            let m = x.iter().cloned().fold(0.0, f64::max);
            if m > 0.0 {
                x.iter_mut().for_each(|v| *v /= m);
            }
            return;
        }
        let ng: f64 = self.g_var.iter().map(|&v| x[v].powf(self.p)).sum::<f64>().powf(1.0 / self.p);
        let nh: f64 = self.h_var.iter().map(|&v| x[v].powf(self.q)).sum::<f64>().powf(1.0 / self.q);
        if ng > 0.0 {
            self.g_var.iter().for_each(|&v| x[v] /= ng);
        }
        if nh > 0.0 {
            self.h_var.iter().for_each(|&v| x[v] /= nh);
        }
    }

    /// Runs from the given starting weights (`h0` is ignored when tied).
    pub fn run(&self, g0: &[f64], h0: &[f64]) -> DescentResult {
        let mut x = vec![0.0; self.nvars];
        x[..g0.len()].copy_from_slice(g0);
        if !self.tied {
            x[g0.len()..].copy_from_slice(h0);
        }
        let mut buf = vec![0.0; self.sums];
        self.normalize(&mut x);
        let mut value = self.objective(&x, &mut buf);
        let mut sweeps = 0;
        while sweeps < MAX_SWEEPS {
            sweeps += 1;
            let before = value;
            for v in 0..self.nvars {
                let hi = 2.0 * x.iter().cloned().fold(0.0, f64::max).max(1e-300);
                let mut eval = |t: f64, x: &mut Vec<f64>| {
                    let old = x[v];
                    x[v] = t;
                    let r = self.objective(x, &mut buf);
                    x[v] = old;
                    r
                };
                let step = hi / (GRID_POINTS - 1) as f64;
                let (mut kbest, mut fbest) = (0, f64::INFINITY);
                for k in 0..GRID_POINTS {
                    let fv = eval(k as f64 * step, &mut x);
                    if fv < fbest {
                        kbest = k;
                        fbest = fv;
                    }
                }
                let mut tbest = kbest as f64 * step;
                let (mut a, mut b) = ((tbest - step).max(0.0), (tbest + step).min(hi));
                let phi = (5f64.sqrt() - 1.0) / 2.0;
                let mut c = b - phi * (b - a);
                let mut d = a + phi * (b - a);
                let (mut fc, mut fd) = (eval(c, &mut x), eval(d, &mut x));
                for _ in 0..GOLDEN_STEPS {
                    if fc < fd {
                        b = d;
                        d = c;
                        fd = fc;
                        c = b - phi * (b - a);
                        fc = eval(c, &mut x);
                    } else {
                        a = c;
                        c = d;
                        fc = fd;
                        d = a + phi * (b - a);
                        fd = eval(d, &mut x);
                    }
                }
                for (t, ft) in [(c, fc), (d, fd)] {
                    if ft < fbest {
                        tbest = t;
                        fbest = ft;
                    }
                }
                if fbest < value {
                    x[v] = tbest;
                    value = fbest;
                }
            }
            self.normalize(&mut x);
            value = self.objective(&x, &mut buf);
            if !(before.is_finite()) || (before - value) <= SWEEP_TOL * before.abs() {
                break;
            }
        }
        DescentResult {
            g: self.g_var.iter().map(|&v| x[v]).collect(),
            h: self.h_var.iter().map(|&v| x[v]).collect(),
            value,
        }
    }
}

/// `(1, δ, ..., δ^len-1)` on `0..len` in `Z`.
pub(crate) fn geometric_sequence(delta: &Rational, len: usize) -> Result<ExactFunction> {
    let mut values = Vec::with_capacity(len);
    let mut v = Rational::one();
    for _ in 0..len {
        values.push(v.clone());
        v = &v * delta;
    }
    ExactFunction::sequence(&values)
}

/// Ratio at `g = (1, δ, ..., δ^r)`, `h = (1, δ, ..., δ^s)` for a function on `Z`.
pub fn geometric_family_ratio(
    f: &ExactFunction,
    delta: &Rational,
    r: usize,
    s: usize,
    p: &Exponent,
) -> Result<GammaValue> {
    check_line(f)?;
    if delta.is_negative() || *delta > Rational::one() {
        return Err(Error::invalid("delta must lie in [0, 1]"));
    }
    let g = geometric_sequence(delta, r + 1)?;
    let h = geometric_sequence(delta, s + 1)?;
    gamma_ratio(f, &g, &h, p)
}

fn check_line(f: &ExactFunction) -> Result<()> {
    let ctx = f.context();
    if ctx.free_rank() != 1 || !ctx.is_torsion_free() {
        return Err(Error::Precondition(
            "the geometric family applies to functions on Z only".into(),
        ));
    }
    Ok(())
}

pub(crate) struct FamilyBest {
    pub g: ExactFunction,
    pub h: ExactFunction,
    pub value: GammaValue,
    pub evaluations: u64,
}

/// Candidate ratios `δ`: ratios of values of `f` in `(0, 1)` and `k/20`.
fn delta_candidates(f: &ExactFunction) -> Vec<Rational> {
    let vals: Vec<&Rational> = f.weights().collect();
    let mut out: Vec<Rational> = (1..20).map(|k| Rational::new(k.into(), 20.into())).collect();
    for a in &vals {
        for b in &vals {
            let r = *a / *b;
            if r < Rational::one() {
                out.push(r);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Best member of the geometric family with `r, s < max_len`; ties keep the
/// first in `(r, s, δ)` order.
pub(crate) fn geometric_family_search(
    f: &ExactFunction,
    max_len: usize,
    p: &Exponent,
    isomeric: bool,
) -> Result<FamilyBest> {
    check_line(f)?;
    let deltas = delta_candidates(f);
    let mut best: Option<FamilyBest> = None;
    let mut evaluations = 0;
    for r in 0..max_len {
        for s in 0..max_len {
            if isomeric && r != s {
                continue;
            }
            for delta in &deltas {
                evaluations += 1;
                let v = geometric_family_ratio(f, delta, r, s, p)?;
                let better = match &best {
                    None => true,
                    Some(b) => match (&v.exact_squared, &b.value.exact_squared) {
                        (Some(x), Some(y)) => x < y,
                        _ => v.value < b.value.value,
                    },
                };
                if better {
                    best = Some(FamilyBest {
                        g: geometric_sequence(delta, r + 1)?,
                        h: geometric_sequence(delta, s + 1)?,
                        value: v,
                        evaluations: 0,
                    });
                }
                // With r = s = 0 the value does not depend on δ.
                if r == 0 && s == 0 {
                    break;
                }
            }
        }
    }
    let mut best = best.expect("at least one family member");
    best.evaluations = evaluations;
    Ok(best)
}
