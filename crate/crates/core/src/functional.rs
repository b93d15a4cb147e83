//! Finitely supported nonnegative functions and their max-convolution.
//!
//! Weights are either exact rationals or floats, chosen by the type
//! parameter, so an exact computation can never silently mix in a float.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational_short, parse_rational, rational_to_f64, Exponent, Rational};
use crate::group::text::{content_lines, parse_coords, parse_header, write_coords, write_header};
use crate::group::{GroupContext, GroupVector, PointSet};

/// Scalar type of a [`WeightedFunction`].
pub trait Weight: Clone + PartialEq + PartialOrd + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn from_rational(r: &Rational) -> Self;
    /// The exact value, when the weight type carries one.
    fn as_rational(&self) -> Option<Rational>;
    fn render(&self) -> String;
}

impl Weight for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn render(&self) -> String {
        format_rational_short(self)
    }
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn as_rational(&self) -> Option<Rational> {
        None
    }
    fn render(&self) -> String {
        format!("{self}")
    }
}

/// A nonnegative function with finite support; zero weights are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFunction<W: Weight> {
    context: GroupContext,
    support: BTreeMap<GroupVector, W>,
}

pub type ExactFunction = WeightedFunction<Rational>;
pub type FloatFunction = WeightedFunction<f64>;

impl<W: Weight> WeightedFunction<W> {
    /// Builds a function from `(point, weight)` pairs. Repeated points and
    /// negative (or NaN) weights are errors; zero weights are dropped.
    pub fn new(context: GroupContext, entries: impl IntoIterator<Item = (GroupVector, W)>) -> Result<Self> {
        let zero = W::zero();
        let mut support = BTreeMap::new();
        for (v, w) in entries {
            context.ensure_contains(&v)?;
            // `!(w >= 0)` also catches NaN.
            if !matches!(w.partial_cmp(&zero), Some(std::cmp::Ordering::Greater | std::cmp::Ordering::Equal)) {
                return Err(Error::invalid(format!("weight at {v} is negative")));
            }
            if support.contains_key(&v) {
                return Err(Error::invalid(format!("point {v} listed twice")));
            }
            support.insert(v, w);
        }
        support.retain(|_, w| *w != zero);
        Ok(WeightedFunction { context, support })
    }

    pub fn indicator(set: &PointSet) -> Self {
        WeightedFunction {
            context: set.context().clone(),
            support: set.iter().map(|p| (p.clone(), W::one())).collect(),
        }
    }

    /// `f(i) = values[i]` on `Z`.
    pub fn sequence(values: &[W]) -> Result<Self> {
        let ctx = GroupContext::free(1);
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, w)| (ctx.point(&[i as i64]).unwrap(), w.clone()))
            .collect::<Vec<_>>();
        WeightedFunction::new(ctx, entries)
    }

    pub fn context(&self) -> &GroupContext {
        &self.context
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn get(&self, x: &GroupVector) -> Option<&W> {
        self.support.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupVector, &W)> {
        self.support.iter()
    }

    pub fn weights(&self) -> impl Iterator<Item = &W> {
        self.support.values()
    }

    pub fn support(&self) -> PointSet {
        PointSet::from_sorted_unchecked(self.context.clone(), self.support.keys().cloned().collect())
    }

    pub fn l1(&self) -> W {
        self.support.values().fold(W::zero(), |acc, w| acc.add(w))
    }

    pub fn max_value(&self) -> Option<&W> {
        self.support
            .values()
            .fold(None, |m: Option<&W>, w| match m {
                Some(x) if x >= w => Some(x),
                _ => Some(w),
            })
    }

    /// `c * f` for `c >= 0`.
    pub fn scale(&self, c: &W) -> Result<Self> {
        WeightedFunction::new(
            self.context.clone(),
            self.support.iter().map(|(k, w)| (k.clone(), w.mul(c))),
        )
    }

    pub fn translate(&self, t: &GroupVector) -> Result<Self> {
        let entries = self
            .support
            .iter()
            .map(|(k, w)| Ok((self.context.add(k, t)?, w.clone())))
            .collect::<Result<Vec<_>>>()?;
        WeightedFunction::new(self.context.clone(), entries)
    }

    pub fn to_float(&self) -> FloatFunction {
        WeightedFunction {
            context: self.context.clone(),
            support: self.support.iter().map(|(k, w)| (k.clone(), w.to_f64())).collect(),
        }
    }

    fn is_line(&self) -> bool {
        self.context.free_rank() == 1 && self.context.is_torsion_free()
    }
}

impl<W: Weight> fmt::Display for WeightedFunction<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, w)) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}: {}", w.render())?;
        }
        write!(f, "}}")
    }
}

/// `(f ⊞ g)(x) = max_t f(t) g(x - t)`.
pub fn max_convolve<W: Weight>(f: &WeightedFunction<W>, g: &WeightedFunction<W>) -> Result<WeightedFunction<W>> {
    f.context.ensure_same(&g.context)?;
    if f.is_empty() || g.is_empty() {
        return Err(Error::Empty("max-convolution operand"));
    }
    let mut out: BTreeMap<GroupVector, W> = BTreeMap::new();
    for (x, a) in &f.support {
        for (y, b) in &g.support {
            let s = f.context.add(x, y)?;
            let v = a.mul(b);
            match out.get_mut(&s) {
                Some(cur) if *cur >= v => {}
                Some(cur) => *cur = v,
                None => {
                    out.insert(s, v);
                }
            }
        }
    }
    Ok(WeightedFunction {
        context: f.context.clone(),
        support: out,
    })
}

/// `‖f‖_p` in floating point.
pub fn lp_norm<W: Weight>(f: &WeightedFunction<W>, p: &Exponent) -> Result<f64> {
    if f.is_empty() {
        return Err(Error::Empty("norm of the zero function"));
    }
    let pf = p.to_f64();
    let s: f64 = f.weights().map(|w| w.to_f64().powf(pf)).sum();
    Ok(s.powf(1.0 / pf))
}

/// `Σ f(x)^k` exactly, i.e. `‖f‖_k^k` for a whole exponent `k`.
pub fn power_sum(f: &ExactFunction, k: u32) -> Rational {
    f.weights().fold(<Rational as Zero>::zero(), |acc, w| acc + num_traits::pow(w.clone(), k as usize))
}

/// Value of `‖f ⊞ g ⊞ h‖_1 / (‖g‖_p ‖h‖_q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaValue {
    pub value: f64,
    /// The squared ratio, exact, when `p = 2` and the weights are exact.
    pub exact_squared: Option<Rational>,
}

pub fn gamma_ratio<W: Weight>(
    f: &WeightedFunction<W>,
    g: &WeightedFunction<W>,
    h: &WeightedFunction<W>,
    p: &Exponent,
) -> Result<GammaValue> {
    let conv = max_convolve(&max_convolve(f, g)?, h)?;
    let num = conv.l1();
    let q = p.conjugate();
    let exact_squared = if p.is_two() {
        let sq = |fun: &WeightedFunction<W>| {
            fun.weights()
                .map(|w| w.as_rational().map(|r| &r * &r))
                .try_fold(<Rational as Zero>::zero(), |acc, x| x.map(|x| acc + x))
        };
        match (num.as_rational(), sq(g), sq(h)) {
            (Some(n), Some(a), Some(b)) => Some(&n * &n / (a * b)),
            _ => None,
        }
    } else {
        None
    };
    let value = match &exact_squared {
        Some(r) => rational_to_f64(r).sqrt(),
        None => num.to_f64() / (lp_norm(g, p)? * lp_norm(h, &q)?),
    };
    Ok(GammaValue { value, exact_squared })
}

/// `{x : f(x) >= t}` for `t > 0`.
pub fn level_set<W: Weight>(f: &WeightedFunction<W>, t: &W) -> Result<PointSet> {
    if !(*t > W::zero()) {
        return Err(Error::invalid("level threshold must be positive"));
    }
    let pts = f.support.iter().filter(|(_, w)| *w >= t).map(|(k, _)| k.clone()).collect();
    Ok(PointSet::from_sorted_unchecked(f.context.clone(), pts))
}

/// Distinct values in decreasing order, each with the size of its level set.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelProfile<W: Weight> {
    pub levels: Vec<(W, usize)>,
}

pub fn distribution<W: Weight>(f: &WeightedFunction<W>) -> LevelProfile<W> {
    let mut values: Vec<W> = f.weights().cloned().collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("weights are ordered"));
    let mut levels: Vec<(W, usize)> = Vec::new();
    for (i, v) in values.into_iter().enumerate() {
        match levels.last_mut() {
            Some((last, count)) if *last == v => *count = i + 1,
            _ => levels.push((v, i + 1)),
        }
    }
    LevelProfile { levels }
}

pub fn identically_distributed<W: Weight>(f: &WeightedFunction<W>, g: &WeightedFunction<W>) -> bool {
    distribution(f) == distribution(g)
}

/// Reassigns the values of `f` so they are nonincreasing along its (sorted) support.
pub fn rearrange_nonincreasing<W: Weight>(f: &WeightedFunction<W>) -> Result<WeightedFunction<W>> {
    if !f.is_line() {
        return Err(Error::invalid("rearrangement needs a function on Z"));
    }
    let mut values: Vec<W> = f.weights().cloned().collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("weights are ordered"));
    let support = f.support.keys().cloned().zip(values).collect();
    Ok(WeightedFunction {
        context: f.context.clone(),
        support,
    })
}

/// Default cap on support sizes for [`min_over_permutations`].
pub const DEFAULT_PERMUTATION_BOUND: usize = 5;

/// Minimum of `‖f_σ ⊞ g_τ ⊞ h_ρ‖_1` over all rearrangements of the three
/// functions' values on their own supports.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationMinimum {
    pub value: Rational,
    /// The minimizing rearrangements (first found in lexicographic order of value sequences).
    pub arrangement: [ExactFunction; 3],
}

pub fn min_over_permutations(
    f: &ExactFunction,
    g: &ExactFunction,
    h: &ExactFunction,
    bound: usize,
) -> Result<PermutationMinimum> {
    for fun in [f, g, h] {
        if !fun.is_line() {
            return Err(Error::invalid("permutation oracle needs functions on Z"));
        }
        if fun.is_empty() {
            return Err(Error::Empty("permutation oracle operand"));
        }
        if fun.len() > bound {
            return Err(Error::SizeBound {
                what: "permutation oracle support",
                size: fun.len(),
                limit: bound,
            });
        }
    }
    // Scale each function to integers so the inner loop avoids rationals.
    let scaled: Vec<(Vec<BigInt>, BigInt, Vec<usize>)> = [f, g, h]
        .iter()
        .map(|fun| {
            let l = fun.weights().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
            let ints: Vec<BigInt> = fun.weights().map(|w| (w * &l).to_integer()).collect();
            let base = fun.support.keys().next().unwrap().free_coords()[0];
            let pos = fun
                .support
                .keys()
                .map(|k| (k.free_coords()[0] - base) as usize)
                .collect();
            (ints, l, pos)
        })
        .collect();
    let max_fits = scaled
        .iter()
        .map(|(v, _, _)| v.iter().max().unwrap().to_u128())
        .try_fold(1u128, |acc, m| acc.checked_mul(m?))
        .and_then(|m| m.checked_mul(64));
    let positions: [&[usize]; 3] = [&scaled[0].2, &scaled[1].2, &scaled[2].2];
    let (best, arr) = if max_fits.is_some() {
        let vals: Vec<Vec<u128>> = scaled
            .iter()
            .map(|(v, _, _)| v.iter().map(|x| x.to_u128().unwrap()).collect())
            .collect();
        let (b, arr) = brute_force(&vals, positions);
        (BigInt::from(b), arr.map(|v| v.into_iter().map(BigInt::from).collect::<Vec<_>>()))
    } else {
        let vals: Vec<Vec<BigUint>> = scaled
            .iter()
            .map(|(v, _, _)| v.iter().map(|x| x.to_biguint().unwrap()).collect())
            .collect();
        let (b, arr) = brute_force(&vals, positions);
        (BigInt::from(b), arr.map(|v| v.into_iter().map(BigInt::from).collect::<Vec<_>>()))
    };
    let denom = &scaled[0].1 * &scaled[1].1 * &scaled[2].1;
    let arrangement = [f, g, h].map(|fun| fun.clone());
    let arrangement = {
        let mut out = arrangement;
        for (i, fun) in out.iter_mut().enumerate() {
            let l = &scaled[i].1;
            let entries = fun
                .support
                .keys()
                .cloned()
                .zip(arr[i].iter().map(|x| Rational::new(x.clone(), l.clone())))
                .collect::<Vec<_>>();
            *fun = WeightedFunction::new(fun.context.clone(), entries)?;
        }
        out
    };
    Ok(PermutationMinimum {
        value: Rational::new(best, denom),
        arrangement,
    })
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn distinct_arrangements<T: Ord + Clone>(vals: &[T]) -> Vec<Vec<T>> {
    let mut cur = vals.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn brute_force<'a, T>(vals: &'a [Vec<T>], pos: [&[usize]; 3]) -> (T, [Vec<T>; 3])
where
    T: Ord + Clone + Zero,
    for<'b> &'b T: Mul<&'b T, Output = T> + Add<&'b T, Output = T>,
{
    let arrs: Vec<Vec<Vec<T>>> = vals.iter().map(|v| distinct_arrangements(v)).collect();
    let width = pos.iter().map(|p| p.last().unwrap()).sum::<usize>() + 1;
    let mut best: Option<(T, [Vec<T>; 3])> = None;
    let mut buf: Vec<T> = vec![T::zero(); width];
    let mut fg: Vec<(usize, T)> = Vec::new();
    for a in &arrs[0] {
        for b in &arrs[1] {
            fg.clear();
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    fg.push((pos[0][i] + pos[1][j], x * y));
                }
            }
            for c in &arrs[2] {
                buf.iter_mut().for_each(|x| *x = T::zero());
                for (s, xy) in &fg {
                    for (k, z) in c.iter().enumerate() {
                        let v = xy * z;
                        let slot = &mut buf[s + pos[2][k]];
                        if v > *slot {
                            *slot = v;
                        }
                    }
                }
                let total = buf.iter().fold(T::zero(), |acc, x| &acc + x);
                if best.as_ref().map_or(true, |(b, _)| total < *b) {
                    best = Some((total, [a.clone(), b.clone(), c.clone()]));
                }
            }
        }
    }
    best.expect("at least one arrangement")
}

/// Parses the function text format: a `group` header, then one line per
/// support point with its coordinates followed by a weight (`a/b` or decimal).
pub fn parse_function(text: &str) -> Result<ExactFunction> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let ctx = parse_header(hl, header)?;
    let mut support: BTreeMap<GroupVector, Rational> = BTreeMap::new();
    for (n, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (w, coords) = toks
            .split_last()
            .ok_or_else(|| Error::parse(n, "empty line"))?;
        let v = parse_coords(n, coords, &ctx)?;
        let w = parse_rational(w).map_err(|e| Error::parse(n, e.to_string()))?;
        if w.is_negative() {
            return Err(Error::parse(n, format!("negative weight at {v}")));
        }
        if support.insert(v.clone(), w).is_some() {
            return Err(Error::parse(n, format!("duplicate point {v}")));
        }
    }
    WeightedFunction::new(ctx, support)
}

/// Canonical text form, one line per support point in canonical order.
pub fn format_function<W: Weight>(f: &WeightedFunction<W>) -> String {
    let mut out = String::new();
    write_header(&mut out, &f.context);
    for (k, w) in &f.support {
        write_coords(&mut out, k);
        out.push(' ');
        out.push_str(&w.render());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn seq(v: &[(i64, i64)]) -> ExactFunction {
        ExactFunction::sequence(&v.iter().map(|&(n, d)| r(n, d)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn max_convolution_examples() {
        let one = ExactFunction::indicator(&PointSet::from_ints(&[0, 1]));
        assert_eq!(
            max_convolve(&one, &one).unwrap(),
            ExactFunction::indicator(&PointSet::from_ints(&[0, 1, 2]))
        );
        let ctx = GroupContext::free(1);
        let a = ExactFunction::new(ctx.clone(), [(ctx.point(&[0]).unwrap(), r(2, 1))]).unwrap();
        let b = ExactFunction::new(ctx.clone(), [(ctx.point(&[5]).unwrap(), r(3, 1))]).unwrap();
        let c = ExactFunction::new(ctx.clone(), [(ctx.point(&[5]).unwrap(), r(6, 1))]).unwrap();
        assert_eq!(max_convolve(&a, &b).unwrap(), c);
        let h = seq(&[(1, 1), (1, 2)]);
        assert_eq!(max_convolve(&h, &h).unwrap(), seq(&[(1, 1), (1, 2), (1, 4)]));
    }

    #[test]
    fn norms() {
        let a = ExactFunction::indicator(&PointSet::from_ints(&[0, 1, 2]));
        assert_eq!(a.l1(), r(3, 1));
        let h = seq(&[(1, 1), (1, 2)]);
        let two = Exponent::TWO;
        assert!((lp_norm(&h, &two).unwrap() - 5f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(power_sum(&h, 2), r(5, 4));
        assert!(lp_norm(&ExactFunction::new(GroupContext::free(1), []).unwrap(), &two).is_err());
    }

    #[test]
    fn gamma_examples() {
        let two = Exponent::TWO;
        let pt = ExactFunction::indicator(&PointSet::from_ints(&[0]));
        let v = gamma_ratio(&pt, &pt, &pt, &two).unwrap();
        assert_eq!(v.exact_squared, Some(r(1, 1)));
        let f = ExactFunction::indicator(&PointSet::from_ints(&[0, 1]));
        assert_eq!(gamma_ratio(&f, &pt, &pt, &two).unwrap().exact_squared, Some(r(4, 1)));
        let fd = seq(&[(1, 1), (1, 2)]);
        let v = gamma_ratio(&fd, &fd, &fd, &two).unwrap();
        assert_eq!(v.exact_squared, Some(r(9, 4)));
        assert_eq!(v.value, 1.5);
        let vf = gamma_ratio(&fd.to_float(), &fd.to_float(), &fd.to_float(), &two).unwrap();
        assert_eq!(vf.exact_squared, None);
        assert!((vf.value - 1.5).abs() < 1e-12);
    }

    #[test]
    fn level_sets_and_profiles() {
        let f = seq(&[(1, 1), (1, 2), (1, 4)]);
        assert_eq!(level_set(&f, &r(3, 10)).unwrap(), PointSet::from_ints(&[0, 1]));
        assert!(level_set(&f, &r(0, 1)).is_err());
        assert!(identically_distributed(&f, &f));
        let a = seq(&[(1, 1), (1, 2)]);
        let b = seq(&[(1, 2), (1, 1)]).translate(&GroupContext::free(1).point(&[4]).unwrap()).unwrap();
        assert!(identically_distributed(&a, &b));
        assert_eq!(distribution(&a).levels, vec![(r(1, 1), 1), (r(1, 2), 2)]);
        let c = seq(&[(1, 1), (1, 1), (1, 2)]);
        assert_eq!(distribution(&c).levels, vec![(r(1, 1), 2), (r(1, 2), 3)]);
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(rearrange_nonincreasing(&seq(&[(1, 1), (2, 1)])).unwrap(), seq(&[(2, 1), (1, 1)]));
        let c = seq(&[(3, 1), (3, 1), (3, 1)]);
        assert_eq!(rearrange_nonincreasing(&c).unwrap(), c);
    }

    #[test]
    fn permutation_oracle_small() {
        let f = seq(&[(1, 1), (2, 1)]);
        let m = min_over_permutations(&f, &f, &f, DEFAULT_PERMUTATION_BOUND).unwrap();
        let dec = rearrange_nonincreasing(&f).unwrap();
        let conv = max_convolve(&max_convolve(&dec, &dec).unwrap(), &dec).unwrap();
        assert_eq!(m.value, conv.l1());
        let big = ExactFunction::indicator(&PointSet::from_ints(&[0, 1, 2, 3, 4, 5]));
        assert!(min_over_permutations(&big, &f, &f, DEFAULT_PERMUTATION_BOUND).is_err());
    }

    #[test]
    fn function_text_format() {
        let f = parse_function("group 1\n0 1\n1 1/2\n").unwrap();
        assert_eq!(f, seq(&[(1, 1), (1, 2)]));
        assert_eq!(format_function(&f), "group 1\n0 1\n1 1/2\n");
        assert_eq!(parse_function("group 1\n0 0.25\n").unwrap(), seq(&[(1, 4)]));
        assert!(matches!(parse_function("group 1\n0 1\n0 2\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_function("group 1\n0 -1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_function("group 1\n0\n").is_err());
        // Zero weights are accepted and purged.
        assert_eq!(parse_function("group 1\n0 1\n1 0\n").unwrap().len(), 1);
    }

    #[test]
    fn rejects_negative_and_nan() {
        let ctx = GroupContext::free(1);
        let p = ctx.point(&[0]).unwrap();
        assert!(FloatFunction::new(ctx.clone(), [(p.clone(), f64::NAN)]).is_err());
        assert!(FloatFunction::new(ctx.clone(), [(p.clone(), -1.0)]).is_err());
        assert!(FloatFunction::new(ctx, [(p.clone(), 1.0), (p, 2.0)]).is_err());
    }
}
