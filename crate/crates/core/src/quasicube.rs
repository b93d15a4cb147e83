//! Quasicubes: construction from recursive specs, recognition, and the
//! log-span subset condition.
//!
//! A 0-dimensional quasicube is a point. A `d`-dimensional quasicube is the
//! union of two `(d-1)`-dimensional quasicubes lying in distinct cosets of a
//! subgroup `G'`, with the coset difference of infinite order modulo `G'`.
//! For sets in `Z^n` we take `G'` to be the saturation of the lattice spanned
//! by the within-half differences.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::group::lattice::{in_rational_span, rank};
use crate::group::{GroupContext, GroupVector, PointSet};

/// Largest dimension accepted by [`is_quasicube`].
pub const DEFAULT_MAX_RECOGNITION_DIM: usize = 4;

/// Largest set accepted by [`log_span_check`].
pub const DEFAULT_LOG_SPAN_BOUND: usize = 20;

/// A full binary tree whose leaves are points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasicubeSpec {
    Point(Vec<i64>),
    Join(Box<QuasicubeSpec>, Box<QuasicubeSpec>),
}

impl QuasicubeSpec {
    pub fn join(a: QuasicubeSpec, b: QuasicubeSpec) -> Self {
        QuasicubeSpec::Join(Box::new(a), Box::new(b))
    }

    /// Spec of `{0,1}^d` in `Z^d`, split along the last coordinate first.
    /// `d = 0` gives the origin of `Z`.
    pub fn standard(d: usize) -> Self {
        if d == 0 {
            return QuasicubeSpec::Point(vec![0]);
        }
        let mut s = QuasicubeSpec::Point(Vec::new());
        for _ in 0..d {
            s = QuasicubeSpec::join(s.lifted(0), s.lifted(1));
        }
        s
    }

    /// Appends coordinate `c` to every leaf.
    fn lifted(&self, c: i64) -> QuasicubeSpec {
        self.map_points(&|p| {
            let mut p = p.to_vec();
            p.push(c);
            p
        })
    }

    pub fn depth(&self) -> usize {
        match self {
            QuasicubeSpec::Point(_) => 0,
            QuasicubeSpec::Join(a, _) => 1 + a.depth(),
        }
    }

    /// Ambient rank (number of coordinates of the first leaf).
    pub fn arity(&self) -> usize {
        match self {
            QuasicubeSpec::Point(p) => p.len(),
            QuasicubeSpec::Join(a, _) => a.arity(),
        }
    }

    pub fn leaves(&self) -> Vec<&[i64]> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a [i64]>) {
        match self {
            QuasicubeSpec::Point(p) => out.push(p),
            QuasicubeSpec::Join(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    fn map_points(&self, f: &dyn Fn(&[i64]) -> Vec<i64>) -> QuasicubeSpec {
        match self {
            QuasicubeSpec::Point(p) => QuasicubeSpec::Point(f(p)),
            QuasicubeSpec::Join(a, b) => QuasicubeSpec::join(a.map_points(f), b.map_points(f)),
        }
    }

    /// Parses the parenthesized text form, e.g. `(((0 0) (1 0)) ((0 1) (3 1)))`.
    pub fn parse(text: &str) -> Result<Self> {
        let spaced = text.replace('(', " ( ").replace(')', " ) ");
        let toks: Vec<&str> = spaced.split_whitespace().collect();
        let mut pos = 0;
        let spec = parse_node(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(Error::QuasicubeSpec("trailing input after spec".into()));
        }
        Ok(spec)
    }
}

fn parse_node(toks: &[&str], pos: &mut usize) -> Result<QuasicubeSpec> {
    let bad = |m: &str| Error::QuasicubeSpec(m.to_string());
    if toks.get(*pos) != Some(&"(") {
        return Err(bad("expected `(`"));
    }
    *pos += 1;
    if toks.get(*pos) == Some(&"(") {
        let a = parse_node(toks, pos)?;
        let b = parse_node(toks, pos)?;
        if toks.get(*pos) != Some(&")") {
            return Err(bad("a join has exactly two children"));
        }
        *pos += 1;
        return Ok(QuasicubeSpec::join(a, b));
    }
    let mut coords = Vec::new();
    while let Some(&t) = toks.get(*pos) {
        if t == ")" {
            *pos += 1;
            if coords.is_empty() {
                return Err(bad("empty point"));
            }
            return Ok(QuasicubeSpec::Point(coords));
        }
        coords.push(t.parse::<i64>().map_err(|_| bad(&format!("bad coordinate {t:?}")))?);
        *pos += 1;
    }
    Err(bad("unbalanced parentheses"))
}

impl fmt::Display for QuasicubeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasicubeSpec::Point(p) => {
                write!(f, "(")?;
                for (i, x) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            QuasicubeSpec::Join(a, b) => write!(f, "({a} {b})"),
        }
    }
}

fn diffs_from_first(points: &[&[i64]]) -> Vec<Vec<i64>> {
    let Some((first, rest)) = points.split_first() else {
        return Vec::new();
    };
    rest.iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect()
}

fn cross(a: &[i64], b: &[i64]) -> Vec<i64> {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

fn validate(spec: &QuasicubeSpec, arity: usize) -> Result<()> {
    match spec {
        QuasicubeSpec::Point(p) => {
            if p.len() != arity {
                return Err(Error::QuasicubeSpec(format!("leaf {p:?} has the wrong arity")));
            }
            Ok(())
        }
        QuasicubeSpec::Join(a, b) => {
            validate(a, arity)?;
            validate(b, arity)?;
            let d = a.depth();
            if b.depth() != d {
                return Err(Error::QuasicubeSpec("halves have different depths".into()));
            }
            let la = a.leaves();
            let lb = b.leaves();
            if la.iter().any(|x| lb.contains(x)) {
                return Err(Error::QuasicubeSpec("halves collide".into()));
            }
            let mut within = diffs_from_first(&la);
            within.extend(diffs_from_first(&lb));
            if rank(&within) != d {
                return Err(Error::QuasicubeSpec(
                    "halves are not parallel (their difference lattices differ)".into(),
                ));
            }
            if in_rational_span(&within, &cross(la[0], lb[0])) {
                return Err(Error::QuasicubeSpec("halves lie in the same coset".into()));
            }
            Ok(())
        }
    }
}

/// Builds the quasicube described by `spec` in `Z^n`.
pub fn make_quasicube(spec: &QuasicubeSpec) -> Result<PointSet> {
    let n = spec.arity();
    validate(spec, n)?;
    let ctx = GroupContext::free(n);
    let pts = spec
        .leaves()
        .into_iter()
        .map(|p| ctx.point(p))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(ctx, pts)
}

/// Random depth-`depth` spec in `Z^depth` with leaf coordinates in `[-radius, radius]`.
///
/// The top split is along the last coordinate; each half is an independent
/// random quasicube one dimension lower.
pub fn random_spec<R: Rng>(depth: usize, radius: i64, rng: &mut R) -> Result<QuasicubeSpec> {
    if radius < 1 && depth > 0 {
        return Err(Error::invalid("radius must be >= 1 to separate halves"));
    }
    fn go<R: Rng>(k: usize, radius: i64, rng: &mut R) -> QuasicubeSpec {
        if k == 0 {
            return QuasicubeSpec::Point(Vec::new());
        }
        let c0 = rng.gen_range(-radius..=radius);
        let c1 = loop {
            let c = rng.gen_range(-radius..=radius);
            if c != c0 {
                break c;
            }
        };
        let a = go(k - 1, radius, rng);
        let b = go(k - 1, radius, rng);
        QuasicubeSpec::join(a.lifted(c0), b.lifted(c1))
    }
    if depth == 0 {
        return Ok(QuasicubeSpec::Point(vec![rng.gen_range(-radius..=radius)]));
    }
    Ok(go(depth, radius, rng))
}

/// Recursive certificate that a set is a quasicube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasicubeWitness {
    /// Basis of the separating subgroup (before saturation).
    pub subgroup_basis: Vec<Vec<i64>>,
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub halves: Option<Box<(QuasicubeWitness, QuasicubeWitness)>>,
    pub points: Vec<Vec<i64>>,
}

/// Decides whether `u` is a quasicube, returning a witness if so.
pub fn is_quasicube(u: &PointSet) -> Result<Option<QuasicubeWitness>> {
    is_quasicube_capped(u, DEFAULT_MAX_RECOGNITION_DIM)
}

/// As [`is_quasicube`], with an explicit dimension cap.
pub fn is_quasicube_capped(u: &PointSet, max_dim: usize) -> Result<Option<QuasicubeWitness>> {
    if !u.context().is_torsion_free() {
        return Err(Error::invalid("quasicube recognition needs a torsion-free context"));
    }
    let d = u.dimension()?;
    if d > max_dim {
        return Err(Error::SizeBound {
            what: "quasicube recognition dimension",
            size: d,
            limit: max_dim,
        });
    }
    if u.len() != 1 << d {
        return Ok(None);
    }
    let pts: Vec<Vec<i64>> = u.iter().map(|p| p.free_coords().to_vec()).collect();
    Ok(recognize(&pts, d))
}

fn independent_rows(rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for r in rows {
        let mut t = basis.clone();
        t.push(r.clone());
        if rank(&t) > basis.len() {
            basis.push(r);
        }
    }
    basis
}

fn recognize(pts: &[Vec<i64>], d: usize) -> Option<QuasicubeWitness> {
    if d == 0 {
        return (pts.len() == 1).then(|| QuasicubeWitness {
            subgroup_basis: Vec::new(),
            x: pts[0].clone(),
            y: pts[0].clone(),
            halves: None,
            points: pts.to_vec(),
        });
    }
    let n = pts.len();
    let half = n / 2;
    // Point 0 always goes in the first half, so each bipartition is seen once.
    for rest in combinations(n - 1, half - 1) {
        let mut in_a = vec![false; n];
        in_a[0] = true;
        for &i in &rest {
            in_a[i + 1] = true;
        }
        let a: Vec<Vec<i64>> = (0..n).filter(|&i| in_a[i]).map(|i| pts[i].clone()).collect();
        let b: Vec<Vec<i64>> = (0..n).filter(|&i| !in_a[i]).map(|i| pts[i].clone()).collect();
        let ar: Vec<&[i64]> = a.iter().map(|v| v.as_slice()).collect();
        let br: Vec<&[i64]> = b.iter().map(|v| v.as_slice()).collect();
        let mut within = diffs_from_first(&ar);
        within.extend(diffs_from_first(&br));
        if rank(&within) != d - 1 || in_rational_span(&within, &cross(&a[0], &b[0])) {
            continue;
        }
        let Some(wa) = recognize(&a, d - 1) else { continue };
        let Some(wb) = recognize(&b, d - 1) else { continue };
        return Some(QuasicubeWitness {
            subgroup_basis: independent_rows(within),
            x: a[0].clone(),
            y: b[0].clone(),
            halves: Some(Box::new((wa, wb))),
            points: pts.to_vec(),
        });
    }
    None
}

/// Checks that every subset `V'` of `v` has at most `2^dim(V')` points.
///
/// Returns the first violating subset, if any. A violation of size `n` with
/// `dim = k` contains one of size `2^k + 1` and the same dimension bound, so
/// only those sizes are scanned.
pub fn log_span_check(v: &PointSet) -> Result<Option<PointSet>> {
    log_span_check_bounded(v, DEFAULT_LOG_SPAN_BOUND)
}

pub fn log_span_check_bounded(v: &PointSet, bound: usize) -> Result<Option<PointSet>> {
    if v.is_empty() {
        return Err(Error::Empty("log-span check of an empty set"));
    }
    if v.len() > bound {
        return Err(Error::SizeBound {
            what: "log-span enumeration",
            size: v.len(),
            limit: bound,
        });
    }
    let pts: Vec<&GroupVector> = v.iter().collect();
    let mut k = 0u32;
    while (1usize << k) < v.len() {
        let size = (1usize << k) + 1;
        for c in combinations(pts.len(), size) {
            let first = pts[c[0]].free_coords();
            let diffs: Vec<Vec<i64>> = c[1..]
                .iter()
                .map(|&i| cross(first, pts[i].free_coords()))
                .collect();
            if rank(&diffs) <= k as usize {
                let sub = PointSet::new(v.context().clone(), c.iter().map(|&i| pts[i].clone()))?;
                return Ok(Some(sub));
            }
        }
        k += 1;
    }
    Ok(None)
}
