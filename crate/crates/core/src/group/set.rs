use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::context::{GroupContext, GroupVector};
use crate::group::lattice;

/// A finite set of group elements, kept sorted and duplicate-free so that
/// equality and hashing are structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    context: GroupContext,
    points: Vec<GroupVector>,
}

impl PointSet {
    /// Builds a canonical set; duplicates are merged.
    pub fn new(context: GroupContext, points: impl IntoIterator<Item = GroupVector>) -> Result<Self> {
        let points: BTreeSet<GroupVector> = points.into_iter().collect();
        for p in &points {
            context.ensure_contains(p)?;
        }
        Ok(PointSet {
            context,
            points: points.into_iter().collect(),
        })
    }

    pub fn empty(context: GroupContext) -> Self {
        PointSet {
            context,
            points: Vec::new(),
        }
    }

    /// Set of integers in `Z`.
    pub fn from_ints(values: &[i64]) -> Self {
        let ctx = GroupContext::free(1);
        let pts: Vec<_> = values.iter().map(|&v| ctx.point(&[v]).unwrap()).collect();
        PointSet::new(ctx, pts).unwrap()
    }

    /// Set of points of `Z^d` given as coordinate rows.
    pub fn from_coords(free_rank: usize, rows: &[&[i64]]) -> Result<Self> {
        let ctx = GroupContext::free(free_rank);
        let pts = rows
            .iter()
            .map(|r| ctx.point(r))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(ctx, pts)
    }

    /// Builds a set from already-sorted unique points. Callers guarantee the invariant.
    pub(crate) fn from_sorted_unchecked(context: GroupContext, points: Vec<GroupVector>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        PointSet { context, points }
    }

    pub fn context(&self) -> &GroupContext {
        &self.context
    }

    pub fn points(&self) -> &[GroupVector] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupVector> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, v: &GroupVector) -> bool {
        self.points.binary_search(v).is_ok()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.context == other.context && self.points.iter().all(|p| other.contains(p))
    }

    pub fn translate(&self, t: &GroupVector) -> Result<PointSet> {
        self.context.ensure_contains(t)?;
        let pts = self
            .points
            .iter()
            .map(|p| self.context.add(p, t))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(self.context.clone(), pts)
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.context.ensure_same(&other.context)?;
        PointSet::new(
            self.context.clone(),
            self.points.iter().chain(other.points.iter()).cloned(),
        )
    }

    /// Subset selected by a bit mask over the canonical order (bit `i` keeps point `i`).
    pub fn subset_by_mask(&self, mask: u64) -> PointSet {
        let pts = self
            .points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        PointSet::from_sorted_unchecked(self.context.clone(), pts)
    }

    /// Componentwise minimum of the free coordinates.
    pub fn free_min_corner(&self) -> Option<Vec<i64>> {
        let first = self.points.first()?;
        let mut m = first.free_coords().to_vec();
        for p in &self.points[1..] {
            for (a, b) in m.iter_mut().zip(p.free_coords()) {
                *a = (*a).min(*b);
            }
        }
        Some(m)
    }

    /// Translate whose free min-corner is the origin (torsion coordinates untouched).
    pub fn anchored(&self) -> Result<PointSet> {
        let Some(corner) = self.free_min_corner() else {
            return Ok(self.clone());
        };
        let neg: Vec<i64> = corner.iter().map(|&c| -c).collect();
        let t = self
            .context
            .vector(neg, vec![0; self.context.torsion_len()])?;
        self.translate(&t)
    }

    /// Whether some translate `self + t` is contained in `other`.
    pub fn has_translate_in(&self, other: &PointSet) -> Result<bool> {
        self.context.ensure_same(&other.context)?;
        let Some(first) = self.points.first() else {
            return Ok(true);
        };
        for anchor in &other.points {
            let t = self.context.sub(anchor, first)?;
            let mut ok = true;
            for p in &self.points[1..] {
                if !other.contains(&self.context.add(p, &t)?) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Dimension: rank of the free part of the group generated by `A - A`.
    pub fn dimension(&self) -> Result<usize> {
        let first = self.points.first().ok_or(Error::Empty("dimension of an empty set"))?;
        let diffs: Vec<Vec<i64>> = self.points[1..]
            .iter()
            .map(|p| {
                p.free_coords()
                    .iter()
                    .zip(first.free_coords())
                    .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow("difference")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(lattice::rank(&diffs))
    }

    /// Cartesian product in the product context.
    pub fn product(&self, other: &PointSet) -> PointSet {
        let ctx = self.context.product(&other.context);
        let pts = self
            .points
            .iter()
            .flat_map(|a| other.points.iter().map(move |b| a.concat(b)));
        PointSet::new(ctx, pts).expect("product of valid sets is valid")
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a GroupVector;
    type IntoIter = std::slice::Iter<'a, GroupVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// `A + B = {a + b}`.
pub fn sumset(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    a.context.ensure_same(&b.context)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("sumset operand"));
    }
    let ctx = &a.context;
    let mut out = BTreeSet::new();
    for x in &a.points {
        for y in &b.points {
            out.insert(ctx.add(x, y)?);
        }
    }
    Ok(PointSet::from_sorted_unchecked(ctx.clone(), out.into_iter().collect()))
}

/// Sum of several sets, left to right.
pub fn sumset_many(sets: &[&PointSet]) -> Result<PointSet> {
    let (first, rest) = sets.split_first().ok_or(Error::Empty("sumset of no sets"))?;
    rest.iter().try_fold((*first).clone(), |acc, s| sumset(&acc, s))
}

/// `k A = A + ... + A` (`k` copies).
pub fn iterated_sumset(a: &PointSet, k: usize) -> Result<PointSet> {
    if k == 0 {
        return Err(Error::invalid("iterated sumset needs k >= 1"));
    }
    if a.is_empty() {
        return Err(Error::Empty("iterated sumset operand"));
    }
    // Binary powering keeps the intermediate sets small.
    let mut result: Option<PointSet> = None;
    let mut base = a.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => sumset(&r, &base)?,
            });
        }
        k >>= 1;
        if k > 0 {
            base = sumset(&base, &base)?;
        }
    }
    Ok(result.expect("k >= 1"))
}
