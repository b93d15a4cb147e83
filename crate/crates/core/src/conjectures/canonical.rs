//! Normal forms of small sets of `Z^d` under translation and the signed
//! coordinate permutations.

use crate::combin::{binomial, next_combination, unrank_combination};
use crate::error::{Error, Result};

/// Signed permutations of `d` coordinates as `(perm, signs)`; only the
/// identity for `d > 2`.
fn symmetries(d: usize) -> Vec<(Vec<usize>, Vec<i64>)> {
    match d {
        1 => vec![(vec![0], vec![1]), (vec![0], vec![-1])],
        2 => {
            let mut out = Vec::new();
            for perm in [[0, 1], [1, 0]] {
                for s0 in [1, -1] {
                    for s1 in [1, -1] {
                        out.push((perm.to_vec(), vec![s0, s1]));
                    }
                }
            }
            out
        }
        _ => vec![((0..d).collect(), vec![1; d])],
    }
}

/// Translates so that the coordinatewise minimum is the origin, then sorts.
pub fn anchor(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = points.first().map_or(0, |p| p.len());
    let mins: Vec<i64> = (0..d).map(|i| points.iter().map(|p| p[i]).min().unwrap()).collect();
    let mut out: Vec<Vec<i64>> = points
        .iter()
        .map(|p| p.iter().zip(&mins).map(|(x, m)| x - m).collect())
        .collect();
    out.sort();
    out
}

/// Lexicographically smallest anchored image over the symmetries.
pub fn canonical_form(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = points.first().map_or(0, |p| p.len());
    symmetries(d)
        .iter()
        .map(|(perm, signs)| {
            let image: Vec<Vec<i64>> = points
                .iter()
                .map(|p| perm.iter().zip(signs).map(|(&j, s)| s * p[j]).collect())
                .collect();
            anchor(&image)
        })
        .min()
        .unwrap_or_default()
}

/// Subsets of the cube `[0, width)^dim` with `1..=max_size` points, by size
/// and then lexicographically by cell index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetEnumeration {
    pub dim: usize,
    pub width: usize,
    pub max_size: usize,
}

impl SubsetEnumeration {
    pub fn new(dim: usize, width: usize, max_size: usize) -> Result<Self> {
        if dim == 0 || width == 0 || max_size == 0 {
            return Err(Error::invalid("enumeration needs dim, width and size bound >= 1"));
        }
        let cells = width.checked_pow(dim as u32).filter(|&c| c <= 64);
        if cells.is_none() {
            return Err(Error::SizeBound {
                what: "enumeration cube",
                size: width.saturating_pow(dim as u32),
                limit: 64,
            });
        }
        Ok(SubsetEnumeration { dim, width, max_size })
    }

    pub fn cells(&self) -> usize {
        self.width.pow(self.dim as u32)
    }

    /// Number of enumerated subsets.
    pub fn total(&self) -> u64 {
        let n = self.cells() as u64;
        (1..=self.max_size as u64)
            .map(|k| binomial(n, k))
            .fold(0u128, |a, b| a.saturating_add(b))
            .min(u64::MAX as u128) as u64
    }

    pub fn point(&self, cell: usize) -> Vec<i64> {
        let mut c = vec![0; self.dim];
        let mut i = cell;
        for x in c.iter_mut().rev() {
            *x = (i % self.width) as i64;
            i /= self.width;
        }
        c
    }

    /// Subsets with enumeration indices in `start..end`, in order.
    pub fn range(&self, start: u64, end: u64) -> Vec<(u64, Vec<usize>)> {
        let n = self.cells();
        let mut out = Vec::new();
        let mut offset = 0u64;
        for k in 1..=self.max_size.min(n) {
            let count = binomial(n as u64, k as u64) as u64;
            let (lo, hi) = (start.max(offset), end.min(offset + count));
            if lo < hi {
                let mut c = unrank_combination(n, k, (lo - offset) as u128).expect("rank in range");
                for idx in lo..hi {
                    out.push((idx, c.clone()));
                    if idx + 1 < hi {
                        next_combination(&mut c, n);
                    }
                }
            }
            offset += count;
            if offset >= end {
                break;
            }
        }
        out
    }

    /// Whether the subset given by `cells` is its own canonical form.
    pub fn is_canonical(&self, cells: &[usize]) -> Option<Vec<Vec<i64>>> {
        let pts: Vec<Vec<i64>> = cells.iter().map(|&c| self.point(c)).collect();
        // Cheap rejection: canonical sets touch every coordinate hyperplane.
        if (0..self.dim).any(|i| pts.iter().all(|p| p[i] != 0)) {
            return None;
        }
        (canonical_form(&pts) == pts).then_some(pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_form(&[vec![5], vec![3]]), vec![vec![0], vec![2]]);
        // {0, 1, 3} and its mirror {0, 2, 3}: the smaller sorted list wins.
        assert_eq!(canonical_form(&[vec![0], vec![2], vec![3]]), vec![vec![0], vec![1], vec![3]]);
        let l = canonical_form(&[vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(l, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn range_matches_full_listing() {
        let e = SubsetEnumeration::new(2, 3, 3).unwrap();
        let all = e.range(0, e.total());
        assert_eq!(all.len() as u64, e.total());
        assert_eq!(e.total(), 9 + 36 + 84);
        assert_eq!(all[0].1, vec![0]);
        assert_eq!(all[9].1, vec![0, 1]);
        for (start, end) in [(0, 5), (7, 50), (44, 129), (128, 129)] {
            assert_eq!(e.range(start, end), all[start as usize..end as usize].to_vec());
        }
    }

    /// Each class is visited once: the canonical members are exactly the
    /// distinct canonical forms of all subsets.
    #[test]
    fn one_representative_per_class() {
        for (dim, width, size) in [(1, 6, 4), (2, 3, 4), (2, 4, 3)] {
            let e = SubsetEnumeration::new(dim, width, size).unwrap();
            let all = e.range(0, e.total());
            let forms: BTreeSet<Vec<Vec<i64>>> = all
                .iter()
                .map(|(_, c)| canonical_form(&c.iter().map(|&x| e.point(x)).collect::<Vec<_>>()))
                .collect();
            let reps: Vec<_> = all.iter().filter_map(|(_, c)| e.is_canonical(c)).collect();
            assert_eq!(reps.len(), forms.len(), "{dim} {width} {size}");
            assert_eq!(reps.into_iter().collect::<BTreeSet<_>>(), forms);
        }
    }

    #[test]
    fn class_counts_in_one_dimension() {
        // Subsets of {0..5} containing 0, up to reflection; sizes 1 and 2 give
        // one class per diameter.
        let e = SubsetEnumeration::new(1, 6, 2).unwrap();
        let n = e.range(0, e.total()).iter().filter(|(_, c)| e.is_canonical(c).is_some()).count();
        assert_eq!(n, 1 + 5);
    }
}
