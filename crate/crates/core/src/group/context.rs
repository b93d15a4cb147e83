use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ambient group `Z^d x Z_{m1} x ... x Z_{mk}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupContext {
    free_rank: usize,
    torsion_moduli: Vec<u64>,
}

impl GroupContext {
    pub fn new(free_rank: usize, torsion_moduli: Vec<u64>) -> Result<Self> {
        if let Some(m) = torsion_moduli.iter().find(|&&m| m < 2) {
            return Err(Error::invalid(format!("torsion modulus {m} must be >= 2")));
        }
        Ok(GroupContext {
            free_rank,
            torsion_moduli,
        })
    }

    /// `Z^d`.
    pub fn free(free_rank: usize) -> Self {
        GroupContext {
            free_rank,
            torsion_moduli: Vec::new(),
        }
    }

    pub fn trivial() -> Self {
        GroupContext::free(0)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_moduli(&self) -> &[u64] {
        &self.torsion_moduli
    }

    pub fn torsion_len(&self) -> usize {
        self.torsion_moduli.len()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_moduli.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_moduli.is_empty()
    }

    /// Number of coordinates a point carries (free + torsion).
    pub fn arity(&self) -> usize {
        self.free_rank + self.torsion_moduli.len()
    }

    pub fn zero(&self) -> GroupVector {
        GroupVector {
            torsion: vec![0; self.torsion_moduli.len()],
            free: vec![0; self.free_rank],
        }
    }

    /// Builds an element, reducing torsion coordinates into `[0, m)`.
    pub fn vector(&self, free: Vec<i64>, torsion: Vec<i64>) -> Result<GroupVector> {
        if free.len() != self.free_rank || torsion.len() != self.torsion_moduli.len() {
            return Err(Error::ContextMismatch(format!(
                "expected {} free and {} torsion coordinates, got {} and {}",
                self.free_rank,
                self.torsion_moduli.len(),
                free.len(),
                torsion.len()
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&self.torsion_moduli)
            .map(|(&t, &m)| t.rem_euclid(m as i64) as u64)
            .collect();
        Ok(GroupVector { torsion, free })
    }

    /// Element of a torsion-free context from its coordinates.
    pub fn point(&self, free: &[i64]) -> Result<GroupVector> {
        self.vector(free.to_vec(), vec![0; self.torsion_moduli.len()])
    }

    /// Builds an element from coordinates in file order: free coordinates first, then torsion.
    pub fn from_coords(&self, coords: &[i64]) -> Result<GroupVector> {
        if coords.len() != self.arity() {
            return Err(Error::ContextMismatch(format!(
                "expected {} coordinates, got {}",
                self.arity(),
                coords.len()
            )));
        }
        let (f, t) = coords.split_at(self.free_rank);
        self.vector(f.to_vec(), t.to_vec())
    }

    pub fn ensure_same(&self, other: &GroupContext) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("{self} vs {other}")))
        }
    }

    pub fn ensure_contains(&self, v: &GroupVector) -> Result<()> {
        let ok = v.free.len() == self.free_rank
            && v.torsion.len() == self.torsion_moduli.len()
            && v.torsion.iter().zip(&self.torsion_moduli).all(|(t, m)| t < m);
        if ok {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("{v} is not an element of {self}")))
        }
    }

    pub fn add(&self, a: &GroupVector, b: &GroupVector) -> Result<GroupVector> {
        let free = a
            .free
            .iter()
            .zip(&b.free)
            .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow("addition")))
            .collect::<Result<Vec<_>>>()?;
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.torsion_moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        Ok(GroupVector { torsion, free })
    }

    pub fn neg(&self, a: &GroupVector) -> Result<GroupVector> {
        let free = a
            .free
            .iter()
            .map(|x| x.checked_neg().ok_or(Error::Overflow("negation")))
            .collect::<Result<Vec<_>>>()?;
        let torsion = a
            .torsion
            .iter()
            .zip(&self.torsion_moduli)
            .map(|(x, m)| (m - x) % m)
            .collect();
        Ok(GroupVector { torsion, free })
    }

    pub fn sub(&self, a: &GroupVector, b: &GroupVector) -> Result<GroupVector> {
        self.add(a, &self.neg(b)?)
    }

    /// `k * v` for an integer `k`.
    pub fn scale(&self, k: i64, v: &GroupVector) -> Result<GroupVector> {
        let free = v
            .free
            .iter()
            .map(|x| x.checked_mul(k).ok_or(Error::Overflow("scaling")))
            .collect::<Result<Vec<_>>>()?;
        let torsion = v
            .torsion
            .iter()
            .zip(&self.torsion_moduli)
            .map(|(&x, &m)| ((x as i128 * k as i128).rem_euclid(m as i128)) as u64)
            .collect();
        Ok(GroupVector { torsion, free })
    }

    /// Cartesian product context, coordinates of `self` first.
    pub fn product(&self, other: &GroupContext) -> GroupContext {
        let mut torsion_moduli = self.torsion_moduli.clone();
        torsion_moduli.extend_from_slice(&other.torsion_moduli);
        GroupContext {
            free_rank: self.free_rank + other.free_rank,
            torsion_moduli,
        }
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.free_rank)?;
        for m in &self.torsion_moduli {
            write!(f, " x Z_{m}")?;
        }
        Ok(())
    }
}

/// An element of a [`GroupContext`].
///
/// Field order matters: the derived `Ord` is lexicographic on
/// `(torsion, free)`, which is the canonical order of point sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupVector {
    torsion: Vec<u64>,
    free: Vec<i64>,
}

impl GroupVector {
    pub fn free_coords(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion_coords(&self) -> &[u64] {
        &self.torsion
    }

    /// Coordinates in file order (free, then torsion).
    pub fn coords(&self) -> Vec<i64> {
        self.free
            .iter()
            .copied()
            .chain(self.torsion.iter().map(|&t| t as i64))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&t| t == 0)
    }

    pub(crate) fn from_parts(free: Vec<i64>, torsion: Vec<u64>) -> Self {
        GroupVector { torsion, free }
    }

    /// Concatenation `(self, other)` in the product context.
    pub fn concat(&self, other: &GroupVector) -> GroupVector {
        let mut free = self.free.clone();
        free.extend_from_slice(&other.free);
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        GroupVector { torsion, free }
    }
}

impl fmt::Display for GroupVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coords();
        if c.len() == 1 {
            return write!(f, "{}", c[0]);
        }
        write!(f, "(")?;
        for (i, x) in c.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_reduces_on_construction_and_addition() {
        let ctx = GroupContext::new(1, vec![2]).unwrap();
        let a = ctx.vector(vec![0], vec![3]).unwrap();
        assert_eq!(a.torsion_coords(), &[1]);
        let s = ctx.add(&a, &a).unwrap();
        assert_eq!(s.torsion_coords(), &[0]);
        assert_eq!(ctx.neg(&a).unwrap(), a);
    }

    #[test]
    fn rejects_small_moduli_and_arity_mismatch() {
        assert!(GroupContext::new(1, vec![1]).is_err());
        let ctx = GroupContext::free(2);
        assert!(ctx.point(&[1]).is_err());
        assert!(ctx.from_coords(&[1, 2, 3]).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let ctx = GroupContext::free(1);
        let a = ctx.point(&[i64::MAX]).unwrap();
        let b = ctx.point(&[1]).unwrap();
        assert!(matches!(ctx.add(&a, &b), Err(Error::Overflow(_))));
    }

    #[test]
    fn canonical_order_is_torsion_first() {
        let ctx = GroupContext::new(1, vec![3]).unwrap();
        let a = ctx.vector(vec![5], vec![0]).unwrap();
        let b = ctx.vector(vec![-5], vec![1]).unwrap();
        assert!(a < b);
    }
}
