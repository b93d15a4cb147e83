use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::context::{GroupContext, GroupVector};
use crate::group::set::PointSet;

/// A homomorphism `Z^d x T -> Z^d' x T'` given by integer matrices.
///
/// Free coordinates of the image depend only on free coordinates of the
/// source (torsion has nowhere to go in a free group). Torsion coordinates
/// of the image combine both parts and are reduced by the target moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    context_in: GroupContext,
    context_out: GroupContext,
    free_matrix: Vec<Vec<i64>>,
    torsion_from_free: Vec<Vec<i64>>,
    torsion_from_torsion: Vec<Vec<i64>>,
}

fn check_shape(m: &[Vec<i64>], rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::invalid(format!("{what} must be {rows}x{cols}")));
    }
    Ok(())
}

impl Homomorphism {
    pub fn new(
        context_in: GroupContext,
        context_out: GroupContext,
        free_matrix: Vec<Vec<i64>>,
        torsion_from_free: Vec<Vec<i64>>,
        torsion_from_torsion: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let (d, k) = (context_in.free_rank(), context_in.torsion_len());
        let (d2, k2) = (context_out.free_rank(), context_out.torsion_len());
        check_shape(&free_matrix, d2, d, "free matrix")?;
        check_shape(&torsion_from_free, k2, d, "free-to-torsion matrix")?;
        check_shape(&torsion_from_torsion, k2, k, "torsion matrix")?;
        // An element of order m_k must land on an element whose order divides m_k.
        for (j, row) in torsion_from_torsion.iter().enumerate() {
            let target = context_out.torsion_moduli()[j] as i128;
            for (kk, &b) in row.iter().enumerate() {
                let m = context_in.torsion_moduli()[kk] as i128;
                if (b as i128 * m).rem_euclid(target) != 0 {
                    return Err(Error::invalid(format!(
                        "torsion entry ({j},{kk}) = {b} is not well defined from Z_{m} to Z_{target}"
                    )));
                }
            }
        }
        Ok(Homomorphism {
            context_in,
            context_out,
            free_matrix,
            torsion_from_free,
            torsion_from_torsion,
        })
    }

    pub fn identity(ctx: &GroupContext) -> Self {
        let (d, k) = (ctx.free_rank(), ctx.torsion_len());
        Homomorphism {
            context_in: ctx.clone(),
            context_out: ctx.clone(),
            free_matrix: unit_rows(&(0..d).collect::<Vec<_>>(), d),
            torsion_from_free: vec![vec![0; d]; k],
            torsion_from_torsion: unit_rows(&(0..k).collect::<Vec<_>>(), k),
        }
    }

    /// Linear map `Z^d -> Z^e`, `x -> M x`.
    pub fn linear(matrix: Vec<Vec<i64>>, in_rank: usize) -> Result<Self> {
        let out = matrix.len();
        Homomorphism::new(
            GroupContext::free(in_rank),
            GroupContext::free(out),
            matrix,
            vec![],
            vec![],
        )
    }

    /// Keeps the listed free and torsion coordinates (in the given order).
    pub fn coordinate_projection(ctx: &GroupContext, keep_free: &[usize], keep_torsion: &[usize]) -> Result<Self> {
        let (d, k) = (ctx.free_rank(), ctx.torsion_len());
        if keep_free.iter().any(|&i| i >= d) || keep_torsion.iter().any(|&i| i >= k) {
            return Err(Error::invalid("projection coordinate out of range"));
        }
        let moduli = keep_torsion.iter().map(|&i| ctx.torsion_moduli()[i]).collect();
        Homomorphism::new(
            ctx.clone(),
            GroupContext::new(keep_free.len(), moduli)?,
            unit_rows(keep_free, d),
            vec![vec![0; d]; keep_torsion.len()],
            unit_rows(keep_torsion, k),
        )
    }

    /// Forgets one free coordinate; the kernel is the infinite cyclic group on it.
    pub fn drop_free_coordinate(ctx: &GroupContext, coord: usize) -> Result<Self> {
        let keep: Vec<usize> = (0..ctx.free_rank()).filter(|&i| i != coord).collect();
        if keep.len() + 1 != ctx.free_rank() {
            return Err(Error::invalid(format!("no free coordinate {coord}")));
        }
        let torsion: Vec<usize> = (0..ctx.torsion_len()).collect();
        Homomorphism::coordinate_projection(ctx, &keep, &torsion)
    }

    /// Reduces free coordinate `coord` modulo `m`, appending it as a new torsion factor.
    pub fn reduce_free_mod(ctx: &GroupContext, coord: usize, m: u64) -> Result<Self> {
        let d = ctx.free_rank();
        if coord >= d {
            return Err(Error::invalid(format!("no free coordinate {coord}")));
        }
        let keep: Vec<usize> = (0..d).filter(|&i| i != coord).collect();
        let mut moduli = ctx.torsion_moduli().to_vec();
        moduli.push(m);
        let k = ctx.torsion_len();
        let mut tf = vec![vec![0; d]; k + 1];
        tf[k][coord] = 1;
        let mut tt = unit_rows(&(0..k).collect::<Vec<_>>(), k);
        tt.push(vec![0; k]);
        Homomorphism::new(ctx.clone(), GroupContext::new(d - 1, moduli)?, unit_rows(&keep, d), tf, tt)
    }

    pub fn context_in(&self) -> &GroupContext {
        &self.context_in
    }

    pub fn context_out(&self) -> &GroupContext {
        &self.context_out
    }

    pub fn free_matrix(&self) -> &[Vec<i64>] {
        &self.free_matrix
    }

    pub fn apply(&self, v: &GroupVector) -> Result<GroupVector> {
        self.context_in.ensure_contains(v)?;
        let x = v.free_coords();
        let t = v.torsion_coords();
        let free = self
            .free_matrix
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
                i64::try_from(s).map_err(|_| Error::Overflow("homomorphism image"))
            })
            .collect::<Result<Vec<_>>>()?;
        let torsion = self
            .torsion_from_free
            .iter()
            .zip(&self.torsion_from_torsion)
            .zip(self.context_out.torsion_moduli())
            .map(|((rf, rt), &m)| {
                let m = m as i128;
                let mut s: i128 = 0;
                for (&a, &b) in rf.iter().zip(x) {
                    s = (s + (a as i128 * b as i128).rem_euclid(m)) % m;
                }
                for (&a, &b) in rt.iter().zip(t) {
                    s = (s + (a as i128 * b as i128).rem_euclid(m)) % m;
                }
                s as u64
            })
            .collect();
        Ok(GroupVector::from_parts(free, torsion))
    }

    /// If this map keeps a subset of coordinates verbatim, the kept
    /// `(free, torsion)` coordinate indices.
    pub fn as_coordinate_projection(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        if self.torsion_from_free.iter().flatten().any(|&x| x != 0) {
            return None;
        }
        let keep_free = unit_row_indices(&self.free_matrix)?;
        let keep_torsion = unit_row_indices(&self.torsion_from_torsion)?;
        let same_moduli = keep_torsion
            .iter()
            .zip(self.context_out.torsion_moduli())
            .all(|(&i, &m)| self.context_in.torsion_moduli()[i] == m);
        same_moduli.then_some((keep_free, keep_torsion))
    }

    /// The dropped free coordinate, when this map forgets exactly one free
    /// coordinate and keeps everything else in order.
    pub fn dropped_free_coordinate(&self) -> Option<usize> {
        let (f, t) = self.as_coordinate_projection()?;
        let d = self.context_in.free_rank();
        if f.len() + 1 != d || t != (0..self.context_in.torsion_len()).collect::<Vec<_>>() {
            return None;
        }
        if f.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        (0..d).find(|i| !f.contains(i))
    }
}

fn unit_rows(cols: &[usize], width: usize) -> Vec<Vec<i64>> {
    cols.iter()
        .map(|&c| {
            let mut r = vec![0; width];
            r[c] = 1;
            r
        })
        .collect()
}

fn unit_row_indices(m: &[Vec<i64>]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(m.len());
    for row in m {
        let mut nz = row.iter().enumerate().filter(|(_, &x)| x != 0);
        let (i, &x) = nz.next()?;
        if x != 1 || nz.next().is_some() || out.contains(&i) {
            return None;
        }
        out.push(i);
    }
    Some(out)
}

/// Image `h(A)`.
pub fn apply_hom(h: &Homomorphism, a: &PointSet) -> Result<PointSet> {
    h.context_in.ensure_same(a.context())?;
    let pts = a.iter().map(|p| h.apply(p)).collect::<Result<Vec<_>>>()?;
    PointSet::new(h.context_out.clone(), pts)
}

/// Partition of `A` by image under `h`.
///
/// For coordinate projections each fiber is expressed in the complementary
/// coordinates (the kernel); otherwise fibers stay in the source context.
pub fn fibers(a: &PointSet, h: &Homomorphism) -> Result<BTreeMap<GroupVector, PointSet>> {
    h.context_in.ensure_same(a.context())?;
    if a.is_empty() {
        return Err(Error::Empty("fibers of an empty set"));
    }
    let mut groups: BTreeMap<GroupVector, Vec<GroupVector>> = BTreeMap::new();
    for p in a {
        groups.entry(h.apply(p)?).or_default().push(p.clone());
    }
    let projection = h.as_coordinate_projection();
    let kernel_ctx = match &projection {
        Some((f, t)) => {
            let moduli = (0..h.context_in.torsion_len())
                .filter(|i| !t.contains(i))
                .map(|i| h.context_in.torsion_moduli()[i])
                .collect();
            let free = h.context_in.free_rank() - f.len();
            GroupContext::new(free, moduli)?
        }
        None => h.context_in.clone(),
    };
    let mut out = BTreeMap::new();
    for (key, pts) in groups {
        let set = match &projection {
            Some((f, t)) => {
                let pts = pts.iter().map(|p| {
                    let free = (0..p.free_coords().len())
                        .filter(|i| !f.contains(i))
                        .map(|i| p.free_coords()[i])
                        .collect();
                    let torsion = (0..p.torsion_coords().len())
                        .filter(|i| !t.contains(i))
                        .map(|i| p.torsion_coords()[i])
                        .collect();
                    GroupVector::from_parts(free, torsion)
                });
                PointSet::new(kernel_ctx.clone(), pts)?
            }
            None => PointSet::new(kernel_ctx.clone(), pts)?,
        };
        out.insert(key, set);
    }
    Ok(out)
}

/// Compression along a map that forgets one free coordinate: every fiber of
/// size `n` becomes the segment `{0, ..., n-1}` on that coordinate.
pub fn compress(a: &PointSet, h: &Homomorphism) -> Result<PointSet> {
    h.context_in.ensure_same(a.context())?;
    let c = h.dropped_free_coordinate().ok_or_else(|| {
        Error::UnsupportedKernel("compression needs a map forgetting exactly one free coordinate".into())
    })?;
    let mut counts: BTreeMap<GroupVector, i64> = BTreeMap::new();
    for p in a {
        *counts.entry(h.apply(p)?).or_default() += 1;
    }
    let mut pts = Vec::with_capacity(a.len());
    for (x, n) in counts {
        for s in 0..n {
            let mut free = x.free_coords().to_vec();
            free.insert(c, s);
            pts.push(GroupVector::from_parts(free, x.torsion_coords().to_vec()));
        }
    }
    PointSet::new(a.context().clone(), pts)
}
