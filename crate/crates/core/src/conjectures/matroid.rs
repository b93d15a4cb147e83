//! Pairs of sets related by a bijection that does not raise dimensions.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::format_rational;
use crate::group::{GroupVector, PointSet};
use crate::laws::{set_json, Instance, Margin, Status, Verdict};
use crate::search::{beta_estimate, SearchConfig, Strategy};

/// Largest `|U|` for the subset dimension enumeration.
pub const MATROID_MAX: usize = 8;

/// A bijection `U -> V`, stored as index pairs into the sorted point lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidMap {
    u: PointSet,
    v: PointSet,
    pairing: Vec<(usize, usize)>,
}

impl MatroidMap {
    pub fn new(u: PointSet, v: PointSet, pairing: Vec<(usize, usize)>) -> Result<Self> {
        if u.len() != v.len() || pairing.len() != u.len() {
            return Err(Error::invalid("a matroid map pairs sets of equal size"));
        }
        let mut seen_u = vec![false; u.len()];
        let mut seen_v = vec![false; v.len()];
        for &(i, j) in &pairing {
            if i >= u.len() || j >= v.len() || seen_u[i] || seen_v[j] {
                return Err(Error::invalid("pairing is not a bijection"));
            }
            seen_u[i] = true;
            seen_v[j] = true;
        }
        let mut pairing = pairing;
        pairing.sort_unstable();
        Ok(MatroidMap { u, v, pairing })
    }

    /// The map sending the `i`-th point of `u` to `images[i]`.
    pub fn from_images(u: PointSet, images: Vec<GroupVector>) -> Result<Self> {
        let v = PointSet::new(u.context().clone(), images.iter().cloned())?;
        if v.len() != u.len() {
            return Err(Error::invalid("images are not distinct"));
        }
        let pairing = images
            .iter()
            .enumerate()
            .map(|(i, y)| (i, v.points().binary_search(y).expect("image is in V")))
            .collect();
        MatroidMap::new(u, v, pairing)
    }

    pub fn source(&self) -> &PointSet {
        &self.u
    }

    pub fn target(&self) -> &PointSet {
        &self.v
    }

    pub fn pairing(&self) -> &[(usize, usize)] {
        &self.pairing
    }

    pub fn to_json(&self) -> Value {
        json!({"u": set_json(&self.u), "v": set_json(&self.v), "pairing": self.pairing})
    }

    /// First nonempty `U' ⊆ U` with `dim φ(U') > dim U'`.
    pub fn dimension_violation(&self) -> Result<Option<PointSet>> {
        if self.u.len() > MATROID_MAX {
            return Err(Error::SizeBound {
                what: "matroid source",
                size: self.u.len(),
                limit: MATROID_MAX,
            });
        }
        let image_of: Vec<usize> = self.pairing.iter().map(|&(_, j)| j).collect();
        for mask in 1u64..(1 << self.u.len()) {
            let sub = self.u.subset_by_mask(mask);
            let img = PointSet::new(
                self.v.context().clone(),
                (0..self.u.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.v.points()[image_of[i]].clone()),
            )?;
            if img.dimension()? > sub.dimension()? {
                return Ok(Some(sub));
            }
        }
        Ok(None)
    }
}

/// Compares `beta(V)` with `beta(U)` on one window for a map satisfying the
/// dimension condition.
///
/// The estimates bound infima from above, so `beta(V) > beta(U)` on the
/// estimates is reported as [`Status::EvidenceAgainst`], never as a
/// violation.
pub fn check_matroid_pair(map: &MatroidMap, cfg: &SearchConfig) -> Result<Verdict> {
    if cfg.strategy != Strategy::Exhaustive {
        return Err(Error::invalid("the matroid check needs an exhaustive search configuration"));
    }
    if !map.u.context().is_torsion_free() {
        return Err(Error::invalid("the matroid check works in torsion-free groups"));
    }
    if let Some(sub) = map.dimension_violation()? {
        return Err(Error::Precondition(format!(
            "the map raises the dimension of {}",
            set_json(&sub)
        )));
    }
    let ru = beta_estimate(&map.u, cfg)?;
    let rv = beta_estimate(&map.v, cfg)?;
    let (bu, bv) = (ru.exact_power.clone().unwrap(), rv.exact_power.clone().unwrap());
    let holds = bv <= bu;
    let complete = ru.complete && rv.complete;
    let mut verdict = Verdict::new(Instance::MatroidPair { map: map.clone(), cfg: cfg.clone() }, holds, false)
        .margin(Margin::Exact(&bu - &bv))
        .evidence(json!({
            "beta_u": format_rational(&bu),
            "beta_v": format_rational(&bv),
            "witness_u": [ru.witness_a.to_json(), ru.witness_b.to_json()],
            "witness_v": [rv.witness_a.to_json(), rv.witness_b.to_json()],
            "complete": complete,
        }));
    if !holds {
        verdict.status = Status::EvidenceAgainst;
        verdict.counterexample = Some(json!({"beta_u": format_rational(&bu), "beta_v": format_rational(&bv), "complete": complete}));
    }
    Ok(verdict)
}
