//! Exhaustive enumeration of pairs `(A, B)` of subsets of a box.
//!
//! Cells of the box are indexed so that index order is the canonical
//! (torsion-first lexicographic) order of their coordinates. Subsets are
//! visited as a preorder walk of the tree of increasing cell sequences,
//! which is the lexicographic order of their sorted element lists. Only
//! sequences whose first cell has leading coordinate 0 are kept (every set
//! has such a translate); among those, sets whose free min-corner is the
//! origin are the canonical representatives that get evaluated.
//!
//! Sums are computed on bitsets over a grid large enough to hold
//! `A + B + L` without wrapping in the free coordinates; torsion
//! coordinates are laid out as separate word-aligned blocks.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{cmp_power_products, Exponent};
use crate::group::{GroupContext, GroupVector, PointSet};
use crate::search::config::Variant;

const NONE: u32 = u32::MAX;

/// Largest node list the engine will build.
pub(crate) const NODE_LIST_LIMIT: u128 = 50_000_000;

/// Number of A-nodes per shard and shards per batch. Both are fixed so that
/// results and node counts do not depend on the thread count.
const SHARD_SIZE: usize = 64;
const BATCH_SHARDS: usize = 16;

/// The box, as a grid of cells in canonical order.
#[derive(Clone, Debug)]
pub(crate) struct Grid {
    pub widths: Vec<usize>,
    pub moduli: Vec<u64>,
    free_cells: usize,
    cells: usize,
}

impl Grid {
    pub fn new(widths: Vec<usize>, moduli: Vec<u64>) -> Result<Self> {
        let mut cells: u128 = 1;
        for &w in &widths {
            cells *= w as u128;
        }
        let free_cells = cells as usize;
        for &m in &moduli {
            cells *= m as u128;
        }
        if cells > u32::MAX as u128 / 2 {
            return Err(Error::SearchSpace(format!("box has {cells} cells")));
        }
        Ok(Grid {
            widths,
            moduli,
            free_cells,
            cells: cells as usize,
        })
    }

    pub fn len(&self) -> usize {
        self.cells
    }

    /// `(torsion, free)` coordinates of a cell.
    pub fn coords(&self, cell: usize) -> (Vec<u64>, Vec<i64>) {
        let mut f = cell % self.free_cells;
        let mut t = cell / self.free_cells;
        let mut free = vec![0; self.widths.len()];
        for i in (0..self.widths.len()).rev() {
            free[i] = (f % self.widths[i]) as i64;
            f /= self.widths[i];
        }
        let mut torsion = vec![0; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            torsion[i] = (t as u64) % self.moduli[i];
            t /= self.moduli[i] as usize;
        }
        (torsion, free)
    }

    pub fn cell_of(&self, torsion: &[u64], free: &[i64]) -> Option<usize> {
        let mut t = 0usize;
        for (x, m) in torsion.iter().zip(&self.moduli) {
            t = t * (*m as usize) + (*x as usize);
        }
        let mut f = 0usize;
        for (x, w) in free.iter().zip(&self.widths) {
            if *x < 0 || *x as usize >= *w {
                return None;
            }
            f = f * w + *x as usize;
        }
        Some(t * self.free_cells + f)
    }

    fn leading_is_zero(&self, cell: usize) -> bool {
        let (t, f) = self.coords(cell);
        match t.first() {
            Some(&x) => x == 0,
            None => f.first().map_or(true, |&x| x == 0),
        }
    }

    fn zero_mask(&self, cell: usize) -> u64 {
        let (_, f) = self.coords(cell);
        f.iter()
            .enumerate()
            .filter(|(_, &x)| x == 0)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn to_point_set(&self, ctx: &GroupContext, cells: &[usize]) -> PointSet {
        let pts = cells.iter().map(|&c| {
            let (t, f) = self.coords(c);
            GroupVector::from_parts(f, t)
        });
        PointSet::new(ctx.clone(), pts).expect("grid cells are group elements")
    }
}

/// Preorder list of increasing cell sequences of length `1..=card`.
#[derive(Clone, Debug)]
pub(crate) struct NodeList {
    pub last: Vec<u32>,
    pub parent: Vec<u32>,
    pub depth: Vec<u8>,
    pub skip: Vec<u32>,
    pub anchored: Vec<bool>,
}

impl NodeList {
    pub fn count(grid: &Grid, card: usize) -> u128 {
        let n = grid.len();
        let mut total: u128 = 0;
        for c in 0..n {
            if !grid.leading_is_zero(c) {
                continue;
            }
            let rest = (n - c - 1) as u64;
            for k in 0..card as u64 {
                total = total.saturating_add(crate::combin::binomial(rest, k));
            }
        }
        total
    }

    pub fn build(grid: &Grid, card: usize) -> Result<Self> {
        let count = NodeList::count(grid, card);
        if count > NODE_LIST_LIMIT {
            return Err(Error::SearchSpace(format!(
                "{count} subsets per side exceed the enumeration limit {NODE_LIST_LIMIT}"
            )));
        }
        let full: u64 = if grid.widths.is_empty() { 0 } else { (1u64 << grid.widths.len()) - 1 };
        let masks: Vec<u64> = (0..grid.len()).map(|c| grid.zero_mask(c)).collect();
        let mut nl = NodeList {
            last: Vec::with_capacity(count as usize),
            parent: Vec::with_capacity(count as usize),
            depth: Vec::with_capacity(count as usize),
            skip: Vec::with_capacity(count as usize),
            anchored: Vec::with_capacity(count as usize),
        };
        fn push(nl: &mut NodeList, grid_len: usize, masks: &[u64], full: u64, card: usize, cell: usize, parent: u32, depth: usize, mask: u64) {
            let idx = nl.last.len();
            let mask = mask | masks[cell];
            nl.last.push(cell as u32);
            nl.parent.push(parent);
            nl.depth.push(depth as u8);
            nl.skip.push(0);
            nl.anchored.push(mask == full);
            if depth < card {
                for c in cell + 1..grid_len {
                    push(nl, grid_len, masks, full, card, c, idx as u32, depth + 1, mask);
                }
            }
            nl.skip[idx] = nl.last.len() as u32;
        }
        for c in 0..grid.len() {
            if grid.leading_is_zero(c) {
                push(&mut nl, grid.len(), &masks, full, card, c, NONE, 1, 0);
            }
        }
        Ok(nl)
    }

    pub fn len(&self) -> usize {
        self.last.len()
    }

    /// Cells of node `i`, in increasing order.
    pub fn cells(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut x = i as u32;
        while x != NONE {
            out.push(self.last[x as usize] as usize);
            x = self.parent[x as usize];
        }
        out.reverse();
        out
    }

    /// Ancestors of node `i`, root first, excluding `i`.
    fn ancestors(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut x = self.parent[i];
        while x != NONE {
            out.push(x as usize);
            x = self.parent[x as usize];
        }
        out.reverse();
        out
    }
}

/// Bitset machinery for `sum of cells + levels`.
#[derive(Clone, Debug)]
pub(crate) struct SumSpace {
    pub grid: Grid,
    words: usize,
    blocks: usize,
    frame: usize,
    levels: usize,
    add: Vec<u32>,
    shifts: Vec<(u32, u32, u32)>,
    lbits: Vec<u64>,
    weights: Vec<u64>,
    /// Lower bound on how much the weighted count grows per added element.
    pub growth: u64,
    pub max_numerator: u64,
}

impl SumSpace {
    /// `levels` are `(weight, set)` pairs; all sets live in the grid's group.
    pub fn new(grid: Grid, levels: &[(u64, PointSet)]) -> Result<Self> {
        let d = grid.widths.len();
        let union: Vec<&GroupVector> = levels.iter().flat_map(|(_, s)| s.iter()).collect();
        if union.is_empty() {
            return Err(Error::Empty("search target"));
        }
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for p in &union {
            for (i, &x) in p.free_coords().iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        let extents: Vec<usize> = (0..d)
            .map(|i| {
                let e = (hi[i] as i128 - lo[i] as i128) as usize;
                2 * (grid.widths[i] - 1) + e + 1
            })
            .collect();
        let mut bits: u128 = 1;
        for &e in &extents {
            bits *= e as u128;
        }
        if bits > 1 << 24 {
            return Err(Error::SearchSpace(format!("sum grid of {bits} points is too large")));
        }
        let words = (bits as usize).div_ceil(64);
        let blocks = grid.cells / grid.free_cells;
        let frame = words * blocks;
        let mut strides = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * extents[i + 1];
        }
        let block_of = |t: &[u64]| -> usize {
            t.iter().zip(&grid.moduli).fold(0usize, |acc, (x, m)| acc * (*m as usize) + *x as usize)
        };
        // Block addition table: mixed-radix addition of torsion residues.
        let mut add = vec![0u32; blocks * blocks];
        let torsion_of = |mut b: usize| -> Vec<u64> {
            let mut t = vec![0; grid.moduli.len()];
            for i in (0..grid.moduli.len()).rev() {
                t[i] = (b as u64) % grid.moduli[i];
                b /= grid.moduli[i] as usize;
            }
            t
        };
        for x in 0..blocks {
            let tx = torsion_of(x);
            for y in 0..blocks {
                let ty = torsion_of(y);
                let s: Vec<u64> = tx
                    .iter()
                    .zip(&ty)
                    .zip(&grid.moduli)
                    .map(|((a, b), m)| (a + b) % m)
                    .collect();
                add[x * blocks + y] = block_of(&s) as u32;
            }
        }
        let shifts = (0..grid.cells)
            .map(|c| {
                let (t, f) = grid.coords(c);
                let off: usize = f.iter().zip(&strides).map(|(&x, s)| x as usize * s).sum();
                ((off / 64) as u32, (off % 64) as u32, block_of(&t) as u32)
            })
            .collect();
        let mut lbits = vec![0u64; levels.len() * frame];
        for (l, (_, set)) in levels.iter().enumerate() {
            for p in set {
                let off: usize = p
                    .free_coords()
                    .iter()
                    .zip(&lo)
                    .zip(&strides)
                    .map(|((&x, &m), s)| (x - m) as usize * s)
                    .sum();
                let b = block_of(p.torsion_coords());
                lbits[l * frame + b * words + off / 64] |= 1 << (off % 64);
            }
        }
        let weights: Vec<u64> = levels.iter().map(|(w, _)| *w).collect();
        let wsum: u64 = weights.iter().sum();
        let growth = if grid.moduli.is_empty() { wsum } else { 0 };
        let max_numerator = wsum
            .checked_mul((bits as u64) * blocks as u64)
            .ok_or(Error::Overflow("numerator bound"))?;
        Ok(SumSpace {
            grid,
            words,
            blocks,
            frame,
            levels: levels.len(),
            add,
            shifts,
            lbits,
            weights,
            growth,
            max_numerator,
        })
    }

    /// Words per state (all levels).
    pub fn state_len(&self) -> usize {
        self.levels * self.frame
    }

    /// `dst |= src + cell`, level by level.
    #[inline]
    fn shift_or(&self, dst: &mut [u64], src: &[u64], cell: usize) {
        let (ws, bs, tb) = self.shifts[cell];
        let (ws, bs, tb) = (ws as usize, bs, tb as usize);
        let w = self.words;
        for l in 0..self.levels {
            for s in 0..self.blocks {
                let d = self.add[s * self.blocks + tb] as usize;
                let so = l * self.frame + s * w;
                let dof = l * self.frame + d * w;
                let src_b = &src[so..so + w];
                let dst_b = &mut dst[dof..dof + w];
                if bs == 0 {
                    for i in ws..w {
                        dst_b[i] |= src_b[i - ws];
                    }
                } else {
                    dst_b[ws] |= src_b[0] << bs;
                    for i in ws + 1..w {
                        dst_b[i] |= (src_b[i - ws] << bs) | (src_b[i - ws - 1] >> (64 - bs));
                    }
                }
            }
        }
    }

    #[inline]
    fn weighted_count(&self, s: &[u64]) -> u64 {
        let mut n = 0u64;
        for l in 0..self.levels {
            let c: u32 = s[l * self.frame..(l + 1) * self.frame].iter().map(|x| x.count_ones()).sum();
            n += self.weights[l] * c as u64;
        }
        n
    }

    /// Weighted numerator `sum_l w_l |A + B + L_l|` for explicit cell lists.
    pub fn numerator(&self, a: &[usize], b: &[usize]) -> u64 {
        let n = self.state_len();
        let mut ta = vec![0u64; n];
        for &c in a {
            self.shift_or(&mut ta, &self.lbits, c);
        }
        let mut r = vec![0u64; n];
        for &c in b {
            self.shift_or(&mut r, &ta, c);
        }
        self.weighted_count(&r)
    }
}

/// Whether the cells contain a translate of `u` (given in grid coordinates).
pub(crate) fn contains_translate(grid: &Grid, u: &[(Vec<u64>, Vec<i64>)], cells: &[usize]) -> bool {
    let (t0, f0) = &u[0];
    let mut sorted = cells.to_vec();
    sorted.sort_unstable();
    'outer: for &c in cells {
        let (tc, fc) = grid.coords(c);
        for (tu, fu) in u {
            let t: Vec<u64> = tu
                .iter()
                .zip(t0)
                .zip(&tc)
                .zip(&grid.moduli)
                .map(|(((x, x0), y), m)| (x + m - x0 + y) % m)
                .collect();
            let f: Vec<i64> = fu.iter().zip(f0).zip(&fc).map(|((x, x0), y)| x - x0 + y).collect();
            match grid.cell_of(&t, &f) {
                Some(cell) if sorted.binary_search(&cell).is_ok() => {}
                _ => continue 'outer,
            }
        }
        return true;
    }
    false
}

/// Best pair so far: weighted numerator, sizes and node indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Best {
    pub n: u64,
    pub a: u32,
    pub b: u32,
    pub ia: u32,
    pub ib: u32,
}

/// Compares the ratios `n / (a^(1/p) b^(1/q))` exactly.
pub(crate) fn cmp_ratio(p: &Exponent, x: (u64, u32, u32), y: (u64, u32, u32)) -> Ordering {
    let (num, ap, bp) = (p.num(), p.a_power(), p.b_power());
    cmp_power_products(
        &[(x.0 as u128, num), (y.1 as u128, ap), (y.2 as u128, bp)],
        &[(y.0 as u128, num), (x.1 as u128, ap), (x.2 as u128, bp)],
    )
}

impl Best {
    fn key(&self) -> (u64, u32, u32) {
        (self.n, self.a, self.b)
    }

    /// Strictly better: smaller ratio, or equal ratio at a lexicographically smaller pair.
    pub fn better_than(&self, other: &Best, p: &Exponent) -> bool {
        match cmp_ratio(p, self.key(), other.key()) {
            Ordering::Less => true,
            Ordering::Equal => (self.ia, self.ib) < (other.ia, other.ib),
            Ordering::Greater => false,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Params {
    pub p: Exponent,
    pub variant: Variant,
    pub card: usize,
    /// Only pairs with `index(B) >= index(A)` (valid when the ratio is symmetric).
    pub symmetric: bool,
    /// Both sets must contain a translate of this set (grid coordinates).
    pub contain: Option<Vec<(Vec<u64>, Vec<i64>)>>,
    pub threads: usize,
    pub budget_ms: Option<u64>,
    pub node_ceiling: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub best: Option<Best>,
    pub nodes: u64,
    pub complete: bool,
    pub history: Vec<(u64, Best)>,
}

struct ShardResult {
    nodes: u64,
    improvements: Vec<Best>,
}

pub(crate) struct Exhaustive<'a> {
    pub space: &'a SumSpace,
    pub nodes: &'a NodeList,
    pub params: &'a Params,
}

/// `T[a][b]`: the least numerator whose ratio at sizes `(a, b)` is at least the best ratio.
struct Thresholds {
    card: usize,
    t: Vec<u64>,
}

impl Thresholds {
    fn new(best: Option<&Best>, card: usize, p: &Exponent, nmax: u64) -> Self {
        let w = card + 1;
        let mut t = vec![nmax + 1; w * w];
        if let Some(best) = best {
            for a in 1..=card {
                for b in 1..=card {
                    // Least n with ratio(n, a, b) >= best.
                    let (mut lo, mut hi) = (0u64, nmax + 1);
                    while lo < hi {
                        let mid = lo + (hi - lo) / 2;
                        if cmp_ratio(p, (mid, a as u32, b as u32), best.key()) != Ordering::Less {
                            hi = mid;
                        } else {
                            lo = mid + 1;
                        }
                    }
                    t[a * w + b] = lo;
                }
            }
        }
        Thresholds { card, t }
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> u64 {
        self.t[a * (self.card + 1) + b]
    }
}

impl<'a> Exhaustive<'a> {
    fn contains_translate(&self, cells: &[usize]) -> bool {
        match &self.params.contain {
            None => true,
            Some(u) => contains_translate(&self.space.grid, u, cells),
        }
    }

    /// Numerator of a single pair given by node indices.
    pub fn pair_numerator(&self, ia: usize, ib: usize) -> u64 {
        self.space.numerator(&self.nodes.cells(ia), &self.nodes.cells(ib))
    }

    fn feasible_pair(&self, ia: usize, ib: usize) -> bool {
        let (da, db) = (self.nodes.depth[ia], self.nodes.depth[ib]);
        let ok_variant = match self.params.variant {
            Variant::Unrestricted => true,
            Variant::Isometric => da == db,
            Variant::Isomeric => ia == ib,
        };
        ok_variant
            && self.nodes.anchored[ia]
            && self.nodes.anchored[ib]
            && self.contains_translate(&self.nodes.cells(ia))
            && self.contains_translate(&self.nodes.cells(ib))
    }

    pub fn run(&self) -> Result<Outcome> {
        let p = &self.params.p;
        let mut nodes = 0u64;
        let mut best: Option<Best> = None;
        let mut history = Vec::new();
        // The first pair is the lexicographically least one; seeding with it
        // lets every shard prune from the start.
        if self.nodes.len() > 0 && self.feasible_pair(0, 0) {
            let b = Best {
                n: self.pair_numerator(0, 0),
                a: 1,
                b: 1,
                ia: 0,
                ib: 0,
            };
            nodes += 1;
            history.push((nodes, b));
            best = Some(b);
        }
        let n = self.nodes.len();
        let shards: Vec<(usize, usize)> = (0..n)
            .step_by(SHARD_SIZE)
            .map(|s| (s, (s + SHARD_SIZE).min(n)))
            .collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.params.threads)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        let start = Instant::now();
        let mut complete = true;
        for batch in shards.chunks(BATCH_SHARDS) {
            if nodes > self.params.node_ceiling {
                complete = false;
                break;
            }
            if let Some(ms) = self.params.budget_ms {
                if start.elapsed().as_millis() as u64 > ms {
                    complete = false;
                    break;
                }
            }
            let seed = best;
            let results: Vec<ShardResult> = pool.install(|| {
                batch
                    .par_iter()
                    .map(|&(s, e)| self.run_shard(s, e, seed))
                    .collect()
            });
            for r in results {
                for imp in r.improvements {
                    if best.map_or(true, |b| imp.better_than(&b, p)) {
                        best = Some(imp);
                        history.push((nodes, imp));
                    }
                }
                nodes += r.nodes;
            }
        }
        Ok(Outcome {
            best,
            nodes,
            complete,
            history,
        })
    }

    fn run_shard(&self, start: usize, end: usize, seed: Option<Best>) -> ShardResult {
        let sp = self.space;
        let nl = self.nodes;
        let card = self.params.card;
        let p = &self.params.p;
        let growth = sp.growth;
        let st = sp.state_len();
        let mut best = seed;
        let mut thr = Thresholds::new(best.as_ref(), card, p, sp.max_numerator);
        let mut improvements = Vec::new();
        let mut count = 0u64;

        let mut ta = vec![0u64; (card + 1) * st];
        let mut tb = vec![0u64; (card + 1) * st];
        let mut cells_a = vec![0usize; card + 1];
        let isometric = self.params.variant == Variant::Isometric;
        let isomeric = self.params.variant == Variant::Isomeric;

        for anc in nl.ancestors(start) {
            let d = nl.depth[anc] as usize;
            let (prev, cur) = ta.split_at_mut(d * st);
            cur[..st].copy_from_slice(&prev[(d - 1) * st..d * st]);
            sp.shift_or(&mut cur[..st], &sp.lbits, nl.last[anc] as usize);
            cells_a[d] = nl.last[anc] as usize;
        }

        let mut i = start;
        while i < end {
            let da = nl.depth[i] as usize;
            {
                let (prev, cur) = ta.split_at_mut(da * st);
                cur[..st].copy_from_slice(&prev[(da - 1) * st..da * st]);
                sp.shift_or(&mut cur[..st], &sp.lbits, nl.last[i] as usize);
            }
            cells_a[da] = nl.last[i] as usize;
            count += 1;
            let ta_cur = &ta[da * st..(da + 1) * st];
            let na = sp.weighted_count(ta_cur);

            if isomeric {
                let mut r = vec![0u64; st];
                for &c in &cells_a[1..=da] {
                    sp.shift_or(&mut r, ta_cur, c);
                }
                let naa = sp.weighted_count(&r);
                // A' ⊇ A with k more elements has |A'+A'+L| >= |A+A+L| + k*growth.
                let prunable = (da..=card).all(|a2| naa + (a2 - da) as u64 * growth >= thr.get(a2, a2));
                if prunable {
                    i = nl.skip[i] as usize;
                    continue;
                }
                if nl.anchored[i] && naa < thr.get(da, da) && self.contains_translate(&cells_a[1..=da]) {
                    let b = Best {
                        n: naa,
                        a: da as u32,
                        b: da as u32,
                        ia: i as u32,
                        ib: i as u32,
                    };
                    best = Some(b);
                    improvements.push(b);
                    thr = Thresholds::new(best.as_ref(), card, p, sp.max_numerator);
                }
                i += 1;
                continue;
            }

            // Any pair below this A-node has numerator >= na + (a'-da + b-1) * growth.
            let prunable = (da..=card).all(|a2| {
                let base = na + (a2 - da) as u64 * growth;
                if isometric {
                    base + (a2 as u64 - 1) * growth >= thr.get(a2, a2)
                } else {
                    (1..=card).all(|b| base + (b as u64 - 1) * growth >= thr.get(a2, b))
                }
            });
            if prunable {
                i = nl.skip[i] as usize;
                continue;
            }
            if nl.anchored[i] && self.contains_translate(&cells_a[1..=da]) {
                count += self.scan_b(i, da, ta_cur, &mut tb, &mut best, &mut thr, &mut improvements);
            }
            i += 1;
        }
        ShardResult {
            nodes: count,
            improvements,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn scan_b(
        &self,
        ia: usize,
        a: usize,
        ta: &[u64],
        tb: &mut [u64],
        best: &mut Option<Best>,
        thr: &mut Thresholds,
        improvements: &mut Vec<Best>,
    ) -> u64 {
        let sp = self.space;
        let nl = self.nodes;
        let card = self.params.card;
        let p = &self.params.p;
        let growth = sp.growth;
        let st = sp.state_len();
        let isometric = self.params.variant == Variant::Isometric;
        let bmax = if isometric { a } else { card };
        let start = if self.params.symmetric { ia } else { 0 };
        let mut count = 0u64;

        tb[..st].iter_mut().for_each(|x| *x = 0);
        for anc in nl.ancestors(start) {
            let d = nl.depth[anc] as usize;
            let (prev, cur) = tb.split_at_mut(d * st);
            cur[..st].copy_from_slice(&prev[(d - 1) * st..d * st]);
            sp.shift_or(&mut cur[..st], ta, nl.last[anc] as usize);
            count += 1;
        }
        let n = nl.len();
        let mut j = start;
        while j < n {
            let db = nl.depth[j] as usize;
            {
                let (prev, cur) = tb.split_at_mut(db * st);
                cur[..st].copy_from_slice(&prev[(db - 1) * st..db * st]);
                sp.shift_or(&mut cur[..st], ta, nl.last[j] as usize);
            }
            count += 1;
            let nb = sp.weighted_count(&tb[db * st..(db + 1) * st]);
            // Each further element of B adds at least `growth` to the numerator.
            let prunable = (db..=bmax).all(|b| nb + (b - db) as u64 * growth >= thr.get(a, b));
            if prunable {
                j = nl.skip[j] as usize;
                continue;
            }
            let size_ok = !isometric || db == a;
            if size_ok && nl.anchored[j] && nb < thr.get(a, db) && self.contains_translate(&nl.cells(j)) {
                let b = Best {
                    n: nb,
                    a: a as u32,
                    b: db as u32,
                    ia: ia as u32,
                    ib: j as u32,
                };
                *best = Some(b);
                improvements.push(b);
                *thr = Thresholds::new(best.as_ref(), card, p, sp.max_numerator);
            }
            j = if isometric && db == a { nl.skip[j] as usize } else { j + 1 };
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_order_is_canonical_order() {
        let g = Grid::new(vec![3, 2], vec![2]).unwrap();
        let ctx = GroupContext::new(2, vec![2]).unwrap();
        let pts: Vec<GroupVector> = (0..g.len())
            .map(|c| {
                let (t, f) = g.coords(c);
                assert_eq!(g.cell_of(&t, &f), Some(c));
                GroupVector::from_parts(f, t)
            })
            .collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.to_point_set(&ctx, &(0..g.len()).collect::<Vec<_>>()).len(), 12);
    }

    #[test]
    fn node_list_is_preorder() {
        let g = Grid::new(vec![4], vec![]).unwrap();
        let nl = NodeList::build(&g, 2).unwrap();
        // Sequences starting at cell 0: {0}, {0,1}, {0,2}, {0,3}.
        assert_eq!(nl.len() as u128, NodeList::count(&g, 2));
        assert_eq!(nl.len(), 4);
        assert_eq!(nl.cells(1), vec![0, 1]);
        assert_eq!(nl.skip[0], 4);
        assert!(nl.anchored.iter().all(|&a| a));
        let g2 = Grid::new(vec![2, 2], vec![]).unwrap();
        let nl2 = NodeList::build(&g2, 4).unwrap();
        // First cell must have x = 0; anchored iff some cell has y = 0.
        for i in 0..nl2.len() {
            let cells = nl2.cells(i);
            let anchored = cells.iter().any(|&c| g2.coords(c).1[1] == 0);
            assert_eq!(nl2.anchored[i], anchored);
        }
    }

    #[test]
    fn bitset_numerator_matches_sumset() {
        let ctx = GroupContext::new(1, vec![3]).unwrap();
        let u = PointSet::new(
            ctx.clone(),
            [ctx.vector(vec![5], vec![1]).unwrap(), ctx.vector(vec![7], vec![2]).unwrap()],
        )
        .unwrap();
        let grid = Grid::new(vec![4], vec![3]).unwrap();
        let sp = SumSpace::new(grid.clone(), &[(1, u.clone())]).unwrap();
        let a = [1usize, 5, 9];
        let b = [0usize, 2, 11];
        let sa = grid.to_point_set(&ctx, &a);
        let sb = grid.to_point_set(&ctx, &b);
        let direct = crate::group::sumset_many(&[&sa, &sb, &u]).unwrap();
        assert_eq!(sp.numerator(&a, &b), direct.len() as u64);
    }

    #[test]
    fn ratio_comparison() {
        let two = Exponent::TWO;
        // 4/sqrt(1*1) vs 6/sqrt(2*2): 4 > 3.
        assert_eq!(cmp_ratio(&two, (4, 1, 1), (6, 2, 2)), Ordering::Greater);
        assert_eq!(cmp_ratio(&two, (4, 1, 1), (8, 2, 2)), Ordering::Equal);
    }
}
