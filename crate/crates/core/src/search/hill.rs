//! Randomized local search over pairs of cell sets.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::Exponent;
use crate::search::config::Variant;
use crate::search::engine::{cmp_ratio, contains_translate, SumSpace};

pub(crate) struct HillParams<'a> {
    pub p: Exponent,
    pub variant: Variant,
    pub card: usize,
    pub contain: Option<&'a [(Vec<u64>, Vec<i64>)]>,
    /// Cells of the set to contain, placed in the grid (start point for every restart).
    pub contain_cells: Option<Vec<usize>>,
    pub seed: u64,
    pub restarts: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct HillOutcome {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub n: u64,
    pub evaluations: u64,
    /// `(evaluations, numerator, |A|, |B|)` at each improvement.
    pub history: Vec<(u64, u64, u32, u32)>,
}

struct State {
    a: Vec<usize>,
    b: Vec<usize>,
    n: u64,
}

fn toggle(set: &[usize], c: usize) -> Vec<usize> {
    match set.binary_search(&c) {
        Ok(i) => {
            let mut s = set.to_vec();
            s.remove(i);
            s
        }
        Err(i) => {
            let mut s = set.to_vec();
            s.insert(i, c);
            s
        }
    }
}

fn key(s: &State) -> (u64, u32, u32) {
    (s.n, s.a.len() as u32, s.b.len() as u32)
}

pub(crate) fn hill_climb(space: &SumSpace, params: &HillParams) -> HillOutcome {
    let cells = space.grid.len();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut evaluations = 0u64;
    let mut best: Option<State> = None;
    let mut history = Vec::new();
    let isomeric = params.variant == Variant::Isomeric;
    let isometric = params.variant == Variant::Isometric;
    let card = params.card;
    let valid = |a: &[usize]| -> bool {
        !a.is_empty() && a.len() <= card && params.contain.map_or(true, |u| contains_translate(&space.grid, u, a))
    };

    for restart in 0..params.restarts.max(1) {
        let base: Vec<usize> = params.contain_cells.clone().unwrap_or_default();
        let (a, b) = if restart == 0 {
            let s = if base.is_empty() { vec![0] } else { base.clone() };
            (s.clone(), s)
        } else {
            let pick = |k: usize, rng: &mut ChaCha8Rng| {
                let mut s = base.clone();
                let mut pool: Vec<usize> = (0..cells).filter(|c| !s.contains(c)).collect();
                pool.shuffle(rng);
                s.extend(pool.into_iter().take(k.saturating_sub(s.len())));
                s.sort_unstable();
                s
            };
            let ka = rng.gen_range(1..=card);
            let a = pick(ka, &mut rng);
            let b = if isomeric {
                a.clone()
            } else if isometric {
                pick(a.len(), &mut rng)
            } else {
                let kb = rng.gen_range(1..=card);
                pick(kb, &mut rng)
            };
            (a, b)
        };
        if !valid(&a) || !valid(&b) || (isometric && a.len() != b.len()) {
            continue;
        }
        let n = space.numerator(&a, &b);
        evaluations += 1;
        let mut cur = State { a, b, n };

        loop {
            let mut cands: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
            if isomeric {
                for c in 0..cells {
                    let a = toggle(&cur.a, c);
                    cands.push((a.clone(), a));
                }
            } else if isometric {
                for x in &cur.a {
                    for y in (0..cells).filter(|y| cur.a.binary_search(y).is_err()) {
                        cands.push((toggle(&toggle(&cur.a, *x), y), cur.b.clone()));
                    }
                }
                for x in &cur.b {
                    for y in (0..cells).filter(|y| cur.b.binary_search(y).is_err()) {
                        cands.push((cur.a.clone(), toggle(&toggle(&cur.b, *x), y)));
                    }
                }
                for x in 0..cells {
                    for y in 0..cells {
                        let (ia, ib) = (cur.a.binary_search(&x).is_ok(), cur.b.binary_search(&y).is_ok());
                        if ia == ib {
                            cands.push((toggle(&cur.a, x), toggle(&cur.b, y)));
                        }
                    }
                }
            } else {
                for c in 0..cells {
                    cands.push((toggle(&cur.a, c), cur.b.clone()));
                }
                for c in 0..cells {
                    cands.push((cur.a.clone(), toggle(&cur.b, c)));
                }
            }
            let mut next: Option<State> = None;
            for (a, b) in cands {
                if !valid(&a) || !valid(&b) {
                    continue;
                }
                let n = space.numerator(&a, &b);
                evaluations += 1;
                let s = State { a, b, n };
                let target = next.as_ref().unwrap_or(&cur);
                if cmp_ratio(&params.p, key(&s), key(target)) == Ordering::Less {
                    next = Some(s);
                }
            }
            match next {
                Some(s) => cur = s,
                None => break,
            }
        }
        let improves = best
            .as_ref()
            .map_or(true, |b| cmp_ratio(&params.p, key(&cur), key(b)) == Ordering::Less);
        if improves {
            history.push((evaluations, cur.n, cur.a.len() as u32, cur.b.len() as u32));
            best = Some(cur);
        }
    }
    let best = best.expect("the first restart always starts from a valid pair");
    HillOutcome {
        a: best.a,
        b: best.b,
        n: best.n,
        evaluations,
        history,
    }
}
