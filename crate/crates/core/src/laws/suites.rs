//! Named collections of law instances, generated from a seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{petridis_smaller_subset, Instance, TwoPointGrid, Verdict, PETRIDIS_MAX};
use crate::error::{Error, Result};
use crate::exact::{Exponent, Rational};
use crate::functional::ExactFunction;
use crate::group::{GroupContext, Homomorphism, PointSet};
use crate::quasicube::{make_quasicube, random_spec};
use crate::search::SearchConfig;

pub const SUITES: &[&str] = &[
    "quasicube",
    "prekopa",
    "bm",
    "petridis",
    "plunnecke",
    "compression",
    "beta_gamma",
    "tensorization",
    "trivial",
    "independence",
    "chains",
    "two_point",
    "freiman",
    "rearrangement",
    "all",
];

fn window(lo: i64, hi: i64, card: usize) -> SearchConfig {
    // Suites parallelize across instances, so each search runs single-threaded.
    SearchConfig::default().with_box(&[(lo, hi)]).with_card(card).with_threads(1)
}

fn trapezoid() -> PointSet {
    PointSet::from_coords(2, &[&[0, 0], &[1, 0], &[0, 1], &[3, 1]]).unwrap()
}

fn unit_square() -> PointSet {
    PointSet::from_coords(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]).unwrap()
}

/// Nonempty random subset of the integer box `[lo, hi]^rank`, each point
/// kept with probability `density`.
fn random_set(rng: &mut ChaCha8Rng, rank: usize, lo: i64, hi: i64, density: f64) -> PointSet {
    let ctx = GroupContext::free(rank);
    let side = (hi - lo + 1) as usize;
    let total = side.pow(rank as u32);
    let point = |mut i: usize| {
        let mut c = vec![0; rank];
        for x in c.iter_mut().rev() {
            *x = lo + (i % side) as i64;
            i /= side;
        }
        ctx.point(&c).unwrap()
    };
    let mut pts: Vec<_> = (0..total).filter(|_| rng.gen_bool(density)).map(point).collect();
    if pts.is_empty() {
        pts.push(point(rng.gen_range(0..total)));
    }
    PointSet::new(ctx, pts).unwrap()
}

/// Random set of exactly `size` points from the box.
fn random_sized_set(rng: &mut ChaCha8Rng, rank: usize, lo: i64, hi: i64, size: usize) -> PointSet {
    let all = random_set_full(rank, lo, hi);
    let picked: Vec<_> = all.points().choose_multiple(rng, size).cloned().collect();
    PointSet::new(all.context().clone(), picked).unwrap()
}

fn random_set_full(rank: usize, lo: i64, hi: i64) -> PointSet {
    let ctx = GroupContext::free(rank);
    let mut pts = vec![Vec::new()];
    for _ in 0..rank {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    PointSet::new(ctx.clone(), pts.iter().map(|p| ctx.point(p).unwrap())).unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1..=6).into(), rng.gen_range(1..=4).into())
}

/// Function on a random interval of length at most `max_len`, integer
/// weights in `[1, 16]`.
pub fn random_interval_function(rng: &mut ChaCha8Rng, max_len: usize) -> ExactFunction {
    let n = rng.gen_range(1..=max_len) as i64;
    let start = rng.gen_range(-2..=2);
    let ctx = GroupContext::free(1);
    let entries: Vec<_> = (start..start + n)
        .map(|x| (ctx.point(&[x]).unwrap(), Rational::from_integer(rng.gen_range(1..=16).into())))
        .collect();
    ExactFunction::new(ctx, entries).unwrap()
}

/// Random quasicube of dimension 1 or 2 and a random nonempty subset of it.
fn random_cube_pair(rng: &mut ChaCha8Rng) -> (PointSet, PointSet) {
    let depth = rng.gen_range(1..=2);
    let spec = random_spec(depth, 1, rng).unwrap();
    let cube = make_quasicube(&spec).unwrap();
    let mask = rng.gen_range(1u64..1 << cube.len());
    (cube.subset_by_mask(mask), cube)
}

/// Search window that fits `v` after anchoring.
fn fitted_window(v: &PointSet, slack: i64, card: usize) -> SearchConfig {
    let rank = v.context().free_rank();
    let bounds: Vec<(i64, i64)> = (0..rank)
        .map(|i| {
            let (lo, hi) = v
                .iter()
                .map(|p| p.free_coords()[i])
                .fold((i64::MAX, i64::MIN), |(a, b), x| (a.min(x), b.max(x)));
            (0, hi - lo + slack)
        })
        .collect();
    SearchConfig::default()
        .with_box(&bounds)
        .with_card(card.max(v.len()))
        .with_threads(1)
}

fn instances(name: &str, rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    match name {
        "quasicube" => {
            out.push(Instance::QuasicubeBeta {
                v: unit_square(),
                cube: unit_square(),
                cfg: window(-1, 2, 4),
            });
            out.push(Instance::QuasicubeBeta {
                v: trapezoid(),
                cube: trapezoid(),
                cfg: fitted_window(&trapezoid(), 0, 4),
            });
            for _ in 0..count {
                let (v, cube) = random_cube_pair(rng);
                let cfg = fitted_window(&v, 1, 3);
                out.push(Instance::QuasicubeBeta { v, cube, cfg });
            }
        }
        "prekopa" => {
            let edge = PointSet::from_ints(&[0, 1]);
            let three = Exponent::new(3, 1)?;
            let three_halves = Exponent::new(3, 2)?;
            out.push(Instance::Prekopa { v: edge.clone(), cube: edge, p: three, cfg: window(-2, 3, 4) });
            out.push(Instance::Prekopa {
                v: unit_square(),
                cube: unit_square(),
                p: three_halves,
                cfg: window(0, 2, 3),
            });
            for i in 0..count {
                let (v, cube) = random_cube_pair(rng);
                let p = [three, three_halves, Exponent::TWO][i % 3];
                let cfg = fitted_window(&v, 1, 3);
                out.push(Instance::Prekopa { v, cube, p, cfg });
            }
        }
        "bm" => {
            let nine = random_set_full(2, 0, 2);
            out.push(Instance::BmCorollary { u: unit_square(), d: 2, a: nine.clone(), b: nine });
            for _ in 0..count {
                let a = random_set(rng, 2, 0, 5, 0.3);
                let b = random_set(rng, 2, 0, 5, 0.3);
                out.push(Instance::BmCorollary { u: trapezoid(), d: 2, a, b });
            }
            for _ in 0..count / 2 {
                let (u, _) = random_cube_pair(rng);
                if u.len() == 1 << u.context().free_rank() {
                    let d = u.context().free_rank();
                    let a = random_set(rng, d, 0, 4, 0.4);
                    let b = random_set(rng, d, 0, 4, 0.4);
                    out.push(Instance::BmCorollary { u, d, a, b });
                }
            }
        }
        "petridis" => {
            let x = PointSet::from_ints(&[0]);
            let y = PointSet::from_ints(&[0, 1]);
            out.push(Instance::Petridis { x: x.clone(), y: y.clone(), z: y });
            out.push(Instance::Petridis { x: x.clone(), y: x.clone(), z: x });
            let mut tries = 0;
            let target = out.len() + count;
            while out.len() < target && tries < 200 * count.max(1) {
                tries += 1;
                let size = rng.gen_range(1..=PETRIDIS_MAX.min(5));
                let x = random_sized_set(rng, 1, 0, 4, size);
                let y = random_set(rng, 1, 0, 4, 0.4);
                let z = random_set(rng, 1, 0, 4, 0.4);
                if petridis_smaller_subset(&x, &y)?.is_none() {
                    out.push(Instance::Petridis { x, y, z });
                }
            }
        }
        "plunnecke" => {
            out.push(Instance::Plunnecke {
                x: PointSet::from_ints(&[0, 1, 2, 3, 4]),
                y: PointSet::from_ints(&[0, 1]),
                k: 2,
            });
            out.push(Instance::Plunnecke {
                x: PointSet::from_ints(&[0, 2, 5]),
                y: PointSet::from_ints(&[0]),
                k: 3,
            });
            for _ in 0..count {
                let size = rng.gen_range(1..=7);
                let x = random_sized_set(rng, 1, 0, 6, size);
                let y = random_set(rng, 1, 0, 6, 0.3);
                out.push(Instance::Plunnecke { x, y, k: rng.gen_range(1..=3) });
            }
        }
        "compression" => {
            let ctx = GroupContext::free(2);
            let a = PointSet::from_coords(2, &[&[0, 0], &[0, 1]])?;
            let b = PointSet::from_coords(2, &[&[0, 0], &[1, 2]])?;
            out.push(Instance::Compression { a, b, h: Homomorphism::drop_free_coordinate(&ctx, 1)? });
            for _ in 0..count {
                let a = random_set(rng, 2, 0, 4, 0.3);
                let b = random_set(rng, 2, 0, 4, 0.3);
                let h = Homomorphism::drop_free_coordinate(&ctx, rng.gen_range(0..2))?;
                out.push(Instance::Compression { a, b, h });
            }
        }
        "beta_gamma" => {
            out.push(Instance::BetaIsGamma { u: PointSet::from_ints(&[0, 1]), p: Exponent::TWO, cfg: window(-2, 3, 4) });
            out.push(Instance::BetaIsGamma { u: PointSet::from_ints(&[0]), p: Exponent::TWO, cfg: window(-2, 3, 4) });
            out.push(Instance::BetaIsGamma { u: PointSet::from_ints(&[0, 1, 2]), p: Exponent::TWO, cfg: window(0, 4, 5) });
            for i in 0..count {
                let u = random_set(rng, 1, 0, 3, 0.5);
                let p = [Exponent::TWO, Exponent::new(3, 1)?][i % 2];
                out.push(Instance::BetaIsGamma { u, p, cfg: window(0, 4, 4) });
            }
        }
        "tensorization" => {
            let cfg = window(0, 2, 3);
            out.push(Instance::Tensorization { f: ExactFunction::indicator(&unit_square()), base_rank: 1, cfg: cfg.clone() });
            let strip = PointSet::from_coords(2, &[&[0, 0], &[0, 1], &[0, 2]])?;
            out.push(Instance::Tensorization { f: ExactFunction::indicator(&strip), base_rank: 1, cfg: cfg.clone() });
            let rect = PointSet::from_coords(2, &[&[0, 0], &[0, 1], &[0, 2], &[1, 0], &[1, 1], &[1, 2]])?;
            out.push(Instance::Tensorization { f: ExactFunction::indicator(&rect), base_rank: 1, cfg: cfg.clone() });
            let ctx = GroupContext::free(2);
            for _ in 0..count {
                // Two fibers over x = 0 and x = 1 with rational weights.
                let mut entries = Vec::new();
                for x in 0..2 {
                    let n = rng.gen_range(1..=2);
                    let mut ys = [0i64, 1, 2];
                    ys.shuffle(rng);
                    for &y in &ys[..n] {
                        entries.push((ctx.point(&[x, y])?, random_rational(rng)));
                    }
                }
                let f = ExactFunction::new(ctx.clone(), entries)?;
                out.push(Instance::Tensorization { f, base_rank: 1, cfg: cfg.clone() });
            }
        }
        "trivial" => {
            out.push(Instance::TrivialLowerBounds { u: PointSet::from_ints(&[0, 1]), cfg: window(-2, 3, 4) });
            out.push(Instance::TrivialLowerBounds { u: PointSet::from_ints(&[0, 3]), cfg: window(0, 5, 4) });
            let z2 = GroupContext::new(1, vec![2])?;
            let coset = PointSet::new(z2.clone(), [z2.vector(vec![0], vec![0])?, z2.vector(vec![0], vec![1])?])?;
            out.push(Instance::TrivialLowerBounds { u: coset, cfg: window(0, 1, 2) });
            for _ in 0..count {
                let u = random_set(rng, 1, 0, 4, 0.4);
                out.push(Instance::TrivialLowerBounds { cfg: window(0, 5, u.len().max(3)), u });
            }
        }
        "independence" => {
            out.push(Instance::Independence { u: PointSet::from_ints(&[0, 1]), m: 2, cfg: window(-1, 2, 3) });
            out.push(Instance::Independence { u: PointSet::from_ints(&[0, 1]), m: 1, cfg: window(-1, 2, 3) });
            out.push(Instance::Independence { u: PointSet::from_ints(&[0, 1, 3]), m: 3, cfg: window(0, 3, 3) });
            for _ in 0..count {
                let u = random_set(rng, 1, 0, 3, 0.5);
                out.push(Instance::Independence { cfg: window(0, 3, u.len().max(3)), u, m: rng.gen_range(2..=3) });
            }
        }
        "chains" => {
            out.push(Instance::BasicChains { u: PointSet::from_ints(&[0, 1]), cfg: window(-2, 3, 4) });
            out.push(Instance::BasicChains { u: PointSet::from_ints(&[0]), cfg: window(-2, 3, 4) });
            out.push(Instance::BasicChains { u: unit_square(), cfg: window(0, 2, 4) });
            for _ in 0..count {
                let u = random_set(rng, 1, 0, 3, 0.5);
                out.push(Instance::BasicChains { cfg: window(0, 4, u.len().max(3)), u });
            }
        }
        "two_point" => {
            out.push(Instance::TwoPoint(TwoPointGrid {
                seed: rng.gen(),
                ..TwoPointGrid::default()
            }));
        }
        "freiman" => {
            out.push(Instance::Freiman { a: PointSet::from_coords(2, &[&[0, 0], &[1, 0], &[0, 1]])? });
            out.push(Instance::Freiman { a: PointSet::from_ints(&[7]) });
            for _ in 0..count {
                out.push(Instance::Freiman { a: random_set(rng, 2, 0, 4, 0.3) });
            }
        }
        "rearrangement" => {
            for _ in 0..count {
                let f = random_interval_function(rng, 4);
                let g = random_interval_function(rng, 4);
                let h = random_interval_function(rng, 4);
                out.push(Instance::Rearrangement { f, g, h });
            }
        }
        _ => return Err(Error::invalid(format!("unknown suite {name:?}; known: {}", SUITES.join(", ")))),
    }
    Ok(out)
}

/// Default number of random instances per suite.
pub const DEFAULT_SUITE_COUNT: usize = 12;

/// Runs a suite. The instances depend only on `(name, seed, count)`, and
/// verdicts come back in instance order whatever the thread count.
pub fn run_suite(name: &str, seed: u64, count: usize) -> Result<Vec<Verdict>> {
    let names: Vec<&str> = if name == "all" {
        SUITES.iter().copied().filter(|s| *s != "all").collect()
    } else {
        vec![name]
    };
    let mut all = Vec::new();
    for n in names {
        // One stream per suite, so a suite draws the same instances alone or within "all".
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(SUITES.iter().position(|s| *s == n).unwrap_or(0) as u64 + 1);
        all.extend(instances(n, &mut rng, count)?);
    }
    all.par_iter().map(Instance::check).collect()
}
