//! Exact rank computations for integer lattices.
//!
//! Ranks are computed by fraction-free row reduction over the integers
//! (every pivot step is an integer row combination followed by content
//! removal), so no floating point is ever involved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Rank of the lattice spanned by `rows` (equivalently, of the rational span).
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    echelon_rank(&mut m)
}

fn echelon_rank(m: &mut [Vec<BigInt>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let g = m[r][c].gcd(&m[i][c]);
            let fr = &m[i][c] / &g;
            let fi = &m[r][c] / &g;
            let (top, rest) = m.split_at_mut(i);
            let row = &mut rest[0];
            for (x, p) in row.iter_mut().zip(&top[r]) {
                *x = &*x * &fi - p * &fr;
            }
            normalize(row);
        }
        r += 1;
    }
    r
}

fn normalize(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g > BigInt::from(1) {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
    if let Some(first) = row.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

/// Whether `v` lies in the rational span of `basis` (i.e. some nonzero
/// multiple of `v` lies in the lattice generated by `basis`).
pub fn in_rational_span(basis: &[Vec<i64>], v: &[i64]) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    let r = rank(basis);
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    rank(&with) == r
}
