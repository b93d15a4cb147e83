//! Lexicographic k-subsets of `{0, ..., n-1}` with ranking.

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays exact because acc = C(n, i) * ... at each step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Advances `c` to the next k-combination of `{0..n}` in lexicographic order.
/// Returns false (leaving `c` untouched) when `c` was the last one.
pub fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

/// The `rank`-th k-combination of `{0..n}` in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Option<Vec<usize>> {
    if rank >= binomial(n as u64, k as u64) {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    let mut x = 0;
    while out.len() < k {
        let remaining = (k - out.len() - 1) as u64;
        let with_x = binomial((n - x - 1) as u64, remaining);
        if rank < with_x {
            out.push(x);
        } else {
            rank -= with_x;
        }
        x += 1;
    }
    Some(out)
}

/// Iterator over all k-combinations of `{0..n}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        cur = next_combination(&mut next, n).then_some(next);
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn enumeration_matches_unranking() {
        let all: Vec<_> = combinations(6, 3).collect();
        assert_eq!(all.len(), 20);
        for (r, c) in all.iter().enumerate() {
            assert_eq!(unrank_combination(6, 3, r as u128).as_ref(), Some(c));
        }
        assert_eq!(unrank_combination(6, 3, 20), None);
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3).count(), 0);
    }
}
