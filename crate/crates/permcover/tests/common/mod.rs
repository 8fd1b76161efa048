//! Brute-force oracles, independent of the implementation paths they check.
#![allow(dead_code)] // each test binary uses its own slice of the oracles

use itertools::Itertools;
use permcover::{Downset, Permutation};

/// All permutations of length `n`, lexicographic.
pub fn all_perms(n: usize) -> Vec<Permutation> {
    (1..=n as u32)
        .permutations(n)
        .map(|v| Permutation::new(v).unwrap())
        .collect()
}

/// Exhaustive check over all `(r+s)^n` chain labelings, with labels
/// `0..r` increasing and `r..r+s` decreasing.
pub fn brute_coverable(pi: &Permutation, r: usize, s: usize) -> bool {
    let n = pi.len();
    if n == 0 {
        return true;
    }
    let k = r + s;
    if k == 0 {
        return false;
    }
    let values = pi.values();
    let mut label = vec![0usize; n];
    loop {
        if labeling_valid(values, &label, r, s) {
            return true;
        }
        let mut i = 0;
        loop {
            label[i] += 1;
            if label[i] < k {
                break;
            }
            label[i] = 0;
            i += 1;
            if i == n {
                return false;
            }
        }
    }
}

fn labeling_valid(values: &[u32], label: &[usize], r: usize, s: usize) -> bool {
    let mut inc = vec![0u32; r];
    let mut dec = vec![u32::MAX; s];
    for (i, &v) in values.iter().enumerate() {
        let chain = label[i];
        if chain < r {
            if inc[chain] >= v {
                return false;
            }
            inc[chain] = v;
        } else {
            if dec[chain - r] <= v {
                return false;
            }
            dec[chain - r] = v;
        }
    }
    true
}

/// Non-coverability set computed point by point from the brute-force
/// decision procedure.
pub fn brute_non_cover_downset(pi: &Permutation) -> Downset {
    if pi.is_empty() {
        return Downset::empty();
    }
    let mut columns = Vec::new();
    for r in 0..pi.lds() {
        let mut h = 0;
        for s in 0..pi.lis() {
            if !brute_coverable(pi, r, s) {
                h = s + 1;
            }
        }
        if h == 0 {
            break;
        }
        columns.push(h);
    }
    Downset::new(columns).unwrap()
}

pub fn brute_downset_coverable(pi: &Permutation, target: &Downset) -> bool {
    target
        .frontier()
        .iter()
        .any(|&(r, s)| brute_coverable(pi, r, s))
}

/// Criticality decided entirely through the labeling oracle.
pub fn brute_critical(pi: &Permutation, target: &Downset) -> bool {
    if brute_downset_coverable(pi, target) {
        return false;
    }
    (1..=pi.len()).all(|i| brute_downset_coverable(&pi.delete(i).unwrap(), target))
}

/// Membership test for the merge of two downsets straight from the
/// universally-quantified definition.
pub fn quantified_direct_sum_contains(a: &Downset, b: &Downset, r: usize, s: usize) -> bool {
    (0..=s).all(|s1| a.contains(r, s1) || b.contains(r, s - s1))
}

/// All downsets of size at most `max`, i.e. all partitions.
pub fn all_downsets(max: usize) -> Vec<Downset> {
    let mut out = vec![Downset::empty()];
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(cols) = stack.pop() {
        let used: usize = cols.iter().sum();
        let cap = cols.last().copied().unwrap_or(max);
        for h in 1..=cap.min(max - used) {
            let mut next = cols.clone();
            next.push(h);
            out.push(Downset::new(next.clone()).unwrap());
            stack.push(next);
        }
    }
    out
}

/// Every separable permutation of length 1..=`max_len`, built by closing
/// the singleton under direct and skew sums.
pub fn separable_closure(max_len: usize) -> Vec<Vec<Permutation>> {
    let mut by_len: Vec<Vec<Permutation>> = vec![Vec::new(); max_len + 1];
    if max_len >= 1 {
        by_len[1].push(Permutation::ascending(1));
    }
    for n in 2..=max_len {
        let mut found = std::collections::BTreeSet::new();
        for a in 1..n {
            let b = n - a;
            for pa in by_len[a].clone() {
                for pb in by_len[b].clone() {
                    found.insert(pa.direct_sum(&pb));
                    found.insert(pa.skew_sum(&pb));
                }
            }
        }
        by_len[n] = found.into_iter().collect();
    }
    by_len
}
