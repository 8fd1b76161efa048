//! Permutations in one-line notation, pattern containment, monotone
//! subsequence primitives, chain decompositions, and the three sums.
//!
//! Values are 1-based (`1..=n`) and positions are 1-based throughout the
//! public API, matching the usual one-line notation `π(1) π(2) … π(n)`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A permutation of `{1, …, n}` in one-line notation. `n = 0` is legal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from one-line values, validating that they form
    /// a bijection on `{1..n}`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for (i, &v) in values.iter().enumerate() {
            if v == 0 || v as usize > n {
                return Err(Error::InvalidPermutation(format!(
                    "position {}: value {} out of range 1..={}",
                    i + 1,
                    v,
                    n
                )));
            }
            if seen[v as usize - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "position {}: duplicate value {}",
                    i + 1,
                    v
                )));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { values })
    }

    /// Internal constructor for values already known to be a bijection.
    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn empty() -> Self {
        Permutation { values: Vec::new() }
    }

    /// The increasing permutation `1 2 … n`.
    pub fn ascending(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    /// The decreasing permutation `n … 2 1`.
    pub fn descending(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Value at the 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    /// The pattern (order-isomorphic permutation) of the values selected by
    /// `indices`.
    pub fn pattern_of(&self, indices: &IndexSubsequence) -> Result<Permutation> {
        let n = self.len();
        if let Some(&last) = indices.positions().last() {
            if last > n {
                return Err(Error::InvalidArgument(format!(
                    "index {} out of range for a permutation of length {}",
                    last, n
                )));
            }
        }
        let selected: Vec<u32> = indices.positions().iter().map(|&i| self.at(i)).collect();
        Ok(normalize(&selected))
    }

    /// Pattern of the first `m` positions.
    pub fn prefix_pattern(&self, m: usize) -> Permutation {
        normalize(&self.values[..m])
    }

    /// Searches for an occurrence of `tau` as a pattern and returns the
    /// witness positions of the first occurrence in lexicographic order.
    ///
    /// Backtracking over positions with value-window pruning; meant for
    /// small `tau` (the patterns that occur in verification work all have
    /// length ≤ 15).
    pub fn contains(&self, tau: &Permutation) -> Option<IndexSubsequence> {
        let m = tau.len();
        let n = self.len();
        if m > n {
            return None;
        }
        if m == 0 {
            return Some(IndexSubsequence::empty());
        }
        let mut chosen: Vec<usize> = Vec::with_capacity(m); // 0-based host positions
        if self.contains_rec(tau, &mut chosen, 0) {
            return Some(IndexSubsequence {
                positions: chosen.into_iter().map(|i| i + 1).collect(),
            });
        }
        None
    }

    fn contains_rec(&self, tau: &Permutation, chosen: &mut Vec<usize>, start: usize) -> bool {
        let m = tau.len();
        let j = chosen.len();
        if j == m {
            return true;
        }
        // Window of admissible host values for pattern position j: bounded by
        // the already-placed values whose pattern values sandwich tau(j+1).
        let tj = tau.values[j];
        let mut lo = 0u32;
        let mut hi = self.len() as u32 + 1;
        for (jj, &pos) in chosen.iter().enumerate() {
            let placed = self.values[pos];
            if tau.values[jj] < tj {
                lo = lo.max(placed);
            } else {
                hi = hi.min(placed);
            }
        }
        let remaining = m - j;
        for p in start..=self.len() - remaining {
            let v = self.values[p];
            if v > lo && v < hi {
                chosen.push(p);
                if self.contains_rec(tau, chosen, p + 1) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    /// Removes the 1-based position `i` and renormalizes values by rank, so
    /// the result is again a permutation (the proper pattern obtained by a
    /// one-point deletion).
    pub fn delete(&self, i: usize) -> Result<Permutation> {
        let n = self.len();
        if i == 0 || i > n {
            return Err(Error::InvalidArgument(format!(
                "deletion position {} out of range 1..={}",
                i, n
            )));
        }
        let removed = self.values[i - 1];
        let values = self
            .values
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i - 1)
            .map(|(_, &v)| if v > removed { v - 1 } else { v })
            .collect();
        Ok(Permutation { values })
    }

    /// Length of the longest increasing subsequence (patience sorting,
    /// `O(n log n)`).
    pub fn lis(&self) -> usize {
        lis_of(&self.values)
    }

    /// Length of the longest decreasing subsequence.
    pub fn lds(&self) -> usize {
        let n = self.len() as u32;
        let complemented: Vec<u32> = self.values.iter().map(|&v| n + 1 - v).collect();
        lis_of(&complemented)
    }

    /// Positions (1-based) of one longest increasing subsequence, recovered
    /// deterministically from the patience stacks.
    pub fn lis_witness(&self) -> IndexSubsequence {
        let n = self.len();
        if n == 0 {
            return IndexSubsequence::empty();
        }
        // tops[t] = index whose value currently ends a length-(t+1) increasing
        // subsequence; pred chains those choices together.
        let mut tops: Vec<usize> = Vec::new();
        let mut pred: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let v = self.values[i];
            let t = tops.partition_point(|&j| self.values[j] < v);
            if t > 0 {
                pred[i] = Some(tops[t - 1]);
            }
            if t == tops.len() {
                tops.push(i);
            } else {
                tops[t] = i;
            }
        }
        let mut out = Vec::with_capacity(tops.len());
        let mut cur = Some(*tops.last().unwrap());
        while let Some(i) = cur {
            out.push(i + 1);
            cur = pred[i];
        }
        out.reverse();
        IndexSubsequence { positions: out }
    }

    /// Greedy chain decomposition: with `Direction::Decreasing` the result
    /// covers `self` by exactly `lis` decreasing chains (class `t` holds the
    /// positions whose longest increasing subsequence ending there has
    /// length `t`); `Direction::Increasing` dually yields `lds` increasing
    /// chains.
    pub fn chain_cover(&self, direction: Direction) -> MonotoneCover {
        let n = self.len() as u32;
        match direction {
            Direction::Decreasing => {
                let classes = ending_classes(&self.values);
                let chains = classes.iter().copied().max().map_or(0, |c| c + 1);
                MonotoneCover {
                    r: 0,
                    s: chains,
                    assignment: classes.into_iter().map(ChainRef::Decreasing).collect(),
                }
            }
            Direction::Increasing => {
                let complemented: Vec<u32> = self.values.iter().map(|&v| n + 1 - v).collect();
                let classes = ending_classes(&complemented);
                let chains = classes.iter().copied().max().map_or(0, |c| c + 1);
                MonotoneCover {
                    r: chains,
                    s: 0,
                    assignment: classes.into_iter().map(ChainRef::Increasing).collect(),
                }
            }
        }
    }

    /// Direct sum: `self` followed by `other` shifted above it.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.len() as u32;
        let mut values = self.values.clone();
        values.extend(other.values.iter().map(|&v| v + n));
        Permutation { values }
    }

    /// Skew sum: `self` shifted above, followed by `other`.
    pub fn skew_sum(&self, other: &Permutation) -> Permutation {
        let m = other.len() as u32;
        let mut values: Vec<u32> = self.values.iter().map(|&v| v + m).collect();
        values.extend_from_slice(&other.values);
        Permutation { values }
    }

    /// Tensor product: every point of `self` inflated into a copy of
    /// `other`, copies ordered like `self`.
    pub fn tensor(&self, other: &Permutation) -> Permutation {
        let m = other.len() as u32;
        let total = self
            .len()
            .checked_mul(other.len())
            .filter(|&t| t <= u32::MAX as usize)
            .expect("tensor product length overflows u32 values");
        let mut values = Vec::with_capacity(total);
        for &pv in &self.values {
            for &qv in &other.values {
                values.push((pv - 1) * m + qv);
            }
        }
        Permutation { values }
    }

    pub fn reverse(&self) -> Permutation {
        let mut values = self.values.clone();
        values.reverse();
        Permutation { values }
    }

    pub fn complement(&self) -> Permutation {
        let n = self.len() as u32;
        Permutation {
            values: self.values.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut values = vec![0u32; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            values[v as usize - 1] = i as u32 + 1;
        }
        Permutation { values }
    }

    pub fn apply_symmetry(&self, sym: Symmetry) -> Permutation {
        match sym {
            Symmetry::Reverse => self.reverse(),
            Symmetry::Complement => self.complement(),
            Symmetry::Inverse => self.inverse(),
        }
    }

    /// Closure of `self` under reverse, complement and inverse (at most 8
    /// elements), sorted.
    pub fn symmetry_orbit(&self) -> Vec<Permutation> {
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier = vec![self.clone()];
        seen.insert(self.clone());
        while let Some(p) = frontier.pop() {
            for img in [p.reverse(), p.complement(), p.inverse()] {
                if seen.insert(img.clone()) {
                    frontier.push(img);
                }
            }
        }
        seen.into_iter().collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.values {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses space-separated one-line notation; a blank line is the empty
    /// permutation.
    fn from_str(s: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (i, tok) in s.split_whitespace().enumerate() {
            let v: u32 = tok.parse().map_err(|_| {
                Error::InvalidPermutation(format!("position {}: not an integer: {tok:?}", i + 1))
            })?;
            values.push(v);
        }
        Permutation::new(values)
    }
}

/// Rank-renormalizes arbitrary distinct values into a permutation.
fn normalize(selected: &[u32]) -> Permutation {
    let mut sorted: Vec<u32> = selected.to_vec();
    sorted.sort_unstable();
    let values = selected
        .iter()
        .map(|v| sorted.partition_point(|x| x < v) as u32 + 1)
        .collect();
    Permutation { values }
}

fn lis_of(values: &[u32]) -> usize {
    let mut tails: Vec<u32> = Vec::new();
    for &v in values {
        let i = tails.partition_point(|&t| t < v);
        if i == tails.len() {
            tails.push(v);
        } else {
            tails[i] = v;
        }
    }
    tails.len()
}

/// For each position, the length-minus-one of the longest increasing
/// subsequence ending there. Each class is a decreasing subsequence.
fn ending_classes(values: &[u32]) -> Vec<usize> {
    let mut tails: Vec<u32> = Vec::new();
    let mut classes = Vec::with_capacity(values.len());
    for &v in values {
        let t = tails.partition_point(|&x| x < v);
        if t == tails.len() {
            tails.push(v);
        } else {
            tails[t] = v;
        }
        classes.push(t);
    }
    classes
}

/// A strictly increasing sequence of 1-based positions; may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSubsequence {
    positions: Vec<usize>,
}

impl IndexSubsequence {
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        for w in positions.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument(format!(
                    "indices not strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if positions.first() == Some(&0) {
            return Err(Error::InvalidArgument("indices are 1-based".into()));
        }
        Ok(IndexSubsequence { positions })
    }

    pub fn empty() -> Self {
        IndexSubsequence { positions: Vec::new() }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Which kind of chains a chain cover is made of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// The three generating symmetries of the square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Reverse,
    Complement,
    Inverse,
}

/// Chain slot a position is assigned to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainRef {
    Increasing(usize),
    Decreasing(usize),
}

/// An assignment of every position to one of `r` increasing or `s`
/// decreasing chains. Chains may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneCover {
    pub(crate) r: usize,
    pub(crate) s: usize,
    pub(crate) assignment: Vec<ChainRef>,
}

impl MonotoneCover {
    pub fn new(r: usize, s: usize, assignment: Vec<ChainRef>) -> Self {
        MonotoneCover { r, s, assignment }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Chain of the 1-based position `i`.
    pub fn chain_of(&self, i: usize) -> ChainRef {
        self.assignment[i - 1]
    }

    pub fn assignment(&self) -> &[ChainRef] {
        &self.assignment
    }

    /// Relabels this cover as an `(r, s)` cover with more chain slots of
    /// either kind; existing assignments keep their slots.
    pub fn widened(mut self, r: usize, s: usize) -> MonotoneCover {
        assert!(r >= self.r && s >= self.s);
        self.r = r;
        self.s = s;
        self
    }

    /// True iff every declared chain really is monotone in its direction,
    /// every position is assigned to an in-range slot, and the assignment
    /// length matches `pi`.
    pub fn validates(&self, pi: &Permutation) -> bool {
        if self.assignment.len() != pi.len() {
            return false;
        }
        let mut inc_last: Vec<Option<u32>> = vec![None; self.r];
        let mut dec_last: Vec<Option<u32>> = vec![None; self.s];
        for (i, &chain) in self.assignment.iter().enumerate() {
            let v = pi.values()[i];
            match chain {
                ChainRef::Increasing(c) => {
                    if c >= self.r {
                        return false;
                    }
                    if let Some(last) = inc_last[c] {
                        if last >= v {
                            return false;
                        }
                    }
                    inc_last[c] = Some(v);
                }
                ChainRef::Decreasing(c) => {
                    if c >= self.s {
                        return false;
                    }
                    if let Some(last) = dec_last[c] {
                        if last <= v {
                            return false;
                        }
                    }
                    dec_last[c] = Some(v);
                }
            }
        }
        true
    }

    /// Chains as position lists, increasing chains first.
    pub fn chains(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut inc = vec![Vec::new(); self.r];
        let mut dec = vec![Vec::new(); self.s];
        for (i, &chain) in self.assignment.iter().enumerate() {
            match chain {
                ChainRef::Increasing(c) => inc[c].push(i + 1),
                ChainRef::Decreasing(c) => dec[c].push(i + 1),
            }
        }
        (inc, dec)
    }
}

impl fmt::Display for MonotoneCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (inc, dec) = self.chains();
        write!(f, "r={} s={}", self.r, self.s)?;
        for (c, positions) in inc.iter().enumerate() {
            write!(f, " inc{}={}", c, join(positions))?;
        }
        for (c, positions) in dec.iter().enumerate() {
            write!(f, " dec{}={}", c, join(positions))?;
        }
        Ok(())
    }
}

fn join(positions: &[usize]) -> String {
    if positions.is_empty() {
        return "-".into();
    }
    positions
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    pub(crate) const SEED12: &str = "10 5 1 7 11 4 9 2 6 12 8 3";
    pub(crate) const SEED15: &str = "12 14 5 10 3 9 1 7 15 13 11 4 2 8 6";

    #[test]
    fn pattern_of_selected_values() {
        let pi = p(SEED12);
        let idx = IndexSubsequence::new(vec![2, 3, 4, 9, 10, 11]).unwrap();
        assert_eq!(pi.pattern_of(&idx).unwrap(), p("2 1 4 3 6 5"));
        let all = IndexSubsequence::new((1..=12).collect()).unwrap();
        assert_eq!(pi.pattern_of(&all).unwrap(), pi);
        let two = IndexSubsequence::new(vec![1, 3]).unwrap();
        assert_eq!(p("3 1 4 2").pattern_of(&two).unwrap(), p("1 2"));
    }

    #[test]
    fn pattern_of_range_check() {
        let idx = IndexSubsequence::new(vec![1, 5]).unwrap();
        assert!(p("2 1 3").pattern_of(&idx).is_err());
    }

    #[test]
    fn contains_finds_first_witness() {
        let pi = p(SEED12);
        let w = pi.contains(&p("2 1 4 3 6 5")).unwrap();
        assert_eq!(w.positions(), &[2, 3, 4, 9, 10, 11]);
        assert_eq!(pi.pattern_of(&w).unwrap(), p("2 1 4 3 6 5"));
        assert_eq!(
            pi.contains(&Permutation::empty()),
            Some(IndexSubsequence::empty())
        );
        assert!(p("2 1 4 3").contains(&p("3 1 4 2")).is_none());
    }

    #[test]
    fn delete_renormalizes_by_rank() {
        assert_eq!(p(SEED12).delete(3).unwrap(), p("9 4 6 10 3 8 1 5 11 7 2"));
        assert_eq!(p("1").delete(1).unwrap(), Permutation::empty());
        assert_eq!(p("1 3 2 5 4").delete(1).unwrap(), p("2 1 4 3"));
        assert!(p("1 2").delete(3).is_err());
        assert!(p("1 2").delete(0).is_err());
    }

    #[test]
    fn longest_monotone_lengths() {
        assert_eq!(p(SEED12).lis(), 4);
        assert_eq!(p(SEED12).lds(), 4);
        assert_eq!(p(SEED15).lis(), 3);
        assert_eq!(p(SEED15).lds(), 6);
        assert_eq!(Permutation::empty().lis(), 0);
        assert_eq!(Permutation::empty().lds(), 0);
    }

    #[test]
    fn lis_witness_is_increasing_and_longest() {
        for s in [SEED12, SEED15, "1", "2 1", "3 1 4 2"] {
            let pi = p(s);
            let w = pi.lis_witness();
            assert_eq!(w.len(), pi.lis());
            let vals: Vec<u32> = w.positions().iter().map(|&i| pi.at(i)).collect();
            assert!(vals.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn chain_cover_classes() {
        let cover = p("3 1 4 2").chain_cover(Direction::Decreasing);
        assert_eq!((cover.r(), cover.s()), (0, 2));
        assert!(cover.validates(&p("3 1 4 2")));
        let (_, dec) = cover.chains();
        assert_eq!(dec, vec![vec![1, 2], vec![3, 4]]);

        let cover = Permutation::ascending(5).chain_cover(Direction::Increasing);
        assert_eq!((cover.r(), cover.s()), (1, 0));
        assert!(cover.validates(&Permutation::ascending(5)));

        let cover = p(SEED15).chain_cover(Direction::Decreasing);
        assert_eq!(cover.s(), 3);
        assert!(cover.validates(&p(SEED15)));
    }

    #[test]
    fn sums_match_worked_examples() {
        assert_eq!(p("1 3 2").direct_sum(&p("2 1")), p("1 3 2 5 4"));
        assert_eq!(p("1 3 2").skew_sum(&p("2 1")), p("3 5 4 2 1"));
        assert_eq!(p("1 3 2").tensor(&p("2 1")), p("2 1 6 5 4 3"));
        assert_eq!(p("2 1 4 3").tensor(&p("2 1 4 3")), p("6 5 8 7 2 1 4 3 14 13 16 15 10 9 12 11"));
    }

    #[test]
    fn symmetries() {
        assert_eq!(p("1 3 2").reverse(), p("2 3 1"));
        assert_eq!(p("2 3 1").inverse(), p("3 1 2"));
        assert_eq!(p("1 3 2").complement(), p("3 1 2"));
        // Four-fold rotational symmetry: the orbit collapses to two images.
        assert_eq!(p(SEED12).symmetry_orbit().len(), 2);
        assert_eq!(Permutation::empty().symmetry_orbit().len(), 1);
    }

    #[test]
    fn parse_round_trip_and_diagnostics() {
        let pi = p(SEED12);
        assert_eq!(pi.to_string().parse::<Permutation>().unwrap(), pi);
        assert_eq!("".parse::<Permutation>().unwrap(), Permutation::empty());
        assert_eq!("  ".parse::<Permutation>().unwrap(), Permutation::empty());
        let err = "1 4 2".parse::<Permutation>().unwrap_err().to_string();
        assert!(err.contains("position 2"), "{err}");
        let err = "1 2 2".parse::<Permutation>().unwrap_err().to_string();
        assert!(err.contains("duplicate"), "{err}");
        let err = "1 x".parse::<Permutation>().unwrap_err().to_string();
        assert!(err.contains("position 2"), "{err}");
    }

    #[test]
    fn cover_validation() {
        // 1 3 2 5 4 with chains inc {1,5}, inc {4}, dec {3,2}; the second
        // increasing chain may as well be empty elsewhere.
        let cover = MonotoneCover::new(
            2,
            1,
            vec![
                ChainRef::Increasing(0),
                ChainRef::Decreasing(0),
                ChainRef::Decreasing(0),
                ChainRef::Increasing(0),
                ChainRef::Increasing(1),
            ],
        );
        assert!(cover.validates(&p("1 3 2 5 4")));
        // a "decreasing" chain holding values 3 then 5 is not decreasing
        let bad = MonotoneCover::new(
            2,
            1,
            vec![
                ChainRef::Increasing(0),
                ChainRef::Decreasing(0),
                ChainRef::Increasing(0),
                ChainRef::Decreasing(0),
                ChainRef::Increasing(0),
            ],
        );
        assert!(!bad.validates(&p("1 3 2 5 4")));
        let bad = MonotoneCover::new(
            1,
            0,
            vec![ChainRef::Increasing(0), ChainRef::Increasing(0)],
        );
        assert!(!bad.validates(&p("2 1")));
    }
}
