//! Finite downward-closed subsets of ℕ² and their column/row merges.
//!
//! A downset is stored as its non-increasing sequence of positive column
//! heights: `(r, s)` is a member iff `r < columns.len()` and
//! `s < columns[r]`. This makes equality canonical, the direct-sum merge a
//! columnwise height addition, and the skew-sum merge the conjugate
//! operation (rowwise width addition).

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Downset {
    columns: Vec<usize>,
}

impl Downset {
    /// Builds a downset from column heights, which must be positive and
    /// non-increasing.
    pub fn new(columns: Vec<usize>) -> Result<Self> {
        for w in columns.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidArgument(format!(
                    "column heights must be non-increasing: {} before {}",
                    w[0], w[1]
                )));
            }
        }
        if columns.last() == Some(&0) {
            return Err(Error::InvalidArgument(
                "column heights must be positive".into(),
            ));
        }
        Ok(Downset { columns })
    }

    pub(crate) fn from_vec_unchecked(columns: Vec<usize>) -> Self {
        debug_assert!(Downset::new(columns.clone()).is_ok());
        Downset { columns }
    }

    pub fn empty() -> Self {
        Downset { columns: Vec::new() }
    }

    /// The triangle `{(r, s) : r + s ≤ k}`, with columns `k+1, k, …, 1`.
    pub fn triangle(k: usize) -> Self {
        Downset {
            columns: (1..=k + 1).rev().collect(),
        }
    }

    /// The rectangle `{0..r} × {0..s}`: `r+1` columns of height `s+1`.
    pub fn rectangle(r: usize, s: usize) -> Self {
        Downset {
            columns: vec![s + 1; r + 1],
        }
    }

    /// A single column `{0} × {0..h-1}`.
    pub fn column(h: usize) -> Self {
        if h == 0 {
            Downset::empty()
        } else {
            Downset { columns: vec![h] }
        }
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Number of points.
    pub fn size(&self) -> usize {
        self.columns.iter().sum()
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn height(&self) -> usize {
        self.columns.first().copied().unwrap_or(0)
    }

    pub fn contains(&self, r: usize, s: usize) -> bool {
        r < self.columns.len() && s < self.columns[r]
    }

    pub fn is_subset(&self, other: &Downset) -> bool {
        self.columns.len() <= other.columns.len()
            && self
                .columns
                .iter()
                .zip(&other.columns)
                .all(|(a, b)| a <= b)
    }

    /// The maximal elements, by increasing `r`.
    pub fn frontier(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.columns.len() {
            let h = self.columns[r];
            let next = self.columns.get(r + 1).copied().unwrap_or(0);
            if h > next {
                out.push((r, h - 1));
            }
        }
        out
    }

    /// All points, row-major.
    pub fn points(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for (r, &h) in self.columns.iter().enumerate() {
            for s in 0..h {
                out.push((r, s));
            }
        }
        out
    }

    /// The transpose (row widths become column heights).
    pub fn conjugate(&self) -> Downset {
        let height = self.height();
        let mut columns = Vec::with_capacity(height);
        for s in 0..height {
            columns.push(self.columns.partition_point(|&h| h > s));
        }
        Downset { columns }
    }

    /// Column-by-column merge: the result's height at column `r` is the sum
    /// of both heights there. `(r, s)` is a member iff every split
    /// `s = s1 + s2` lands in one of the operands.
    pub fn direct_sum(&self, other: &Downset) -> Downset {
        let len = self.columns.len().max(other.columns.len());
        let mut columns = Vec::with_capacity(len);
        for r in 0..len {
            let a = self.columns.get(r).copied().unwrap_or(0);
            let b = other.columns.get(r).copied().unwrap_or(0);
            columns.push(a + b);
        }
        Downset { columns }
    }

    /// Row-by-row merge, the conjugate of `direct_sum`.
    pub fn skew_sum(&self, other: &Downset) -> Downset {
        self.conjugate()
            .direct_sum(&other.conjugate())
            .conjugate()
    }

    /// All ordered pairs of nonempty downsets that merge to `self` under the
    /// given operation.
    pub fn splittings(&self, op: MergeOp) -> Vec<(Downset, Downset)> {
        match op {
            MergeOp::DirectSum => split_direct(&self.columns),
            MergeOp::SkewSum => split_direct(&self.conjugate().columns)
                .into_iter()
                .map(|(b, c)| (b.conjugate(), c.conjugate()))
                .collect(),
        }
    }
}

/// Enumerates ordered pairs `(B, C)` of nonempty height vectors that add
/// columnwise to `columns`. Both sides stay non-increasing by construction,
/// so their positive prefixes are valid downsets.
fn split_direct(columns: &[usize]) -> Vec<(Downset, Downset)> {
    let mut out = Vec::new();
    let mut left: Vec<usize> = Vec::new();
    fn rec(
        columns: &[usize],
        r: usize,
        left: &mut Vec<usize>,
        out: &mut Vec<(Downset, Downset)>,
    ) {
        if r == columns.len() {
            let b: Vec<usize> = left.iter().copied().take_while(|&h| h > 0).collect();
            let c: Vec<usize> = columns
                .iter()
                .zip(left.iter())
                .map(|(&t, &l)| t - l)
                .take_while(|&h| h > 0)
                .collect();
            if !b.is_empty() && !c.is_empty() {
                out.push((
                    Downset::from_vec_unchecked(b),
                    Downset::from_vec_unchecked(c),
                ));
            }
            return;
        }
        let total = columns[r];
        let max_b = left.last().copied().unwrap_or(usize::MAX).min(total);
        let prev_c = if r == 0 {
            usize::MAX
        } else {
            columns[r - 1] - left[r - 1]
        };
        let min_b = total.saturating_sub(prev_c);
        for b in min_b..=max_b {
            left.push(b);
            rec(columns, r + 1, left, out);
            left.pop();
        }
    }
    rec(columns, 0, &mut left, &mut out);
    out
}

/// The two merge operations on downsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeOp {
    DirectSum,
    SkewSum,
}

impl fmt::Display for Downset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for h in &self.columns {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{h}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Downset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Downset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut columns = Vec::new();
        for tok in s.split_whitespace() {
            let h: usize = tok.parse().map_err(|_| {
                Error::InvalidArgument(format!("not a column height: {tok:?}"))
            })?;
            columns.push(h);
        }
        Downset::new(columns)
    }
}
