//! Separable permutations: recognition via block decomposition, their
//! non-coverability downsets straight from the decomposition tree (no
//! solver calls), and enumeration of every separable critical permutation
//! for a downset target.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::downset::{Downset, MergeOp};
use crate::perm::Permutation;
use crate::{Error, Result};

/// Canonical decomposition tree of a separable permutation: sum nodes have
/// at least two children and never a child of their own kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionTree {
    Leaf,
    DirectSum(Vec<DecompositionTree>),
    SkewSum(Vec<DecompositionTree>),
}

impl DecompositionTree {
    pub fn leaf_count(&self) -> usize {
        match self {
            DecompositionTree::Leaf => 1,
            DecompositionTree::DirectSum(children) | DecompositionTree::SkewSum(children) => {
                children.iter().map(|c| c.leaf_count()).sum()
            }
        }
    }

    /// Rebuilds the permutation the tree describes.
    pub fn permutation(&self) -> Permutation {
        match self {
            DecompositionTree::Leaf => Permutation::ascending(1),
            DecompositionTree::DirectSum(children) => children
                .iter()
                .fold(Permutation::empty(), |acc, c| acc.direct_sum(&c.permutation())),
            DecompositionTree::SkewSum(children) => children
                .iter()
                .fold(Permutation::empty(), |acc, c| acc.skew_sum(&c.permutation())),
        }
    }

    /// The non-coverability downset, computed bottom-up through the two
    /// merge homomorphisms. Its size always equals the leaf count.
    pub fn non_cover_downset(&self) -> Downset {
        match self {
            DecompositionTree::Leaf => Downset::column(1),
            DecompositionTree::DirectSum(children) => children
                .iter()
                .fold(Downset::empty(), |acc, c| acc.direct_sum(&c.non_cover_downset())),
            DecompositionTree::SkewSum(children) => children
                .iter()
                .fold(Downset::empty(), |acc, c| acc.skew_sum(&c.non_cover_downset())),
        }
    }
}

impl fmt::Display for DecompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionTree::Leaf => write!(f, "1"),
            DecompositionTree::DirectSum(children) => {
                write!(f, "(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            DecompositionTree::SkewSum(children) => {
                write!(f, "(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, " - ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Canonical decomposition of a separable permutation, or `None` when the
/// permutation is not separable (the empty permutation included).
pub fn decompose(pi: &Permutation) -> Option<DecompositionTree> {
    let n = pi.len();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(DecompositionTree::Leaf);
    }
    let values = pi.values();

    // Direct-sum boundaries: prefixes holding exactly the values {1..m}.
    let mut boundaries = Vec::new();
    let mut max = 0;
    for (i, &v) in values.iter().enumerate() {
        max = max.max(v);
        if max as usize == i + 1 {
            boundaries.push(i + 1);
        }
    }
    if boundaries.len() > 1 {
        let mut children = Vec::with_capacity(boundaries.len());
        let mut start = 0;
        for &end in &boundaries {
            let child_values: Vec<u32> =
                values[start..end].iter().map(|&v| v - start as u32).collect();
            let child = Permutation::from_vec_unchecked(child_values);
            children.push(decompose(&child)?);
            start = end;
        }
        return Some(DecompositionTree::DirectSum(children));
    }

    // Skew-sum boundaries: prefixes holding exactly the top values.
    let mut boundaries = Vec::new();
    let mut min = u32::MAX;
    for (i, &v) in values.iter().enumerate() {
        min = min.min(v);
        if min as usize == n - i {
            boundaries.push(i + 1);
        }
    }
    if boundaries.len() > 1 {
        let mut children = Vec::with_capacity(boundaries.len());
        let mut start = 0;
        for &end in &boundaries {
            let offset = (n - end) as u32;
            let child_values: Vec<u32> =
                values[start..end].iter().map(|&v| v - offset).collect();
            let child = Permutation::from_vec_unchecked(child_values);
            children.push(decompose(&child)?);
            start = end;
        }
        return Some(DecompositionTree::SkewSum(children));
    }

    None
}

/// All separable target-critical permutations, sorted. A separable
/// permutation is critical for a downset exactly when that downset is its
/// own non-coverability set, so the enumeration recurses over every
/// ordered two-part merge splitting of the target.
pub fn enumerate_critical(target: &Downset) -> Result<Vec<Permutation>> {
    if target.is_empty() {
        return Err(Error::InvalidArgument(
            "enumeration target must be a nonempty downset".into(),
        ));
    }
    let mut memo = HashMap::new();
    Ok(enumerate_rec(target, &mut memo).iter().cloned().collect())
}

fn enumerate_rec(target: &Downset, memo: &mut HashMap<Downset, BTreeSet<Permutation>>) -> BTreeSet<Permutation> {
    if let Some(found) = memo.get(target) {
        return found.clone();
    }
    let mut out = BTreeSet::new();
    if target.size() == 1 {
        out.insert(Permutation::ascending(1));
    } else {
        for (b, c) in target.splittings(MergeOp::DirectSum) {
            for pb in enumerate_rec(&b, memo) {
                for pc in enumerate_rec(&c, memo) {
                    out.insert(pb.direct_sum(&pc));
                }
            }
        }
        for (b, c) in target.splittings(MergeOp::SkewSum) {
            for pb in enumerate_rec(&b, memo) {
                for pc in enumerate_rec(&c, memo) {
                    out.insert(pb.skew_sum(&pc));
                }
            }
        }
    }
    memo.insert(target.clone(), out.clone());
    out
}
