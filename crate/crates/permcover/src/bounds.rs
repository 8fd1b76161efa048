//! Closed-form upper bounds, lower-bound recurrence tables, and the rooted
//! tree gadget that certifies the threshold lower bound at small sizes.
//!
//! All asserted inequalities are evaluated in exact integer arithmetic;
//! fractional exponents are resolved by comparing integer powers (squares
//! or fourth powers), never by floating point.

use std::fmt;

use num_bigint::BigUint;

use crate::downset::Downset;
use crate::perm::Permutation;
use crate::{Error, Result};

/// `(k+2 choose 2)`, the baseline length of a `k`-critical permutation.
pub fn baseline(k: u64) -> u64 {
    (k + 2) * (k + 1) / 2
}

/// The closeness threshold `N(r, d) ≤ min(4·r^(d+1), (4r)^(d/2+1))`,
/// rounded up when the second branch is irrational and wins. Requires
/// `r ≥ 2`.
pub fn n_upper(r: u64, d: u64) -> Result<BigUint> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "threshold bound needs r >= 2, got {r}"
        )));
    }
    let first = BigUint::from(4u32) * BigUint::from(r).pow(d as u32 + 1);
    // second = (4r)^(d/2+1); compare via squares: first^2 vs (4r)^(d+2)
    let base = BigUint::from(4 * r);
    let second_squared = base.pow(d as u32 + 2);
    if first.pow(2) <= second_squared {
        Ok(first)
    } else {
        Ok(ceil_sqrt(&second_squared))
    }
}

fn ceil_sqrt(x: &BigUint) -> BigUint {
    let root = x.sqrt();
    if &root.clone() * &root < *x {
        root + 1u32
    } else {
        root
    }
}

/// Upper bound on the longest `(r, s)`-critical length: exact values where
/// known (`min(r, s) = 0` and `(1, 1)`), otherwise the closeness threshold
/// at `(max(r, s), 2rs)`.
pub fn c_rs_upper(r: u64, s: u64) -> BigUint {
    if r.min(s) == 0 {
        return BigUint::from((r + 1) * (s + 1));
    }
    if r == 1 && s == 1 {
        return BigUint::from(4u32);
    }
    n_upper(r.max(s), 2 * r * s).expect("max(r, s) >= 2 here")
}

/// Upper bound on the longest `k`-critical length: the sum of the
/// `(r, s)` bounds over `r + s = k`.
pub fn c_k_upper(k: u64) -> BigUint {
    (0..=k).map(|r| c_rs_upper(r, k - r)).sum()
}

/// Which rule produced a lower-bound table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerRule {
    /// Exact small value or seed permutation.
    Seed,
    /// Append a monotone run: `M(k) ≥ M(k-1) + k+1`.
    Step,
    /// `M(2j+2) ≥ 3M(j) + M(j+1)`.
    DoubleEven,
    /// `M(2j+3) ≥ M(j) + 3M(j+1)`.
    DoubleOdd,
    /// Baseline `(k+2 choose 2)` or `(r+1)(s+1)`.
    Baseline,
    /// Skew/direct composition of two critical permutations.
    Split,
    /// From the sharp table (`S ≤ C`).
    Sharp,
    /// Transpose symmetry `C(r, s) = C(s, r)`.
    Transpose,
    /// Minimal table (`M ≤ C`).
    Minimal,
    /// One-point growth `C(k) ≥ C(k-1) + 1`.
    Chain,
    /// Tensor-power family point `C(2·3^n - 2) ≥ 15^n`.
    TensorFamily,
    /// Tensor product of two sharp permutations.
    TensorProduct,
}

impl fmt::Display for LowerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LowerRule::Seed => "seed",
            LowerRule::Step => "run-step",
            LowerRule::DoubleEven => "double-even",
            LowerRule::DoubleOdd => "double-odd",
            LowerRule::Baseline => "baseline",
            LowerRule::Split => "split",
            LowerRule::Sharp => "sharp",
            LowerRule::Transpose => "transpose",
            LowerRule::Minimal => "minimal",
            LowerRule::Chain => "chain",
            LowerRule::TensorFamily => "tensor-family",
            LowerRule::TensorProduct => "tensor-product",
        };
        f.write_str(name)
    }
}

/// Lengths and rules for the longest known triangle-minimal permutations,
/// maximizing over the run-step and the two doubling recurrences.
pub(crate) fn minimal_table(k_max: usize) -> (Vec<u64>, Vec<LowerRule>) {
    let mut m = vec![0u64; k_max + 1];
    let mut rule = vec![LowerRule::Seed; k_max + 1];
    for k in 0..=k_max.min(3) {
        m[k] = [1, 3, 6, 12][k];
    }
    for k in 4..=k_max {
        let step = m[k - 1] + k as u64 + 1;
        m[k] = step;
        rule[k] = LowerRule::Step;
        if k % 2 == 0 {
            let j = (k - 2) / 2;
            let cand = 3 * m[j] + m[j + 1];
            if cand > m[k] {
                m[k] = cand;
                rule[k] = LowerRule::DoubleEven;
            }
        } else {
            let j = (k - 3) / 2;
            let cand = m[j] + 3 * m[j + 1];
            if cand > m[k] {
                m[k] = cand;
                rule[k] = LowerRule::DoubleOdd;
            }
        }
    }
    (m, rule)
}

/// Dynamic-programming tables of lower bounds on the longest critical,
/// minimal and sharp permutation lengths.
pub struct LowerBounds {
    k_max: usize,
    rs_max: usize,
    m: Vec<u64>,
    m_rule: Vec<LowerRule>,
    s_rs: Vec<Vec<u64>>,
    s_rule: Vec<Vec<LowerRule>>,
    c_rs: Vec<Vec<u64>>,
    c_rs_rule: Vec<Vec<LowerRule>>,
    c_k: Vec<u64>,
    c_k_rule: Vec<LowerRule>,
}

/// Builds every lower-bound table: minimal lengths up to `k_max`, the
/// `(r, s)` sharp/critical tables up to `rs_max`, and the `k`-critical
/// table up to `k_max`.
pub fn lower_bounds(k_max: usize, rs_max: usize) -> LowerBounds {
    let (m, m_rule) = minimal_table(k_max);

    // Sharp table: base staircase (r+1)(s+1), the length-15 seed at (2, 2),
    // closed under the tensor rule S(ac-1, bd-1) >= S(a-1, b-1) S(c-1, d-1).
    let mut s_rs = vec![vec![0u64; rs_max + 1]; rs_max + 1];
    let mut s_rule = vec![vec![LowerRule::Baseline; rs_max + 1]; rs_max + 1];
    for r in 0..=rs_max {
        for s in 0..=rs_max {
            s_rs[r][s] = ((r + 1) * (s + 1)) as u64;
            if r == 2 && s == 2 {
                s_rs[r][s] = 15;
                s_rule[r][s] = LowerRule::Seed;
            }
            for a in divisors(r + 1) {
                for b in divisors(s + 1) {
                    let (c, d) = ((r + 1) / a, (s + 1) / b);
                    if (a == 1 && b == 1) || (c == 1 && d == 1) {
                        continue;
                    }
                    let cand = s_rs[a - 1][b - 1] * s_rs[c - 1][d - 1];
                    if cand > s_rs[r][s] {
                        s_rs[r][s] = cand;
                        s_rule[r][s] = LowerRule::TensorProduct;
                    }
                }
            }
        }
    }

    // Critical (r, s) table: exact rows/columns, the length-9 seed at
    // (2, 1), the sharp table, the split recurrences in both directions,
    // and transpose symmetry, iterated to a fixpoint.
    let mut c_rs = vec![vec![0u64; rs_max + 1]; rs_max + 1];
    let mut c_rs_rule = vec![vec![LowerRule::Baseline; rs_max + 1]; rs_max + 1];
    for r in 0..=rs_max {
        for s in 0..=rs_max {
            c_rs[r][s] = ((r + 1) * (s + 1)) as u64;
            if s_rs[r][s] > c_rs[r][s] {
                c_rs[r][s] = s_rs[r][s];
                c_rs_rule[r][s] = LowerRule::Sharp;
            }
        }
    }
    if rs_max >= 2 {
        if c_rs[2][1] < 9 {
            c_rs[2][1] = 9;
            c_rs_rule[2][1] = LowerRule::Seed;
        }
        if c_rs[1][2] < 9 {
            c_rs[1][2] = 9;
            c_rs_rule[1][2] = LowerRule::Seed;
        }
    }
    loop {
        let mut changed = false;
        for r in 0..=rs_max {
            for s in 0..=rs_max {
                for r1 in 0..r {
                    let cand = c_rs[r1][s] + c_rs[r - 1 - r1][s];
                    if cand > c_rs[r][s] {
                        c_rs[r][s] = cand;
                        c_rs_rule[r][s] = LowerRule::Split;
                        changed = true;
                    }
                }
                for s1 in 0..s {
                    let cand = c_rs[r][s1] + c_rs[r][s - 1 - s1];
                    if cand > c_rs[r][s] {
                        c_rs[r][s] = cand;
                        c_rs_rule[r][s] = LowerRule::Split;
                        changed = true;
                    }
                }
                if c_rs[s][r] > c_rs[r][s] {
                    c_rs[r][s] = c_rs[s][r];
                    c_rs_rule[r][s] = LowerRule::Transpose;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Tensor-power family points: C(2·3^n - 2) >= 15^n.
    let mut family = std::collections::HashMap::new();
    let mut pow3 = 3u64;
    let mut pow15 = 15u64;
    while 2 * pow3 - 2 <= k_max as u64 {
        family.insert((2 * pow3 - 2) as usize, pow15);
        pow3 *= 3;
        pow15 *= 15;
    }

    let mut c_k = vec![0u64; k_max + 1];
    let mut c_k_rule = vec![LowerRule::Baseline; k_max + 1];
    for k in 0..=k_max {
        c_k[k] = baseline(k as u64);
        if m[k] > c_k[k] {
            c_k[k] = m[k];
            c_k_rule[k] = LowerRule::Minimal;
        }
        if k <= 2 * rs_max {
            let lo = k.saturating_sub(rs_max);
            for r in lo..=k.min(rs_max) {
                if c_rs[r][k - r] > c_k[k] {
                    c_k[k] = c_rs[r][k - r];
                    c_k_rule[k] = LowerRule::Split;
                }
            }
        }
        if k > 0 && c_k[k - 1] + 1 > c_k[k] {
            c_k[k] = c_k[k - 1] + 1;
            c_k_rule[k] = LowerRule::Chain;
        }
        if let Some(&fam) = family.get(&k) {
            if fam > c_k[k] {
                c_k[k] = fam;
                c_k_rule[k] = LowerRule::TensorFamily;
            }
        }
    }

    LowerBounds {
        k_max,
        rs_max,
        m,
        m_rule,
        s_rs,
        s_rule,
        c_rs,
        c_rs_rule,
        c_k,
        c_k_rule,
    }
}

impl LowerBounds {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn rs_max(&self) -> usize {
        self.rs_max
    }

    /// Lower bound on the longest triangle-minimal length.
    pub fn minimal_lb(&self, k: usize) -> u64 {
        self.m[k]
    }

    pub fn minimal_rule(&self, k: usize) -> LowerRule {
        self.m_rule[k]
    }

    pub fn sharp_lb(&self, r: usize, s: usize) -> u64 {
        self.s_rs[r][s]
    }

    pub fn critical_rs_lb(&self, r: usize, s: usize) -> u64 {
        self.c_rs[r][s]
    }

    pub fn critical_k_lb(&self, k: usize) -> u64 {
        self.c_k[k]
    }

    pub fn critical_k_rule(&self, k: usize) -> LowerRule {
        self.c_k_rule[k]
    }

    pub fn report_k(&self, k: usize) -> BoundReport {
        BoundReport {
            quantity: "C(k)".into(),
            parameters: format!("k={k}"),
            lower: Some((self.c_k[k], self.c_k_rule[k].to_string())),
            upper: Some((c_k_upper(k as u64), "summed-threshold".into())),
        }
    }

    pub fn report_rs(&self, r: usize, s: usize) -> BoundReport {
        BoundReport {
            quantity: "C(r,s)".into(),
            parameters: format!("r={r} s={s}"),
            lower: Some((self.c_rs[r][s], self.c_rs_rule[r][s].to_string())),
            upper: Some((c_rs_upper(r as u64, s as u64), "threshold".into())),
        }
    }

    pub fn report_minimal(&self, k: usize) -> BoundReport {
        BoundReport {
            quantity: "M(k)".into(),
            parameters: format!("k={k}"),
            lower: Some((self.m[k], self.m_rule[k].to_string())),
            upper: Some((c_k_upper(k as u64), "summed-threshold".into())),
        }
    }

    pub fn report_sharp(&self, r: usize, s: usize) -> BoundReport {
        BoundReport {
            quantity: "S(r,s)".into(),
            parameters: format!("r={r} s={s}"),
            lower: Some((self.s_rs[r][s], self.s_rule[r][s].to_string())),
            upper: Some((c_rs_upper(r as u64, s as u64), "threshold".into())),
        }
    }
}

fn divisors(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for d in 1..=n {
        if n % d == 0 {
            out.push(d);
        }
    }
    out
}

/// A computed bound on one of the extremal quantities, with provenance.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub quantity: String,
    pub parameters: String,
    pub lower: Option<(u64, String)>,
    pub upper: Option<(BigUint, String)>,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quantity={} {}", self.quantity, self.parameters)?;
        if let Some((value, by)) = &self.lower {
            write!(f, " lower={value} lower_by={by}")?;
        }
        if let Some((value, by)) = &self.upper {
            write!(f, " upper={value} upper_by={by}")?;
        }
        Ok(())
    }
}

/// The rooted `r`-ary tree gadget with `d/2 + 1` layers whose partial
/// functions (2 on the root path, 1 elsewhere) admit no valid total
/// function, certifying that the closeness threshold is at least the
/// number of nodes.
pub struct Gadget {
    r: usize,
    d: usize,
    parent: Vec<usize>,
}

const GADGET_MAX_NODES: usize = 13;

pub fn gadget_build(r: usize, d: usize) -> Result<Gadget> {
    if r < 2 {
        return Err(Error::InvalidArgument("gadget needs r >= 2".into()));
    }
    if d % 2 != 0 {
        return Err(Error::InvalidArgument("gadget needs even d".into()));
    }
    let layers = d / 2 + 1;
    let mut size = 1usize;
    let mut layer_size = 1usize;
    for _ in 1..layers {
        layer_size = layer_size.saturating_mul(r);
        size = size.saturating_add(layer_size);
        if size > GADGET_MAX_NODES {
            return Err(Error::InvalidArgument(format!(
                "gadget universe exceeds the exhaustion guard of {GADGET_MAX_NODES} nodes"
            )));
        }
    }
    let mut parent = vec![0usize; size];
    let mut next = 1;
    let mut frontier = vec![0usize];
    for _ in 1..layers {
        let mut new_frontier = Vec::new();
        for &node in &frontier {
            for _ in 0..r {
                parent[next] = node;
                new_frontier.push(next);
                next += 1;
            }
        }
        frontier = new_frontier;
    }
    Ok(Gadget { r, d, parent })
}

impl Gadget {
    pub fn universe_size(&self) -> usize {
        self.parent.len()
    }

    /// Bitmask of the root-to-`i` path, including `i`.
    fn path_mask(&self, i: usize) -> u32 {
        let mut mask = 1u32 << i;
        let mut node = i;
        while node != 0 {
            node = self.parent[node];
            mask |= 1 << node;
        }
        mask
    }

    /// The partial functions pairwise differ in at most `d` points outside
    /// the pair itself.
    pub fn functions_close(&self) -> bool {
        let n = self.universe_size();
        let masks: Vec<u32> = (0..n).map(|i| self.path_mask(i)).collect();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let diff = (masks[i] ^ masks[j]) & !(1 << i) & !(1 << j);
                if diff.count_ones() as usize > self.d {
                    return false;
                }
            }
        }
        true
    }

    /// True iff no total function `P : U -> {1, 2}` has the property that
    /// every subset `S` of size ≤ r+1 is matched by some `P_i` with
    /// `i ∉ S`. Exhausts all `2^|U|` candidates and all such subsets.
    pub fn verify(&self) -> bool {
        let n = self.universe_size();
        let masks: Vec<u32> = (0..n).map(|i| self.path_mask(i)).collect();
        let subsets: Vec<u32> = (0..1u32 << n)
            .filter(|s| (s.count_ones() as usize) <= self.r + 1)
            .collect();
        'candidates: for p in 0..1u32 << n {
            // bit set in p = the function takes value 2 there
            for &s_mask in &subsets {
                let mut matched = false;
                for i in 0..n {
                    if s_mask & (1 << i) != 0 {
                        continue;
                    }
                    // P_i agrees with P on all of S: on S, P_i is 2 exactly
                    // on the path to i.
                    if (masks[i] & s_mask) == (p & s_mask) {
                        matched = true;
                        break;
                    }
                }
                if !matched {
                    continue 'candidates;
                }
            }
            return false;
        }
        true
    }
}

/// The peeling envelope: repeatedly remove one longest increasing
/// subsequence and stack the removed lengths as column heights. The result
/// is a downset of size exactly `|pi|` that contains the non-coverability
/// set, so it can pre-filter exact computations.
pub fn peel_envelope(pi: &Permutation) -> Downset {
    let mut columns = Vec::new();
    let mut current = pi.clone();
    while !current.is_empty() {
        let witness = current.lis_witness();
        columns.push(witness.len());
        let rest: Vec<usize> = (1..=current.len())
            .filter(|i| !witness.positions().contains(i))
            .collect();
        let rest = crate::perm::IndexSubsequence::new(rest).expect("strictly increasing");
        current = current.pattern_of(&rest).expect("in range");
    }
    Downset::new(columns).expect("peeled lengths are non-increasing")
}
