//! Seed permutations found by computer search, and the builders that
//! compose critical / minimal / sharp permutations into longer ones.
//!
//! Builders never verify the properties they claim: verification cost
//! varies by orders of magnitude with size, and the larger instances are
//! intentionally left unverified. Callers (and the test suite) check claims
//! with the solver where feasible.

use std::fmt;

use crate::bounds::{minimal_table, LowerRule};
use crate::downset::Downset;
use crate::perm::Permutation;
use crate::{Error, Result};

/// Longest point count a builder will materialize.
const MATERIALIZE_CAP: usize = 20_000_000;

/// The length-9 seed, `(2, 1)`-critical.
pub fn seed_rect_2_1() -> Permutation {
    "5 2 7 1 6 3 9 8 4".parse().expect("valid seed")
}

/// The length-12 seed, 3-critical and triangle-3-minimal, with four-fold
/// rotational symmetry.
pub fn seed_triangle_3() -> Permutation {
    "10 5 1 7 11 4 9 2 6 12 8 3".parse().expect("valid seed")
}

/// The length-15 seed, `(2, 2)`-sharp: longest increasing subsequence 3,
/// longest decreasing 6.
pub fn seed_sharp_2_2() -> Permutation {
    "12 14 5 10 3 9 1 7 15 13 11 4 2 8 6".parse().expect("valid seed")
}

/// Triangle-minimal base witnesses for the recurrence family. The k = 2
/// witness is the lexicographic minimum over all 208 hits of the
/// exhaustive length-6 search.
fn minimal_base(k: usize) -> Option<Permutation> {
    let text = match k {
        0 => "1",
        1 => "3 1 2",
        2 => "1 3 2 6 5 4",
        3 => return Some(seed_triangle_3()),
        _ => return None,
    };
    Some(text.parse().expect("valid base"))
}

/// What a construction claims about its output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Critical,
    Minimal,
    Sharp,
    /// Not itself critical, but shrinks (via criticalize) to a critical
    /// pattern containing the embedded permutation.
    ContainsCritical,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Critical => write!(f, "critical"),
            Claim::Minimal => write!(f, "minimal"),
            Claim::Sharp => write!(f, "sharp"),
            Claim::ContainsCritical => write!(f, "contains-critical"),
        }
    }
}

/// Provenance record of a built permutation.
#[derive(Clone, Debug)]
pub struct ConstructionRecipe {
    pub name: String,
    pub claim: Claim,
    pub target: Downset,
    pub claimed_length: usize,
}

impl fmt::Display for ConstructionRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "name={} claim={} target={} length={}",
            self.name, self.claim, self.target, self.claimed_length
        )
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub permutation: Permutation,
    pub recipe: ConstructionRecipe,
}

impl Construction {
    fn new(permutation: Permutation, name: String, claim: Claim, target: Downset) -> Self {
        let claimed_length = permutation.len();
        Construction {
            permutation,
            recipe: ConstructionRecipe {
                name,
                claim,
                target,
                claimed_length,
            },
        }
    }
}

/// Skew sum of an `(r1, s)`-critical and an `(r2, s)`-critical permutation,
/// claimed `(r1 + r2 + 1, s)`-critical.
pub fn critical_skew_sum(
    a: &Permutation,
    r1: usize,
    b: &Permutation,
    r2: usize,
    s: usize,
) -> Construction {
    Construction::new(
        a.skew_sum(b),
        format!("critical-skew-sum(r1={r1},r2={r2},s={s})"),
        Claim::Critical,
        Downset::rectangle(r1 + r2 + 1, s),
    )
}

/// A triangle-`k`-minimal permutation over an ascending run of length
/// `k + 2`, claimed triangle-`k+1`-minimal.
pub fn minimal_step(pi: &Permutation, k: usize) -> Construction {
    Construction::new(
        pi.skew_sum(&Permutation::ascending(k + 2)),
        format!("minimal-step(k={k})"),
        Claim::Minimal,
        Downset::triangle(k + 1),
    )
}

/// Which doubling identity to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoubleKind {
    /// `(pi ⊕ pi) ⊖ (pi ⊕ sigma)`, claimed triangle-`2k+2`-minimal.
    TwoKPlusTwo,
    /// `(pi ⊕ sigma) ⊖ (sigma ⊕ sigma)`, claimed triangle-`2k+3`-minimal.
    TwoKPlusThree,
}

/// Doubles a triangle-`k`-minimal `pi` with a triangle-`k+1`-minimal
/// `sigma`.
pub fn minimal_double(
    pi: &Permutation,
    sigma: &Permutation,
    k: usize,
    kind: DoubleKind,
) -> Construction {
    let (perm, target, tag) = match kind {
        DoubleKind::TwoKPlusTwo => (
            pi.direct_sum(pi).skew_sum(&pi.direct_sum(sigma)),
            Downset::triangle(2 * k + 2),
            "2k+2",
        ),
        DoubleKind::TwoKPlusThree => (
            pi.direct_sum(sigma).skew_sum(&sigma.direct_sum(sigma)),
            Downset::triangle(2 * k + 3),
            "2k+3",
        ),
    };
    Construction::new(
        perm,
        format!("minimal-double(k={k},variant={tag})"),
        Claim::Minimal,
        target,
    )
}

/// Tensor product of an `(a-1, b-1)`-sharp and a `(c-1, d-1)`-sharp
/// permutation, claimed `(ac-1, bd-1)`-sharp.
pub fn sharp_tensor(
    x: &Permutation,
    a: usize,
    b: usize,
    y: &Permutation,
    c: usize,
    d: usize,
) -> Result<Construction> {
    if a == 0 || b == 0 || c == 0 || d == 0 {
        return Err(Error::InvalidArgument(
            "sharp tensor parameters must be positive".into(),
        ));
    }
    Ok(Construction::new(
        x.tensor(y),
        format!("sharp-tensor(a={a},b={b},c={c},d={d})"),
        Claim::Sharp,
        Downset::rectangle(a * c - 1, b * d - 1),
    ))
}

/// Wraps `tau` between guard runs: a skew sum `L` of `r` ascending runs and
/// a direct sum `R` of `s` descending runs, each of length `run` with
/// `run > r + s`. The result `(L ⊕ tau) ⊖ R` is `(r+s)`-coverable iff `tau`
/// is `(r, s)`-coverable, so criticalizing it under the triangle target
/// extracts an `(r+s)`-critical pattern containing `tau`.
pub fn guarded_embed(
    tau: &Permutation,
    r: usize,
    s: usize,
    run: usize,
) -> Result<Construction> {
    if run <= r + s {
        return Err(Error::InvalidArgument(format!(
            "guard run length {run} must exceed r + s = {}",
            r + s
        )));
    }
    let mut left = Permutation::empty();
    for _ in 0..r {
        left = left.skew_sum(&Permutation::ascending(run));
    }
    let mut right = Permutation::empty();
    for _ in 0..s {
        right = right.direct_sum(&Permutation::descending(run));
    }
    Ok(Construction::new(
        left.direct_sum(tau).skew_sum(&right),
        format!("guarded-embed(r={r},s={s},run={run})"),
        Claim::ContainsCritical,
        Downset::triangle(r + s),
    ))
}

/// Smallest legal guard run for `guarded_embed`.
pub fn default_guard_run(r: usize, s: usize) -> usize {
    r + s + 1
}

/// An ascending run of length `k + 2` over `sigma`: `(1 … k+2) ⊖ sigma` is
/// `(k+1)`-coverable iff `sigma` is `k`-coverable, so criticalizing it under
/// the triangle-`k+1` target extracts a `(k+1)`-critical pattern strictly
/// containing a `k`-critical `sigma`.
pub fn run_lift(sigma: &Permutation, k: usize) -> Construction {
    Construction::new(
        Permutation::ascending(k + 2).skew_sum(sigma),
        format!("run-lift(k={k})"),
        Claim::ContainsCritical,
        Downset::triangle(k + 1),
    )
}

/// The `n`-fold tensor power of the length-15 seed: length `15^n`, claimed
/// `(3^n - 1, 3^n - 1)`-sharp.
pub fn sharp_tensor_family(n: usize) -> Result<Construction> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor family needs n >= 1".into()));
    }
    let length = 15usize
        .checked_pow(n as u32)
        .filter(|&l| l <= MATERIALIZE_CAP)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "tensor family at n={n} exceeds the materialization cap of {MATERIALIZE_CAP} points"
            ))
        })?;
    let seed = seed_sharp_2_2();
    let mut perm = seed.clone();
    for _ in 1..n {
        perm = perm.tensor(&seed);
    }
    debug_assert_eq!(perm.len(), length);
    let side = 3usize.pow(n as u32) - 1;
    Ok(Construction::new(
        perm,
        format!("sharp-tensor-family(n={n})"),
        Claim::Sharp,
        Downset::rectangle(side, side),
    ))
}

/// Materializes the recurrence family member for `k`: a permutation of the
/// tabulated best length, claimed triangle-`k`-minimal. The schedule picks,
/// at every index, whichever recurrence (run-step or one of the doublings)
/// claims the greater length.
pub fn minimal_family(k: usize) -> Result<Construction> {
    let (lengths, rules) = minimal_table(k);
    if lengths[k] > MATERIALIZE_CAP as u64 {
        return Err(Error::InvalidArgument(format!(
            "family member at k={k} has {} points, above the materialization cap",
            lengths[k]
        )));
    }
    let mut memo: Vec<Option<Permutation>> = vec![None; k + 1];
    let perm = materialize_minimal(k, &lengths, &rules, &mut memo);
    debug_assert_eq!(perm.len() as u64, lengths[k]);
    Ok(Construction::new(
        perm,
        format!("minimal-family(k={k},rule={})", rules[k]),
        Claim::Minimal,
        Downset::triangle(k),
    ))
}

fn materialize_minimal(
    k: usize,
    lengths: &[u64],
    rules: &[LowerRule],
    memo: &mut Vec<Option<Permutation>>,
) -> Permutation {
    if let Some(p) = &memo[k] {
        return p.clone();
    }
    let perm = if let Some(base) = minimal_base(k) {
        base
    } else {
        match rules[k] {
            LowerRule::Step => {
                let prev = materialize_minimal(k - 1, lengths, rules, memo);
                minimal_step(&prev, k - 1).permutation
            }
            LowerRule::DoubleEven => {
                let j = (k - 2) / 2;
                let pi = materialize_minimal(j, lengths, rules, memo);
                let sigma = materialize_minimal(j + 1, lengths, rules, memo);
                minimal_double(&pi, &sigma, j, DoubleKind::TwoKPlusTwo).permutation
            }
            LowerRule::DoubleOdd => {
                let j = (k - 3) / 2;
                let pi = materialize_minimal(j, lengths, rules, memo);
                let sigma = materialize_minimal(j + 1, lengths, rules, memo);
                minimal_double(&pi, &sigma, j, DoubleKind::TwoKPlusThree).permutation
            }
            other => unreachable!("minimal table rule {other} above the bases"),
        }
    };
    memo[k] = Some(perm.clone());
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn seeds_have_documented_shapes() {
        assert_eq!(seed_rect_2_1().len(), 9);
        assert_eq!(seed_triangle_3().len(), 12);
        assert_eq!(seed_sharp_2_2().len(), 15);
        assert_eq!(seed_sharp_2_2().lis(), 3);
        assert_eq!(seed_sharp_2_2().lds(), 6);
    }

    #[test]
    fn skew_sum_builder_shape() {
        let c = critical_skew_sum(&seed_rect_2_1(), 2, &seed_rect_2_1(), 2, 1);
        assert_eq!(c.permutation.len(), 18);
        assert_eq!(c.recipe.claimed_length, 18);
        assert_eq!(c.recipe.target, Downset::rectangle(5, 1));
        // garbage in, garbage out: the builder itself never checks claims
        let c = critical_skew_sum(&p("2 1"), 0, &p("2 1"), 0, 1);
        assert_eq!(c.permutation, p("4 3 2 1"));
    }

    #[test]
    fn step_and_lift_shapes() {
        let c = minimal_step(&seed_triangle_3(), 3);
        assert_eq!(c.permutation.len(), 17);
        assert_eq!(c.recipe.target, Downset::triangle(4));
        let c = minimal_step(&p("1"), 0);
        assert_eq!(c.permutation, p("3 1 2"));
        let c = run_lift(&seed_triangle_3(), 3);
        assert_eq!(c.permutation.len(), 17);
        assert_eq!(c.permutation.values()[..5], [13, 14, 15, 16, 17]);
    }

    #[test]
    fn double_lengths() {
        let pi = seed_triangle_3();
        let sigma = minimal_step(&pi, 3).permutation;
        let c = minimal_double(&pi, &sigma, 3, DoubleKind::TwoKPlusTwo);
        assert_eq!(c.permutation.len(), 3 * 12 + 17);
        assert_eq!(c.recipe.target, Downset::triangle(8));
        let c = minimal_double(&pi, &sigma, 3, DoubleKind::TwoKPlusThree);
        assert_eq!(c.permutation.len(), 12 + 3 * 17);
        assert_eq!(c.recipe.target, Downset::triangle(9));
    }

    #[test]
    fn tensor_builders() {
        let c = sharp_tensor(&seed_sharp_2_2(), 3, 3, &seed_sharp_2_2(), 3, 3).unwrap();
        assert_eq!(c.permutation.len(), 225);
        assert_eq!(c.recipe.target, Downset::rectangle(8, 8));
        let ident = Permutation::ascending(1);
        let c = sharp_tensor(&ident, 1, 1, &seed_sharp_2_2(), 3, 3).unwrap();
        assert_eq!(c.permutation, seed_sharp_2_2());
        assert!(sharp_tensor(&ident, 0, 1, &ident, 1, 1).is_err());

        let fam = sharp_tensor_family(1).unwrap();
        assert_eq!(fam.permutation, seed_sharp_2_2());
        assert_eq!(fam.recipe.target, Downset::rectangle(2, 2));
        let fam = sharp_tensor_family(2).unwrap();
        assert_eq!(fam.permutation.len(), 225);
        assert!(sharp_tensor_family(8).is_err());
    }

    #[test]
    fn guard_embedding_shapes() {
        let c = guarded_embed(&seed_rect_2_1(), 2, 1, 4).unwrap();
        assert_eq!(c.permutation.len(), 8 + 9 + 4);
        assert!(guarded_embed(&seed_rect_2_1(), 2, 1, 3).is_err());
        let c = guarded_embed(&p("3 1 4 2"), 0, 0, 1).unwrap();
        assert_eq!(c.permutation, p("3 1 4 2"));
        assert_eq!(default_guard_run(2, 1), 4);
    }

    #[test]
    fn family_lengths_follow_the_table() {
        for k in 0..=12 {
            let c = minimal_family(k).unwrap();
            assert_eq!(c.permutation.len() as u64, minimal_table(k).0[k], "k={k}");
            assert_eq!(c.recipe.claimed_length, c.permutation.len());
        }
        assert_eq!(minimal_family(4).unwrap().permutation.len(), 17);
    }
}
