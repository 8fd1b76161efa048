mod common;

use common::{all_downsets, quantified_direct_sum_contains};
use permcover::downset::MergeOp;
use permcover::Downset;
use proptest::prelude::*;

/// The closed-form merges (height/width additivity) are an implementation
/// choice; the universally quantified definition is the specification. This
/// checks them against each other over every pair of downsets of size ≤ 12.
#[test]
fn closed_forms_match_the_quantified_definition() {
    let pool = all_downsets(12);
    for a in &pool {
        for b in &pool {
            let direct = a.direct_sum(b);
            let r_max = a.width() + b.width() + 1;
            let s_max = a.height() + b.height() + 1;
            for r in 0..=r_max {
                for s in 0..=s_max {
                    assert_eq!(
                        direct.contains(r, s),
                        quantified_direct_sum_contains(a, b, r, s),
                        "direct sum of {a} and {b} at ({r},{s})"
                    );
                }
            }
            // the skew merge is the row-wise mirror of the column-wise one
            let skew = a.skew_sum(b);
            assert_eq!(skew, a.conjugate().direct_sum(&b.conjugate()).conjugate());
        }
    }
}

#[test]
fn triangle_identities() {
    for k in 0..=40 {
        let t = Downset::triangle(k);
        let t1 = Downset::triangle(k + 1);
        assert_eq!(t.skew_sum(&Downset::column(k + 2)), t1);
        let even = t.direct_sum(&t).skew_sum(&t.direct_sum(&t1));
        assert_eq!(even, Downset::triangle(2 * k + 2));
        let odd = t.direct_sum(&t1).skew_sum(&t1.direct_sum(&t1));
        assert_eq!(odd, Downset::triangle(2 * k + 3));
    }
}

#[test]
fn splittings_recombine_and_are_exhaustive() {
    let pool = all_downsets(10);
    for a in &pool {
        for op in [MergeOp::DirectSum, MergeOp::SkewSum] {
            let splits = a.splittings(op);
            for (b, c) in &splits {
                assert!(!b.is_empty() && !c.is_empty());
                let merged = match op {
                    MergeOp::DirectSum => b.direct_sum(c),
                    MergeOp::SkewSum => b.skew_sum(c),
                };
                assert_eq!(&merged, a, "{b} op {c}");
            }
            // exhaustive versus brute force over all ordered pairs
            let brute: Vec<(Downset, Downset)> = pool
                .iter()
                .flat_map(|b| pool.iter().map(move |c| (b.clone(), c.clone())))
                .filter(|(b, c)| {
                    !b.is_empty()
                        && !c.is_empty()
                        && match op {
                            MergeOp::DirectSum => b.direct_sum(c) == *a,
                            MergeOp::SkewSum => b.skew_sum(c) == *a,
                        }
                })
                .collect();
            assert_eq!(splits.len(), brute.len(), "{a} under {op:?}");
            for pair in &brute {
                assert!(splits.contains(pair));
            }
        }
    }
}

/// If a direct sum of downsets is a rectangle then both parts are.
#[test]
fn rectangle_factors_are_rectangles() {
    let is_rect = |d: &Downset| {
        !d.is_empty() && d.columns().iter().all(|&h| h == d.height())
    };
    let pool = all_downsets(12);
    for a in &pool {
        for b in &pool {
            if a.is_empty() || b.is_empty() {
                continue;
            }
            if a.size() + b.size() > 12 {
                continue;
            }
            if is_rect(&a.direct_sum(b)) {
                assert!(is_rect(a) && is_rect(b), "{a} + {b}");
            }
        }
    }
}

fn random_downset(max: usize) -> impl Strategy<Value = Downset> {
    proptest::collection::vec(1..=max, 0..=6).prop_map(|mut cols| {
        cols.sort_unstable_by(|a, b| b.cmp(a));
        Downset::new(cols).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn merges_are_associative_commutative_with_identity(
        a in random_downset(9),
        b in random_downset(9),
        c in random_downset(9),
    ) {
        prop_assert_eq!(a.direct_sum(&b), b.direct_sum(&a));
        prop_assert_eq!(a.skew_sum(&b), b.skew_sum(&a));
        prop_assert_eq!(
            a.direct_sum(&b).direct_sum(&c),
            a.direct_sum(&b.direct_sum(&c))
        );
        prop_assert_eq!(a.skew_sum(&b).skew_sum(&c), a.skew_sum(&b.skew_sum(&c)));
        prop_assert_eq!(a.direct_sum(&Downset::empty()), a.clone());
        prop_assert_eq!(a.skew_sum(&Downset::empty()), a.clone());
    }

    #[test]
    fn merge_sizes_add(a in random_downset(9), b in random_downset(9)) {
        prop_assert_eq!(a.direct_sum(&b).size(), a.size() + b.size());
        prop_assert_eq!(a.skew_sum(&b).size(), a.size() + b.size());
    }

    #[test]
    fn heights_text_round_trips(a in random_downset(9)) {
        let text = a.to_string();
        let back: Downset = text.parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn frontier_points_are_maximal_members(a in random_downset(9)) {
        for (r, s) in a.frontier() {
            prop_assert!(a.contains(r, s));
            prop_assert!(!a.contains(r + 1, s));
            prop_assert!(!a.contains(r, s + 1));
        }
    }
}
