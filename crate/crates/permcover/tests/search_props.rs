mod common;

use std::collections::BTreeSet;

use common::{all_perms, brute_critical};
use permcover::search::{
    canonical_representative, preserving_images, search_critical, SearchJob,
};
use permcover::{Downset, Permutation, Solver};

fn run(job: &SearchJob) -> Vec<Permutation> {
    search_critical(job, &|_| {})
        .unwrap()
        .hits
        .iter()
        .map(|h| h.permutation.clone())
        .collect()
}

/// With symmetry off, the output must equal a plain scan of every
/// permutation with no pruning at all.
#[test]
fn completeness_matches_plain_brute_force() {
    let targets: Vec<Downset> = vec![
        Downset::triangle(1),
        Downset::rectangle(1, 1),
        Downset::rectangle(2, 1),
        Downset::triangle(2),
        "2 1".parse().unwrap(),
    ];
    let max_len = 6;
    for target in &targets {
        let mut want: Vec<Permutation> = Vec::new();
        for n in 1..=max_len {
            for pi in all_perms(n) {
                if brute_critical(&pi, target) {
                    want.push(pi);
                }
            }
        }
        let mut job = SearchJob::new(target.clone(), max_len);
        job.use_symmetry = false;
        let got = run(&job);
        assert_eq!(got, want, "target {target}");
    }
}

/// Orbit expansion of the canonical output reproduces the raw output set.
#[test]
fn symmetry_reduction_loses_nothing() {
    let targets: Vec<Downset> = vec![
        Downset::triangle(1),
        Downset::triangle(2),
        Downset::rectangle(1, 1),
        Downset::rectangle(2, 1),
    ];
    for target in &targets {
        let mut raw_job = SearchJob::new(target.clone(), 6);
        raw_job.use_symmetry = false;
        let raw: BTreeSet<Permutation> = run(&raw_job).into_iter().collect();

        let canonical = run(&SearchJob::new(target.clone(), 6));
        // every canonical hit is its own representative
        for pi in &canonical {
            assert_eq!(&canonical_representative(pi, target), pi);
        }
        let expanded: BTreeSet<Permutation> = canonical
            .iter()
            .flat_map(|pi| preserving_images(pi, target))
            .collect();
        assert_eq!(expanded, raw, "target {target}");
    }
}

/// The preserving group really preserves coverability, orbit by orbit.
#[test]
fn preserving_images_preserve_coverability() {
    let mut solver = Solver::new();
    let targets: Vec<Downset> = vec![
        Downset::triangle(2),
        Downset::rectangle(2, 1),
        "3 1".parse().unwrap(),
    ];
    for target in &targets {
        for pi in all_perms(5) {
            let covered = solver.is_downset_coverable(&pi, target).unwrap();
            for image in preserving_images(&pi, target) {
                assert_eq!(
                    solver.is_downset_coverable(&image, target).unwrap(),
                    covered,
                    "{pi} -> {image} under {target}"
                );
            }
        }
    }
}

/// For proper rectangles, reverse alone must not be in the preserving
/// group: it swaps the chain directions.
#[test]
fn rectangle_group_has_order_four() {
    let rect = Downset::rectangle(2, 1);
    let witness: Permutation = "5 2 7 1 6 3 9 8 4".parse().unwrap();
    let images = preserving_images(&witness, &rect);
    assert!(images.len() <= 4);
    assert!(!images.contains(&witness.reverse()));
    // ... while the triangle group folds reverse in as well
    let t3_images = preserving_images(&witness, &Downset::triangle(3));
    assert!(t3_images.contains(&witness.reverse()));
}

/// Every prefix of every emitted permutation is target-coverable.
#[test]
fn emitted_prefixes_are_coverable() {
    let mut solver = Solver::new();
    let target = Downset::rectangle(1, 1);
    let mut job = SearchJob::new(target.clone(), 6);
    job.use_symmetry = false;
    for hit in run(&job) {
        assert!(hit.len() >= 1);
        for m in 0..hit.len() {
            let prefix = hit.prefix_pattern(m);
            assert!(solver.is_downset_coverable(&prefix, &target).unwrap());
        }
        assert!(!solver.is_downset_coverable(&hit, &target).unwrap());
    }
}

#[test]
fn reports_re_verify_post_hoc() {
    let outcome = search_critical(&SearchJob::new(Downset::triangle(2), 6), &|_| {}).unwrap();
    assert!(!outcome.hits.is_empty());
    let mut solver = Solver::new();
    for hit in &outcome.hits {
        assert!(hit.report.status.is_critical());
        let again =
            permcover::criticality::is_critical(&mut solver, &hit.permutation, &Downset::triangle(2))
                .unwrap();
        assert!(again.status.is_critical());
    }
}

#[test]
fn checkpoint_records_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frontier.txt");
    let target = Downset::rectangle(1, 1);

    let mut job = SearchJob::new(target.clone(), 6);
    job.checkpoint = Some(path.clone());
    job.split_depth = 3;
    let first = search_critical(&job, &|_| {}).unwrap();
    assert_eq!(first.resumed_subtrees, 0);
    assert!(first.subtrees > 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().next().unwrap().starts_with("target="));
    assert!(text.lines().any(|l| l.starts_with("done ")));

    // a second run over the same file skips every subtree yet reports the
    // same hits
    let second = search_critical(&job, &|_| {}).unwrap();
    assert_eq!(second.resumed_subtrees, second.subtrees);
    let firsts: Vec<String> = first.hits.iter().map(|h| h.permutation.to_string()).collect();
    let seconds: Vec<String> = second.hits.iter().map(|h| h.permutation.to_string()).collect();
    assert_eq!(firsts, seconds);

    // a mismatched job refuses the file
    let mut other = SearchJob::new(target, 5);
    other.checkpoint = Some(path);
    assert!(search_critical(&other, &|_| {}).is_err());
}

#[test]
fn parallel_and_serial_agree() {
    let target = Downset::triangle(2);
    let serial = run(&SearchJob::new(target.clone(), 6));
    let mut job = SearchJob::new(target, 6);
    job.parallelism = 2;
    job.split_depth = 3;
    let parallel = run(&job);
    assert_eq!(serial, parallel);
}

#[test]
fn time_budget_aborts_resumably() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frontier.txt");
    let mut job = SearchJob::new(Downset::rectangle(2, 1), 9);
    job.checkpoint = Some(path.clone());
    job.limits.time_budget = Some(std::time::Duration::from_millis(1));
    match search_critical(&job, &|_| {}) {
        Err(permcover::Error::ResourceExhausted(_)) => {
            // the header survives for a later resume
            let text = std::fs::read_to_string(&path).unwrap();
            assert!(text.starts_with("target="));
            // resume with a sane budget completes the run
            job.limits.time_budget = None;
            let outcome = search_critical(&job, &|_| {}).unwrap();
            assert!(outcome.hits.iter().any(|h| h.permutation.len() == 9));
        }
        Ok(_) => panic!("a 1ms budget should not finish a length-9 search"),
        Err(e) => panic!("unexpected error: {e}"),
    }
}
