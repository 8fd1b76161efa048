//! Verification of critical / minimal / sharp status against a downset
//! target, and greedy extraction of a critical pattern.
//!
//! "Every proper pattern is coverable" is checked through the n one-point
//! deletions only: coverability is hereditary (a pattern of a coverable
//! permutation is coverable), so if every deletion is coverable then so is
//! every proper pattern. The paper-level arguments use this reduction
//! implicitly; it is the workhorse here.

use std::fmt;

use crate::downset::Downset;
use crate::perm::{MonotoneCover, Permutation};
use crate::solver::Solver;
use crate::{Error, Result};

/// Verification outcome for one subject/target pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriticalStatus {
    /// The subject itself is target-coverable, so it cannot be critical.
    Coverable,
    Critical,
    /// Deleting this 1-based position leaves the subject non-coverable.
    NonCritical { deletion: usize },
}

impl CriticalStatus {
    pub fn is_critical(&self) -> bool {
        matches!(self, CriticalStatus::Critical)
    }
}

impl fmt::Display for CriticalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalStatus::Coverable => write!(f, "coverable"),
            CriticalStatus::Critical => write!(f, "critical"),
            CriticalStatus::NonCritical { deletion } => {
                write!(f, "non-critical(deletion={deletion})")
            }
        }
    }
}

/// A cover of one deletion, as evidence for a criticality verdict.
#[derive(Clone, Debug)]
pub struct DeletionCertificate {
    pub deletion: usize,
    pub point: (usize, usize),
    pub cover: MonotoneCover,
}

#[derive(Clone, Debug)]
pub struct CriticalityReport {
    pub subject: Permutation,
    pub target: Downset,
    pub status: CriticalStatus,
    /// Whether the non-coverability downset equals the target; only filled
    /// when requested.
    pub minimal: Option<bool>,
    /// Covers for each deletion; only collected when requested (they are
    /// large for long permutations).
    pub certificates: Option<Vec<DeletionCertificate>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    pub certificates: bool,
    pub check_minimal: bool,
}

/// Decides whether `pi` is target-critical: not coverable itself, while
/// every one-point deletion is.
pub fn is_critical(
    solver: &mut Solver,
    pi: &Permutation,
    target: &Downset,
) -> Result<CriticalityReport> {
    is_critical_with(solver, pi, target, &CheckOptions::default())
}

pub fn is_critical_with(
    solver: &mut Solver,
    pi: &Permutation,
    target: &Downset,
    opts: &CheckOptions,
) -> Result<CriticalityReport> {
    if target.is_empty() {
        return Err(Error::InvalidArgument(
            "criticality target must be a nonempty downset".into(),
        ));
    }
    let mut report = CriticalityReport {
        subject: pi.clone(),
        target: target.clone(),
        status: CriticalStatus::Critical,
        minimal: None,
        certificates: None,
    };
    if solver.is_downset_coverable(pi, target)? {
        report.status = CriticalStatus::Coverable;
        return Ok(report);
    }
    let mut certificates = Vec::new();
    for i in 1..=pi.len() {
        let deleted = pi.delete(i)?;
        if !solver.is_downset_coverable(&deleted, target)? {
            report.status = CriticalStatus::NonCritical { deletion: i };
            return Ok(report);
        }
        if opts.certificates {
            certificates.push(deletion_certificate(solver, &deleted, target, i)?);
        }
    }
    if opts.certificates {
        report.certificates = Some(certificates);
    }
    if opts.check_minimal {
        report.minimal = Some(solver.non_cover_downset(pi)? == *target);
    }
    Ok(report)
}

fn deletion_certificate(
    solver: &mut Solver,
    deleted: &Permutation,
    target: &Downset,
    deletion: usize,
) -> Result<DeletionCertificate> {
    let mut frontier = target.frontier();
    frontier.sort_by_key(|&(r, s)| (r.min(s), r));
    for (r, s) in frontier {
        if let Some(cover) = solver.is_rs_coverable(deleted, r, s)?.cover() {
            return Ok(DeletionCertificate {
                deletion,
                point: (r, s),
                cover: cover.clone(),
            });
        }
    }
    unreachable!("deletion was verified coverable")
}

/// True iff `pi` is target-critical and its non-coverability downset is
/// exactly the target.
pub fn is_minimal(solver: &mut Solver, pi: &Permutation, target: &Downset) -> Result<bool> {
    let report = is_critical(solver, pi, target)?;
    if !report.status.is_critical() {
        return Ok(false);
    }
    Ok(solver.non_cover_downset(pi)? == *target)
}

/// True iff `pi` is `(r, s)`-critical and coverable by `s + 1` decreasing
/// chains alone (equivalently `lis ≤ s + 1`).
pub fn is_sharp(solver: &mut Solver, pi: &Permutation, r: usize, s: usize) -> Result<bool> {
    if pi.lis() > s + 1 {
        return Ok(false);
    }
    let report = is_critical(solver, pi, &Downset::rectangle(r, s))?;
    Ok(report.status.is_critical())
}

/// Shrinks a non-coverable permutation to a target-critical pattern by
/// repeatedly deleting the lowest-index position whose removal keeps the
/// permutation non-coverable.
pub fn criticalize(
    solver: &mut Solver,
    pi: &Permutation,
    target: &Downset,
) -> Result<Permutation> {
    if target.is_empty() {
        return Err(Error::InvalidArgument(
            "criticality target must be a nonempty downset".into(),
        ));
    }
    if solver.is_downset_coverable(pi, target)? {
        return Err(Error::Precondition(
            "criticalize needs a non-coverable input".into(),
        ));
    }
    let mut current = pi.clone();
    'outer: loop {
        for i in 1..=current.len() {
            let deleted = current.delete(i)?;
            if !solver.is_downset_coverable(&deleted, target)? {
                current = deleted;
                continue 'outer;
            }
        }
        return Ok(current);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn small_rectangle_criticals() {
        let mut solver = Solver::new();
        let report =
            is_critical(&mut solver, &p("2 1 4 3"), &Downset::rectangle(1, 1)).unwrap();
        assert!(report.status.is_critical());
        let report =
            is_critical(&mut solver, &p("3 4 1 2"), &Downset::rectangle(1, 1)).unwrap();
        assert!(report.status.is_critical());
        // 2 4 1 3 is a split permutation: inc {2, 3} and dec {4, 1} cover it
        let report =
            is_critical(&mut solver, &p("2 4 1 3"), &Downset::rectangle(1, 1)).unwrap();
        assert_eq!(report.status, CriticalStatus::Coverable);
    }

    #[test]
    fn ascending_run_is_coverable_not_critical() {
        let mut solver = Solver::new();
        let report = is_critical(
            &mut solver,
            &Permutation::ascending(5),
            &Downset::triangle(1),
        )
        .unwrap();
        assert_eq!(report.status, CriticalStatus::Coverable);
    }

    #[test]
    fn single_point_is_minimal_for_the_unit_target() {
        let mut solver = Solver::new();
        assert!(is_minimal(&mut solver, &p("1"), &Downset::triangle(0)).unwrap());
    }

    #[test]
    fn sharpness_small_cases() {
        let mut solver = Solver::new();
        assert!(is_sharp(&mut solver, &p("1"), 0, 0).unwrap());
        assert!(is_sharp(&mut solver, &p("2 1 4 3"), 1, 1).unwrap());
        assert!(is_sharp(&mut solver, &p("3 4 1 2"), 1, 1).unwrap());
        assert!(!is_sharp(&mut solver, &p("2 4 1 3"), 1, 1).unwrap());
    }

    #[test]
    fn criticalize_fixed_point_and_shrink() {
        let mut solver = Solver::new();
        let t1 = Downset::triangle(1);
        // already critical: fixed point
        assert_eq!(criticalize(&mut solver, &p("1 3 2"), &t1).unwrap(), p("1 3 2"));
        // appending a point leaves exactly the appended point removable
        let padded = p("2 1 4 3").direct_sum(&Permutation::ascending(1));
        let shrunk =
            criticalize(&mut solver, &padded, &Downset::rectangle(1, 1)).unwrap();
        assert_eq!(shrunk, p("2 1 4 3"));
        // coverable input violates the precondition
        let res = criticalize(&mut solver, &Permutation::ascending(3), &t1);
        assert!(matches!(res, Err(Error::Precondition(_))));
    }

    #[test]
    fn certificates_cover_every_deletion() {
        let mut solver = Solver::new();
        let opts = CheckOptions {
            certificates: true,
            check_minimal: true,
        };
        let pi = p("2 1 4 3");
        let target = Downset::rectangle(1, 1);
        let report = is_critical_with(&mut solver, &pi, &target, &opts).unwrap();
        assert!(report.status.is_critical());
        assert_eq!(report.minimal, Some(true));
        let certs = report.certificates.unwrap();
        assert_eq!(certs.len(), 4);
        for cert in certs {
            let deleted = pi.delete(cert.deletion).unwrap();
            assert!(cert.cover.validates(&deleted));
            assert!(target.contains(cert.point.0, cert.point.1));
        }
    }
}
