//! Exhaustive enumeration of target-critical permutations up to a length
//! cap.
//!
//! Candidates grow by one-line extension (append the next value, shifting
//! larger ones up), so every tree node is a genuine permutation and its
//! ancestors are exactly its prefix patterns. A prefix of a critical
//! permutation is a proper pattern, hence coverable; the DFS therefore
//! extends only coverable nodes and tests each non-coverable node for
//! criticality, which keeps the enumeration complete.
//!
//! The tree splits at a fixed depth into independent subtree tasks, each
//! with a private solver; finished subtrees are flagged in an optional
//! checkpoint file so an interrupted run can resume.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::criticality::{is_critical, CriticalityReport};
use crate::downset::Downset;
use crate::perm::Permutation;
use crate::solver::{Solver, SolverLimits};
use crate::{Error, Result};

/// Description of one enumeration run.
#[derive(Clone, Debug)]
pub struct SearchJob {
    pub target: Downset,
    pub max_len: usize,
    /// Emit canonical orbit representatives instead of raw hits, and prune
    /// complement-mirrored subtrees when the target allows it.
    pub use_symmetry: bool,
    /// Worker count for subtree tasks.
    pub parallelism: usize,
    /// Depth at which the tree splits into independent subtree tasks.
    pub split_depth: usize,
    /// Hard cap on `max_len`; lengths past it are a deliberate opt-in.
    pub safety_cap: usize,
    pub limits: SolverLimits,
    /// Frontier bookkeeping for resumable runs.
    pub checkpoint: Option<PathBuf>,
}

impl SearchJob {
    pub fn new(target: Downset, max_len: usize) -> Self {
        SearchJob {
            target,
            max_len,
            use_symmetry: true,
            parallelism: 1,
            split_depth: 2,
            safety_cap: 11,
            limits: SolverLimits::default(),
            checkpoint: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchHit {
    pub permutation: Permutation,
    pub report: CriticalityReport,
}

#[derive(Debug)]
pub struct SearchOutcome {
    /// Hits sorted by length, then lexicographically.
    pub hits: Vec<SearchHit>,
    pub nodes: u64,
    pub candidates: u64,
    pub subtrees: usize,
    pub resumed_subtrees: usize,
}

impl SearchOutcome {
    pub fn hits_of_len(&self, len: usize) -> Vec<&Permutation> {
        self.hits
            .iter()
            .map(|h| &h.permutation)
            .filter(|p| p.len() == len)
            .collect()
    }
}

/// Images of `pi` under the symmetries that preserve coverability for this
/// target: inverse and reverse-complement always do; reverse and complement
/// individually swap the chain directions, so they qualify only when the
/// target equals its own conjugate.
pub fn preserving_images(pi: &Permutation, target: &Downset) -> Vec<Permutation> {
    let self_conjugate = target.conjugate() == *target;
    let mut seen: BTreeSet<(Permutation, bool)> = BTreeSet::new();
    let mut frontier = vec![(pi.clone(), false)];
    seen.insert((pi.clone(), false));
    while let Some((p, swapped)) = frontier.pop() {
        for (img, flips) in [
            (p.reverse(), true),
            (p.complement(), true),
            (p.inverse(), false),
        ] {
            let tagged = (img, swapped ^ flips);
            if !seen.contains(&tagged) {
                seen.insert(tagged.clone());
                frontier.push(tagged);
            }
        }
    }
    let set: BTreeSet<Permutation> = seen
        .into_iter()
        .filter(|(_, swapped)| !swapped || self_conjugate)
        .map(|(p, _)| p)
        .collect();
    set.into_iter().collect()
}

/// Lexicographic minimum of the target-preserving orbit.
pub fn canonical_representative(pi: &Permutation, target: &Downset) -> Permutation {
    preserving_images(pi, target)
        .into_iter()
        .next()
        .expect("orbit contains the permutation itself")
}

/// The one-line extensions: all permutations of length n+1 whose prefix
/// pattern of length n is `pi`.
fn extensions(pi: &Permutation) -> Vec<Permutation> {
    let n = pi.len() as u32;
    (1..=n + 1)
        .map(|v| {
            let mut values: Vec<u32> = pi
                .values()
                .iter()
                .map(|&x| if x >= v { x + 1 } else { x })
                .collect();
            values.push(v);
            Permutation::from_vec_unchecked(values)
        })
        .collect()
}

const COVER_CACHE_MAX_LEN: usize = 8;

struct Worker<'a> {
    target: &'a Downset,
    max_len: usize,
    solver: Solver,
    /// Coverability of short patterns, keyed by their canonical symmetry
    /// representative; the same small patterns recur massively across
    /// siblings.
    cover_cache: HashMap<Permutation, bool>,
    deadline: Option<Instant>,
    nodes: u64,
    candidates: u64,
    hits: Vec<Permutation>,
}

impl<'a> Worker<'a> {
    fn new(target: &'a Downset, max_len: usize, limits: SolverLimits, deadline: Option<Instant>) -> Self {
        Worker {
            target,
            max_len,
            solver: Solver::with_limits(limits),
            cover_cache: HashMap::new(),
            deadline,
            nodes: 0,
            candidates: 0,
            hits: Vec::new(),
        }
    }

    fn coverable(&mut self, pi: &Permutation) -> Result<bool> {
        if pi.len() > COVER_CACHE_MAX_LEN {
            return self.solver.is_downset_coverable(pi, self.target);
        }
        let key = canonical_representative(pi, self.target);
        if let Some(&known) = self.cover_cache.get(&key) {
            return Ok(known);
        }
        let known = self.solver.is_downset_coverable(pi, self.target)?;
        self.cover_cache.insert(key, known);
        Ok(known)
    }

    fn check_deadline(&self) -> Result<()> {
        if let Some(deadline) = self.deadline {
            if self.nodes & 0xff == 0 && Instant::now() > deadline {
                return Err(Error::ResourceExhausted(
                    "search hit its time budget".into(),
                ));
            }
        }
        Ok(())
    }

    /// Non-coverable node: a candidate. Its prefix is already known
    /// coverable, so only the criticality check remains.
    fn candidate(&mut self, pi: &Permutation) -> Result<()> {
        self.candidates += 1;
        let report = is_critical(&mut self.solver, pi, self.target)?;
        if report.status.is_critical() {
            self.hits.push(pi.clone());
        }
        Ok(())
    }

    /// Depth-first extension below a node known to be coverable and shorter
    /// than the length cap.
    fn extend(&mut self, pi: &Permutation) -> Result<()> {
        for child in extensions(pi) {
            self.nodes += 1;
            self.check_deadline()?;
            if self.coverable(&child)? {
                if child.len() < self.max_len {
                    self.extend(&child)?;
                }
            } else {
                self.candidate(&child)?;
            }
        }
        Ok(())
    }
}

/// Header + done/hit lines recording finished subtrees.
struct Checkpoint {
    file: Mutex<fs::File>,
}

const MAIN_SCAN_MARK: &str = "-";

impl Checkpoint {
    fn header(job: &SearchJob, split: usize) -> String {
        format!(
            "target={};max_len={};symmetry={};split={}",
            job.target, job.max_len, job.use_symmetry as u8, split
        )
    }

    /// Loads done markers and prior hits if the file exists and matches the
    /// job, then reopens it for appending.
    fn open(
        path: &PathBuf,
        header: &str,
    ) -> Result<(Checkpoint, BTreeSet<String>, Vec<Permutation>)> {
        let mut done = BTreeSet::new();
        let mut hits = Vec::new();
        if path.exists() {
            let text = fs::read_to_string(path)?;
            let mut lines = text.lines();
            match lines.next() {
                Some(first) if first == header => {}
                Some(first) => {
                    return Err(Error::InvalidArgument(format!(
                        "checkpoint describes a different job: {first:?} vs {header:?}"
                    )))
                }
                None => {}
            }
            for line in lines {
                if let Some(rest) = line.strip_prefix("done ") {
                    done.insert(rest.to_string());
                } else if let Some(rest) = line.strip_prefix("hit ") {
                    hits.push(rest.parse()?);
                }
            }
        } else {
            fs::write(path, format!("{header}\n"))?;
        }
        let file = fs::OpenOptions::new().append(true).open(path)?;
        Ok((
            Checkpoint {
                file: Mutex::new(file),
            },
            done,
            hits,
        ))
    }

    fn record(&self, done_mark: &str, hits: &[Permutation]) -> Result<()> {
        let mut text = String::new();
        for hit in hits {
            let _ = writeln!(text, "hit {hit}");
        }
        let _ = writeln!(text, "done {done_mark}");
        let mut file = self.file.lock().expect("checkpoint lock");
        file.write_all(text.as_bytes())?;
        file.flush()?;
        Ok(())
    }
}

/// Runs the enumeration. `on_hit` is called as raw hits are found (in no
/// particular order); the outcome lists them deduplicated and sorted, as
/// canonical representatives when symmetry is on.
pub fn search_critical(
    job: &SearchJob,
    on_hit: &(dyn Fn(&Permutation) + Sync),
) -> Result<SearchOutcome> {
    if job.target.is_empty() {
        return Err(Error::InvalidArgument(
            "search target must be a nonempty downset".into(),
        ));
    }
    if job.max_len > job.safety_cap {
        return Err(Error::InvalidArgument(format!(
            "max length {} exceeds the safety cap {}; raise the cap to opt in",
            job.max_len, job.safety_cap
        )));
    }
    let deadline = job.limits.time_budget.map(|b| Instant::now() + b);
    if job.max_len == 0 {
        return Ok(SearchOutcome {
            hits: Vec::new(),
            nodes: 0,
            candidates: 0,
            subtrees: 0,
            resumed_subtrees: 0,
        });
    }
    let split = job.split_depth.clamp(1, job.max_len);
    let self_conjugate = job.target.conjugate() == job.target;
    let thin = job.use_symmetry && self_conjugate;

    let header = Checkpoint::header(job, split);
    let mut done = BTreeSet::new();
    let mut prior_hits = Vec::new();
    let checkpoint = match &job.checkpoint {
        Some(path) => {
            let (cp, d, h) = Checkpoint::open(path, &header)?;
            done = d;
            prior_hits = h;
            Some(cp)
        }
        None => None,
    };

    // Shallow walk: candidates above the split depth are handled here, and
    // the coverable nodes at the split depth become the task frontier.
    let mut main = Worker::new(&job.target, job.max_len, job.limits.clone(), deadline);
    let main_done = done.contains(MAIN_SCAN_MARK);
    let mut frontier: Vec<Permutation> = Vec::new();
    let mut level = vec![Permutation::empty()];
    for depth in 1..=split {
        let mut next = Vec::new();
        for node in &level {
            for child in extensions(node) {
                main.nodes += 1;
                main.check_deadline()?;
                if main.coverable(&child)? {
                    if depth == split {
                        frontier.push(child);
                    } else {
                        next.push(child);
                    }
                } else if !main_done && child.len() <= job.max_len {
                    main.candidate(&child)?;
                }
            }
        }
        level = next;
    }
    if !main_done {
        for hit in &main.hits {
            on_hit(hit);
        }
        if let Some(cp) = &checkpoint {
            cp.record(MAIN_SCAN_MARK, &main.hits)?;
        }
    }

    if thin {
        frontier.retain(|node| *node <= node.complement());
    }
    frontier.sort();
    let subtrees = frontier.len();
    let pending: Vec<&Permutation> = frontier
        .iter()
        .filter(|node| !done.contains(&node.to_string()))
        .collect();
    let resumed_subtrees = subtrees - pending.len();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.parallelism.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let checkpoint_ref = checkpoint.as_ref();
    let results: Result<Vec<(Vec<Permutation>, u64, u64)>> = pool.install(|| {
        pending
            .par_iter()
            .map(|node| {
                let mut worker =
                    Worker::new(&job.target, job.max_len, job.limits.clone(), deadline);
                if node.len() < job.max_len {
                    worker.extend(node)?;
                }
                for hit in &worker.hits {
                    on_hit(hit);
                }
                if let Some(cp) = checkpoint_ref {
                    cp.record(&node.to_string(), &worker.hits)?;
                }
                Ok((worker.hits, worker.nodes, worker.candidates))
            })
            .collect()
    });
    let results = results?;

    let mut nodes = main.nodes;
    let mut candidates = main.candidates;
    let mut raw: Vec<Permutation> = prior_hits;
    raw.append(&mut main.hits);
    for (hits, n, c) in results {
        raw.extend(hits);
        nodes += n;
        candidates += c;
    }
    if thin {
        let complements: Vec<Permutation> = raw.iter().map(|p| p.complement()).collect();
        raw.extend(complements);
    }
    let unique: BTreeSet<Permutation> = if job.use_symmetry {
        raw.iter()
            .map(|p| canonical_representative(p, &job.target))
            .collect()
    } else {
        raw.into_iter().collect()
    };
    let mut ordered: Vec<Permutation> = unique.into_iter().collect();
    ordered.sort_by_key(|p| (p.len(), p.values().to_vec()));

    let mut hits = Vec::with_capacity(ordered.len());
    for permutation in ordered {
        let report = is_critical(&mut main.solver, &permutation, &job.target)?;
        hits.push(SearchHit {
            permutation,
            report,
        });
    }
    Ok(SearchOutcome {
        hits,
        nodes,
        candidates,
        subtrees,
        resumed_subtrees,
    })
}
