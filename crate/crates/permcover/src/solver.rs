//! Exact decision of `(r, s)`-coverability with certificates, downset
//! coverability, and computation of the full non-coverability downset.
//!
//! The general case is an exhaustive assignment search over positions in
//! one-line order. A state is the multiset of chain tops per direction;
//! states are canonicalized by sorting (chains of the same kind are
//! interchangeable) and memoized on failure. A state is also discarded when
//! a previously failed state at the same position is componentwise at least
//! as favorable (increasing tops ≤, decreasing tops ≥): whatever fails from
//! the stronger state fails from the weaker one.
//!
//! Greedy assignment is only used where it is a theorem: a permutation
//! splits into `r` increasing chains iff its longest decreasing subsequence
//! has length at most `r`, and dually. Everything else is searched.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use crate::bounds::peel_envelope;
use crate::downset::Downset;
use crate::perm::{ChainRef, Direction, MonotoneCover, Permutation};
use crate::{Error, Result};

/// Resource limits for one solver query.
#[derive(Clone, Debug)]
pub struct SolverLimits {
    /// Maximum number of stored search states per query.
    pub memo_budget: usize,
    /// Optional wall-clock limit per query (per job for the search module).
    pub time_budget: Option<Duration>,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            memo_budget: 2_000_000,
            time_budget: None,
        }
    }
}

/// Outcome of an exact coverability query.
#[derive(Clone, Debug)]
pub enum Decision {
    Coverable(MonotoneCover),
    NotCoverable,
}

impl Decision {
    pub fn is_coverable(&self) -> bool {
        matches!(self, Decision::Coverable(_))
    }

    pub fn cover(&self) -> Option<&MonotoneCover> {
        match self {
            Decision::Coverable(c) => Some(c),
            Decision::NotCoverable => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolverStats {
    pub queries: u64,
    pub cache_hits: u64,
    pub nodes: u64,
}

/// One solver instance owns a decision cache and serves one query at a
/// time; distinct instances share nothing and may run concurrently.
pub struct Solver {
    limits: SolverLimits,
    decisions: HashMap<(Vec<u32>, usize, usize), bool>,
    pub stats: SolverStats,
}

const DECISION_CACHE_CAP: usize = 1 << 19;
const PARETO_CAP_PER_POSITION: usize = 64;
const MAX_SEARCH_LENGTH: usize = 10_000;

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver::with_limits(SolverLimits::default())
    }

    pub fn with_limits(limits: SolverLimits) -> Self {
        Solver {
            limits,
            decisions: HashMap::new(),
            stats: SolverStats::default(),
        }
    }

    pub fn limits(&self) -> &SolverLimits {
        &self.limits
    }

    /// Exact YES (with a validated cover) or NO. Budget overruns surface as
    /// `Error::ResourceExhausted`, never as a wrong answer.
    pub fn is_rs_coverable(&mut self, pi: &Permutation, r: usize, s: usize) -> Result<Decision> {
        self.stats.queries += 1;
        if let Some(decision) = self.fast_path(pi, r, s) {
            return Ok(decision);
        }
        if self.decisions.get(&(pi.values().to_vec(), r, s)) == Some(&false) {
            self.stats.cache_hits += 1;
            return Ok(Decision::NotCoverable);
        }
        let decision = self.exhaustive(pi, r, s)?;
        self.remember(pi, r, s, decision.is_coverable());
        Ok(decision)
    }

    /// Decision only, served from the cache when possible.
    pub fn decide(&mut self, pi: &Permutation, r: usize, s: usize) -> Result<bool> {
        self.stats.queries += 1;
        if let Some(decision) = self.fast_path(pi, r, s) {
            return Ok(decision.is_coverable());
        }
        if let Some(&known) = self.decisions.get(&(pi.values().to_vec(), r, s)) {
            self.stats.cache_hits += 1;
            return Ok(known);
        }
        let known = self.exhaustive(pi, r, s)?.is_coverable();
        self.remember(pi, r, s, known);
        Ok(known)
    }

    /// True iff `pi` is `(r, s)`-coverable for some `(r, s)` in `target`;
    /// only the frontier is queried, cheap endpoints first.
    pub fn is_downset_coverable(&mut self, pi: &Permutation, target: &Downset) -> Result<bool> {
        if pi.is_empty() {
            return Ok(!target.is_empty());
        }
        let mut frontier = target.frontier();
        frontier.sort_by_key(|&(r, s)| (r.min(s), r));
        for (r, s) in frontier {
            if self.decide(pi, r, s)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The set of pairs `(r, s)` for which `pi` is not coverable, as a
    /// downset. Works inside the rectangle `[0, lds-1] × [0, lis-1]` and
    /// walks each column's boundary downward, so the number of solver calls
    /// is linear in the boundary length. The peeling envelope (a cheap
    /// superset of the result) prunes columns further.
    pub fn non_cover_downset(&mut self, pi: &Permutation) -> Result<Downset> {
        if pi.is_empty() {
            return Ok(Downset::empty());
        }
        let lis = pi.lis();
        let lds = pi.lds();
        let envelope = peel_envelope(pi);
        let mut columns = Vec::with_capacity(lds);
        columns.push(lis);
        let mut prev = lis;
        for r in 1..lds {
            let cap = prev.min(envelope.columns().get(r).copied().unwrap_or(0));
            let mut s_min = cap;
            while s_min > 0 && self.decide(pi, r, s_min - 1)? {
                s_min -= 1;
            }
            debug_assert!(s_min >= 1, "(r, 0) must be non-coverable for r < lds");
            columns.push(s_min);
            prev = s_min;
        }
        Ok(Downset::new(columns).expect("boundary walk produces non-increasing heights"))
    }

    fn remember(&mut self, pi: &Permutation, r: usize, s: usize, coverable: bool) {
        if self.decisions.len() >= DECISION_CACHE_CAP {
            self.decisions.clear();
        }
        self.decisions.insert((pi.values().to_vec(), r, s), coverable);
    }

    /// Dilworth fast paths: `lds ≤ r` or `lis ≤ s` give a greedy cover; with
    /// one chain kind absent the same bounds decide NO as well.
    fn fast_path(&self, pi: &Permutation, r: usize, s: usize) -> Option<Decision> {
        if pi.is_empty() {
            return Some(Decision::Coverable(MonotoneCover::new(r, s, Vec::new())));
        }
        if pi.lds() <= r {
            return Some(Decision::Coverable(
                pi.chain_cover(Direction::Increasing).widened(r, s),
            ));
        }
        if pi.lis() <= s {
            return Some(Decision::Coverable(
                pi.chain_cover(Direction::Decreasing).widened(r, s),
            ));
        }
        if r == 0 || s == 0 {
            return Some(Decision::NotCoverable);
        }
        None
    }

    fn exhaustive(&mut self, pi: &Permutation, r: usize, s: usize) -> Result<Decision> {
        if pi.len() > MAX_SEARCH_LENGTH {
            return Err(Error::ResourceExhausted(format!(
                "cover search not attempted for length {} > {}",
                pi.len(),
                MAX_SEARCH_LENGTH
            )));
        }
        let deadline = self.limits.time_budget.map(|b| Instant::now() + b);
        let n = pi.len();
        let mut ctx = SearchContext {
            values: pi.values(),
            r,
            s,
            inc: vec![0; r],
            dec: vec![n as u32 + 1; s],
            assignment: Vec::with_capacity(n),
            failed: vec![HashSet::new(); n],
            pareto: vec![Vec::new(); n],
            stored: 0,
            budget: self.limits.memo_budget,
            deadline,
            nodes: 0,
        };
        let out = ctx.dfs(0);
        self.stats.nodes += ctx.nodes;
        match out {
            Step::Found => {
                let cover = MonotoneCover::new(r, s, ctx.assignment);
                debug_assert!(cover.validates(pi));
                Ok(Decision::Coverable(cover))
            }
            Step::Fail => Ok(Decision::NotCoverable),
            Step::Exhausted(e) => Err(e),
        }
    }
}

enum Step {
    Found,
    Fail,
    Exhausted(Error),
}

struct SearchContext<'a> {
    values: &'a [u32],
    r: usize,
    s: usize,
    /// Actual top per increasing chain slot; 0 marks an empty chain.
    inc: Vec<u32>,
    /// Actual top per decreasing chain slot; n+1 marks an empty chain.
    dec: Vec<u32>,
    assignment: Vec<ChainRef>,
    failed: Vec<HashSet<Box<[u32]>>>,
    pareto: Vec<Vec<Box<[u32]>>>,
    stored: usize,
    budget: usize,
    deadline: Option<Instant>,
    nodes: u64,
}

impl SearchContext<'_> {
    /// Canonical state: increasing tops sorted ascending, then decreasing
    /// tops sorted ascending.
    fn key(&self) -> Box<[u32]> {
        let mut key = Vec::with_capacity(self.r + self.s);
        key.extend_from_slice(&self.inc);
        key[..self.r].sort_unstable();
        key.extend_from_slice(&self.dec);
        key[self.r..].sort_unstable();
        key.into_boxed_slice()
    }

    /// `a` dominates `b` when every increasing top of `a` is ≤ the matching
    /// top of `b` and every decreasing top is ≥ (both sides sorted).
    fn dominates(&self, a: &[u32], b: &[u32]) -> bool {
        a[..self.r].iter().zip(&b[..self.r]).all(|(x, y)| x <= y)
            && a[self.r..].iter().zip(&b[self.r..]).all(|(x, y)| x >= y)
    }

    fn dfs(&mut self, pos: usize) -> Step {
        if pos == self.values.len() {
            return Step::Found;
        }
        self.nodes += 1;
        if self.nodes & 0x3ff == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Step::Exhausted(Error::ResourceExhausted(
                        "cover search hit its time budget".into(),
                    ));
                }
            }
        }
        let key = self.key();
        if self.failed[pos].contains(&key) {
            return Step::Fail;
        }
        if self.pareto[pos].iter().any(|f| self.dominates(f, &key)) {
            return Step::Fail;
        }

        let v = self.values[pos];
        // Increasing moves, tightest top first. Tops come from the sorted
        // key so duplicates are adjacent and tried once.
        let mut tried = u32::MAX;
        for idx in (0..self.r).rev() {
            let top = key[idx];
            if top >= v || top == tried {
                continue;
            }
            tried = top;
            let chain = self.inc.iter().position(|&t| t == top).unwrap();
            self.inc[chain] = v;
            self.assignment.push(ChainRef::Increasing(chain));
            match self.dfs(pos + 1) {
                Step::Fail => {}
                done => return done,
            }
            self.assignment.pop();
            self.inc[chain] = top;
        }
        let mut tried = 0u32;
        for idx in 0..self.s {
            let top = key[self.r + idx];
            if top <= v || top == tried {
                continue;
            }
            tried = top;
            let chain = self.dec.iter().position(|&t| t == top).unwrap();
            self.dec[chain] = v;
            self.assignment.push(ChainRef::Decreasing(chain));
            match self.dfs(pos + 1) {
                Step::Fail => {}
                done => return done,
            }
            self.assignment.pop();
            self.dec[chain] = top;
        }

        if let Err(e) = self.record_failure(pos, key) {
            return Step::Exhausted(e);
        }
        Step::Fail
    }

    fn record_failure(&mut self, pos: usize, key: Box<[u32]>) -> Result<()> {
        self.stored += 1;
        if self.stored > self.budget {
            return Err(Error::ResourceExhausted(format!(
                "cover search stored more than {} states",
                self.budget
            )));
        }
        let list = &mut self.pareto[pos];
        let before = list.len();
        let r = self.r;
        list.retain(|f| {
            !(key[..r].iter().zip(&f[..r]).all(|(x, y)| x <= y)
                && key[r..].iter().zip(&f[r..]).all(|(x, y)| x >= y))
        });
        if list.len() < before || list.len() < PARETO_CAP_PER_POSITION {
            list.push(key.clone());
        }
        self.failed[pos].insert(key);
        Ok(())
    }
}
