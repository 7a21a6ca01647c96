//! Backtracking enumeration of valid gluings of `n` squares.
//!
//! The search always branches on the lowest-indexed unmatched side and tries
//! every other unmatched side with both orientation bits. Partial matchings
//! are discarded as soon as a vertex class collects more than four corners,
//! or when too few corner classes remain for Euler characteristic 2. Leaves
//! are validated and deduplicated by canonical code.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{canonical_form, CanonicalCode};
use crate::dsu::RollbackSet;
use crate::surface::{validate, Gluing, Identification, SideRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOptions {
    /// Discard partial matchings with a vertex class of more than four corners.
    pub prune_corner_overflow: bool,
    /// Discard partial matchings that can no longer reach `n + 2` vertex classes.
    pub prune_euler: bool,
    /// Discard partial matchings containing a closed component of fewer than `n` squares.
    pub prune_disconnected: bool,
    /// Only glue an untouched square through its N side with `flip = false`, and
    /// only the lowest untouched one. Every connected gluing keeps a relabeled copy.
    pub fresh_square_symmetry: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            prune_corner_overflow: true,
            prune_euler: true,
            prune_disconnected: false,
            fresh_square_symmetry: true,
        }
    }
}

impl EnumerationOptions {
    /// Plain backtracking over all matchings and orientation bits.
    pub fn exhaustive() -> Self {
        Self {
            prune_corner_overflow: false,
            prune_euler: false,
            prune_disconnected: false,
            fresh_square_symmetry: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    pub nodes: u64,
    pub pruned: u64,
    pub leaves: u64,
    pub valid_leaves: u64,
}

impl EnumerationStats {
    fn absorb(&mut self, o: &EnumerationStats) {
        self.nodes += o.nodes;
        self.pruned += o.pruned;
        self.leaves += o.leaves;
        self.valid_leaves += o.valid_leaves;
    }
}

/// One branching decision: side `from` is glued to side `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Choice {
    pub from: usize,
    pub to: usize,
    pub flip: bool,
}

/// A subtree of the search: the node reached by `prefix`, optionally
/// restricted to candidates `slice.0..slice.1` at that node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationTask {
    pub n: usize,
    pub prefix: Vec<Choice>,
    pub slice: Option<(usize, usize)>,
    #[serde(default)]
    pub stats: EnumerationStats,
}

impl EnumerationTask {
    pub fn root(n: usize) -> Self {
        Self {
            n,
            prefix: Vec::new(),
            slice: None,
            stats: EnumerationStats::default(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("n must be at least 1")]
    ZeroSquares,
    #[error("node budget of {0} exhausted")]
    BudgetExceeded(u64),
    #[error("task prefix is not a consistent partial matching")]
    InconsistentPrefix,
}

/// Node budget shared by concurrently running tasks.
#[derive(Debug)]
pub struct Budget {
    limit: Option<u64>,
    used: AtomicU64,
    exhausted: AtomicBool,
}

impl Budget {
    pub fn new(limit: Option<u64>) -> Self {
        Self {
            limit,
            used: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(None)
    }

    pub fn used(&self) -> u64 {
        self.used.load(AtomicOrdering::Relaxed)
    }

    fn charge(&self) -> Result<(), EnumerateError> {
        let used = self.used.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        match self.limit {
            Some(limit) if used > limit || self.exhausted.load(AtomicOrdering::Relaxed) => {
                self.exhausted.store(true, AtomicOrdering::Relaxed);
                Err(EnumerateError::BudgetExceeded(limit))
            }
            _ => Ok(()),
        }
    }
}

/// Mutable search state over partial matchings.
struct Search {
    n: usize,
    opts: EnumerationOptions,
    mate: Vec<Option<(usize, bool)>>,
    corners: RollbackSet,
    squares: RollbackSet,
    touched: usize,
}

struct Applied {
    corner_mark: usize,
    square_mark: usize,
    touched: usize,
    from: usize,
    to: usize,
}

impl Search {
    fn new(n: usize, opts: EnumerationOptions) -> Self {
        Self {
            n,
            opts,
            mate: vec![None; 4 * n],
            corners: RollbackSet::new(4 * n),
            squares: RollbackSet::new(n),
            touched: 1,
        }
    }

    fn lowest_unmatched(&self) -> Option<usize> {
        self.mate.iter().position(Option::is_none)
    }

    /// Candidates at the current node, in the fixed search order.
    fn candidates(&self, s: usize) -> Vec<Choice> {
        let mut out = Vec::new();
        if self.opts.fresh_square_symmetry && s / 4 >= self.touched {
            // the touched squares are closed off: only disconnected completions remain
            return out;
        }
        for t in s + 1..4 * self.n {
            if self.mate[t].is_some() {
                continue;
            }
            if self.opts.fresh_square_symmetry && t / 4 >= self.touched {
                if t == 4 * self.touched {
                    out.push(Choice { from: s, to: t, flip: false });
                }
                continue;
            }
            for flip in [false, true] {
                out.push(Choice { from: s, to: t, flip });
            }
        }
        out
    }

    /// Applies a choice; returns the undo record and whether the node survives pruning.
    fn apply(&mut self, c: Choice) -> (Applied, bool) {
        let undo = Applied {
            corner_mark: self.corners.mark(),
            square_mark: self.squares.mark(),
            touched: self.touched,
            from: c.from,
            to: c.to,
        };
        self.mate[c.from] = Some((c.to, c.flip));
        self.mate[c.to] = Some((c.from, c.flip));
        if c.to / 4 >= self.touched {
            self.touched = c.to / 4 + 1;
        }
        let id = Identification::new(SideRef::from_index(c.from), SideRef::from_index(c.to), c.flip)
            .expect("search never glues a side to itself");
        let mut alive = true;
        for (a, b) in id.corner_links() {
            let root = self.corners.link(a, b);
            if self.opts.prune_corner_overflow && self.corners.size_of(root) > 4 {
                alive = false;
            }
        }
        if self.opts.prune_euler && self.corners.components() < self.n + 2 {
            alive = false;
        }
        let sq_root = self.squares.link(c.from / 4, c.to / 4);
        if self.opts.prune_disconnected {
            let size = self.squares.size_of(sq_root);
            if size < self.n && 2 * self.squares.links_of(sq_root) == 4 * size {
                alive = false;
            }
        }
        (undo, alive)
    }

    fn undo(&mut self, u: Applied) {
        self.mate[u.from] = None;
        self.mate[u.to] = None;
        self.touched = u.touched;
        self.corners.rollback(u.corner_mark);
        self.squares.rollback(u.square_mark);
    }

    fn leaf_gluing(&self) -> Gluing {
        let mates: Vec<(usize, bool)> = self.mate.iter().map(|m| m.expect("leaf is complete")).collect();
        Gluing::from_mates(self.n, &mates).expect("complete search state is a perfect matching")
    }

    /// Replays a prefix; returns false if the node is pruned along the way.
    fn replay(&mut self, prefix: &[Choice]) -> Result<bool, EnumerateError> {
        for &c in prefix {
            let s = self.lowest_unmatched().ok_or(EnumerateError::InconsistentPrefix)?;
            if c.from != s || !self.candidates(s).contains(&c) {
                return Err(EnumerateError::InconsistentPrefix);
            }
            let (_, alive) = self.apply(c);
            if !alive {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct Dfs<'a, F: FnMut(CanonicalCode, Gluing)> {
    budget: &'a Budget,
    stats: EnumerationStats,
    emit: F,
}

impl<F: FnMut(CanonicalCode, Gluing)> Dfs<'_, F> {
    fn visit(&mut self, st: &mut Search, slice: Option<(usize, usize)>) -> Result<(), EnumerateError> {
        self.budget.charge()?;
        self.stats.nodes += 1;
        let Some(s) = st.lowest_unmatched() else {
            self.stats.leaves += 1;
            let g = st.leaf_gluing();
            if validate(&g).valid {
                self.stats.valid_leaves += 1;
                let (code, form) = canonical_form(&g);
                (self.emit)(code, form);
            }
            return Ok(());
        };
        let cands = st.candidates(s);
        let (lo, hi) = slice.unwrap_or((0, cands.len()));
        for &c in &cands[lo.min(cands.len())..hi.min(cands.len())] {
            let (u, alive) = st.apply(c);
            if alive {
                let r = self.visit(st, None);
                if r.is_err() {
                    st.undo(u);
                    return r;
                }
            } else {
                self.stats.pruned += 1;
            }
            st.undo(u);
        }
        Ok(())
    }
}

/// Result of running one task to completion.
#[derive(Clone, Debug, Default)]
pub struct TaskOutcome {
    pub emitted: BTreeMap<CanonicalCode, Gluing>,
    pub stats: EnumerationStats,
}

pub fn run_task(
    task: &EnumerationTask,
    opts: EnumerationOptions,
    budget: &Budget,
) -> Result<TaskOutcome, EnumerateError> {
    if task.n == 0 {
        return Err(EnumerateError::ZeroSquares);
    }
    let mut st = Search::new(task.n, opts);
    let mut out = TaskOutcome::default();
    if !st.replay(&task.prefix)? {
        out.stats.pruned += 1;
        return Ok(out);
    }
    let mut emitted = BTreeMap::new();
    let mut dfs = Dfs {
        budget,
        stats: EnumerationStats::default(),
        emit: |code, g| {
            emitted.entry(code).or_insert(g);
        },
    };
    dfs.visit(&mut st, task.slice)?;
    out.stats = dfs.stats;
    out.emitted = emitted;
    Ok(out)
}

/// Candidate count at the task's node, or `None` if the node is a leaf or pruned.
fn frontier(task: &EnumerationTask, opts: EnumerationOptions) -> Option<Vec<Choice>> {
    let mut st = Search::new(task.n, opts);
    if !st.replay(&task.prefix).ok()? {
        return None;
    }
    let s = st.lowest_unmatched()?;
    let all = st.candidates(s);
    let (lo, hi) = task.slice.unwrap_or((0, all.len()));
    Some(all[lo.min(all.len())..hi.min(all.len())].to_vec())
}

/// Splits a task into at most `k` tasks whose subtrees partition its subtree.
pub fn split_task(task: &EnumerationTask, k: usize, opts: EnumerationOptions) -> Vec<EnumerationTask> {
    let mut tasks = vec![task.clone()];
    let k = k.max(1);
    'grow: while tasks.len() < k {
        for i in 0..tasks.len() {
            let t = &tasks[i];
            let Some(cands) = frontier(t, opts) else { continue };
            let offset = t.slice.map_or(0, |s| s.0);
            match cands.len() {
                0 => continue,
                1 => {
                    let mut prefix = t.prefix.clone();
                    prefix.push(cands[0]);
                    tasks[i] = EnumerationTask {
                        n: t.n,
                        prefix,
                        slice: None,
                        stats: EnumerationStats::default(),
                    };
                    continue 'grow;
                }
                len => {
                    let parts = len.min(k - tasks.len() + 1);
                    let pieces: Vec<EnumerationTask> = (0..parts)
                        .map(|p| {
                            let lo = offset + p * len / parts;
                            let hi = offset + (p + 1) * len / parts;
                            EnumerationTask {
                                n: t.n,
                                prefix: t.prefix.clone(),
                                slice: Some((lo, hi)),
                                stats: EnumerationStats::default(),
                            }
                        })
                        .collect();
                    tasks.splice(i..=i, pieces);
                    continue 'grow;
                }
            }
        }
        break;
    }
    tasks
}

/// All valid gluings of exactly `n` squares, keyed and sorted by canonical code.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    pub gluings: BTreeMap<CanonicalCode, Gluing>,
    pub stats: EnumerationStats,
}

impl Enumeration {
    pub fn into_gluings(self) -> Vec<Gluing> {
        self.gluings.into_values().collect()
    }
}

/// Runs `tasks` on the rayon pool and merges their emissions.
pub fn run_tasks(
    tasks: &[EnumerationTask],
    opts: EnumerationOptions,
    budget: &Budget,
) -> Vec<Result<TaskOutcome, EnumerateError>> {
    tasks.par_iter().map(|t| run_task(t, opts, budget)).collect()
}

pub fn enumerate_with(
    n: usize,
    opts: EnumerationOptions,
    parallel_tasks: usize,
    budget: &Budget,
) -> Result<Enumeration, EnumerateError> {
    if n == 0 {
        return Err(EnumerateError::ZeroSquares);
    }
    let tasks = split_task(&EnumerationTask::root(n), parallel_tasks.max(1), opts);
    let mut out = Enumeration::default();
    for r in run_tasks(&tasks, opts, budget) {
        let r = r?;
        out.stats.absorb(&r.stats);
        out.gluings.extend(r.emitted);
    }
    Ok(out)
}

/// Every valid gluing of exactly `n` squares, once per canonical code, in canonical form.
pub fn enumerate_gluings(n: usize) -> Result<Vec<Gluing>, EnumerateError> {
    let jobs = rayon::current_num_threads() * 4;
    Ok(enumerate_with(n, EnumerationOptions::default(), jobs, &Budget::unlimited())?.into_gluings())
}

/// Valid gluings of every size from 1 to `n`, ordered by size then canonical code.
pub fn enumerate_up_to(n: usize) -> Result<Vec<Gluing>, EnumerateError> {
    let mut out = Vec::new();
    for m in 1..=n {
        out.extend(enumerate_gluings(m)?);
    }
    Ok(out)
}

/// Draws a valid gluing by randomized depth-first search.
///
/// The distribution is not uniform over gluings; it is meant for spot checks
/// at sizes where full enumeration is slow.
pub fn sample_gluing<R: Rng>(n: usize, rng: &mut R) -> Option<Gluing> {
    fn go<R: Rng>(st: &mut Search, rng: &mut R, nodes: &mut u64) -> Option<Gluing> {
        *nodes += 1;
        if *nodes > 200_000 {
            return None;
        }
        let Some(s) = st.lowest_unmatched() else {
            let g = st.leaf_gluing();
            return validate(&g).valid.then_some(g);
        };
        let mut cands = st.candidates(s);
        cands.shuffle(rng);
        for c in cands {
            let (u, alive) = st.apply(c);
            let found = if alive { go(st, rng, nodes) } else { None };
            st.undo(u);
            if found.is_some() {
                return found;
            }
        }
        None
    }
    if n == 0 {
        return None;
    }
    for _ in 0..64 {
        let mut st = Search::new(n, EnumerationOptions::default());
        let mut nodes = 0;
        if let Some(g) = go(&mut st, rng, &mut nodes) {
            // scramble labels so samples are not biased toward the search's normal form
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let frames: Vec<_> = (0..n)
                .map(|_| crate::canonical::Dihedral::ALL[rng.gen_range(0..8)])
                .collect();
            return Some(crate::canonical::relabel(&g, &perm, &frames));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_code;
    use crate::surface::fixtures::*;
    use std::collections::BTreeSet;

    fn codes(n: usize, opts: EnumerationOptions) -> BTreeSet<CanonicalCode> {
        enumerate_with(n, opts, 1, &Budget::unlimited())
            .unwrap()
            .gluings
            .into_keys()
            .collect()
    }

    #[test]
    fn one_square_gluings() {
        let got = codes(1, EnumerationOptions::default());
        assert!(got.contains(&canonical_code(&diagonal_fold())));
        assert!(!got.contains(&canonical_code(&torus())));
    }

    #[test]
    fn pruning_loses_nothing_for_small_n() {
        for n in 1..=2 {
            let full = codes(n, EnumerationOptions::exhaustive());
            for opts in [
                EnumerationOptions::default(),
                EnumerationOptions { prune_disconnected: true, ..Default::default() },
                EnumerationOptions { fresh_square_symmetry: false, ..Default::default() },
            ] {
                assert_eq!(codes(n, opts), full, "n = {n}, {opts:?}");
            }
        }
    }

    #[test]
    fn split_identity_and_partition() {
        let opts = EnumerationOptions::exhaustive();
        let root = EnumerationTask::root(2);
        assert_eq!(split_task(&root, 1, opts), vec![root.clone()]);
        let parts = split_task(&root, 4, opts);
        assert_eq!(parts.len(), 4);
        let mut merged = BTreeSet::new();
        let mut leaves = 0;
        for p in &parts {
            let o = run_task(p, opts, &Budget::unlimited()).unwrap();
            leaves += o.stats.leaves;
            merged.extend(o.emitted.into_keys());
        }
        let whole = run_task(&root, opts, &Budget::unlimited()).unwrap();
        assert_eq!(leaves, whole.stats.leaves);
        assert_eq!(merged, whole.emitted.into_keys().collect());
    }

    #[test]
    fn budget_is_enforced() {
        let b = Budget::new(Some(10));
        assert_eq!(
            run_task(&EnumerationTask::root(3), EnumerationOptions::default(), &b).unwrap_err(),
            EnumerateError::BudgetExceeded(10)
        );
    }

    #[test]
    fn inconsistent_prefix_is_rejected() {
        let mut t = EnumerationTask::root(1);
        t.prefix.push(Choice { from: 2, to: 3, flip: false });
        assert_eq!(
            run_task(&t, EnumerationOptions::default(), &Budget::unlimited()).unwrap_err(),
            EnumerateError::InconsistentPrefix
        );
    }

    #[test]
    fn samples_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            let g = sample_gluing(n, &mut rng).expect("sampler finds a gluing");
            assert!(validate(&g).valid);
            assert_eq!(g.n(), n);
        }
    }
}
