//! Exact search for the maximum number of independent queens on `Z_n^d`.
//!
//! Cells are visited in lexicographic order with the first coordinate
//! outermost, so the board splits into `n` consecutive slices `x_1 = c`.
//! Each slice is a copy of `Z_n^(d-1)` and holds at most `cap` queens, where
//! `cap` is the exact optimum one dimension down (found by a recursive solve,
//! or `n^(d-2)` if that solve runs out of budget). The bound at cell `i` is
//!
//! ```text
//! placed + (cap - placed_in_slice(i)) + cap · (slices after slice(i))
//! ```
//!
//! which never increases along the cell order, so the scan over candidates
//! stops at the first cell where it falls short.
//!
//! A cell is admissible iff all `(3^d - 1) / 2` of its lines are free; line
//! occupancy is one bitset indexed by `family · n^(d-1) + key`.
//!
//! Translation invariance lets the search fix a queen at the origin. With
//! `threads > 1` the top-level branches run in parallel, sharing the
//! incumbent. Pruning against another thread's incumbent only cuts
//! branches that are strictly worse, and the lowest-index branch wins ties.
//! That keeps the returned witness identical to the sequential one whenever
//! the search completes.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::certificates::known_max_2d;
use crate::error::{Error, Result};
use crate::lines::{verify_by_maps, DiagonalMap, Placement};

const MAX_CELLS: u64 = 1 << 24;
const PROGRESS_EVERY: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    /// The search space was exhausted: nothing better than `best` exists.
    Optimal,
    /// A requested target was reached; `best` is a witness.
    Feasible,
    /// The budget ran out; `best` is only a lower bound.
    LowerBoundOnly,
    /// The search space was exhausted without reaching the requested target.
    Infeasible,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::LowerBoundOnly => "lower_bound_only",
            SolveStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progress {
    pub nodes: u64,
    pub depth: usize,
    pub incumbent: usize,
}

pub type ProgressSink = Arc<dyn Fn(&Progress) + Send + Sync>;

#[derive(Clone)]
pub struct SolverConfig {
    /// Maximum number of placements tried. The reproducible budget mode.
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Fix one queen at the origin (sound by translation invariance).
    pub fix_origin: bool,
    pub threads: usize,
    pub progress: Option<ProgressSink>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            node_budget: None,
            time_budget: None,
            fix_origin: true,
            threads: 1,
            progress: None,
        }
    }
}

impl SolverConfig {
    pub fn with_node_budget(nodes: u64) -> Self {
        Self {
            node_budget: Some(nodes),
            ..Self::default()
        }
    }
}

impl std::fmt::Debug for SolverConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverConfig")
            .field("node_budget", &self.node_budget)
            .field("time_budget", &self.time_budget)
            .field("fix_origin", &self.fix_origin)
            .field("threads", &self.threads)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub n: u64,
    pub d: usize,
    pub best: Placement,
    pub best_count: usize,
    pub status: SolveStatus,
    pub target: Option<usize>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub enum Decision {
    Yes(Placement),
    No,
    Unknown,
}

/// Cell geometry: the line ids of every cell, precomputed.
struct Board {
    n: u64,
    d: usize,
    per_slice: usize,
    ncells: usize,
    families: usize,
    lines: Vec<u32>,
    words: usize,
}

impl Board {
    fn new(n: u64, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Dimension { min: 2, got: d });
        }
        let ncells = n
            .checked_pow(d as u32)
            .filter(|&c| c <= MAX_CELLS)
            .ok_or(Error::BoardTooLarge { n, d })? as usize;
        let per_slice = ncells / n as usize;
        let maps = DiagonalMap::all(d);
        let families = maps.len();
        let mut lines = Vec::with_capacity(ncells * families);
        let mut coords = vec![0u64; d];
        for _ in 0..ncells {
            for (f, m) in maps.iter().enumerate() {
                lines.push((f * per_slice) as u32 + m.key(&coords, n) as u32);
            }
            for c in coords.iter_mut().rev() {
                *c += 1;
                if *c < n {
                    break;
                }
                *c = 0;
            }
        }
        let words = (families * per_slice).div_ceil(64);
        Ok(Self {
            n,
            d,
            per_slice,
            ncells,
            families,
            lines,
            words,
        })
    }

    fn cell_coords(&self, mut idx: usize) -> Vec<u64> {
        let mut coords = vec![0u64; self.d];
        for c in coords.iter_mut().rev() {
            *c = (idx % self.n as usize) as u64;
            idx /= self.n as usize;
        }
        coords
    }

    fn placement(&self, cells: &[u32]) -> Placement {
        Placement::from_coords(
            self.n,
            self.d,
            cells.iter().map(|&c| self.cell_coords(c as usize)).collect(),
        )
        .expect("cells are distinct and in range")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Flow {
    Continue,
    Found,
    Abort,
}

struct Shared {
    best: AtomicUsize,
    nodes: AtomicU64,
    aborted: AtomicBool,
    /// Lowest branch index that reached the target; higher branches may stop.
    found_branch: AtomicUsize,
}

struct Search<'a> {
    board: &'a Board,
    cap: usize,
    target: Option<usize>,
    occupied: Vec<u64>,
    in_slice: Vec<usize>,
    stack: Vec<u32>,
    best: Vec<u32>,
    nodes: u64,
    limits: Limits<'a>,
    shared: &'a Shared,
    branch: usize,
}

struct Limits<'a> {
    node_budget: Option<u64>,
    deadline: Option<Instant>,
    progress: Option<&'a ProgressSink>,
}

impl<'a> Search<'a> {
    fn new(
        board: &'a Board,
        cap: usize,
        target: Option<usize>,
        limits: Limits<'a>,
        shared: &'a Shared,
    ) -> Self {
        Self {
            board,
            cap,
            target,
            occupied: vec![0; board.words],
            in_slice: vec![0; board.n as usize],
            stack: Vec::new(),
            best: Vec::new(),
            nodes: 0,
            limits,
            shared,
            branch: 0,
        }
    }

    #[inline]
    fn cell_lines(&self, idx: usize) -> &[u32] {
        let f = self.board.families;
        &self.board.lines[idx * f..(idx + 1) * f]
    }

    #[inline]
    fn is_free(&self, idx: usize) -> bool {
        self.cell_lines(idx)
            .iter()
            .all(|&l| self.occupied[l as usize / 64] & (1 << (l % 64)) == 0)
    }

    fn toggle(&mut self, idx: usize) {
        let f = self.board.families;
        for k in 0..f {
            let l = self.board.lines[idx * f + k];
            self.occupied[l as usize / 64] ^= 1 << (l % 64);
        }
    }

    fn place(&mut self, idx: usize) {
        self.toggle(idx);
        self.in_slice[idx / self.board.per_slice] += 1;
        self.stack.push(idx as u32);
    }

    fn unplace(&mut self, idx: usize) {
        self.toggle(idx);
        self.in_slice[idx / self.board.per_slice] -= 1;
        self.stack.pop();
    }

    /// Smallest total a branch must still be able to reach.
    #[inline]
    fn need(&self) -> usize {
        match self.target {
            Some(k) => k,
            // ties with other branches survive so the lowest branch keeps its witness
            None => (self.best.len() + 1).max(self.shared.best.load(Ordering::Relaxed)),
        }
    }

    fn record(&mut self) {
        if self.stack.len() > self.best.len() {
            self.best = self.stack.clone();
            self.shared.best.fetch_max(self.best.len(), Ordering::Relaxed);
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        let total = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.limits.node_budget.is_some_and(|b| total > b) {
            self.shared.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        if total % 1024 == 0 {
            if self.shared.aborted.load(Ordering::Relaxed)
                || self.shared.found_branch.load(Ordering::Relaxed) < self.branch
            {
                return false;
            }
            if self.limits.deadline.is_some_and(|t| Instant::now() >= t) {
                self.shared.aborted.store(true, Ordering::Relaxed);
                return false;
            }
        }
        if total % PROGRESS_EVERY == 0 {
            if let Some(sink) = self.limits.progress {
                sink(&Progress {
                    nodes: total,
                    depth: self.stack.len(),
                    incumbent: self.shared.best.load(Ordering::Relaxed),
                });
            }
        }
        true
    }

    fn bound_at(&self, idx: usize) -> usize {
        let slices = self.board.n as usize;
        let s = idx / self.board.per_slice;
        self.stack.len() + (self.cap - self.in_slice[s]) + (slices - s - 1) * self.cap
    }

    fn dfs(&mut self, start: usize) -> Flow {
        self.record();
        if self.target.is_some_and(|k| self.stack.len() >= k) {
            return Flow::Found;
        }
        let per_slice = self.board.per_slice;
        let mut idx = start;
        while idx < self.board.ncells {
            if self.bound_at(idx) < self.need() {
                break;
            }
            let s = idx / per_slice;
            if self.in_slice[s] >= self.cap {
                idx = (s + 1) * per_slice;
                continue;
            }
            if self.is_free(idx) {
                if !self.tick() {
                    return Flow::Abort;
                }
                self.place(idx);
                let flow = self.dfs(idx + 1);
                self.unplace(idx);
                if flow != Flow::Continue {
                    return flow;
                }
            }
            idx += 1;
        }
        Flow::Continue
    }
}

struct Outcome {
    best: Vec<u32>,
    flow: Flow,
}

fn slice_capacity(n: u64, d: usize, cfg: &SolverConfig) -> Result<usize> {
    if d == 2 {
        // a slice x_1 = c lies on one line of direction (0, 1)
        return Ok(1);
    }
    let trivial = n.pow(d as u32 - 2) as usize;
    let sub = SolverConfig {
        progress: None,
        threads: 1,
        ..cfg.clone()
    };
    let lower = max_independent(n, d - 1, &sub)?;
    Ok(match lower.status {
        SolveStatus::Optimal => lower.best_count,
        _ => trivial,
    })
}

fn run(n: u64, d: usize, target: Option<usize>, cfg: &SolverConfig) -> Result<SolverResult> {
    let started = Instant::now();
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let board = Board::new(n, d)?;
    let cap = slice_capacity(n, d, cfg)?;
    let shared = Shared {
        best: AtomicUsize::new(0),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        found_branch: AtomicUsize::new(usize::MAX),
    };
    let limits = || Limits {
        node_budget: cfg.node_budget,
        deadline: cfg.time_budget.map(|t| started + t),
        progress: cfg.progress.as_ref(),
    };

    let outcome = if target == Some(0) {
        Outcome {
            best: Vec::new(),
            flow: Flow::Found,
        }
    } else {
        let mut root = Search::new(&board, cap, target, limits(), &shared);
        let start = if cfg.fix_origin {
            root.place(0);
            1
        } else {
            0
        };
        if cfg.threads <= 1 {
            let flow = root.dfs(start);
            Outcome {
                best: root.best,
                flow,
            }
        } else {
            run_parallel(&board, cap, target, cfg, root, start, &shared, limits)?
        }
    };

    let best = board.placement(&outcome.best);
    if !verify_by_maps(&best).independent {
        return Err(Error::Internal("solver produced a conflicting placement".into()));
    }
    let status = match (outcome.flow, target) {
        (Flow::Found, _) => SolveStatus::Feasible,
        (Flow::Abort, _) => SolveStatus::LowerBoundOnly,
        (Flow::Continue, None) => SolveStatus::Optimal,
        (Flow::Continue, Some(_)) => SolveStatus::Infeasible,
    };
    Ok(SolverResult {
        n,
        d,
        best_count: best.len(),
        best,
        status,
        target,
        nodes_explored: shared.nodes.load(Ordering::Relaxed),
        elapsed: started.elapsed(),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_parallel<'a>(
    board: &'a Board,
    cap: usize,
    target: Option<usize>,
    cfg: &SolverConfig,
    root: Search<'a>,
    start: usize,
    shared: &'a Shared,
    limits: impl Fn() -> Limits<'a> + Sync,
) -> Result<Outcome> {
    let mut root = root;
    root.record();
    if target.is_some_and(|k| root.stack.len() >= k) {
        return Ok(Outcome {
            best: root.best,
            flow: Flow::Found,
        });
    }
    let branches: Vec<usize> = (start..board.ncells)
        .filter(|&idx| root.is_free(idx))
        .collect();
    let base = root.stack.clone();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let results: Vec<Outcome> = pool.install(|| {
        branches
            .par_iter()
            .enumerate()
            .map(|(b, &idx)| {
                let mut s = Search::new(board, cap, target, limits(), shared);
                s.branch = b;
                for &c in &base {
                    s.place(c as usize);
                }
                s.record();
                if s.bound_at(idx) < s.need() || shared.found_branch.load(Ordering::Relaxed) < b {
                    return Outcome {
                        best: s.best,
                        flow: Flow::Continue,
                    };
                }
                if !s.tick() {
                    return Outcome {
                        best: s.best,
                        flow: Flow::Abort,
                    };
                }
                s.place(idx);
                let flow = s.dfs(idx + 1);
                if flow == Flow::Found {
                    shared.found_branch.fetch_min(b, Ordering::Relaxed);
                }
                Outcome { best: s.best, flow }
            })
            .collect()
    });

    let mut best = base;
    let mut flow = Flow::Continue;
    if let Some(found) = results.iter().position(|o| o.flow == Flow::Found) {
        // lower branches either finished without a witness or hit the budget
        return Ok(Outcome {
            best: results[found].best.clone(),
            flow: Flow::Found,
        });
    }
    for o in &results {
        if o.best.len() > best.len() {
            best = o.best.clone();
        }
        if o.flow == Flow::Abort {
            flow = Flow::Abort;
        }
    }
    Ok(Outcome { best, flow })
}

/// Largest independent placement on `Z_n^d`, exact when the budget allows.
pub fn max_independent(n: u64, d: usize, cfg: &SolverConfig) -> Result<SolverResult> {
    run(n, d, None, cfg)
}

/// Searches for `k` independent queens; the result's status is `Feasible`,
/// `Infeasible` or `LowerBoundOnly`.
pub fn search_target(n: u64, d: usize, k: usize, cfg: &SolverConfig) -> Result<SolverResult> {
    let total = n
        .checked_pow(d as u32 - 1)
        .ok_or(Error::BoardTooLarge { n, d })?;
    if k as u64 > total {
        return Err(Error::Precondition(format!(
            "target {k} exceeds the trivial bound {total}"
        )));
    }
    run(n, d, Some(k), cfg)
}

pub fn exists_independent(n: u64, d: usize, k: usize, cfg: &SolverConfig) -> Result<Decision> {
    let res = search_target(n, d, k, cfg)?;
    Ok(match res.status {
        SolveStatus::Feasible => Decision::Yes(res.best),
        SolveStatus::Infeasible => Decision::No,
        _ => Decision::Unknown,
    })
}

#[derive(Clone, Debug)]
pub struct ConfirmRow {
    pub n: u64,
    pub solver_count: usize,
    pub status: SolveStatus,
    pub expected: u64,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub n: u64,
    pub solver_count: usize,
    pub expected: u64,
    pub witness: Placement,
}

#[derive(Clone, Debug, Default)]
pub struct ConfirmReport {
    pub rows: Vec<ConfirmRow>,
    pub discrepancies: Vec<Discrepancy>,
    /// Sizes where the budget ran out before optimality was proven.
    pub unresolved: Vec<u64>,
}

/// Solves `Z_n^2` exactly for every `2 <= n <= n_max` and compares with the
/// classification in [`known_max_2d`].
pub fn confirm_certificates(n_max: u64, cfg: &SolverConfig) -> Result<ConfirmReport> {
    let mut report = ConfirmReport::default();
    for n in 2..=n_max {
        let res = max_independent(n, 2, cfg)?;
        let expected = known_max_2d(n).expect("n >= 2");
        if res.status != SolveStatus::Optimal {
            report.unresolved.push(n);
        } else if res.best_count as u64 != expected {
            report.discrepancies.push(Discrepancy {
                n,
                solver_count: res.best_count,
                expected,
                witness: res.best.clone(),
            });
        }
        report.rows.push(ConfirmRow {
            n,
            solver_count: res.best_count,
            status: res.status,
            expected,
            nodes: res.nodes_explored,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(n: u64, d: usize) -> SolverResult {
        max_independent(n, d, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn small_planes() {
        for (n, want) in [(2, 1), (3, 1), (4, 2), (5, 5), (6, 4), (7, 7)] {
            let r = exact(n, 2);
            assert_eq!(r.status, SolveStatus::Optimal, "n={n}");
            assert_eq!(r.best_count, want, "n={n}");
            assert!(verify_by_maps(&r.best).independent);
        }
    }

    #[test]
    fn nine_is_seven() {
        let r = exact(9, 2);
        assert_eq!((r.best_count, r.status), (7, SolveStatus::Optimal));
    }

    #[test]
    fn unit_board() {
        let r = exact(1, 2);
        assert_eq!(r.best_count, 1);
        assert_eq!(r.status, SolveStatus::Optimal);
    }

    #[test]
    fn decisions() {
        let cfg = SolverConfig::default();
        assert!(matches!(exists_independent(12, 2, 11, &cfg).unwrap(), Decision::No));
        match exists_independent(10, 2, 9, &cfg).unwrap() {
            Decision::Yes(w) => {
                assert_eq!(w.len(), 9);
                assert!(verify_by_maps(&w).independent);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        match exists_independent(7, 3, 0, &cfg).unwrap() {
            Decision::Yes(w) => assert!(w.is_empty()),
            other => panic!("{other:?}"),
        }
        assert!(exists_independent(4, 2, 5, &cfg).is_err());
    }

    #[test]
    fn node_budget_downgrades_status() {
        let r = max_independent(12, 2, &SolverConfig::with_node_budget(50)).unwrap();
        assert_eq!(r.status, SolveStatus::LowerBoundOnly);
        assert!(verify_by_maps(&r.best).independent);
        assert!(matches!(
            exists_independent(12, 2, 11, &SolverConfig::with_node_budget(50)).unwrap(),
            Decision::Unknown
        ));
    }

    #[test]
    fn fix_origin_does_not_change_optimum() {
        for n in 2..=8 {
            let fixed = exact(n, 2);
            let free = max_independent(
                n,
                2,
                &SolverConfig {
                    fix_origin: false,
                    ..SolverConfig::default()
                },
            )
            .unwrap();
            assert_eq!(fixed.best_count, free.best_count, "n={n}");
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for n in [6, 8, 9, 10] {
            let seq = exact(n, 2);
            let par = max_independent(
                n,
                2,
                &SolverConfig {
                    threads: 4,
                    ..SolverConfig::default()
                },
            )
            .unwrap();
            assert_eq!(seq.status, par.status);
            assert_eq!(seq.best, par.best, "n={n}");
        }
        let seq = search_target(10, 2, 9, &SolverConfig::default()).unwrap();
        let par = search_target(
            10,
            2,
            9,
            &SolverConfig {
                threads: 3,
                ..SolverConfig::default()
            },
        )
        .unwrap();
        assert_eq!(seq.best, par.best);
        assert_eq!(par.status, SolveStatus::Feasible);
    }

    #[test]
    fn small_cubes() {
        let r = exact(2, 3);
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!(r.best_count <= 2);
        let r = exact(3, 3);
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!(r.best_count as u128 <= crate::certificates::upper_bound(3, 3).unwrap());
    }

    #[test]
    fn confirm_small_sweep() {
        let report = confirm_certificates(9, &SolverConfig::default()).unwrap();
        assert!(report.discrepancies.is_empty());
        assert!(report.unresolved.is_empty());
        assert_eq!(report.rows.len(), 8);
    }
}
