//! Batch runs over ranges of `(n, d)`: build, verify, bound and optionally
//! solve each board, then report one row per board.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;
use torus_queens::certificates::upper_bound;
use torus_queens::lines::verify_by_maps;
use torus_queens::solver::{max_independent, SolveStatus, SolverConfig};

use crate::{construct, MethodChoice};

/// Boards with at most this many cells are handed to the solver when a
/// solver budget is given.
pub const SOLVER_MAX_CELLS: u64 = 4096;

pub const CSV_HEADER: &str = "n,d,method,count,deficit,verified,upper_bound,status,elapsed_ms";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("bad range {0:?}: use values like `7`, `2..100` (inclusive) or `5,7,11`")]
    Range(String),
    #[error("n={n}, d={d}")]
    Board {
        n: u64,
        d: usize,
        source: torus_queens::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses `7`, `2..100` (inclusive) or comma-separated mixtures of both.
pub fn parse_values(spec: &str) -> Result<Vec<u64>, SweepError> {
    let bad = || SweepError::Range(spec.to_string());
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u64 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub ns: Vec<u64>,
    pub ds: Vec<usize>,
    pub method: MethodChoice,
    /// Run the exact solver on small boards with this node budget.
    pub solver_nodes: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub d: usize,
    pub method: String,
    pub count: usize,
    pub deficit: u128,
    pub verified: bool,
    pub upper_bound: u128,
    /// Solver status, or `not_run`.
    pub status: String,
    pub elapsed_ms: f64,
    #[serde(skip)]
    pub solver_count: Option<usize>,
}

impl SweepRow {
    /// Whether the row contradicts a bound or failed verification.
    pub fn failed(&self) -> bool {
        let count = self.count as u128;
        let solver_short = self.status == SolveStatus::Optimal.as_str()
            && self.solver_count.is_some_and(|s| s < self.count || s as u128 > self.upper_bound);
        !self.verified || count > self.upper_bound || solver_short
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeficitPeak {
    /// `deficit / n^(d-2)`, the constant in `deficit ≤ C·n^(d-2)`.
    pub ratio: f64,
    pub n: u64,
    pub d: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Boards the chosen method does not apply to.
    pub skipped: Vec<(u64, usize)>,
    pub failures: usize,
    pub deficit_peak: Option<DeficitPeak>,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport, SweepError> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &d in &spec.ds {
        for &n in &spec.ns {
            match run_row(n, d, spec)? {
                Some(row) => rows.push(row),
                None => skipped.push((n, d)),
            }
        }
    }
    let failures = rows.iter().filter(|r| r.failed()).count();
    let deficit_peak = rows
        .iter()
        .filter(|r| r.n >= 2 && r.d >= 2)
        .map(|r| DeficitPeak {
            ratio: r.deficit as f64 / (r.n as f64).powi(r.d as i32 - 2),
            n: r.n,
            d: r.d,
        })
        .max_by(|a, b| a.ratio.total_cmp(&b.ratio));
    Ok(SweepReport {
        rows,
        skipped,
        failures,
        deficit_peak,
    })
}

fn run_row(n: u64, d: usize, spec: &SweepSpec) -> Result<Option<SweepRow>, SweepError> {
    let board = |source| SweepError::Board { n, d, source };
    let start = Instant::now();
    let built = match construct(n, d, spec.method) {
        Ok(res) => res,
        Err(torus_queens::Error::Precondition(_)) if spec.method != MethodChoice::Auto => {
            return Ok(None)
        }
        Err(e) => return Err(board(e)),
    };
    let verified = built.verified && verify_by_maps(&built.placement).independent;
    let bound = upper_bound(n, d).map_err(board)?;
    let mut status = "not_run".to_string();
    let mut solver_count = None;
    if let Some(nodes) = spec.solver_nodes {
        let small = n.checked_pow(d as u32).is_some_and(|c| c <= SOLVER_MAX_CELLS);
        if small {
            let res = max_independent(n, d, &SolverConfig::with_node_budget(nodes)).map_err(board)?;
            status = res.status.as_str().to_string();
            solver_count = Some(res.best_count);
        }
    }
    let elapsed_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    Ok(Some(SweepRow {
        n,
        d,
        method: built.method.label().to_string(),
        count: built.count(),
        deficit: built.deficit(),
        verified,
        upper_bound: bound,
        status,
        elapsed_ms,
        solver_count,
    }))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), SweepError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.d.to_string(),
            r.method.clone(),
            r.count.to_string(),
            r.deficit.to_string(),
            r.verified.to_string(),
            r.upper_bound.to_string(),
            r.status.clone(),
            format!("{:.3}", r.elapsed_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_values("7").unwrap(), vec![7]);
        assert_eq!(parse_values("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_values("2..=3, 9").unwrap(), vec![2, 3, 9]);
        assert!(parse_values("5..2").is_err());
        assert!(parse_values("x").is_err());
    }

    #[test]
    fn plane_sweep_meets_bounds() {
        let spec = SweepSpec {
            ns: (2..=30).collect(),
            ds: vec![2],
            method: MethodChoice::Auto,
            solver_nodes: None,
        };
        let report = run_sweep(&spec).unwrap();
        assert_eq!(report.rows.len(), 29);
        assert_eq!(report.failures, 0);
        for r in &report.rows {
            assert!(r.verified);
            assert_eq!(r.count as u128, r.upper_bound, "n={}", r.n);
        }
    }

    #[test]
    fn explicit_method_skips_inapplicable_boards() {
        let spec = SweepSpec {
            ns: vec![5, 6, 7],
            ds: vec![2],
            method: MethodChoice::Doubling,
            solver_nodes: None,
        };
        let report = run_sweep(&spec).unwrap();
        assert_eq!(report.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![5, 7]);
        assert_eq!(report.skipped, vec![(6, 2)]);
    }

    #[test]
    fn solver_column_on_small_boards() {
        let spec = SweepSpec {
            ns: vec![6, 9],
            ds: vec![2],
            method: MethodChoice::Auto,
            solver_nodes: Some(10_000_000),
        };
        let report = run_sweep(&spec).unwrap();
        assert!(report.rows.iter().all(|r| r.status == "optimal"));
        assert_eq!(report.failures, 0);
    }

    #[test]
    fn csv_header_is_fixed() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }
}
