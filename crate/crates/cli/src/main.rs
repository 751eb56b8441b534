use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{ArgAction, Parser, Subcommand};
use serde_json::json;
use torus_queens::certificates::{impossibility_2d, impossibility_3d, known_max_2d, upper_bound};
use torus_queens::lines::verify_by_maps;
use torus_queens::solver::{max_independent, search_target, Progress, SolveStatus, SolverConfig};
use torus_queens_cli::format::{encode, read_placement, Encoding};
use torus_queens_cli::render::{render, RenderFormat};
use torus_queens_cli::sweep::{parse_values, run_sweep, write_csv, SweepSpec};
use torus_queens_cli::{construct, default_threads, MethodChoice};

/// Independent queens on the torus Z_n^d: build, check, bound and search.
///
/// Exit codes: 0 success, 1 negative answer (conflicts found, target
/// refuted, sweep failure), 2 invalid input, 3 budget exhausted.
#[derive(Parser)]
#[command(name = "torus-queens", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a placement and write it as a placement file.
    Construct {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
        method: MethodChoice,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// File encoding; defaults to text for `.txt` paths, JSON otherwise.
        #[arg(long, value_enum)]
        encoding: Option<Encoding>,
    },
    /// Check a placement file for attacking pairs.
    Verify {
        path: PathBuf,
        /// Print every attacking pair with its shared direction.
        #[arg(long)]
        list_conflicts: bool,
    },
    /// Exact search for the maximum, or for a placement of a given size.
    Solve {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Look for this many queens instead of the maximum.
        #[arg(long)]
        target: Option<usize>,
        /// Stop after this many placements (reproducible budget).
        #[arg(long, alias = "budget")]
        budget_nodes: Option<u64>,
        /// Stop after this many seconds of wall-clock time.
        #[arg(long)]
        budget_secs: Option<f64>,
        /// Fix a queen at the origin (sound by translation invariance).
        #[arg(long, action = ArgAction::Set, default_value_t = true)]
        fix_origin: bool,
        /// Worker threads; defaults to $TORUS_QUEENS_THREADS or 1.
        #[arg(long)]
        threads: Option<usize>,
        /// Emit JSON progress lines on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Print impossibility certificates and the best upper bound.
    Certify {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Draw a placement file (x1 horizontal, origin bottom-left).
    Render {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = RenderFormat::Text)]
        format: RenderFormat,
        /// For d=3, draw only the slice with last coordinate k.
        #[arg(long)]
        slice: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build, verify and bound every board in a range.
    Sweep {
        /// Values of n: `7`, `2..100` (inclusive) or `5,7,11`.
        #[arg(long)]
        n: String,
        /// Values of d, same syntax.
        #[arg(long, default_value = "2")]
        d: String,
        #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
        method: MethodChoice,
        /// Also run the exact solver on small boards with this node budget.
        #[arg(long)]
        solver_nodes: Option<u64>,
        /// CSV report path; stdout when neither report path is given.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON report path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Exit {
    Success = 0,
    Negative = 1,
    Invalid = 2,
    Budget = 3,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Exit::Invalid as u8)
        }
    }
}

fn run(cmd: Command) -> Result<Exit> {
    match cmd {
        Command::Construct {
            n,
            d,
            method,
            out,
            encoding,
        } => cmd_construct(n, d, method, out.as_deref(), encoding),
        Command::Verify {
            path,
            list_conflicts,
        } => cmd_verify(&path, list_conflicts),
        Command::Solve {
            n,
            d,
            target,
            budget_nodes,
            budget_secs,
            fix_origin,
            threads,
            progress,
        } => {
            let time_budget = budget_secs
                .map(|s| Duration::try_from_secs_f64(s).context("--budget-secs must be a nonnegative number"))
                .transpose()?;
            let cfg = SolverConfig {
                node_budget: budget_nodes,
                time_budget,
                fix_origin,
                threads: threads.unwrap_or_else(default_threads).max(1),
                progress: progress.then(|| {
                    Arc::new(|p: &Progress| {
                        eprintln!(
                            "{}",
                            json!({"nodes": p.nodes, "depth": p.depth, "incumbent": p.incumbent})
                        );
                    }) as _
                }),
            };
            cmd_solve(n, d, target, &cfg)
        }
        Command::Certify { n, d } => cmd_certify(n, d),
        Command::Render {
            path,
            format,
            slice,
            out,
        } => {
            let pl = read_placement(&path)?;
            let drawing = render(&pl, format, slice)?;
            emit(out.as_deref(), &drawing)?;
            Ok(Exit::Success)
        }
        Command::Sweep {
            n,
            d,
            method,
            solver_nodes,
            csv,
            json,
        } => {
            let ds = parse_values(&d)?
                .into_iter()
                .map(|d| usize::try_from(d).context("dimension out of range"))
                .collect::<Result<_>>()?;
            let spec = SweepSpec {
                ns: parse_values(&n)?,
                ds,
                method,
                solver_nodes,
            };
            cmd_sweep(&spec, csv.as_deref(), json.as_deref())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_construct(
    n: u64,
    d: usize,
    method: MethodChoice,
    out: Option<&Path>,
    encoding: Option<Encoding>,
) -> Result<Exit> {
    let res = construct(n, d, method)?;
    let enc = encoding.unwrap_or_else(|| out.map_or(Encoding::Json, Encoding::for_path));
    emit(out, &encode(&res.placement, enc))?;
    let summary = format!(
        "method {}, {} queens on Z_{n}^{d}, {}",
        res.method,
        res.count(),
        if res.verified { "verified independent" } else { "NOT verified" }
    );
    // keep stdout clean when it carries the placement
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(Exit::Success)
}

fn cmd_verify(path: &Path, list_conflicts: bool) -> Result<Exit> {
    let pl = read_placement(path)?;
    let report = verify_by_maps(&pl);
    if report.independent {
        println!("independent: {} queens on Z_{}^{}", pl.len(), pl.n(), pl.d());
        return Ok(Exit::Success);
    }
    println!("not independent: {} attacking pairs", report.conflicts.len());
    if list_conflicts {
        let qs = pl.queens();
        for c in &report.conflicts {
            println!(
                "queen {} {} and queen {} {} share direction {}",
                c.first, qs[c.first], c.second, qs[c.second], c.direction
            );
        }
    }
    Ok(Exit::Negative)
}

fn cmd_solve(n: u64, d: usize, target: Option<usize>, cfg: &SolverConfig) -> Result<Exit> {
    let res = match target {
        Some(k) => search_target(n, d, k, cfg)?,
        None => max_independent(n, d, cfg)?,
    };
    let doc = json!({
        "n": res.n,
        "d": res.d,
        "target": res.target,
        "status": res.status.as_str(),
        "best_count": res.best_count,
        "nodes_explored": res.nodes_explored,
        "elapsed_ms": res.elapsed.as_secs_f64() * 1e3,
        "best": res.best.coords(),
    });
    println!("{doc}");
    Ok(match res.status {
        SolveStatus::Optimal | SolveStatus::Feasible => Exit::Success,
        SolveStatus::Infeasible => Exit::Negative,
        SolveStatus::LowerBoundOnly => Exit::Budget,
    })
}

fn cmd_certify(n: u64, d: usize) -> Result<Exit> {
    if n < 2 {
        anyhow::bail!("certificates need n ≥ 2, got {n}");
    }
    if d < 2 {
        anyhow::bail!("certificates need d ≥ 2, got {d}");
    }
    let mut certs = Vec::new();
    if d == 2 {
        certs = impossibility_2d(n)?;
    } else if d == 3 {
        certs.extend(impossibility_3d(n)?);
    }
    for cert in &certs {
        let doc: serde_json::Value = serde_json::from_str(&cert.to_json())?;
        println!("{doc}");
    }
    let none = if certs.is_empty() { "no impossibility certificate; " } else { "" };
    if d == 2 {
        let exact = known_max_2d(n).expect("n >= 2");
        println!("{none}exact value {exact}");
    } else {
        println!("{none}upper bound {}", upper_bound(n, d)?);
    }
    Ok(Exit::Success)
}

fn cmd_sweep(spec: &SweepSpec, csv: Option<&Path>, json_path: Option<&Path>) -> Result<Exit> {
    let report = run_sweep(spec)?;
    match csv {
        Some(path) => {
            let file = std::fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            write_csv(&report.rows, file)?;
        }
        None if json_path.is_none() => write_csv(&report.rows, std::io::stdout())?,
        None => {}
    }
    if let Some(path) = json_path {
        let text = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    eprintln!(
        "{} rows, {} skipped, {} failed",
        report.rows.len(),
        report.skipped.len(),
        report.failures
    );
    if let Some(peak) = &report.deficit_peak {
        eprintln!(
            "max deficit / n^(d-2) = {:.4} at n={} d={}",
            peak.ratio, peak.n, peak.d
        );
    }
    Ok(if report.failures == 0 { Exit::Success } else { Exit::Negative })
}
