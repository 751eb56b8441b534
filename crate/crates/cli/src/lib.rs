//! Support code for the `torus-queens` command: placement files, board
//! drawings and batch sweeps.

pub mod format;
pub mod render;
pub mod sweep;

use torus_queens::constructions::{
    best_construction, construct_doubling, construct_offset_tripling, construct_recurrence,
    construct_segmented, construct_step_perturbed, construct_tripling, ConstructionResult,
};
use torus_queens::{Error, Result};

/// Environment variable holding the default solver thread count.
pub const THREADS_ENV: &str = "TORUS_QUEENS_THREADS";

/// Construction requested on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodChoice {
    /// Best known construction for the board.
    Auto,
    /// (t, 2t); needs gcd(n, 6) = 1.
    #[value(name = "lemma1")]
    Doubling,
    /// (t, 3t) with a shifted upper half; needs n ≡ ±2 (mod 12).
    #[value(name = "lemma2")]
    Tripling,
    /// Four offset runs of (t, 2t); needs n an odd multiple of 3.
    #[value(name = "lemma3")]
    Segmented,
    /// (t, 3t + c) with offset runs; needs n ≡ 0, ±4, 6 (mod 12).
    #[value(name = "offsets")]
    OffsetTripling,
    /// Linear recurrence; needs every prime factor of n ≥ 2^d.
    #[value(name = "thm3")]
    Recurrence,
    /// Step-perturbed recurrence with a greedy filter; any n, d ≤ 6.
    #[value(name = "thm5")]
    StepPerturbed,
}

fn plane_only(d: usize, label: &str) -> Result<()> {
    if d == 2 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{label} builds two-dimensional placements only (d=2), got d={d}"
        )))
    }
}

impl MethodChoice {
    /// Command-line name of the method.
    pub fn label(self) -> &'static str {
        match self {
            MethodChoice::Auto => "auto",
            MethodChoice::Doubling => "lemma1",
            MethodChoice::Tripling => "lemma2",
            MethodChoice::Segmented => "lemma3",
            MethodChoice::OffsetTripling => "offsets",
            MethodChoice::Recurrence => "thm3",
            MethodChoice::StepPerturbed => "thm5",
        }
    }
}

/// Builds a placement, naming the command-line method in precondition errors.
pub fn construct(n: u64, d: usize, method: MethodChoice) -> Result<ConstructionResult> {
    let label = method.label();
    let built = match method {
        MethodChoice::Auto => best_construction(n, d),
        MethodChoice::Doubling => plane_only(d, label).and_then(|_| construct_doubling(n)),
        MethodChoice::Tripling => plane_only(d, label).and_then(|_| construct_tripling(n)),
        MethodChoice::Segmented => plane_only(d, label).and_then(|_| construct_segmented(n)),
        MethodChoice::OffsetTripling => plane_only(d, label).and_then(|_| construct_offset_tripling(n)),
        MethodChoice::Recurrence => construct_recurrence(n, d),
        MethodChoice::StepPerturbed => construct_step_perturbed(n, d),
    };
    built.map_err(|e| match e {
        Error::Precondition(msg) if !msg.starts_with(label) => Error::Precondition(format!("{label}: {msg}")),
        other => other,
    })
}

/// Thread count from [`THREADS_ENV`], defaulting to 1.
pub fn default_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or(1)
}
