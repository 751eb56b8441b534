//! Explicit independent placements and the dispatcher choosing the best one.
//!
//! Every public constructor re-verifies its output with [`verify_by_maps`]
//! before returning; a failed check is an [`Error::Internal`], never a
//! silently wrong placement.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{
    crt_combine, gcd, largest_power_below, primes_below, reduce, smallest_prime_factor,
};
use crate::error::{Error, Result};
use crate::lines::{verify_by_maps, LineIndex, Placement};
use crate::solver::{exists_independent, Decision, SolverConfig};

/// Largest number of candidates an enumerating construction will visit.
const MAX_CANDIDATES: u64 = 1 << 26;

/// Highest dimension the step-function construction supports.
pub const MAX_STEP_DIM: usize = 6;

/// Node budget for the small-board search fallback in two dimensions.
const FALLBACK_NODES: u64 = 50_000_000;

/// Largest `n` for which the two-dimensional search fallback is attempted.
pub const FALLBACK_MAX_N: u64 = 16;

/// Which construction produced a placement. Serialized with the short labels
/// used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// `(t, 2t)`, for `gcd(n, 6) = 1`.
    #[serde(rename = "lemma1")]
    Doubling,
    /// `(t, 3t)` with a shift on the upper half, for `n ≡ ±2 (mod 12)`.
    #[serde(rename = "lemma2")]
    Tripling,
    /// Four offset segments of `(t, 2t)`, for odd multiples of 3.
    #[serde(rename = "lemma3")]
    Segmented,
    /// `(t, 3t + c)` with piecewise-constant offsets `c`, for `n ≡ 0, ±4, 6 (mod 12)`.
    #[serde(rename = "offsets")]
    OffsetTripling,
    /// The linear recurrence family, when every prime factor of `n` is `≥ 2^d`.
    #[serde(rename = "thm3")]
    Recurrence,
    /// The recurrence perturbed by a step function, greedily filtered.
    #[serde(rename = "thm5")]
    StepPerturbed,
    #[serde(rename = "solver")]
    SolverFallback,
    #[serde(rename = "trivial")]
    Trivial,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Doubling => "lemma1",
            Method::Tripling => "lemma2",
            Method::Segmented => "lemma3",
            Method::OffsetTripling => "offsets",
            Method::Recurrence => "thm3",
            Method::StepPerturbed => "thm5",
            Method::SolverFallback => "solver",
            Method::Trivial => "trivial",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "lemma1" => Method::Doubling,
            "lemma2" => Method::Tripling,
            "lemma3" => Method::Segmented,
            "offsets" => Method::OffsetTripling,
            "thm3" => Method::Recurrence,
            "thm5" => Method::StepPerturbed,
            "solver" => Method::SolverFallback,
            "trivial" => Method::Trivial,
            _ => return None,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub placement: Placement,
    pub method: Method,
    pub claimed_count: usize,
    pub verified: bool,
}

impl ConstructionResult {
    pub fn count(&self) -> usize {
        self.placement.len()
    }

    /// `n^(d-1) - count`: how far the placement is from the trivial bound.
    pub fn deficit(&self) -> u128 {
        let full = (self.placement.n() as u128).pow(self.placement.d() as u32 - 1);
        full - self.count() as u128
    }
}

fn finish(placement: Placement, method: Method, claimed: usize) -> Result<ConstructionResult> {
    let report = verify_by_maps(&placement);
    if !report.independent {
        return Err(Error::Internal(format!(
            "{method} placement for n={} d={} has {} conflicts",
            placement.n(),
            placement.d(),
            report.conflicts.len()
        )));
    }
    if placement.len() != claimed {
        return Err(Error::Internal(format!(
            "{method} placement for n={} d={} has {} queens, expected {claimed}",
            placement.n(),
            placement.d(),
            placement.len()
        )));
    }
    Ok(ConstructionResult {
        placement,
        method,
        claimed_count: claimed,
        verified: true,
    })
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroModulus)
    } else {
        Ok(())
    }
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::Dimension { min: 2, got: d })
    } else {
        Ok(())
    }
}

fn plane(n: u64, cells: impl IntoIterator<Item = (u64, u64)>) -> Result<Placement> {
    Placement::from_coords(n, 2, cells.into_iter().map(|(x, y)| vec![x, y]).collect())
}

/// `n` queens at `(t, 2t)`.
pub fn construct_doubling(n: u64) -> Result<ConstructionResult> {
    check_n(n)?;
    if gcd(n, 6) != 1 {
        return Err(Error::Precondition(format!(
            "doubling needs gcd(n, 6) = 1, got n={n}"
        )));
    }
    let pl = plane(n, (0..n).map(|t| (t, 2 * t % n)))?;
    finish(pl, Method::Doubling, n as usize)
}

/// `n - 1` queens for `n = 2m ≡ ±2 (mod 12)`: `(t, 3t)` for `t < m`, then
/// `(t - 1, 3t)` for `m < t ≤ 2m - 1`.
pub fn construct_tripling(n: u64) -> Result<ConstructionResult> {
    check_n(n)?;
    if n % 12 != 2 && n % 12 != 10 {
        return Err(Error::Precondition(format!(
            "tripling needs n ≡ ±2 (mod 12), got n={n}"
        )));
    }
    let m = n / 2;
    let low = (0..m).map(|t| (t, 3 * t % n));
    let high = (m + 1..n).map(|t| (t - 1, 3 * t % n));
    let pl = plane(n, low.chain(high))?;
    finish(pl, Method::Tripling, n as usize - 1)
}

/// `n - 2` queens for `n = 6m + 3`: `(t, 2t - c)` with offset `c` equal to
/// 0, 1, 2, 1 on four consecutive segments of `t`.
pub fn construct_segmented(n: u64) -> Result<ConstructionResult> {
    check_n(n)?;
    if n % 6 != 3 {
        return Err(Error::Precondition(format!(
            "segmented construction needs n an odd multiple of 3, got n={n}"
        )));
    }
    let m = n / 6;
    let segments = [
        (0, 2 * m, 0),
        (2 * m + 2, 3 * m + 1, 1),
        (3 * m + 3, 5 * m + 2, 2),
        (5 * m + 3, 6 * m + 2, 1),
    ];
    let cells = segments
        .iter()
        .flat_map(|&(lo, hi, c)| (lo..=hi).map(move |t| (t, (2 * t + n - c) % n)));
    let pl = plane(n, cells)?;
    finish(pl, Method::Segmented, n as usize - 2)
}

/// `(length, offset)` runs of `t` for [`construct_offset_tripling`]; `None`
/// marks a skipped `t`.
fn offset_runs(n: u64) -> Option<Vec<(u64, Option<i64>)>> {
    let k = n / 12;
    let runs = match n % 12 {
        0 if n >= 12 => vec![
            (3 * k, Some(0)),
            (2 * k, Some(-1)),
            (k, Some(-2)),
            (3 * k - 1, Some(1)),
            (2 * k - 1, Some(2)),
            (1, None),
            (k, Some(3)),
            (1, None),
        ],
        4 => vec![
            (3 * k + 1, Some(0)),
            (k, Some(1)),
            (1, None),
            (3 * k + 1, Some(-1)),
            (2 * k, Some(1)),
            (1, None),
            (3 * k, Some(-2)),
        ],
        6 => vec![
            (2 * k + 1, Some(0)),
            (k + 1, Some(-1)),
            (k, Some(0)),
            (k, Some(1)),
            (k, Some(2)),
            (1, None),
            (2 * k, Some(1)),
            (k + 1, Some(2)),
            (k + 1, Some(1)),
            (k, Some(0)),
            (1, None),
            (k, Some(-1)),
        ],
        8 => vec![
            (3 * k + 2, Some(0)),
            (k + 1, Some(-1)),
            (3 * k + 1, Some(1)),
            (1, None),
            (2 * k + 1, Some(-1)),
            (3 * k + 1, Some(2)),
            (1, None),
        ],
        _ => return None,
    };
    Some(runs)
}

/// `n - 2` queens at `(t, 3t + c)` for `n ≡ 0, ±4, 6 (mod 12)`, with `c` constant
/// on consecutive runs of `t` and two values of `t` left out.
pub fn construct_offset_tripling(n: u64) -> Result<ConstructionResult> {
    check_n(n)?;
    let runs = offset_runs(n).ok_or_else(|| {
        Error::Precondition(format!(
            "offset tripling needs n ≡ 0, ±4, 6 (mod 12), got n={n}"
        ))
    })?;
    let mut cells = Vec::new();
    let mut t = 0u64;
    for (len, offset) in runs {
        for _ in 0..len {
            if let Some(c) = offset {
                cells.push((t, reduce(3 * t as i128 + c as i128, n)));
            }
            t += 1;
        }
    }
    debug_assert_eq!(t, n);
    let pl = plane(n, cells)?;
    finish(pl, Method::OffsetTripling, n as usize - 2)
}

/// Calls `f` on every `t ∈ Z_n^k` in lexicographic order.
fn for_each_param(n: u64, k: usize, mut f: impl FnMut(&[u64]) -> Result<()>) -> Result<()> {
    let total = n.checked_pow(k as u32).filter(|&c| c <= MAX_CANDIDATES);
    if total.is_none() {
        return Err(Error::BoardTooLarge { n, d: k + 1 });
    }
    let mut t = vec![0u64; k];
    loop {
        f(&t)?;
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// `(t_1, -2t_1 + t_2, …, -2t_(d-2) + t_(d-1), -2t_(d-1) + shift)` mod `n`.
fn recurrence_point(n: u64, t: &[u64], shift: u64) -> Vec<u64> {
    let k = t.len();
    let mut x = Vec::with_capacity(k + 1);
    x.push(t[0]);
    for i in 1..k {
        x.push((t[i] + 2 * (n - t[i - 1])) % n);
    }
    x.push((2 * (n - t[k - 1]) + shift % n) % n);
    x
}

/// `n^(d-1)` queens when every prime factor of `n` is at least `2^d`.
pub fn construct_recurrence(n: u64, d: usize) -> Result<ConstructionResult> {
    check_n(n)?;
    check_d(d)?;
    if d >= 64 {
        return Err(Error::DimensionTooLarge(d, 63));
    }
    if let Some(p) = smallest_prime_factor(n) {
        if p < 1 << d {
            return Err(Error::Precondition(format!(
                "recurrence construction needs every prime factor of n ≥ 2^{d}, but {p} | {n}"
            )));
        }
    }
    let mut cells = Vec::new();
    for_each_param(n, d - 1, |t| {
        cells.push(recurrence_point(n, t, 0));
        Ok(())
    })?;
    let claimed = cells.len();
    finish(Placement::from_coords(n, d, cells)?, Method::Recurrence, claimed)
}

/// One prime's contribution to the step function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeComponent {
    pub p: u64,
    /// Largest power of `p` below `2^d`.
    pub q: u64,
    /// Refinement levels; 0 when `p ∤ n`, which makes the component vanish.
    pub levels: u32,
}

impl PrimeComponent {
    /// Level `h` contributes `p^h · (Σ_i floor(t_i · p^(h+1) / n) mod p)`.
    fn eval(&self, n: u64, t: &[u64]) -> u64 {
        let mut value = 0u64;
        let mut weight = 1u64;
        let mut scale = self.p;
        for _ in 0..self.levels {
            let digit_sum: u64 = t
                .iter()
                .map(|&ti| (ti as u128 * scale as u128 / n as u128) as u64 % self.p)
                .sum();
            value += weight * (digit_sum % self.p);
            weight *= self.p;
            scale *= self.p;
        }
        value % self.q
    }
}

/// The perturbation added to the last coordinate of the recurrence family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepFunction {
    pub n: u64,
    pub d: usize,
    /// Product of the `q_p`.
    pub modulus: u128,
    pub components: Vec<PrimeComponent>,
}

impl StepFunction {
    /// `α(t)` in `[0, modulus)` for `t ∈ Z_n^(d-1)`.
    pub fn eval(&self, t: &[u64]) -> Result<u128> {
        let pairs: Vec<(u128, u128)> = self
            .components
            .iter()
            .map(|c| (c.eval(self.n, t) as u128, c.q as u128))
            .collect();
        Ok(crt_combine(&pairs)?.0)
    }

    /// `α(t) mod n`.
    pub fn eval_mod_n(&self, t: &[u64]) -> Result<u64> {
        Ok((self.eval(t)? % self.n as u128) as u64)
    }
}

/// Builds the step function for `(n, d)`: for each prime `p < 2^d` the
/// component labels the `q_p`-fold subdivision of `[0, n)` level by level
/// with chessboard sums of the parameters; primes not dividing `n` give zero.
pub fn build_alpha(n: u64, d: usize) -> Result<StepFunction> {
    if n < 2 {
        return Err(Error::Precondition(format!("step function needs n ≥ 2, got {n}")));
    }
    check_d(d)?;
    if d > MAX_STEP_DIM {
        return Err(Error::DimensionTooLarge(d, MAX_STEP_DIM));
    }
    let bound = 1u64 << d;
    let components: Vec<PrimeComponent> = primes_below(bound)
        .into_iter()
        .map(|p| {
            let (q, e) = largest_power_below(p, bound);
            let levels = if n % p == 0 { e } else { 0 };
            PrimeComponent { p, q, levels }
        })
        .collect();
    let modulus = components
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c.q as u128))
        .ok_or(Error::ModulusOverflow)?;
    Ok(StepFunction {
        n,
        d,
        modulus,
        components,
    })
}

/// Enumerates `F(t) = (t_1, -2t_1 + t_2, …, -2t_(d-1) + α(t))` in lexicographic
/// `t` order and keeps each candidate that shares no line with earlier ones.
pub fn construct_step_perturbed(n: u64, d: usize) -> Result<ConstructionResult> {
    check_n(n)?;
    check_d(d)?;
    if n == 1 {
        return trivial(d);
    }
    let alpha = build_alpha(n, d)?;
    let mut index = LineIndex::new(n, d)?;
    let mut cells = Vec::new();
    for_each_param(n, d - 1, |t| {
        let x = recurrence_point(n, t, alpha.eval_mod_n(t)?);
        if index.try_insert(&x) {
            cells.push(x);
        }
        Ok(())
    })?;
    let claimed = cells.len();
    finish(Placement::from_coords(n, d, cells)?, Method::StepPerturbed, claimed)
}

fn trivial(d: usize) -> Result<ConstructionResult> {
    let pl = Placement::from_coords(1, d, vec![vec![0; d]])?;
    finish(pl, Method::Trivial, 1)
}

/// The best placement this crate knows how to build for `(n, d)`.
pub fn best_construction(n: u64, d: usize) -> Result<ConstructionResult> {
    check_n(n)?;
    check_d(d)?;
    if n == 1 {
        return trivial(d);
    }
    if d == 2 {
        if gcd(n, 6) == 1 {
            return construct_doubling(n);
        }
        if n % 12 == 2 || n % 12 == 10 {
            return construct_tripling(n);
        }
        if n % 6 == 3 {
            return construct_segmented(n);
        }
        if n <= FALLBACK_MAX_N {
            if let Some(res) = search_fallback(n, n as usize - 2)? {
                return Ok(res);
            }
        }
        return construct_offset_tripling(n);
    }
    let recurrence_fits = d < 64
        && smallest_prime_factor(n).is_some_and(|p| p >= 1 << d);
    if recurrence_fits {
        construct_recurrence(n, d)
    } else {
        construct_step_perturbed(n, d)
    }
}

fn search_fallback(n: u64, target: usize) -> Result<Option<ConstructionResult>> {
    let cfg = SolverConfig::with_node_budget(FALLBACK_NODES);
    match exists_independent(n, 2, target, &cfg)? {
        Decision::Yes(pl) => finish(pl, Method::SolverFallback, target).map(Some),
        Decision::No | Decision::Unknown => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(res: &ConstructionResult) -> Vec<Vec<u64>> {
        res.placement.coords()
    }

    #[test]
    fn doubling_examples() {
        let r = construct_doubling(5).unwrap();
        assert_eq!(
            cells(&r),
            vec![vec![0, 0], vec![1, 2], vec![2, 4], vec![3, 1], vec![4, 3]]
        );
        assert_eq!(construct_doubling(1).unwrap().count(), 1);
        assert_eq!(construct_doubling(7).unwrap().count(), 7);
        assert!(construct_doubling(9).is_err());
        assert!(construct_doubling(0).is_err());
    }

    #[test]
    fn tripling_examples() {
        let r = construct_tripling(10).unwrap();
        let expect: Vec<Vec<u64>> = [(0, 0), (1, 3), (2, 6), (3, 9), (4, 2), (5, 8), (6, 1), (7, 4), (8, 7)]
            .iter()
            .map(|&(a, b)| vec![a, b])
            .collect();
        assert_eq!(cells(&r), expect);
        assert_eq!(construct_tripling(14).unwrap().count(), 13);
        assert_eq!(cells(&construct_tripling(2).unwrap()), vec![vec![0, 0]]);
        assert!(construct_tripling(12).is_err());
    }

    #[test]
    fn segmented_examples() {
        let r = construct_segmented(15).unwrap();
        let expect: Vec<Vec<u64>> = [
            (0, 0), (1, 2), (2, 4), (3, 6), (4, 8), (6, 11), (7, 13),
            (9, 1), (10, 3), (11, 5), (12, 7), (13, 10), (14, 12),
        ]
        .iter()
        .map(|&(a, b)| vec![a, b])
        .collect();
        assert_eq!(cells(&r), expect);
        assert_eq!(cells(&construct_segmented(3).unwrap()), vec![vec![0, 0]]);
        assert_eq!(construct_segmented(9).unwrap().count(), 7);
        assert!(construct_segmented(6).is_err());
    }

    #[test]
    fn offset_tripling_covers_remaining_classes() {
        for n in (4..=400).filter(|n| matches!(n % 12, 0 | 4 | 6 | 8)) {
            let r = construct_offset_tripling(n).unwrap();
            assert_eq!(r.count() as u64, n - 2, "n={n}");
        }
        assert_eq!(construct_offset_tripling(4).unwrap().placement.coords(), vec![vec![0, 0], vec![2, 1]]);
        assert!(construct_offset_tripling(10).is_err());
        assert!(construct_offset_tripling(9).is_err());
    }

    #[test]
    fn recurrence_examples() {
        let r = construct_recurrence(11, 3).unwrap();
        assert_eq!(r.count(), 121);
        assert_eq!(r.placement.queens()[0].coords(), &[0, 0, 0]);
        // t = (1, 0) is the twelfth parameter in lexicographic order
        assert_eq!(r.placement.queens()[11].coords(), &[1, 9, 0]);
        assert!(construct_recurrence(7, 3).is_err());
        assert!(construct_recurrence(11, 1).is_err());
    }

    #[test]
    fn alpha_shapes() {
        let a = build_alpha(11, 3).unwrap();
        assert_eq!(a.modulus, 420);
        assert!(a.components.iter().all(|c| c.levels == 0));
        assert_eq!(a.eval(&[3, 7]).unwrap(), 0);
        let a = build_alpha(10, 3).unwrap();
        assert_eq!(
            a.components.iter().map(|c| (c.p, c.q, c.levels)).collect::<Vec<_>>(),
            vec![(2, 4, 2), (3, 3, 0), (5, 5, 1), (7, 7, 0)]
        );
        assert!(build_alpha(10, 7).is_err());
        assert!(build_alpha(1, 3).is_err());
        // d = 6 needs the full 128-bit modulus
        assert!(build_alpha(30, 6).unwrap().modulus > u64::MAX as u128);
    }

    #[test]
    fn alpha_vanishes_on_coprime_primes() {
        let a = build_alpha(10, 3).unwrap();
        for t0 in 0..10 {
            for t1 in 0..10 {
                let v = a.eval(&[t0, t1]).unwrap();
                assert!(v < 420);
                assert_eq!(v % 3, 0);
                assert_eq!(v % 7, 0);
            }
        }
    }

    #[test]
    fn step_perturbed_examples() {
        let r = construct_step_perturbed(11, 3).unwrap();
        assert_eq!(r.count(), 121);
        assert_eq!(r.deficit(), 0);
        assert!(construct_step_perturbed(2, 2).unwrap().count() >= 1);
        let r = construct_step_perturbed(10, 3).unwrap();
        assert!(r.verified && r.count() > 0);
    }

    #[test]
    fn dispatch_examples() {
        let r = best_construction(25, 2).unwrap();
        assert_eq!((r.method, r.count()), (Method::Doubling, 25));
        let r = best_construction(12, 2).unwrap();
        assert_eq!((r.method, r.count()), (Method::SolverFallback, 10));
        let r = best_construction(11, 3).unwrap();
        assert_eq!((r.method, r.count()), (Method::Recurrence, 121));
        let r = best_construction(60, 2).unwrap();
        assert_eq!((r.method, r.count()), (Method::OffsetTripling, 58));
        let r = best_construction(1, 4).unwrap();
        assert_eq!((r.method, r.count()), (Method::Trivial, 1));
        assert!(best_construction(5, 1).is_err());
    }

    #[test]
    fn method_labels_round_trip() {
        for m in [
            Method::Doubling,
            Method::Tripling,
            Method::Segmented,
            Method::OffsetTripling,
            Method::Recurrence,
            Method::StepPerturbed,
            Method::SolverFallback,
            Method::Trivial,
        ] {
            assert_eq!(Method::from_label(m.label()), Some(m));
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.label()));
        }
    }
}
