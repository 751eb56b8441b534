//! Power sums and congruence certificates bounding the number of independent
//! queens.
//!
//! Every bound here comes from the same idea. In a placement that meets a
//! bound with equality, each line family's labels run over all of `Z_n` (or
//! all but one value), so sums of powers of the labels are forced to equal
//! the power sums `S_p = Σ_{x=0}^{n-1} x^p`. Linear relations between the
//! families, like `(x+y)² + (x-y)² = 2x² + 2y²`, then give a congruence
//! between power sums that fails for the `n` in question.
//!
//! A [`Certificate`] stores the residues that witness the failed congruence.
//! [`check_certificate`] recomputes all of them from `(kind, n, d)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{reduce, Residue};
use crate::error::{Error, Result};
use crate::lines::{verify_by_maps, DiagonalMap, Placement, Point};

pub const MAX_POWER: u32 = 12;

/// `S_p(n) = Σ_{x=0}^{n-1} x^p`, exactly and modulo `n` (with `0^0 = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSum {
    pub n: u64,
    pub p: u32,
    pub value_exact: BigUint,
    pub value_mod_n: Residue,
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Signed Stirling numbers of the first kind: row `p` holds the coefficients
/// of the falling factorial `x(x-1)…(x-p+1)` in the monomial basis.
fn falling_factorial_coefficients(max_p: u32) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for p in 0..max_p as usize {
        let prev = &rows[p];
        let mut next = vec![BigInt::zero(); p + 2];
        for (j, c) in prev.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * BigInt::from(p);
        }
        rows.push(next);
    }
    rows
}

/// All `S_0 … S_max_p` for one `n`, via `Σ_x C(x, p) = C(n, p+1)` and
/// triangular elimination of the lower powers.
pub fn power_sums_upto(n: u64, max_p: u32) -> Result<Vec<BigUint>> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if max_p > MAX_POWER {
        return Err(Error::Precondition(format!(
            "power sums are supported up to exponent {MAX_POWER}"
        )));
    }
    let stirling = falling_factorial_coefficients(max_p);
    let mut sums: Vec<BigInt> = Vec::with_capacity(max_p as usize + 1);
    let mut factorial = BigInt::one();
    for p in 0..=max_p as usize {
        if p > 0 {
            factorial *= BigInt::from(p);
        }
        // Σ_x x^(p falling) = p! · C(n, p+1)
        let mut s = &factorial * binomial(n, p as u64 + 1);
        for (j, c) in stirling[p].iter().enumerate().take(p) {
            s -= c * &sums[j];
        }
        sums.push(s);
    }
    sums.into_iter()
        .map(|s| {
            s.to_biguint()
                .ok_or_else(|| Error::Internal("negative power sum".into()))
        })
        .collect()
}

pub fn power_sum(n: u64, p: u32) -> Result<PowerSum> {
    let value_exact = power_sums_upto(n, p)?.pop().expect("p + 1 sums");
    let reduced = (&value_exact % BigUint::from(n))
        .to_u64()
        .expect("residue fits below n");
    Ok(PowerSum {
        n,
        p,
        value_mod_n: Residue::new(reduced, n)?,
        value_exact,
    })
}

/// Bernoulli numbers `B_0 … B_m` with `B_1 = -1/2`.
fn bernoulli(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    b.push(BigRational::one());
    for k in 1..=m {
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(k as u64 + 1, j as u64)) * bj;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(k + 1)));
    }
    b
}

/// `S_p(n)` from the Bernoulli-number polynomial in `n`; an algebraic route
/// independent of [`power_sum`].
pub fn power_sum_closed_form(n: u64, p: u32) -> BigUint {
    let b = bernoulli(p as usize);
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut total = BigRational::zero();
    for (j, bj) in b.iter().enumerate() {
        let term = BigRational::from_integer(binomial(p as u64 + 1, j as u64))
            * bj
            * num_traits::pow(nn.clone(), p as usize + 1 - j);
        total += term;
    }
    total /= BigRational::from_integer(BigInt::from(p + 1));
    assert!(total.is_integer(), "power sum polynomial yields an integer");
    total
        .to_integer()
        .to_biguint()
        .expect("power sums are non-negative")
}

fn sums_mod(n: u64, max_p: u32) -> Result<Vec<u64>> {
    let m = BigUint::from(n);
    Ok(power_sums_upto(n, max_p)?
        .iter()
        .map(|s| (s % &m).to_u64().expect("below n"))
        .collect())
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

fn negmod(a: u64, n: u64) -> u64 {
    (n - a % n) % n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// `n` queens are impossible on `Z_n^2` (2 or 3 divides `n`).
    NoN,
    /// `n - 1` queens are impossible on `Z_n^2` (3 or 4 divides `n`).
    NoNMinusOne,
    /// `n^2` queens are impossible on `Z_n^3` (`gcd(n, 6) = 1`, `5 | n`, `25 ∤ n`).
    NoFullCube,
    /// The exact maximum on `Z_n^2`, fixed by the residue of `n` mod 12.
    ExactValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub name: String,
    pub value: u64,
    pub modulus: u64,
}

impl Evidence {
    fn new(name: &str, value: u64, modulus: u64) -> Self {
        Self {
            name: name.to_string(),
            value,
            modulus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub n: u64,
    pub d: usize,
    /// The maximum number of independent queens is at most this (exactly this for `ExactValue`).
    pub bound: u64,
    pub evidence: Vec<Evidence>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn evidence(&self, name: &str) -> Option<u64> {
        self.evidence
            .iter()
            .find(|e| e.name == name)
            .map(|e| e.value)
    }
}

fn full_plane_certificate(n: u64) -> Result<Option<Certificate>> {
    if n < 2 || (n % 2 != 0 && n % 3 != 0) {
        return Ok(None);
    }
    let s = sums_mod(n, 2)?;
    // n queens: x, y, x±y all run over Z_n, so S_1 ≡ 2·S_1 and 2·S_2 ≡ 4·S_2
    Ok(Some(Certificate {
        kind: CertificateKind::NoN,
        n,
        d: 2,
        bound: n - 1,
        evidence: vec![
            Evidence::new("S_1", s[1], n),
            Evidence::new("2*S_2", mulmod(2, s[2], n), n),
        ],
    }))
}

fn near_full_certificate(n: u64) -> Result<Option<Certificate>> {
    if n < 3 || (n % 3 != 0 && n % 4 != 0) {
        return Ok(None);
    }
    let s = sums_mod(n, 2)?;
    let a = s[1];
    let a2 = mulmod(a, a, n);
    let mut evidence = vec![
        Evidence::new("a_pm", a, n),
        Evidence::new("a_pm^2", a2, n),
        Evidence::new("S_2", s[2], n),
    ];
    if n % 2 == 1 {
        evidence.push(Evidence::new("2*S_2", mulmod(2, s[2], n), n));
        evidence.push(Evidence::new("-2*a_pm^2", negmod(mulmod(2, a2, n), n), n));
    } else {
        // squares of representatives agree modulo 2n, which halves the congruence
        evidence.push(Evidence::new("-a_pm^2", negmod(a2, n), n));
    }
    Ok(Some(Certificate {
        kind: CertificateKind::NoNMinusOne,
        n,
        d: 2,
        bound: n - 2,
        evidence,
    }))
}

/// Adds the one queen an independent `n - 1` placement on `Z_n^2` (odd `n`)
/// is missing: the absent column and row are `S_1 - Σx` and `S_1 - Σy`.
pub fn complete_placement(pl: &Placement) -> Result<Placement> {
    let n = pl.n();
    if pl.d() != 2 {
        return Err(Error::Precondition(format!(
            "completion works on planes, got d={}",
            pl.d()
        )));
    }
    if n % 2 == 0 {
        return Err(Error::Precondition(format!("completion needs odd n, got {n}")));
    }
    if pl.len() as u64 + 1 != n {
        return Err(Error::Precondition(format!(
            "completion needs {} queens, got {}",
            n - 1,
            pl.len()
        )));
    }
    if !verify_by_maps(pl).independent {
        return Err(Error::Precondition("input placement is not independent".into()));
    }
    let s1 = (n as u128 * (n as u128 - 1) / 2) as i128;
    let missing = |axis: usize| {
        let total: i128 = pl.queens().iter().map(|q| q.coords()[axis] as i128).sum();
        reduce(s1 - total, n)
    };
    let mut out = pl.clone();
    out.push(Point::new(n, vec![missing(0), missing(1)])?)
        .map_err(|e| Error::Internal(format!("completion cell is occupied: {e}")))?;
    if !verify_by_maps(&out).independent {
        return Err(Error::Internal(format!(
            "completed placement on Z_{n}^2 is not independent"
        )));
    }
    Ok(out)
}

/// Certificates ruling out `n` and `n - 1` queens on `Z_n^2`, weakest first.
pub fn impossibility_2d(n: u64) -> Result<Vec<Certificate>> {
    Ok([full_plane_certificate(n)?, near_full_certificate(n)?]
        .into_iter()
        .flatten()
        .collect())
}

pub fn cube_certificate_applies(n: u64) -> bool {
    n >= 5 && n.gcd(&6) == 1 && n % 5 == 0 && n % 25 != 0
}

/// Certificate that `n^2` queens cannot be placed on `Z_n^3`.
pub fn impossibility_3d(n: u64) -> Result<Option<Certificate>> {
    if !cube_certificate_applies(n) {
        return Ok(None);
    }
    let s = sums_mod(n, 8)?;
    let s4sq = mulmod(s[4], s[4], n);
    Ok(Some(Certificate {
        kind: CertificateKind::NoFullCube,
        n,
        d: 3,
        bound: n * n - 1,
        evidence: vec![
            Evidence::new("S_1", s[1], n),
            Evidence::new("S_2", s[2], n),
            Evidence::new("S_3", s[3], n),
            Evidence::new("S_4", s[4], n),
            Evidence::new("n/5", n / 5, n),
            Evidence::new("S_6*S_2", mulmod(s[6], s[2], n), n),
            Evidence::new("S_8*S_0", mulmod(s[8], s[0], n), n),
            Evidence::new("S_4^2", s4sq, n),
            Evidence::new("3*S_4^2", mulmod(3, s4sq, n), n),
        ],
    }))
}

/// Exact maximum number of independent queens on `Z_n^2`.
///
/// `n` when `gcd(n, 6) = 1`, `n - 1` when `n ≡ ±2 (mod 12)`, and `n - 2`
/// otherwise (every remaining residue class is divisible by 3 or 4).
pub fn known_max_2d(n: u64) -> Option<u64> {
    match n {
        0 => None,
        1 => Some(1),
        _ if n.gcd(&6) == 1 => Some(n),
        _ if matches!(n % 12, 2 | 10) => Some(n - 1),
        _ => Some(n - 2),
    }
}

pub fn exact_value_certificate(n: u64) -> Option<Certificate> {
    let bound = known_max_2d(n)?;
    Some(Certificate {
        kind: CertificateKind::ExactValue,
        n,
        d: 2,
        bound,
        evidence: vec![Evidence::new("n mod 12", n % 12, 12)],
    })
}

/// Best upper bound on independent queens on `Z_n^d` from slicing and the
/// certificates above.
pub fn upper_bound(n: u64, d: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if d == 0 {
        return Err(Error::Dimension { min: 1, got: 0 });
    }
    if d == 1 {
        return Ok(1);
    }
    let n128 = n as u128;
    let pow = |e: u32| {
        n128.checked_pow(e)
            .ok_or(Error::BoardTooLarge { n, d })
    };
    let plane = known_max_2d(n).expect("n >= 1") as u128;
    // fixing all but two coordinates leaves a copy of Z_n^2
    let mut best = pow(d as u32 - 1)?.min(pow(d as u32 - 2)? * plane);
    if d >= 3 && cube_certificate_applies(n) {
        best = best.min(pow(d as u32 - 3)? * (n128 * n128 - 1));
    }
    Ok(best)
}

fn recompute(kind: CertificateKind, n: u64, d: usize) -> Result<Option<Certificate>> {
    Ok(match (kind, d) {
        (CertificateKind::NoN, 2) => full_plane_certificate(n)?,
        (CertificateKind::NoNMinusOne, 2) => near_full_certificate(n)?,
        (CertificateKind::NoFullCube, 3) => impossibility_3d(n)?,
        (CertificateKind::ExactValue, 2) => exact_value_certificate(n),
        _ => None,
    })
}

/// Re-derives every evidence value from `(kind, n, d)` and confirms the
/// congruence it records is contradictory.
pub fn check_certificate(cert: &Certificate) -> Result<()> {
    let reject = |msg: String| Err(Error::Certificate(msg));
    let Some(fresh) = recompute(cert.kind, cert.n, cert.d)? else {
        return reject(format!(
            "{:?} does not apply to n={}, d={}",
            cert.kind, cert.n, cert.d
        ));
    };
    if fresh.bound != cert.bound {
        return reject(format!("bound {} should be {}", cert.bound, fresh.bound));
    }
    if fresh.evidence != cert.evidence {
        return reject("evidence values do not match recomputation".into());
    }
    let ev = |name: &str| {
        cert.evidence(name)
            .ok_or_else(|| Error::Certificate(format!("missing evidence {name}")))
    };
    let n = cert.n;
    let contradiction = match cert.kind {
        CertificateKind::NoN => ev("S_1")? != 0 || ev("2*S_2")? != 0,
        CertificateKind::NoNMinusOne => {
            if n % 2 == 1 {
                ev("2*S_2")? != ev("-2*a_pm^2")?
            } else {
                ev("S_2")? != ev("-a_pm^2")?
            }
        }
        CertificateKind::NoFullCube => {
            ev("S_1")? == 0
                && ev("S_2")? == 0
                && ev("S_3")? == 0
                && ev("S_6*S_2")? == 0
                && ev("S_8*S_0")? == 0
                && ev("S_4")? % ev("n/5")? == 0
                && ev("S_4^2")? != ev("3*S_4^2")?
        }
        CertificateKind::ExactValue => true,
    };
    if !contradiction {
        return reject(format!("{:?} evidence is not contradictory", cert.kind));
    }
    Ok(())
}

/// One forced moment congruence evaluated on a concrete placement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentCheck {
    pub family: String,
    pub exponents: Vec<u32>,
    pub observed: u64,
    pub expected: u64,
    pub modulus: u64,
    pub holds: bool,
}

/// Evaluates the moment sums that any `n^(d-1)`-queen placement must satisfy.
///
/// If the placement is full, each diagonal map is a bijection onto
/// `Z_n^(d-1)`, so `Σ Π u_k^{p_k}` over the queens' images equals
/// `Π S_{p_k}` modulo `n`. Each failing row is a family that cannot be a
/// bijection. Single components use exponents 1..=4; component pairs use
/// `(2,2)` and `(4,4)`.
pub fn moment_diagnostic(pl: &Placement) -> Result<Vec<MomentCheck>> {
    let n = pl.n();
    let d = pl.d();
    if d < 2 {
        return Ok(Vec::new());
    }
    let s = sums_mod(n, 8)?;
    let m = d - 1;
    let mut shapes: Vec<Vec<u32>> = Vec::new();
    for i in 0..m {
        for p in 1..=4 {
            let mut e = vec![0; m];
            e[i] = p;
            shapes.push(e);
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            for p in [2, 4] {
                let mut e = vec![0; m];
                e[i] = p;
                e[j] = p;
                shapes.push(e);
            }
        }
    }

    let mut out = Vec::new();
    for map in DiagonalMap::all(d) {
        let images: Vec<Vec<u64>> = pl
            .queens()
            .iter()
            .map(|q| map.project(q.coords(), n))
            .collect();
        for exps in &shapes {
            let observed = images.iter().fold(0u64, |acc, img| {
                let term = img.iter().zip(exps).fold(1 % n, |t, (&u, &p)| {
                    mulmod(t, Residue::new(u, n).expect("n > 0").pow(p).value(), n)
                });
                (acc + term) % n
            });
            let expected = exps
                .iter()
                .fold(1 % n, |acc, &p| mulmod(acc, s[p as usize], n));
            out.push(MomentCheck {
                family: map.to_string(),
                exponents: exps.clone(),
                observed,
                expected,
                modulus: n,
                holds: observed == expected,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(n: u64, p: u32) -> BigUint {
        (0..n).map(|x| BigUint::from(x).pow(p)).sum()
    }

    #[test]
    fn completion_restores_removed_queen() {
        let five = crate::constructions::construct_doubling(5).unwrap().placement;
        let gap = five.queens().iter().position(|q| q.coords() == [2, 4]).unwrap();
        let done = complete_placement(&five.without(gap)).unwrap();
        assert_eq!(done.len(), 5);
        assert_eq!(done.queens().last().unwrap().coords(), &[2, 4]);

        let seven = crate::constructions::construct_doubling(7).unwrap().placement;
        let done = complete_placement(&seven.without(0)).unwrap();
        assert_eq!(done.queens().last().unwrap().coords(), &[0, 0]);

        let ten = crate::constructions::construct_tripling(10).unwrap().placement;
        assert!(complete_placement(&ten).is_err());
    }

    #[test]
    fn power_sum_examples() {
        let s = power_sum(7, 1).unwrap();
        assert_eq!(s.value_exact, BigUint::from(21u32));
        assert_eq!(s.value_mod_n.value(), 0);

        let s = power_sum(5, 4).unwrap();
        assert_eq!(s.value_exact, BigUint::from(354u32));
        assert_eq!(s.value_mod_n.value(), 4);

        let s = power_sum(12, 2).unwrap();
        assert_eq!(s.value_exact, BigUint::from(506u32));
        assert_eq!(s.value_mod_n.value(), 2);

        for n in 1..20 {
            let s = power_sum(n, 0).unwrap();
            assert_eq!(s.value_exact, BigUint::from(n));
            assert_eq!(s.value_mod_n.value(), 0);
        }
    }

    #[test]
    fn routes_agree_on_small_grid() {
        for n in 1..60 {
            let all = power_sums_upto(n, MAX_POWER).unwrap();
            for p in 0..=MAX_POWER {
                assert_eq!(all[p as usize], direct(n, p), "n={n} p={p}");
                assert_eq!(power_sum_closed_form(n, p), direct(n, p), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn power_sum_rejects_large_exponent() {
        assert!(power_sum(5, 13).is_err());
        assert!(power_sum(0, 1).is_err());
    }

    #[test]
    fn twelve_has_both_2d_certificates() {
        let certs = impossibility_2d(12).unwrap();
        assert_eq!(certs.len(), 2);
        assert_eq!(certs[0].kind, CertificateKind::NoN);
        assert_eq!(certs[0].bound, 11);
        let c = &certs[1];
        assert_eq!(c.kind, CertificateKind::NoNMinusOne);
        assert_eq!(c.bound, 10);
        assert_eq!(c.evidence("a_pm"), Some(6));
        assert_eq!(c.evidence("a_pm^2"), Some(0));
        assert_eq!(c.evidence("S_2"), Some(2));
        for c in &certs {
            check_certificate(c).unwrap();
        }
    }

    #[test]
    fn nine_odd_multiple_of_three() {
        let certs = impossibility_2d(9).unwrap();
        let c = certs
            .iter()
            .find(|c| c.kind == CertificateKind::NoNMinusOne)
            .unwrap();
        assert_eq!(c.bound, 7);
        assert_eq!(c.evidence("a_pm"), Some(0));
        assert_eq!(c.evidence("2*S_2"), Some(3));
        assert_eq!(c.evidence("-2*a_pm^2"), Some(0));
        check_certificate(c).unwrap();
    }

    #[test]
    fn no_certificate_for_coprime_to_six() {
        assert!(impossibility_2d(25).unwrap().is_empty());
        assert!(impossibility_2d(7).unwrap().is_empty());
    }

    #[test]
    fn cube_certificates() {
        let c = impossibility_3d(5).unwrap().unwrap();
        assert_eq!(c.bound, 24);
        assert_eq!(c.evidence("S_4"), Some(4));
        assert_eq!(c.evidence("S_4^2"), Some(1));
        assert_eq!(c.evidence("3*S_4^2"), Some(3));
        check_certificate(&c).unwrap();

        let c = impossibility_3d(35).unwrap().unwrap();
        let s4 = c.evidence("S_4").unwrap();
        assert_eq!(s4 % 7, 0);
        assert_eq!(s4 % 5, 3);
        assert_eq!(c.bound, 1224);

        assert!(impossibility_3d(25).unwrap().is_none());
        assert!(impossibility_3d(15).unwrap().is_none());
        assert!(impossibility_3d(7).unwrap().is_none());
    }

    #[test]
    fn known_max_values() {
        assert_eq!(known_max_2d(25), Some(25));
        assert_eq!(known_max_2d(10), Some(9));
        assert_eq!(known_max_2d(12), Some(10));
        let small: Vec<u64> = (2..=12).map(|n| known_max_2d(n).unwrap()).collect();
        assert_eq!(small, vec![1, 1, 2, 5, 4, 7, 6, 7, 9, 11, 10]);
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_bound(11, 3).unwrap(), 121);
        assert_eq!(upper_bound(12, 3).unwrap(), 120);
        assert_eq!(upper_bound(5, 3).unwrap(), 24);
        assert_eq!(upper_bound(5, 4).unwrap(), 120);
        assert_eq!(upper_bound(12, 2).unwrap(), 10);
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let mut c = impossibility_2d(12).unwrap().pop().unwrap();
        c.bound = 9;
        assert!(check_certificate(&c).is_err());

        let mut c = impossibility_3d(5).unwrap().unwrap();
        c.evidence[3].value = 1;
        assert!(check_certificate(&c).is_err());

        let forged = Certificate {
            kind: CertificateKind::NoNMinusOne,
            n: 10,
            d: 2,
            bound: 8,
            evidence: vec![],
        };
        assert!(check_certificate(&forged).is_err());
    }

    #[test]
    fn certificate_json_shape() {
        let c = impossibility_3d(5).unwrap().unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(v["kind"], "no_full_cube");
        assert_eq!(v["n"], 5);
        assert_eq!(v["d"], 3);
        assert_eq!(v["bound"], 24);
        assert_eq!(v["evidence"][0]["name"], "S_1");
        assert_eq!(v["evidence"][0]["modulus"], 5);
        let back: Certificate = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn moment_diagnostic_on_full_plane() {
        let pl = Placement::from_coords(7, 2, (0..7).map(|t| vec![t, 2 * t % 7]).collect()).unwrap();
        let checks = moment_diagnostic(&pl).unwrap();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c.holds));

        let partial = pl.without(3);
        assert!(moment_diagnostic(&partial).unwrap().iter().any(|c| !c.holds));
    }
}
