//! Exact modular arithmetic, small-integer number theory and the canonical
//! move directions of a queen on `Z_n^d`.
//!
//! Everything here is integer-only. Products are formed in 128 bits before
//! reduction, so moduli up to `2^64 - 1` are safe.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Z_n`, always stored as its canonical representative in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            value: value % modulus,
            modulus,
        })
    }

    pub fn zero(modulus: u64) -> Result<Self> {
        Self::new(0, modulus)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u32) -> Self {
        let mut base = self;
        let mut acc = Residue {
            value: 1 % self.modulus,
            modulus: self.modulus,
        };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    #[inline]
    fn same_ring(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "residue arithmetic across different moduli"
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for Residue {
    type Output = Residue;

    fn add(self, rhs: Self) -> Self {
        self.same_ring(rhs);
        let sum = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        Residue {
            value: sum as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Self {
        let value = if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        };
        Residue {
            value,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;

    fn mul(self, rhs: Self) -> Self {
        self.same_ring(rhs);
        let prod = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Residue {
            value: prod as u64,
            modulus: self.modulus,
        }
    }
}

/// Reduces an arbitrary signed integer into `[0, n)`.
pub fn normalize(x: i128, n: u64) -> Result<Residue> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let r = x.rem_euclid(n as i128);
    Ok(Residue {
        value: r as u64,
        modulus: n,
    })
}

/// `x mod n` for signed `x`, without the wrapper type.
#[inline]
pub(crate) fn reduce(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// Combines `(remainder, modulus)` pairs with pairwise coprime moduli into the
/// unique `(value, M)` with `value` in `[0, M)` and `M` the product of moduli.
///
/// Each modulus must be below `2^63`; the product may use the full 128 bits.
pub fn crt_combine(pairs: &[(u128, u128)]) -> Result<(u128, u128)> {
    let mut value: u128 = 0;
    let mut combined: u128 = 1;
    for (i, &(rem, modulus)) in pairs.iter().enumerate() {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        if modulus >= 1 << 63 {
            return Err(Error::ModulusOverflow);
        }
        if combined.gcd(&modulus) != 1 {
            let clash = pairs[..i]
                .iter()
                .map(|&(_, m)| m)
                .find(|m| m.gcd(&modulus) != 1)
                .unwrap_or(combined);
            return Err(Error::NotCoprime(clash as u64, modulus as u64));
        }
        let next = combined
            .checked_mul(modulus)
            .ok_or(Error::ModulusOverflow)?;
        // value + combined·k ≡ rem (mod modulus)
        let inv = mod_inverse((combined % modulus) as u64, modulus as u64)
            .ok_or(Error::NotCoprime(combined as u64, modulus as u64))?;
        let gap = (rem % modulus + modulus - value % modulus) % modulus;
        let k = gap * inv as u128 % modulus;
        value += combined * k;
        combined = next;
    }
    Ok((value, combined))
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let ext = (a as i128).extended_gcd(&(m as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(m as i128) as u64)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Primes strictly below `bound`, ascending.
pub fn primes_below(bound: u64) -> Vec<u64> {
    (2..bound)
        .filter(|&p| (2..p).take_while(|q| q * q <= p).all(|q| p % q != 0))
        .collect()
}

/// Smallest prime divisor of `n`, or `None` for `n <= 1`.
pub fn smallest_prime_factor(n: u64) -> Option<u64> {
    if n <= 1 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return Some(p);
        }
        p += 1;
    }
    Some(n)
}

/// Exponent of the prime `p` in `n` (`n > 0`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n > 0 && p > 1);
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// Largest power `p^e` with `p^e < bound`, returned as `(p^e, e)`.
pub fn largest_power_below(p: u64, bound: u64) -> (u64, u32) {
    let mut q = 1u64;
    let mut e = 0;
    while q.saturating_mul(p) < bound {
        q *= p;
        e += 1;
    }
    (q, e)
}

/// `base^exp`, or `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// A family of parallel queen lines, given by a vector in `{-1,0,1}^d`.
///
/// The representative is canonical: its first nonzero entry is `+1`, so `ε`
/// and `-ε` (which describe the same lines) map to one value. Ordering is
/// lexicographic on the entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction {
    eps: Vec<i8>,
}

impl Direction {
    /// Builds a direction from any nonzero sign vector, canonicalizing its sign.
    pub fn new(mut eps: Vec<i8>) -> Result<Self> {
        if eps.iter().any(|e| !(-1..=1).contains(e)) {
            return Err(Error::Precondition(format!(
                "direction entries must lie in {{-1,0,1}}: {eps:?}"
            )));
        }
        let Some(&first) = eps.iter().find(|&&e| e != 0) else {
            return Err(Error::Precondition("direction must be nonzero".into()));
        };
        if first < 0 {
            eps.iter_mut().for_each(|e| *e = -*e);
        }
        Ok(Self { eps })
    }

    pub(crate) fn from_canonical(eps: Vec<i8>) -> Self {
        debug_assert_eq!(eps.iter().find(|&&e| e != 0), Some(&1));
        Self { eps }
    }

    pub fn eps(&self) -> &[i8] {
        &self.eps
    }

    pub fn dim(&self) -> usize {
        self.eps.len()
    }

    /// Zero-based index of the first nonzero entry.
    pub fn lead(&self) -> usize {
        self.eps
            .iter()
            .position(|&e| e != 0)
            .expect("direction is nonzero")
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.eps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All `(3^d - 1) / 2` canonical directions, sorted lexicographically.
pub fn enumerate_directions(d: usize) -> Vec<Direction> {
    let total = 3usize.pow(d as u32);
    let mut out = Vec::with_capacity((total - 1) / 2);
    let mut eps = vec![-1i8; d];
    for _ in 0..total {
        if eps.iter().find(|&&e| e != 0) == Some(&1) {
            out.push(Direction::from_canonical(eps.clone()));
        }
        // odometer over {-1,0,1}^d, last entry fastest: yields lexicographic order
        for e in eps.iter_mut().rev() {
            if *e < 1 {
                *e += 1;
                break;
            }
            *e = -1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(-13, 10).unwrap().value(), 7);
        assert_eq!(normalize(0, 5).unwrap().value(), 0);
        assert_eq!(normalize(354, 5).unwrap().value(), 4);
        assert_eq!(normalize(3, 0), Err(Error::ZeroModulus));
    }

    #[test]
    fn direction_counts_and_order() {
        let d1 = enumerate_directions(1);
        assert_eq!(d1, vec![Direction::new(vec![1]).unwrap()]);

        let d2: Vec<Vec<i8>> = enumerate_directions(2)
            .into_iter()
            .map(|d| d.eps().to_vec())
            .collect();
        assert_eq!(d2, vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);

        assert_eq!(enumerate_directions(3).len(), 13);
    }

    #[test]
    fn direction_canonical_sign() {
        let d = Direction::new(vec![0, -1, 1]).unwrap();
        assert_eq!(d.eps(), &[0, 1, -1]);
        assert_eq!(d.lead(), 1);
        assert!(Direction::new(vec![0, 0]).is_err());
        assert!(Direction::new(vec![2, 0]).is_err());
    }

    #[test]
    fn crt_examples() {
        assert_eq!(
            crt_combine(&[(0, 4), (0, 3), (0, 5), (0, 7)]).unwrap(),
            (0, 420)
        );
        assert_eq!(
            crt_combine(&[(1, 4), (0, 3), (0, 5), (0, 7)]).unwrap(),
            (105, 420)
        );
        assert_eq!(crt_combine(&[(3, 4), (2, 3)]).unwrap(), (11, 12));
        assert_eq!(crt_combine(&[]).unwrap(), (0, 1));
    }

    #[test]
    fn crt_rejects_shared_factor() {
        assert_eq!(
            crt_combine(&[(1, 4), (1, 3), (1, 6)]),
            Err(Error::NotCoprime(4, 6))
        );
    }

    #[test]
    fn prime_helpers() {
        assert_eq!(primes_below(8), vec![2, 3, 5, 7]);
        assert_eq!(primes_below(2), Vec::<u64>::new());
        assert_eq!(smallest_prime_factor(1), None);
        assert_eq!(smallest_prime_factor(91), Some(7));
        assert_eq!(smallest_prime_factor(97), Some(97));
        assert_eq!(largest_power_below(2, 8), (4, 2));
        assert_eq!(largest_power_below(3, 8), (3, 1));
        assert_eq!(largest_power_below(11, 8), (1, 0));
        assert_eq!(valuation(40, 2), 3);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
    }

    #[test]
    fn residue_ops() {
        let a = Residue::new(5, 7).unwrap();
        let b = Residue::new(4, 7).unwrap();
        assert_eq!((a + b).value(), 2);
        assert_eq!((a - b).value(), 1);
        assert_eq!((b - a).value(), 6);
        assert_eq!((a * b).value(), 6);
        assert_eq!((-a).value(), 2);
        assert_eq!(a.pow(6).value(), 1);
        assert_eq!(Residue::new(3, 1).unwrap().pow(0).value(), 0);
    }

    #[test]
    #[should_panic(expected = "different moduli")]
    fn residue_mixed_moduli_panics() {
        let _ = Residue::new(1, 5).unwrap() + Residue::new(1, 6).unwrap();
    }
}
