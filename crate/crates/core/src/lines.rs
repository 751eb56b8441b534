//! Queen lines on `Z_n^d`: the conflict relation, the projections that label
//! lines, and two placement verifiers that must always agree.
//!
//! Every line parallel to a canonical direction `ε` with lead index `l` is a
//! fiber of the projection
//!
//! ```text
//! x ↦ (x_1, …, x_{l-1}, x_{l+1} + e_{l+1}·x_l, …, x_d + e_d·x_l),   e_j = -ε_j
//! ```
//!
//! so a queen set is independent exactly when each of the `(3^d - 1) / 2`
//! projections is injective on it. [`verify_by_maps`] checks that directly;
//! [`verify_pairwise`] tests every pair with [`conflict`] and serves as its
//! oracle.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{enumerate_directions, reduce, Direction, Residue};
use crate::error::{Error, Result};

/// A cell of `Z_n^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    n: u64,
    coords: Vec<u64>,
}

impl Point {
    pub fn new(n: u64, coords: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if coords.is_empty() {
            return Err(Error::Dimension { min: 1, got: 0 });
        }
        if let Some(&value) = coords.iter().find(|&&c| c >= n) {
            return Err(Error::CoordinateRange { value, n });
        }
        Ok(Self { n, coords })
    }

    /// Builds a point from signed coordinates, reducing each modulo `n`.
    pub fn from_signed(n: u64, coords: &[i64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        Self::new(n, coords.iter().map(|&c| reduce(c as i128, n)).collect())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> Residue {
        Residue::new(self.coords[i], self.n).expect("modulus is positive")
    }

    pub fn translate(&self, v: &[i64]) -> Point {
        assert_eq!(v.len(), self.dim());
        let coords = self
            .coords
            .iter()
            .zip(v)
            .map(|(&c, &s)| reduce(c as i128 + s as i128, self.n))
            .collect();
        Point { n: self.n, coords }
    }

    pub fn scale(&self, u: u64) -> Point {
        let coords = self
            .coords
            .iter()
            .map(|&c| (c as u128 * u as u128 % self.n as u128) as u64)
            .collect();
        Point { n: self.n, coords }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A duplicate-free set of queens on `Z_n^d`, kept in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    n: u64,
    d: usize,
    queens: Vec<Point>,
}

impl Placement {
    pub fn new(n: u64, d: usize, queens: Vec<Point>) -> Result<Self> {
        let empty = Self::empty(n, d)?;
        let mut seen = HashSet::with_capacity(queens.len());
        for q in &queens {
            if q.n != n || q.dim() != d {
                return Err(Error::BoardMismatch(n, d, q.n, q.dim()));
            }
            if !seen.insert(q.coords()) {
                return Err(Error::DuplicateQueen(q.coords.clone()));
            }
        }
        Ok(Self { queens, ..empty })
    }

    pub fn from_coords(n: u64, d: usize, coords: Vec<Vec<u64>>) -> Result<Self> {
        let queens = coords
            .into_iter()
            .map(|c| {
                if c.len() != d {
                    return Err(Error::CoordinateCount {
                        expected: d,
                        got: c.len(),
                    });
                }
                Point::new(n, c)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, d, queens)
    }

    pub fn empty(n: u64, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if d == 0 {
            return Err(Error::Dimension { min: 1, got: 0 });
        }
        // line keys are mixed-radix integers below n^(d-1)
        if (n as u128).checked_pow(d as u32 - 1).is_none() {
            return Err(Error::BoardTooLarge { n, d });
        }
        Ok(Self {
            n,
            d,
            queens: Vec::new(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.queens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queens.is_empty()
    }

    pub fn queens(&self) -> &[Point] {
        &self.queens
    }

    pub fn coords(&self) -> Vec<Vec<u64>> {
        self.queens.iter().map(|q| q.coords.clone()).collect()
    }

    /// A copy with the queen at `index` removed.
    pub fn without(&self, index: usize) -> Placement {
        let mut queens = self.queens.clone();
        queens.remove(index);
        Placement { queens, ..*self }
    }

    pub fn push(&mut self, q: Point) -> Result<()> {
        if q.n != self.n || q.dim() != self.d {
            return Err(Error::BoardMismatch(self.n, self.d, q.n, q.dim()));
        }
        if self.queens.contains(&q) {
            return Err(Error::DuplicateQueen(q.coords));
        }
        self.queens.push(q);
        Ok(())
    }

    pub fn translate(&self, v: &[i64]) -> Placement {
        Placement {
            queens: self.queens.iter().map(|q| q.translate(v)).collect(),
            ..*self
        }
    }

    /// Multiplies every coordinate by `u`. Only a bijection when `gcd(u, n) = 1`.
    pub fn scale(&self, u: u64) -> Result<Placement> {
        Placement::new(
            self.n,
            self.d,
            self.queens.iter().map(|q| q.scale(u)).collect(),
        )
    }
}

/// The projection `Z_n^d → Z_n^(d-1)` whose fibers are the lines of one
/// direction family. `lead` is zero-based; `e` holds `e_{lead+1}, …, e_{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiagonalMap {
    lead: usize,
    e: Vec<i8>,
}

impl DiagonalMap {
    pub fn new(d: usize, lead: usize, e: Vec<i8>) -> Result<Self> {
        if lead >= d || e.len() != d - lead - 1 {
            return Err(Error::Precondition(format!(
                "diagonal map for d={d} needs lead < d and {} multipliers",
                d.saturating_sub(lead + 1)
            )));
        }
        if e.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(Error::Precondition(
                "diagonal map multipliers must lie in {-1,0,1}".into(),
            ));
        }
        Ok(Self { lead, e })
    }

    /// The family of lines parallel to `dir`.
    pub fn from_direction(dir: &Direction) -> Self {
        let lead = dir.lead();
        let e = dir.eps()[lead + 1..].iter().map(|&v| -v).collect();
        Self { lead, e }
    }

    /// All maps for dimension `d`, in the lexicographic order of their directions.
    pub fn all(d: usize) -> Vec<DiagonalMap> {
        enumerate_directions(d)
            .iter()
            .map(DiagonalMap::from_direction)
            .collect()
    }

    pub fn lead(&self) -> usize {
        self.lead
    }

    pub fn multipliers(&self) -> &[i8] {
        &self.e
    }

    pub fn dim(&self) -> usize {
        self.lead + 1 + self.e.len()
    }

    pub fn direction(&self) -> Direction {
        let mut eps = vec![0i8; self.lead];
        eps.push(1);
        eps.extend(self.e.iter().map(|&v| -v));
        Direction::new(eps).expect("lead entry is +1")
    }

    /// Image of raw coordinates (all in `[0, n)`).
    pub fn project(&self, coords: &[u64], n: u64) -> Vec<u64> {
        debug_assert_eq!(coords.len(), self.dim());
        let lead_val = coords[self.lead] as i128;
        let mut out = Vec::with_capacity(coords.len() - 1);
        out.extend_from_slice(&coords[..self.lead]);
        out.extend(
            coords[self.lead + 1..]
                .iter()
                .zip(&self.e)
                .map(|(&x, &e)| reduce(x as i128 + e as i128 * lead_val, n)),
        );
        out
    }

    /// The image packed into one integer in `[0, n^(d-1))`.
    #[inline]
    pub fn key(&self, coords: &[u64], n: u64) -> u128 {
        let lead_val = coords[self.lead] as i128;
        let n128 = n as u128;
        let mut key = 0u128;
        for &x in &coords[..self.lead] {
            key = key * n128 + x as u128;
        }
        for (&x, &e) in coords[self.lead + 1..].iter().zip(&self.e) {
            key = key * n128 + reduce(x as i128 + e as i128 * lead_val, n) as u128;
        }
        key
    }
}

impl fmt::Display for DiagonalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.direction())
    }
}

pub fn apply_diagonal_map(m: &DiagonalMap, p: &Point) -> Vec<Residue> {
    m.project(p.coords(), p.n())
        .into_iter()
        .map(|v| Residue::new(v, p.n()).expect("modulus is positive"))
        .collect()
}

fn check_same_board(p: &Point, q: &Point) -> Result<()> {
    if p.n != q.n || p.dim() != q.dim() {
        return Err(Error::BoardMismatch(p.n, p.dim(), q.n, q.dim()));
    }
    Ok(())
}

/// Every canonical direction whose lines contain both `p` and `q`, ascending.
///
/// More than one direction is possible only for even `n`, when some
/// displacement component equals `n/2` (then `+δ` and `-δ` coincide).
pub fn conflict_directions(p: &Point, q: &Point) -> Result<Vec<Direction>> {
    check_same_board(p, q)?;
    let n = p.n;
    let diff: Vec<u64> = p
        .coords
        .iter()
        .zip(&q.coords)
        .map(|(&a, &b)| reduce(b as i128 - a as i128, n))
        .collect();
    let Some(lead) = diff.iter().position(|&c| c != 0) else {
        return Ok(Vec::new());
    };
    let delta = diff[lead];
    let neg_delta = n - delta;

    let mut options: Vec<Vec<i8>> = Vec::with_capacity(diff.len());
    for (j, &c) in diff.iter().enumerate() {
        let opts = if j < lead {
            vec![0]
        } else if j == lead {
            vec![1]
        } else if c == 0 {
            vec![0]
        } else {
            let mut o = Vec::with_capacity(2);
            if c == neg_delta {
                o.push(-1);
            }
            if c == delta {
                o.push(1);
            }
            if o.is_empty() {
                return Ok(Vec::new());
            }
            o
        };
        options.push(opts);
    }

    let mut out: Vec<Vec<i8>> = vec![Vec::with_capacity(diff.len())];
    for opts in &options {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&o| {
                    let mut next = prefix.clone();
                    next.push(o);
                    next
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(Direction::from_canonical).collect())
}

/// The direction of the line through `p` and `q`, if they attack each other.
///
/// When several families contain the pair (possible for even `n`), the
/// lexicographically largest direction is returned, which makes the result
/// symmetric in `p` and `q`.
pub fn conflict(p: &Point, q: &Point) -> Result<Option<Direction>> {
    Ok(conflict_directions(p, q)?.pop())
}

/// One attacking pair: indices into the placement (`first < second`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Conflict {
    pub first: usize,
    pub second: usize,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub independent: bool,
    /// Sorted by `(first, second)`; one entry per attacking pair.
    pub conflicts: Vec<Conflict>,
    /// Number of attacking pairs sharing a line of each family; every family is present.
    pub per_family_collisions: BTreeMap<DiagonalMap, usize>,
}

impl VerifyReport {
    fn from_parts(
        d: usize,
        mut conflicts: Vec<Conflict>,
        collisions: impl IntoIterator<Item = (DiagonalMap, usize)>,
    ) -> Self {
        let mut per_family: BTreeMap<DiagonalMap, usize> =
            DiagonalMap::all(d).into_iter().map(|m| (m, 0)).collect();
        for (m, c) in collisions {
            *per_family.entry(m).or_default() += c;
        }
        conflicts.sort();
        Self {
            independent: conflicts.is_empty(),
            conflicts,
            per_family_collisions: per_family,
        }
    }
}

/// Quadratic oracle: tests every pair with [`conflict_directions`].
pub fn verify_pairwise(pl: &Placement) -> VerifyReport {
    let mut conflicts = Vec::new();
    let mut collisions: BTreeMap<DiagonalMap, usize> = BTreeMap::new();
    let qs = pl.queens();
    for i in 0..qs.len() {
        for j in i + 1..qs.len() {
            let dirs = conflict_directions(&qs[i], &qs[j]).expect("placement shares one board");
            for dir in &dirs {
                *collisions.entry(DiagonalMap::from_direction(dir)).or_default() += 1;
            }
            if let Some(direction) = dirs.into_iter().next_back() {
                conflicts.push(Conflict {
                    first: i,
                    second: j,
                    direction,
                });
            }
        }
    }
    VerifyReport::from_parts(pl.d(), conflicts, collisions)
}

/// Near-linear verifier: projects every queen through each diagonal map and
/// reports equal images as conflicts. Families are checked in parallel; the
/// report does not depend on scheduling.
pub fn verify_by_maps(pl: &Placement) -> VerifyReport {
    let n = pl.n();
    let maps = DiagonalMap::all(pl.d());
    let per_family: Vec<(DiagonalMap, Vec<(usize, usize)>)> = maps
        .into_par_iter()
        .map(|m| {
            let mut keyed: Vec<(u128, usize)> = pl
                .queens()
                .iter()
                .enumerate()
                .map(|(i, q)| (m.key(q.coords(), n), i))
                .collect();
            keyed.sort_unstable();
            let mut pairs = Vec::new();
            for group in keyed.chunk_by(|a, b| a.0 == b.0) {
                for (a, &(_, i)) in group.iter().enumerate() {
                    for &(_, j) in &group[a + 1..] {
                        pairs.push((i.min(j), i.max(j)));
                    }
                }
            }
            (m, pairs)
        })
        .collect();

    let mut by_pair: BTreeMap<(usize, usize), Direction> = BTreeMap::new();
    let mut collisions = Vec::with_capacity(per_family.len());
    for (m, pairs) in per_family {
        let dir = m.direction();
        for &pair in &pairs {
            let entry = by_pair.entry(pair).or_insert_with(|| dir.clone());
            if dir > *entry {
                *entry = dir.clone();
            }
        }
        collisions.push((m, pairs.len()));
    }
    let conflicts = by_pair
        .into_iter()
        .map(|((first, second), direction)| Conflict {
            first,
            second,
            direction,
        })
        .collect();
    VerifyReport::from_parts(pl.d(), conflicts, collisions)
}

/// Incremental line occupancy for building independent sets one queen at a
/// time. Dense bitsets are used while `families · n^(d-1)` stays small.
#[derive(Clone, Debug)]
pub struct LineIndex {
    n: u64,
    maps: Vec<DiagonalMap>,
    store: LineStore,
}

#[derive(Clone, Debug)]
enum LineStore {
    Dense { per_family: u128, bits: Vec<u64> },
    Sparse(Vec<HashSet<u128>>),
}

const DENSE_LIMIT_BITS: u128 = 1 << 28;

impl LineIndex {
    pub fn new(n: u64, d: usize) -> Result<Self> {
        Placement::empty(n, d)?;
        let maps = DiagonalMap::all(d);
        let per_family = (n as u128).pow(d as u32 - 1);
        let total = per_family * maps.len() as u128;
        let store = if total <= DENSE_LIMIT_BITS {
            LineStore::Dense {
                per_family,
                bits: vec![0; (total as usize).div_ceil(64)],
            }
        } else {
            LineStore::Sparse(vec![HashSet::new(); maps.len()])
        };
        Ok(Self { n, maps, store })
    }

    pub fn maps(&self) -> &[DiagonalMap] {
        &self.maps
    }

    /// Whether no placed queen shares a line with `coords`.
    pub fn is_free(&self, coords: &[u64]) -> bool {
        self.maps.iter().enumerate().all(|(f, m)| {
            let key = m.key(coords, self.n);
            match &self.store {
                LineStore::Dense { per_family, bits } => {
                    let bit = (f as u128 * per_family + key) as usize;
                    bits[bit / 64] & (1 << (bit % 64)) == 0
                }
                LineStore::Sparse(sets) => !sets[f].contains(&key),
            }
        })
    }

    /// Occupies every line through `coords` if all are free; returns whether it did.
    pub fn try_insert(&mut self, coords: &[u64]) -> bool {
        if !self.is_free(coords) {
            return false;
        }
        for (f, m) in self.maps.iter().enumerate() {
            let key = m.key(coords, self.n);
            match &mut self.store {
                LineStore::Dense { per_family, bits } => {
                    let bit = (f as u128 * *per_family + key) as usize;
                    bits[bit / 64] |= 1 << (bit % 64);
                }
                LineStore::Sparse(sets) => {
                    sets[f].insert(key);
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: u64, c: &[u64]) -> Point {
        Point::new(n, c.to_vec()).unwrap()
    }

    fn dir(e: &[i8]) -> Direction {
        Direction::new(e.to_vec()).unwrap()
    }

    #[test]
    fn conflict_examples() {
        assert_eq!(
            conflict(&pt(5, &[0, 0]), &pt(5, &[2, 2])).unwrap(),
            Some(dir(&[1, 1]))
        );
        assert_eq!(conflict(&pt(5, &[0, 0]), &pt(5, &[1, 2])).unwrap(), None);
        assert_eq!(
            conflict(&pt(11, &[0, 0, 0]), &pt(11, &[3, 8, 3])).unwrap(),
            Some(dir(&[1, -1, 1]))
        );
    }

    #[test]
    fn conflict_rejects_mismatched_boards() {
        assert!(matches!(
            conflict(&pt(5, &[0, 0]), &pt(7, &[1, 2])),
            Err(Error::BoardMismatch(..))
        ));
        assert!(conflict(&pt(5, &[0, 0]), &pt(5, &[1, 2, 3])).is_err());
    }

    #[test]
    fn half_modulus_displacement_lies_on_two_lines() {
        let p = pt(4, &[0, 0]);
        let q = pt(4, &[2, 2]);
        let dirs = conflict_directions(&p, &q).unwrap();
        assert_eq!(dirs, vec![dir(&[1, -1]), dir(&[1, 1])]);
        assert_eq!(conflict(&p, &q).unwrap(), Some(dir(&[1, 1])));
        assert_eq!(conflict(&q, &p).unwrap(), Some(dir(&[1, 1])));
    }

    #[test]
    fn diagonal_map_examples() {
        let m = DiagonalMap::new(2, 0, vec![-1]).unwrap();
        let img: Vec<u64> = apply_diagonal_map(&m, &pt(7, &[3, 5]))
            .iter()
            .map(|r| r.value())
            .collect();
        assert_eq!(img, vec![2]);

        let m = DiagonalMap::new(3, 1, vec![1]).unwrap();
        assert_eq!(m.project(&[4, 1, 2], 9), vec![4, 3]);

        // moves parallel to (1,0,0) keep (y, z)
        let m = DiagonalMap::new(3, 0, vec![0, 0]).unwrap();
        assert_eq!(m.project(&[6, 2, 5], 9), vec![2, 5]);
        assert_eq!(m.direction(), dir(&[1, 0, 0]));
    }

    #[test]
    fn diagonal_map_validation() {
        assert!(DiagonalMap::new(3, 3, vec![]).is_err());
        assert!(DiagonalMap::new(3, 1, vec![0, 0]).is_err());
        assert!(DiagonalMap::new(3, 1, vec![2]).is_err());
    }

    #[test]
    fn map_count_matches_direction_count() {
        for d in 1..=5 {
            assert_eq!(DiagonalMap::all(d).len(), (3usize.pow(d as u32) - 1) / 2);
        }
    }

    #[test]
    fn key_matches_projection() {
        let n = 7;
        for m in DiagonalMap::all(3) {
            let c = [3, 6, 1];
            let img = m.project(&c, n);
            let packed = img.iter().fold(0u128, |k, &v| k * n as u128 + v as u128);
            assert_eq!(m.key(&c, n), packed);
        }
    }

    #[test]
    fn verifiers_on_small_cases() {
        let doubling = Placement::from_coords(
            5,
            2,
            vec![vec![0, 0], vec![1, 2], vec![2, 4], vec![3, 1], vec![4, 3]],
        )
        .unwrap();
        assert!(verify_pairwise(&doubling).independent);
        assert!(verify_by_maps(&doubling).independent);

        let doubled_9 =
            Placement::from_coords(9, 2, (0..9).map(|t| vec![t, 2 * t % 9]).collect()).unwrap();
        let report = verify_by_maps(&doubled_9);
        assert!(!report.independent);
        assert_eq!(report, verify_pairwise(&doubled_9));

        let empty = Placement::empty(6, 3).unwrap();
        assert!(verify_pairwise(&empty).independent);
        assert!(verify_by_maps(&empty).independent);

        let single = Placement::from_coords(6, 3, vec![vec![1, 2, 3]]).unwrap();
        assert!(verify_by_maps(&single).independent);
    }

    #[test]
    fn shared_row_is_reported_in_lead_two_family() {
        let pl = Placement::from_coords(4, 2, vec![vec![0, 0], vec![1, 2], vec![2, 0]]).unwrap();
        let report = verify_by_maps(&pl);
        assert!(!report.independent);
        let row_family = DiagonalMap::from_direction(&dir(&[1, 0]));
        assert_eq!(row_family.lead(), 0);
        assert!(report.per_family_collisions[&row_family] >= 1);
        assert!(report
            .conflicts
            .iter()
            .any(|c| (c.first, c.second) == (0, 2)));
        assert_eq!(report, verify_pairwise(&pl));
    }

    #[test]
    fn placement_rejects_bad_input() {
        assert!(matches!(
            Placement::from_coords(5, 2, vec![vec![1, 1], vec![1, 1]]),
            Err(Error::DuplicateQueen(_))
        ));
        assert!(matches!(
            Placement::from_coords(5, 2, vec![vec![1, 5]]),
            Err(Error::CoordinateRange { .. })
        ));
        assert!(matches!(
            Placement::from_coords(5, 2, vec![vec![1]]),
            Err(Error::CoordinateCount { .. })
        ));
        assert!(Placement::empty(0, 2).is_err());
    }

    #[test]
    fn line_index_blocks_attacked_cells() {
        let mut idx = LineIndex::new(5, 2).unwrap();
        assert!(idx.try_insert(&[0, 0]));
        assert!(!idx.try_insert(&[2, 2]));
        assert!(!idx.try_insert(&[0, 3]));
        assert!(idx.try_insert(&[1, 2]));
    }
}
