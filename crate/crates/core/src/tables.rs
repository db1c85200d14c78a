//! Betti tables as finitely supported vectors in `Q^(Z x Z)`, together with
//! the combinatorial index objects of Boij-Soderberg theory: degree
//! sequences, codimension sequences and the compatibility relation between
//! them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. Always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// A bidegree `(i, j)`: homological position and internal degree.
pub type Bidegree = (i64, i64);

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("negative scale factor {0} is not allowed in cone arithmetic")]
    NegativeScale(Rational),
    #[error("degree sequence must be nonempty")]
    EmptyDegreeSequence,
    #[error("degree sequence {0:?} is not strictly increasing")]
    NotIncreasing(Vec<i64>),
    #[error("codimension value {value} exceeds ambient dimension {dim}")]
    LevelTooLarge { value: u32, dim: u32 },
    #[error("codimension sequence decreases at position {position}")]
    NotMonotone { position: i64 },
    #[error("empty interval {lo}..={hi}")]
    EmptyInterval { lo: i64, hi: i64 },
}

/// A finitely supported table `(i, j) -> Q`. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BettiTable {
    entries: BTreeMap<Bidegree, Rational>,
}

impl BettiTable {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a table from entries; zeros are dropped, repeated keys are summed.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (Bidegree, Rational)>,
    {
        let mut table = Self::zero();
        for (key, value) in entries {
            table.add_at(key, &value);
        }
        table
    }

    /// Convenience constructor from integer entries.
    pub fn from_ints(entries: &[(i64, i64, i64)]) -> Self {
        Self::from_entries(entries.iter().map(|&(i, j, v)| ((i, j), rat(v))))
    }

    pub fn get(&self, i: i64, j: i64) -> Rational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entry(&self, i: i64, j: i64) -> Option<&Rational> {
        self.entries.get(&(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in `(i, j)` lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Bidegree, &Rational)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn support(&self) -> BTreeSet<Bidegree> {
        self.entries.keys().copied().collect()
    }

    /// Homological positions carrying at least one nonzero entry.
    pub fn positions(&self) -> BTreeSet<i64> {
        self.entries.keys().map(|&(i, _)| i).collect()
    }

    /// Internal degrees present at homological position `i`, ascending.
    pub fn degrees_at(&self, i: i64) -> Vec<i64> {
        self.entries.range((i, i64::MIN)..=(i, i64::MAX)).map(|(&(_, j), _)| j).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| !v.is_negative())
    }

    fn add_at(&mut self, key: Bidegree, value: &Rational) {
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry(key).or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    pub fn add(&self, other: &BettiTable) -> BettiTable {
        let mut out = self.clone();
        for (key, value) in other.iter() {
            out.add_at(key, value);
        }
        out
    }

    /// `self + factor * other` with an arbitrary rational factor.
    pub fn add_scaled(&self, factor: &Rational, other: &BettiTable) -> BettiTable {
        let mut out = self.clone();
        if factor.is_zero() {
            return out;
        }
        for (key, value) in other.iter() {
            out.add_at(key, &(value * factor));
        }
        out
    }

    pub fn sub(&self, other: &BettiTable) -> BettiTable {
        self.add_scaled(&rat(-1), other)
    }

    /// Scaling inside the cone: negative factors are rejected.
    pub fn scale(&self, factor: &Rational) -> Result<BettiTable, TableError> {
        if factor.is_negative() {
            return Err(TableError::NegativeScale(factor.clone()));
        }
        Ok(self.scale_signed(factor))
    }

    /// Vector-space scaling, any sign.
    pub fn scale_signed(&self, factor: &Rational) -> BettiTable {
        if factor.is_zero() {
            return BettiTable::zero();
        }
        BettiTable { entries: self.entries.iter().map(|(k, v)| (*k, v * factor)).collect() }
    }

    /// Zeroes every entry outside `window`.
    pub fn restrict(&self, window: &Window) -> BettiTable {
        BettiTable {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| window.contains(**k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// The table of `M(-s)`: every internal degree moves up by `s`.
    pub fn shift_degrees(&self, s: i64) -> BettiTable {
        BettiTable { entries: self.entries.iter().map(|(&(i, j), v)| ((i, j + s), v.clone())).collect() }
    }

    /// `sum_k w_k * self_k` over the support of `functional`.
    pub fn pair(&self, functional: &BTreeMap<Bidegree, Rational>) -> Rational {
        functional.iter().map(|(k, w)| w * self.get(k.0, k.1)).fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for BettiTable {
    /// Line format: one `i j value` entry per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((i, j), v) in self.iter() {
            writeln!(f, "{i} {j} {v}")?;
        }
        Ok(())
    }
}

/// A strictly increasing run of degrees `t_a < ... < t_{a+l}` placed at
/// homological positions `a, ..., a+l`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeSequence {
    start: i64,
    degrees: Vec<i64>,
}

impl DegreeSequence {
    pub fn new(start: i64, degrees: Vec<i64>) -> Result<Self, TableError> {
        if degrees.is_empty() {
            return Err(TableError::EmptyDegreeSequence);
        }
        if degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TableError::NotIncreasing(degrees));
        }
        Ok(Self { start, degrees })
    }

    /// `inf(t)`.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Position of the last entry, `a + l`.
    pub fn end(&self) -> i64 {
        self.start + self.codim() as i64
    }

    /// `codim(t) = l`.
    pub fn codim(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// `t_i` for `a <= i <= a+l`.
    pub fn degree_at(&self, i: i64) -> Option<i64> {
        if i < self.start {
            return None;
        }
        self.degrees.get((i - self.start) as usize).copied()
    }

    /// `(i, t_i)` pairs.
    pub fn points(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.degrees.iter().enumerate().map(move |(k, &t)| (self.start + k as i64, t))
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.degrees.iter().map(i64::to_string).collect();
        write!(f, "({})@{}", inner.join(","), self.start)
    }
}

/// A value of a codimension sequence, ordered `Empty < 0 < 1 < ... < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CodimLevel {
    Empty,
    Finite(u32),
    Infinite,
}

impl fmt::Display for CodimLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodimLevel::Empty => write!(f, "empty"),
            CodimLevel::Finite(c) => write!(f, "{c}"),
            CodimLevel::Infinite => write!(f, "inf"),
        }
    }
}

/// A non-decreasing sequence `(c_i)_{i in Z}` with values in
/// `{Empty, 0, ..., d, Infinite}`, stored as the left tail value plus the
/// positions where the value changes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodimensionSequence {
    ambient_dim: u32,
    left: CodimLevel,
    jumps: BTreeMap<i64, CodimLevel>,
}

impl CodimensionSequence {
    /// `left` holds below the first jump; each jump `(p, v)` sets the value
    /// from position `p` onward. Redundant jumps are dropped.
    pub fn from_jumps(
        ambient_dim: u32,
        left: CodimLevel,
        jumps: impl IntoIterator<Item = (i64, CodimLevel)>,
    ) -> Result<Self, TableError> {
        let check = |level: CodimLevel| match level {
            CodimLevel::Finite(v) if v > ambient_dim => {
                Err(TableError::LevelTooLarge { value: v, dim: ambient_dim })
            }
            _ => Ok(()),
        };
        check(left)?;
        let sorted: BTreeMap<i64, CodimLevel> = jumps.into_iter().collect();
        let mut canonical = BTreeMap::new();
        let mut current = left;
        for (position, level) in sorted {
            check(level)?;
            if level < current {
                return Err(TableError::NotMonotone { position });
            }
            if level != current {
                canonical.insert(position, level);
                current = level;
            }
        }
        Ok(Self { ambient_dim, left, jumps: canonical })
    }

    /// The constant sequence `c`.
    pub fn constant(c: u32, ambient_dim: u32) -> Result<Self, TableError> {
        Self::from_jumps(ambient_dim, CodimLevel::Finite(c), [])
    }

    /// `(..., Empty, c, Infinite, ...)` with `c` at position 0: modules of
    /// codimension at least `c`.
    pub fn module(c: u32, ambient_dim: u32) -> Result<Self, TableError> {
        Self::from_jumps(
            ambient_dim,
            CodimLevel::Empty,
            [(0, CodimLevel::Finite(c)), (1, CodimLevel::Infinite)],
        )
    }

    /// `(..., Empty, d, d, ...)` with the first `d` at position 0.
    pub fn short(ambient_dim: u32) -> Self {
        Self::from_jumps(ambient_dim, CodimLevel::Empty, [(0, CodimLevel::Finite(ambient_dim))])
            .expect("d <= d")
    }

    pub fn ambient_dim(&self) -> u32 {
        self.ambient_dim
    }

    pub fn left_tail(&self) -> CodimLevel {
        self.left
    }

    pub fn right_tail(&self) -> CodimLevel {
        self.jumps.values().next_back().copied().unwrap_or(self.left)
    }

    pub fn jumps(&self) -> impl Iterator<Item = (i64, CodimLevel)> + '_ {
        self.jumps.iter().map(|(p, v)| (*p, *v))
    }

    /// `c_i`.
    pub fn at(&self, i: i64) -> CodimLevel {
        self.jumps.range(..=i).next_back().map(|(_, v)| *v).unwrap_or(self.left)
    }

    /// `Some(c)` when the sequence is constant with finite value `c`.
    pub fn as_constant(&self) -> Option<u32> {
        match (self.jumps.is_empty(), self.left) {
            (true, CodimLevel::Finite(c)) => Some(c),
            _ => None,
        }
    }
}

/// `0 <= c_a <= codim(t) <= c_{a+1}` with `a = inf(t)`.
pub fn compatible(t: &DegreeSequence, c: &CodimensionSequence) -> bool {
    let l = t.codim();
    if l > c.ambient_dim() as usize {
        return false;
    }
    let l = CodimLevel::Finite(l as u32);
    let a = t.start();
    let lower = c.at(a);
    lower >= CodimLevel::Finite(0) && lower <= l && l <= c.at(a + 1)
}

/// Inclusive rectangle of bidegrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub i_min: i64,
    pub i_max: i64,
    pub j_min: i64,
    pub j_max: i64,
}

impl Window {
    pub fn new(i_range: (i64, i64), j_range: (i64, i64)) -> Result<Self, TableError> {
        for (lo, hi) in [i_range, j_range] {
            if lo > hi {
                return Err(TableError::EmptyInterval { lo, hi });
            }
        }
        Ok(Self { i_min: i_range.0, i_max: i_range.1, j_min: j_range.0, j_max: j_range.1 })
    }

    pub fn contains(&self, (i, j): Bidegree) -> bool {
        (self.i_min..=self.i_max).contains(&i) && (self.j_min..=self.j_max).contains(&j)
    }

    pub fn points(&self) -> impl Iterator<Item = Bidegree> + '_ {
        (self.i_min..=self.i_max).flat_map(move |i| (self.j_min..=self.j_max).map(move |j| (i, j)))
    }
}

/// A finite set of bidegrees, either a rectangle or an explicit support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    Rect(Window),
    Points(BTreeSet<Bidegree>),
}

impl Region {
    pub fn of_table(table: &BettiTable) -> Self {
        Region::Points(table.support())
    }

    /// Degrees available at each homological position.
    pub fn columns(&self) -> BTreeMap<i64, Vec<i64>> {
        let mut out: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        match self {
            Region::Rect(w) => {
                for i in w.i_min..=w.i_max {
                    out.insert(i, (w.j_min..=w.j_max).collect());
                }
            }
            Region::Points(points) => {
                for &(i, j) in points {
                    out.entry(i).or_default().push(j);
                }
            }
        }
        out
    }
}

impl From<Window> for Region {
    fn from(w: Window) -> Self {
        Region::Rect(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(start: i64, d: &[i64]) -> DegreeSequence {
        DegreeSequence::new(start, d.to_vec()).unwrap()
    }

    #[test]
    fn compatibility_examples() {
        let t = seq(0, &[0, 2, 3]);
        assert!(!compatible(&t, &CodimensionSequence::constant(0, 2).unwrap()));
        assert!(compatible(&t, &CodimensionSequence::module(2, 2).unwrap()));

        let c = CodimensionSequence::from_jumps(2, CodimLevel::Empty, [(2, CodimLevel::Finite(0))]).unwrap();
        assert_eq!(c.at(1), CodimLevel::Empty);
        assert!(!compatible(&seq(1, &[5]), &c));
    }

    #[test]
    fn constant_full_dimension_admits_exactly_full_codim() {
        let c = CodimensionSequence::constant(3, 3).unwrap();
        for degrees in [vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 1, 2, 3]] {
            let l = degrees.len() - 1;
            assert_eq!(compatible(&seq(-1, &degrees), &c), l == 3);
        }
    }

    #[test]
    fn codimension_sequence_validation() {
        assert!(matches!(
            CodimensionSequence::from_jumps(3, CodimLevel::Finite(2), [(0, CodimLevel::Finite(1))]),
            Err(TableError::NotMonotone { position: 0 })
        ));
        assert!(CodimensionSequence::constant(4, 3).is_err());
        let c = CodimensionSequence::from_jumps(
            3,
            CodimLevel::Empty,
            [(0, CodimLevel::Finite(1)), (1, CodimLevel::Finite(1)), (4, CodimLevel::Infinite)],
        )
        .unwrap();
        assert_eq!(c.jumps().count(), 2);
        assert_eq!(c.at(-7), CodimLevel::Empty);
        assert_eq!(c.at(3), CodimLevel::Finite(1));
        assert_eq!(c.at(100), CodimLevel::Infinite);
        assert_eq!(c.right_tail(), CodimLevel::Infinite);
    }

    #[test]
    fn degree_sequence_rejects_non_increasing() {
        assert!(DegreeSequence::new(0, vec![1, 1]).is_err());
        assert!(DegreeSequence::new(0, vec![]).is_err());
        let t = seq(2, &[4, 7]);
        assert_eq!(t.end(), 3);
        assert_eq!(t.degree_at(3), Some(7));
        assert_eq!(t.degree_at(1), None);
    }

    #[test]
    fn table_algebra_examples() {
        let beta = BettiTable::from_ints(&[(0, 0, 1), (5, 9, 2)]);
        assert_eq!(beta.add(&BettiTable::zero()), beta);
        assert!(beta.scale(&rat(0)).unwrap().is_zero());
        assert!(beta.scale(&rat(-1)).is_err());
        let w = Window::new((0, 2), (0, 3)).unwrap();
        assert_eq!(beta.restrict(&w), BettiTable::from_ints(&[(0, 0, 1)]));
        assert!(beta.sub(&beta).is_zero());
        assert_eq!(beta.degrees_at(5), vec![9]);
    }

    #[test]
    fn zero_values_never_stored() {
        let t = BettiTable::from_ints(&[(0, 0, 0), (1, 1, 3), (1, 1, -3), (2, 2, 1)]);
        assert_eq!(t.len(), 1);
        assert!(t.iter().all(|(_, v)| !v.is_zero()));
    }
}
