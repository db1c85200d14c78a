//! Laurent polynomials, Hilbert series `f(t) / (1-t)^k`, and the
//! multiplicity machinery read off a Betti table.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::pure::is_pure;
use crate::tables::{rat, BettiTable, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("polynomial is divisible by (1-t)^{achieved} but not by (1-t)^{required}")]
    NotDivisible { required: u32, achieved: u32 },
    #[error("table is zero")]
    ZeroTable,
    #[error("table has support at homological position {0} < 0")]
    NegativePosition(i64),
    #[error("position 0 must hold exactly one entry, in degree 0")]
    NotGeneratedInDegreeZero,
    #[error("homological position {0} between 1 and the top position is empty")]
    GapAt(i64),
    #[error("multiplicity of the base ring must be positive")]
    NonPositiveMultiplicity,
    #[error("table is not that of a perfect module: {0}")]
    NotPerfect(Box<HilbertError>),
}

/// Finitely supported `Z -> Q`, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coefficients: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    pub fn monomial(exponent: i64, coefficient: Rational) -> Self {
        Self::from_terms([(exponent, coefficient)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    pub fn from_ints(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, rat(c))))
    }

    /// `(1 - t)^k`.
    pub fn one_minus_t_pow(k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(&Self::from_ints(&[(0, 1), (1, -1)])))
    }

    fn add_term(&mut self, exponent: i64, coefficient: &Rational) {
        if coefficient.is_zero() {
            return;
        }
        let slot = self.coefficients.entry(exponent).or_insert_with(Rational::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.coefficients.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, exponent: i64) -> Rational {
        self.coefficients.get(&exponent).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coefficients.iter().map(|(e, c)| (*e, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * factor)))
    }

    /// Multiplication by `t^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self { coefficients: self.terms().map(|(e, c)| (e + s, c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.terms().fold(Rational::zero(), |acc, (e, c)| {
            let power = if e >= 0 {
                num_traits::pow(t.clone(), e as usize)
            } else {
                num_traits::pow(t.recip(), (-e) as usize)
            };
            acc + c * power
        })
    }

    pub fn eval_at_one(&self) -> Rational {
        self.coefficients.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Synthetic division by `(1 - t)`: returns `(q, r)` with
    /// `self = (1 - t) q + r` and the constant `r = self(1)`.
    pub fn div_one_minus_t(&self) -> (Self, Rational) {
        let Some((&low, _)) = self.coefficients.iter().next() else {
            return (Self::zero(), Rational::zero());
        };
        let high = *self.coefficients.keys().next_back().expect("nonempty");
        // Divide by (t - 1) from the top, Horner style, then negate.
        let mut quotient = BTreeMap::new();
        let mut carry = Rational::zero();
        for e in (low + 1..=high).rev() {
            carry += self.coefficient(e);
            if !carry.is_zero() {
                quotient.insert(e - 1, -carry.clone());
            }
        }
        let remainder = carry + self.coefficient(low);
        // Quotient above is for `self - r t^low`; express the remainder as a
        // constant by moving `r (t^low - 1)` into the quotient.
        let mut q = Self { coefficients: quotient };
        if !remainder.is_zero() && low != 0 {
            // r t^low = r + r (t^low - 1), and (t^low - 1) = -(1 - t) * s(t)
            let s = geometric_sum(low);
            q = q.sub(&s.scale(&remainder));
        }
        (q, remainder)
    }

    /// Divides by `(1 - t)^k`, failing if any remainder is nonzero.
    pub fn div_one_minus_t_pow(&self, k: u32) -> Result<Self, HilbertError> {
        let mut current = self.clone();
        for achieved in 0..k {
            let (q, r) = current.div_one_minus_t();
            if !r.is_zero() {
                return Err(HilbertError::NotDivisible { required: k, achieved });
            }
            current = q;
        }
        Ok(current)
    }

    /// Largest `k` with `(1 - t)^k` dividing `self`; `None` for zero.
    pub fn order_at_one(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut current = self.clone();
        loop {
            let (q, r) = current.div_one_minus_t();
            if !r.is_zero() {
                return Some(k);
            }
            current = q;
            k += 1;
        }
    }
}

/// `s(t)` with `t^n - 1 = -(1 - t) s(t)`, i.e. `(t^n - 1)/(t - 1)`.
fn geometric_sum(n: i64) -> LaurentPoly {
    if n > 0 {
        LaurentPoly::from_terms((0..n).map(|e| (e, Rational::one())))
    } else {
        // t^n - 1 = -t^n (t^{-n} - 1)
        LaurentPoly::from_terms((n..0).map(|e| (e, -Rational::one())))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let magnitude = c.abs();
            match e {
                0 => write!(f, "{magnitude}")?,
                _ if magnitude.is_one() => write!(f, "t^{e}")?,
                _ => write!(f, "{magnitude}*t^{e}")?,
            }
        }
        Ok(())
    }
}

/// `numerator / (1 - t)^pole_order` in lowest terms with respect to `(1 - t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertSeries {
    numerator: LaurentPoly,
    pole_order: u32,
}

impl HilbertSeries {
    pub fn new(numerator: LaurentPoly, pole_order: u32) -> Self {
        if numerator.is_zero() {
            return Self { numerator, pole_order: 0 };
        }
        let mut numerator = numerator;
        let mut pole_order = pole_order;
        while pole_order > 0 {
            let (q, r) = numerator.div_one_minus_t();
            if !r.is_zero() {
                break;
            }
            numerator = q;
            pole_order -= 1;
        }
        Self { numerator, pole_order }
    }

    /// `1 / (1 - t)^d`.
    pub fn polynomial_ring(d: u32) -> Self {
        Self::new(LaurentPoly::one(), d)
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    /// Krull dimension of the module with this series.
    pub fn dim(&self) -> u32 {
        self.pole_order
    }

    /// `f(1)`, the multiplicity in the top dimension.
    pub fn multiplicity(&self) -> Rational {
        self.numerator.eval_at_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.pole_order.max(other.pole_order);
        let lift = |s: &Self| s.numerator.mul(&LaurentPoly::one_minus_t_pow(k - s.pole_order));
        Self::new(lift(self).add(&lift(other)), k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.mul_poly(&LaurentPoly::from_ints(&[(0, -1)])))
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        Self::new(self.numerator.mul(p), self.pole_order)
    }

    /// Coefficient of `t^n` in the power series expansion.
    pub fn coefficient(&self, n: i64) -> Rational {
        // 1/(1-t)^k = sum_m C(m + k - 1, k - 1) t^m
        let k = self.pole_order as i64;
        self.numerator.terms().fold(Rational::zero(), |acc, (e, c)| {
            let m = n - e;
            if m < 0 {
                return acc;
            }
            let count = if k == 0 {
                if m == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            } else {
                binomial(m + k - 1, k - 1)
            };
            acc + c * Rational::from_integer(count)
        })
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / (1-t)^{}", self.numerator, self.pole_order)
    }
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k || n < 0 {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `g_beta(t) = sum (-1)^i beta_{i,j} t^j`.
pub fn g_beta(beta: &BettiTable) -> LaurentPoly {
    LaurentPoly::from_terms(beta.iter().map(|((i, j), v)| {
        let signed = if i.rem_euclid(2) == 0 { v.clone() } else { -v.clone() };
        (j, signed)
    }))
}

/// `Hilb_R(t) * g_beta(t)` in canonical form.
pub fn hilb_from_betti(beta: &BettiTable, hilb_r: &HilbertSeries) -> HilbertSeries {
    hilb_r.mul_poly(&g_beta(beta))
}

/// `e(beta) = e_R * (g_beta / (1 - t)^c)(1)`.
pub fn e_of_beta(beta: &BettiTable, c: u32, e_r: &Rational) -> Result<Rational, HilbertError> {
    let quotient = g_beta(beta).div_one_minus_t_pow(c)?;
    Ok(e_r * quotient.eval_at_one())
}

/// Upper and lower multiplicity bounds for the table of a perfect module
/// generated in degree zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub codim: u32,
    pub lower: Rational,
    pub e: Rational,
    pub upper: Rational,
    pub pure: bool,
}

impl BoundsReport {
    /// `lower <= e <= upper`, with equality on either side only for pure tables.
    pub fn holds(&self) -> bool {
        let sandwich = self.lower <= self.e && self.e <= self.upper;
        let strict = self.lower < self.e && self.e < self.upper;
        let tight = self.lower == self.e && self.e == self.upper;
        sandwich && if self.pure { tight } else { strict }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn multiplicity_bounds(beta: &BettiTable, e_r: &Rational) -> Result<BoundsReport, HilbertError> {
    if !e_r.is_positive() {
        return Err(HilbertError::NonPositiveMultiplicity);
    }
    let positions = beta.positions();
    let (Some(&first), Some(&last)) = (positions.iter().next(), positions.iter().next_back()) else {
        return Err(HilbertError::ZeroTable);
    };
    if first < 0 {
        return Err(HilbertError::NegativePosition(first));
    }
    if first != 0 || beta.degrees_at(0) != [0] {
        return Err(HilbertError::NotGeneratedInDegreeZero);
    }
    let c = last as u32;
    let mut min_product = BigInt::one();
    let mut max_product = BigInt::one();
    for i in 1..=last {
        let degrees = beta.degrees_at(i);
        let (Some(&lo), Some(&hi)) = (degrees.first(), degrees.last()) else {
            return Err(HilbertError::GapAt(i));
        };
        min_product *= BigInt::from(lo);
        max_product *= BigInt::from(hi);
    }
    let e = e_of_beta(beta, c, e_r).map_err(|err| HilbertError::NotPerfect(Box::new(err)))?;
    let base = e_r * beta.get(0, 0) / Rational::from_integer(factorial(c));
    Ok(BoundsReport {
        codim: c,
        lower: &base * Rational::from_integer(min_product),
        e,
        upper: base * Rational::from_integer(max_product),
        pure: is_pure(beta).is_some(),
    })
}

/// `max { j - i : beta_{i,j} != 0 }`.
pub fn regularity_from_betti(beta: &BettiTable) -> Result<i64, HilbertError> {
    beta.iter().map(|((i, j), _)| j - i).max().ok_or(HilbertError::ZeroTable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pure::herzog_kuhl;
    use crate::tables::{ratio, DegreeSequence};
    use proptest::prelude::*;

    fn hk(d: &[i64]) -> BettiTable {
        herzog_kuhl(&DegreeSequence::new(0, d.to_vec()).unwrap()).table
    }

    fn square() -> BettiTable {
        BettiTable::from_ints(&[(0, 0, 1), (1, 2, 3), (2, 3, 2)])
    }

    #[test]
    fn g_beta_examples() {
        assert_eq!(g_beta(&hk(&[0, 1, 2])), LaurentPoly::from_ints(&[(0, 1), (1, -2), (2, 1)]));
        assert_eq!(g_beta(&hk(&[0, 1, 2])), LaurentPoly::one_minus_t_pow(2));
        let g = g_beta(&square());
        assert_eq!(g, LaurentPoly::from_ints(&[(0, 1), (2, -3), (3, 2)]));
        assert_eq!(g, LaurentPoly::one_minus_t_pow(2).mul(&LaurentPoly::from_ints(&[(0, 1), (1, 2)])));
        assert!(g_beta(&BettiTable::zero()).is_zero());
    }

    #[test]
    fn hilb_from_betti_examples() {
        let r = HilbertSeries::polynomial_ring(2);
        let h = hilb_from_betti(&square(), &r);
        assert_eq!(h.numerator(), &LaurentPoly::from_ints(&[(0, 1), (1, 2)]));
        assert_eq!(h.pole_order(), 0);
        let arbitrary = HilbertSeries::new(LaurentPoly::from_ints(&[(0, 1), (1, 1)]), 3);
        assert_eq!(hilb_from_betti(&BettiTable::from_ints(&[(0, 0, 1)]), &arbitrary), arbitrary);
        let residue = hilb_from_betti(&hk(&[0, 1, 2]), &r);
        assert_eq!(residue, HilbertSeries::new(LaurentPoly::one(), 0));
    }

    #[test]
    fn e_of_beta_examples() {
        assert_eq!(e_of_beta(&square(), 2, &rat(1)), Ok(rat(3)));
        assert_eq!(e_of_beta(&hk(&[0, 1, 2]), 2, &rat(1)), Ok(rat(1)));
        assert_eq!(e_of_beta(&hk(&[0, 1, 2, 3]), 2, &rat(1)), Ok(rat(0)));
        assert_eq!(
            e_of_beta(&BettiTable::from_ints(&[(0, 0, 1)]), 1, &rat(1)),
            Err(HilbertError::NotDivisible { required: 1, achieved: 0 })
        );
    }

    #[test]
    fn bounds_examples() {
        let beta = BettiTable::from_ints(&[(0, 0, 1), (1, 2, 2), (1, 3, 1), (2, 3, 1), (2, 4, 1)]);
        let report = multiplicity_bounds(&beta, &rat(1)).unwrap();
        assert_eq!((report.lower.clone(), report.e.clone(), report.upper.clone()), (rat(3), rat(4), rat(6)));
        assert!(!report.pure);
        assert!(report.holds());

        let report = multiplicity_bounds(&square(), &rat(1)).unwrap();
        assert_eq!((report.lower.clone(), report.e.clone(), report.upper.clone()), (rat(3), rat(3), rat(3)));
        assert!(report.pure && report.holds());

        let report = multiplicity_bounds(&BettiTable::from_ints(&[(0, 0, 1)]), &rat(5)).unwrap();
        assert_eq!(
            (report.codim, report.lower.clone(), report.e.clone(), report.upper.clone()),
            (0, rat(5), rat(5), rat(5))
        );
    }

    #[test]
    fn bounds_preconditions() {
        let r1 = rat(1);
        assert_eq!(multiplicity_bounds(&BettiTable::zero(), &r1), Err(HilbertError::ZeroTable));
        let shifted = BettiTable::from_ints(&[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(multiplicity_bounds(&shifted, &r1), Err(HilbertError::NotGeneratedInDegreeZero));
        let gap = BettiTable::from_ints(&[(0, 0, 1), (2, 3, 1)]);
        assert_eq!(multiplicity_bounds(&gap, &r1), Err(HilbertError::GapAt(1)));
        // S/(x^2, xy): codim 1, projective dimension 2
        let not_perfect = BettiTable::from_ints(&[(0, 0, 1), (1, 2, 2), (2, 3, 1)]);
        assert!(matches!(multiplicity_bounds(&not_perfect, &r1), Err(HilbertError::NotPerfect(_))));
        assert_eq!(multiplicity_bounds(&square(), &rat(0)), Err(HilbertError::NonPositiveMultiplicity));
    }

    #[test]
    fn regularity_examples() {
        assert_eq!(regularity_from_betti(&square()), Ok(1));
        assert_eq!(regularity_from_betti(&hk(&[0, 1, 2])), Ok(0));
        assert_eq!(regularity_from_betti(&BettiTable::from_ints(&[(0, 5, 1)])), Ok(5));
        assert_eq!(regularity_from_betti(&BettiTable::zero()), Err(HilbertError::ZeroTable));
    }

    #[test]
    fn division_handles_negative_exponents() {
        // t^-2 - t^-1 = (1 - t) t^-2
        let p = LaurentPoly::from_ints(&[(-2, 1), (-1, -1)]);
        assert_eq!(p.div_one_minus_t(), (LaurentPoly::from_ints(&[(-2, 1)]), rat(0)));
        let q = LaurentPoly::from_ints(&[(-3, 2), (4, 1)]);
        let (quot, rem) = q.div_one_minus_t();
        assert_eq!(rem, rat(3));
        let rebuilt = LaurentPoly::one_minus_t_pow(1).mul(&quot).add(&LaurentPoly::monomial(0, rem));
        assert_eq!(rebuilt, q);
    }

    #[test]
    fn series_coefficients() {
        // 1/(1-t)^2 has coefficients n + 1
        let s = HilbertSeries::polynomial_ring(2);
        assert_eq!(s.coefficient(4), rat(5));
        assert_eq!(s.coefficient(-1), rat(0));
        let half = HilbertSeries::new(LaurentPoly::from_terms([(0, ratio(1, 2))]), 0);
        assert_eq!(half.coefficient(0), ratio(1, 2));
    }

    fn poly_strategy() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-4i64..6, -5i64..6), 0..6).prop_map(|terms| LaurentPoly::from_ints(&terms))
    }

    proptest! {
        #[test]
        fn synthetic_division_reconstructs(p in poly_strategy()) {
            let (q, r) = p.div_one_minus_t();
            prop_assert_eq!(r.clone(), p.eval_at_one());
            let rebuilt = LaurentPoly::one_minus_t_pow(1).mul(&q).add(&LaurentPoly::monomial(0, r));
            prop_assert_eq!(rebuilt, p);
        }

        #[test]
        fn canonical_form_is_stable(p in poly_strategy(), k in 0u32..4, extra in 0u32..3) {
            let lifted = p.mul(&LaurentPoly::one_minus_t_pow(extra));
            prop_assert_eq!(HilbertSeries::new(lifted, k + extra), HilbertSeries::new(p, k));
        }

        #[test]
        fn pure_regularity(start in -2i64..3, mut degrees in proptest::collection::btree_set(-3i64..8, 1..5)) {
            let degrees: Vec<i64> = std::mem::take(&mut degrees).into_iter().collect();
            let t = DegreeSequence::new(start, degrees.clone()).unwrap();
            let reg = regularity_from_betti(&herzog_kuhl(&t).table).unwrap();
            prop_assert_eq!(reg, degrees.last().unwrap() - t.end());
        }
    }
}
