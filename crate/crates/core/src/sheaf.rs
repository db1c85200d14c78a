//! Cohomology tables `gamma_{i,t} = rank H^i(F(t))` on `P^m`, evaluated
//! lazily, and finite-horizon checks of the Ulrich, lim Ulrich and
//! `u`-trivial conditions.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::hilbert::binomial;
use crate::tables::{Rational, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("ambient dimension must be at least 1")]
    ZeroDimension,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("twist {0} overflows")]
    Overflow(String),
    #[error("window must cover i in [0, {m}] and t in [{t_lo}, {t_hi}]")]
    WindowTooSmall { m: usize, t_lo: i64, t_hi: i64 },
    #[error("horizon n_max = {0} is too short, need at least 2")]
    HorizonTooShort(u32),
    #[error("scale at n = {0} is not positive")]
    NonPositiveScale(u32),
}

type Evaluator = dyn Fn(usize, i64) -> BigUint + Send + Sync;

/// A cohomology table on `P^m`, as a function `(i, t) -> gamma_{i,t}`.
#[derive(Clone)]
pub struct CohomTable {
    m: usize,
    label: String,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for CohomTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CohomTable").field("m", &self.m).field("label", &self.label).finish()
    }
}

fn binomial_u(n: i64, k: i64) -> BigUint {
    binomial(n, k).to_biguint().expect("binomials are nonnegative")
}

/// `h^0(P^1, O(n))`.
pub fn h0_p1(n: i64) -> BigUint {
    if n >= 0 {
        BigUint::from((n + 1) as u64)
    } else {
        BigUint::zero()
    }
}

/// `h^1(P^1, O(n))`.
pub fn h1_p1(n: i64) -> BigUint {
    if n <= -2 {
        BigUint::from((-n - 1) as u64)
    } else {
        BigUint::zero()
    }
}

impl CohomTable {
    pub fn from_fn(
        m: usize,
        label: impl Into<String>,
        eval: impl Fn(usize, i64) -> BigUint + Send + Sync + 'static,
    ) -> Self {
        Self { m, label: label.into(), eval: Arc::new(eval) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `gamma_{i,t}`; zero for `i` outside `[0, m]`.
    pub fn evaluate(&self, i: i64, t: i64) -> BigUint {
        if i < 0 || i as usize > self.m {
            return BigUint::zero();
        }
        (self.eval)(i as usize, t)
    }

    pub fn direct_sum(&self, other: &CohomTable) -> CohomTable {
        assert_eq!(self.m, other.m, "tables live on the same projective space");
        let (a, b) = (self.clone(), other.clone());
        CohomTable::from_fn(self.m, format!("{} + {}", self.label, other.label), move |i, t| {
            a.evaluate(i as i64, t) + b.evaluate(i as i64, t)
        })
    }

    /// `F^r`.
    pub fn multiple(&self, r: u32) -> CohomTable {
        let base = self.clone();
        CohomTable::from_fn(self.m, format!("{r}*{}", self.label), move |i, t| {
            base.evaluate(i as i64, t) * BigUint::from(r)
        })
    }

    /// Values over a window, row by row.
    pub fn materialize(&self, window: &Window) -> Vec<((i64, i64), BigUint)> {
        window.points().map(|(i, t)| ((i, t), self.evaluate(i, t))).collect()
    }
}

/// `O(a)` on `P^m`.
pub fn line_bundle_table(m: usize, a: i64) -> Result<CohomTable, SheafError> {
    if m == 0 {
        return Err(SheafError::ZeroDimension);
    }
    let mm = m as i64;
    Ok(CohomTable::from_fn(m, format!("O({a}) on P^{m}"), move |i, t| {
        let n = a + t;
        if i == 0 && n >= 0 {
            binomial_u(n + mm, mm)
        } else if i == m && n <= -mm - 1 {
            binomial_u(-n - 1, mm)
        } else {
            BigUint::zero()
        }
    }))
}

/// Pushforward to `P^m` of `O(a_1, ..., a_m)` on `(P^1)^m`, the `t`-th twist
/// being `O(a_1 + t, ..., a_m + t)`; cohomology by Kunneth.
pub fn product_p1_table(twists: &[i64]) -> Result<CohomTable, SheafError> {
    if twists.is_empty() {
        return Err(SheafError::ZeroDimension);
    }
    let m = twists.len();
    let a = twists.to_vec();
    let label = format!("O{:?} on (P^1)^{m}", twists);
    Ok(CohomTable::from_fn(m, label, move |i, t| {
        // Elementary symmetric sum over which factors contribute h^1.
        let mut by_degree = vec![BigUint::zero(); m + 1];
        by_degree[0] = BigUint::one();
        for &aj in &a {
            let (h0, h1) = (h0_p1(aj + t), h1_p1(aj + t));
            for k in (0..=m).rev() {
                let keep = &by_degree[k] * &h0;
                let lift = if k > 0 { &by_degree[k - 1] * &h1 } else { BigUint::zero() };
                by_degree[k] = keep + lift;
            }
        }
        by_degree[i].clone()
    }))
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

fn checked_pow(p: u64, n: u32) -> Result<i64, SheafError> {
    p.checked_pow(n)
        .and_then(|v| i64::try_from(v).ok())
        .ok_or_else(|| SheafError::Overflow(format!("{p}^{n}")))
}

/// `phi^n_* F` for the Frobenius `phi`: `gamma_{i,t} = gamma_{i, p^n t}(F)`.
pub fn frobenius_pushforward(table: &CohomTable, p: u64, n: u32) -> Result<CohomTable, SheafError> {
    if !is_prime(p) {
        return Err(SheafError::NotPrime(p));
    }
    let q = checked_pow(p, n)?;
    let base = table.clone();
    Ok(CohomTable::from_fn(table.m, format!("phi^{n}_*({})", table.label), move |i, t| {
        base.evaluate(i as i64, q * t)
    }))
}

type TableGenerator = dyn Fn(u32) -> CohomTable + Send + Sync;
type ScaleFn = dyn Fn(u32) -> BigUint + Send + Sync;

/// `n -> F_n` with a positive normalizer `n -> u_n`.
#[derive(Clone)]
pub struct TableSequence {
    m: usize,
    generator: Arc<TableGenerator>,
    scale: Arc<ScaleFn>,
}

impl fmt::Debug for TableSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TableSequence").field("m", &self.m).finish_non_exhaustive()
    }
}

impl TableSequence {
    pub fn new(
        m: usize,
        generator: impl Fn(u32) -> CohomTable + Send + Sync + 'static,
        scale: impl Fn(u32) -> BigUint + Send + Sync + 'static,
    ) -> Self {
        Self { m, generator: Arc::new(generator), scale: Arc::new(scale) }
    }

    /// The same table at every `n`.
    pub fn constant(table: CohomTable, scale: u64) -> Self {
        let m = table.m();
        Self::new(m, move |_| table.clone(), move |_| BigUint::from(scale))
    }

    /// Same tables, new normalizer.
    pub fn with_scale(&self, scale: impl Fn(u32) -> BigUint + Send + Sync + 'static) -> Self {
        Self { m: self.m, generator: self.generator.clone(), scale: Arc::new(scale) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn table(&self, n: u32) -> CohomTable {
        (self.generator)(n)
    }

    pub fn scale(&self, n: u32) -> BigUint {
        (self.scale)(n)
    }
}

/// `G_n = phi^n_*(E_n)` with `E_n = rho_* O(p^n, 2p^n, ..., m p^n)` on
/// `(P^1)^m`, normalized by `gamma_{0,0}(G_n) = prod_j (j p^n + 1)`.
pub fn en_sequence(m: usize, p: u64) -> Result<TableSequence, SheafError> {
    if m == 0 {
        return Err(SheafError::ZeroDimension);
    }
    if !is_prime(p) {
        return Err(SheafError::NotPrime(p));
    }
    // For every n the twists j p^n + p^n t are all negative once t <= -m-1
    // and all nonnegative once t >= 0, so conditions (2) and (3) hold
    // uniformly with t_0 = -m-1 and t_1 = 0; the checker only reports what
    // it evaluated inside its window.
    let generator = move |n: u32| {
        let q = checked_pow(p, n).expect("p^n fits in i64");
        let twists: Vec<i64> = (1..=m as i64).map(|j| j * q).collect();
        let pushed = product_p1_table(&twists).expect("m >= 1");
        frobenius_pushforward(&pushed, p, n).expect("p is prime")
    };
    let scale = move |n: u32| en_scale(m, p, n);
    Ok(TableSequence::new(m, generator, scale))
}

/// `prod_{j=1..m} (j p^n + 1)`.
pub fn en_scale(m: usize, p: u64, n: u32) -> BigUint {
    let q = BigUint::from(p).pow(n);
    (1..=m as u64).fold(BigUint::one(), |acc, j| acc * (&q * j + 1u32))
}

/// Where an Ulrich table may be nonzero: `i = 0, t >= 0` or `i = m, t <= -m-1`.
pub fn in_allowed_region(m: usize, i: i64, t: i64) -> bool {
    let m = m as i64;
    (i == 0 && t >= 0) || (i == m && t <= -m - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlrichReport {
    /// Verdict over the checked window only.
    pub window: Window,
    /// No nonzero entries outside the allowed region.
    pub vanishing: bool,
    /// `vanishing` and the table is nonzero.
    pub ulrich: bool,
    /// `gamma_{0,0}`.
    pub rank: BigUint,
    pub violations: Vec<((i64, i64), BigUint)>,
}

/// Vanishing test on a finite window covering `t in [-2m-2, 2m+2]`.
pub fn ulrich_test(table: &CohomTable, window: &Window) -> Result<UlrichReport, SheafError> {
    let m = table.m();
    let reach = 2 * m as i64 + 2;
    if window.i_min > 0 || window.i_max < m as i64 || window.j_min > -reach || window.j_max < reach {
        return Err(SheafError::WindowTooSmall { m, t_lo: -reach, t_hi: reach });
    }
    let violations: Vec<_> = window
        .points()
        .filter(|&(i, t)| !in_allowed_region(m, i, t))
        .map(|(i, t)| ((i, t), table.evaluate(i, t)))
        .filter(|(_, v)| !v.is_zero())
        .collect();
    let rank = table.evaluate(0, 0);
    let vanishing = violations.is_empty();
    Ok(UlrichReport { window: *window, vanishing, ulrich: vanishing && !rank.is_zero(), rank, violations })
}

/// The smallest window `ulrich_test` accepts.
pub fn minimal_ulrich_window(m: usize) -> Window {
    let reach = 2 * m as i64 + 2;
    Window::new((0, m as i64), (-reach, reach)).expect("nonempty")
}

/// Ratios `gamma_{i,t}(F_n) / u_n` for one bidegree across the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioTrack {
    pub i: i64,
    pub t: i64,
    /// `(n, ratio)` in increasing `n`.
    pub ratios: Vec<(u32, Rational)>,
    /// Ratios over the second half of the horizon never increase.
    pub tail_non_increasing: bool,
}

impl RatioTrack {
    pub fn last(&self) -> &Rational {
        &self.ratios.last().expect("horizon is nonempty").1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecaySummary {
    pub tracks: Vec<RatioTrack>,
    pub max_final: Rational,
    pub max_final_at: Option<(i64, i64)>,
    pub tails_non_increasing: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimUlrichReport {
    pub window: Window,
    pub n_min: u32,
    pub n_max: u32,
    pub threshold: Rational,
    /// Condition (1): `gamma_{0,0}(F_n) != 0` for every sampled `n`.
    pub sections_nonzero: bool,
    pub sections_zero_at: Vec<u32>,
    /// Condition (2): largest `t_0` in the window with `gamma_{0,t} = 0`
    /// for all `t <= t_0` in the window and every sampled `n`.
    pub t0: Option<i64>,
    /// Condition (3): smallest `t_1` in the window with
    /// `gamma_{>=1,t} = 0` for all `t >= t_1` in the window and every `n`.
    pub t1: Option<i64>,
    /// Condition (4) over the window's non-allowed bidegrees.
    pub decay: DecaySummary,
    pub pass: bool,
}

fn ratio_of(value: &BigUint, scale: &BigUint) -> Rational {
    Rational::new(BigInt::from(value.clone()), BigInt::from(scale.clone()))
}

fn non_increasing_tail(ratios: &[(u32, Rational)], n_min: u32, n_max: u32) -> bool {
    let from = n_min + (n_max - n_min) / 2;
    let tail: Vec<&Rational> = ratios.iter().filter(|(n, _)| *n >= from).map(|(_, r)| r).collect();
    tail.windows(2).all(|w| w[1] <= w[0])
}

fn decay_summary(
    seq: &TableSequence,
    points: &[(i64, i64)],
    n_min: u32,
    n_max: u32,
    threshold: &Rational,
) -> Result<DecaySummary, SheafError> {
    let mut tables = Vec::new();
    for n in n_min..=n_max {
        let scale = seq.scale(n);
        if scale.is_zero() {
            return Err(SheafError::NonPositiveScale(n));
        }
        tables.push((n, seq.table(n), scale));
    }
    let tracks: Vec<RatioTrack> = points
        .iter()
        .map(|&(i, t)| {
            let ratios: Vec<(u32, Rational)> =
                tables.iter().map(|(n, table, scale)| (*n, ratio_of(&table.evaluate(i, t), scale))).collect();
            let tail_non_increasing = non_increasing_tail(&ratios, n_min, n_max);
            RatioTrack { i, t, ratios, tail_non_increasing }
        })
        .collect();
    let mut max_final = Rational::zero();
    let mut max_final_at = None;
    for track in &tracks {
        if max_final_at.is_none() || *track.last() > max_final {
            max_final = track.last().clone();
            max_final_at = Some((track.i, track.t));
        }
    }
    let tails_non_increasing = tracks.iter().all(|t| t.tail_non_increasing);
    let pass = tails_non_increasing && tracks.iter().all(|t| t.last() <= threshold);
    Ok(DecaySummary { tracks, max_final, max_final_at, tails_non_increasing, pass })
}

/// Finite-horizon check of the four lim Ulrich conditions for `n = 0..=n_max`.
pub fn lim_ulrich_check(
    seq: &TableSequence,
    window: &Window,
    n_max: u32,
    threshold: &Rational,
) -> Result<LimUlrichReport, SheafError> {
    if n_max < 2 {
        return Err(SheafError::HorizonTooShort(n_max));
    }
    let m = seq.m();
    let tables: Vec<CohomTable> = (0..=n_max).map(|n| seq.table(n)).collect();

    let sections_zero_at: Vec<u32> =
        (0..=n_max).filter(|&n| tables[n as usize].evaluate(0, 0).is_zero()).collect();

    let ts: Vec<i64> = (window.j_min..=window.j_max).collect();
    let h0_vanishes = |t: i64| tables.iter().all(|f| f.evaluate(0, t).is_zero());
    let higher_vanish = |t: i64| tables.iter().all(|f| (1..=m as i64).all(|i| f.evaluate(i, t).is_zero()));
    let t0 = ts.iter().take_while(|&&t| h0_vanishes(t)).last().copied();
    let t1 = ts.iter().rev().take_while(|&&t| higher_vanish(t)).last().copied();

    let points: Vec<(i64, i64)> = window
        .points()
        .filter(|&(i, t)| (0..=m as i64).contains(&i) && !in_allowed_region(m, i, t))
        .collect();
    let decay = decay_summary(seq, &points, 0, n_max, threshold)?;
    let sections_nonzero = sections_zero_at.is_empty();
    let pass = sections_nonzero && t0.is_some() && t1.is_some() && decay.pass;
    Ok(LimUlrichReport {
        window: *window,
        n_min: 0,
        n_max,
        threshold: threshold.clone(),
        sections_nonzero,
        sections_zero_at,
        t0,
        t1,
        decay,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UTrivialReport {
    pub window: Window,
    pub n_max: u32,
    pub threshold: Rational,
    pub decay: DecaySummary,
    pub pass: bool,
}

/// Ratios `gamma_{i,t}(C_n) / u_n` over every bidegree of the window for
/// `n = 1..=n_max`.
pub fn u_trivial_check(
    seq: &TableSequence,
    window: &Window,
    n_max: u32,
    threshold: &Rational,
) -> Result<UTrivialReport, SheafError> {
    if n_max < 2 {
        return Err(SheafError::HorizonTooShort(n_max));
    }
    let points: Vec<(i64, i64)> = window.points().collect();
    let decay = decay_summary(seq, &points, 1, n_max, threshold)?;
    let pass = decay.pass;
    Ok(UTrivialReport { window: *window, n_max, threshold: threshold.clone(), decay, pass })
}

/// `sum_i (-1)^i gamma_{i,t}` as a signed integer.
pub fn euler_characteristic(table: &CohomTable, t: i64) -> BigInt {
    (0..=table.m() as i64).fold(BigInt::zero(), |acc, i| {
        let v = BigInt::from(table.evaluate(i, t));
        if i % 2 == 0 {
            acc + v
        } else {
            acc - v
        }
    })
}

/// `C(n + m, m)` continued polynomially to every integer `n`.
pub fn binomial_polynomial(n: i64, m: usize) -> BigInt {
    // (n+1)(n+2)...(n+m) / m!
    let num = (1..=m as i64).fold(BigInt::one(), |acc, k| acc * BigInt::from(n + k));
    let den = (1..=m as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
    num / den
}
