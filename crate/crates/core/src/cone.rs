//! Membership in the cones `B^c_d` spanned by pure diagrams.
//!
//! Two routes: an exact LP over the generators supported in the target's
//! support, which also yields a separating functional when the answer is
//! no, and the greedy chain-subtraction algorithm for constant codimension.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lp::{feasibility, Feasibility};
use crate::pure::{enumerate_degree_sequences, herzog_kuhl};
use crate::tables::{
    compatible, rat, BettiTable, Bidegree, CodimensionSequence, DegreeSequence, Rational, Region,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("table has support at homological position {position}, outside [0, {dim}]")]
    OutsideShortRange { position: i64, dim: u32 },
}

/// `sum coefficient * beta(degrees)` with strictly positive coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    pub terms: Vec<(Rational, DegreeSequence)>,
}

impl Decomposition {
    pub fn reconstruct(&self) -> BettiTable {
        self.terms
            .iter()
            .fold(BettiTable::zero(), |acc, (coef, t)| acc.add_scaled(coef, &herzog_kuhl(t).table))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A rational linear functional on bidegrees.
pub type Functional = BTreeMap<Bidegree, Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipVerdict {
    Inside(Decomposition),
    /// Strictly negative on the target, nonnegative on every generator.
    Outside(Functional),
}

impl MembershipVerdict {
    pub fn is_inside(&self) -> bool {
        matches!(self, MembershipVerdict::Inside(_))
    }

    pub fn witness(&self) -> Option<&Decomposition> {
        match self {
            MembershipVerdict::Inside(d) => Some(d),
            MembershipVerdict::Outside(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Functional> {
        match self {
            MembershipVerdict::Outside(f) => Some(f),
            MembershipVerdict::Inside(_) => None,
        }
    }
}

/// The generators `beta(t)` the LP works with, in enumeration order.
pub fn generators(beta: &BettiTable, c: &CodimensionSequence) -> Vec<DegreeSequence> {
    enumerate_degree_sequences(&Region::of_table(beta), c)
}

/// Decides `beta in B^c_d` exactly.
pub fn membership(beta: &BettiTable, c: &CodimensionSequence) -> MembershipVerdict {
    if beta.is_zero() {
        return MembershipVerdict::Inside(Decomposition::default());
    }
    let support: Vec<Bidegree> = beta.support().into_iter().collect();
    let gens = generators(beta, c);
    if gens.is_empty() {
        return MembershipVerdict::Outside(trivial_certificate(beta));
    }
    let columns: Vec<Vec<Rational>> = gens
        .iter()
        .map(|t| {
            let table = herzog_kuhl(t).table;
            support.iter().map(|&(i, j)| table.get(i, j)).collect()
        })
        .collect();
    let rhs: Vec<Rational> = support.iter().map(|&(i, j)| beta.get(i, j)).collect();

    match feasibility(&columns, &rhs) {
        Feasibility::Feasible(x) => {
            let terms = x.into_iter().zip(gens).filter(|(coef, _)| coef.is_positive()).collect();
            let witness = Decomposition { terms };
            debug_assert_eq!(witness.reconstruct(), *beta);
            MembershipVerdict::Inside(witness)
        }
        Feasibility::Infeasible(y) => {
            let functional: Functional = support.into_iter().zip(y).filter(|(_, w)| !w.is_zero()).collect();
            debug_assert!(beta.pair(&functional).is_negative());
            MembershipVerdict::Outside(functional)
        }
    }
}

/// Checks a verdict against the definition: a witness must reconstruct
/// `beta` with compatible degree sequences and positive coefficients; a
/// certificate must separate `beta` from every generator.
pub fn verify_verdict(beta: &BettiTable, c: &CodimensionSequence, verdict: &MembershipVerdict) -> bool {
    match verdict {
        MembershipVerdict::Inside(w) => {
            w.terms.iter().all(|(coef, t)| coef.is_positive() && compatible(t, c)) && w.reconstruct() == *beta
        }
        MembershipVerdict::Outside(f) => {
            beta.pair(f).is_negative()
                && generators(beta, c).iter().all(|t| !herzog_kuhl(t).table.pair(f).is_negative())
        }
    }
}

/// Why the greedy algorithm stopped before reaching zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyFailureReason {
    NegativeEntry(Bidegree),
    /// Position inside the chain with no nonzero entry.
    MissingPosition(i64),
    /// Minimal degrees at consecutive positions are not strictly increasing.
    NotIncreasing {
        start: i64,
        degrees: Vec<i64>,
    },
    /// Loop did not terminate within the support-size bound.
    Stalled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyFailure {
    pub reason: GreedyFailureReason,
    /// Terms extracted before the failure.
    pub partial: Decomposition,
    /// What remained to be decomposed.
    pub remainder: BettiTable,
}

/// One subtraction step: the term taken and the entry that hit zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyStep {
    pub coefficient: Rational,
    pub degrees: DegreeSequence,
    pub binding: Bidegree,
}

/// Chain-subtraction decomposition for the constant sequence `c`.
pub fn greedy_decompose(beta: &BettiTable, c: u32) -> Result<Decomposition, GreedyFailure> {
    greedy_steps(beta, c)
        .map(|steps| Decomposition { terms: steps.into_iter().map(|s| (s.coefficient, s.degrees)).collect() })
}

/// As [`greedy_decompose`], keeping the binding entry of every step.
pub fn greedy_steps(beta: &BettiTable, c: u32) -> Result<Vec<GreedyStep>, GreedyFailure> {
    let mut remainder = beta.clone();
    let mut steps: Vec<GreedyStep> = Vec::new();
    let fail = |reason, steps: &[GreedyStep], remainder: &BettiTable| GreedyFailure {
        reason,
        partial: Decomposition {
            terms: steps.iter().map(|s| (s.coefficient.clone(), s.degrees.clone())).collect(),
        },
        remainder: remainder.clone(),
    };
    if let Some((key, _)) = beta.iter().find(|(_, v)| v.is_negative()) {
        return Err(fail(GreedyFailureReason::NegativeEntry(key), &steps, &remainder));
    }
    // Each step clears at least one entry.
    let budget = beta.len() + 1;
    while !remainder.is_zero() {
        if steps.len() >= budget {
            return Err(fail(GreedyFailureReason::Stalled, &steps, &remainder));
        }
        let start = *remainder.positions().iter().next().expect("nonzero table");
        let mut degrees = Vec::with_capacity(c as usize + 1);
        for i in start..=start + c as i64 {
            match remainder.degrees_at(i).first() {
                Some(&j) => degrees.push(j),
                None => return Err(fail(GreedyFailureReason::MissingPosition(i), &steps, &remainder)),
            }
        }
        let t = match DegreeSequence::new(start, degrees.clone()) {
            Ok(t) => t,
            Err(_) => {
                return Err(fail(GreedyFailureReason::NotIncreasing { start, degrees }, &steps, &remainder))
            }
        };
        let pure = herzog_kuhl(&t).table;
        let (binding, coefficient) = t
            .points()
            .map(|(i, j)| ((i, j), remainder.get(i, j) / pure.get(i, j)))
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("degree sequences are nonempty");
        remainder = remainder.add_scaled(&-coefficient.clone(), &pure);
        // The binding entry is cleared exactly; the others stay nonnegative.
        debug_assert!(remainder.entry(binding.0, binding.1).is_none());
        steps.push(GreedyStep { coefficient, degrees: t, binding });
    }
    Ok(steps)
}

/// Membership in the cone of short complexes: `c = (..., Empty, d, d, ...)`
/// intersected with positions `[0, d]`.
pub fn short_complex_membership(beta: &BettiTable, d: u32) -> Result<MembershipVerdict, ConeError> {
    if let Some(&position) = beta.positions().iter().find(|&&p| p < 0 || p > d as i64) {
        return Err(ConeError::OutsideShortRange { position, dim: d });
    }
    Ok(membership(beta, &CodimensionSequence::short(d)))
}

/// A functional for the case with no generators at all.
pub fn trivial_certificate(beta: &BettiTable) -> Functional {
    beta.iter().map(|(k, v)| (k, if v.is_negative() { rat(1) } else { rat(-1) })).collect()
}
