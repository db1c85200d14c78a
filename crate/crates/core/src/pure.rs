//! Herzog-Kuhl pure diagrams and enumeration of the degree sequences that
//! span a cone inside a finite region.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::tables::{
    compatible, BettiTable, CodimLevel, CodimensionSequence, DegreeSequence, Rational, Region,
};

/// `beta(t)` together with the degree sequence it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureDiagram {
    pub degrees: DegreeSequence,
    pub table: BettiTable,
    /// `prod_{n != a} |t_n - t_a|`, the numerator shared by every entry.
    pub normalization: Rational,
}

fn distance_product(degrees: &[i64], k: usize) -> BigInt {
    degrees
        .iter()
        .enumerate()
        .filter(|&(n, _)| n != k)
        .map(|(_, &t)| BigInt::from((t - degrees[k]).abs()))
        .product()
}

/// The pure diagram `beta(t)`, with entry `1` at `(a, t_a)`.
pub fn herzog_kuhl(t: &DegreeSequence) -> PureDiagram {
    let degrees = t.degrees();
    let numerator = distance_product(degrees, 0);
    let table = BettiTable::from_entries(
        t.points()
            .enumerate()
            .map(|(k, point)| (point, Rational::new(numerator.clone(), distance_product(degrees, k)))),
    );
    PureDiagram { degrees: t.clone(), table, normalization: Rational::from_integer(numerator) }
}

/// Returns `(b, t)` when `beta = b * beta(t)` for a positive rational `b`.
pub fn is_pure(beta: &BettiTable) -> Option<(Rational, DegreeSequence)> {
    let positions: Vec<i64> = beta.positions().into_iter().collect();
    let start = *positions.first()?;
    if positions.iter().enumerate().any(|(k, &p)| p != start + k as i64) {
        return None;
    }
    let mut degrees = Vec::with_capacity(positions.len());
    for &p in &positions {
        match beta.degrees_at(p).as_slice() {
            [j] => degrees.push(*j),
            _ => return None,
        }
    }
    let t = DegreeSequence::new(start, degrees).ok()?;
    let b = beta.get(start, t.degrees()[0]);
    if !b.is_positive() {
        return None;
    }
    let candidate = herzog_kuhl(&t).table.scale_signed(&b);
    (candidate == *beta).then_some((b, t))
}

/// Every degree sequence compatible with `c` whose points all lie in
/// `region`, sorted by `(start, degrees)`.
pub fn enumerate_degree_sequences(region: &Region, c: &CodimensionSequence) -> Vec<DegreeSequence> {
    let columns = region.columns();
    let d = c.ambient_dim() as usize;
    let mut out = Vec::new();
    for &start in columns.keys() {
        let lower = c.at(start);
        let upper = c.at(start + 1);
        let CodimLevel::Finite(min_l) = lower else {
            continue;
        };
        for l in (min_l as usize)..=d {
            if CodimLevel::Finite(l as u32) > upper {
                break;
            }
            let mut chain = Vec::with_capacity(l + 1);
            extend_chains(&columns, start, l, &mut chain, &mut out);
        }
    }
    out.sort();
    out.dedup();
    debug_assert!(out.iter().all(|t| compatible(t, c)));
    out
}

fn extend_chains(
    columns: &std::collections::BTreeMap<i64, Vec<i64>>,
    start: i64,
    l: usize,
    chain: &mut Vec<i64>,
    out: &mut Vec<DegreeSequence>,
) {
    if chain.len() == l + 1 {
        out.push(DegreeSequence::new(start, chain.clone()).expect("chain is increasing"));
        return;
    }
    let position = start + chain.len() as i64;
    let Some(column) = columns.get(&position) else {
        return;
    };
    for &j in column {
        if chain.last().is_none_or(|&prev| j > prev) {
            chain.push(j);
            extend_chains(columns, start, l, chain, out);
            chain.pop();
        }
    }
}

/// The entry `(a, t_a)` of every pure diagram.
pub fn leading_entry(diagram: &PureDiagram) -> Rational {
    let t = &diagram.degrees;
    diagram.table.entry(t.start(), t.degrees()[0]).cloned().unwrap_or_else(Rational::zero)
}

impl PureDiagram {
    pub fn is_normalized(&self) -> bool {
        leading_entry(self).is_one()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::tables::{rat, Window};

    fn seq(start: i64, d: &[i64]) -> DegreeSequence {
        DegreeSequence::new(start, d.to_vec()).unwrap()
    }

    #[test]
    fn koszul_shape() {
        let hk = herzog_kuhl(&seq(0, &[0, 1, 2]));
        assert_eq!(hk.table, BettiTable::from_ints(&[(0, 0, 1), (1, 1, 2), (2, 2, 1)]));
        assert_eq!(hk.normalization, rat(2));
    }

    #[test]
    fn square_of_maximal_ideal() {
        let hk = herzog_kuhl(&seq(0, &[0, 2, 3]));
        assert_eq!(hk.table, BettiTable::from_ints(&[(0, 0, 1), (1, 2, 3), (2, 3, 2)]));
        assert!(hk.is_normalized());
    }

    #[test]
    fn singleton() {
        let hk = herzog_kuhl(&seq(3, &[5]));
        assert_eq!(hk.table, BettiTable::from_ints(&[(3, 5, 1)]));
    }

    #[test]
    fn purity_recognition() {
        let t = BettiTable::from_ints(&[(0, 0, 1), (1, 2, 3), (2, 3, 2)]);
        assert_eq!(is_pure(&t), Some((rat(1), seq(0, &[0, 2, 3]))));
        let t2 = BettiTable::from_ints(&[(0, 0, 2), (1, 2, 6), (2, 3, 4)]);
        assert_eq!(is_pure(&t2), Some((rat(2), seq(0, &[0, 2, 3]))));
        let mixed = BettiTable::from_ints(&[(0, 0, 1), (1, 1, 2), (1, 2, 3), (2, 2, 1), (2, 3, 2)]);
        assert_eq!(is_pure(&mixed), None);
        assert_eq!(is_pure(&BettiTable::zero()), None);
        // right shape, wrong ratios
        assert_eq!(is_pure(&BettiTable::from_ints(&[(0, 0, 1), (1, 2, 2), (2, 3, 2)])), None);
        // gap in the positions
        assert_eq!(is_pure(&BettiTable::from_ints(&[(0, 0, 1), (2, 3, 2)])), None);
    }

    #[test]
    fn enumeration_examples() {
        let region = Region::Points(BTreeSet::from([(0, 0), (1, 2), (2, 3)]));
        let constant0 = CodimensionSequence::constant(0, 2).unwrap();
        assert_eq!(
            enumerate_degree_sequences(&region, &constant0),
            vec![seq(0, &[0]), seq(1, &[2]), seq(2, &[3])]
        );
        let module2 = CodimensionSequence::module(2, 2).unwrap();
        assert_eq!(enumerate_degree_sequences(&region, &module2), vec![seq(0, &[0, 2, 3])]);
        let empty = Region::Points(BTreeSet::new());
        assert!(enumerate_degree_sequences(&empty, &module2).is_empty());
    }

    #[test]
    fn enumeration_in_rectangle_matches_brute_force() {
        let window = Window::new((-1, 2), (0, 3)).unwrap();
        let c = CodimensionSequence::from_jumps(
            2,
            CodimLevel::Empty,
            [(0, CodimLevel::Finite(1)), (1, CodimLevel::Finite(2))],
        )
        .unwrap();
        let got = enumerate_degree_sequences(&window.into(), &c);
        let mut brute = Vec::new();
        for start in -1..=2i64 {
            for mask in 1u32..16 {
                let degrees: Vec<i64> = (0..4).filter(|b| mask >> b & 1 == 1).collect();
                let Ok(t) = DegreeSequence::new(start, degrees) else { continue };
                if t.end() <= 2 && compatible(&t, &c) {
                    brute.push(t);
                }
            }
        }
        brute.sort();
        assert_eq!(got, brute);
        assert!(!got.is_empty());
    }
}
