use std::collections::BTreeSet;

use boij_core::cone::{greedy_decompose, membership, verify_verdict};
use boij_core::hilbert::{g_beta, hilb_from_betti, HilbertSeries, LaurentPoly};
use boij_core::io::{parse_betti_table, serialize_betti_json, serialize_betti_lines};
use boij_core::koszul::{dim_codim, koszul_betti, monomial_hilbert, MonomialModule};
use boij_core::pure::{enumerate_degree_sequences, herzog_kuhl, is_pure};
use boij_core::sheaf::{
    binomial_polynomial, en_scale, en_sequence, euler_characteristic, line_bundle_table, product_p1_table,
};
use boij_core::tables::{
    compatible, ratio, BettiTable, CodimLevel, CodimensionSequence, DegreeSequence, Rational, Region,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..7, 1i64..5).prop_map(|(n, d)| ratio(n, d))
}

fn nonneg_rational() -> impl Strategy<Value = Rational> {
    (0i64..7, 1i64..5).prop_map(|(n, d)| ratio(n, d))
}

fn table() -> impl Strategy<Value = BettiTable> {
    proptest::collection::vec(((-1i64..4, -2i64..6), rational()), 0..8).prop_map(BettiTable::from_entries)
}

fn degree_sequence() -> impl Strategy<Value = DegreeSequence> {
    (-2i64..3, proptest::collection::btree_set(-4i64..9, 1..5))
        .prop_map(|(start, set)| DegreeSequence::new(start, set.into_iter().collect()).unwrap())
}

fn module() -> impl Strategy<Value = MonomialModule> {
    (1usize..=3).prop_flat_map(|d| {
        proptest::collection::vec(proptest::collection::vec(0u32..=3, d), 0..4).prop_map(move |gens| {
            let gens: Vec<Vec<u32>> = gens.into_iter().filter(|g| g.iter().any(|&x| x > 0)).collect();
            MonomialModule::quotient(d, gens).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in table(), b in table(), c in table()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.add(&b).iter().all(|(_, v)| *v != ratio(0, 1)));
    }

    #[test]
    fn scaling_distributes(a in table(), b in table(), x in nonneg_rational(), y in nonneg_rational()) {
        let lhs = a.add(&b).scale(&x).unwrap();
        prop_assert_eq!(lhs, a.scale(&x).unwrap().add(&b.scale(&x).unwrap()));
        let sum = x.clone() + y.clone();
        prop_assert_eq!(
            a.scale(&sum).unwrap(),
            a.scale(&x).unwrap().add(&a.scale(&y).unwrap())
        );
    }

    #[test]
    fn pure_diagrams_are_normalized_and_recognized(t in degree_sequence(), b in (1i64..9, 1i64..5)) {
        let hk = herzog_kuhl(&t);
        prop_assert!(hk.is_normalized());
        prop_assert_eq!(hk.table.len(), t.codim() + 1);
        prop_assert!(hk.table.is_nonnegative());
        let b = ratio(b.0, b.1);
        prop_assert_eq!(is_pure(&hk.table.scale(&b).unwrap()), Some((b, t)));
    }

    #[test]
    fn pure_diagrams_vanish_to_order_codim(t in degree_sequence()) {
        let g = g_beta(&herzog_kuhl(&t).table);
        prop_assert_eq!(g.order_at_one(), Some(t.codim() as u32));
    }

    #[test]
    fn g_beta_is_linear(a in table(), b in table(), x in rational()) {
        prop_assert_eq!(g_beta(&a.add(&b)), g_beta(&a).add(&g_beta(&b)));
        prop_assert_eq!(g_beta(&a.scale_signed(&x)), g_beta(&a).scale(&x));
    }

    #[test]
    fn table_text_round_trip(a in table()) {
        let text = serialize_betti_lines(&a);
        prop_assert_eq!(&parse_betti_table(&text).unwrap().value, &a);
        prop_assert_eq!(serialize_betti_lines(&parse_betti_table(&text).unwrap().value), text);
        prop_assert_eq!(parse_betti_table(&serialize_betti_json(&a)).unwrap().value, a);
    }

    #[test]
    fn enumeration_is_compatible_and_inside_region(
        points in proptest::collection::btree_set((-1i64..4, 0i64..6), 0..12),
        c in 0u32..=3,
        d in 3u32..=4,
    ) {
        let region = Region::Points(points.clone());
        for seq in [CodimensionSequence::constant(c, d).unwrap(), CodimensionSequence::module(c, d).unwrap()] {
            let out = enumerate_degree_sequences(&region, &seq);
            let unique: BTreeSet<_> = out.iter().cloned().collect();
            prop_assert_eq!(unique.len(), out.len());
            prop_assert!(out.windows(2).all(|w| w[0] < w[1]));
            for t in &out {
                prop_assert!(compatible(t, &seq));
                prop_assert!(t.points().all(|p| points.contains(&p)));
            }
        }
    }

    #[test]
    fn positive_combinations_are_inside(
        seqs in proptest::collection::vec((proptest::collection::btree_set(0i64..7, 3), 1i64..4), 1..4),
    ) {
        let c = CodimensionSequence::constant(2, 2).unwrap();
        let beta = seqs.iter().fold(BettiTable::zero(), |acc, (set, w)| {
            let t = DegreeSequence::new(0, set.iter().copied().collect()).unwrap();
            acc.add_scaled(&ratio(*w, 1), &herzog_kuhl(&t).table)
        });
        let verdict = membership(&beta, &c);
        prop_assert!(verdict.is_inside());
        prop_assert!(verify_verdict(&beta, &c, &verdict));
        let greedy = greedy_decompose(&beta, 2).unwrap();
        prop_assert_eq!(greedy.reconstruct(), beta);
    }

    #[test]
    fn verdicts_are_certified(a in table(), c in 0u32..=2) {
        let seq = CodimensionSequence::module(c, 2).unwrap();
        let beta = BettiTable::from_entries(a.iter().map(|(k, v)| (k, num_traits::Signed::abs(v))));
        let verdict = membership(&beta, &seq);
        prop_assert!(verify_verdict(&beta, &seq, &verdict));
        if let Ok(greedy) = greedy_decompose(&beta, c) {
            prop_assert_eq!(greedy.reconstruct(), beta.clone());
            prop_assert!(membership(&beta, &CodimensionSequence::constant(c, 2).unwrap()).is_inside());
        }
    }

    #[test]
    fn koszul_matches_hilbert_recursion(m in module()) {
        let beta = koszul_betti(&m).unwrap();
        let ring = HilbertSeries::polynomial_ring(m.d() as u32);
        prop_assert_eq!(hilb_from_betti(&beta, &ring), monomial_hilbert(&m));
        let dc = dim_codim(&m).unwrap();
        let top = *beta.positions().iter().next_back().unwrap();
        prop_assert!(dc.codim as i64 <= top);
    }

    #[test]
    fn koszul_is_twist_equivariant(m in module(), s in -3i64..4) {
        prop_assert_eq!(koszul_betti(&m.twisted(s)).unwrap(), koszul_betti(&m).unwrap().shift_degrees(s));
    }

    #[test]
    fn line_bundles_satisfy_serre_duality_and_riemann_roch(m in 1usize..=3, a in -6i64..=6, t in -10i64..=10) {
        let table = line_bundle_table(m, a).unwrap();
        let dual = line_bundle_table(m, -a).unwrap();
        prop_assert_eq!(table.evaluate(0, t), dual.evaluate(m as i64, -t - m as i64 - 1));
        prop_assert_eq!(euler_characteristic(&table, t), binomial_polynomial(a + t, m));
    }

    #[test]
    fn kunneth_on_p1_is_the_line_bundle(a in -6i64..=6, t in -10i64..=10) {
        let product = product_p1_table(&[a]).unwrap();
        let line = line_bundle_table(1, a).unwrap();
        for i in 0..=1 {
            prop_assert_eq!(product.evaluate(i, t), line.evaluate(i, t));
        }
    }
}

#[test]
fn en_scale_formula() {
    for m in 1..=3 {
        for p in [2u64, 3, 5] {
            let seq = en_sequence(m, p).unwrap();
            for n in 0..=6 {
                assert_eq!(seq.table(n).evaluate(0, 0), en_scale(m, p, n));
                let q = BigInt::from(p).pow(n);
                let expected: BigInt = (1..=m as i64).map(|j| &q * j + 1).product();
                assert_eq!(BigInt::from(en_scale(m, p, n)), expected);
            }
        }
    }
}

#[test]
fn codim_sequences_stay_monotone() {
    let c = CodimensionSequence::from_jumps(
        4,
        CodimLevel::Empty,
        [(-2, CodimLevel::Finite(0)), (1, CodimLevel::Finite(3)), (5, CodimLevel::Infinite)],
    )
    .unwrap();
    let values: Vec<CodimLevel> = (-10..10).map(|i| c.at(i)).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn hilbert_of_betti_for_residue_field() {
    let beta = herzog_kuhl(&DegreeSequence::new(0, vec![0, 1, 2, 3]).unwrap()).table;
    let h = hilb_from_betti(&beta, &HilbertSeries::polynomial_ring(3));
    assert_eq!(h, HilbertSeries::new(LaurentPoly::one(), 0));
}
