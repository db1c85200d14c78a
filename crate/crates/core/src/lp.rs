//! Exact phase-one simplex for `A x = b, x >= 0`.
//!
//! Dense tableau over `BigRational` with Bland's rule, so it terminates on
//! degenerate problems and visits the same pivots on every run.

use num_traits::{One, Signed, Zero};

use crate::tables::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// A nonnegative solution of `A x = b`.
    Feasible(Vec<Rational>),
    /// `y` with `y^T A >= 0` componentwise and `y^T b < 0` (Farkas).
    Infeasible(Vec<Rational>),
}

/// Solves the feasibility problem for `columns` (each of length `rhs.len()`).
pub fn feasibility(columns: &[Vec<Rational>], rhs: &[Rational]) -> Feasibility {
    let m = rhs.len();
    let n = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == m));
    if m == 0 {
        return Feasibility::Feasible(vec![Rational::zero(); n]);
    }

    let flips: Vec<bool> = rhs.iter().map(|b| b.is_negative()).collect();
    let width = n + m + 1;
    let mut tableau: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let sign = if flips[r] { -Rational::one() } else { Rational::one() };
            let mut row = Vec::with_capacity(width);
            row.extend(columns.iter().map(|col| &col[r] * &sign));
            row.extend((0..m).map(|k| if k == r { Rational::one() } else { Rational::zero() }));
            row.push(&rhs[r] * &sign);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let cost = |j: usize| if j >= n && j < n + m { Rational::one() } else { Rational::zero() };

    loop {
        let entering = (0..n + m).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let reduced = (0..m).fold(cost(j), |acc, k| acc - cost(basis[k]) * &tableau[k][j]);
            reduced.is_negative()
        });
        let Some(col) = entering else { break };

        let mut leaving: Option<(usize, Rational)> = None;
        for k in 0..m {
            if !tableau[k][col].is_positive() {
                continue;
            }
            let ratio = &tableau[k][width - 1] / &tableau[k][col];
            let better = match &leaving {
                None => true,
                Some((best, best_ratio)) => {
                    ratio < *best_ratio || (ratio == *best_ratio && basis[k] < basis[*best])
                }
            };
            if better {
                leaving = Some((k, ratio));
            }
        }
        // Phase one is bounded below by zero, so some row always qualifies.
        let (row, _) = leaving.expect("phase-one objective is bounded");
        pivot(&mut tableau, row, col);
        basis[row] = col;
    }

    let objective = (0..m).fold(Rational::zero(), |acc, k| acc + cost(basis[k]) * &tableau[k][width - 1]);
    if objective.is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (k, &var) in basis.iter().enumerate() {
            if var < n {
                x[var] = tableau[k][width - 1].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        // Phase-one duals live in the artificial block of B^{-1}.
        let y: Vec<Rational> = (0..m)
            .map(|r| {
                let dual = (0..m).fold(Rational::zero(), |acc, k| acc + cost(basis[k]) * &tableau[k][n + r]);
                if flips[r] {
                    dual
                } else {
                    -dual
                }
            })
            .collect();
        Feasibility::Infeasible(y)
    }
}

fn pivot(tableau: &mut [Vec<Rational>], row: usize, col: usize) {
    let p = tableau[row][col].clone();
    for v in tableau[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = tableau[row].clone();
    for (k, r) in tableau.iter_mut().enumerate() {
        if k == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &factor * pv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::rat;
    use proptest::prelude::*;

    fn col(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn check(columns: &[Vec<Rational>], rhs: &[Rational]) -> Feasibility {
        let result = feasibility(columns, rhs);
        match &result {
            Feasibility::Feasible(x) => {
                assert!(x.iter().all(|v| !v.is_negative()));
                for r in 0..rhs.len() {
                    let lhs = columns.iter().zip(x).fold(Rational::zero(), |acc, (c, xi)| acc + &c[r] * xi);
                    assert_eq!(lhs, rhs[r]);
                }
            }
            Feasibility::Infeasible(y) => {
                let dot = |v: &[Rational]| v.iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                assert!(dot(rhs).is_negative());
                assert!(columns.iter().all(|c| !dot(c).is_negative()));
            }
        }
        result
    }

    #[test]
    fn simple_feasible() {
        let cols = vec![col(&[1, 0]), col(&[0, 1]), col(&[1, 1])];
        assert!(matches!(check(&cols, &col(&[2, 3])), Feasibility::Feasible(_)));
    }

    #[test]
    fn simple_infeasible() {
        let cols = vec![col(&[1, 1])];
        assert!(matches!(check(&cols, &col(&[1, 0])), Feasibility::Infeasible(_)));
        assert!(matches!(check(&[], &col(&[1])), Feasibility::Infeasible(_)));
        assert!(matches!(check(&cols, &col(&[-1, -1])), Feasibility::Infeasible(_)));
    }

    #[test]
    fn degenerate_zero_rhs() {
        let cols = vec![col(&[1, -1]), col(&[-1, 1])];
        assert!(matches!(check(&cols, &col(&[0, 0])), Feasibility::Feasible(_)));
    }

    proptest! {
        #[test]
        fn verdicts_are_certified(
            n in 1usize..6,
            m in 1usize..5,
            data in proptest::collection::vec(-2i64..=3, 30),
            b in proptest::collection::vec(-2i64..=4, 5),
        ) {
            let cols: Vec<Vec<Rational>> = (0..n).map(|j| col(&data[j * 5..j * 5 + m])).collect();
            check(&cols, &col(&b[..m]));
        }

        #[test]
        fn nonnegative_combinations_are_found(
            n in 1usize..6,
            m in 1usize..5,
            data in proptest::collection::vec(0i64..=3, 30),
            weights in proptest::collection::vec(0i64..=3, 6),
        ) {
            let cols: Vec<Vec<Rational>> = (0..n).map(|j| col(&data[j * 5..j * 5 + m])).collect();
            let rhs: Vec<Rational> = (0..m)
                .map(|r| (0..n).fold(rat(0), |acc, j| acc + &cols[j][r] * rat(weights[j])))
                .collect();
            prop_assert!(matches!(check(&cols, &rhs), Feasibility::Feasible(_)));
        }
    }
}
