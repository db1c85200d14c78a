//! Fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank over `Q` of an integer matrix given as rows.
///
/// Every intermediate entry is a minor of the input, so the division by the
/// previous pivot is exact and no rationals are formed.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let n_rows = m.len();
    if n_rows == 0 {
        return 0;
    }
    let n_cols = m[0].len();
    let mut prev_pivot = BigInt::one();
    let mut r = 0;
    for col in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pivot_row) = (r..n_rows).find(|&k| !m[k][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot_row);
        let pivot = m[r][col].clone();
        for k in (r + 1)..n_rows {
            let factor = m[k][col].clone();
            for c in col..n_cols {
                let value = &pivot * &m[k][c] - &factor * &m[r][c];
                m[k][c] = value / &prev_pivot;
            }
        }
        // Columns left of `col` in rows below `r` are already zero.
        prev_pivot = pivot;
        r += 1;
    }
    r
}

/// Rank of a small `i64` matrix.
pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let big: Vec<Vec<BigInt>> =
        rows.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    rank(&big)
}
