use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::{round_div, IntMatrix};

/// `left * m * right = diag(diag)` with `left`, `right` unimodular and
/// `diag[i] | diag[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub left: IntMatrix,
    pub diag: Vec<BigInt>,
    pub right: IntMatrix,
}

impl SnfDecomposition {
    /// The diagonal as a `rows x cols` matrix.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

/// Smith normal form with transforms. `diag` has length `min(rows, cols)`.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let k = rows.min(cols);

    for t in 0..k {
        // smallest nonzero entry in the trailing block
        let Some((pi, pj)) = min_abs_entry(&a, t) else { break };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in (t + 1)..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -round_div(a.get(i, t), a.get(t, t));
                a.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -round_div(a.get(t, j), a.get(t, t));
                a.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                // pivot must divide the whole trailing block
                let bad = ((t + 1)..rows)
                    .flat_map(|i| ((t + 1)..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_multiple_of(a.get(t, t)));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let one = BigInt::from(1);
                        a.add_row_multiple(t, i, &one);
                        left.add_row_multiple(t, i, &one);
                        continue;
                    }
                }
            }
            // move the smallest entry of row t / column t into the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a.get(i, t).is_zero() && a.get(i, t).abs() < a.get(best.0, best.1).abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a.get(t, j).is_zero() && a.get(t, j).abs() < a.get(best.0, best.1).abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap_rows(t, best.0);
                left.swap_rows(t, best.0);
            }
            if best.1 != t {
                a.swap_cols(t, best.1);
                right.swap_cols(t, best.1);
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    let diag = (0..k).map(|i| a.get(i, i).clone()).collect();
    SnfDecomposition { left, diag, right }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}
