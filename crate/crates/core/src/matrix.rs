//! Dense matrices over arbitrary-precision integers and the unimodular
//! reductions (echelon form, Hermite normal form, integer kernels) that the
//! lattice code is built on.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` fixes the width for empty inputs.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(IntMatrix { rows: nrows, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                r.iter().map(|&x| BigInt::from(x))
            })
            .collect();
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub(crate) fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "vector-matrix dimension mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Stacks the rows of `self` on top of the rows of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack width mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let delta = factor * s;
            self.data[target * self.cols + j] += delta;
        }
    }

    /// col[target] += factor * col[source]
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + source];
            if s.is_zero() {
                continue;
            }
            let delta = factor * s;
            self.data[i * self.cols + target] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Quotient rounded to the nearest integer (ties toward negative infinity).
pub(crate) fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = a.div_mod_floor(b);
    // r has the sign of b; compare 2|r| with |b|
    if (&r * &two).abs() > b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

/// gcd of all entries (0 for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Extended gcd over a vector: returns `(g, c)` with `sum c_i v_i = g = gcd(v)`, `g >= 0`.
pub fn vector_xgcd(v: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs = vec![BigInt::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = x.abs();
            coeffs[i] = if x.is_negative() { -BigInt::one() } else { BigInt::one() };
            continue;
        }
        let e = g.extended_gcd(x);
        // e.gcd = e.x * g + e.y * x
        for c in coeffs.iter_mut().take(i) {
            *c *= &e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
    }
    (g, coeffs)
}

/// Unimodular row reduction: returns `(h, u, rank)` with `u * a == h`, `u`
/// unimodular and `h` in row echelon form with positive pivots. The first
/// `rank` rows of `h` are nonzero.
pub fn row_echelon(a: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut pivot_row = 0;
    for col in 0..h.cols() {
        if pivot_row == h.rows() {
            break;
        }
        loop {
            // minimal nonzero |entry| in this column at or below pivot_row
            let best = (pivot_row..h.rows())
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&i, &j| h.get(i, col).abs().cmp(&h.get(j, col).abs()));
            let Some(best) = best else { break };
            h.swap_rows(best, pivot_row);
            u.swap_rows(best, pivot_row);
            let mut done = true;
            for i in (pivot_row + 1)..h.rows() {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = round_div(h.get(i, col), h.get(pivot_row, col));
                let neg_q = -q;
                h.add_row_multiple(i, pivot_row, &neg_q);
                u.add_row_multiple(i, pivot_row, &neg_q);
                if !h.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                if h.get(pivot_row, col).is_negative() {
                    h.negate_row(pivot_row);
                    u.negate_row(pivot_row);
                }
                pivot_row += 1;
                break;
            }
        }
    }
    (h, u, pivot_row)
}

/// Hermite normal form of the row lattice: returns `(h, u)` with `u * a == h`,
/// pivots positive and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (mut h, mut u, rank) = row_echelon(a);
    let mut col = 0;
    for r in 0..rank {
        while h.get(r, col).is_zero() {
            col += 1;
        }
        let p = h.get(r, col).clone();
        for i in 0..r {
            let q = h.get(i, col).div_floor(&p);
            if !q.is_zero() {
                let neg_q = -q;
                h.add_row_multiple(i, r, &neg_q);
                u.add_row_multiple(i, r, &neg_q);
            }
        }
        col += 1;
    }
    (h, u)
}

/// Canonical basis (HNF, zero rows dropped) of the lattice generated by the rows of `a`.
pub fn row_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(a);
    let rows: Vec<Vec<BigInt>> = h.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    IntMatrix::from_rows(rows, a.cols()).expect("rows have matrix width")
}

/// Basis (as rows, in HNF) of the saturated kernel `{x in Z^n : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let (h, u, rank) = row_echelon(&m.transpose());
    debug_assert_eq!(h.rows(), n);
    let rows: Vec<Vec<BigInt>> = (rank..n).map(|i| u.row(i).to_vec()).collect();
    let k = IntMatrix::from_rows(rows, n).expect("rows have matrix width");
    if k.rows() == 0 {
        return k;
    }
    row_lattice_basis(&k)
}

/// For a primitive vector `c`, returns `(v, v_inv)` unimodular with `v * c = e_0`.
/// Row operations only touch the coordinates where `c` is nonzero, plus one swap into slot 0.
pub fn complete_primitive(c: &[BigInt]) -> Result<(IntMatrix, IntMatrix)> {
    let n = c.len();
    let g = content(c);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !g.is_one() {
        return Err(Error::NotPrimitive { content: g });
    }
    let mut col = IntMatrix::from_rows(c.iter().map(|x| vec![x.clone()]).collect(), 1)?;
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| !col.get(i, 0).is_zero()).collect();
        let p = *nonzero
            .iter()
            .min_by(|&&i, &&j| col.get(i, 0).abs().cmp(&col.get(j, 0).abs()))
            .expect("primitive vector is nonzero");
        if nonzero.len() == 1 {
            // move to slot 0 and make it +1
            col.swap_rows(p, 0);
            v.swap_rows(p, 0);
            v_inv.swap_cols(p, 0);
            if col.get(0, 0).is_negative() {
                col.negate_row(0);
                v.negate_row(0);
                v_inv.negate_col(0);
            }
            debug_assert!(col.get(0, 0).is_one());
            return Ok((v, v_inv));
        }
        for &i in &nonzero {
            if i == p {
                continue;
            }
            let q = round_div(col.get(i, 0), col.get(p, 0));
            let neg_q = -&q;
            col.add_row_multiple(i, p, &neg_q);
            v.add_row_multiple(i, p, &neg_q);
            // inverse of (row_i += -q row_p) is col_p += q col_i on the right
            v_inv.add_col_multiple(p, i, &q);
        }
    }
}
