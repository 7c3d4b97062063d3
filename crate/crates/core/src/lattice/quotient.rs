use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{IntLattice, LatticeVec, SublatticeBasis};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{self, IntMatrix};

/// `S / Zx` for a primitive isotropic `x` in a sublattice `S ⊆ x^⊥`.
///
/// The basis of `S` is completed from `x`: `S = Zx ⊕ span(section)`, and the
/// quotient basis is the image of the section vectors.
#[derive(Clone, Debug)]
pub struct IsotropicQuotient {
    isotropic: LatticeVec,
    lattice: IntLattice,
    /// rows: `x` followed by the section vectors, ambient coordinates
    adapted: IntMatrix,
    /// `adapted`-coordinates of an ambient vector in `span_Q S`, as a rational map
    coords: Vec<Vec<BigRational>>,
}

impl IsotropicQuotient {
    /// Builds the quotient, checking `(x,x) = 0`, `x ∈ S`, `x` primitive in `S`
    /// and `S ⊆ x^⊥`.
    pub fn new(ambient: &IntLattice, x: &LatticeVec, restrict_to: &SublatticeBasis) -> Result<Self> {
        if x.len() != ambient.rank() || restrict_to.ambient_rank() != ambient.rank() {
            return Err(Error::DimensionMismatch { expected: ambient.rank(), found: x.len() });
        }
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let norm = ambient.norm(x)?;
        if !norm.is_zero() {
            return Err(Error::NotIsotropic { norm });
        }
        for (i, s) in restrict_to.vectors().enumerate() {
            if !ambient.pairing(&s, x)?.is_zero() {
                return Err(Error::NotOrthogonal(format!("sublattice basis vector {i} pairs nontrivially with x")));
            }
        }
        let c = restrict_to.coordinates_of(x.coords()).ok_or(Error::NotInSublattice)?;
        let (v, v_inv) = matrix::complete_primitive(&c)?;
        // new basis vectors are the columns of v_inv, expressed in S
        let adapted = &v_inv.transpose() * restrict_to.matrix();
        debug_assert_eq!(adapted.row(0), x.coords());

        let left_inv = rational_left_inverse(restrict_to.matrix());
        let v_rat = linalg::to_rational(&v);
        let coords = mat_mul_rat(&v_rat, &left_inv);

        let k = adapted.rows();
        let section = IntMatrix::from_rows((1..k).map(|i| adapted.row(i).to_vec()).collect(), ambient.rank())?;
        let gram = &(&section * ambient.gram()) * &section.transpose();
        let lattice = IntLattice::new(gram)?;
        Ok(IsotropicQuotient { isotropic: x.clone(), lattice, adapted, coords })
    }

    pub fn isotropic(&self) -> &LatticeVec {
        &self.isotropic
    }

    /// The quotient lattice with its induced form.
    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn ambient_rank(&self) -> usize {
        self.adapted.cols()
    }

    /// Section vectors (lifts of the quotient basis) as rows, ambient coordinates.
    pub fn section_matrix(&self) -> IntMatrix {
        let k = self.adapted.rows();
        IntMatrix::from_rows((1..k).map(|i| self.adapted.row(i).to_vec()).collect(), self.adapted.cols())
            .expect("rows have ambient width")
    }

    /// The rational projection `span_Q S -> Q^rank(quotient)` (rows = quotient coordinates).
    pub fn projection_matrix(&self) -> &[Vec<BigRational>] {
        &self.coords[1..]
    }

    /// Coset coordinates of `y ∈ S`; errors if `y` is not in `S`.
    pub fn project(&self, y: &LatticeVec) -> Result<LatticeVec> {
        let full = self.full_coords(y)?;
        Ok(LatticeVec::new(full[1..].to_vec()))
    }

    /// Coefficient of `x` in the adapted decomposition `y = c x + section(...)`.
    pub fn isotropic_coefficient(&self, y: &LatticeVec) -> Result<BigInt> {
        Ok(self.full_coords(y)?.swap_remove(0))
    }

    fn full_coords(&self, y: &LatticeVec) -> Result<Vec<BigInt>> {
        if y.len() != self.ambient_rank() {
            return Err(Error::DimensionMismatch { expected: self.ambient_rank(), found: y.len() });
        }
        let yq: Vec<BigRational> = y.coords().iter().map(|a| BigRational::from_integer(a.clone())).collect();
        let a = mat_vec_rat(&self.coords, &yq);
        if !a.iter().all(|t| t.is_integer()) {
            return Err(Error::NotInSublattice);
        }
        let a: Vec<BigInt> = a.into_iter().map(|t| t.to_integer()).collect();
        if self.adapted.vec_mul(&a) != y.coords() {
            return Err(Error::NotInSublattice);
        }
        Ok(a)
    }

    /// Rational projection of a vector assumed to lie in `span_Q S`.
    pub fn project_rational(&self, y: &[BigRational]) -> Vec<BigRational> {
        mat_vec_rat(&self.coords[1..], y)
    }

    /// The lift `sum y_i s_i` of a coset given in quotient coordinates.
    pub fn section(&self, y: &LatticeVec) -> Result<LatticeVec> {
        if y.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: y.len() });
        }
        let mut full = vec![BigInt::zero()];
        full.extend(y.coords().iter().cloned());
        Ok(LatticeVec::new(self.adapted.vec_mul(&full)))
    }

    /// Rational version of [`IsotropicQuotient::section`].
    pub fn section_rational(&self, y: &[BigRational]) -> Vec<BigRational> {
        let n = self.ambient_rank();
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, s) in out.iter_mut().zip(self.adapted.row(i + 1)) {
                if !s.is_zero() {
                    *o += c * BigRational::from_integer(s.clone());
                }
            }
        }
        out
    }
}

/// Rational `k x n` matrix `P` with `P * s_i^T = e_i` for the rows `s_i` of `s`
/// (a left inverse of `s^T` supported on pivot columns).
fn rational_left_inverse(s: &IntMatrix) -> Vec<Vec<BigRational>> {
    let (k, n) = (s.rows(), s.cols());
    let mut rows = linalg::to_rational(s);
    let pivots = linalg::rref(&mut rows);
    debug_assert_eq!(pivots.len(), k);
    // solve M^T a = y_J with M = s[:, J]
    let mut aug: Vec<Vec<BigRational>> = (0..k)
        .map(|r| {
            let mut row: Vec<BigRational> =
                (0..k).map(|i| BigRational::from_integer(s.get(i, pivots[r]).clone())).collect();
            row.extend((0..k).map(|c| if c == r { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    linalg::rref(&mut aug);
    let mut p = vec![vec![BigRational::zero(); n]; k];
    for (i, row) in p.iter_mut().enumerate() {
        for (r, &col) in pivots.iter().enumerate() {
            row[col] = aug[i][k + r].clone();
        }
    }
    p
}

fn mat_mul_rat(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![BigRational::zero(); n];
            for (x, brow) in row.iter().zip(b) {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(brow) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

fn mat_vec_rat(a: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(BigRational::zero(), |s, (x, y)| s + x * y)
        })
        .collect()
}
