//! Integral lattices with symmetric bilinear forms.
//!
//! A lattice is `Z^rank` with an even symmetric Gram matrix, possibly
//! degenerate. Vectors are coordinate vectors in the lattice's fixed basis.

mod quotient;
mod snf;
mod standard;
mod vector;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{self, IntMatrix};

pub use quotient::IsotropicQuotient;
pub use snf::{smith_normal_form, SnfDecomposition};
pub use standard::{
    k3_to_mukai, mukai_vector, standard_lattice, StandardLattice, E8_MINUS_GRAM, K3N_DELTA, K3_RANK,
    MUKAI_RANK,
};
pub use vector::LatticeVec;

/// A free abelian group of finite rank with an even symmetric integer Gram matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntLattice {
    label: Option<String>,
    gram: IntMatrix,
}

/// `(positive, negative)` inertia of a nondegenerate form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize) -> Self {
        Signature { positive, negative }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// Sign counts of a possibly degenerate form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub nullity: usize,
}

/// Basis of a sublattice, stored as the rows of a matrix in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublatticeBasis {
    vectors: IntMatrix,
    saturated: bool,
}

impl SublatticeBasis {
    /// Checks linear independence; the saturation flag starts unset.
    pub fn new(vectors: Vec<LatticeVec>, ambient_rank: usize) -> Result<Self> {
        let rows = vectors
            .into_iter()
            .map(|v| {
                if v.len() != ambient_rank {
                    Err(Error::DimensionMismatch { expected: ambient_rank, found: v.len() })
                } else {
                    Ok(v.into_coords())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_matrix(IntMatrix::from_rows(rows, ambient_rank)?)
    }

    pub fn from_matrix(vectors: IntMatrix) -> Result<Self> {
        let (_, _, rank) = matrix::row_echelon(&vectors);
        if rank != vectors.rows() {
            return Err(Error::LinearlyDependent);
        }
        Ok(SublatticeBasis { vectors, saturated: false })
    }

    pub(crate) fn saturated_from(vectors: IntMatrix) -> Self {
        SublatticeBasis { vectors, saturated: true }
    }

    pub fn rank(&self) -> usize {
        self.vectors.rows()
    }

    pub fn ambient_rank(&self) -> usize {
        self.vectors.cols()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> LatticeVec {
        LatticeVec::new(self.vectors.row(i).to_vec())
    }

    pub fn vectors(&self) -> impl Iterator<Item = LatticeVec> + '_ {
        (0..self.rank()).map(|i| self.vector(i))
    }

    /// Canonical (HNF) basis of the same sublattice, used for equality tests.
    pub fn canonical(&self) -> IntMatrix {
        matrix::row_lattice_basis(&self.vectors)
    }

    pub fn same_sublattice(&self, other: &SublatticeBasis) -> bool {
        self.ambient_rank() == other.ambient_rank() && self.canonical() == other.canonical()
    }

    /// Integer coordinates of `v` in this basis, if `v` lies in the sublattice.
    pub fn coordinates_of(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient_rank() {
            return None;
        }
        let a = linalg::to_rational(&self.vectors.transpose());
        let rhs: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let sol = linalg::solve(&a, &rhs, self.rank(), &BigRational::zero())?;
        if sol.iter().all(|x| x.is_integer()) {
            Some(sol.into_iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates_of(v).is_some()
    }
}

impl IntLattice {
    /// Validates squareness, symmetry and even diagonal.
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if let Some((row, col)) = gram.first_asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        if let Some(index) = (0..gram.rows()).find(|&i| gram.get(i, i).is_odd()) {
            return Err(Error::OddDiagonal { index });
        }
        Ok(IntLattice { label: None, gram })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The rank-one lattice `<k>`.
    pub fn rank_one(k: impl Into<BigInt>) -> Result<Self> {
        let k = k.into();
        IntLattice::new(IntMatrix::from_fn(1, 1, |_, _| k.clone()))
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// Orthogonal direct sum, basis of `self` first.
    pub fn direct_sum(&self, other: &IntLattice) -> IntLattice {
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        IntLattice { label, gram: IntMatrix::block_diag(&[&self.gram, &other.gram]) }
    }

    pub fn direct_sum_all(parts: &[&IntLattice]) -> IntLattice {
        let grams: Vec<&IntMatrix> = parts.iter().map(|p| &p.gram).collect();
        IntLattice { label: None, gram: IntMatrix::block_diag(&grams) }
    }

    fn check_dim(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    /// `x^T G y`.
    pub fn pairing(&self, x: &LatticeVec, y: &LatticeVec) -> Result<BigInt> {
        self.pairing_coords(x.coords(), y.coords())
    }

    pub fn pairing_coords(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.gram.vec_mul(x).iter().zip(y).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self, x: &LatticeVec) -> Result<BigInt> {
        self.pairing(x, x)
    }

    /// The functional `(x, .)` as a coordinate vector (`G x`).
    pub fn dual_coords(&self, x: &LatticeVec) -> Result<Vec<BigInt>> {
        self.check_dim(x.coords())?;
        Ok(self.gram.mul_vec(x.coords()))
    }

    pub fn unit(&self, i: usize) -> LatticeVec {
        LatticeVec::unit(self.rank(), i)
    }

    pub fn is_primitive(&self, x: &LatticeVec) -> Result<bool> {
        self.check_dim(x.coords())?;
        let c = x.content();
        if c.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(c.is_one())
    }

    /// Largest positive integer dividing `(x, b)` for every lattice vector `b`.
    pub fn divisibility(&self, x: &LatticeVec) -> Result<BigInt> {
        self.check_dim(x.coords())?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = matrix::content(&self.gram.mul_vec(x.coords()));
        if g.is_zero() {
            return Err(Error::NullFunctional);
        }
        Ok(g)
    }

    /// Saturated sublattice `{x : (x, s) = 0 for all s in S}`.
    pub fn orthogonal_complement(&self, s: &SublatticeBasis) -> Result<SublatticeBasis> {
        if s.ambient_rank() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: s.ambient_rank() });
        }
        let functionals = s.matrix() * &self.gram;
        Ok(SublatticeBasis::saturated_from(matrix::integer_kernel(&functionals)))
    }

    /// Orthogonal complement of a list of vectors.
    pub fn orthogonal_complement_of(&self, vectors: &[LatticeVec]) -> Result<SublatticeBasis> {
        let rows = vectors
            .iter()
            .map(|v| {
                self.check_dim(v.coords())?;
                Ok(v.coords().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        let m = IntMatrix::from_rows(rows, self.rank())?;
        let functionals = &m * &self.gram;
        Ok(SublatticeBasis::saturated_from(matrix::integer_kernel(&functionals)))
    }

    /// `span_Q(S) ∩ L`, in HNF.
    pub fn saturation(&self, s: &SublatticeBasis) -> Result<SublatticeBasis> {
        if s.ambient_rank() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: s.ambient_rank() });
        }
        let annihilator = matrix::integer_kernel(s.matrix());
        let sat = matrix::integer_kernel(&annihilator);
        debug_assert_eq!(sat.rows(), s.rank());
        Ok(SublatticeBasis::saturated_from(sat))
    }

    /// True iff the sublattice equals its saturation.
    pub fn is_saturated(&self, s: &SublatticeBasis) -> Result<bool> {
        let sat = self.saturation(s)?;
        Ok(sat.canonical() == s.canonical())
    }

    /// Gram matrix of a sublattice in the given basis.
    pub fn restrict(&self, s: &SublatticeBasis) -> Result<IntLattice> {
        if s.ambient_rank() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: s.ambient_rank() });
        }
        let gram = &(s.matrix() * &self.gram) * &s.matrix().transpose();
        IntLattice::new(gram)
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Sign counts by exact rational congruence diagonalization.
    pub fn inertia(&self) -> Inertia {
        let n = self.rank();
        let mut g: Vec<Vec<BigRational>> = linalg::to_rational(&self.gram);
        let (mut pos, mut neg) = (0, 0);
        let mut k = 0;
        while k < n {
            // pivot with nonzero diagonal, else create one from an off-diagonal entry
            if let Some(p) = (k..n).find(|&i| !g[i][i].is_zero()) {
                sym_swap(&mut g, k, p);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).find(|&(i, j)| !g[i][j].is_zero())
            {
                // x_i <- x_i + x_j makes g_ii = 2 g_ij
                sym_add(&mut g, i, j);
                sym_swap(&mut g, k, i);
            } else {
                break;
            }
            let pivot = g[k][k].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in (k + 1)..n {
                if g[i][k].is_zero() {
                    continue;
                }
                let f = &g[i][k] / &pivot;
                for j in k..n {
                    let t = &f * &g[k][j];
                    g[i][j] -= t;
                }
                for j in k..n {
                    let t = &f * &g[j][k];
                    g[j][i] -= t;
                }
            }
            k += 1;
        }
        Inertia { positive: pos, negative: neg, nullity: n - pos - neg }
    }

    /// Signature of a nondegenerate lattice.
    pub fn signature(&self) -> Result<Signature> {
        let i = self.inertia();
        if i.nullity > 0 {
            return Err(Error::Degenerate { nullity: i.nullity });
        }
        Ok(Signature::new(i.positive, i.negative))
    }

    /// Elementary divisors greater than one of the Gram matrix (the invariant
    /// factors of `L^*/L`).
    pub fn discriminant_group(&self) -> Result<Vec<BigInt>> {
        let snf = smith_normal_form(&self.gram);
        let nullity = snf.diag.iter().filter(|d| d.is_zero()).count();
        if nullity > 0 {
            return Err(Error::Degenerate { nullity });
        }
        Ok(snf.diag.into_iter().filter(|d| !d.is_one()).collect())
    }

    /// `R_e(x) = x - 2(x,e)/(e,e) e`, or `-R_e(x)` when `negated` is set
    /// (for `(e,e) = 2` the latter is `x -> -x + (x,e) e`).
    pub fn reflection(&self, e: &LatticeVec, x: &LatticeVec, negated: bool) -> Result<LatticeVec> {
        let ee = self.norm(e)?;
        let xe = self.pairing(x, e)?;
        if ee.is_zero() {
            return Err(Error::NonIntegralReflection { norm: ee, twice_pairing: BigInt::from(2) * xe });
        }
        let twice = BigInt::from(2) * &xe;
        let (q, r) = twice.div_rem(&ee);
        if !r.is_zero() {
            return Err(Error::NonIntegralReflection { norm: ee, twice_pairing: twice });
        }
        let reflected = x - &(e * &q);
        Ok(if negated { -reflected } else { reflected })
    }

    /// Elementary divisors of `L / (A + B)` other than 1; a free part shows up as zeros.
    pub fn quotient_group_order(&self, a: &SublatticeBasis, b: &SublatticeBasis) -> Result<Vec<BigInt>> {
        for s in [a, b] {
            if s.ambient_rank() != self.rank() {
                return Err(Error::DimensionMismatch { expected: self.rank(), found: s.ambient_rank() });
            }
        }
        let stacked = a.matrix().vstack(b.matrix());
        let snf = smith_normal_form(&stacked);
        let mut divisors: Vec<BigInt> = snf.diag.into_iter().filter(|d| !d.is_one()).collect();
        // rows fewer than rank: the missing diagonal slots are zeros
        let missing = self.rank().saturating_sub(stacked.rows());
        divisors.extend(std::iter::repeat_n(BigInt::zero(), missing));
        Ok(divisors)
    }
}

fn sym_swap(g: &mut [Vec<BigRational>], a: usize, b: usize) {
    if a == b {
        return;
    }
    g.swap(a, b);
    for row in g.iter_mut() {
        row.swap(a, b);
    }
}

fn sym_add(g: &mut [Vec<BigRational>], target: usize, source: usize) {
    let n = g.len();
    let src_row = g[source].clone();
    for (x, s) in g[target].iter_mut().zip(&src_row) {
        *x += s;
    }
    for row in g.iter_mut().take(n) {
        let s = row[source].clone();
        row[target] += s;
    }
}

impl fmt::Debug for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntLattice").field("label", &self.label).field("rank", &self.rank()).finish()
    }
}
