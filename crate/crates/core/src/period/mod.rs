//! Periods over a real quadratic field.
//!
//! A period is a complex line `ℓ = C·(x + iy)` in `L ⊗ C` with `(ℓ,ℓ) = 0` and
//! `(ℓ,ℓ̄) > 0`, i.e. `(x,x) = (y,y) > 0` and `(x,y) = 0`. The real and
//! imaginary parts `x`, `y` have coordinates in `Q(√D) ⊂ R`, so every test is
//! exact.

mod density;
mod fibration;
mod precision;
mod quad;
mod sampler;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub use density::{density_approximate, density_exact, DensityCertificate, DensityConfig, ShrinkStep};
pub use fibration::{cocycle_delta, g_act, tilde_g, Fibration};
pub use precision::{precision_bits_from_env, DEFAULT_PRECISION_BITS};
pub use quad::{
    apply_rational, fixed_to_f64, join, quad_pairing, quad_pairing_int, split, validate_discriminant, QuadScalar,
};
pub use sampler::{sample_nonspecial_period, sample_nonspecial_period_in, SamplerConfig};

use crate::error::{Error, Result};
use crate::lattice::{IntLattice, LatticeVec};
use crate::linalg::{self, Field};

/// A validated period: `(x,x) = (y,y) > 0`, `(x,y) = 0`.
#[derive(Clone, Debug)]
pub struct Period {
    lattice: IntLattice,
    d: BigInt,
    x: Vec<QuadScalar>,
    y: Vec<QuadScalar>,
}

/// Outcome of the specialness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialness {
    pub special: bool,
    /// a primitive lattice vector in `span_R{x, y}`
    pub witness: Option<LatticeVec>,
    /// rank of `span_R{x, y} ∩ L`
    pub rank: usize,
}

/// Validates the period conditions exactly.
pub fn make_period(lattice: &IntLattice, d: &BigInt, x: Vec<QuadScalar>, y: Vec<QuadScalar>) -> Result<Period> {
    validate_discriminant(d)?;
    for v in [&x, &y] {
        if v.len() != lattice.rank() {
            return Err(Error::DimensionMismatch { expected: lattice.rank(), found: v.len() });
        }
        if let Some(s) = v.iter().find(|s| !s.is_rational() && s.discriminant() != d) {
            return Err(Error::InvalidPeriod(format!("coordinate {s} is not in Q(sqrt {d})")));
        }
    }
    let x: Vec<QuadScalar> = x.into_iter().map(|s| QuadScalar::new(s.a().clone(), s.b().clone(), d.clone())).collect();
    let y: Vec<QuadScalar> = y.into_iter().map(|s| QuadScalar::new(s.a().clone(), s.b().clone(), d.clone())).collect();
    let xx = quad_pairing(lattice, &x, &x, d);
    let yy = quad_pairing(lattice, &y, &y, d);
    let xy = quad_pairing(lattice, &x, &y, d);
    if xx != yy {
        return Err(Error::InvalidPeriod(format!("(x,x) = {xx} differs from (y,y) = {yy}")));
    }
    if !xy.is_zero() {
        return Err(Error::InvalidPeriod(format!("(x,y) = {xy} is not zero")));
    }
    if !xx.is_positive() {
        return Err(Error::InvalidPeriod(format!("(x,x) = {xx} is not positive")));
    }
    Ok(Period { lattice: lattice.clone(), d: d.clone(), x, y })
}

impl Period {
    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.d
    }

    pub fn x(&self) -> &[QuadScalar] {
        &self.x
    }

    pub fn y(&self) -> &[QuadScalar] {
        &self.y
    }

    /// `(x,x) = (y,y)`.
    pub fn norm(&self) -> QuadScalar {
        quad_pairing(&self.lattice, &self.x, &self.x, &self.d)
    }

    /// `(x + iy, z)` as the pair `((x,z), (y,z))`.
    pub fn functional(&self, z: &[BigInt]) -> (QuadScalar, QuadScalar) {
        (quad_pairing_int(&self.lattice, &self.x, z, &self.d), quad_pairing_int(&self.lattice, &self.y, z, &self.d))
    }

    /// Whether `span_R{x, y}` contains a nonzero lattice vector.
    ///
    /// With a nonzero 2x2 minor `(i, j)` of the rows `x, y`, an integral `λ`
    /// lies in the plane iff every 3x3 minor on columns `(i, j, k)` of
    /// `[x; y; λ]` vanishes. These are linear in `λ` with coefficients in
    /// `Q(√D)`; splitting into rational and `√D` parts gives a rational system.
    pub fn is_special(&self) -> Specialness {
        let r = self.lattice.rank();
        let (x, y) = (&self.x, &self.y);
        let minor = |i: usize, j: usize| x[i].mul(&y[j]).sub(&x[j].mul(&y[i]));
        let (pi, pj) = (0..r)
            .flat_map(|i| ((i + 1)..r).map(move |j| (i, j)))
            .find(|&(i, j)| !minor(i, j).is_zero())
            .expect("period vectors are independent");
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for k in (0..r).filter(|&k| k != pi && k != pj) {
            // cofactor expansion along the λ row
            let mut coeff = vec![QuadScalar::zero(&self.d); r];
            coeff[pi] = minor(pj, k);
            coeff[pj] = minor(k, pi);
            coeff[k] = minor(pi, pj);
            let (a, b) = split(&coeff);
            rows.push(a);
            rows.push(b);
        }
        let kernel = linalg::kernel(&rows, r, &BigRational::zero());
        match kernel.first() {
            None => Specialness { special: false, witness: None, rank: 0 },
            Some(v) => Specialness {
                special: true,
                witness: Some(LatticeVec::new(linalg::primitive_integer_vector(v))),
                rank: kernel.len(),
            },
        }
    }

    /// True iff both periods span the same complex line.
    pub fn same_line(&self, other: &Period) -> bool {
        if self.x.len() != other.x.len() {
            return false;
        }
        let realify = |x: &[QuadScalar], y: &[QuadScalar]| -> [Vec<QuadScalar>; 2] {
            let t: Vec<QuadScalar> = x.iter().chain(y).cloned().collect();
            let it: Vec<QuadScalar> = y.iter().map(|s| s.neg()).chain(x.iter().cloned()).collect();
            [t, it]
        };
        let [a, b] = realify(&self.x, &self.y);
        let [c, e] = realify(&other.x, &other.y);
        linalg::rank(&[a, b, c, e]) == 2
    }
}

/// Checks that a vector lies in `span_R{x, y}` by exhibiting real coefficients.
///
/// Uses the Gram matrix of `x, y` (`(x,x) = (y,y) = N`, `(x,y) = 0`):
/// `w = ((w,x)/N) x + ((w,y)/N) y` must hold coordinatewise.
pub fn witness_in_plane(period: &Period, w: &LatticeVec) -> bool {
    let d = period.discriminant();
    let wq: Vec<QuadScalar> = w.coords().iter().map(|c| QuadScalar::from_int(c.clone(), d)).collect();
    let n_inv = period.norm().inv();
    let cx = quad_pairing(period.lattice(), &wq, period.x(), d).mul(&n_inv);
    let cy = quad_pairing(period.lattice(), &wq, period.y(), d).mul(&n_inv);
    period.x().iter().zip(period.y()).zip(&wq).all(|((xi, yi), wi)| cx.mul(xi).add(&cy.mul(yi)) == *wi)
}
