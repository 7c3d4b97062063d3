//! The fibration `q : Ω_{α^⊥} -> Ω_{Q_α}`, its sections `τ_γ` and the
//! unipotent action `g_[z]` along the fibres.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::quad::{apply_rational, quad_pairing_int, split, QuadScalar};
use super::{make_period, Period};
use crate::error::{Error, Result};
use crate::k3::K3Association;
use crate::lattice::{IntLattice, IsotropicQuotient, LatticeVec};
use crate::linalg::Field;
use crate::matrix::IntMatrix;

/// Data needed to move periods between `K3n(n)`, `Q_α` and the Mukai lattice.
#[derive(Clone, Debug)]
pub struct Fibration {
    k3n: IntLattice,
    alpha: LatticeVec,
    q_alpha: IsotropicQuotient,
    mukai: IntLattice,
    /// `ι₀`, Mukai rank x `K3n` rank
    iota: IntMatrix,
    beta: LatticeVec,
    v: LatticeVec,
}

impl Fibration {
    pub fn new(assoc: &K3Association) -> Self {
        Fibration {
            k3n: assoc.embedding.source.clone(),
            alpha: assoc.alpha.clone(),
            q_alpha: assoc.q_alpha.clone(),
            mukai: assoc.embedding.target.clone(),
            iota: assoc.embedding.matrix.clone(),
            beta: assoc.beta.clone(),
            v: assoc.embedding.v_perp_gen.clone(),
        }
    }

    pub fn k3n(&self) -> &IntLattice {
        &self.k3n
    }

    pub fn mukai(&self) -> &IntLattice {
        &self.mukai
    }

    pub fn alpha(&self) -> &LatticeVec {
        &self.alpha
    }

    pub fn beta(&self) -> &LatticeVec {
        &self.beta
    }

    pub fn v(&self) -> &LatticeVec {
        &self.v
    }

    pub fn q_alpha(&self) -> &IsotropicQuotient {
        &self.q_alpha
    }

    pub fn q_lattice(&self) -> &IntLattice {
        self.q_alpha.lattice()
    }

    pub fn iota(&self, x: &LatticeVec) -> LatticeVec {
        LatticeVec::new(self.iota.mul_vec(x.coords()))
    }

    fn check_perp(&self, period: &Period) -> Result<()> {
        if period.lattice().gram() != self.k3n.gram() {
            return Err(Error::InvalidPeriod("period is not on the K3n lattice".into()));
        }
        let d = period.discriminant();
        for (name, v) in [("x", period.x()), ("y", period.y())] {
            if !quad_pairing_int(&self.k3n, v, self.alpha.coords(), d).is_zero() {
                return Err(Error::NotOrthogonal(format!("({name}, alpha) != 0")));
            }
        }
        Ok(())
    }

    /// `q(ℓ)`: coset coordinates of `x`, `y` in `Q_α`.
    pub fn q_project(&self, period: &Period) -> Result<Period> {
        self.check_perp(period)?;
        let d = period.discriminant();
        let p = self.q_alpha.projection_matrix();
        make_period(self.q_lattice(), d, apply_rational(p, period.x(), d), apply_rational(p, period.y(), d))
    }

    /// Lifts of `x̄`, `ȳ` to `α^⊥ ⊗ Q(√D)` through the stored section.
    pub fn lift(&self, q_period: &Period) -> (Vec<QuadScalar>, Vec<QuadScalar>) {
        let d = q_period.discriminant();
        let lift = |v: &[QuadScalar]| {
            let (a, b) = split(v);
            super::quad::join(&self.q_alpha.section_rational(&a), &self.q_alpha.section_rational(&b), d)
        };
        (lift(q_period.x()), lift(q_period.y()))
    }

    fn check_gamma(&self, gamma: &LatticeVec) -> Result<()> {
        let gg = self.mukai.norm(gamma)?;
        let gb = self.mukai.pairing(gamma, &self.beta)?;
        if !gg.is_zero() || gb != BigInt::from(-1) {
            return Err(Error::InvalidParameters(format!("gamma needs (gamma,gamma) = 0, (gamma,beta) = -1; got {gg}, {gb}")));
        }
        Ok(())
    }

    /// `x -> x + (ι(x), γ) α` applied to a lift `(x, y)` in `α^⊥`.
    pub fn tau_from_lift(&self, gamma: &LatticeVec, x: &[QuadScalar], y: &[QuadScalar], d: &BigInt) -> Result<Period> {
        self.check_gamma(gamma)?;
        // (ι(x), γ) = x · (ι^T G γ)
        let h = self.iota.transpose().mul_vec(&self.mukai.dual_coords(gamma)?);
        let correct = |v: &[QuadScalar]| -> Vec<QuadScalar> {
            let c: QuadScalar = v
                .iter()
                .zip(&h)
                .filter(|(_, hi)| !hi.is_zero())
                .fold(QuadScalar::zero(d), |s, (vi, hi)| s.add(&vi.scale(&BigRational::from_integer(hi.clone()))));
            v.iter()
                .zip(self.alpha.coords())
                .map(|(vi, ai)| vi.add(&c.scale(&BigRational::from_integer(ai.clone()))))
                .collect()
        };
        let period = make_period(&self.k3n, d, correct(x), correct(y))?;
        self.check_perp(&period)?;
        Ok(period)
    }

    /// `τ_γ(ℓ̄) = span{x + (ι(x), γ) α}` for a lift `x` of `ℓ̄`.
    pub fn tau_section(&self, gamma: &LatticeVec, q_period: &Period) -> Result<Period> {
        if q_period.lattice().gram() != self.q_lattice().gram() {
            return Err(Error::InvalidPeriod("period is not on Q_alpha".into()));
        }
        let (x, y) = self.lift(q_period);
        self.tau_from_lift(gamma, &x, &y, q_period.discriminant())
    }

    /// `g_[z]`: `w -> w + (w, z) α` on a period orthogonal to `α`.
    pub fn g_act(&self, z: &LatticeVec, period: &Period) -> Result<Period> {
        self.check_perp(period)?;
        g_act(&self.k3n, &self.alpha, z, period)
    }

    /// `δ = γ + ι(z) + ((γ, ι(z)) + (z,z)/2) β`.
    pub fn delta(&self, gamma: &LatticeVec, z: &LatticeVec) -> Result<LatticeVec> {
        let iz = self.iota(z);
        cocycle_delta(&self.mukai, gamma, &iz, &self.beta)
    }
}

/// `w -> w + (w, z) α` on `x` and `y`; requires `(z, α) = 0`.
pub fn g_act(lattice: &IntLattice, alpha: &LatticeVec, z: &LatticeVec, period: &Period) -> Result<Period> {
    if !lattice.pairing(z, alpha)?.is_zero() {
        return Err(Error::NotOrthogonal("z is not in alpha^perp".into()));
    }
    let d = period.discriminant();
    let act = |v: &[QuadScalar]| -> Vec<QuadScalar> {
        let c = quad_pairing_int(lattice, v, z.coords(), d);
        v.iter()
            .zip(alpha.coords())
            .map(|(vi, ai)| vi.add(&c.scale(&BigRational::from_integer(ai.clone()))))
            .collect()
    };
    make_period(lattice, d, act(period.x()), act(period.y()))
}

/// `δ = γ + w + ((γ, w) + (w,w)/2) β` for `w = ι(z)`.
pub fn cocycle_delta(mukai: &IntLattice, gamma: &LatticeVec, iz: &LatticeVec, beta: &LatticeVec) -> Result<LatticeVec> {
    let ww = mukai.norm(iz)?;
    if ww.is_odd() {
        return Err(Error::InvariantViolation("odd norm in an even lattice".into()));
    }
    let c = mukai.pairing(gamma, iz)? + ww / 2;
    Ok(&(gamma + iz) + &(beta * &c))
}

/// Matrix (acting on columns) of `g̃_z(x) = x - (x,β) z + [(x,z) - ½ (x,β)(z,z)] β`
/// for `z ⊥ β, v`.
pub fn tilde_g(mukai: &IntLattice, z: &LatticeVec, beta: &LatticeVec, v: &LatticeVec) -> Result<IntMatrix> {
    if !mukai.pairing(z, beta)?.is_zero() {
        return Err(Error::NotOrthogonal("z is not orthogonal to beta".into()));
    }
    if !mukai.pairing(z, v)?.is_zero() {
        return Err(Error::NotOrthogonal("z is not orthogonal to v".into()));
    }
    let zz = mukai.norm(z)?;
    if zz.is_odd() {
        return Err(Error::InvariantViolation("half-integral coefficient: (z,z) is odd".into()));
    }
    let half = zz / 2;
    let gb = mukai.dual_coords(beta)?;
    let gz = mukai.dual_coords(z)?;
    let n = mukai.rank();
    let mut m = IntMatrix::identity(n);
    for j in 0..n {
        // image of e_j; (e_j, β) = (Gβ)_j
        let xb = &gb[j];
        let coef_beta: BigInt = &gz[j] - xb * &half;
        for i in 0..n {
            let mut entry: BigInt = m.get(i, j).clone();
            if !xb.is_zero() {
                entry -= xb * &z.coords()[i];
            }
            if !coef_beta.is_zero() {
                entry += &coef_beta * &beta.coords()[i];
            }
            m.set(i, j, entry);
        }
    }
    Ok(m)
}
