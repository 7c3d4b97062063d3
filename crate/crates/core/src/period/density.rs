//! Approximating a complex number by values `(t, z)` of the period functional
//! on lattice vectors `z`.
//!
//! The values of `(t, ·)` on the lattice form a subgroup `Z ⊂ C = R²`. For a
//! non-special period `Z` is dense, and a pair `{z1, z2} ⊂ Z` with small
//! `|z1| + |z2|` is found by repeated reduction: a third element
//! `w = c1 z1 + c2 z2` is brought into `0 <= c_i <= 1/2` (replaced by
//! `z1 + z2 - 2w` when both exceed 1/3) and then replaces the longer vector,
//! which shrinks `|z1| + |z2|` by a factor of at least 11/12.
//!
//! Coefficient vectors and functional values are tracked exactly; floats are
//! only used to pick the integer multipliers. The final error is re-verified in
//! fixed point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use super::precision::precision_bits_from_env;
use super::quad::{fixed_to_f64, QuadScalar};
use super::Period;
use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, LatticeVec};
use crate::linalg::Field;
use crate::matrix::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityConfig {
    /// fractional bits for float conversion and re-verification
    pub precision_bits: u32,
    pub max_iterations: usize,
    /// smallest coefficient on the replaced vector that counts as independent
    pub tolerance: f64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig { precision_bits: precision_bits_from_env(), max_iterations: 10_000, tolerance: 1e-6 }
    }
}

/// `|z1| + |z2|` before and after one reduction step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShrinkStep {
    pub before: f64,
    pub after: f64,
}

impl ShrinkStep {
    pub fn ratio(&self) -> f64 {
        self.after / self.before
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityCertificate {
    pub target: (f64, f64),
    /// over the basis of the period's lattice
    pub coeffs: Vec<BigInt>,
    pub achieved_error: f64,
    pub epsilon: f64,
    pub iterations: usize,
    pub trace: Vec<ShrinkStep>,
    /// error recomputed in fixed point at `precision_bits`
    pub verified_error: f64,
    pub precision_bits: u32,
}

/// An element of `Z` with its exact value and its coefficient vector.
#[derive(Clone, Debug)]
struct Elem {
    coeffs: Vec<BigInt>,
    re: QuadScalar,
    im: QuadScalar,
    v: (f64, f64),
}

impl Elem {
    fn len(&self) -> f64 {
        self.v.0.hypot(self.v.1)
    }

    fn combine(&self, k: &BigInt, other: &Elem, bits: u32) -> Elem {
        // self + k * other
        let kq = BigRational::from_integer(k.clone());
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + k * b).collect();
        let re = self.re.add(&other.re.scale(&kq));
        let im = self.im.add(&other.im.scale(&kq));
        let v = (re.to_f64_with(bits), im.to_f64_with(bits));
        Elem { coeffs, re, im, v }
    }

    fn negated(&self) -> Elem {
        Elem {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            re: self.re.neg(),
            im: self.im.neg(),
            v: (-self.v.0, -self.v.1),
        }
    }
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Coordinates of `p` in the real basis `(z1, z2)`.
fn solve2(z1: (f64, f64), z2: (f64, f64), p: (f64, f64)) -> (f64, f64) {
    let det = cross(z1, z2);
    (cross(p, z2) / det, cross(z1, p) / det)
}

fn big(x: f64) -> BigInt {
    BigInt::from_f64(x.round()).unwrap_or_else(BigInt::zero)
}

/// Integer `z` with `|(t, z) - target| < epsilon`, `t = x + iy` the period generator.
pub fn density_approximate(
    period: &Period,
    target: (f64, f64),
    epsilon: f64,
    config: DensityConfig,
) -> Result<DensityCertificate> {
    if epsilon.is_nan() || epsilon <= 0.0 || !target.0.is_finite() || !target.1.is_finite() {
        return Err(Error::InvalidParameters("epsilon must be positive and the target finite".into()));
    }
    let special = period.is_special();
    if special.special {
        let witness = special.witness.map(LatticeVec::into_coords).unwrap_or_default();
        return Err(Error::SpecialPeriod { witness });
    }
    let bits = config.precision_bits;
    let r = period.lattice().rank();
    let generators: Vec<Elem> = (0..r)
        .map(|k| {
            let mut coeffs = vec![BigInt::zero(); r];
            coeffs[k] = BigInt::one();
            let (re, im) = period.functional(&coeffs);
            let v = (re.to_f64_with(bits), im.to_f64_with(bits));
            Elem { coeffs, re, im, v }
        })
        .collect();

    // start from the most independent pair of generator values
    let mut best = (0, 0, 0.0f64);
    for i in 0..r {
        for j in (i + 1)..r {
            let c = cross(generators[i].v, generators[j].v).abs();
            if c > best.2 {
                best = (i, j, c);
            }
        }
    }
    if best.2 == 0.0 {
        return Err(Error::InvalidPeriod("functional values are collinear".into()));
    }
    let mut z1 = generators[best.0].clone();
    let mut z2 = generators[best.1].clone();
    let mut trace = Vec::new();
    let ratio = 11.0 / 12.0;

    loop {
        if z1.len() < z2.len() {
            std::mem::swap(&mut z1, &mut z2);
        }
        let size = z1.len() + z2.len();
        if size < epsilon / 2.0 {
            break;
        }
        if trace.len() >= config.max_iterations {
            let (_, err) = round_target(&z1, &z2, target, bits);
            return Err(Error::IterationCap { cap: config.max_iterations, best_error: err });
        }
        let mut chosen: Option<(f64, Elem)> = None;
        for g in &generators {
            let Some(w) = reduce(g, &z1, &z2, bits, config.tolerance) else { continue };
            let new_size = w.len() + z2.len();
            if chosen.as_ref().is_none_or(|(s, _)| new_size < *s) {
                chosen = Some((new_size, w));
            }
        }
        let Some((new_size, w)) = chosen else {
            return Err(Error::InvalidPeriod("functional values do not generate a dense subgroup".into()));
        };
        trace.push(ShrinkStep { before: size, after: new_size });
        if new_size > ratio * size * (1.0 + 1e-12) {
            return Err(Error::InvariantViolation(format!("shrink step {size:e} -> {new_size:e} exceeds 11/12")));
        }
        z1 = w;
    }

    let (z, achieved_error) = round_target(&z1, &z2, target, bits);
    let verified_error = verify_error(&z, target, bits)?;
    let slack = 2f64.powi(-(bits as i32 - 8));
    if verified_error > 2.0 * achieved_error + slack || verified_error >= epsilon {
        return Err(Error::PrecisionExhausted { bits, verified: verified_error, epsilon });
    }
    Ok(DensityCertificate {
        target,
        coeffs: z.coeffs,
        achieved_error,
        epsilon,
        iterations: trace.len(),
        trace,
        verified_error,
        precision_bits: bits,
    })
}

/// Reduces `g` into the half-parallelogram of `(z1, z2)`; `None` if the result
/// is (numerically) parallel to `z2`.
fn reduce(g: &Elem, z1: &Elem, z2: &Elem, bits: u32, tol: f64) -> Option<Elem> {
    let (c1, c2) = solve2(z1.v, z2.v, g.v);
    if !c1.is_finite() || !c2.is_finite() {
        return None;
    }
    let w = g.combine(&-big(c1), z1, bits).combine(&-big(c2), z2, bits);
    // recompute coordinates from the exact-derived value
    let (mut r1, mut r2) = solve2(z1.v, z2.v, w.v);
    let b1 = if r1 < 0.0 { z1.negated() } else { z1.clone() };
    let b2 = if r2 < 0.0 { z2.negated() } else { z2.clone() };
    r1 = r1.abs();
    r2 = r2.abs();
    let w = if r1 > 1.0 / 3.0 && r2 > 1.0 / 3.0 {
        // z1 + z2 - 2w, coefficients 1 - 2 r_i
        r1 = 1.0 - 2.0 * r1;
        let two = BigInt::from(-2);
        let sum = b1.combine(&BigInt::one(), &b2, bits);
        sum.combine(&two, &w, bits)
    } else {
        w
    };
    (r1 > tol).then_some(w)
}

/// Nearest point of `Z(z1) + Z(z2)` to the target, and its float error.
fn round_target(z1: &Elem, z2: &Elem, target: (f64, f64), bits: u32) -> (Elem, f64) {
    let (c1, c2) = solve2(z1.v, z2.v, target);
    let r = z1.coeffs.len();
    let d = z1.re.discriminant().clone();
    let zero = Elem { coeffs: vec![BigInt::zero(); r], re: QuadScalar::zero(&d), im: QuadScalar::zero(&d), v: (0.0, 0.0) };
    let z = zero.combine(&big(c1), z1, bits).combine(&big(c2), z2, bits);
    let err = (z.v.0 - target.0).hypot(z.v.1 - target.1);
    (z, err)
}

/// `|value - target|` in fixed point with `bits` fractional bits.
fn verify_error(z: &Elem, target: (f64, f64), bits: u32) -> Result<f64> {
    let to_fixed = |t: f64| -> Result<BigInt> {
        let q = BigRational::from_f64(t).ok_or_else(|| Error::InvalidParameters("non-finite target".into()))?;
        Ok((q * BigRational::from_integer(BigInt::one() << bits)).floor().to_integer())
    };
    let re = z.re.to_fixed(bits) - to_fixed(target.0)?;
    let im = z.im.to_fixed(bits) - to_fixed(target.1)?;
    let norm = (&re * &re + &im * &im).sqrt();
    // the two fixed-point conversions are each within a few units
    Ok(fixed_to_f64(&(norm + BigInt::from(4)), bits))
}

/// Exact solution of `(t, z) = re + i·im` over the integers, if one exists.
pub fn density_exact(period: &Period, re: &QuadScalar, im: &QuadScalar) -> Result<Option<Vec<BigInt>>> {
    let r = period.lattice().rank();
    let mut rows: Vec<Vec<BigRational>> = (0..4).map(|_| Vec::with_capacity(r + 1)).collect();
    for k in 0..r {
        let mut e = vec![BigInt::zero(); r];
        e[k] = BigInt::one();
        let (x, y) = period.functional(&e);
        rows[0].push(x.a().clone());
        rows[1].push(x.b().clone());
        rows[2].push(y.a().clone());
        rows[3].push(y.b().clone());
    }
    for (row, rhs) in rows.iter_mut().zip([re.a(), re.b(), im.a(), im.b()]) {
        row.push(rhs.clone());
    }
    // clear denominators row by row
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, x| num_integer::lcm(l, x.denom().clone()));
            row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let a = IntMatrix::from_rows(int_rows.iter().map(|row| row[..r].to_vec()).collect(), r)?;
    let b: Vec<BigInt> = int_rows.iter().map(|row| row[r].clone()).collect();
    let snf = smith_normal_form(&a);
    let ub = snf.left.mul_vec(&b);
    let mut y = vec![BigInt::zero(); r];
    for (i, rhs) in ub.iter().enumerate() {
        let di = snf.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_zero() {
            if !rhs.is_zero() {
                return Ok(None);
            }
            continue;
        }
        if !(rhs % &di).is_zero() {
            return Ok(None);
        }
        y[i] = rhs / &di;
    }
    let z = snf.right.mul_vec(&y);
    let (zr, zi) = period.functional(&z);
    if &zr != re || &zi != im {
        return Err(Error::InvariantViolation("exact density solution does not reproduce the target".into()));
    }
    Ok(Some(z))
}
