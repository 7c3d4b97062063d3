use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntLattice;
use crate::linalg::Field;

/// `a + b√D` with rational `a`, `b` and squarefree `D > 1`.
///
/// Scalars with `b = 0` combine with any `D`; mixing two different fields is a
/// programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

/// Checks `D > 1` squarefree.
pub fn validate_discriminant(d: &BigInt) -> Result<()> {
    if d <= &BigInt::one() {
        return Err(Error::InvalidParameters(format!("D must be > 1, got {d}")));
    }
    let mut p = BigInt::from(2);
    while &(&p * &p) <= d {
        if (d % (&p * &p)).is_zero() {
            return Err(Error::InvalidParameters(format!("D = {d} is not squarefree")));
        }
        p += 1;
    }
    Ok(())
}

impl QuadScalar {
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Self {
        QuadScalar { a, b, d }
    }

    pub fn rational(a: BigRational, d: &BigInt) -> Self {
        QuadScalar { a, b: BigRational::zero(), d: d.clone() }
    }

    pub fn from_int(a: impl Into<BigInt>, d: &BigInt) -> Self {
        QuadScalar::rational(BigRational::from_integer(a.into()), d)
    }

    pub fn zero(d: &BigInt) -> Self {
        QuadScalar::rational(BigRational::zero(), d)
    }

    /// `√D`.
    pub fn sqrt_d(d: &BigInt) -> Self {
        QuadScalar { a: BigRational::zero(), b: BigRational::one(), d: d.clone() }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn field(&self, other: &QuadScalar) -> BigInt {
        if self.b.is_zero() {
            return other.d.clone();
        }
        if !other.b.is_zero() && self.d != other.d {
            panic!("mixing Q(sqrt {}) and Q(sqrt {})", self.d, other.d);
        }
        self.d.clone()
    }

    pub fn conjugate(&self) -> QuadScalar {
        QuadScalar { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    /// `a² - b² D`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    pub fn scale(&self, k: &BigRational) -> QuadScalar {
        QuadScalar { a: &self.a * k, b: &self.b * k, d: self.d.clone() }
    }

    /// Exact sign of the real number `a + b√D`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b² D
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// `floor`-ish fixed point value `≈ self · 2^bits`, within 2 units.
    pub fn to_fixed(&self, bits: u32) -> BigInt {
        let scale = BigInt::one() << bits;
        let a = (&self.a * BigRational::from_integer(scale.clone())).floor().to_integer();
        if self.b.is_zero() {
            return a;
        }
        // |b|√D·2^bits = sqrt(b² D 4^bits)
        let radicand = &self.b * &self.b * BigRational::from_integer(&self.d * &scale * &scale);
        let root = radicand.floor().to_integer().sqrt();
        if self.b.is_negative() {
            a - root
        } else {
            a + root
        }
    }

    /// Nearest `f64`, computed through a fixed-point value with `bits` fractional bits.
    pub fn to_f64_with(&self, bits: u32) -> f64 {
        fixed_to_f64(&self.to_fixed(bits), bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_with(128)
    }
}

/// `x / 2^bits` as `f64`.
pub fn fixed_to_f64(x: &BigInt, bits: u32) -> f64 {
    // keep 64 significant bits to avoid overflow in the conversion
    let len = x.bits();
    let (mant, shift) = if len > 64 { (x >> (len - 64), len as i64 - 64) } else { (x.clone(), 0) };
    let m: f64 = match mant.to_u64_digits() {
        (Sign::Minus, d) => -(d.first().copied().unwrap_or(0) as f64),
        (_, d) => d.first().copied().unwrap_or(0) as f64,
    };
    m * 2f64.powi((shift - bits as i64) as i32)
}

impl Field for QuadScalar {
    fn zero_like(&self) -> Self {
        QuadScalar::zero(&self.d)
    }
    fn one_like(&self) -> Self {
        QuadScalar::from_int(1, &self.d)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        QuadScalar { a: &self.a + &o.a, b: &self.b + &o.b, d: self.field(o) }
    }
    fn sub(&self, o: &Self) -> Self {
        QuadScalar { a: &self.a - &o.a, b: &self.b - &o.b, d: self.field(o) }
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.field(o);
        let dq = BigRational::from_integer(d.clone());
        QuadScalar { a: &self.a * &o.a + &self.b * &o.b * dq, b: &self.a * &o.b + &self.b * &o.a, d }
    }
    fn neg(&self) -> Self {
        QuadScalar { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
    fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero");
        QuadScalar { a: &self.a / &n, b: -&self.b / &n, d: self.d.clone() }
    }
}

impl fmt::Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}√{}", self.a, self.b, self.d)
        }
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `x^T G y` over `Q(√D)`.
pub fn quad_pairing(lattice: &IntLattice, x: &[QuadScalar], y: &[QuadScalar], d: &BigInt) -> QuadScalar {
    let g = lattice.gram();
    let mut acc = QuadScalar::zero(d);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let mut row = QuadScalar::zero(d);
        for (j, yj) in y.iter().enumerate() {
            let gij = g.get(i, j);
            if gij.is_zero() || yj.is_zero() {
                continue;
            }
            row = row.add(&yj.scale(&BigRational::from_integer(gij.clone())));
        }
        acc = acc.add(&xi.mul(&row));
    }
    acc
}

/// `(x, z)` for an integer vector `z`.
pub fn quad_pairing_int(lattice: &IntLattice, x: &[QuadScalar], z: &[BigInt], d: &BigInt) -> QuadScalar {
    let gz = lattice.gram().mul_vec(z);
    let mut acc = QuadScalar::zero(d);
    for (xi, c) in x.iter().zip(&gz) {
        if !c.is_zero() && !xi.is_zero() {
            acc = acc.add(&xi.scale(&BigRational::from_integer(c.clone())));
        }
    }
    acc
}

/// Splits a vector into its rational and `√D` parts.
pub fn split(v: &[QuadScalar]) -> (Vec<BigRational>, Vec<BigRational>) {
    (v.iter().map(|s| s.a.clone()).collect(), v.iter().map(|s| s.b.clone()).collect())
}

/// Inverse of [`split`].
pub fn join(a: &[BigRational], b: &[BigRational], d: &BigInt) -> Vec<QuadScalar> {
    a.iter().zip(b).map(|(a, b)| QuadScalar::new(a.clone(), b.clone(), d.clone())).collect()
}

/// Applies a rational matrix (rows) to a `Q(√D)` vector.
pub fn apply_rational(m: &[Vec<BigRational>], v: &[QuadScalar], d: &BigInt) -> Vec<QuadScalar> {
    let (a, b) = split(v);
    let mul = |x: &[BigRational]| -> Vec<BigRational> {
        m.iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(p, q)| !p.is_zero() && !q.is_zero())
                    .fold(BigRational::zero(), |s, (p, q)| s + p * q)
            })
            .collect()
    };
    join(&mul(&a), &mul(&b), d)
}
