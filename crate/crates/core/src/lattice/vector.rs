use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::matrix;

/// Coordinate vector in a lattice's fixed basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeVec(Vec<BigInt>);

impl LatticeVec {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVec(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVec(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(len: usize) -> Self {
        LatticeVec(vec![BigInt::zero(); len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.0[i] = BigInt::from(1);
        v
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the coordinates.
    pub fn content(&self) -> BigInt {
        matrix::content(&self.0)
    }

    /// Exact division of every coordinate, `None` if some coordinate is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<LatticeVec> {
        if k.is_zero() {
            return None;
        }
        self.0
            .iter()
            .map(|x| if (x % k).is_zero() { Some(x / k) } else { None })
            .collect::<Option<Vec<_>>>()
            .map(LatticeVec)
    }
}

impl From<Vec<BigInt>> for LatticeVec {
    fn from(v: Vec<BigInt>) -> Self {
        LatticeVec(v)
    }
}

impl std::ops::Index<usize> for LatticeVec {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &LatticeVec {
    type Output = LatticeVec;
    fn add(self, rhs: &LatticeVec) -> LatticeVec {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        LatticeVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVec {
    type Output = LatticeVec;
    fn sub(self, rhs: &LatticeVec) -> LatticeVec {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        LatticeVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&BigInt> for &LatticeVec {
    type Output = LatticeVec;
    fn mul(self, k: &BigInt) -> LatticeVec {
        LatticeVec(self.0.iter().map(|a| a * k).collect())
    }
}

impl Neg for LatticeVec {
    type Output = LatticeVec;
    fn neg(self) -> LatticeVec {
        LatticeVec(self.0.into_iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
