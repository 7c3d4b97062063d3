//! Named lattices and their fixed basis orders.
//!
//! | lattice | basis order |
//! |---------|-------------|
//! | `U`     | `e, f` with `(e,e)=(f,f)=0`, `(e,f)=-1` |
//! | `E8(-1)`| simple roots 1..8, Bourbaki numbering (node 2 hangs off node 4) |
//! | `K3`    | `U1 U2 U3 E8 E8` |
//! | `Mukai` | `U1 U2 U3 U4 E8 E8` |
//! | `K3n`   | `U1 U2 U3 E8 E8 δ` with `(δ,δ) = 2-2n` |
//!
//! The K3 summand of the Mukai lattice is `U1 U2 U3 E8 E8`; the fourth plane
//! `U4 = (e4, f4)` plays the role of `H^0 ⊕ H^4`, so the Mukai vector
//! `(r, c, s)` is `c + r e4 + s f4`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{IntLattice, LatticeVec};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Negated Cartan matrix of E8, Bourbaki node order.
#[rustfmt::skip]
pub const E8_MINUS_GRAM: [[i64; 8]; 8] = [
    [-2,  0,  1,  0,  0,  0,  0,  0],
    [ 0, -2,  0,  1,  0,  0,  0,  0],
    [ 1,  0, -2,  1,  0,  0,  0,  0],
    [ 0,  1,  1, -2,  1,  0,  0,  0],
    [ 0,  0,  0,  1, -2,  1,  0,  0],
    [ 0,  0,  0,  0,  1, -2,  1,  0],
    [ 0,  0,  0,  0,  0,  1, -2,  1],
    [ 0,  0,  0,  0,  0,  0,  1, -2],
];

pub const K3_RANK: usize = 22;
pub const MUKAI_RANK: usize = 24;
/// Index of `δ` in the `K3n` basis.
pub const K3N_DELTA: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardLattice {
    U,
    E8Minus,
    Mukai,
    K3,
    K3n,
}

impl fmt::Display for StandardLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StandardLattice::U => "U",
            StandardLattice::E8Minus => "E8(-1)",
            StandardLattice::Mukai => "Mukai",
            StandardLattice::K3 => "K3",
            StandardLattice::K3n => "K3n",
        })
    }
}

impl FromStr for StandardLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u" => Ok(StandardLattice::U),
            "e8" | "e8minus" | "e8(-1)" => Ok(StandardLattice::E8Minus),
            "mukai" => Ok(StandardLattice::Mukai),
            "k3" => Ok(StandardLattice::K3),
            "k3n" => Ok(StandardLattice::K3n),
            other => Err(Error::Parse(format!("unknown lattice name {other:?}"))),
        }
    }
}

fn hyperbolic_plane() -> IntMatrix {
    IntMatrix::from_i64(&[&[0, -1], &[-1, 0]])
}

fn e8_minus() -> IntMatrix {
    let rows: Vec<&[i64]> = E8_MINUS_GRAM.iter().map(|r| &r[..]).collect();
    IntMatrix::from_i64(&rows)
}

/// Builds a named lattice; `n` must be given exactly for `K3n` (with `n >= 2`).
pub fn standard_lattice(name: StandardLattice, n: Option<u64>) -> Result<IntLattice> {
    if n.is_some() != (name == StandardLattice::K3n) {
        return Err(Error::InvalidParameters(format!("parameter n is required exactly for K3n (got {name} with n={n:?})")));
    }
    let u = hyperbolic_plane();
    let e8 = e8_minus();
    let (gram, label) = match name {
        StandardLattice::U => (u, "U".to_string()),
        StandardLattice::E8Minus => (e8, "E8(-1)".to_string()),
        StandardLattice::K3 => (IntMatrix::block_diag(&[&u, &u, &u, &e8, &e8]), "K3".to_string()),
        StandardLattice::Mukai => (IntMatrix::block_diag(&[&u, &u, &u, &u, &e8, &e8]), "Mukai".to_string()),
        StandardLattice::K3n => {
            let n = n.expect("checked above");
            if n < 2 {
                return Err(Error::InvalidParameters(format!("K3n needs n >= 2, got {n}")));
            }
            let delta = IntMatrix::from_fn(1, 1, |_, _| BigInt::from(2) - BigInt::from(2) * BigInt::from(n));
            (IntMatrix::block_diag(&[&u, &u, &u, &e8, &e8, &delta]), format!("K3n({n})"))
        }
    };
    Ok(IntLattice::new(gram)?.with_label(label))
}

/// Index of the K3 basis vector `i` inside the Mukai basis.
pub(crate) fn k3_index_in_mukai(i: usize) -> usize {
    if i < 6 {
        i
    } else {
        i + 2
    }
}

/// Places a K3-lattice vector into the Mukai lattice.
pub fn k3_to_mukai(c: &[BigInt]) -> Result<LatticeVec> {
    if c.len() != K3_RANK {
        return Err(Error::DimensionMismatch { expected: K3_RANK, found: c.len() });
    }
    let mut out = vec![BigInt::zero(); MUKAI_RANK];
    for (i, x) in c.iter().enumerate() {
        out[k3_index_in_mukai(i)] = x.clone();
    }
    Ok(LatticeVec::new(out))
}

/// The Mukai vector `(r, c, s)` in the Mukai basis.
pub fn mukai_vector(r: &BigInt, c: &[BigInt], s: &BigInt) -> Result<LatticeVec> {
    let mut v = k3_to_mukai(c)?.into_coords();
    v[6] = r.clone();
    v[7] = s.clone();
    Ok(LatticeVec::new(v))
}
