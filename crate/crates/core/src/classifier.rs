//! Orbit invariants of primitive isotropic classes in `K3n(n)`.
//!
//! A primitive isotropic `α` has divisibility `d` with `d² | n-1`, and
//! decomposes as `α = d ξ + b δ` with `ξ` primitive in the unimodular part and
//! `gcd(b, d) = 1`. The orbit is determined by `(d, ±b mod d)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::lattice::{
    mukai_vector, standard_lattice, IntLattice, LatticeVec, StandardLattice, SublatticeBasis, K3N_DELTA,
    K3_RANK,
};
use crate::matrix::{self, IntMatrix};

/// The pair `(d, b*)` labelling an orbit, for a fixed `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrbitInvariant {
    pub n: u64,
    pub d: u64,
    pub b_star: u64,
}

/// Witness Mukai vector for a given invariant, with its verification checks.
#[derive(Clone, Debug)]
pub struct MukaiSetup {
    pub n: u64,
    pub d: u64,
    pub b: i64,
    /// in the K3 lattice, `(λ,λ) = (2n-2)/d²`
    pub lambda: LatticeVec,
    pub s: u64,
    /// `(0, dλ, s)` in the Mukai lattice
    pub v: LatticeVec,
    /// `(0, 0, 1)`
    pub alpha: LatticeVec,
    pub v_perp: SublatticeBasis,
    pub checks: Vec<Check>,
}

/// Result of the brute-force orbit count, with the ranges at which it stabilized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleRun {
    pub count: usize,
    pub y_range: u64,
    pub c_range: u64,
    pub isometries: usize,
}

const ORACLE_CAP: u64 = 1 << 12;

/// Checks `n >= 2`, `d >= 1`, `d² | n-1`.
fn check_nd(n: u64, d: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("n must be >= 2, got {n}")));
    }
    if d == 0 {
        return Err(Error::InvalidParameters("d must be positive".into()));
    }
    let dd = (d as u128) * (d as u128);
    if !(n as u128 - 1).is_multiple_of(dd) {
        return Err(Error::InvalidParameters(format!("d^2 = {dd} does not divide n-1 = {}", n - 1)));
    }
    Ok(())
}

fn b_star(b: &BigInt, d: u64) -> u64 {
    if d == 1 {
        return 0;
    }
    let dd = BigInt::from(d);
    let r = b.mod_floor(&dd).to_u64().expect("residue below d");
    r.min(d - r)
}

/// The orbit invariant `(d, b*)` of a primitive isotropic class in `K3n(n)`.
pub fn classify_isotropic(n: u64, alpha: &LatticeVec) -> Result<OrbitInvariant> {
    let lattice = standard_lattice(StandardLattice::K3n, Some(n))?;
    if !lattice.is_primitive(alpha)? {
        return Err(Error::NotPrimitive { content: alpha.content() });
    }
    let norm = lattice.norm(alpha)?;
    if !norm.is_zero() {
        return Err(Error::NotIsotropic { norm });
    }
    let d = lattice.divisibility(alpha)?;
    let d = d.to_u64().ok_or_else(|| Error::InvariantViolation(format!("divisibility {d} out of range")))?;
    if check_nd(n, d).is_err() {
        return Err(Error::InvariantViolation(format!("divisibility {d} has d^2 not dividing n-1 = {}", n - 1)));
    }
    // α = d ξ + b δ with ξ primitive in the unimodular part
    let a = matrix::content(&alpha.coords()[..K3_RANK]);
    if a != BigInt::from(d) {
        return Err(Error::InvariantViolation(format!("content {a} of the unimodular part differs from d = {d}")));
    }
    let b = &alpha[K3N_DELTA];
    if !b.gcd(&BigInt::from(d)).is_one() {
        return Err(Error::InvariantViolation(format!("gcd(b, d) != 1 for b = {b}, d = {d}")));
    }
    Ok(OrbitInvariant { n, d, b_star: b_star(b, d) })
}

/// `α = d e1 - ((n-1) b² / d) f1 + b δ`, a primitive isotropic class with invariant `(d, ±b)`.
pub fn construct_alpha(n: u64, d: u64, b: i64) -> Result<LatticeVec> {
    check_nd(n, d)?;
    if BigInt::from(b).gcd(&BigInt::from(d)) != BigInt::one() {
        return Err(Error::InvalidParameters(format!("gcd(b, d) != 1 for b = {b}, d = {d}")));
    }
    let (nb, db, bb) = (BigInt::from(n), BigInt::from(d), BigInt::from(b));
    let mut coords = vec![BigInt::zero(); K3N_DELTA + 1];
    coords[0] = db.clone();
    coords[1] = -((nb - 1u32) * &bb * &bb / &db);
    coords[K3N_DELTA] = bb;
    Ok(LatticeVec::new(coords))
}

fn euler_phi(mut d: u64) -> u64 {
    let mut phi = d;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            while d.is_multiple_of(p) {
                d /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if d > 1 {
        phi -= phi / d;
    }
    phi
}

/// Number of orbits with divisibility `d`: 1 for `d <= 2`, `φ(d)/2` otherwise.
pub fn nu(d: u64) -> u64 {
    assert!(d >= 1, "nu is defined for d >= 1");
    if d <= 2 {
        1
    } else {
        euler_phi(d) / 2
    }
}

/// One invariant per orbit, `b*` ascending.
pub fn enumerate_orbit_reps(n: u64, d: u64) -> Result<Vec<OrbitInvariant>> {
    check_nd(n, d)?;
    if d == 1 {
        return Ok(vec![OrbitInvariant { n, d, b_star: 0 }]);
    }
    Ok((1..=d / 2).filter(|&b| b.gcd(&d) == 1).map(|b_star| OrbitInvariant { n, d, b_star }).collect())
}

/// Isometries `((a,b),(c,e))` of `k·((1,0),(0,0))` with `a, b, e ∈ {-1,0,1}`, `|c| <= c_range`,
/// found by direct search.
fn search_isometries(k: i128, c_range: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for a in -1..=1i64 {
        for b in -1..=1i64 {
            for e in -1..=1i64 {
                for c in -c_range..=c_range {
                    // M^T G M with G = k E11: entries k·(a², ab, b²)
                    let g = [k * (a * a) as i128, k * (a * b) as i128, k * (b * b) as i128];
                    let det = a as i128 * e as i128 - b as i128 * c as i128;
                    if g == [k, 0, 0] && det.abs() == 1 {
                        out.push([a, b, c, e]);
                    }
                }
            }
        }
    }
    out
}

fn count_classes(d: u64, y_range: u64, isometries: &[[i64; 4]]) -> usize {
    let (d, yr) = (d as i64, y_range as i64);
    let width = 2 * yr + 1;
    let index = |x: i64, y: i64| -> Option<usize> {
        if y.abs() > yr || x.abs() != d || y.gcd(&d) != 1 {
            return None;
        }
        Some(((x > 0) as i64 * width + y + yr) as usize)
    };
    let mut parent: Vec<usize> = (0..(2 * width) as usize).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut members = Vec::new();
    for x in [-d, d] {
        for y in -yr..=yr {
            let Some(i) = index(x, y) else { continue };
            members.push(i);
            for m in isometries {
                let (x2, y2) = (m[0] * x + m[1] * y, m[2] * x + m[3] * y);
                if let Some(j) = index(x2, y2) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut roots: Vec<usize> = members.iter().map(|&i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Counts classes of primitive `(±d, y)` in `L_{n,d}` under searched isometries,
/// doubling both ranges until two successive counts agree.
pub fn brute_force_orbit_count(n: u64, d: u64, y_range: u64, c_range: u64) -> Result<OracleRun> {
    check_nd(n, d)?;
    if y_range == 0 || c_range == 0 {
        return Err(Error::InvalidParameters("oracle ranges must be positive".into()));
    }
    let k = (2 * (n as i128) - 2) / (d as i128 * d as i128);
    let (mut y, mut c) = (y_range, c_range);
    let mut previous: Option<usize> = None;
    while y <= ORACLE_CAP && c <= ORACLE_CAP {
        let isometries = search_isometries(k, c as i64);
        let count = count_classes(d, y, &isometries);
        if previous == Some(count) {
            return Ok(OracleRun { count, y_range: y, c_range: c, isometries: isometries.len() });
        }
        previous = Some(count);
        y *= 2;
        c *= 2;
    }
    Err(Error::OracleUnstable { cap: ORACLE_CAP })
}

/// Unimodular `A` with `A (d, -b)^T = (1, 0)^T`, and `A G A^T` for
/// `G = ((2n-2)/d²)·((d², -bd), (-bd, b²))`.
pub fn reduce_gram_to_lnd(n: u64, d: u64, b: i64) -> Result<(IntMatrix, IntMatrix)> {
    check_nd(n, d)?;
    let (db, bb) = (BigInt::from(d), BigInt::from(b));
    let e = db.extended_gcd(&(-&bb));
    if !e.gcd.is_one() {
        return Err(Error::InvalidParameters(format!("gcd(b, d) != 1 for b = {b}, d = {d}")));
    }
    // e.x·d + e.y·(-b) = 1
    let a = IntMatrix::from_rows(vec![vec![e.x, e.y], vec![bb.clone(), db.clone()]], 2)?;
    let k = BigInt::from(2 * n - 2) / (&db * &db);
    let g = IntMatrix::from_rows(
        vec![vec![&db * &db, -(&bb * &db)], vec![-(&bb * &db), &bb * &bb]],
        2,
    )?
    .scale(&k);
    let out = &(&a * &g) * &a.transpose();
    Ok((a, out))
}

/// Least positive `s` with `s b ≡ 1 (mod d)`; 1 when `d = 1`.
fn inverse_mod(b: i64, d: u64) -> Result<u64> {
    if d == 1 {
        return Ok(1);
    }
    let (bb, db) = (BigInt::from(b), BigInt::from(d));
    let e = bb.mod_floor(&db).extended_gcd(&db);
    if !e.gcd.is_one() {
        return Err(Error::InvalidParameters(format!("gcd(b, d) != 1 for b = {b}, d = {d}")));
    }
    Ok(e.x.mod_floor(&db).to_u64().expect("residue below d"))
}

/// The witness `v = (0, dλ, s)` and `α = (0, 0, 1)` in the Mukai lattice,
/// with `λ = e1 - ((n-1)/d²) f1`, verified by direct computation.
pub fn mukai_example(n: u64, d: u64, b: i64) -> Result<MukaiSetup> {
    check_nd(n, d)?;
    let s = inverse_mod(b, d)?;
    let mukai = standard_lattice(StandardLattice::Mukai, None)?;
    let m = BigInt::from((n - 1) / (d * d));
    let mut lambda = vec![BigInt::zero(); K3_RANK];
    lambda[0] = BigInt::one();
    lambda[1] = -m;
    let lambda = LatticeVec::new(lambda);
    let dl: Vec<BigInt> = lambda.coords().iter().map(|x| x * BigInt::from(d)).collect();
    let v = mukai_vector(&BigInt::zero(), &dl, &BigInt::from(s))?;
    let alpha = mukai_vector(&BigInt::zero(), &vec![BigInt::zero(); K3_RANK], &BigInt::one())?;
    let v_perp = mukai.orthogonal_complement_of(std::slice::from_ref(&v))?;
    let checks = mukai_checks(&mukai, n, d, b, s, &v, &alpha, &v_perp)?;
    Ok(MukaiSetup { n, d, b, lambda, s, v, alpha, v_perp, checks })
}

#[allow(clippy::too_many_arguments)]
fn mukai_checks(
    mukai: &IntLattice,
    n: u64,
    d: u64,
    b: i64,
    s: u64,
    v: &LatticeVec,
    alpha: &LatticeVec,
    v_perp: &SublatticeBasis,
) -> Result<Vec<Check>> {
    let db = BigInt::from(d);
    let vv = mukai.norm(v)?;
    let target = BigInt::from(2 * n - 2);
    let mut checks = vec![Check::new("v_norm", vv == target, format!("(v,v) = {vv}, 2n-2 = {target}"))];

    let unit = (BigInt::from(s) * BigInt::from(b) - BigInt::one()).mod_floor(&db).is_zero();
    checks.push(Check::new("s_inverse", unit, format!("s = {s}, s*b = 1 mod {d}: {unit}")));

    let av = mukai.pairing(alpha, v)?;
    checks.push(Check::new("alpha_in_v_perp", av.is_zero(), format!("(alpha,v) = {av}")));

    // H^0 coordinate of every v^⊥ basis vector
    let r_index = 6;
    let bad_r = v_perp.vectors().filter(|w| !w[r_index].is_multiple_of(&db)).count();
    checks.push(Check::new(
        "d_divides_r",
        bad_r == 0,
        format!("{} of {} v-perp basis vectors have r not divisible by {d}", bad_r, v_perp.rank()),
    ));

    let pairings: Vec<BigInt> =
        v_perp.vectors().map(|w| mukai.pairing(alpha, &w)).collect::<Result<Vec<_>>>()?;
    let div = matrix::content(&pairings);
    checks.push(Check::new("alpha_divisibility_on_v_perp", div == db, format!("div = {div}, d = {d}")));

    let diff = alpha - &(v * &BigInt::from(b));
    let integral = diff.div_exact(&db).is_some();
    let bs = 1 - (b as i128) * (s as i128);
    checks.push(Check::new(
        "alpha_minus_bv_over_d_integral",
        integral,
        format!("(alpha - {b} v)/{d} integral: {integral}; 1 - bs = {bs}"),
    ));
    Ok(checks)
}
