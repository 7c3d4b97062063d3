use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quad::{quad_pairing, validate_discriminant, QuadScalar};
use super::{make_period, Period};
use crate::error::{Error, Result};
use crate::lattice::IntLattice;
use crate::linalg::Field;
use crate::matrix::IntMatrix;

/// Search limits for [`sample_nonspecial_period_in`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub max_attempts: usize,
    /// reflections applied to the rational starting plane per attempt
    pub reflections: usize,
    /// bound on generator coefficients of the reflection vectors
    pub coeff_bound: i64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { max_attempts: 64, reflections: 3, coeff_bound: 2 }
    }
}

/// A non-special period of `lattice` over `Q(√D)`, deterministic in `seed`.
pub fn sample_nonspecial_period(lattice: &IntLattice, d: &BigInt, seed: u64) -> Result<Period> {
    sample_nonspecial_period_in(lattice, &IntMatrix::identity(lattice.rank()), d, seed, SamplerConfig::default())
}

/// Like [`sample_nonspecial_period`], with `x` and `y` in the span of the rows of `generators`.
///
/// Starts from a rational plane with an orthogonal basis of equal norms, then
/// applies random reflections in vectors `u + √D u'` (isometries over
/// `Q(√D)`), rejecting special results.
pub fn sample_nonspecial_period_in(
    lattice: &IntLattice,
    generators: &IntMatrix,
    d: &BigInt,
    seed: u64,
    config: SamplerConfig,
) -> Result<Period> {
    validate_discriminant(d)?;
    if generators.cols() != lattice.rank() {
        return Err(Error::DimensionMismatch { expected: lattice.rank(), found: generators.cols() });
    }
    let restricted = &(generators * lattice.gram()) * &generators.transpose();
    let inertia = IntLattice::new(restricted.clone())?.inertia();
    if inertia.positive < 2 {
        return Err(Error::InvalidParameters(format!(
            "need at least two positive directions, found {}",
            inertia.positive
        )));
    }
    let (x0, y0) = base_plane(lattice, generators, &restricted, d)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = generators.rows();
    for _ in 0..config.max_attempts {
        let (mut x, mut y) = (x0.clone(), y0.clone());
        let mut applied = 0;
        while applied < config.reflections {
            let u = random_combination(&mut rng, generators, config.coeff_bound, k);
            let u2 = random_combination(&mut rng, generators, config.coeff_bound, k);
            let w: Vec<QuadScalar> = u
                .iter()
                .zip(&u2)
                .map(|(a, b)| {
                    QuadScalar::new(BigRational::from_integer(a.clone()), BigRational::from_integer(b.clone()), d.clone())
                })
                .collect();
            let ww = quad_pairing(lattice, &w, &w, d);
            if ww.is_zero() {
                continue;
            }
            x = reflect(lattice, &w, &ww, &x, d);
            y = reflect(lattice, &w, &ww, &y, d);
            applied += 1;
        }
        let period = make_period(lattice, d, x, y)?;
        if !period.is_special().special {
            return Ok(period);
        }
    }
    Err(Error::BudgetExhausted {
        attempts: config.max_attempts,
        reason: "every sampled plane met the lattice; try another D or a larger lattice".into(),
    })
}

fn reflect(lattice: &IntLattice, w: &[QuadScalar], ww: &QuadScalar, v: &[QuadScalar], d: &BigInt) -> Vec<QuadScalar> {
    let two = QuadScalar::from_int(2, d);
    let c = two.mul(&quad_pairing(lattice, v, w, d)).mul(&ww.inv());
    v.iter().zip(w).map(|(vi, wi)| vi.sub(&c.mul(wi))).collect()
}

/// Sparse random integer combination of two or three generators.
fn random_combination(rng: &mut ChaCha8Rng, generators: &IntMatrix, bound: i64, k: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); generators.cols()];
    let terms = rng.gen_range(2..=3).min(k);
    for _ in 0..terms {
        let i = rng.gen_range(0..k);
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-bound..=bound);
        }
        let c = BigInt::from(c);
        for (o, g) in out.iter_mut().zip(generators.row(i)) {
            *o += &c * g;
        }
    }
    out
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Rational `x` and `Q(√D)` `y`, orthogonal with equal positive norms, spanning a rational plane.
fn base_plane(
    lattice: &IntLattice,
    generators: &IntMatrix,
    restricted: &IntMatrix,
    d: &BigInt,
) -> Result<(Vec<QuadScalar>, Vec<QuadScalar>)> {
    let k = generators.rows();
    // sparse coefficient vectors (index, coefficient) over the generators
    let mut candidates: Vec<Vec<(usize, i64)>> = (0..k).map(|i| vec![(i, 1)]).collect();
    for i in 0..k {
        for j in (i + 1)..k {
            for (a, b) in [(1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2)] {
                candidates.push(vec![(i, a), (j, b)]);
            }
        }
    }
    let pair = |p: &[(usize, i64)], q: &[(usize, i64)]| -> BigInt {
        let mut s = BigInt::zero();
        for &(i, a) in p {
            for &(j, b) in q {
                s += restricted.get(i, j) * BigInt::from(a * b);
            }
        }
        s
    };
    let norms: Vec<BigInt> = candidates.iter().map(|c| pair(c, c)).collect();
    let positive: Vec<usize> = (0..candidates.len()).filter(|&i| norms[i].is_positive()).collect();
    for (s, &pi) in positive.iter().enumerate() {
        for &wi in &positive[s + 1..] {
            let pw = pair(&candidates[pi], &candidates[wi]);
            let det = &norms[pi] * &norms[wi] - &pw * &pw;
            if !det.is_positive() {
                continue;
            }
            let root = is_square(&det).map(|m| (m, false));
            let root = root.or_else(|| {
                if (&det % d).is_zero() {
                    is_square(&(&det / d)).map(|m| (m, true))
                } else {
                    None
                }
            });
            let Some((m, irrational)) = root else { continue };
            let to_ambient = |c: &[(usize, i64)]| -> Vec<BigRational> {
                let mut v = vec![BigInt::zero(); generators.cols()];
                for &(i, a) in c {
                    for (o, g) in v.iter_mut().zip(generators.row(i)) {
                        *o += BigInt::from(a) * g;
                    }
                }
                v.into_iter().map(BigRational::from_integer).collect()
            };
            let p = to_ambient(&candidates[pi]);
            let w = to_ambient(&candidates[wi]);
            let pp = BigRational::from_integer(norms[pi].clone());
            let t = BigRational::from_integer(pw) / &pp;
            let w_perp: Vec<BigRational> = w.iter().zip(&p).map(|(wi, pi)| wi - &t * pi).collect();
            // (w_perp, w_perp) = det / (p,p); scale y to norm (p,p)
            let (sa, sb) = if irrational {
                (BigRational::zero(), &pp / BigRational::from_integer(&m * d))
            } else {
                (&pp / BigRational::from_integer(m), BigRational::zero())
            };
            let x: Vec<QuadScalar> = p.into_iter().map(|a| QuadScalar::rational(a, d)).collect();
            let y: Vec<QuadScalar> =
                w_perp.into_iter().map(|c| QuadScalar::new(&c * &sa, &c * &sb, d.clone())).collect();
            debug_assert_eq!(quad_pairing(lattice, &x, &x, d), quad_pairing(lattice, &y, &y, d));
            return Ok((x, y));
        }
    }
    Err(Error::BudgetExhausted {
        attempts: candidates.len(),
        reason: "no rational plane with an orthogonal basis of equal norms among small generator combinations".into(),
    })
}
