//! Test-side reference implementations, written without the library's
//! algorithms: explicit Gram matrices, naive pairings, Bareiss determinants,
//! rational elimination and arithmetic in Q(√D) and Q(√D)(i).

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use bbf_lattice::matrix::IntMatrix;
use bbf_lattice::period::QuadScalar;

pub const E8: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

pub fn block_diag(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut g = vec![vec![0; n]; n];
    let mut o = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                g[o + i][o + j] = *x;
            }
        }
        o += b.len();
    }
    g
}

pub fn u() -> Vec<Vec<i64>> {
    vec![vec![0, -1], vec![-1, 0]]
}

pub fn e8_minus() -> Vec<Vec<i64>> {
    E8.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

pub fn k3_gram() -> Vec<Vec<i64>> {
    block_diag(&[u(), u(), u(), e8_minus(), e8_minus()])
}

pub fn k3n_gram(n: u64) -> Vec<Vec<i64>> {
    block_diag(&[u(), u(), u(), e8_minus(), e8_minus(), vec![vec![2 - 2 * n as i64]]])
}

pub fn mukai_gram() -> Vec<Vec<i64>> {
    block_diag(&[u(), u(), u(), u(), e8_minus(), e8_minus()])
}

pub fn to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| i64::try_from(x).expect("small entry")).collect()).collect()
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("small entry")).collect()
}

pub fn pair(g: &[Vec<i64>], x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (i, row) in g.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        for (j, gij) in row.iter().enumerate() {
            if *gij != 0 && !y[j].is_zero() {
                s += &x[i] * &y[j] * BigInt::from(*gij);
            }
        }
    }
    s
}

pub fn pair_i(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0i128;
    for (i, row) in g.iter().enumerate() {
        for (j, gij) in row.iter().enumerate() {
            s += x[i] as i128 * *gij as i128 * y[j] as i128;
        }
    }
    s
}

/// `(c, c') - r s' - r' s` with `r`, `s` at indices 6, 7 of a Mukai vector.
pub fn mukai_pair(x: &[BigInt], y: &[BigInt]) -> BigInt {
    let strip = |v: &[BigInt]| -> Vec<BigInt> { v.iter().enumerate().filter(|(i, _)| *i != 6 && *i != 7).map(|(_, c)| c.clone()).collect() };
    pair(&k3_gram(), &strip(x), &strip(y)) - &x[6] * &y[7] - &y[6] * &x[7]
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Rank over Q by plain elimination.
pub fn rank_q(rows: &[Vec<BigRational>]) -> usize {
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Inertia `(positive, negative)` by symmetric elimination over Q.
pub fn inertia(g: &[Vec<BigInt>]) -> (usize, usize) {
    let n = g.len();
    let mut a: Vec<Vec<BigRational>> = g.iter().map(|r| r.iter().map(rat).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let Some((i, j)) = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| i != j && !a[i][j].is_zero()) else {
                    break;
                };
                // e_i += e_j
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
                i
            }
        };
        a.swap(k, p);
        for r in a.iter_mut() {
            r.swap(k, p);
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in (k + 1)..n {
            let f = &a[i][k] / &piv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            for j in k..n {
                let t = &f * &a[j][k];
                a[j][i] -= t;
            }
        }
        k += 1;
    }
    (pos, neg)
}

/// `a + b√D`.
#[derive(Clone, Debug, PartialEq)]
pub struct K {
    pub a: BigRational,
    pub b: BigRational,
}

impl K {
    pub fn int(x: &BigInt) -> K {
        K { a: rat(x), b: BigRational::zero() }
    }

    pub fn zero() -> K {
        K { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn of(s: &QuadScalar) -> K {
        K { a: s.a().clone(), b: s.b().clone() }
    }

    pub fn to_quad(&self, d: &BigInt) -> QuadScalar {
        QuadScalar::new(self.a.clone(), self.b.clone(), d.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &K) -> K {
        K { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &K) -> K {
        K { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn neg(&self) -> K {
        K { a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, o: &K, d: &BigInt) -> K {
        K { a: &self.a * &o.a + &self.b * &o.b * rat(d), b: &self.a * &o.b + &self.b * &o.a }
    }

    pub fn scale(&self, q: &BigRational) -> K {
        K { a: &self.a * q, b: &self.b * q }
    }

    pub fn inv(&self, d: &BigInt) -> K {
        let n = &self.a * &self.a - &self.b * &self.b * rat(d);
        K { a: &self.a / &n, b: -&self.b / &n }
    }

    /// `floor`-based fixed point with `bits` fractional bits, within two units.
    pub fn fixed(&self, d: &BigInt, bits: u32) -> BigInt {
        let scale = rat(&(BigInt::one() << bits));
        let a = (&self.a * &scale).floor().to_integer();
        let b2 = (&self.b * &self.b * rat(d) * &scale * &scale).floor().to_integer();
        let root = b2.sqrt();
        if self.b.is_negative() {
            a - root
        } else {
            a + root
        }
    }
}

pub fn kvec(v: &[QuadScalar]) -> Vec<K> {
    v.iter().map(K::of).collect()
}

pub fn kpair(g: &[Vec<BigInt>], x: &[K], y: &[K], d: &BigInt) -> K {
    let mut s = K::zero();
    for (i, row) in g.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        for (j, gij) in row.iter().enumerate() {
            if !gij.is_zero() && !y[j].is_zero() {
                s = s.add(&x[i].mul(&y[j], d).scale(&rat(gij)));
            }
        }
    }
    s
}

pub fn kpair_int(g: &[Vec<BigInt>], x: &[K], z: &[BigInt], d: &BigInt) -> K {
    let zk: Vec<K> = z.iter().map(K::int).collect();
    kpair(g, x, &zk, d)
}

pub fn big_gram(g: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    g.iter().map(|r| big(r)).collect()
}

pub fn gram_of(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_rows()
}

/// `t' = c t` for some complex `c` over `Q(√D)`, with `t = x + iy`.
pub fn same_line(x: &[K], y: &[K], x2: &[K], y2: &[K], d: &BigInt) -> bool {
    let Some(k) = (0..x.len()).find(|&k| !x[k].is_zero() || !y[k].is_zero()) else { return false };
    // c = t2_k / t_k
    let (r, s) = (&x[k], &y[k]);
    let (p, q) = (&x2[k], &y2[k]);
    let den = r.mul(r, d).add(&s.mul(s, d)).inv(d);
    let cr = p.mul(r, d).add(&q.mul(s, d)).mul(&den, d);
    let ci = q.mul(r, d).sub(&p.mul(s, d)).mul(&den, d);
    if cr.is_zero() && ci.is_zero() {
        return false;
    }
    (0..x.len()).all(|j| {
        let re = cr.mul(&x[j], d).sub(&ci.mul(&y[j], d));
        let im = cr.mul(&y[j], d).add(&ci.mul(&x[j], d));
        re == x2[j] && im == y2[j]
    })
}

/// `dim_Q (span_R{x, y} ∩ Q^r)`: the plane is spanned over `Q(√D)` by `x, y`
/// and its conjugate by `x̄, ȳ`; their common part is cut out by the rational
/// and irrational components, so the rational dimension is `4 - rank_Q`.
pub fn rational_rank(x: &[K], y: &[K]) -> usize {
    let rows: Vec<Vec<BigRational>> = vec![
        x.iter().map(|s| s.a.clone()).collect(),
        x.iter().map(|s| s.b.clone()).collect(),
        y.iter().map(|s| s.a.clone()).collect(),
        y.iter().map(|s| s.b.clone()).collect(),
    ];
    4 - rank_q(&rows)
}

pub fn mat_mul_i(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    let mut c = vec![vec![0i128; p]; n];
    for i in 0..n {
        for k in 0..m {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..p {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn bits_to_f64(x: &BigInt, bits: u32) -> f64 {
    let shift = bits.saturating_sub(64);
    let top: f64 = (x >> shift).to_string().parse().expect("decimal integer");
    top / 2f64.powi((bits - shift) as i32)
}
