//! The associated K3 lattice of an isotropic class.
//!
//! `K3n(n)` sits in the Mukai lattice as `v^⊥` via the standard embedding
//! `ι₀`. For a primitive isotropic `α`, put `β = ι₀(α)`; then
//! `β^⊥ / Zβ` is a K3 lattice, `v` descends to `v̄ = d ξ`, and
//! `Q_α = α^⊥ / Zα` maps isometrically onto `ξ^⊥`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::check::{all_pass, Check};
use crate::classifier::classify_isotropic;
use crate::error::{Error, Result};
use crate::lattice::{
    standard_lattice, IntLattice, IsotropicQuotient, LatticeVec, Signature, StandardLattice, SublatticeBasis,
    K3N_DELTA, MUKAI_RANK,
};
use crate::matrix::{self, IntMatrix};

const E4: usize = 6;
const F4: usize = 7;

/// An isometric embedding, as a `target.rank() x source.rank()` matrix acting on columns.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: IntLattice,
    pub target: IntLattice,
    pub matrix: IntMatrix,
    /// generator of the orthogonal complement of the image
    pub v_perp_gen: LatticeVec,
}

impl Embedding {
    pub fn apply(&self, x: &LatticeVec) -> Result<LatticeVec> {
        if x.len() != self.source.rank() {
            return Err(Error::DimensionMismatch { expected: self.source.rank(), found: x.len() });
        }
        Ok(LatticeVec::new(self.matrix.mul_vec(x.coords())))
    }

    /// Gram pullback, orthogonality of `v`, primitivity of the image.
    pub fn verify(&self) -> Result<Vec<Check>> {
        let pulled = &(&self.matrix.transpose() * self.target.gram()) * &self.matrix;
        let gram_ok = &pulled == self.source.gram();
        let v = &self.v_perp_gen;
        let dual = self.target.dual_coords(v)?;
        let orth = self.matrix.transpose().mul_vec(&dual).iter().all(Zero::is_zero);
        let image = SublatticeBasis::from_matrix(self.matrix.transpose())?;
        let primitive = self.target.is_saturated(&image)?;
        let complement = self.target.orthogonal_complement_of(std::slice::from_ref(v))?;
        let exact = complement.same_sublattice(&image);
        Ok(vec![
            Check::new("gram_pullback", gram_ok, "M^T G M equals the source Gram"),
            Check::new("v_orthogonal_to_image", orth, "(v, image) = 0"),
            Check::new("image_primitive", primitive, "image is saturated"),
            Check::new("image_is_v_perp", exact, "image equals v^perp"),
        ])
    }
}

/// `ι₀ : K3n(n) -> Mukai`, identity on `U³ ⊕ E8(-1)²`, `δ -> e4 + (n-1) f4`;
/// the complement is spanned by `v = e4 + (1-n) f4`, `(v,v) = 2n-2`.
pub fn standard_embedding(n: u64) -> Result<Embedding> {
    let source = standard_lattice(StandardLattice::K3n, Some(n))?;
    let target = standard_lattice(StandardLattice::Mukai, None)?;
    let mut m = IntMatrix::zeros(MUKAI_RANK, K3N_DELTA + 1);
    for j in 0..K3N_DELTA {
        let i = if j < 6 { j } else { j + 2 };
        m.set(i, j, BigInt::one());
    }
    let nm1 = BigInt::from(n - 1);
    m.set(E4, K3N_DELTA, BigInt::one());
    m.set(F4, K3N_DELTA, nm1.clone());
    let mut v = LatticeVec::zero(MUKAI_RANK).into_coords();
    v[E4] = BigInt::one();
    v[F4] = -nm1;
    Ok(Embedding { source, target, matrix: m, v_perp_gen: LatticeVec::new(v) })
}

/// Rank, signature and elementary divisors of `Q_α`, against the model
/// `E8(-1)² ⊕ U² ⊕ <(2-2n)/d²>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub rank: usize,
    pub signature: Signature,
    pub elementary_divisors: Vec<BigInt>,
    pub target_rank: usize,
    pub target_signature: Signature,
    pub target_elementary_divisors: Vec<BigInt>,
    pub matches: bool,
}

/// Everything produced by [`associate_k3`].
#[derive(Clone, Debug)]
pub struct K3Association {
    pub n: u64,
    pub alpha: LatticeVec,
    pub embedding: Embedding,
    pub beta: LatticeVec,
    /// `β^⊥ / Zβ` in the Mukai lattice
    pub k3: IsotropicQuotient,
    pub v_bar: LatticeVec,
    pub d: BigInt,
    pub xi: LatticeVec,
    /// `α^⊥ / Zα` in `K3n(n)`
    pub q_alpha: IsotropicQuotient,
    /// `k3.rank() x q_alpha.rank()`, columns are images of the `Q_α` basis
    pub iota_bar: IntMatrix,
    pub invariant_report: InvariantReport,
    pub checks: Vec<Check>,
}

impl K3Association {
    pub fn passed(&self) -> bool {
        all_pass(&self.checks)
    }

    /// `ῑ` applied to `Q_α` coordinates.
    pub fn apply_iota_bar(&self, y: &LatticeVec) -> Result<LatticeVec> {
        if y.len() != self.iota_bar.cols() {
            return Err(Error::DimensionMismatch { expected: self.iota_bar.cols(), found: y.len() });
        }
        Ok(LatticeVec::new(self.iota_bar.mul_vec(y.coords())))
    }
}

/// `E8(-1)² ⊕ U² ⊕ <(2-2n)/d²>`.
pub fn expected_xi_perp(n: u64, d: &BigInt) -> Result<IntLattice> {
    let e8 = standard_lattice(StandardLattice::E8Minus, None)?;
    let u = standard_lattice(StandardLattice::U, None)?;
    let dd = d * d;
    let num = BigInt::from(2) - BigInt::from(2 * n);
    if !num.is_multiple_of(&dd) {
        return Err(Error::InvalidParameters(format!("d^2 = {dd} does not divide 2-2n = {num}")));
    }
    let tail = IntLattice::rank_one(num / dd)?;
    Ok(IntLattice::direct_sum_all(&[&e8, &e8, &u, &u, &tail]))
}

/// Runs the full pipeline for a primitive isotropic `α ∈ K3n(n)`.
pub fn associate_k3(n: u64, alpha: &LatticeVec) -> Result<K3Association> {
    let invariant = classify_isotropic(n, alpha)?;
    let embedding = standard_embedding(n)?;
    let mukai = &embedding.target;
    let k3n = &embedding.source;

    let beta = embedding.apply(alpha)?;
    let beta_perp = mukai.orthogonal_complement_of(std::slice::from_ref(&beta))?;
    let k3 = IsotropicQuotient::new(mukai, &beta, &beta_perp)?;
    let v = &embedding.v_perp_gen;
    let v_bar = k3.project(v)?;
    let d = v_bar.content();
    let xi = v_bar.div_exact(&d).ok_or(Error::InvariantViolation("content does not divide v_bar".into()))?;

    let alpha_perp = k3n.orthogonal_complement_of(std::slice::from_ref(alpha))?;
    let q_alpha = IsotropicQuotient::new(k3n, alpha, &alpha_perp)?;

    // ῑ = proj_k3 ∘ ι₀ ∘ section_Q
    let section = q_alpha.section_matrix();
    let mut columns = Vec::with_capacity(section.rows());
    for j in 0..section.rows() {
        let lifted = embedding.apply(&LatticeVec::new(section.row(j).to_vec()))?;
        columns.push(k3.project(&lifted)?.into_coords());
    }
    let iota_bar = IntMatrix::from_rows(columns, k3.rank())?.transpose();

    let mut checks = Vec::new();
    let vv = k3.lattice().norm(&v_bar)?;
    let expect_vv = BigInt::from(2 * n - 2);
    checks.push(Check::new("v_bar_norm", vv == expect_vv, format!("(v_bar, v_bar) = {vv}")));
    checks.push(Check::new(
        "d_matches_classifier",
        d == BigInt::from(invariant.d),
        format!("content(v_bar) = {d}, divisibility(alpha) = {}", invariant.d),
    ));
    let xx = k3.lattice().norm(&xi)?;
    let expect_xx = &expect_vv / (&d * &d);
    checks.push(Check::new("xi_norm", xx == expect_xx, format!("(xi, xi) = {xx}, (2n-2)/d^2 = {expect_xx}")));

    let k3_sig = k3.lattice().signature()?;
    let k3_ok = k3.rank() == 22 && k3_sig == Signature::new(3, 19) && k3.lattice().is_unimodular();
    checks.push(Check::new("k3_lattice", k3_ok, format!("rank {}, signature {k3_sig}, unimodular", k3.rank())));

    let pulled = &(&iota_bar.transpose() * k3.lattice().gram()) * &iota_bar;
    checks.push(Check::new("iota_bar_isometry", &pulled == q_alpha.lattice().gram(), "pullback Gram equals Q_alpha Gram"));

    let xi_dual = k3.lattice().dual_coords(&xi)?;
    let orth = iota_bar.transpose().mul_vec(&xi_dual).iter().all(Zero::is_zero);
    checks.push(Check::new("iota_bar_in_xi_perp", orth, "(xi, image) = 0"));

    let image = SublatticeBasis::from_matrix(iota_bar.transpose())?;
    let xi_perp = k3.lattice().orthogonal_complement_of(std::slice::from_ref(&xi))?;
    checks.push(Check::new("iota_bar_onto_xi_perp", image.same_sublattice(&xi_perp), "image equals xi^perp"));

    let invariant_report = invariant_report(q_alpha.lattice(), n, &d)?;
    checks.push(Check::new(
        "q_alpha_invariants",
        invariant_report.matches,
        format!(
            "rank {}, signature {}, divisors {:?}",
            invariant_report.rank,
            invariant_report.signature,
            invariant_report.elementary_divisors.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        ),
    ));

    Ok(K3Association {
        n,
        alpha: alpha.clone(),
        embedding,
        beta,
        k3,
        v_bar,
        d,
        xi,
        q_alpha,
        iota_bar,
        invariant_report,
        checks,
    })
}

fn invariant_report(q: &IntLattice, n: u64, d: &BigInt) -> Result<InvariantReport> {
    let target = expected_xi_perp(n, d)?;
    let signature = q.signature()?;
    let elementary_divisors = q.discriminant_group()?;
    let target_signature = target.signature()?;
    let target_elementary_divisors = target.discriminant_group()?;
    let matches = q.rank() == target.rank()
        && signature == target_signature
        && elementary_divisors == target_elementary_divisors;
    Ok(InvariantReport {
        rank: q.rank(),
        signature,
        elementary_divisors,
        target_rank: target.rank(),
        target_signature,
        target_elementary_divisors,
        matches,
    })
}

/// An isotropic `γ` with `(γ, β) = -1`, for primitive isotropic `β` in a unimodular lattice.
pub fn find_gamma(lattice: &IntLattice, beta: &LatticeVec) -> Result<LatticeVec> {
    if !lattice.is_primitive(beta)? {
        return Err(Error::NotPrimitive { content: beta.content() });
    }
    let norm = lattice.norm(beta)?;
    if !norm.is_zero() {
        return Err(Error::NotIsotropic { norm });
    }
    let (g, w) = matrix::vector_xgcd(&lattice.dual_coords(beta)?);
    if !g.is_one() {
        return Err(Error::InvalidParameters(format!("beta has divisibility {g}; no gamma with (gamma, beta) = -1")));
    }
    let gamma0 = -LatticeVec::new(w);
    let half = lattice.norm(&gamma0)? / 2;
    Ok(&gamma0 + &(beta * &half))
}

/// `σ_γ(x) = -(x, γ) β` for `x ∈ β^⊥`.
pub fn sigma_gamma(lattice: &IntLattice, beta: &LatticeVec, gamma: &LatticeVec, x: &LatticeVec) -> Result<LatticeVec> {
    if !lattice.pairing(x, beta)?.is_zero() {
        return Err(Error::NotOrthogonal("x is not in beta^perp".into()));
    }
    let c = -lattice.pairing(x, gamma)?;
    Ok(beta * &c)
}

/// `τ̃_γ(y) = ỹ + (ỹ, γ) β` for a lift `ỹ ∈ β^⊥` of `y`.
pub fn tau_tilde_gamma(
    lattice: &IntLattice,
    beta: &LatticeVec,
    gamma: &LatticeVec,
    lift: &LatticeVec,
) -> Result<LatticeVec> {
    if !lattice.pairing(lift, beta)?.is_zero() {
        return Err(Error::NotOrthogonal("lift is not in beta^perp".into()));
    }
    let c = lattice.pairing(lift, gamma)?;
    Ok(lift + &(beta * &c))
}

/// Elementary divisors of `K3 / (λ^⊥ + Zλ)` with `λ = e1 - ((n-1)/d²) f1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShaKernel {
    pub n: u64,
    pub d: u64,
    pub lambda_norm: BigInt,
    pub elementary_divisors: Vec<BigInt>,
    pub order: BigInt,
    pub cyclic: bool,
}

pub fn sha_kernel(n: u64, d: u64) -> Result<ShaKernel> {
    if n < 2 || d == 0 || !(n - 1).is_multiple_of(d * d) {
        return Err(Error::InvalidParameters(format!("need n >= 2 and d^2 | n-1 (n = {n}, d = {d})")));
    }
    let k3 = standard_lattice(StandardLattice::K3, None)?;
    let mut lambda = LatticeVec::zero(k3.rank()).into_coords();
    lambda[0] = BigInt::one();
    lambda[1] = -BigInt::from((n - 1) / (d * d));
    let lambda = LatticeVec::new(lambda);
    let a = k3.orthogonal_complement_of(std::slice::from_ref(&lambda))?;
    let b = SublatticeBasis::new(vec![lambda.clone()], k3.rank())?;
    let elementary_divisors = k3.quotient_group_order(&a, &b)?;
    if elementary_divisors.iter().any(Zero::is_zero) {
        return Err(Error::InvariantViolation("quotient has a free part".into()));
    }
    let order = elementary_divisors.iter().fold(BigInt::one(), |p, x| p * x);
    Ok(ShaKernel {
        n,
        d,
        lambda_norm: k3.norm(&lambda)?,
        cyclic: elementary_divisors.len() <= 1,
        elementary_divisors,
        order,
    })
}
