//! Seeded invariant suites run by `bbf verify`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::check::Check;
use crate::classifier::{
    brute_force_orbit_count, classify_isotropic, construct_alpha, enumerate_orbit_reps, mukai_example, nu,
    reduce_gram_to_lnd,
};
use crate::cli::{oracle_ranges, Budget, Report};
use crate::error::{Error, Result};
use crate::io::{lattice_from_label, matrix_from_json};
use crate::k3::{associate_k3, sha_kernel, K3Association};
use crate::lattice::{smith_normal_form, standard_lattice, IntLattice, LatticeVec, StandardLattice, SublatticeBasis};
use crate::matrix::IntMatrix;
use crate::period::{
    density_approximate, make_period, sample_nonspecial_period, tilde_g, witness_in_plane, DensityConfig, Fibration,
    QuadScalar,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lattice,
    Classifier,
    K3,
    Period,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lattice" => Ok(Suite::Lattice),
            "classifier" => Ok(Suite::Classifier),
            "k3" => Ok(Suite::K3),
            "period" => Ok(Suite::Period),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite {other:?}"))),
        }
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Classifier => "classifier",
            Suite::K3 => "k3",
            Suite::Period => "period",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Lattice, Suite::Classifier, Suite::K3, Suite::Period],
            s => vec![s],
        }
    }
}

fn rng_for(seed: u64, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ suite as u64)
}

/// Runs the requested suites; `fixture` is a lattice file checked against its claimed label.
pub fn cmd_verify(suite: Suite, budget: Budget, seed: u64, fixture: Option<&Value>) -> Result<Report> {
    let mut checks = Vec::new();
    if let Some(f) = fixture {
        checks.extend(fixture_checks(f)?);
    }
    for s in suite.members() {
        let mut rng = rng_for(seed, s);
        let mut part = match s {
            Suite::Lattice => lattice_suite(budget, &mut rng)?,
            Suite::Classifier => classifier_suite(budget)?,
            Suite::K3 => k3_suite(budget, &mut rng)?,
            Suite::Period => period_suite(budget, &mut rng)?,
            Suite::All => unreachable!(),
        };
        for c in &mut part {
            c.name = format!("{}/{}", s.name(), c.name);
        }
        checks.extend(part);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let outputs = json!({ "total": checks.len(), "failed": failed });
    Ok(Report::new(
        "verify",
        json!({ "suite": suite.name(), "budget": budget, "seed": seed, "fixture": fixture.is_some() }),
        outputs,
        checks,
    ))
}

/// Checks a `{"label", "gram"}` file against the named standard lattice.
///
/// Works on the raw matrix so that a broken Gram is reported as a failed
/// check instead of being rejected at parse time.
fn fixture_checks(v: &Value) -> Result<Vec<Check>> {
    let label = v.get("label").and_then(Value::as_str).ok_or_else(|| Error::Parse("fixture needs \"label\"".into()))?;
    let gram = matrix_from_json(v.get("gram").ok_or_else(|| Error::Parse("fixture needs \"gram\"".into()))?)?;
    let reference = lattice_from_label(label)?;
    let name = |s: &str| format!("fixture/{label}/{s}");
    let mut checks = Vec::new();
    let square = gram.is_square() && gram.rows() == reference.rank();
    checks.push(Check::new(name("rank"), square, format!("{}x{} vs rank {}", gram.rows(), gram.cols(), reference.rank())));
    if !square {
        return Ok(checks);
    }
    let symmetric = gram.is_symmetric();
    checks.push(Check::new(name("symmetric"), symmetric, ""));
    let odd: Vec<usize> = (0..gram.rows()).filter(|&i| gram.get(i, i).is_odd()).collect();
    checks.push(Check::new(name("even"), odd.is_empty(), format!("odd diagonal at {odd:?}")));
    let det = gram.determinant();
    let ref_det = reference.determinant();
    checks.push(Check::new(name("determinant"), det == ref_det, format!("{det} vs {ref_det}")));
    if symmetric && odd.is_empty() {
        let sig = IntLattice::new(gram.clone())?.inertia();
        let want = reference.inertia();
        checks.push(Check::new(
            name("signature"),
            sig == want,
            format!("({},{},{}) vs ({},{},{})", sig.positive, sig.negative, sig.nullity, want.positive, want.negative, want.nullity),
        ));
    }
    let diffs = (0..gram.rows())
        .flat_map(|i| (0..gram.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| gram.get(i, j) != reference.gram().get(i, j))
        .count();
    checks.push(Check::new(name("gram_matches_standard"), diffs == 0, format!("{diffs} entries differ")));
    Ok(checks)
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

/// Random nondegenerate even symmetric matrix.
fn random_even_gram(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> IntMatrix {
    loop {
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g.set(i, i, BigInt::from(2 * rng.gen_range(-bound..=bound)));
            for j in (i + 1)..n {
                let x = BigInt::from(rng.gen_range(-bound..=bound));
                g.set(i, j, x.clone());
                g.set(j, i, x);
            }
        }
        if !g.determinant().is_zero() {
            return g;
        }
    }
}

/// Aggregates a counted property into one check.
fn tally(name: &str, failures: usize, total: usize, first: Option<String>) -> Check {
    let detail = match first {
        Some(f) => format!("{failures}/{total} failed; first: {f}"),
        None => format!("{total} cases"),
    };
    Check::new(name, failures == 0, detail)
}

struct Tally {
    failures: usize,
    total: usize,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { failures: 0, total: 0, first: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn check(self, name: &str) -> Check {
        tally(name, self.failures, self.total, self.first)
    }
}

fn lattice_suite(budget: Budget, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let (cases, max_rank, bound) = match budget {
        Budget::Small => (12, 10, 1000),
        Budget::Full => (40, 24, 1_000_000),
    };
    let mut checks = Vec::new();
    for (name, lat, sig, det) in [
        ("U", standard_lattice(StandardLattice::U, None)?, (1, 1), -1),
        ("E8(-1)", standard_lattice(StandardLattice::E8Minus, None)?, (0, 8), 1),
        ("K3", standard_lattice(StandardLattice::K3, None)?, (3, 19), -1),
        ("Mukai", standard_lattice(StandardLattice::Mukai, None)?, (4, 20), 1),
        ("K3n(5)", standard_lattice(StandardLattice::K3n, Some(5))?, (3, 20), 8),
    ] {
        let s = lat.signature()?;
        let d = lat.determinant();
        checks.push(Check::new(
            format!("standard_{name}"),
            (s.positive, s.negative) == sig && d == BigInt::from(det),
            format!("signature {s}, det {d}"),
        ));
    }

    let mut snf = Tally::new();
    let mut additivity = Tally::new();
    let mut idempotent = Tally::new();
    let mut complement = Tally::new();
    for _ in 0..cases {
        let r = rng.gen_range(2..=max_rank);
        let c = rng.gen_range(2..=max_rank);
        let m = random_matrix(rng, r, c, bound);
        let s = smith_normal_form(&m);
        let rebuilt = &(&s.left * &m) * &s.right;
        let chain = s.diag.windows(2).all(|w| w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        let unimodular = s.left.determinant().abs().is_one() && s.right.determinant().abs().is_one();
        snf.record(rebuilt == s.diagonal_matrix() && chain && unimodular, || format!("{r}x{c}"));

        let (a, b) = (rng.gen_range(1..=max_rank / 2), rng.gen_range(1..=max_rank / 2));
        let small = bound.min(50);
        let ga = IntLattice::new(random_even_gram(rng, a, small))?;
        let gb = IntLattice::new(random_even_gram(rng, b, small))?;
        let (sa, sb) = (ga.signature()?, gb.signature()?);
        let sum = ga.direct_sum(&gb).signature()?;
        additivity.record(
            sum.positive == sa.positive + sb.positive && sum.negative == sa.negative + sb.negative,
            || format!("{sa} + {sb} != {sum}"),
        );

        let n = rng.gen_range(3..=max_rank);
        let lat = IntLattice::new(random_even_gram(rng, n, small))?;
        let k = rng.gen_range(1..n);
        let Ok(sub) = SublatticeBasis::from_matrix(random_matrix(rng, k, n, bound)) else { continue };
        let sat = lat.saturation(&sub)?;
        let again = lat.saturation(&sat)?;
        idempotent.record(
            again.same_sublattice(&sat) && sub.vectors().all(|v| sat.contains(v.coords())),
            || format!("rank {k} in {n}"),
        );
        let perp = lat.orthogonal_complement(&sub)?;
        let ok = lat.is_saturated(&perp)?
            && perp.rank() == n - k
            && perp.vectors().all(|p| sub.vectors().all(|s| lat.pairing(&p, &s).map(|x| x.is_zero()).unwrap_or(false)));
        complement.record(ok, || format!("complement of rank {k} in {n}"));
    }
    checks.push(snf.check("snf_reconstruction"));
    checks.push(additivity.check("signature_additivity"));
    checks.push(idempotent.check("saturation_idempotent"));
    checks.push(complement.check("complement_saturated"));
    Ok(checks)
}

/// `(n, d, b)` with `n <= max_n`, `d <= 10`, `d² | n-1` and `gcd(b, d) = 1`, `0 <= b < d`.
pub fn classification_grid(max_n: u64) -> Vec<(u64, u64, i64)> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for d in 1..=10u64 {
            if (n - 1) % (d * d) != 0 {
                continue;
            }
            for b in 0..d.max(1) as i64 {
                if b.gcd(&(d as i64)) == 1 {
                    out.push((n, d, b));
                }
            }
        }
    }
    out
}

fn classifier_suite(budget: Budget) -> Result<Vec<Check>> {
    let (max_n, max_d) = match budget {
        Budget::Small => (40, 6),
        Budget::Full => (101, 8),
    };
    let grid = classification_grid(max_n);
    let k3n_cache: Vec<IntLattice> =
        (2..=max_n).map(|n| standard_lattice(StandardLattice::K3n, Some(n))).collect::<Result<_>>()?;
    let mut round = Tally::new();
    let mut gram = Tally::new();
    let mut mukai = Tally::new();
    for &(n, d, b) in &grid {
        let l = &k3n_cache[(n - 2) as usize];
        let alpha = construct_alpha(n, d, b)?;
        let inv = classify_isotropic(n, &alpha)?;
        let bm = b.rem_euclid(d as i64) as u64;
        let want = if d == 1 { 0 } else { bm.min(d - bm) };
        let ok = l.norm(&alpha)?.is_zero() && alpha.content().is_one() && inv.d == d && inv.b_star == want;
        round.record(ok, || format!("(n,d,b) = ({n},{d},{b})"));

        let (a, g) = reduce_gram_to_lnd(n, d, b)?;
        let k = BigInt::from((2 * n - 2) / (d * d));
        let target = IntMatrix::from_rows(vec![vec![k, BigInt::zero()], vec![BigInt::zero(), BigInt::zero()]], 2)?;
        gram.record(a.determinant().abs().is_one() && g == target, || format!("({n},{d},{b})"));

        let m = mukai_example(n, d, b)?;
        mukai.record(m.checks.iter().all(|c| c.pass), || format!("({n},{d},{b})"));
    }
    let mut checks = vec![
        round.check("classification_round_trip"),
        gram.check("gram_reduction"),
        mukai.check("mukai_witness"),
    ];

    let table = [(1, 1), (2, 1), (3, 1), (4, 1), (5, 2), (7, 3), (12, 2)];
    let bad: Vec<String> = table.iter().filter(|&&(d, v)| nu(d) != v).map(|(d, v)| format!("nu({d}) != {v}")).collect();
    checks.push(Check::new("nu_table", bad.is_empty(), bad.join(", ")));

    let (y, c) = oracle_ranges(budget);
    for d in 1..=max_d {
        let n = d * d + 1;
        let reps = enumerate_orbit_reps(n, d)?;
        let run = brute_force_orbit_count(n, d, y, c)?;
        checks.push(Check::new(
            format!("orbit_oracle_d{d}"),
            run.count as u64 == nu(d) && reps.len() as u64 == nu(d),
            format!("oracle {} (|y| <= {}), reps {}, nu {}", run.count, run.y_range, reps.len(), nu(d)),
        ));
    }
    Ok(checks)
}

fn random_in(rng: &mut ChaCha8Rng, basis: &SublatticeBasis, terms: usize, bound: i64) -> LatticeVec {
    let mut v = LatticeVec::zero(basis.ambient_rank());
    for _ in 0..terms {
        let i = rng.gen_range(0..basis.rank());
        let c = BigInt::from(rng.gen_range(-bound..=bound));
        v = &v + &(&basis.vector(i) * &c);
    }
    v
}

fn k3_suite(budget: Budget, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let (max_n, samples) = match budget {
        Budget::Small => (10, 50),
        Budget::Full => (50, 1000),
    };
    let mut assoc = Tally::new();
    for (n, d, b) in classification_grid(max_n) {
        let a = associate_k3(n, &construct_alpha(n, d, b)?)?;
        assoc.record(a.passed() && a.invariant_report.matches, || format!("({n},{d},{b})"));
    }
    let mut checks = vec![assoc.check("association")];

    let mut sha = Tally::new();
    for n in 2..=12u64 {
        let s = sha_kernel(n, 1)?;
        sha.record(s.cyclic && s.order == BigInt::from(2 * n - 2), || format!("n = {n}: {:?}", s.elementary_divisors));
    }
    checks.push(sha.check("sha_kernel_cyclic_2n_minus_2"));

    let a = associate_k3(5, &construct_alpha(5, 2, 1)?)?;
    checks.extend(tilde_g_checks(&a, samples, rng)?);
    Ok(checks)
}

fn tilde_g_checks(a: &K3Association, samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let fib = Fibration::new(a);
    let m = fib.mukai();
    let perp = m.orthogonal_complement_of(&[fib.beta().clone(), fib.v().clone()])?;
    let beta_perp = m.orthogonal_complement_of(std::slice::from_ref(fib.beta()))?;
    let mut isometry = Tally::new();
    let mut fixes = Tally::new();
    let mut trivial = Tally::new();
    let mut hom = Tally::new();
    for _ in 0..samples {
        let z1 = random_in(rng, &perp, 3, 5);
        let z2 = random_in(rng, &perp, 3, 5);
        let g1 = tilde_g(m, &z1, fib.beta(), fib.v())?;
        let g2 = tilde_g(m, &z2, fib.beta(), fib.v())?;
        isometry.record(&(&g1.transpose() * m.gram()) * &g1 == *m.gram(), || format!("{:?}", z1.coords()));
        fixes.record(
            g1.mul_vec(fib.beta().coords()) == fib.beta().coords() && g1.mul_vec(fib.v().coords()) == fib.v().coords(),
            || format!("{:?}", z1.coords()),
        );
        let x = random_in(rng, &beta_perp, 4, 7);
        let diff = &LatticeVec::new(g1.mul_vec(x.coords())) - &x;
        trivial.record(is_multiple(&diff, fib.beta()), || format!("{:?}", z1.coords()));
        let g12 = tilde_g(m, &(&z1 + &z2), fib.beta(), fib.v())?;
        hom.record(&g1 * &g2 == g12, || format!("{:?} + {:?}", z1.coords(), z2.coords()));
    }
    Ok(vec![
        isometry.check("tilde_g_isometry"),
        fixes.check("tilde_g_fixes_beta_v"),
        trivial.check("tilde_g_trivial_mod_beta"),
        hom.check("tilde_g_homomorphism"),
    ])
}

fn is_multiple(x: &LatticeVec, beta: &LatticeVec) -> bool {
    let Some(i) = beta.coords().iter().position(|c| !c.is_zero()) else { return x.is_zero() };
    let (q, r) = x.coords()[i].div_rem(&beta.coords()[i]);
    r.is_zero() && *x == beta * &q
}

fn period_suite(budget: Budget, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let (periods, zs, targets) = match budget {
        Budget::Small => (3, 3, 2),
        Budget::Full => (20, 5, 10),
    };
    let a = associate_k3(5, &construct_alpha(5, 2, 1)?)?;
    let fib = Fibration::new(&a);
    let gamma = crate::k3::find_gamma(fib.mukai(), fib.beta())?;
    let d = BigInt::from(2);
    let alpha_perp = fib.k3n().orthogonal_complement_of(std::slice::from_ref(fib.alpha()))?;

    let mut nonspecial = Tally::new();
    let mut section = Tally::new();
    let mut cocycle = Tally::new();
    let mut fibre = Tally::new();
    let mut sampled = Vec::new();
    for _ in 0..periods {
        let seed = rng.gen::<u64>();
        let qp = sample_nonspecial_period(fib.q_lattice(), &d, seed)?;
        nonspecial.record(!qp.is_special().special, || format!("seed {seed}"));
        let lifted = fib.tau_section(&gamma, &qp)?;
        section.record(fib.q_project(&lifted)?.same_line(&qp), || format!("seed {seed}"));
        for _ in 0..zs {
            let z = random_in(rng, &alpha_perp, 3, 4);
            let lhs = fib.g_act(&z, &lifted)?;
            let rhs = fib.tau_section(&fib.delta(&gamma, &z)?, &qp)?;
            cocycle.record(lhs.same_line(&rhs), || format!("seed {seed}, z {:?}", z.coords()));
            fibre.record(fib.q_project(&lhs)?.same_line(&qp), || format!("seed {seed}"));
        }
        sampled.push(qp);
    }
    let mut checks = vec![
        nonspecial.check("sampler_non_special"),
        section.check("q_after_tau_is_identity"),
        cocycle.check("g_tau_equals_tau_delta"),
        fibre.check("q_invariant_under_g"),
    ];

    // rational periods always meet the lattice
    let mut rational = Tally::new();
    let k3 = standard_lattice(StandardLattice::K3, None)?;
    for _ in 0..periods {
        let i = 2 * rng.gen_range(0..3usize);
        let j = 2 * rng.gen_range(0..3usize);
        if i == j {
            continue;
        }
        // e_i - f_i has norm 2; two of them span a positive rational plane
        let mut x = vec![QuadScalar::zero(&d); 22];
        let mut y = vec![QuadScalar::zero(&d); 22];
        x[i] = QuadScalar::from_int(1, &d);
        x[i + 1] = QuadScalar::from_int(-1, &d);
        y[j] = QuadScalar::from_int(1, &d);
        y[j + 1] = QuadScalar::from_int(-1, &d);
        let p = make_period(&k3, &d, x, y)?;
        let s = p.is_special();
        let ok = s.special && s.witness.as_ref().is_some_and(|w| witness_in_plane(&p, w));
        rational.record(ok, || format!("plane ({i},{j})"));
    }
    checks.push(rational.check("rational_periods_special"));

    let config = DensityConfig { precision_bits: 200, ..DensityConfig::default() };
    let mut density = Tally::new();
    let mut shrink = Tally::new();
    for qp in sampled.iter().take(if budget == Budget::Small { 1 } else { 5 }) {
        for _ in 0..targets {
            let t = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            match density_approximate(qp, t, 1e-3, config) {
                Ok(c) => {
                    density.record(c.verified_error < 1e-3 && c.verified_error <= 2.0 * c.achieved_error + 1e-50, || {
                        format!("target {t:?}: {:e}", c.verified_error)
                    });
                    shrink.record(c.trace.iter().all(|s| s.ratio() <= 11.0 / 12.0 + 1e-12), || format!("target {t:?}"));
                }
                Err(e) => density.record(false, || format!("target {t:?}: {e}")),
            }
        }
    }
    checks.push(density.check("density_certificates"));
    checks.push(shrink.check("density_shrink_factor"));
    Ok(checks)
}
