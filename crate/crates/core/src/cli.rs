//! Command implementations behind the `bbf` binary.
//!
//! Every command returns a [`Report`]; the binary only parses flags, prints
//! and maps the outcome to an exit code.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::check::{all_pass, Check};
use crate::classifier::{
    brute_force_orbit_count, classify_isotropic, construct_alpha, enumerate_orbit_reps, mukai_example, nu,
};
use crate::error::{Error, Result};
use crate::io::{certificate_to_json, ints_to_json, int_to_json, matrix_to_json, period_to_json};
use crate::k3::{associate_k3, sha_kernel};
use crate::lattice::{standard_lattice, IntLattice, LatticeVec, StandardLattice};
use crate::period::{density_approximate, sample_nonspecial_period, DensityConfig, Period};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Search effort for oracles and suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Small,
    Full,
}

impl std::str::FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Budget::Small),
            "full" => Ok(Budget::Full),
            other => Err(Error::Parse(format!("budget must be small or full, not {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, outputs: Value, checks: Vec<Check>) -> Self {
        Report { command: command.into(), inputs, outputs, checks }
    }

    pub fn passed(&self) -> bool {
        all_pass(&self.checks)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_VERIFICATION
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering: inputs and outputs as indented JSON, then one row per check.
    pub fn to_table(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        let pretty = |v: &Value| serde_json::to_string_pretty(v).expect("json value");
        out += &format!("inputs:  {}\n", pretty(&self.inputs));
        out += &format!("outputs: {}\n", pretty(&self.outputs));
        if !self.checks.is_empty() {
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            out += "checks:\n";
            for c in &self.checks {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                out += &format!("  {tag}  {:<width$}  {}\n", c.name, c.detail);
            }
            let failed = self.checks.iter().filter(|c| !c.pass).count();
            out += &format!("{} checks, {} failed\n", self.checks.len(), failed);
        }
        out
    }
}

/// Exit code for an error: internal assertion failures are verification failures.
pub fn exit_code_for(err: &Error) -> i32 {
    if err.is_invariant_violation() {
        EXIT_VERIFICATION
    } else {
        EXIT_INPUT
    }
}

fn k3n(n: u64) -> Result<IntLattice> {
    standard_lattice(StandardLattice::K3n, Some(n))
}

fn isotropy_checks(n: u64, alpha: &LatticeVec) -> Result<Vec<Check>> {
    let l = k3n(n)?;
    let norm = l.norm(alpha)?;
    let content = alpha.content();
    Ok(vec![
        Check::new("isotropic", norm.is_zero(), format!("(alpha,alpha) = {norm}")),
        Check::new("primitive", content.is_one(), format!("content = {content}")),
    ])
}

pub fn cmd_classify(n: u64, alpha: &LatticeVec) -> Result<Report> {
    let inv = classify_isotropic(n, alpha)?;
    let mut checks = isotropy_checks(n, alpha)?;
    // the normal form must land in the same class
    let rep = construct_alpha(n, inv.d, inv.b_star as i64)?;
    let back = classify_isotropic(n, &rep)?;
    checks.push(Check::new(
        "normal_form_round_trip",
        back == inv,
        format!("construct_alpha({n},{},{}) classifies to (d,b*) = ({},{})", inv.d, inv.b_star, back.d, back.b_star),
    ));
    Ok(Report::new(
        "classify",
        json!({ "n": n, "alpha": ints_to_json(alpha.coords()) }),
        json!({ "d": inv.d, "b_star": inv.b_star }),
        checks,
    ))
}

/// Starting ranges for the orbit oracle; it doubles them until the count is stable.
pub fn oracle_ranges(budget: Budget) -> (u64, u64) {
    match budget {
        Budget::Small => (8, 8),
        Budget::Full => (32, 32),
    }
}

pub fn cmd_orbits(n: u64, d: u64, oracle: bool, budget: Budget) -> Result<Report> {
    let reps = enumerate_orbit_reps(n, d)?;
    let mut outputs = json!({
        "count": reps.len(),
        "nu": nu(d),
        "representatives": reps.iter().map(|r| json!({ "d": r.d, "b_star": r.b_star })).collect::<Vec<_>>(),
    });
    let mut checks = vec![Check::new(
        "count_equals_nu",
        reps.len() as u64 == nu(d),
        format!("{} representatives, nu({d}) = {}", reps.len(), nu(d)),
    )];
    for r in &reps {
        let alpha = construct_alpha(n, d, r.b_star as i64)?;
        let back = classify_isotropic(n, &alpha)?;
        checks.push(Check::new(
            format!("representative_b{}", r.b_star),
            back == *r,
            format!("classifies to (d,b*) = ({},{})", back.d, back.b_star),
        ));
    }
    if oracle {
        let (y, c) = oracle_ranges(budget);
        let run = brute_force_orbit_count(n, d, y, c)?;
        outputs["oracle"] = json!({
            "count": run.count,
            "y_range": run.y_range,
            "c_range": run.c_range,
            "isometries": run.isometries,
        });
        checks.push(Check::new(
            "oracle_matches",
            run.count == reps.len(),
            format!("oracle {} classes at |y| <= {}, |c| <= {}", run.count, run.y_range, run.c_range),
        ));
    }
    Ok(Report::new("orbits", json!({ "n": n, "d": d, "oracle": oracle, "budget": budget }), outputs, checks))
}

pub fn cmd_construct(n: u64, d: u64, b: i64) -> Result<Report> {
    let alpha = construct_alpha(n, d, b)?;
    let mut checks = isotropy_checks(n, &alpha)?;
    let inv = classify_isotropic(n, &alpha)?;
    let bm = b.rem_euclid(d as i64) as u64;
    let expect = if d == 1 { 0 } else { bm.min(d - bm) };
    checks.push(Check::new(
        "classify_round_trip",
        inv.d == d && inv.b_star == expect,
        format!("(d,b*) = ({},{}), expected ({d},{expect})", inv.d, inv.b_star),
    ));
    Ok(Report::new(
        "construct",
        json!({ "n": n, "d": d, "b": b }),
        json!({ "alpha": ints_to_json(alpha.coords()), "d": inv.d, "b_star": inv.b_star }),
        checks,
    ))
}

pub fn cmd_mukai(n: u64, d: u64, b: i64) -> Result<Report> {
    let m = mukai_example(n, d, b)?;
    Ok(Report::new(
        "mukai-example",
        json!({ "n": n, "d": d, "b": b }),
        json!({
            "lambda": ints_to_json(m.lambda.coords()),
            "s": m.s,
            "v": ints_to_json(m.v.coords()),
            "alpha": ints_to_json(m.alpha.coords()),
            "v_perp_rank": m.v_perp.rank(),
        }),
        m.checks,
    ))
}

pub fn cmd_associate(n: u64, alpha: &LatticeVec) -> Result<Report> {
    let a = associate_k3(n, alpha)?;
    let r = &a.invariant_report;
    let mut checks = a.checks.clone();
    checks.push(Check::new(
        "invariants_match_target",
        r.matches,
        format!(
            "rank {} sig {} divisors {:?}; target rank {} sig {} divisors {:?}",
            r.rank,
            r.signature,
            r.elementary_divisors.iter().map(ToString::to_string).collect::<Vec<_>>(),
            r.target_rank,
            r.target_signature,
            r.target_elementary_divisors.iter().map(ToString::to_string).collect::<Vec<_>>()
        ),
    ));
    Ok(Report::new(
        "associate",
        json!({ "n": n, "alpha": ints_to_json(alpha.coords()) }),
        json!({
            "beta": ints_to_json(a.beta.coords()),
            "v_bar": ints_to_json(a.v_bar.coords()),
            "d": int_to_json(&a.d),
            "xi": ints_to_json(a.xi.coords()),
            "q_alpha": {
                "rank": r.rank,
                "signature": r.signature,
                "elementary_divisors": ints_to_json(&r.elementary_divisors),
                "gram": matrix_to_json(a.q_alpha.lattice().gram()),
            },
            "iota_bar": matrix_to_json(&a.iota_bar),
        }),
        checks,
    ))
}

pub fn cmd_sha_kernel(n: u64, d: u64) -> Result<Report> {
    let s = sha_kernel(n, d)?;
    let expected = s.lambda_norm.abs();
    let mut checks = vec![
        Check::new("cyclic", s.cyclic, format!("{} elementary divisors", s.elementary_divisors.len())),
        Check::new("order_equals_lambda_norm", s.order == expected, format!("order {} vs |(lambda,lambda)| = {expected}", s.order)),
    ];
    if d == 1 {
        let target = BigInt::from(2 * n - 2);
        checks.push(Check::new("order_2n_minus_2", s.order == target, format!("order {} vs 2n-2 = {target}", s.order)));
    }
    Ok(Report::new(
        "sha-kernel",
        json!({ "n": n, "d": d }),
        json!({
            "lambda_norm": int_to_json(&s.lambda_norm),
            "elementary_divisors": ints_to_json(&s.elementary_divisors),
            "order": int_to_json(&s.order),
            "cyclic": s.cyclic,
        }),
        checks,
    ))
}

fn period_checks(p: &Period) -> Vec<Check> {
    let sp = p.is_special();
    vec![
        Check::new("period_norm_positive", p.norm().is_positive(), format!("(x,x) = {}", p.norm())),
        Check::new(
            "non_special",
            !sp.special,
            match &sp.witness {
                Some(w) => format!("plane meets the lattice in {:?}", w.coords().iter().map(ToString::to_string).collect::<Vec<_>>()),
                None => "no lattice vector in span{x,y}".into(),
            },
        ),
    ]
}

pub fn cmd_sample_period(lattice: &IntLattice, d: &BigInt, seed: u64) -> Result<Report> {
    let p = sample_nonspecial_period(lattice, d, seed)?;
    Ok(Report::new(
        "sample-period",
        json!({ "lattice": lattice.label(), "D": int_to_json(d), "seed": seed }),
        period_to_json(&p),
        period_checks(&p),
    ))
}

pub fn cmd_density(period: &Period, target: (f64, f64), epsilon: f64, config: DensityConfig) -> Result<Report> {
    let cert = density_approximate(period, target, epsilon, config)?;
    let worst = cert.trace.iter().map(|s| s.ratio()).fold(0.0f64, f64::max);
    let checks = vec![
        Check::new("error_below_epsilon", cert.achieved_error < epsilon, format!("{:e} < {epsilon:e}", cert.achieved_error)),
        Check::new(
            "reverified",
            cert.verified_error < epsilon && cert.verified_error <= 2.0 * cert.achieved_error + 2f64.powi(-(cert.precision_bits as i32 - 8)),
            format!("{:e} at {} bits", cert.verified_error, cert.precision_bits),
        ),
        Check::new("shrink_factor", worst <= 11.0 / 12.0 + 1e-12, format!("worst ratio {worst:.6} over {} steps", cert.iterations)),
    ];
    let mut outputs = certificate_to_json(&cert);
    outputs["verified_error"] = json!(cert.verified_error);
    outputs["precision_bits"] = json!(cert.precision_bits);
    Ok(Report::new(
        "density",
        json!({
            "lattice": period.lattice().label(),
            "D": int_to_json(period.discriminant()),
            "target": [target.0, target.1],
            "epsilon": epsilon,
            "precision_bits": config.precision_bits,
        }),
        outputs,
        checks,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let r = cmd_classify(5, &construct_alpha(5, 2, 1).unwrap()).unwrap();
        assert_eq!(r.outputs, json!({ "d": 2, "b_star": 1 }));
        assert!(r.passed());
        let mut e1 = vec![BigInt::zero(); 23];
        e1[0] = BigInt::one();
        let r = cmd_classify(2, &LatticeVec::new(e1)).unwrap();
        assert_eq!(r.outputs, json!({ "d": 1, "b_star": 0 }));
        let mut bad = vec![BigInt::zero(); 23];
        bad[22] = BigInt::one();
        let err = cmd_classify(5, &LatticeVec::new(bad)).unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_INPUT);
        assert!(err.to_string().contains("isotropic"));
    }

    #[test]
    fn orbits_and_sha() {
        let r = cmd_orbits(26, 5, true, Budget::Small).unwrap();
        assert_eq!(r.outputs["count"], json!(2));
        assert_eq!(r.outputs["oracle"]["count"], json!(2));
        assert!(r.passed());
        assert_eq!(cmd_orbits(5, 2, false, Budget::Small).unwrap().outputs["count"], json!(1));
        assert_eq!(exit_code_for(&cmd_orbits(6, 2, false, Budget::Small).unwrap_err()), EXIT_INPUT);
        let s = cmd_sha_kernel(5, 1).unwrap();
        assert_eq!(s.outputs["elementary_divisors"], json!(["8"]));
        assert!(s.passed());
    }

    #[test]
    fn table_lists_checks() {
        let r = cmd_construct(10, 3, 2).unwrap();
        let t = r.to_table();
        assert!(t.contains("PASS  classify_round_trip"));
        assert_eq!(r.exit_code(), EXIT_PASS);
    }
}
