//! The K3 lattice attached to an isotropic class and the isometry Q_α -> ξ^⊥.

use bbf_lattice::classifier::construct_alpha;
use bbf_lattice::k3::associate_k3;

fn main() -> bbf_lattice::Result<()> {
    let (n, d, b) = (10, 3, 1);
    let a = associate_k3(n, &construct_alpha(n, d, b)?)?;
    let r = &a.invariant_report;
    println!("α = {:?}", a.alpha.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("Q_α: rank {}, signature ({}, {})", r.rank, r.signature.positive, r.signature.negative);
    println!("discriminant group {:?}, target {:?}", r.elementary_divisors, r.target_elementary_divisors);
    println!("(ξ, ξ) = {}", a.k3.lattice().norm(&a.xi)?);
    for c in &a.checks {
        println!("  {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
    }
    Ok(())
}
