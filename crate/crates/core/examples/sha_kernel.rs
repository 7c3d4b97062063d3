//! Elementary divisors of K3 / (λ^⊥ ⊕ Zλ).

use bbf_lattice::k3::sha_kernel;

fn main() -> bbf_lattice::Result<()> {
    for (n, d) in [(2, 1), (5, 1), (12, 1), (10, 3), (26, 5)] {
        let s = sha_kernel(n, d)?;
        println!("n={n:<3} d={d}: (λ,λ)={:<3} divisors {:?}, cyclic {}", s.lambda_norm, s.elementary_divisors, s.cyclic);
    }
    Ok(())
}
