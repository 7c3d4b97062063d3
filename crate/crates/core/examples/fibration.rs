//! Sections τ_γ of the projection Ω_α -> Ω_{Q_α} and the action of g_[z].

use bbf_lattice::classifier::construct_alpha;
use bbf_lattice::k3::{associate_k3, find_gamma};
use bbf_lattice::period::{sample_nonspecial_period, Fibration};
use num_bigint::BigInt;

fn main() -> bbf_lattice::Result<()> {
    let a = associate_k3(5, &construct_alpha(5, 2, 1)?)?;
    let fib = Fibration::new(&a);
    let gamma = find_gamma(fib.mukai(), fib.beta())?;
    let d = BigInt::from(2);
    let ql = sample_nonspecial_period(fib.q_lattice(), &d, 1)?;
    let tau = fib.tau_section(&gamma, &ql)?;
    println!("q(τ_γ(l)) = l: {}", fib.q_project(&tau)?.same_line(&ql));
    let alpha_perp = fib.k3n().orthogonal_complement_of(std::slice::from_ref(fib.alpha()))?;
    for i in [0, 5, 20] {
        let z = alpha_perp.vector(i);
        let lhs = fib.g_act(&z, &tau)?;
        let rhs = fib.tau_section(&fib.delta(&gamma, &z)?, &ql)?;
        println!("z = basis[{i:>2}]: g_[z] τ_γ = τ_δ: {}", lhs.same_line(&rhs));
    }
    Ok(())
}
