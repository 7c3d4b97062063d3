//! Lattice points whose period value approaches a target.

use bbf_lattice::io::lattice_from_label;
use bbf_lattice::period::{density_approximate, sample_nonspecial_period, DensityConfig};
use num_bigint::BigInt;

fn main() -> bbf_lattice::Result<()> {
    let lattice = lattice_from_label("Qalpha(5,2,1)")?;
    let p = sample_nonspecial_period(&lattice, &BigInt::from(2), 7)?;
    let target = (0.3, -0.7);
    for eps in [1e-1, 1e-3, 1e-6] {
        let c = density_approximate(&p, target, eps, DensityConfig::default())?;
        let size = c.coeffs.iter().map(|x| x.bits()).max().unwrap_or(0);
        println!(
            "ε = {eps:e}: error {:.3e} after {} iterations, {} shrink steps, coefficients up to {size} bits",
            c.verified_error,
            c.iterations,
            c.trace.len()
        );
    }
    Ok(())
}
