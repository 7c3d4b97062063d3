//! Invariant (d, b*) of a few primitive isotropic classes in K3n(n).

use bbf_lattice::classifier::{classify_isotropic, construct_alpha};

fn main() -> bbf_lattice::Result<()> {
    for (n, d, b) in [(2, 1, 0), (26, 5, 2), (26, 5, 3), (50, 7, -2), (101, 10, 3)] {
        let alpha = construct_alpha(n, d, b)?;
        let inv = classify_isotropic(n, &alpha)?;
        println!("n={n:<4} built from (d={d}, b={b:>2})  ->  d={}, b*={}", inv.d, inv.b_star);
    }
    Ok(())
}
