//! Mukai vector v = (d, bλ, s) with (v, v) = 2n - 2 and the class α = (0, 0, 1) ∈ v^⊥.

use bbf_lattice::classifier::mukai_example;
use bbf_lattice::lattice::{standard_lattice, StandardLattice};
use bbf_lattice::matrix::content;

fn main() -> bbf_lattice::Result<()> {
    let mukai = standard_lattice(StandardLattice::Mukai, None)?;
    for (n, d, b) in [(5, 1, 0), (10, 3, 1), (26, 5, 2)] {
        let m = mukai_example(n, d, b)?;
        let pairings: Vec<_> = m.v_perp.vectors().map(|w| mukai.pairing(&m.alpha, &w)).collect::<Result<_, _>>()?;
        let div = content(&pairings);
        println!(
            "n={n} d={d} b={b}: s={}, (v,v)={}, (α,α)={}, div(α in v^⊥)={div}, v^⊥ rank {}",
            m.s,
            mukai.norm(&m.v)?,
            mukai.norm(&m.alpha)?,
            m.v_perp.rank()
        );
    }
    Ok(())
}
