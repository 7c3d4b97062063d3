//! The isometries g̃_z of the Mukai lattice for z ∈ {β, v}^⊥.

use bbf_lattice::classifier::construct_alpha;
use bbf_lattice::k3::associate_k3;
use bbf_lattice::period::{tilde_g, Fibration};

fn main() -> bbf_lattice::Result<()> {
    let a = associate_k3(5, &construct_alpha(5, 2, 1)?)?;
    let fib = Fibration::new(&a);
    let m = fib.mukai();
    let perp = m.orthogonal_complement_of(&[fib.beta().clone(), fib.v().clone()])?;
    let (z1, z2) = (perp.vector(0), perp.vector(3));
    let g1 = tilde_g(m, &z1, fib.beta(), fib.v())?;
    let g2 = tilde_g(m, &z2, fib.beta(), fib.v())?;
    let sum: Vec<_> = z1.coords().iter().zip(z2.coords()).map(|(a, b)| a + b).collect();
    let g12 = tilde_g(m, &bbf_lattice::lattice::LatticeVec::new(sum), fib.beta(), fib.v())?;
    let g = m.gram();
    println!("isometry:       {}", &(&g1.transpose() * g) * &g1 == *g);
    println!("fixes β:        {}", g1.mul_vec(fib.beta().coords()) == fib.beta().coords());
    println!("fixes v:        {}", g1.mul_vec(fib.v().coords()) == fib.v().coords());
    println!("g(z1)g(z2) = g(z1+z2): {}", &g1 * &g2 == g12);
    Ok(())
}
