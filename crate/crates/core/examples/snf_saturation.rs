//! Smith normal form, saturation and orthogonal complements.

use bbf_lattice::lattice::{smith_normal_form, standard_lattice, LatticeVec, StandardLattice, SublatticeBasis};
use bbf_lattice::matrix::IntMatrix;

fn main() -> bbf_lattice::Result<()> {
    let m = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let s = smith_normal_form(&m);
    println!("invariant factors {:?}", s.diag);

    let k3 = standard_lattice(StandardLattice::K3, None)?;
    let mut v = vec![0i64; 22];
    v[0] = 2;
    v[1] = 4;
    let sub = SublatticeBasis::new(vec![LatticeVec::from_i64(&v)], 22)?;
    let sat = k3.saturation(&sub)?;
    println!("saturation of <(2,4,0,...)>: {:?}", sat.vector(0).coords()[..2].to_vec());
    let perp = k3.orthogonal_complement(&sat)?;
    println!("complement rank {}, restricted signature {:?}", perp.rank(), k3.restrict(&perp)?.signature()?);
    Ok(())
}
