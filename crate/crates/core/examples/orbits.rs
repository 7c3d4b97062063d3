//! Orbit representatives against the brute-force count.

use bbf_lattice::classifier::{brute_force_orbit_count, enumerate_orbit_reps, nu};

fn main() -> bbf_lattice::Result<()> {
    println!("{:>4} {:>3} {:>4} {:>7}  reps", "n", "d", "nu", "oracle");
    for d in 1..=8u64 {
        let n = d * d + 1;
        let reps = enumerate_orbit_reps(n, d)?;
        let oracle = brute_force_orbit_count(n, d, 8, 8)?;
        let bs: Vec<u64> = reps.iter().map(|r| r.b_star).collect();
        println!("{n:>4} {d:>3} {:>4} {:>7}  b* in {bs:?}", nu(d), oracle.count);
    }
    Ok(())
}
