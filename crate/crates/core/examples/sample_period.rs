//! A non-special period over Q(√D) and its specialness test.

use bbf_lattice::io::{lattice_from_label, period_to_json};
use bbf_lattice::period::sample_nonspecial_period;
use num_bigint::BigInt;

fn main() -> bbf_lattice::Result<()> {
    let label = std::env::args().nth(1).unwrap_or_else(|| "Qalpha(5,2,1)".into());
    let lattice = lattice_from_label(&label)?;
    let p = sample_nonspecial_period(&lattice, &BigInt::from(3), 0)?;
    let s = p.is_special();
    println!("{}", serde_json::to_string_pretty(&period_to_json(&p)).unwrap());
    println!("(x,x) = (y,y) = {}, special: {}, rank of plane ∩ L: {}", p.norm(), s.special, s.rank);
    Ok(())
}
