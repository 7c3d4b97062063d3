//! Runs every invariant suite on the small budget.

use bbf_lattice::cli::Budget;
use bbf_lattice::verify::{cmd_verify, Suite};

fn main() -> bbf_lattice::Result<()> {
    let report = cmd_verify(Suite::All, Budget::Small, 0, None)?;
    print!("{}", report.to_table());
    std::process::exit(report.exit_code());
}
