use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use bbf_lattice::cli::{self, Budget, Report};
use bbf_lattice::io::{lattice_from_json, lattice_from_label, parse_complex, parse_json, period_from_json, vector_from_json};
use bbf_lattice::period::DensityConfig;
use bbf_lattice::verify::{cmd_verify, Suite};
use bbf_lattice::{Error, Result};

#[derive(Parser)]
#[command(name = "bbf", version, about = "Isotropic classes, Mukai vectors and periods of K3^[n]-type lattices")]
struct Cli {
    /// print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// small or full
    #[arg(long, global = true, default_value = "small")]
    budget: Budget,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monodromy invariant (d, b*) of a primitive isotropic class in K3n(n)
    Classify {
        n: u64,
        /// vector file, or inline JSON such as '[2,-2,0,...]'
        alpha: String,
    },
    /// Orbit representatives for (n, d), optionally against the brute-force oracle
    Orbits {
        n: u64,
        d: u64,
        #[arg(long)]
        oracle: bool,
    },
    /// Normal-form class d e1 - ((n-1) b²/d) f1 + b δ
    Construct {
        n: u64,
        d: u64,
        #[arg(allow_hyphen_values = true)]
        b: i64,
    },
    /// Witness Mukai vector v and class α = (0,0,1)
    MukaiExample {
        n: u64,
        d: u64,
        #[arg(allow_hyphen_values = true)]
        b: i64,
    },
    /// Associated K3 lattice and the isometry Q_α -> ξ^⊥
    Associate { n: u64, alpha: String },
    /// Lattice point whose period value is within epsilon of a target
    Density {
        /// period file or inline JSON
        period: String,
        /// e.g. 0.125+0.375i
        #[arg(allow_hyphen_values = true)]
        target: String,
        epsilon: f64,
        /// lattice file overriding the period's label
        #[arg(long)]
        lattice: Option<String>,
    },
    /// Elementary divisors of K3 / (λ^⊥ + Zλ)
    ShaKernel { n: u64, d: u64 },
    /// Run the invariant suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// lattice file checked against its label
        #[arg(long)]
        fixture: Option<String>,
    },
    /// Non-special period over Q(√D)
    SamplePeriod {
        /// U, E8(-1), Mukai, K3, K3n(n) or Qalpha(n,d,b)
        #[arg(default_value = "Qalpha(5,2,1)")]
        label: String,
        #[arg(long = "D", default_value_t = 2)]
        discriminant: i64,
        /// lattice file used instead of the label
        #[arg(long)]
        lattice: Option<String>,
    },
}

/// Inline JSON if it looks like JSON, otherwise a path.
fn load(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return parse_json(t);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
    parse_json(&text)
}

fn run(cli: &Cli) -> Result<Report> {
    let budget = cli.budget;
    match &cli.command {
        Command::Classify { n, alpha } => cli::cmd_classify(*n, &vector_from_json(&load(alpha)?)?),
        Command::Orbits { n, d, oracle } => cli::cmd_orbits(*n, *d, *oracle, budget),
        Command::Construct { n, d, b } => cli::cmd_construct(*n, *d, *b),
        Command::MukaiExample { n, d, b } => cli::cmd_mukai(*n, *d, *b),
        Command::Associate { n, alpha } => cli::cmd_associate(*n, &vector_from_json(&load(alpha)?)?),
        Command::Density { period, target, epsilon, lattice } => {
            let lattice = lattice.as_deref().map(|l| load(l).and_then(|v| lattice_from_json(&v))).transpose()?;
            let period = period_from_json(&load(period)?, lattice.as_ref())?;
            cli::cmd_density(&period, parse_complex(target)?, *epsilon, DensityConfig::default())
        }
        Command::ShaKernel { n, d } => cli::cmd_sha_kernel(*n, *d),
        Command::Verify { suite, fixture } => {
            let fixture = fixture.as_deref().map(load).transpose()?;
            cmd_verify(*suite, budget, cli.seed, fixture.as_ref())
        }
        Command::SamplePeriod { label, discriminant, lattice } => {
            let lattice = match lattice {
                Some(path) => lattice_from_json(&load(path)?)?,
                None => lattice_from_label(label)?,
            };
            cli::cmd_sample_period(&lattice, &BigInt::from(*discriminant), cli.seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(mut report) => {
            report.inputs["seed"] = json!(cli.seed);
            let text = if cli.json { report.to_json() + "\n" } else { report.to_table() };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            let code = cli::exit_code_for(&e);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({ "error": e.to_string(), "exit_code": code })).unwrap());
            }
            eprintln!("error: {e}");
            ExitCode::from(code as u8)
        }
    }
}
