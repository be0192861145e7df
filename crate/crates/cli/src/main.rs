use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use priccati_cli::{cmd_factor, cmd_irreducible, cmd_solve, cmd_verify, Claim, InstanceSpec, Output};

/// Irreducibility and factorization of central differential operators N(D^p)
/// over F_q(x) through the p-Riccati equation.
#[derive(Parser)]
#[command(name = "priccati", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether N_*^p(D) is irreducible.
    Irreducible(Instance),
    /// Find a solution of f^(p-1) + f^p = a^p in K_N.
    Solve(Instance),
    /// Compute a monic irreducible right factor of N_*^p(D).
    Factor(Instance),
    /// Check a solution or a factor exactly.
    Verify {
        #[command(flatten)]
        instance: Instance,
        /// Element of K_N in x, a and z.
        #[arg(long, conflicts_with = "factor", required_unless_present = "factor")]
        solution: Option<String>,
        /// Operator coefficients in x and z, lowest order first, separated by ';'.
        #[arg(long)]
        factor: Option<String>,
    },
}

#[derive(Args)]
struct Instance {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Degree of F_q over F_p.
    #[arg(long, default_value_t = 1)]
    ext_degree: usize,
    /// Modulus of F_q as a polynomial in z (default: first irreducible).
    #[arg(long)]
    ext_modulus: Option<String>,
    /// N_*(x, Y), e.g. "Y^2 - x".
    #[arg(long)]
    nstar: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Highest level of the candidate-space ladder.
    #[arg(long)]
    max_level: Option<usize>,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Record stage timings.
    #[arg(long)]
    verbose: bool,
}

impl Instance {
    fn spec(&self) -> InstanceSpec {
        InstanceSpec {
            p: self.p,
            ext_degree: self.ext_degree,
            ext_modulus: self.ext_modulus.clone(),
            nstar: self.nstar.clone(),
            seed: self.seed,
            max_level: self.max_level,
            verbose: self.verbose,
        }
    }
}

fn emit(out: Output, json: bool, verbose: bool) -> ExitCode {
    if json {
        println!("{}", out.json());
    } else {
        print!("{}", out.text);
        if verbose {
            for t in &out.report.timings {
                eprintln!("{:>14}: {:.1} ms", t.stage, t.millis);
            }
        }
    }
    ExitCode::from(out.code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Irreducible(i) => emit(cmd_irreducible(&i.spec()), i.json, i.verbose),
        Command::Solve(i) => emit(cmd_solve(&i.spec()), i.json, i.verbose),
        Command::Factor(i) => emit(cmd_factor(&i.spec()), i.json, i.verbose),
        Command::Verify { instance, solution, factor } => {
            let claim = match (solution, factor) {
                (Some(s), _) => Claim::Solution(s),
                (None, Some(f)) => Claim::Factor(f),
                (None, None) => unreachable!("clap requires one of the two"),
            };
            emit(cmd_verify(&instance.spec(), &claim), instance.json, instance.verbose)
        }
    }
}
