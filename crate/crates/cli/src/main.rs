use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mixsolve_cli::commands::{
    cmd_demo_example1, cmd_gen, cmd_mdp_solve, cmd_solve, cmd_verify, parse_bounds, parse_fraction,
};
use mixsolve_cli::Exit;

#[derive(Parser)]
#[command(
    name = "mixsolve",
    version,
    about = "Exact constrained optimization over finite mixtures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and write the solution file.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Check a solution file against its instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Print a seeded random instance file.
    Gen {
        #[arg(long)]
        atoms: usize,
        #[arg(long)]
        constraints: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability that a coordinate is `inf`, as `p/q` or a decimal.
        #[arg(long, default_value = "0")]
        inf_fraction: String,
    },
    /// Run a built-in demonstration.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Build an instance from a constrained MDP file and solve it.
    MdpSolve {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated constraint bounds `d1,d2,...`.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        bounds: String,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Disk with an infinite ray: a Pareto point with no nonnegative certificate.
    Example1,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Solve { input, output } => cmd_solve(&input, &output, &mut out),
        Command::Verify { input, solution } => cmd_verify(&input, &solution, &mut out),
        Command::Gen {
            atoms,
            constraints,
            seed,
            inf_fraction,
        } => parse_fraction(&inf_fraction)
            .and_then(|p| cmd_gen(atoms, constraints, seed, &p, &mut out)),
        Command::Demo {
            which: Demo::Example1,
        } => cmd_demo_example1(&mut out),
        Command::MdpSolve { input, bounds } => {
            parse_bounds(&bounds).and_then(|d| cmd_mdp_solve(&input, &d, &mut out))
        }
    };
    let _ = out.flush();
    let exit = result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Exit::InputError
    });
    ExitCode::from(exit.code() as u8)
}
