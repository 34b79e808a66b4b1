use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wiener_chaos::cli::{exit_code, run, Command, RunArgs};

#[derive(Parser)]
#[command(name = "wiener-chaos", version, about = "Wiener chaos propagators for linear SPDEs")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Solve the propagator and write coeffs.csv, stats.csv, weights.csv
    Solve(Common),
    /// Compare against the applicable oracles and write report.csv
    Verify(Common),
    /// Run the Krylov–Veretennikov recursion and write kv.csv
    Kv {
        #[command(flatten)]
        common: Common,
        /// Highest level of the recursion
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Sweep the weighted norm over the exponents in `r_sweep`
    Norms(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Chaos order N
    #[arg(long)]
    order: Option<u32>,
    /// Number of noise modes K
    #[arg(long)]
    modes: Option<usize>,
}

impl Common {
    fn into_args(self) -> RunArgs {
        RunArgs {
            config: self.config,
            out: self.out,
            seed: self.seed,
            order: self.order,
            modes: self.modes,
        }
    }
}

fn main() -> ExitCode {
    let (cmd, common) = match Cli::parse().command {
        Sub::Solve(c) => (Command::Solve, c),
        Sub::Verify(c) => (Command::Verify, c),
        Sub::Kv { common, levels } => (Command::Kv { levels }, common),
        Sub::Norms(c) => (Command::Norms, c),
    };
    let result = run(cmd, &common.into_args());
    match &result {
        Ok(o) => println!("{}", o.summary),
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
