//! `syzkit`: linear strands, distinguishers and table reproduction.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 when a memory budget
//! refuses a computation (partial results are still written).

mod cmd;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "syzkit",
    version,
    about = "Graded Betti numbers of linear codes and the syzygy distinguisher"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice; equal seeds give equal payloads.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Memory cap for one kernel step, in GiB.
    #[arg(long, global = true, env = "SYZKIT_MEM_CAP_GB", default_value_t = 4.0)]
    pub mem_cap_gb: f64,
    /// Emit the JSON record instead of text.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (tabular commands only).
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Linear strand and two-row Betti diagram of a code file.
    Betti(cmd::BettiArgs),
    /// Sample a dual alternant or dual Goppa code, or emit a built-in code.
    Construct(cmd::ConstructArgs),
    /// Decide whether a code file looks like a family member or random.
    Distinguish(cmd::DistinguishArgs),
    /// Reference strand values from sampled family members.
    Calibrate(cmd::CalibrateArgs),
    /// Closed-form estimates: κ, GV distances, bounds, entropy thresholds.
    Estimate(cmd::EstimateArgs),
    /// Parameter audits.
    Audit {
        #[command(subcommand)]
        which: cmd::AuditCommand,
    },
    /// Recompute a figure or table from scratch.
    Reproduce(cmd::ReproduceArgs),
    /// Defect statistics of random codes with prescribed d and d⊥.
    DefectStats(cmd::DefectStatsArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Betti(a) => cmd::betti(&cli.global, a),
        Command::Construct(a) => cmd::construct(&cli.global, a),
        Command::Distinguish(a) => cmd::distinguish(&cli.global, a),
        Command::Calibrate(a) => cmd::calibrate(&cli.global, a),
        Command::Estimate(a) => cmd::estimate(&cli.global, a),
        Command::Audit { which } => cmd::audit(&cli.global, which),
        Command::Reproduce(a) => cmd::reproduce(&cli.global, a),
        Command::DefectStats(a) => cmd::defect_stats(&cli.global, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget refusal: {msg}");
            ExitCode::from(2)
        }
    }
}
