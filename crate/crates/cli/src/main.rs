mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{CliError, Outcome};

/// Generate regular graphs, sparsify them into large-girth expanders and
/// audit the result.
#[derive(Debug, Parser)]
#[command(name = "expgirth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    RandomRegular,
    CayleySl2,
    Cycle,
    Complete,
    Petersen,
    Path,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Omit the timestamp so identical runs give identical reports.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a graph as an edge list.
    Generate {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Girth, spectrum, Cheeger constant, short-cycle table and local-lemma check.
    Analyze {
        input: PathBuf,
        /// Girth target: cycles shorter than this are tabulated.
        #[arg(long)]
        g: usize,
        /// δ for the local-lemma check; defaults to min(δ_max, d/2).
        #[arg(long)]
        delta: Option<f64>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Run Moser–Tardos resampling to find a spanning subgraph of girth >= g.
    Sparsify {
        input: PathBuf,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = expgirth_core::sparsify::DEFAULT_S_MAX)]
        s_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = expgirth_core::sparsify::DEFAULT_MAX_ROUNDS)]
        max_rounds: u64,
        /// Where to write the subgraph edge list.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Audit the boundary inequality and derived guarantees for a subgraph.
    Verify {
        graph: PathBuf,
        subgraph: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = expgirth_core::sparsify::DEFAULT_S_MAX)]
        s_max: usize,
        /// Girth target for the spectral-corollary check; skipped when omitted.
        #[arg(long)]
        g: Option<usize>,
        #[command(flatten)]
        report: ReportArgs,
    },
}

const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Generate {
            family,
            n,
            d,
            p,
            seed,
            out,
        } => commands::generate(family, n, d, p, seed, out.as_deref()),
        Command::Analyze {
            input,
            g,
            delta,
            report,
        } => commands::analyze(&input, g, delta, &report),
        Command::Sparsify {
            input,
            g,
            delta,
            s_max,
            seed,
            max_rounds,
            out,
            report,
        } => commands::sparsify(
            &input,
            commands::SparsifyArgs {
                g,
                delta,
                s_max,
                seed,
                max_rounds,
            },
            out.as_deref(),
            &report,
        ),
        Command::Verify {
            graph,
            subgraph,
            delta,
            s_max,
            g,
            report,
        } => commands::verify(&graph, &subgraph, delta, s_max, g, &report),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Ok(Outcome::BudgetExhausted) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Runtime(_) => 1,
            })
        }
    }
}
