//! `trivalent`: batch verification of plane graph dg-algebras.
//!
//! Prints a JSON report on standard output (or to `--out`) and a short
//! summary on standard error. The exit code is 0 when every certificate
//! passes, 1 when one fails, and 2 when the input cannot be processed.

mod commands;
mod script;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, Report};

#[derive(Parser)]
#[command(name = "trivalent", version, about = "Exact verification of dg-algebras of trivalent plane graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Graph file with one `vertex v: e1+ e2- e3+` line per vertex.
    #[arg(long, global = true)]
    graph: Option<String>,
    /// Tree as comma-separated edge names, e.g. "e1,e2".
    #[arg(long, global = true)]
    tree: Option<String>,
    /// Field order (a prime power up to 256).
    #[arg(long, global = true, default_value_t = 2)]
    field: usize,
    /// Representation rank.
    #[arg(long, global = true, default_value_t = 1)]
    rank: usize,
    /// Base triangle of the canonically constructed garden.
    #[arg(long, global = true, default_value_t = 0)]
    base_triangle: usize,
    /// Garden file to use instead of the canonical construction.
    #[arg(long, global = true)]
    garden: Option<String>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Counts, faces, corners, dual graph and tree counts.
    Info,
    /// Differential listing with the square-zero and abelianization certificates.
    Dga,
    /// Applies a move script and checks each dg-map.
    Moves {
        /// Steps such as "V1 V1^-1", "S S", "flip:e2 L R" or "full_twist".
        #[arg(long)]
        script: String,
    },
    /// Representations, colorings, the bijection between their moduli and
    /// the chromatic cross-check.
    Sheaves,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let path = cli.graph.as_deref().ok_or_else(|| CliError::Usage("--graph is required".into()))?;
    let graph = commands::load_graph(path)?;
    if let Command::Info = cli.command {
        return Ok(commands::info(&graph));
    }
    let setup = commands::setup(graph, cli.garden.as_deref(), cli.base_triangle)?;
    match &cli.command {
        Command::Info => unreachable!("handled above"),
        Command::Dga => {
            let tree = cli.tree.as_deref().map(|t| commands::parse_tree(&setup.graph, t)).transpose()?;
            commands::dga(&setup, tree.as_ref())
        }
        Command::Moves { script } => commands::moves(&setup, script),
        Command::Sheaves => {
            let tree = commands::choose_tree(&setup.graph, cli.tree.as_deref())?;
            commands::sheaves(&setup, &tree, cli.field, cli.rank)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    for line in &report.summary {
        eprintln!("{line}");
    }
    eprintln!("{}", if report.passed { "all certificates PASS" } else { "certificate FAIL" });
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
