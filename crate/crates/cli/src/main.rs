use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use racelogic::lang::Bindings;
use racelogic_cli::{machine_config, parse_graph_file, run_closure, run_dijkstra, run_eval, run_nw, Outcome};

#[derive(Parser)]
#[command(name = "racelogic", version, about = "Run race-logic kernels on a simulated temporal state machine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct MachineArgs {
    /// Bits of dynamic range; t_max = 2^bits - 1.
    #[arg(long)]
    bits: Option<u32>,
    /// JSON file with machine and cost-table settings.
    #[arg(long, value_name = "PATH")]
    cost_model: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Shortest-path tree by temporal Dijkstra, checked against a binary-heap Dijkstra.
    Dijkstra {
        #[arg(long, value_name = "PATH")]
        graph: PathBuf,
        #[arg(long, value_name = "NODE")]
        source: String,
        /// Use f = d -| e without the visited-node mask.
        #[arg(long)]
        paper_literal_f: bool,
        #[command(flatten)]
        machine: MachineArgs,
    },
    /// Needleman-Wunsch alignment cost of two equal-length GATC sequences.
    Nw {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 1)]
        indel: u64,
        #[arg(long, default_value_t = 1)]
        mismatch: u64,
        #[command(flatten)]
        machine: MachineArgs,
    },
    /// Multi-hop reachability from one node by repeated VMM.
    Closure {
        #[arg(long, value_name = "PATH")]
        graph: PathBuf,
        #[arg(long, value_name = "NODE")]
        source: String,
        #[arg(long)]
        hops: usize,
        #[command(flatten)]
        machine: MachineArgs,
    },
    /// Compile and run a wavefront expression.
    Eval {
        #[arg(long, value_name = "TEXT")]
        expr: String,
        /// JSON object mapping variable names to arrays; "inf" for infinity.
        #[arg(long, value_name = "PATH")]
        bind: PathBuf,
        #[command(flatten)]
        machine: MachineArgs,
    },
}

fn finish(outcome: Outcome, out: Option<&Path>) -> anyhow::Result<bool> {
    let report = outcome.report;
    print!("{}", report.to_table());
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.succeeded())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Dijkstra { graph, source, paper_literal_f, machine } => {
            let cfg = machine_config(machine.cost_model.as_deref(), machine.bits)?;
            let g = parse_graph_file(&graph)?;
            finish(run_dijkstra(&g, &source, paper_literal_f, &cfg)?, machine.out.as_deref())
        }
        Command::Nw { x, y, indel, mismatch, machine } => {
            let cfg = machine_config(machine.cost_model.as_deref(), machine.bits)?;
            finish(run_nw(&x, &y, indel, mismatch, &cfg)?, machine.out.as_deref())
        }
        Command::Closure { graph, source, hops, machine } => {
            let cfg = machine_config(machine.cost_model.as_deref(), machine.bits)?;
            let g = parse_graph_file(&graph)?;
            finish(run_closure(&g, &source, hops, &cfg)?, machine.out.as_deref())
        }
        Command::Eval { expr, bind, machine } => {
            let cfg = machine_config(machine.cost_model.as_deref(), machine.bits)?;
            let json = std::fs::read_to_string(&bind).with_context(|| format!("reading {}", bind.display()))?;
            let bindings = Bindings::from_json(&json)?;
            finish(run_eval(&expr, &bindings, &cfg)?, machine.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: result disagrees with the reference implementation");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
