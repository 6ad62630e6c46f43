//! `hbac`: simulate heat-bath algorithmic cooling with sort-based
//! compression, evaluate its closed-form limits, and tabulate sweeps.
//!
//! Exit codes: 0 on success, 1 when `--strict` is set and the simulation hit
//! the iteration cap, 2 on usage or validation errors.

mod commands;
mod grid;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::Grid;

#[derive(Parser)]
#[command(name = "hbac", version, about = "Heat-bath algorithmic cooling simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate compression and refresh, writing the trajectory as CSV
    Simulate(SimulateArgs),
    /// Print closed-form quantities for one configuration as JSON
    Analytic(AnalyticArgs),
    /// Evaluate the step-count formulas as JSON
    Steps(StepsArgs),
    /// Tabulate a parameter sweep as CSV
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Scratch qudit dimension
    #[arg(long)]
    d: usize,
    /// Number of reset qubits
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Bath polarization, in [0, 1)
    #[arg(long)]
    eps_b: f64,
    /// Iteration cap
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Stop once no state entry changes by more than this
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Also stop as soon as the steady-state inequality holds
    #[arg(long)]
    steady_check: bool,
    /// JSON array with the initial diagonal (defaults to maximally mixed)
    #[arg(long)]
    init: Option<PathBuf>,
    /// Trajectory CSV path
    #[arg(long)]
    out: PathBuf,
    /// Exit 1 when the iteration cap is reached before convergence
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct AnalyticArgs {
    /// Scratch qudit dimension
    #[arg(long)]
    d: usize,
    /// Number of reset qubits
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Bath polarization, in [0, 1)
    #[arg(long)]
    eps_b: f64,
    /// Also report p_max and its exponential bound for an n-qubit register
    #[arg(long)]
    n: Option<u32>,
    /// Target energy gap over the bath gap, for the temperature ratio
    #[arg(long, default_value_t = 1.0)]
    gap_ratio: f64,
}

#[derive(Args)]
struct StepsArgs {
    /// Bath polarization, in (0, 1)
    #[arg(long)]
    eps_b: f64,
    /// Distance from the asymptotic polarization to reach
    #[arg(long)]
    delta: f64,
    /// Scratch qubit count for the multi-level upper bound
    #[arg(long)]
    n_prime: Option<u32>,
    /// Per-level gaps for the upper bound (comma separated, one per level)
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<f64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    /// Asymptotic polarization vs bath polarization, with knee markers
    Fig2,
    /// Maximal basis-state probability vs its exponential bound
    Fig3,
    /// Iterations to approach the cooling limit vs relative gap
    Fig5,
    /// Simulated cooling limit over a (d, m, eps_b) product grid
    Custom,
}

#[derive(Args)]
struct SweepArgs {
    /// Which table to produce
    #[arg(long, value_enum)]
    figure: Figure,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    /// Scratch dimensions (comma separated)
    #[arg(long, value_delimiter = ',')]
    d_list: Option<Vec<usize>>,
    /// Reset qubit counts (comma separated)
    #[arg(long, value_delimiter = ',')]
    m_list: Option<Vec<u32>>,
    /// Bath polarization grid, min:max:count:{linear|log}
    #[arg(long)]
    eps_b_grid: Option<Grid>,
    /// Relative-gap grid for fig5, min:max:count:{linear|log}
    #[arg(long)]
    delta_rel_grid: Option<Grid>,
    /// Bath polarization for fig5
    #[arg(long)]
    eps_b: Option<f64>,
    /// Iteration cap for simulated cells
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Convergence tolerance for simulated cells
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Analytic(args) => commands::analytic(args),
        Command::Steps(args) => commands::steps(args),
        Command::Sweep(args) => commands::sweep(args),
    };
    let code = match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}
