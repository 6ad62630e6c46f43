//! Command implementations. Every number in the output comes from a library
//! call; this module only parses, loops, and formats.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use hbac_core::analytic::{
    asymptotic_polarization, bound_comparison, delta_max, per_qubit_polarization, steady_state,
    steady_temperature_ratio, steps_exact_report, steps_upper_bound, transition_marker,
};
use hbac_core::engine::{ppa_iteration, run};
use hbac_core::state::{maximally_mixed, qubit_polarizations, DiagonalState};
use hbac_core::{IterationPolicy, RunOutcome, SystemConfig};

use crate::grid::{Grid, Spacing};
use crate::{AnalyticArgs, Figure, SimulateArgs, StepsArgs, SweepArgs};

#[derive(Serialize)]
struct SimulateSummary {
    d: usize,
    m: u32,
    eps_b: f64,
    converged: bool,
    iterations: usize,
    eps_target: f64,
    eps_reset: f64,
    eps_scratch: Vec<f64>,
    distance_to_steady: f64,
    eps_infinity: f64,
}

pub fn simulate(args: &SimulateArgs) -> Result<i32> {
    let cfg = SystemConfig::new(args.d, args.m, args.eps_b)?;
    let init = match &args.init {
        None => maximally_mixed(&cfg),
        Some(path) => load_init(path, &cfg)?,
    };
    let policy = IterationPolicy {
        max_iterations: args.max_iters,
        tolerance: args.tol,
        steady_check: args.steady_check,
    };
    let outcome = run(&cfg, init, &policy)?;
    write_trajectory(&args.out, &cfg, &outcome)
        .with_context(|| format!("writing {}", args.out.display()))?;
    let last = outcome.final_record();
    let summary = SimulateSummary {
        d: cfg.d(),
        m: cfg.m(),
        eps_b: cfg.eps_b(),
        converged: outcome.converged,
        iterations: outcome.iterations(),
        eps_target: last.polarizations.target,
        eps_reset: last.polarizations.reset,
        eps_scratch: last.polarizations.scratch_qubits.clone(),
        distance_to_steady: last.distance_to_steady,
        eps_infinity: asymptotic_polarization(&cfg),
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(if args.strict && !outcome.converged { 1 } else { 0 })
}

fn load_init(path: &Path, cfg: &SystemConfig) -> Result<DiagonalState> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let probs: Vec<f64> = serde_json::from_reader(BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(DiagonalState::from_unnormalized(probs, cfg, 1e-9)?)
}

fn write_trajectory(path: &Path, cfg: &SystemConfig, outcome: &RunOutcome) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "iteration,eps_target,eps_reset")?;
    for j in 1..=cfg.scratch_qubits().unwrap_or(0) {
        write!(w, ",eps_scratch_{j}")?;
    }
    writeln!(w, ",distance_to_steady,condition_margin")?;
    let mut buf = ryu::Buffer::new();
    for rec in &outcome.trajectory {
        write!(w, "{},{}", rec.iteration, buf.format(rec.polarizations.target))?;
        write!(w, ",{}", buf.format(rec.polarizations.reset))?;
        for &eps in &rec.polarizations.scratch_qubits {
            write!(w, ",{}", buf.format(eps))?;
        }
        write!(w, ",{}", buf.format(rec.distance_to_steady))?;
        writeln!(w, ",{}", buf.format(rec.condition_margin))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct BoundSummary {
    n: u32,
    p_max: f64,
    schulman_bound: f64,
}

#[derive(Serialize)]
struct AnalyticSummary {
    d: usize,
    m: u32,
    eps_b: f64,
    eps_infinity: f64,
    delta_max: f64,
    q_ratio: f64,
    steady_state: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_qubit: Option<Vec<f64>>,
    temperature_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<BoundSummary>,
}

pub fn analytic(args: &AnalyticArgs) -> Result<i32> {
    let cfg = SystemConfig::new(args.d, args.m, args.eps_b)?;
    let steady = steady_state(&cfg);
    let per_qubit = match cfg.scratch_qubits() {
        None => None,
        Some(n_prime) => {
            let eps: Result<Vec<f64>, _> =
                (1..=n_prime + 1).map(|j| per_qubit_polarization(&cfg, j)).collect();
            Some(eps?)
        }
    };
    let bound = match args.n {
        None => None,
        Some(n) => {
            let b = bound_comparison(n, args.eps_b)?;
            Some(BoundSummary { n: b.n, p_max: b.p_max, schulman_bound: b.schulman_bound })
        }
    };
    let summary = AnalyticSummary {
        d: cfg.d(),
        m: cfg.m(),
        eps_b: cfg.eps_b(),
        eps_infinity: asymptotic_polarization(&cfg),
        delta_max: delta_max(&cfg),
        q_ratio: steady.q_ratio,
        steady_state: steady.a.a().to_vec(),
        per_qubit,
        temperature_ratio: steady_temperature_ratio(&cfg, args.gap_ratio)?,
        bound,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(0)
}

#[derive(Serialize)]
struct StepsSummary {
    eps_b: f64,
    delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    deltas: Option<Vec<f64>>,
    steps_real: f64,
    rounds: u64,
    iterations_total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper_bound_steps: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    intermediate_eps: Vec<f64>,
}

pub fn steps(args: &StepsArgs) -> Result<i32> {
    let mut deltas_used = None;
    let report = match args.n_prime {
        None => {
            if args.deltas.is_some() {
                bail!("--deltas needs --n-prime");
            }
            steps_exact_report(args.delta, args.eps_b)?
        }
        Some(n_prime) => {
            let levels = (n_prime / 2) as usize;
            let deltas = match &args.deltas {
                Some(list) => list.clone(),
                None => vec![args.delta; levels],
            };
            let report = steps_upper_bound(n_prime, args.eps_b, &deltas)?;
            deltas_used = Some(deltas);
            report
        }
    };
    let summary = StepsSummary {
        eps_b: args.eps_b,
        delta: report.delta,
        deltas: deltas_used,
        steps_real: report.steps_real,
        rounds: report.rounds,
        iterations_total: report.iterations_total,
        upper_bound_steps: report.upper_bound_steps,
        intermediate_eps: report.intermediate_eps,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(0)
}

#[derive(Serialize)]
struct SweepSummary {
    figure: &'static str,
    rows: usize,
    out: String,
}

pub fn sweep(args: &SweepArgs) -> Result<i32> {
    let mut w = BufWriter::new(
        File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?,
    );
    let rows = match args.figure {
        Figure::Fig2 => sweep_fig2(args, &mut w)?,
        Figure::Fig3 => sweep_fig3(args, &mut w)?,
        Figure::Fig5 => sweep_fig5(args, &mut w)?,
        Figure::Custom => sweep_custom(args, &mut w)?,
    };
    w.flush()?;
    let summary = SweepSummary {
        figure: match args.figure {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig5 => "fig5",
            Figure::Custom => "custom",
        },
        rows,
        out: args.out.display().to_string(),
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(0)
}

/// Asymptotic polarization against bath polarization, one curve per (d, m),
/// with a marker row inserted at the knee eps_b = 1/(md).
fn sweep_fig2(args: &SweepArgs, w: &mut BufWriter<File>) -> Result<usize> {
    let d_list = args.d_list.clone().unwrap_or_else(|| vec![2, 4, 8, 16, 32, 64]);
    let m_list = args.m_list.clone().unwrap_or_else(|| vec![1]);
    let grid = args
        .eps_b_grid
        .unwrap_or(Grid { min: 1e-4, max: 0.9, count: 200, spacing: Spacing::Log });
    writeln!(w, "d,m,eps_b,eps_infinity,transition_marker")?;
    let mut buf = ryu::Buffer::new();
    let mut rows = 0;
    for &d in &d_list {
        for &m in &m_list {
            let mut points: Vec<(f64, bool)> =
                grid.points().into_iter().map(|eps_b| (eps_b, false)).collect();
            if let Ok((marker, _)) = transition_marker(d, m) {
                points.push((marker, true));
            }
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (eps_b, is_marker) in points {
                let cfg = SystemConfig::new(d, m, eps_b)?;
                write!(w, "{d},{m},{}", buf.format(eps_b))?;
                writeln!(
                    w,
                    ",{},{}",
                    buf.format(asymptotic_polarization(&cfg)),
                    i32::from(is_marker)
                )?;
                rows += 1;
            }
        }
    }
    Ok(rows)
}

/// Exact maximal probability next to its exponential bound; each scratch
/// dimension d = 2^(n-2) stands for an n-qubit register.
fn sweep_fig3(args: &SweepArgs, w: &mut BufWriter<File>) -> Result<usize> {
    let d_list = args.d_list.clone().unwrap_or_else(|| vec![2, 4, 8]);
    let grid = args
        .eps_b_grid
        .unwrap_or(Grid { min: 1e-6, max: 0.99, count: 200, spacing: Spacing::Log });
    writeln!(w, "n,eps_b,p_max,schulman_bound")?;
    let mut buf = ryu::Buffer::new();
    let mut rows = 0;
    for &d in &d_list {
        if d < 2 || !d.is_power_of_two() {
            bail!("fig3 needs power-of-two scratch dimensions >= 2, got {d}");
        }
        let n = d.trailing_zeros() + 2;
        for eps_b in grid.points() {
            let cmp = bound_comparison(n, eps_b)?;
            write!(w, "{n},{}", buf.format(eps_b))?;
            write!(w, ",{}", buf.format(cmp.p_max))?;
            writeln!(w, ",{}", buf.format(cmp.schulman_bound))?;
            rows += 1;
        }
    }
    Ok(rows)
}

/// Iterations needed to close all but a relative gap delta_rel of the
/// asymptotic polarization, counted from the first refreshed state. For
/// d = 2 the closed-form count 2 * ceil(N/2) rides along for comparison.
fn sweep_fig5(args: &SweepArgs, w: &mut BufWriter<File>) -> Result<usize> {
    let d_list = args.d_list.clone().unwrap_or_else(|| vec![2, 3, 4, 5, 6]);
    let grid = args
        .delta_rel_grid
        .unwrap_or(Grid { min: 1e-3, max: 0.3, count: 25, spacing: Spacing::Log });
    let eps_b = args.eps_b.unwrap_or(0.1);
    writeln!(w, "d,delta_rel,iterations_simulated,iterations_formula")?;
    let mut buf = ryu::Buffer::new();
    let mut rows = 0;
    for &d in &d_list {
        let cfg = SystemConfig::new(d, 1, eps_b)?;
        let eps_inf = asymptotic_polarization(&cfg);
        for delta_rel in grid.points() {
            let threshold = eps_inf * (1.0 - delta_rel);
            let iterations = iterations_to_reach(&cfg, threshold)?;
            write!(w, "{d},{},{iterations}", buf.format(delta_rel))?;
            let formula = if d == 2 {
                steps_exact_report(delta_rel * eps_inf, eps_b).ok().map(|r| 2 * r.rounds)
            } else {
                None
            };
            match formula {
                Some(count) => writeln!(w, ",{count}")?,
                None => writeln!(w, ",")?,
            }
            rows += 1;
        }
    }
    Ok(rows)
}

/// First iteration whose target polarization reaches `threshold`, counted
/// from the first refreshed state (two below the raw engine count).
fn iterations_to_reach(cfg: &SystemConfig, threshold: f64) -> Result<u64> {
    let mut state = maximally_mixed(cfg);
    for k in 1..=200_000u64 {
        state = ppa_iteration(&state, cfg)?;
        if qubit_polarizations(&state, cfg)?.target >= threshold {
            return Ok(k.saturating_sub(2));
        }
    }
    bail!(
        "polarization never reached {threshold} for d={} m={} eps_b={}",
        cfg.d(),
        cfg.m(),
        cfg.eps_b()
    )
}

/// Simulated cooling limit over the full product grid.
fn sweep_custom(args: &SweepArgs, w: &mut BufWriter<File>) -> Result<usize> {
    let d_list = args.d_list.as_ref().context("custom sweep needs --d-list")?;
    let m_list = args.m_list.clone().unwrap_or_else(|| vec![1]);
    let grid = args.eps_b_grid.context("custom sweep needs --eps-b-grid")?;
    let policy = IterationPolicy {
        max_iterations: args.max_iters,
        tolerance: args.tol,
        steady_check: false,
    };
    writeln!(w, "d,m,eps_b,eps_infinity,eps_target_sim,iterations,converged")?;
    let mut buf = ryu::Buffer::new();
    let mut rows = 0;
    for &d in d_list {
        for &m in &m_list {
            for eps_b in grid.points() {
                let cfg = SystemConfig::new(d, m, eps_b)?;
                let outcome = run(&cfg, maximally_mixed(&cfg), &policy)?;
                write!(w, "{d},{m},{}", buf.format(eps_b))?;
                write!(w, ",{}", buf.format(asymptotic_polarization(&cfg)))?;
                write!(w, ",{}", buf.format(outcome.final_record().polarizations.target))?;
                writeln!(w, ",{},{}", outcome.iterations(), outcome.converged)?;
                rows += 1;
            }
        }
    }
    Ok(rows)
}
