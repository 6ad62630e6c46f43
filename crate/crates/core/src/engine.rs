use alloc::vec::Vec;

use crate::analytic;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::math;
use crate::state::{
    qubit_polarizations, refresh, trace_out_resets, ComputationalDiag, DiagonalState,
    PolarizationReport,
};

/// Additive slack used when testing the steady-state inequality, absorbing
/// float rounding at the equality point.
pub const CONDITION_SLACK: f64 = 1e-12;

/// Stopping parameters for [`run`].
///
/// `tolerance` bounds the max-norm change of the probability vector over one
/// iteration. The change in any reported polarization is at most `D` times
/// this. (The target polarization itself is unusable as a stop signal: the
/// trajectory from the mixed state repeats it exactly across consecutive
/// iterations, e.g. the very first iteration and, for `d = 2`, every second
/// one, long before the cooling limit.)
///
/// With `steady_check` set, the run also stops once the sorted computational
/// diagonal satisfies the steady-state inequality within [`CONDITION_SLACK`],
/// which characterizes the fixed point exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationPolicy {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub steady_check: bool,
}

impl Default for IterationPolicy {
    fn default() -> Self {
        IterationPolicy { max_iterations: 10_000, tolerance: 1e-12, steady_check: false }
    }
}

/// Per-iteration log entry. `condition_margin` is
/// `min_i (A_i (1-eps_b)^m - A_{i+1} (1+eps_b)^m)` of the sorted diagonal:
/// negative strictly below the cooling limit, approaching zero at it.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub iteration: usize,
    pub polarizations: PolarizationReport,
    pub distance_to_steady: f64,
    pub condition_margin: f64,
}

/// Result of [`run`]: the last state, the full per-iteration trajectory
/// (including the initial state as iteration 0), and whether a stopping rule
/// fired before `max_iterations`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub final_state: DiagonalState,
    pub trajectory: Vec<TrajectoryRecord>,
    pub converged: bool,
}

impl RunOutcome {
    /// Number of iterations actually applied.
    pub fn iterations(&self) -> usize {
        self.trajectory.last().map_or(0, |r| r.iteration)
    }

    pub fn final_record(&self) -> &TrajectoryRecord {
        self.trajectory.last().expect("trajectory always holds the initial record")
    }
}

/// The compression step: sorts the diagonal into non-increasing order.
/// The sort is stable, so trajectories are bit-reproducible; entries tied in
/// value keep their original relative order.
pub fn compress(state: &DiagonalState) -> DiagonalState {
    let mut sorted = state.probs().to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    DiagonalState::from_raw(sorted)
}

/// One full PPA iteration: compression, then replacement of the reset qubits
/// with fresh bath qubits (`refresh . trace_out_resets . compress`).
pub fn ppa_iteration(state: &DiagonalState, cfg: &SystemConfig) -> Result<DiagonalState> {
    refresh(&trace_out_resets(&compress(state), cfg)?, cfg)
}

fn bath_factors(cfg: &SystemConfig) -> (f64, f64) {
    let m = cfg.m();
    (math::powi(1.0 - cfg.eps_b(), m), math::powi(1.0 + cfg.eps_b(), m))
}

fn sorted_a(a: &ComputationalDiag) -> Vec<f64> {
    let mut v = a.a().to_vec();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

/// `min_i (A_i (1-eps_b)^m - A_{i+1} (1+eps_b)^m)` over the diagonal sorted
/// non-increasing. Zero or positive exactly when sorting can no longer move
/// weight toward the target qubit.
pub fn condition_margin(a: &ComputationalDiag, cfg: &SystemConfig) -> f64 {
    let (down, up) = bath_factors(cfg);
    let v = sorted_a(a);
    let mut margin = f64::INFINITY;
    for pair in v.windows(2) {
        margin = margin.min(pair[0] * down - pair[1] * up);
    }
    margin
}

/// `max_i (A_i (1-eps_b)^m - A_{i+1} (1+eps_b)^m)` over the sorted diagonal.
/// Zero or negative on the mixed side of the steady state.
pub fn mixed_side_margin(a: &ComputationalDiag, cfg: &SystemConfig) -> f64 {
    let (down, up) = bath_factors(cfg);
    let v = sorted_a(a);
    let mut margin = f64::NEG_INFINITY;
    for pair in v.windows(2) {
        margin = margin.max(pair[0] * down - pair[1] * up);
    }
    margin
}

/// Whether the steady-state inequality `A_i (1-eps_b)^m >= A_{i+1} (1+eps_b)^m`
/// holds for every adjacent pair, with additive `slack`.
pub fn steady_condition_met(a: &ComputationalDiag, cfg: &SystemConfig, slack: f64) -> bool {
    condition_margin(a, cfg) >= -slack
}

/// Whether the reversed inequality `A_i (1-eps_b)^m <= A_{i+1} (1+eps_b)^m`
/// holds for every adjacent pair of the sorted diagonal (within
/// [`CONDITION_SLACK`]). States on this side cool monotonically toward the
/// steady state and never overshoot it.
pub fn mixed_side_condition_met(a: &ComputationalDiag, cfg: &SystemConfig) -> bool {
    mixed_side_margin(a, cfg) <= CONDITION_SLACK
}

fn record(
    iteration: usize,
    state: &DiagonalState,
    cfg: &SystemConfig,
    steady: &ComputationalDiag,
) -> Result<TrajectoryRecord> {
    let a = trace_out_resets(state, cfg)?;
    let mut distance: f64 = 0.0;
    for (x, y) in a.a().iter().zip(steady.a()) {
        distance = distance.max(math::abs(x - y));
    }
    Ok(TrajectoryRecord {
        iteration,
        polarizations: qubit_polarizations(state, cfg)?,
        distance_to_steady: distance,
        condition_margin: condition_margin(&a, cfg),
    })
}

/// Iterates [`ppa_iteration`] from `init` until a stopping rule fires or
/// `max_iterations` is reached. Non-convergence is reported through
/// `converged`, not as an error.
pub fn run(cfg: &SystemConfig, init: DiagonalState, policy: &IterationPolicy) -> Result<RunOutcome> {
    if init.len() != cfg.full_dim() {
        return Err(Error::LengthMismatch { expected: cfg.full_dim(), got: init.len() });
    }
    let steady = analytic::steady_state(cfg).a;
    let mut trajectory = Vec::new();
    trajectory.push(record(0, &init, cfg, &steady)?);

    let mut state = init;
    let mut converged = false;
    for t in 1..=policy.max_iterations {
        let next = ppa_iteration(&state, cfg)?;
        let mut delta: f64 = 0.0;
        for (x, y) in next.probs().iter().zip(state.probs()) {
            delta = delta.max(math::abs(x - y));
        }
        state = next;
        trajectory.push(record(t, &state, cfg, &steady)?);
        if delta < policy.tolerance {
            converged = true;
            break;
        }
        if policy.steady_check
            && steady_condition_met(&trace_out_resets(&state, cfg)?, cfg, CONDITION_SLACK)
        {
            converged = true;
            break;
        }
    }
    Ok(RunOutcome { final_state: state, trajectory, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::maximally_mixed;
    use alloc::vec;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn compress_sorts_descending() {
        let cfg = SystemConfig::new(1, 1, 0.1).unwrap();
        let s = DiagonalState::new(vec![0.1, 0.4, 0.3, 0.2], &cfg).unwrap();
        assert_eq!(compress(&s).probs(), &[0.4, 0.3, 0.2, 0.1]);

        let cfg = SystemConfig::new(2, 1, 0.2).unwrap();
        let mixed = maximally_mixed(&cfg);
        assert_eq!(compress(&mixed), mixed);

        let a = ComputationalDiag::new(vec![0.25; 4], &cfg).unwrap();
        let refreshed = refresh(&a, &cfg).unwrap();
        let sorted = compress(&refreshed);
        let head = refreshed.probs()[0];
        let tail = refreshed.probs()[1];
        assert_eq!(sorted.probs(), &[head, head, head, head, tail, tail, tail, tail]);
    }

    #[test]
    fn iteration_from_mixed_matches_hand_computation() {
        let cfg = SystemConfig::new(2, 1, 0.2).unwrap();
        let s1 = ppa_iteration(&maximally_mixed(&cfg), &cfg).unwrap();
        // First iteration only tensors the uniform computational diagonal
        // with the bath qubit.
        for (got, want) in s1.probs().iter().zip([0.15, 0.1, 0.15, 0.1, 0.15, 0.1, 0.15, 0.1]) {
            assert!(close(*got, want, 1e-15));
        }
        // Second iteration: sort gathers the four large entries, blocks sum
        // to (0.3, 0.3, 0.2, 0.2), then the bath is reattached.
        let s2 = ppa_iteration(&s1, &cfg).unwrap();
        let a2 = trace_out_resets(&s2, &cfg).unwrap();
        for (got, want) in a2.a().iter().zip([0.3, 0.3, 0.2, 0.2]) {
            assert!(close(*got, want, 1e-15));
        }
        for (got, want) in s2.probs().iter().zip([0.18, 0.12, 0.18, 0.12, 0.12, 0.08, 0.12, 0.08])
        {
            assert!(close(*got, want, 1e-15));
        }
    }

    #[test]
    fn unpolarized_bath_fixes_the_mixed_state() {
        let cfg = SystemConfig::new(2, 1, 0.0).unwrap();
        let mixed = maximally_mixed(&cfg);
        assert_eq!(ppa_iteration(&mixed, &cfg).unwrap(), mixed);
    }

    #[test]
    fn steady_state_is_a_fixed_point() {
        for (d, m, eps_b) in [(2, 1, 0.1), (3, 1, 0.3), (4, 2, 0.05), (2, 3, 0.2)] {
            let cfg = SystemConfig::new(d, m, eps_b).unwrap();
            let steady = refresh(&analytic::steady_state(&cfg).a, &cfg).unwrap();
            let next = ppa_iteration(&steady, &cfg).unwrap();
            for (x, y) in next.probs().iter().zip(steady.probs()) {
                assert!(close(*x, *y, 1e-12), "d={d} m={m}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn steady_condition_examples() {
        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        let steady = analytic::steady_state(&cfg).a;
        assert!(steady_condition_met(&steady, &cfg, CONDITION_SLACK));

        let uniform = ComputationalDiag::new(vec![0.25; 4], &cfg).unwrap();
        assert!(!steady_condition_met(&uniform, &cfg, CONDITION_SLACK));

        let a = ComputationalDiag::new(vec![0.9, 0.05, 0.03, 0.02], &cfg).unwrap();
        assert!(steady_condition_met(&a, &cfg, CONDITION_SLACK));
    }

    #[test]
    fn mixed_side_condition_examples() {
        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        let uniform = ComputationalDiag::new(vec![0.25; 4], &cfg).unwrap();
        assert!(mixed_side_condition_met(&uniform, &cfg));

        let steady = analytic::steady_state(&cfg).a;
        assert!(mixed_side_condition_met(&steady, &cfg));

        let a = ComputationalDiag::new(vec![0.97, 0.01, 0.01, 0.01], &cfg).unwrap();
        assert!(!mixed_side_condition_met(&a, &cfg));
    }

    #[test]
    fn run_reaches_the_cooling_limit() {
        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        let out = run(&cfg, maximally_mixed(&cfg), &IterationPolicy::default()).unwrap();
        assert!(out.converged);
        let report = out.final_record();
        assert!(close(report.polarizations.target, 0.198019801980198, 1e-9));
        assert!(report.distance_to_steady < 1e-9);

        let cfg = SystemConfig::new(4, 1, 0.01).unwrap();
        let out = run(&cfg, maximally_mixed(&cfg), &IterationPolicy::default()).unwrap();
        assert!(out.converged);
        assert!(close(out.final_record().polarizations.target, 0.039980011593244, 1e-9));
    }

    #[test]
    fn run_with_unpolarized_bath_stops_immediately() {
        let cfg = SystemConfig::new(2, 1, 0.0).unwrap();
        let out = run(&cfg, maximally_mixed(&cfg), &IterationPolicy::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations(), 1);
        assert_eq!(out.final_record().polarizations.target, 0.0);
    }

    #[test]
    fn steady_rule_alone_detects_the_fixed_point() {
        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        let policy = IterationPolicy { max_iterations: 10_000, tolerance: 0.0, steady_check: true };
        let out = run(&cfg, maximally_mixed(&cfg), &policy).unwrap();
        assert!(out.converged);
        assert!(out.final_record().condition_margin >= -CONDITION_SLACK);
        assert!(close(out.final_record().polarizations.target, 0.198019801980198, 1e-9));
    }

    #[test]
    fn non_convergence_is_reported_not_an_error() {
        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        let policy = IterationPolicy { max_iterations: 3, tolerance: 1e-12, steady_check: false };
        let out = run(&cfg, maximally_mixed(&cfg), &policy).unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations(), 3);
        assert_eq!(out.trajectory.len(), 4);
    }

    #[test]
    fn trajectory_iterations_increase_from_zero() {
        let cfg = SystemConfig::new(3, 1, 0.2).unwrap();
        let out = run(&cfg, maximally_mixed(&cfg), &IterationPolicy::default()).unwrap();
        for (i, rec) in out.trajectory.iter().enumerate() {
            assert_eq!(rec.iteration, i);
        }
    }
}
