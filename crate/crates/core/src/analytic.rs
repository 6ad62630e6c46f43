//! Closed forms for the cooling limit: the steady-state distribution, the
//! asymptotic polarizations, step counts for the 3-qubit system, and the
//! maximal-probability bound comparison.
//!
//! Expressions of the shape `((1+e)^k - (1-e)^k) / ((1+e)^k + (1-e)^k)` are
//! evaluated as `tanh(k * atanh(e))` and differences `1 - r^k` through
//! `expm1`, so every quantity stays finite and accurate for large exponents
//! and for nearly unpolarized baths.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::{validate_bath, SystemConfig};
use crate::error::{Error, Result};
use crate::math;
use crate::state::ComputationalDiag;

/// Steady-state diagonal of the computational qubits: a geometric
/// distribution with ratio `q_ratio = ((1-eps_b)/(1+eps_b))^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub q_ratio: f64,
    pub a: ComputationalDiag,
}

/// Step counts to come within `delta` of the asymptotic polarization.
///
/// `steps_real` is the real-valued count for the first level; `rounds`
/// rounds it up to whole two-iteration rounds and `iterations_total` counts
/// iterations including the initial compression. For the multi-level upper
/// bound, `upper_bound_steps` is the product of per-level counts and
/// `intermediate_eps` lists the polarization reached after each level (its
/// last entry is the final reachable polarization).
#[derive(Debug, Clone, PartialEq)]
pub struct StepCountReport {
    pub delta: f64,
    pub steps_real: f64,
    pub rounds: u64,
    pub iterations_total: u64,
    pub upper_bound_steps: Option<f64>,
    pub intermediate_eps: Vec<f64>,
}

/// Exact maximal basis-state probability at the cooling limit next to the
/// bound `min(2^-n * exp(atanh(eps_b) * 2^(n-1)), 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundComparison {
    pub n: u32,
    pub p_max: f64,
    pub schulman_bound: f64,
}

fn eps_limit(exponent: f64, eps_b: f64) -> f64 {
    math::tanh(exponent * math::atanh(eps_b))
}

/// Steady-state distribution `A_i = A_1 * Q^(i-1)` with
/// `A_1 = (1 - Q) / (1 - Q^2d)`, evaluated via `expm1` ratios. An
/// unpolarized bath yields the uniform distribution.
pub fn steady_state(cfg: &SystemConfig) -> SteadyState {
    let two_d = cfg.comp_dim();
    let eps_b = cfg.eps_b();
    if eps_b == 0.0 {
        return SteadyState {
            q_ratio: 1.0,
            a: ComputationalDiag::from_raw(vec![1.0 / two_d as f64; two_d]),
        };
    }
    let m = f64::from(cfg.m());
    let t = math::atanh(eps_b);
    let q = math::powi((1.0 - eps_b) / (1.0 + eps_b), cfg.m());
    let a1 = math::expm1(-2.0 * m * t) / math::expm1(-2.0 * m * t * two_d as f64);
    let mut a = Vec::with_capacity(two_d);
    let mut cur = a1;
    for _ in 0..two_d {
        a.push(cur);
        cur *= q;
    }
    let sum: f64 = a.iter().sum();
    for x in &mut a {
        *x /= sum;
    }
    SteadyState { q_ratio: q, a: ComputationalDiag::from_raw(a) }
}

/// Asymptotic target polarization `tanh(m d atanh(eps_b))`.
pub fn asymptotic_polarization(cfg: &SystemConfig) -> f64 {
    eps_limit(f64::from(cfg.m()) * cfg.d() as f64, cfg.eps_b())
}

/// Gap `1 - asymptotic_polarization`, evaluated in the log domain as
/// `2 e^-x / (1 + e^-x)` with `x = 2 m d atanh(eps_b)`, so it underflows
/// gracefully instead of overflowing. An unpolarized bath gives 1.
pub fn delta_max(cfg: &SystemConfig) -> f64 {
    let x = 2.0 * f64::from(cfg.m()) * cfg.d() as f64 * math::atanh(cfg.eps_b());
    let e = math::exp(-x);
    2.0 * e / (1.0 + e)
}

/// Asymptotic polarization of qubit `j` (numbered right to left, `j = n'+1`
/// being the target): `tanh(m 2^(j-1) atanh(eps_b))`. Defined only when the
/// scratch dimension is a power of two.
pub fn per_qubit_polarization(cfg: &SystemConfig, j: u32) -> Result<f64> {
    let n_prime = cfg
        .scratch_qubits()
        .ok_or(Error::NonPowerOfTwoScratch { d: cfg.d() })?;
    let max = n_prime + 1;
    if j < 1 || j > max {
        return Err(Error::QubitIndexOutOfRange { j, max });
    }
    Ok(eps_limit(f64::from(cfg.m()) * math::two_pow(j - 1), cfg.eps_b()))
}

/// Temperature of the target at the cooling limit relative to the bath:
/// `T_steady / T_b = gap_ratio / (m d)`, where `gap_ratio` is the target's
/// energy gap over the reset/bath gap.
pub fn steady_temperature_ratio(cfg: &SystemConfig, gap_ratio: f64) -> Result<f64> {
    if !(gap_ratio > 0.0 && gap_ratio.is_finite()) {
        return Err(Error::InvalidGapRatio { gap_ratio });
    }
    Ok(gap_ratio / (f64::from(cfg.m()) * cfg.d() as f64))
}

/// Exact `p_max = eps_b / (1 - ((1-eps_b)/(1+eps_b))^(2^(n-1)))` and the
/// bound `min(2^-n e^(atanh(eps_b) 2^(n-1)), 1)` for an `n`-qubit system
/// (target + n-2 scratch + one reset).
///
/// The denominator of `p_max` is evaluated as `-expm1(-2^n atanh(eps_b))`;
/// the direct form loses all significance for weak baths, where the
/// difference between `p_max` and the bound is far below the rounding error
/// of `1 - Q^(2^(n-1))`.
pub fn bound_comparison(n: u32, eps_b: f64) -> Result<BoundComparison> {
    if n < 2 {
        return Err(Error::InvalidQubitCount { n });
    }
    validate_bath(eps_b)?;
    if eps_b == 0.0 {
        return Err(Error::UnpolarizedBath);
    }
    let t = math::atanh(eps_b);
    let p_max = eps_b / -math::expm1(-math::two_pow(n) * t);
    let log_bound = math::two_pow(n - 1) * t - f64::from(n) * core::f64::consts::LN_2;
    let schulman_bound = math::exp(log_bound).min(1.0);
    Ok(BoundComparison { n, p_max, schulman_bound })
}

/// Target polarization of the 3-qubit system after one more round:
/// `eps -> (1 - eps_b^2)/2 * eps + eps_b`.
pub fn three_qubit_round_map(eps_t: f64, eps_b: f64) -> f64 {
    (1.0 - eps_b * eps_b) / 2.0 * eps_t + eps_b
}

fn three_qubit_limit(eps_b: f64) -> f64 {
    2.0 * eps_b / (1.0 + eps_b * eps_b)
}

/// Closed form for the 3-qubit polarization after the initial compression
/// plus `j` rounds: `eps_inf - q^j (eps_inf - eps_b)` with
/// `q = (1 - eps_b^2)/2`.
pub fn polarization_after_rounds(j: u32, eps_b: f64) -> f64 {
    let eps_inf = three_qubit_limit(eps_b);
    // q <= 1/2, so q^j underflows to zero long before j reaches 1100; cap
    // the multiplication count instead of looping j times.
    let qj = math::powi((1.0 - eps_b * eps_b) / 2.0, j.min(1100));
    eps_inf - qj * (eps_inf - eps_b)
}

/// Real-valued number of 3-qubit iterations to come within `delta` of the
/// asymptotic polarization: `N = 2 ln(delta / (eps_inf - eps_b)) / ln q`.
/// `delta` must lie in `(0, eps_inf - eps_b]`; the upper endpoint returns 0
/// (the mixed start already satisfies it).
pub fn steps_exact_3qubit(delta: f64, eps_b: f64) -> Result<f64> {
    validate_bath(eps_b)?;
    let gap = three_qubit_limit(eps_b) - eps_b;
    if !(delta > 0.0 && delta <= gap) {
        return Err(Error::DeltaOutOfRange { delta, max: gap });
    }
    let q = (1.0 - eps_b * eps_b) / 2.0;
    Ok(2.0 * math::ln(delta / gap) / math::ln(q))
}

fn report_from_first_level(delta: f64, steps_real: f64) -> StepCountReport {
    let rounds = math::ceil(steps_real / 2.0) as u64;
    StepCountReport {
        delta,
        steps_real,
        rounds,
        iterations_total: 2 * rounds + 1,
        upper_bound_steps: None,
        intermediate_eps: Vec::new(),
    }
}

/// [`steps_exact_3qubit`] packaged with its integer round/iteration counts.
pub fn steps_exact_report(delta: f64, eps_b: f64) -> Result<StepCountReport> {
    Ok(report_from_first_level(delta, steps_exact_3qubit(delta, eps_b)?))
}

/// Upper bound on the steps for `n'` scratch qubits: the product of
/// per-level 3-qubit counts, where level `k` uses the polarization reached by
/// level `k-1` as its effective bath, `eps_k = f(eps_{k-1}) - delta_k` with
/// `f(e) = 2e/(1+e^2)`. Expects one gap per level, i.e. `n' / 2` values.
pub fn steps_upper_bound(n_prime: u32, eps_b: f64, deltas: &[f64]) -> Result<StepCountReport> {
    if n_prime < 2 {
        return Err(Error::InvalidQubitCount { n: n_prime });
    }
    validate_bath(eps_b)?;
    let levels = (n_prime / 2) as usize;
    if deltas.len() != levels {
        return Err(Error::WrongDeltaCount { expected: levels, got: deltas.len() });
    }
    let mut eps = eps_b;
    let mut product = 1.0;
    let mut first_level = 0.0;
    let mut intermediate_eps = Vec::with_capacity(levels);
    for (k, &delta_k) in deltas.iter().enumerate() {
        let n_k = steps_exact_3qubit(delta_k, eps)?;
        if k == 0 {
            first_level = n_k;
        }
        product *= n_k;
        eps = three_qubit_limit(eps) - delta_k;
        intermediate_eps.push(eps);
    }
    let mut report = report_from_first_level(deltas[0], first_level);
    report.upper_bound_steps = Some(product);
    report.intermediate_eps = intermediate_eps;
    Ok(report)
}

/// Polarization ceiling of the pairwise-swap scheme,
/// `tanh((d/2) atanh(eps_b))`; needs an even scratch dimension.
pub fn eps_max_swap_scheme(cfg: &SystemConfig) -> Result<f64> {
    if !cfg.d().is_multiple_of(2) {
        return Err(Error::OddScratchDimension { d: cfg.d() });
    }
    Ok(eps_limit(cfg.d() as f64 / 2.0, cfg.eps_b()))
}

/// The point `eps_b = 1/(m d)` where the asymptotic polarization leaves the
/// linear `m d eps_b` regime, together with the polarization there. Needs
/// `m d >= 2` so the marker is a valid bath polarization.
pub fn transition_marker(d: usize, m: u32) -> Result<(f64, f64)> {
    if d < 1 {
        return Err(Error::InvalidScratchDimension { d });
    }
    if m < 1 {
        return Err(Error::InvalidResetCount { m });
    }
    let md = f64::from(m) * d as f64;
    if md < 2.0 {
        return Err(Error::MarkerOutOfDomain { d, m });
    }
    let eps_b = 1.0 / md;
    Ok((eps_b, eps_limit(md, eps_b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{qubit_polarizations, refresh};

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    fn rel_close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * y.abs()
    }

    #[test]
    fn steady_state_geometric_series() {
        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        let s = steady_state(&cfg);
        assert!(close(s.q_ratio, 9.0 / 11.0, 1e-15));
        let expected = [
            0.32945544554455445,
            0.2695544554455446,
            0.22054455445544555,
            0.18044554455445545,
        ];
        for (got, want) in s.a.a().iter().zip(expected) {
            assert!(close(*got, want, 1e-12), "{got} vs {want}");
        }
        for pair in s.a.a().windows(2) {
            assert!(rel_close(pair[1] / pair[0], s.q_ratio, 1e-12));
        }
        assert!(close(s.a.a().iter().sum::<f64>(), 1.0, 1e-12));
    }

    #[test]
    fn steady_state_limits() {
        let cfg = SystemConfig::new(3, 2, 0.0).unwrap();
        let s = steady_state(&cfg);
        assert_eq!(s.q_ratio, 1.0);
        assert!(s.a.a().iter().all(|&x| x == 1.0 / 6.0));

        let cfg = SystemConfig::new(2, 1, 0.999999).unwrap();
        let s = steady_state(&cfg);
        assert!(s.a.a()[0] > 0.999_99);
        assert!(s.a.a()[3] < 1e-16);
    }

    #[test]
    fn steady_state_matches_reported_target_polarization() {
        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        let full = refresh(&steady_state(&cfg).a, &cfg).unwrap();
        let report = qubit_polarizations(&full, &cfg).unwrap();
        assert!(close(report.target, 0.198019801980198, 1e-12));
    }

    #[test]
    fn asymptotic_polarization_values() {
        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        assert!(close(asymptotic_polarization(&cfg), 0.198019801980198, 1e-15));

        let cfg = SystemConfig::new(5, 2, 0.0).unwrap();
        assert_eq!(asymptotic_polarization(&cfg), 0.0);

        let cfg = SystemConfig::new(64, 1, 1e-4).unwrap();
        let eps = asymptotic_polarization(&cfg);
        assert!(close(eps, 0.006399912641430758, 1e-15));
        // matches the explicit power-ratio form while that is representable
        let (up, down) = ((1.0f64 + 1e-4).powi(64), (1.0f64 - 1e-4).powi(64));
        assert!(rel_close(eps, (up - down) / (up + down), 1e-12));
    }

    #[test]
    fn delta_max_complements_the_polarization() {
        // md ln((1+e)/(1-e)) = ln 3 at e = 2 - sqrt(3), md = 2
        let cfg = SystemConfig::new(2, 1, 2.0 - 3.0f64.sqrt()).unwrap();
        assert!(close(delta_max(&cfg), 0.5, 1e-12));

        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        assert!(close(delta_max(&cfg), 0.801980198019802, 1e-12));

        // rearranged complement where the gap is large enough for the
        // subtraction to keep significance
        for (d, m, eps_b) in [(2, 1, 0.1), (3, 1, 0.3), (4, 2, 0.2), (2, 1, 0.7)] {
            let cfg = SystemConfig::new(d, m, eps_b).unwrap();
            assert!(rel_close(delta_max(&cfg), 1.0 - asymptotic_polarization(&cfg), 1e-12));
        }
        // sum form holds even where the polarization rounds to 1
        for (d, m, eps_b) in [(2, 1, 0.1), (8, 2, 0.3), (5, 1, 0.7), (16, 3, 0.9)] {
            let cfg = SystemConfig::new(d, m, eps_b).unwrap();
            assert!((delta_max(&cfg) + asymptotic_polarization(&cfg) - 1.0).abs() <= 1e-12);
        }

        // doubling d squares e^x: delta(2d) = 2/((e^x)^2 + 1)
        let cfg1 = SystemConfig::new(4, 1, 0.2).unwrap();
        let cfg2 = SystemConfig::new(8, 1, 0.2).unwrap();
        let ex = 2.0 / delta_max(&cfg1) - 1.0;
        assert!(rel_close(delta_max(&cfg2), 2.0 / (ex * ex + 1.0), 1e-12));
    }

    #[test]
    fn per_qubit_polarization_ladder() {
        let cfg = SystemConfig::new(4, 1, 0.1).unwrap();
        assert!(close(per_qubit_polarization(&cfg, 1).unwrap(), 0.1, 1e-15));
        assert!(close(per_qubit_polarization(&cfg, 2).unwrap(), 0.198019801980198, 1e-15));
        assert!(close(per_qubit_polarization(&cfg, 3).unwrap(), 0.381096123007263, 1e-15));
        assert_eq!(per_qubit_polarization(&cfg, 3).unwrap(), asymptotic_polarization(&cfg));
        assert!(per_qubit_polarization(&cfg, 0).is_err());
        assert!(per_qubit_polarization(&cfg, 4).is_err());

        let cfg = SystemConfig::new(3, 1, 0.1).unwrap();
        assert!(matches!(
            per_qubit_polarization(&cfg, 1),
            Err(Error::NonPowerOfTwoScratch { d: 3 })
        ));
    }

    #[test]
    fn temperature_ratio() {
        let cfg = SystemConfig::new(2, 1, 0.1).unwrap();
        assert_eq!(steady_temperature_ratio(&cfg, 1.0).unwrap(), 0.5);
        let cfg = SystemConfig::new(8, 1, 0.1).unwrap();
        assert_eq!(steady_temperature_ratio(&cfg, 1.0).unwrap(), 0.125);
        assert!(steady_temperature_ratio(&cfg, 0.0).is_err());
        assert!(steady_temperature_ratio(&cfg, -1.0).is_err());
        assert!(steady_temperature_ratio(&cfg, f64::INFINITY).is_err());

        // tanh(gap_ratio * atanh(eps_b) / ratio) recovers the polarization
        for (d, m, eps_b, gap) in [(2, 1, 0.1, 1.0), (4, 2, 0.3, 2.5), (3, 1, 0.05, 0.7)] {
            let cfg = SystemConfig::new(d, m, eps_b).unwrap();
            let ratio = steady_temperature_ratio(&cfg, gap).unwrap();
            let via_temperature = (gap * eps_b.atanh() / ratio).tanh();
            assert!(rel_close(via_temperature, asymptotic_polarization(&cfg), 1e-12));
        }
    }

    #[test]
    fn bound_comparison_values() {
        let b = bound_comparison(3, 0.01).unwrap();
        assert!(close(b.p_max, 0.13006249500049995, 1e-12));
        assert!(close(b.schulman_bound, 0.130101520253035, 1e-12));
        assert!(b.p_max <= b.schulman_bound);

        let b = bound_comparison(3, 0.999999).unwrap();
        assert!(b.p_max > 0.999_99 && b.p_max <= 1.0 + 1e-15);
        assert_eq!(b.schulman_bound, 1.0);

        assert!(bound_comparison(1, 0.1).is_err());
        assert!(bound_comparison(3, 0.0).is_err());
        assert!(bound_comparison(3, 1.0).is_err());
    }

    #[test]
    fn p_max_equals_scaled_steady_state_head() {
        for n in 2..=6u32 {
            for eps_b in [1e-6, 1e-3, 0.01, 0.1, 0.5, 0.9, 0.99] {
                let b = bound_comparison(n, eps_b).unwrap();
                let cfg = SystemConfig::new(1 << (n - 2), 1, eps_b).unwrap();
                let a1 = steady_state(&cfg).a.a()[0];
                assert!(
                    rel_close(b.p_max, a1 * (1.0 + eps_b) / 2.0, 1e-12),
                    "n={n} eps_b={eps_b}"
                );
            }
        }
    }

    #[test]
    fn three_qubit_round_map_values() {
        assert_eq!(three_qubit_round_map(0.0, 0.0), 0.0);
        let fixed = 2.0 * 0.1 / (1.0 + 0.01);
        assert!(close(three_qubit_round_map(fixed, 0.1), fixed, 1e-15));
        assert!(close(three_qubit_round_map(0.1, 0.1), 0.1495, 1e-15));
    }

    #[test]
    fn polarization_after_rounds_closed_form() {
        assert_eq!(polarization_after_rounds(0, 0.1), 0.1);
        assert!(close(polarization_after_rounds(1, 0.1), 0.1495, 1e-15));
        assert!(close(
            polarization_after_rounds(1, 0.1),
            three_qubit_round_map(0.1, 0.1),
            1e-15
        ));
        assert!(close(polarization_after_rounds(5000, 0.1), 2.0 * 0.1 / 1.01, 1e-15));
    }

    #[test]
    fn exact_step_count() {
        let eps_b = 0.1;
        let gap = 2.0 * eps_b / (1.0 + eps_b * eps_b) - eps_b;
        assert_eq!(steps_exact_3qubit(gap, eps_b).unwrap(), 0.0);
        let q = (1.0 - eps_b * eps_b) / 2.0;
        assert!(close(steps_exact_3qubit(q * gap, eps_b).unwrap(), 2.0, 1e-12));

        let report = steps_exact_report(0.01, 0.1).unwrap();
        assert!(close(report.steps_real, 6.49201503989762, 1e-11));
        assert_eq!(report.rounds, 4);
        assert_eq!(report.iterations_total, 9);
        assert_eq!(report.upper_bound_steps, None);

        assert!(steps_exact_3qubit(0.0, 0.1).is_err());
        assert!(steps_exact_3qubit(-0.01, 0.1).is_err());
        assert!(steps_exact_3qubit(gap + 1e-6, 0.1).is_err());
        assert!(steps_exact_3qubit(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn upper_bound_recursion() {
        // single level reduces to the exact 3-qubit count
        let single = steps_upper_bound(2, 0.1, &[0.01]).unwrap();
        assert_eq!(single.upper_bound_steps.unwrap(), single.steps_real);
        assert_eq!(single.intermediate_eps.len(), 1);

        let two = steps_upper_bound(4, 0.1, &[0.01, 0.01]).unwrap();
        assert!(close(two.intermediate_eps[0], 0.188019801980198, 1e-12));
        assert!(close(two.intermediate_eps[1], 0.353199960203075, 1e-12));
        assert!(close(two.steps_real, 6.49201503989762, 1e-11));
        assert!(close(two.upper_bound_steps.unwrap(), 50.9865494989649, 1e-9));

        // n' = 5 has the same number of levels as n' = 4
        let five = steps_upper_bound(5, 0.1, &[0.01, 0.01]).unwrap();
        assert_eq!(five.upper_bound_steps, two.upper_bound_steps);

        assert!(steps_upper_bound(4, 0.1, &[0.01]).is_err());
        assert!(steps_upper_bound(1, 0.1, &[0.01]).is_err());
        // shrinking gaps blow the counts up
        let tiny = steps_upper_bound(4, 0.1, &[1e-9, 1e-9]).unwrap();
        assert!(tiny.upper_bound_steps.unwrap() > 1e3);
    }

    #[test]
    fn swap_scheme_ceiling() {
        let cfg = SystemConfig::new(2, 1, 0.37).unwrap();
        assert!(close(eps_max_swap_scheme(&cfg).unwrap(), 0.37, 1e-15));

        let cfg = SystemConfig::new(4, 1, 0.1).unwrap();
        assert!(close(eps_max_swap_scheme(&cfg).unwrap(), 0.198019801980198, 1e-15));

        // agrees with the last scratch qubit for d = 2^n', m = 1
        let cfg = SystemConfig::new(8, 1, 0.2).unwrap();
        assert_eq!(
            eps_max_swap_scheme(&cfg).unwrap(),
            per_qubit_polarization(&cfg, 3).unwrap()
        );

        let cfg = SystemConfig::new(3, 1, 0.1).unwrap();
        assert!(matches!(eps_max_swap_scheme(&cfg), Err(Error::OddScratchDimension { d: 3 })));
    }

    #[test]
    fn transition_marker_consistency() {
        let (eps_b, eps_inf) = transition_marker(2, 1).unwrap();
        assert_eq!(eps_b, 0.5);
        assert!(close(eps_inf, 0.8, 1e-15));

        for (d, m) in [(2u32, 1u32), (3, 1), (4, 2), (64, 1)] {
            let (eps_b, eps_inf) = transition_marker(d as usize, m).unwrap();
            let cfg = SystemConfig::new(d as usize, m, eps_b).unwrap();
            assert_eq!(eps_inf, asymptotic_polarization(&cfg));
        }

        assert!(matches!(transition_marker(1, 1), Err(Error::MarkerOutOfDomain { .. })));
    }
}
