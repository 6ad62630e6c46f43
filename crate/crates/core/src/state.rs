use alloc::vec;
use alloc::vec::Vec;

use crate::config::{validate_bath, SystemConfig};
use crate::error::{Error, Result};

/// Absolute tolerance on `sum(probs) - 1` for strict constructors.
pub const SUM_TOLERANCE: f64 = 1e-12;
/// Entries in `[-ROUNDING_CLAMP, 0)` are treated as rounding noise and
/// clamped to zero; anything more negative is rejected.
pub const ROUNDING_CLAMP: f64 = 1e-15;

fn validated(mut v: Vec<f64>, expected: usize, sum_tol: f64) -> Result<Vec<f64>> {
    if v.len() != expected {
        return Err(Error::LengthMismatch { expected, got: v.len() });
    }
    for (i, x) in v.iter_mut().enumerate() {
        if !(*x >= -ROUNDING_CLAMP && *x <= 1.0 + ROUNDING_CLAMP) {
            return Err(Error::InvalidEntry { index: i, value: *x });
        }
        *x = x.clamp(0.0, 1.0);
    }
    let sum: f64 = v.iter().sum();
    if crate::math::abs(sum - 1.0) > sum_tol {
        return Err(Error::NotNormalized { sum, tolerance: sum_tol });
    }
    Ok(v)
}

/// Diagonal of the full density matrix: a probability vector of length
/// `D = 2 d 2^m` over the computational basis, ordered target (most
/// significant), scratch qudit, reset qubits (least significant).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalState {
    probs: Vec<f64>,
}

impl DiagonalState {
    /// Builds a state from probabilities that already sum to 1 within
    /// [`SUM_TOLERANCE`]. Entries within [`ROUNDING_CLAMP`] below zero are
    /// clamped; other invalid entries are rejected.
    pub fn new(probs: Vec<f64>, cfg: &SystemConfig) -> Result<Self> {
        Ok(DiagonalState { probs: validated(probs, cfg.full_dim(), SUM_TOLERANCE)? })
    }

    /// Builds a state from probabilities whose sum may drift from 1 by up to
    /// `sum_tol` (for ingesting external data); the vector is renormalized by
    /// its exact float sum after validation.
    pub fn from_unnormalized(probs: Vec<f64>, cfg: &SystemConfig, sum_tol: f64) -> Result<Self> {
        let mut v = validated(probs, cfg.full_dim(), sum_tol)?;
        let sum: f64 = v.iter().sum();
        for x in &mut v {
            *x /= sum;
        }
        Ok(DiagonalState { probs: v })
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        DiagonalState { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Diagonal of the computational subsystem (target + scratch) after tracing
/// out the reset qubits: the vector `(A_1, ..., A_2d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputationalDiag {
    a: Vec<f64>,
}

impl ComputationalDiag {
    pub fn new(a: Vec<f64>, cfg: &SystemConfig) -> Result<Self> {
        Ok(ComputationalDiag { a: validated(a, cfg.comp_dim(), SUM_TOLERANCE)? })
    }

    pub(crate) fn from_raw(a: Vec<f64>) -> Self {
        ComputationalDiag { a }
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// Polarizations of the individual qubits of a state.
///
/// `scratch_qubits` is populated only when `d` is a power of two; entry `0`
/// is the least significant scratch qubit (qubit 1 in right-to-left
/// numbering) and the last entry is the scratch qubit adjacent to the
/// target. `reset` reports the most significant reset qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationReport {
    pub target: f64,
    pub scratch_qubits: Vec<f64>,
    pub reset: f64,
}

/// The uniform state with every entry `1/D`.
pub fn maximally_mixed(cfg: &SystemConfig) -> DiagonalState {
    let dim = cfg.full_dim();
    DiagonalState::from_raw(vec![1.0 / dim as f64; dim])
}

/// Diagonal of a bath qubit: `((1 + eps_b)/2, (1 - eps_b)/2)`.
pub fn bath_qubit(eps_b: f64) -> Result<[f64; 2]> {
    validate_bath(eps_b)?;
    Ok([(1.0 + eps_b) / 2.0, (1.0 - eps_b) / 2.0])
}

/// Diagonal of the `m`-fold tensor power of the bath qubit.
pub(crate) fn bath_weights(cfg: &SystemConfig) -> Vec<f64> {
    let [up, down] = [(1.0 + cfg.eps_b()) / 2.0, (1.0 - cfg.eps_b()) / 2.0];
    let mut w = vec![1.0];
    for _ in 0..cfg.m() {
        let mut next = Vec::with_capacity(w.len() * 2);
        for &x in &w {
            next.push(x * up);
            next.push(x * down);
        }
        w = next;
    }
    w
}

/// Partial trace over the reset qubits: `A_k` is the sum of the `2^m`
/// consecutive entries in block `k`.
pub fn trace_out_resets(state: &DiagonalState, cfg: &SystemConfig) -> Result<ComputationalDiag> {
    if state.len() != cfg.full_dim() {
        return Err(Error::LengthMismatch { expected: cfg.full_dim(), got: state.len() });
    }
    let a = state
        .probs()
        .chunks_exact(cfg.reset_dim())
        .map(|block| block.iter().sum())
        .collect();
    Ok(ComputationalDiag::from_raw(a))
}

/// Tensors the computational diagonal with `m` fresh bath qubits:
/// `probs = a (x) bath^(x)m`.
pub fn refresh(a: &ComputationalDiag, cfg: &SystemConfig) -> Result<DiagonalState> {
    if a.len() != cfg.comp_dim() {
        return Err(Error::LengthMismatch { expected: cfg.comp_dim(), got: a.len() });
    }
    let w = bath_weights(cfg);
    let mut probs = Vec::with_capacity(cfg.full_dim());
    for &ak in a.a() {
        for &wk in &w {
            probs.push(ak * wk);
        }
    }
    Ok(DiagonalState::from_raw(probs))
}

/// Per-qubit polarizations under the declared basis ordering. Each value is
/// `2 * P(qubit in ground state) - 1`.
pub fn qubit_polarizations(state: &DiagonalState, cfg: &SystemConfig) -> Result<PolarizationReport> {
    if state.len() != cfg.full_dim() {
        return Err(Error::LengthMismatch { expected: cfg.full_dim(), got: state.len() });
    }
    let probs = state.probs();
    let half = probs.len() / 2;
    let target = 2.0 * probs[..half].iter().sum::<f64>() - 1.0;

    let reset_bit = cfg.m() - 1;
    let mut reset_ground = 0.0;
    for (p, &x) in probs.iter().enumerate() {
        if (p >> reset_bit) & 1 == 0 {
            reset_ground += x;
        }
    }
    let reset = 2.0 * reset_ground - 1.0;

    let scratch_qubits = match cfg.scratch_qubits() {
        None => Vec::new(),
        Some(n_prime) => (0..n_prime)
            .map(|bit| {
                let mut ground = 0.0;
                for (p, &x) in probs.iter().enumerate() {
                    let scratch = (p >> cfg.m()) & (cfg.d() - 1);
                    if (scratch >> bit) & 1 == 0 {
                        ground += x;
                    }
                }
                2.0 * ground - 1.0
            })
            .collect(),
    };

    Ok(PolarizationReport { target, scratch_qubits, reset })
}
