use crate::error::{Error, Result};

/// System layout: one target qubit, a `d`-dimensional scratch qudit, and
/// `m` reset qubits, with bath polarization `eps_b`.
///
/// Basis ordering is fixed: the target qubit is the most significant
/// subsystem, then the scratch qudit, then the reset qubits (least
/// significant). A basis index `p` therefore decomposes as
/// `p = ((target * d + scratch) << m) | resets`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    d: usize,
    m: u32,
    eps_b: f64,
    full_dim: usize,
}

/// Checks `0 <= eps_b < 1` (also rejecting NaN).
pub(crate) fn validate_bath(eps_b: f64) -> Result<()> {
    if (0.0..1.0).contains(&eps_b) {
        Ok(())
    } else {
        Err(Error::InvalidBathPolarization { eps_b })
    }
}

impl SystemConfig {
    pub fn new(d: usize, m: u32, eps_b: f64) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidScratchDimension { d });
        }
        if m < 1 {
            return Err(Error::InvalidResetCount { m });
        }
        validate_bath(eps_b)?;
        let reset_dim = 1usize
            .checked_shl(m)
            .ok_or(Error::DimensionOverflow { d, m })?;
        let full_dim = d
            .checked_mul(2)
            .and_then(|c| c.checked_mul(reset_dim))
            .ok_or(Error::DimensionOverflow { d, m })?;
        Ok(SystemConfig { d, m, eps_b, full_dim })
    }

    /// Scratch-qudit dimension (`2l + 1` for spin-`l`, or `2^{n'}` for `n'`
    /// scratch qubits).
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of reset qubits.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Bath polarization.
    pub fn eps_b(&self) -> f64 {
        self.eps_b
    }

    /// Full Hilbert-space dimension `D = 2 d 2^m`.
    pub fn full_dim(&self) -> usize {
        self.full_dim
    }

    /// Dimension of the computational part (target + scratch): `2d`.
    pub fn comp_dim(&self) -> usize {
        2 * self.d
    }

    /// Dimension of the reset register: `2^m`.
    pub fn reset_dim(&self) -> usize {
        1 << self.m
    }

    /// Number of scratch qubits `n'` when `d = 2^{n'}`, else `None`.
    pub fn scratch_qubits(&self) -> Option<u32> {
        if self.d.is_power_of_two() {
            Some(self.d.trailing_zeros())
        } else {
            None
        }
    }
}
