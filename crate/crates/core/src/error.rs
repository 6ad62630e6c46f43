use core::fmt;

/// Errors reported by state construction and the analytic formulas.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Scratch dimension `d` must be at least 1.
    InvalidScratchDimension { d: usize },
    /// Reset count `m` must be at least 1 (and small enough that the full
    /// dimension fits in a `usize`).
    InvalidResetCount { m: u32 },
    /// The full dimension `2 * d * 2^m` overflows `usize`.
    DimensionOverflow { d: usize, m: u32 },
    /// Bath polarization must satisfy `0 <= eps_b < 1`.
    InvalidBathPolarization { eps_b: f64 },
    /// A vector had the wrong length for the configuration.
    LengthMismatch { expected: usize, got: usize },
    /// A probability entry was NaN or more negative than rounding noise.
    InvalidEntry { index: usize, value: f64 },
    /// Probabilities did not sum to 1 within tolerance.
    NotNormalized { sum: f64, tolerance: f64 },
    /// Per-qubit quantities need a power-of-two scratch dimension.
    NonPowerOfTwoScratch { d: usize },
    /// The pairwise-swap polarization ceiling needs an even scratch dimension.
    OddScratchDimension { d: usize },
    /// Qubit index out of `1..=max`.
    QubitIndexOutOfRange { j: u32, max: u32 },
    /// Step-count gap out of range; the valid interval is `(0, max]`.
    DeltaOutOfRange { delta: f64, max: f64 },
    /// A per-level gap list had the wrong length.
    WrongDeltaCount { expected: usize, got: usize },
    /// Energy-gap ratio must be positive and finite.
    InvalidGapRatio { gap_ratio: f64 },
    /// Qubit count for the bound comparison must be at least 2.
    InvalidQubitCount { n: u32 },
    /// Bound comparison needs a strictly polarized bath (`0 < eps_b < 1`).
    UnpolarizedBath,
    /// The transition marker `eps_b = 1/(m d)` needs `m * d >= 2`.
    MarkerOutOfDomain { d: usize, m: u32 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::InvalidScratchDimension { d } => {
                write!(f, "scratch dimension d = {d} must be >= 1")
            }
            Error::InvalidResetCount { m } => write!(f, "reset count m = {m} must be >= 1"),
            Error::DimensionOverflow { d, m } => {
                write!(f, "full dimension 2 * {d} * 2^{m} overflows usize")
            }
            Error::InvalidBathPolarization { eps_b } => {
                write!(f, "bath polarization {eps_b} outside [0, 1)")
            }
            Error::LengthMismatch { expected, got } => {
                write!(f, "expected vector of length {expected}, got {got}")
            }
            Error::InvalidEntry { index, value } => {
                write!(f, "entry {index} = {value} is not a valid probability")
            }
            Error::NotNormalized { sum, tolerance } => {
                write!(f, "probabilities sum to {sum}, more than {tolerance} away from 1")
            }
            Error::NonPowerOfTwoScratch { d } => {
                write!(f, "scratch dimension {d} is not a power of two; no qubit decomposition")
            }
            Error::OddScratchDimension { d } => {
                write!(f, "scratch dimension {d} must be even for the pairwise-swap ceiling")
            }
            Error::QubitIndexOutOfRange { j, max } => {
                write!(f, "qubit index {j} outside 1..={max}")
            }
            Error::DeltaOutOfRange { delta, max } => {
                write!(f, "gap delta = {delta} outside the valid interval (0, {max}]")
            }
            Error::WrongDeltaCount { expected, got } => {
                write!(f, "expected {expected} per-level gaps, got {got}")
            }
            Error::InvalidGapRatio { gap_ratio } => {
                write!(f, "energy-gap ratio {gap_ratio} must be positive and finite")
            }
            Error::InvalidQubitCount { n } => write!(f, "qubit count n = {n} must be >= 2"),
            Error::UnpolarizedBath => {
                write!(f, "bound comparison requires 0 < eps_b < 1")
            }
            Error::MarkerOutOfDomain { d, m } => {
                write!(f, "transition marker eps_b = 1/({m}*{d}) needs m*d >= 2")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
