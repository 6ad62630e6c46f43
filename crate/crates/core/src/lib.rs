//! Simulator and closed-form calculator for heat-bath algorithmic cooling
//! with the partner pairing algorithm (PPA).
//!
//! The system is one target qubit, a `d`-dimensional scratch qudit, and `m`
//! reset qubits coupled to a bath of polarization `eps_b`. States are
//! diagonal density matrices, stored as probability vectors over the
//! computational basis with the target as the most significant subsystem and
//! the resets as the least significant (see [`SystemConfig`]).
//!
//! One PPA iteration sorts the probabilities into non-increasing order (the
//! entropy-compression step) and then replaces the reset qubits with fresh
//! bath qubits. [`engine::run`] drives the iteration to its fixed point;
//! [`analytic`] provides the matching closed forms (steady-state
//! distribution, asymptotic per-qubit polarizations, step counts, and the
//! maximal-probability bound), so every simulated number can be checked
//! against a formula and vice versa.
//!
//! The crate is `no_std`-compatible: disable the default `std` feature and
//! enable `libm` to supply the scalar math.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analytic;
pub mod config;
pub mod engine;
pub mod error;
mod math;
pub mod state;

pub use config::SystemConfig;
pub use engine::{IterationPolicy, RunOutcome, TrajectoryRecord};
pub use error::{Error, Result};
pub use state::{ComputationalDiag, DiagonalState, PolarizationReport};
