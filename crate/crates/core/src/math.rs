//! Scalar math routed through `std` when available and `libm` otherwise,
//! so the rest of the crate is oblivious to the float backend.

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("hbac-core requires either the `std` feature or the `libm` feature");

#[cfg(feature = "std")]
mod imp {
    pub fn abs(x: f64) -> f64 {
        x.abs()
    }
    pub fn tanh(x: f64) -> f64 {
        x.tanh()
    }
    pub fn atanh(x: f64) -> f64 {
        x.atanh()
    }
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    pub fn expm1(x: f64) -> f64 {
        x.exp_m1()
    }
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
    pub fn ceil(x: f64) -> f64 {
        x.ceil()
    }
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
mod imp {
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }
    pub fn tanh(x: f64) -> f64 {
        libm::tanh(x)
    }
    pub fn atanh(x: f64) -> f64 {
        libm::atanh(x)
    }
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    pub fn expm1(x: f64) -> f64 {
        libm::expm1(x)
    }
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    pub fn ceil(x: f64) -> f64 {
        libm::ceil(x)
    }
}

pub(crate) use imp::*;

/// `x^k` by repeated multiplication. Exact semantics for the small integer
/// exponents used throughout (reset counts, qubit indices).
pub(crate) fn powi(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// `2^k` as an f64, saturating to infinity past the representable range.
pub(crate) fn two_pow(k: u32) -> f64 {
    if k > 1023 {
        f64::INFINITY
    } else {
        powi(2.0, k)
    }
}
