//! Half-integer Bessel functions, Schläfli integrals, the Airy function and
//! first Bessel zeros with their large-order asymptotic model.

mod airy;
mod bessel;
mod schlafli;
mod zeros;

pub use airy::{airy_ai, airy_ai_prime, airy_first_zero, AIRY_WINDOW};
pub use bessel::{bessel_half, spherical_bessel};
pub use schlafli::{airy_regime_check, schlafli_t1, schlafli_t2, AiryRegime, AiryRegimeRecord};
pub use zeros::{bessel_first_zero, fit_asymptotic_model, AsymptoticModel, ModelFit, ZeroRecord};

use crate::error::{domain, Result};
#[allow(unused_imports)] // shadowed by std float methods when std is linked
use num_traits::Float;

/// Degree `n` of a half-integer order `ν = n + 1/2`.
pub fn half_integer_degree(nu: f64) -> Result<usize> {
    let n = nu - 0.5;
    if !(n >= 0.0) || n.fract() != 0.0 || n > 1e7 {
        return Err(domain!(
            "order {nu} is not a half-integer in {{1/2, 3/2, ...}}"
        ));
    }
    Ok(n as usize)
}

/// `sin(πν)` with exact zeros at integers and exact ±1 at half-integers.
pub(crate) fn sin_pi(nu: f64) -> f64 {
    let r = nu - 2.0 * (nu * 0.5).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    (core::f64::consts::PI * r).sin()
}
