//! The two pieces of Schläfli's representation `J_ν = T₁ − T₂` and the
//! transition-region comparison of `T₁` with the Airy profile.

use core::f64::consts::PI;

use super::{airy_ai, sin_pi};
use crate::error::{domain, Result};
use crate::quadrature::{integrate, Tolerance};
#[allow(unused_imports)] // shadowed by std float methods when std is linked
use num_traits::Float;

const TOL: Tolerance = Tolerance {
    abs: 1e-12,
    rel: 1e-13,
    max_intervals: 20_000,
};

// e^{-37} ≈ 8.5e-17: beyond this the integrand of T₂ is below 1e-16.
const TAIL_EXPONENT: f64 = 37.0;

fn check(nu: f64, x: f64) -> Result<()> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(domain!("order {nu} must be positive"));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain!("argument {x} must be positive"));
    }
    Ok(())
}

/// `T₁(ν, x) = (1/π) ∫₀^π cos(x sin t − νt) dt`.
pub fn schlafli_t1(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    let v = integrate(|t| (x * t.sin() - nu * t).cos(), 0.0, PI, TOL)?;
    Ok(v / PI)
}

/// `T₂(ν, x) = sin(νπ)/π ∫₀^∞ e^{−(x sinh t + νt)} dt`.
///
/// The integral is cut where the exponent reaches 37; the neglected tail is
/// below `e^{−37}/ν`.
pub fn schlafli_t2(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    let s = sin_pi(nu);
    if s == 0.0 {
        return Ok(0.0);
    }
    let exponent = |t: f64| x * t.sinh() + nu * t;
    let mut hi = 1.0;
    while exponent(hi) < TAIL_EXPONENT {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if exponent(mid) < TAIL_EXPONENT {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi {
            break;
        }
    }
    let v = integrate(|t| (-exponent(t)).exp(), 0.0, hi, TOL)?;
    Ok(s / PI * v)
}

/// Admissible neighbourhood `|ρ − 1| ≤ β₁ ν^{−γ}` of the turning point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryRegime {
    pub beta1: f64,
    pub gamma: f64,
}

impl Default for AiryRegime {
    fn default() -> Self {
        Self {
            beta1: 1.0,
            gamma: 0.47,
        }
    }
}

/// `T₁(νρ)` against `(2/(νρ))^{1/3} Ai(ν^{2/3}(1−ρ)(2/ρ)^{1/3})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryRegimeRecord {
    pub nu: f64,
    pub rho: f64,
    pub t1: f64,
    pub model: f64,
    pub difference: f64,
}

pub fn airy_regime_check(nu: f64, rho: f64, regime: AiryRegime) -> Result<AiryRegimeRecord> {
    if !(regime.gamma > 0.0 && regime.gamma < 0.5) || !(regime.beta1 > 0.0) {
        return Err(domain!("invalid regime parameters {regime:?}"));
    }
    if !(nu >= 50.0) {
        return Err(domain!("order {nu} below 50"));
    }
    if !((rho - 1.0).abs() <= regime.beta1 * nu.powf(-regime.gamma)) {
        return Err(domain!(
            "rho = {rho} outside the transition regime for order {nu}"
        ));
    }
    let x = nu * rho;
    let t1 = schlafli_t1(nu, x)?;
    let arg = nu.powf(2.0 / 3.0) * (1.0 - rho) * (2.0 / rho).cbrt();
    let model = (2.0 / x).cbrt() * airy_ai(arg)?;
    Ok(AiryRegimeRecord {
        nu,
        rho,
        t1,
        model,
        difference: t1 - model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::bessel_half;

    #[test]
    fn integer_order_has_no_second_term() {
        assert_eq!(schlafli_t2(2.0, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn half_order_identity() {
        let j = bessel_half(0.5, 1.0).unwrap();
        let t1 = schlafli_t1(0.5, 1.0).unwrap();
        let t2 = schlafli_t2(0.5, 1.0).unwrap();
        assert!(t2 > 0.0);
        assert!((j - (t1 - t2)).abs() < 1e-10);
    }

    #[test]
    fn far_below_turning_point_is_tiny() {
        assert!(schlafli_t1(100.0, 50.0).unwrap().abs() < 1e-8);
    }

    #[test]
    fn regime_bounds() {
        assert!(airy_regime_check(40.0, 1.0, AiryRegime::default()).is_err());
        assert!(airy_regime_check(100.0, 1.5, AiryRegime::default()).is_err());
        let r = airy_regime_check(400.0, 1.0, AiryRegime::default()).unwrap();
        let expected = (2.0f64 / 400.0).cbrt() * 0.355_028_053_887_817_2;
        assert!((r.model - expected).abs() < 1e-15);
    }
}
