use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{airy_first_zero, bessel::spherical_bessel, half_integer_degree};
use crate::error::{Error, Result};
use crate::regression::least_squares;
#[allow(unused_imports)] // shadowed by std float methods when std is linked
use num_traits::Float;

/// First positive zero of `J_ν` with the model prediction at that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord {
    pub order: f64,
    pub zero: f64,
    pub prediction: f64,
    pub residual: f64,
}

impl ZeroRecord {
    /// Re-evaluates prediction and residual under another model.
    pub fn with_model(self, model: &AsymptoticModel) -> Self {
        let prediction = model.predict(self.order);
        Self {
            prediction,
            residual: self.zero - prediction,
            ..self
        }
    }

    /// `residual · ν^{2/3}`, bounded if the model is right to that order.
    pub fn scaled_residual(&self) -> f64 {
        self.residual * self.order.powf(2.0 / 3.0)
    }
}

/// `z_ν ≈ ν + α ν^{1/3} + β ν^{−1/3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticModel {
    pub alpha: f64,
    pub beta: f64,
    /// First negative zero of `Ai`.
    pub airy_zero: f64,
}

impl AsymptoticModel {
    /// `α = −2^{−1/3} z₀`, `β = 0`.
    pub fn leading_order() -> Self {
        let z0 = airy_first_zero();
        Self {
            alpha: -z0 / 2f64.cbrt(),
            beta: 0.0,
            airy_zero: z0,
        }
    }

    /// The Airy-determined leading coefficient `−2^{−1/3} z₀`.
    pub fn airy_alpha(&self) -> f64 {
        -self.airy_zero / 2f64.cbrt()
    }

    pub fn predict(&self, nu: f64) -> f64 {
        let c = nu.cbrt();
        nu + self.alpha * c + self.beta / c
    }
}

/// Least-squares fit of `z_ν − ν` on `{ν^{1/3}, ν^{−1/3}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFit {
    pub model: AsymptoticModel,
    /// `z_ν − prediction` at each input order.
    pub residuals: Vec<f64>,
    /// `max |residual| · ν^{2/3}`.
    pub max_scaled_residual: f64,
}

/// First positive zero of `J_ν` for `ν ∈ {1/2, 3/2, …}`.
///
/// Scans `[max(ν, 1), ν + 3ν^{1/3} + 5]` with step `max(ν^{1/3}/8, 0.05)` for a
/// sign change and bisects it to `1e-12`.
pub fn bessel_first_zero(nu: f64, model: &AsymptoticModel) -> Result<ZeroRecord> {
    let n = half_integer_degree(nu)?;
    let record = |zero: f64| {
        let prediction = model.predict(nu);
        ZeroRecord {
            order: nu,
            zero,
            prediction,
            residual: zero - prediction,
        }
    };
    if n == 0 {
        return Ok(record(PI));
    }
    let f = |x: f64| spherical_bessel(n, x);
    let c = nu.cbrt();
    let start = nu.max(1.0);
    let end = nu + 3.0 * c + 5.0;
    let step = (c / 8.0).max(0.05);

    let mut a = start;
    let mut fa = f(a);
    let mut bracket = None;
    while a < end {
        let b = (a + step).min(end);
        let fb = f(b);
        if fb == 0.0 {
            return Ok(record(b));
        }
        if fa != 0.0 && (fa > 0.0) != (fb > 0.0) {
            bracket = Some((a, b, fa));
            break;
        }
        a = b;
        fa = fb;
    }
    let (mut lo, mut hi, f_lo) = bracket.ok_or_else(|| {
        Error::Search(alloc::format!(
            "no sign change of J_{nu} on [{start}, {end}]"
        ))
    })?;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(record(mid));
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(record(0.5 * (lo + hi)))
}

/// Fits `α`, `β` from computed zeros.
///
/// Needs at least 8 distinct orders spanning a decade.
pub fn fit_asymptotic_model(orders: &[f64], zeros: &[f64]) -> Result<ModelFit> {
    if orders.len() != zeros.len() {
        return Err(Error::Fitting(alloc::format!(
            "{} orders but {} zeros",
            orders.len(),
            zeros.len()
        )));
    }
    let mut distinct: Vec<f64> = orders.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    distinct.dedup();
    if distinct.len() < 8 {
        return Err(Error::Fitting(alloc::format!(
            "need at least 8 distinct orders, got {}",
            distinct.len()
        )));
    }
    let (lo, hi) = (distinct[0], distinct[distinct.len() - 1]);
    if !(lo > 0.0) || hi < 10.0 * lo {
        return Err(Error::Fitting(alloc::format!(
            "orders [{lo}, {hi}] span less than a decade"
        )));
    }
    let rows: Vec<[f64; 2]> = orders
        .iter()
        .map(|&nu| [nu.cbrt(), 1.0 / nu.cbrt()])
        .collect();
    let y: Vec<f64> = orders.iter().zip(zeros).map(|(nu, z)| z - nu).collect();
    let fit = least_squares(&rows, &y)?;
    let model = AsymptoticModel {
        alpha: fit.coefficients[0],
        beta: fit.coefficients[1],
        airy_zero: airy_first_zero(),
    };
    let residuals: Vec<f64> = orders
        .iter()
        .zip(zeros)
        .map(|(&nu, &z)| z - model.predict(nu))
        .collect();
    let max_scaled_residual = orders
        .iter()
        .zip(&residuals)
        .map(|(nu, r)| r.abs() * nu.powf(2.0 / 3.0))
        .fold(0.0, f64::max);
    Ok(ModelFit {
        model,
        residuals,
        max_scaled_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_zeros() {
        let m = AsymptoticModel::leading_order();
        assert_eq!(bessel_first_zero(0.5, &m).unwrap().zero, PI);
        let z = bessel_first_zero(1.5, &m).unwrap().zero;
        assert!((z - 4.493_409_457_909_064).abs() < 1e-11);
        let z = bessel_first_zero(2.5, &m).unwrap().zero;
        assert!((z - 5.763_459_196_894_55).abs() < 1e-11);
        assert!(bessel_first_zero(2.0, &m).is_err());
    }

    #[test]
    fn leading_coefficient() {
        let m = AsymptoticModel::leading_order();
        assert!((m.alpha - 1.855_757_081_489_239).abs() < 1e-12);
        assert_eq!(m.airy_alpha(), m.alpha);
    }

    #[test]
    fn exact_synthetic_recovery() {
        let orders: Vec<f64> = (0..12).map(|i| 10.0 * 1.5f64.powi(i)).collect();
        let zeros: Vec<f64> = orders.iter().map(|nu| nu + 2.0 * nu.cbrt()).collect();
        let fit = fit_asymptotic_model(&orders, &zeros).unwrap();
        assert!((fit.model.alpha - 2.0).abs() < 1e-10);
        assert!(fit.model.beta.abs() < 1e-10);
    }

    #[test]
    fn degenerate_designs_are_rejected() {
        let orders = [10.0; 10];
        let zeros = [12.0; 10];
        assert!(matches!(
            fit_asymptotic_model(&orders, &zeros),
            Err(Error::Fitting(_))
        ));
        let orders: Vec<f64> = (10..18).map(f64::from).collect();
        assert!(fit_asymptotic_model(&orders, &orders).is_err());
    }
}
