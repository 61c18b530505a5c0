//! First zeros of half-integer Bessel functions and their asymptotic model.

use ballnls_core::special::{bessel_first_zero, fit_asymptotic_model, AsymptoticModel, ZeroRecord};
use ballnls_core::Error;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::Params;
use crate::error::{invalid, CliResult};
use crate::report::{Artifacts, Table};

pub const ZEROS_FILE: &str = "zeros.csv";
pub const ZEROS_HEADER: [&str; 5] = ["nu", "zero", "prediction", "residual", "scaled_residual"];

/// Fewest orders accepted for the two-coefficient fit.
const MIN_FIT_ORDERS: usize = 3;

#[derive(Debug, Clone, Serialize)]
pub struct ZerosSettings {
    pub nu_min: f64,
    pub nu_max: f64,
    pub fit_min: f64,
}

impl ZerosSettings {
    pub fn resolve(p: &Params) -> CliResult<Self> {
        let s = Self {
            nu_min: p.nu_min.unwrap_or(0.5),
            nu_max: p.nu_max.unwrap_or(200.0),
            fit_min: p.fit_min.unwrap_or(10.0),
        };
        if s.orders().is_empty() {
            return Err(invalid!(
                "no half-integer order in [{}, {}]",
                s.nu_min,
                s.nu_max
            ));
        }
        Ok(s)
    }

    /// Half-integer orders `n + 1/2` in `[nu_min, nu_max]`.
    pub fn orders(&self) -> Vec<f64> {
        let first = (self.nu_min - 0.5).max(0.0).ceil() as usize;
        (first..)
            .map(|n| n as f64 + 0.5)
            .take_while(|&nu| nu <= self.nu_max)
            .collect()
    }
}

pub fn run(s: &ZerosSettings) -> CliResult<Artifacts> {
    let guide = AsymptoticModel::leading_order();
    let records = s
        .orders()
        .par_iter()
        .map(|&nu| bessel_first_zero(nu, &guide))
        .collect::<Result<Vec<ZeroRecord>, _>>()?;

    let (fit_orders, fit_zeros): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.order >= s.fit_min)
        .map(|r| (r.order, r.zero))
        .unzip();
    // A fit range that cannot separate the two coefficients falls back to
    // the leading-order model.
    let fit = if fit_orders.len() >= MIN_FIT_ORDERS {
        match fit_asymptotic_model(&fit_orders, &fit_zeros) {
            Ok(f) => Some(f.model),
            Err(Error::Fitting(_)) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let (model, fitted) = fit.map_or((guide, false), |m| (m, true));

    let mut table = Table::new(ZEROS_FILE, &ZEROS_HEADER);
    let mut max_scaled = 0.0f64;
    for r in records.iter().map(|r| r.with_model(&model)) {
        if r.order >= s.fit_min {
            max_scaled = max_scaled.max(r.scaled_residual().abs());
        }
        table.push(vec![
            r.order.into(),
            r.zero.into(),
            r.prediction.into(),
            r.residual.into(),
            r.scaled_residual().into(),
        ]);
    }
    let results = json!({
        "orders": records.len(),
        "fitted": fitted,
        "fit_orders": fit_orders.len(),
        "alpha": model.alpha,
        "beta": model.beta,
        "airy_zero": model.airy_zero,
        "airy_alpha": model.airy_alpha(),
        "alpha_error": (model.alpha - model.airy_alpha()).abs(),
        "max_scaled_residual": max_scaled,
    });
    Ok(Artifacts {
        tables: vec![table],
        documents: Vec::new(),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_are_half_integers_in_range() {
        let s = ZerosSettings {
            nu_min: 1.0,
            nu_max: 4.0,
            fit_min: 10.0,
        };
        assert_eq!(s.orders(), vec![1.5, 2.5, 3.5]);
        let empty = Params {
            nu_min: Some(0.6),
            nu_max: Some(1.2),
            ..Params::default()
        };
        assert!(ZerosSettings::resolve(&empty).is_err());
    }

    #[test]
    fn short_range_falls_back_to_leading_order() {
        let a = run(&ZerosSettings {
            nu_min: 0.5,
            nu_max: 5.0,
            fit_min: 10.0,
        })
        .unwrap();
        assert_eq!(a.results["fitted"], false);
        assert_eq!(a.results["beta"], 0.0);
        assert_eq!(a.tables[0].rows.len(), 5);
    }
}
