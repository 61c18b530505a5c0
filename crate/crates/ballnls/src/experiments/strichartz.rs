//! `L^p` growth of single eigenfunctions.

use ballnls_core::eigenbasis::{lp_norm_on_ball, RadialGrid, SpectralField};
use ballnls_core::regression::ScalingReport;
use ballnls_core::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::band;
use crate::config::Params;
use crate::error::{invalid, CliResult};
use crate::report::{Artifacts, Table};

pub const STRICHARTZ_FILE: &str = "strichartz.csv";
pub const STRICHARTZ_HEADER: [&str; 3] = ["n", "lp_norm", "ratio"];

#[derive(Debug, Clone, Serialize)]
pub struct StrichartzSettings {
    pub sizes: Vec<usize>,
    pub p: u32,
    /// Grid nodes per mode index; at least `p`.
    pub grid_factor: usize,
}

/// `‖e_n‖_{L^p} ~ n^{1 − 3/p}` for `p > 3`, bounded below that.
pub fn claimed_exponent(p: u32) -> f64 {
    (1.0 - 3.0 / p as f64).max(0.0)
}

/// Converts configured sizes to distinct, increasing mode indices.
pub fn integer_sizes(sizes: &[f64]) -> CliResult<Vec<usize>> {
    let mut out = Vec::with_capacity(sizes.len());
    for &s in sizes {
        if s.fract() != 0.0 || s < 1.0 {
            return Err(invalid!("size {s} must be a positive integer"));
        }
        out.push(s as usize);
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid!("sizes must be strictly increasing"));
    }
    Ok(out)
}

impl StrichartzSettings {
    pub fn resolve(p: &Params) -> CliResult<Self> {
        let sizes = match &p.sizes {
            Some(s) => integer_sizes(s)?,
            None => vec![16, 32, 64, 128, 256],
        };
        if sizes.len() < 3 {
            return Err(invalid!(
                "need at least 3 sizes for a fit, got {}",
                sizes.len()
            ));
        }
        let exponent = p.p.unwrap_or(6);
        let grid_factor = p.grid.unwrap_or(exponent as usize);
        if grid_factor < exponent as usize {
            return Err(invalid!(
                "grid factor {grid_factor} is below p = {exponent}"
            ));
        }
        Ok(Self {
            sizes,
            p: exponent,
            grid_factor,
        })
    }
}

pub fn run(s: &StrichartzSettings) -> CliResult<Artifacts> {
    let claimed = claimed_exponent(s.p);
    let norms = s
        .sizes
        .par_iter()
        .map(|&n| {
            let grid = RadialGrid::sine(s.grid_factor * n)?;
            let f = SpectralField::single(n, n, Complex64::new(1.0, 0.0))?;
            lp_norm_on_ball(&f, s.p, &grid)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let samples: Vec<(f64, f64)> = s.sizes.iter().map(|&n| n as f64).zip(norms).collect();

    let mut table = Table::new(STRICHARTZ_FILE, &STRICHARTZ_HEADER);
    for &(n, v) in &samples {
        table.push(vec![
            (n as usize).into(),
            v.into(),
            (v / n.powf(claimed)).into(),
        ]);
    }
    let top = s.sizes.last().copied().unwrap_or(1) as f64;
    let (lo, hi) = band(
        samples
            .iter()
            .filter(|e| e.0 >= top / 2.0)
            .map(|(n, v)| v / n.powf(claimed)),
    );
    let fit = ScalingReport::from_samples(samples, claimed, None)?;
    let results = json!({
        "p": s.p,
        "claimed_exponent": claimed,
        "fitted_exponent": fit.fitted_exponent,
        "half_width": fit.half_width,
        "band_ratio": fit.band_ratio(),
        "top_octave_variation": hi / lo - 1.0,
    });
    Ok(Artifacts {
        tables: vec![table],
        documents: Vec::new(),
        results,
    })
}
