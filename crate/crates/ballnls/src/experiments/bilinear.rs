//! Bilinear eigenfunction bounds, the space-time flow norm and Bessel products.

use std::f64::consts::PI;

use ballnls_core::bilinear::{
    bessel_pair_integral, bessel_single_norm, flat_block_field, flow_bilinear_norm,
    grad_pair_product_norm, pair_product_norm, random_phase_block_field,
};
use ballnls_core::eigenbasis::{DyadicBlock, RadialGrid};
use ballnls_core::regression::ScalingReport;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{band, SweepDocument};
use crate::config::{BilinearKind, Params};
use crate::error::{invalid, CliResult};
use crate::report::{Artifacts, Table};

pub const PAIR_FILE: &str = "bilinear_pair.csv";
pub const GRAD_FILE: &str = "bilinear_grad.csv";
pub const GRID_HEADER: [&str; 4] = ["k", "l", "norm", "ratio"];
pub const FLOW_FILE: &str = "bilinear_flow.csv";
pub const FLOW_HEADER: [&str; 3] = ["n", "norm", "ratio"];
pub const FLOW_RANDOM_FILE: &str = "bilinear_flow_random.csv";
pub const FLOW_RANDOM_HEADER: [&str; 4] = ["n", "trial", "norm", "ratio"];
pub const SINGLE_FILE: &str = "bessel_single.csv";
pub const SINGLE_HEADER: [&str; 3] = ["nu", "single_norm", "scaled"];
pub const BESSEL_PAIR_FILE: &str = "bessel_pair.csv";
pub const BESSEL_PAIR_HEADER: [&str; 4] = ["nu", "p", "pair_integral", "scaled"];
pub const BESSEL_SWEEP_FILE: &str = "bessel_sweep.json";

/// Subleading power `ν^{−2/3}` absorbed in the Bessel fits.
pub const BESSEL_CORRECTION: f64 = 2.0 / 3.0;

/// Default orders of the Bessel sweeps, `ν ∈ [10, 200]`.
pub const BESSEL_ORDERS: [f64; 10] = [
    10.5, 14.5, 20.5, 28.5, 40.5, 56.5, 80.5, 112.5, 160.5, 200.5,
];

#[derive(Debug, Clone, Serialize)]
pub struct BilinearSettings {
    pub kind: BilinearKind,
    pub k_max: usize,
    pub samples: usize,
    pub delta: f64,
    pub sizes: Vec<f64>,
    pub trials: usize,
    pub seed: Option<u64>,
}

impl BilinearSettings {
    pub fn resolve(p: &Params) -> CliResult<Self> {
        let kind = p.kind.unwrap_or(BilinearKind::Pair);
        let default_sizes = match kind {
            BilinearKind::Bessel => BESSEL_ORDERS.to_vec(),
            _ => vec![16.0, 32.0, 64.0, 128.0, 256.0],
        };
        let s = Self {
            kind,
            k_max: p.k_max.unwrap_or(512),
            samples: p.samples.unwrap_or(64),
            delta: p.delta.unwrap_or(1.2),
            sizes: p.sizes.clone().unwrap_or(default_sizes),
            trials: p.trials.unwrap_or(0),
            seed: p.seed,
        };
        if s.samples > s.k_max {
            return Err(invalid!(
                "samples = {} exceeds k_max = {}",
                s.samples,
                s.k_max
            ));
        }
        if s.sizes.len() < 4 {
            return Err(invalid!("need at least 4 sizes, got {}", s.sizes.len()));
        }
        if s.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid!("sizes must be strictly increasing"));
        }
        if kind == BilinearKind::Bessel && s.sizes.iter().any(|&nu| (nu - 0.5).fract() != 0.0) {
            return Err(invalid!("Bessel orders must be half-integers"));
        }
        if s.trials > 0 && s.seed.is_none() {
            return Err(invalid!("a seed is required when trials > 0"));
        }
        Ok(s)
    }

    /// Sampled mode indices `⌈k_max·i/samples⌉`, `i = 1..=samples`.
    pub fn indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (1..=self.samples)
            .map(|i| (self.k_max * i).div_ceil(self.samples))
            .collect();
        v.dedup();
        v
    }
}

pub fn run(s: &BilinearSettings) -> CliResult<Artifacts> {
    match s.kind {
        BilinearKind::Pair | BilinearKind::Grad => run_grid(s),
        BilinearKind::Flow => run_flow(s),
        BilinearKind::Bessel => run_bessel(s),
    }
}

fn run_grid(s: &BilinearSettings) -> CliResult<Artifacts> {
    let grid = RadialGrid::sine(4 * s.k_max)?;
    let idx = s.indices();
    let pairs: Vec<(usize, usize)> = idx
        .iter()
        .flat_map(|&k| idx.iter().map(move |&l| (k, l)))
        .collect();
    let gradient = s.kind == BilinearKind::Grad;
    let rows = pairs
        .par_iter()
        .map(|&(k, l)| {
            let m = k.min(l) as f64;
            if gradient {
                let v = grad_pair_product_norm(k, l, &grid)?;
                Ok((k, l, v, v / (k as f64 * m.sqrt())))
            } else {
                let v = pair_product_norm(k, l, &grid)?;
                Ok((k, l, v, v * v / m))
            }
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut table = Table::new(if gradient { GRAD_FILE } else { PAIR_FILE }, &GRID_HEADER);
    for &(k, l, v, r) in &rows {
        table.push(vec![k.into(), l.into(), v.into(), r.into()]);
    }
    let (lo, hi) = band(rows.iter().map(|r| r.3));
    let mut results = json!({
        "kind": s.kind,
        "pairs": rows.len(),
        "min_ratio": lo,
        "max_ratio": hi,
        "band_ratio": hi / lo,
    });
    if !gradient {
        let top = *idx.last().expect("at least one index");
        let diag = rows
            .iter()
            .find(|r| r.0 == top && r.1 == top)
            .map(|r| r.3)
            .unwrap_or(f64::NAN);
        results["diagonal_ratio"] = json!(diag);
        results["diagonal_limit"] = json!(PI / 4.0);
        results["diagonal_error"] = json!((diag / (PI / 4.0) - 1.0).abs());
    }
    Ok(Artifacts {
        tables: vec![table],
        documents: Vec::new(),
        results,
    })
}

/// Flow norm of one field with itself on `[N, δN]`, normalized by `√N`.
fn flow_ratio(n: f64, delta: f64, seed: Option<u64>) -> CliResult<(f64, f64)> {
    let block = DyadicBlock::new(n, delta)?;
    let cutoff = *block.indices().end();
    if block.indices().is_empty() {
        return Err(invalid!("block [{n}, {}] contains no modes", block.upper()));
    }
    let grid = RadialGrid::sine(4 * cutoff)?;
    let u = match seed {
        None => flat_block_field(&block, cutoff)?,
        Some(seed) => random_phase_block_field(&block, cutoff, seed)?,
    };
    let v = flow_bilinear_norm(&u, &block, &u, &block, &grid)?;
    Ok((v, v / n.sqrt()))
}

fn run_flow(s: &BilinearSettings) -> CliResult<Artifacts> {
    let flat = s
        .sizes
        .par_iter()
        .map(|&n| flow_ratio(n, s.delta, None))
        .collect::<CliResult<Vec<_>>>()?;
    let mut table = Table::new(FLOW_FILE, &FLOW_HEADER);
    for (&n, &(v, r)) in s.sizes.iter().zip(&flat) {
        table.push(vec![n.into(), v.into(), r.into()]);
    }
    let samples: Vec<(f64, f64)> = s
        .sizes
        .iter()
        .zip(&flat)
        .map(|(&n, &(v, _))| (n, v))
        .collect();
    let report = ScalingReport::from_samples(samples, 0.5, None)?;
    let mut results = json!({
        "kind": s.kind,
        "delta": s.delta,
        "claimed_exponent": 0.5,
        "fitted_exponent": report.fitted_exponent,
        "half_width": report.half_width,
        "band_ratio": report.band_ratio(),
        "max_ratio": report.max_ratio,
    });
    let mut tables = vec![table];

    if s.trials > 0 {
        let base = s.seed.expect("validated");
        let cells: Vec<(usize, usize)> = (0..s.sizes.len())
            .flat_map(|i| (0..s.trials).map(move |t| (i, t)))
            .collect();
        let random = cells
            .par_iter()
            .map(|&(i, t)| flow_ratio(s.sizes[i], s.delta, Some(base.wrapping_add(t as u64))))
            .collect::<CliResult<Vec<_>>>()?;
        let mut t = Table::new(FLOW_RANDOM_FILE, &FLOW_RANDOM_HEADER);
        for (&(i, trial), &(v, r)) in cells.iter().zip(&random) {
            t.push(vec![s.sizes[i].into(), trial.into(), v.into(), r.into()]);
        }
        tables.push(t);
        let worst = (0..s.sizes.len())
            .map(|i| {
                let m = cells
                    .iter()
                    .zip(&random)
                    .filter(|(c, _)| c.0 == i)
                    .map(|(_, r)| r.0)
                    .fold(0.0, f64::max);
                (s.sizes[i], m)
            })
            .collect();
        let rr = ScalingReport::from_samples(worst, 0.5, None)?;
        results["random"] = json!({
            "trials": s.trials,
            "seed": base,
            "fitted_exponent": rr.fitted_exponent,
            "half_width": rr.half_width,
            "max_ratio": rr.max_ratio,
        });
    }
    Ok(Artifacts {
        tables,
        documents: Vec::new(),
        results,
    })
}

fn fit_json(r: &ScalingReport) -> Value {
    json!({
        "claimed_exponent": r.claimed_exponent,
        "fitted_exponent": r.fitted_exponent,
        "half_width": r.half_width,
        "band_ratio": r.band_ratio(),
    })
}

fn run_bessel(s: &BilinearSettings) -> CliResult<Artifacts> {
    let orders = &s.sizes;
    let singles = orders
        .par_iter()
        .map(|&nu| bessel_single_norm(nu))
        .collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<(f64, f64)> = orders
        .iter()
        .enumerate()
        .flat_map(|(i, &nu)| orders[i..].iter().map(move |&p| (nu, p)))
        .collect();
    let pairs = cells
        .par_iter()
        .map(|&(nu, p)| bessel_pair_integral(nu, p))
        .collect::<Result<Vec<_>, _>>()?;

    let mut single_table = Table::new(SINGLE_FILE, &SINGLE_HEADER);
    for (&nu, &v) in orders.iter().zip(&singles) {
        single_table.push(vec![nu.into(), v.into(), (v * nu.powf(4.0 / 3.0)).into()]);
    }
    let mut pair_table = Table::new(BESSEL_PAIR_FILE, &BESSEL_PAIR_HEADER);
    for (&(nu, p), &v) in cells.iter().zip(&pairs) {
        pair_table.push(vec![
            nu.into(),
            p.into(),
            v.into(),
            (v * nu.powf(2.0 / 3.0) * p.powf(4.0 / 3.0)).into(),
        ]);
    }

    let pair_at = |nu: f64, p: f64| {
        cells
            .iter()
            .position(|c| *c == (nu, p))
            .map(|i| pairs[i])
            .expect("sampled cell")
    };
    let corr = Some(BESSEL_CORRECTION);
    let single = ScalingReport::from_samples(
        orders
            .iter()
            .copied()
            .zip(singles.iter().copied())
            .collect(),
        -4.0 / 3.0,
        corr,
    )?;
    let diagonal = ScalingReport::from_samples(
        orders.iter().map(|&nu| (nu, pair_at(nu, nu))).collect(),
        -2.0,
        corr,
    )?;
    let lowest = orders[0];
    let off: Vec<(f64, f64)> = orders[1..]
        .iter()
        .map(|&p| (p, pair_at(lowest, p)))
        .collect();
    let off_diagonal = ScalingReport::from_samples(off, -4.0 / 3.0, corr)?;
    let normalized = ScalingReport::from_samples(
        orders
            .iter()
            .zip(&singles)
            .map(|(&nu, &sn)| (nu, pair_at(nu, nu) / (sn * sn)))
            .collect(),
        2.0 / 3.0,
        corr,
    )?;
    let (lo, hi) = band(
        cells
            .iter()
            .zip(&pairs)
            .map(|(&(nu, p), v)| v * nu.powf(2.0 / 3.0) * p.powf(4.0 / 3.0)),
    );

    let results = json!({
        "kind": s.kind,
        "correction": BESSEL_CORRECTION,
        "single": fit_json(&single),
        "diagonal_pair": fit_json(&diagonal),
        "off_diagonal_pair": { "order": lowest, "fit": fit_json(&off_diagonal) },
        "normalized_pair": fit_json(&normalized),
        "pair_scaled_min": lo,
        "pair_scaled_max": hi,
        "pair_scaled_band": hi / lo,
    });
    let doc = SweepDocument::new("normalized_bessel_pair", &normalized, corr);
    Ok(Artifacts {
        tables: vec![single_table, pair_table],
        documents: vec![(BESSEL_SWEEP_FILE.to_string(), doc.to_value())],
        results,
    })
}
