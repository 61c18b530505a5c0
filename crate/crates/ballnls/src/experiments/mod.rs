//! One module per subcommand. Each resolves its settings from [`Params`],
//! computes, and returns the files to write.

pub mod bilinear;
pub mod lattice;
pub mod simulate;
pub mod strichartz;
pub mod zeros;
pub mod zn1;

use std::sync::OnceLock;

use ballnls_core::regression::ScalingReport;
use ballnls_core::special::{bessel_first_zero, fit_asymptotic_model, AsymptoticModel, ModelFit};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Experiment, Params, RunConfig};
use crate::error::CliResult;
use crate::report::Artifacts;

/// Orders used to calibrate the zero model shared by the lattice experiments.
pub fn calibration_orders() -> Vec<f64> {
    (10..=500).step_by(10).map(|n| n as f64 + 0.5).collect()
}

/// Least-squares zero model fitted once per process on [`calibration_orders`].
pub fn zero_model_fit() -> CliResult<&'static ModelFit> {
    static FIT: OnceLock<ModelFit> = OnceLock::new();
    if let Some(fit) = FIT.get() {
        return Ok(fit);
    }
    let guide = AsymptoticModel::leading_order();
    let orders = calibration_orders();
    let zeros = orders
        .par_iter()
        .map(|&nu| bessel_first_zero(nu, &guide).map(|r| r.zero))
        .collect::<Result<Vec<_>, _>>()?;
    let fit = fit_asymptotic_model(&orders, &zeros)?;
    Ok(FIT.get_or_init(|| fit))
}

pub fn zero_model() -> CliResult<AsymptoticModel> {
    Ok(zero_model_fit()?.model)
}

/// `(min, max)` of a slice; `(inf, -inf)` when empty.
pub fn band(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// A fitted sweep as stored on disk for later reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub quantity: String,
    pub claimed_exponent: f64,
    pub correction: Option<f64>,
    pub samples: Vec<[f64; 2]>,
    pub fitted_exponent: f64,
    pub half_width: f64,
    pub constant_estimate: f64,
    pub band_ratio: f64,
}

impl SweepDocument {
    pub fn new(quantity: &str, report: &ScalingReport, correction: Option<f64>) -> Self {
        Self {
            quantity: quantity.to_string(),
            claimed_exponent: report.claimed_exponent,
            correction,
            samples: report.samples.iter().map(|&(x, y)| [x, y]).collect(),
            fitted_exponent: report.fitted_exponent,
            half_width: report.half_width,
            constant_estimate: report.constant_estimate,
            band_ratio: report.band_ratio(),
        }
    }

    /// Refits from the stored samples.
    pub fn to_report(&self) -> CliResult<ScalingReport> {
        let samples = self.samples.iter().map(|s| (s[0], s[1])).collect();
        Ok(ScalingReport::from_samples(
            samples,
            self.claimed_exponent,
            self.correction,
        )?)
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("sweep documents serialize")
    }
}

/// Resolved settings of a run, echoed into the summary.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Settings {
    Simulate(simulate::SimulateSettings),
    Bilinear(bilinear::BilinearSettings),
    Zeros(zeros::ZerosSettings),
    Lattice(lattice::LatticeSettings),
    Strichartz(strichartz::StrichartzSettings),
    ReportZn1(zn1::Zn1Settings),
}

#[derive(Debug, Clone, Serialize)]
pub struct EffectiveConfig {
    pub experiment: &'static str,
    pub output_dir: String,
    pub params: Settings,
}

/// Resolves settings and runs the experiment named in `config`.
pub fn execute(config: &RunConfig) -> CliResult<(EffectiveConfig, Artifacts)> {
    let p: &Params = &config.params;
    let (settings, artifacts) = match config.experiment {
        Experiment::Simulate => {
            let s = simulate::SimulateSettings::resolve(p)?;
            let a = simulate::run(&s)?;
            (Settings::Simulate(s), a)
        }
        Experiment::Bilinear => {
            let s = bilinear::BilinearSettings::resolve(p)?;
            let a = bilinear::run(&s)?;
            (Settings::Bilinear(s), a)
        }
        Experiment::Zeros => {
            let s = zeros::ZerosSettings::resolve(p)?;
            let a = zeros::run(&s)?;
            (Settings::Zeros(s), a)
        }
        Experiment::Lattice => {
            let s = lattice::LatticeSettings::resolve(p)?;
            let a = lattice::run(&s)?;
            (Settings::Lattice(s), a)
        }
        Experiment::Strichartz => {
            let s = strichartz::StrichartzSettings::resolve(p)?;
            let a = strichartz::run(&s)?;
            (Settings::Strichartz(s), a)
        }
        Experiment::ReportZn1 => {
            let s = zn1::Zn1Settings::resolve(p, &config.output_dir)?;
            let a = zn1::run(&s)?;
            (Settings::ReportZn1(s), a)
        }
    };
    let effective = EffectiveConfig {
        experiment: config.experiment.name(),
        output_dir: config.output_dir.display().to_string(),
        params: settings,
    };
    Ok((effective, artifacts))
}
