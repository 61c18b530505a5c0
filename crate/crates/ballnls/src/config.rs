//! Run configuration: a JSON document whose fields are overridden by flags.

use std::path::{Path, PathBuf};

use ballnls_core::eigenbasis::MAX_BLOCK_RATIO;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CliError, CliResult};

/// Seed used when neither the document nor the flags provide one.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Simulate,
    Bilinear,
    Zeros,
    Lattice,
    Strichartz,
    #[value(name = "report-zn1")]
    #[serde(rename = "report-zn1")]
    ReportZn1,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::Bilinear => "bilinear",
            Experiment::Zeros => "zeros",
            Experiment::Lattice => "lattice",
            Experiment::Strichartz => "strichartz",
            Experiment::ReportZn1 => "report-zn1",
        }
    }

    /// Experiments that draw random numbers.
    pub fn is_monte_carlo(self, params: &Params) -> bool {
        self == Experiment::Bilinear && params.trials.unwrap_or(0) > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    Strang,
    Yoshida4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BilinearKind {
    Pair,
    Grad,
    Flow,
    Bessel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeMode {
    Lambda,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SourceName {
    Exact,
    Model,
    Quadric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BesselModeName {
    Measured,
    Zeroed,
}

/// Initial amplitude of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub k: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl std::str::FromStr for ModeSpec {
    type Err = String;

    /// `k:re` or `k:re:im`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(format!("expected k:re[:im], got {s:?}"));
        }
        let k = parts[0]
            .parse()
            .map_err(|e| format!("mode index {:?}: {e}", parts[0]))?;
        let re = parts[1]
            .parse()
            .map_err(|e| format!("real part {:?}: {e}", parts[1]))?;
        let im = match parts.get(2) {
            Some(p) => p
                .parse()
                .map_err(|e| format!("imaginary part {p:?}: {e}"))?,
            None => 0.0,
        };
        Ok(ModeSpec { k, re, im })
    }
}

/// Every tunable parameter. Absent fields take per-experiment defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub delta: Option<f64>,
    pub seed: Option<u64>,
    pub sizes: Option<Vec<f64>>,
    pub grid: Option<usize>,
    pub tolerance: Option<f64>,

    pub k: Option<usize>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub scheme: Option<SchemeName>,
    pub focusing: Option<bool>,
    pub output_every: Option<usize>,
    pub modes: Option<Vec<ModeSpec>>,

    pub kind: Option<BilinearKind>,
    pub k_max: Option<usize>,
    pub samples: Option<usize>,
    pub trials: Option<usize>,

    pub nu_min: Option<f64>,
    pub nu_max: Option<f64>,
    pub fit_min: Option<f64>,

    pub mode: Option<LatticeMode>,
    pub n: Option<f64>,
    pub l: Option<f64>,
    pub source: Option<SourceName>,
    pub compare: Option<bool>,

    pub p: Option<u32>,

    pub gamma_sweep: Option<PathBuf>,
    pub bessel_sweep: Option<PathBuf>,
    pub bessel_mode: Option<BesselModeName>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),* $(,)?) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl Params {
    /// Fields set in `top` replace those in `self`.
    pub fn overlay(&mut self, top: &Params) {
        overlay!(self, top;
            delta, seed, sizes, grid, tolerance, k, dt, t_final, scheme, focusing, output_every,
            modes, kind, k_max, samples, trials, nu_min, nu_max, fit_min, mode, n, l, source,
            compare, p, gamma_sweep, bessel_sweep, bessel_mode);
    }
}

/// The configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub params: Params,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("ballnls-out")
}

fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            params: Params::default(),
            output_dir: default_output_dir(),
        }
    }

    pub fn from_json(text: &str, origin: &Path) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|source| CliError::Json {
            path: origin.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, path)
    }

    /// Fills the seed for Monte Carlo runs and checks the shared invariants.
    pub fn finalize(mut self) -> CliResult<Self> {
        if self.experiment.is_monte_carlo(&self.params) && self.params.seed.is_none() {
            self.params.seed = Some(DEFAULT_SEED);
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> CliResult<()> {
        let p = &self.params;
        if let Some(d) = p.delta {
            if !(d > 1.0 && d <= MAX_BLOCK_RATIO) {
                return Err(invalid!("delta = {d} must lie in (1, {MAX_BLOCK_RATIO}]"));
            }
        }
        if self.experiment.is_monte_carlo(p) && p.seed.is_none() {
            return Err(invalid!("a seed is required for Monte Carlo runs"));
        }
        if let Some(sizes) = &p.sizes {
            if sizes.is_empty() || sizes.iter().any(|&s| !positive(s)) {
                return Err(invalid!(
                    "sizes must be a non-empty list of positive numbers"
                ));
            }
        }
        for (name, v) in [
            ("dt", p.dt),
            ("t_final", p.t_final),
            ("tolerance", p.tolerance),
            ("n", p.n),
            ("l", p.l),
        ] {
            if let Some(v) = v {
                if !positive(v) {
                    return Err(invalid!("{name} = {v} must be positive"));
                }
            }
        }
        for (name, v) in [
            ("k", p.k),
            ("k_max", p.k_max),
            ("samples", p.samples),
            ("output_every", p.output_every),
            ("grid", p.grid),
        ] {
            if v == Some(0) {
                return Err(invalid!("{name} must be positive"));
            }
        }
        if let (Some(lo), Some(hi)) = (p.nu_min, p.nu_max) {
            if lo > hi {
                return Err(invalid!("nu_min = {lo} exceeds nu_max = {hi}"));
            }
        }
        if let Some(pp) = p.p {
            if !matches!(pp, 2 | 4 | 6) {
                return Err(invalid!("p = {pp} must be 2, 4 or 6"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_round_trip() {
        let text =
            r#"{"experiment": "lattice", "params": {"mode": "gamma", "n": 500, "delta": 1.2}}"#;
        let cfg = RunConfig::from_json(text, Path::new("cfg.json")).unwrap();
        assert_eq!(cfg.experiment, Experiment::Lattice);
        assert_eq!(cfg.params.mode, Some(LatticeMode::Gamma));
        assert_eq!(cfg.output_dir, PathBuf::from("ballnls-out"));
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"experiment": "zeros", "params": {"nu_maxx": 3}}"#;
        let err = RunConfig::from_json(text, Path::new("x")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn overlay_prefers_flags() {
        let mut base = Params {
            dt: Some(1e-2),
            k: Some(8),
            ..Params::default()
        };
        base.overlay(&Params {
            dt: Some(1e-3),
            ..Params::default()
        });
        assert_eq!((base.dt, base.k), (Some(1e-3), Some(8)));
    }

    #[test]
    fn delta_range_and_seed() {
        let mut cfg = RunConfig::new(Experiment::Lattice);
        cfg.params.delta = Some(1.3);
        assert!(cfg.validate().is_err());
        cfg.params.delta = Some(1.2247);
        assert!(cfg.validate().is_ok());
        let mut mc = RunConfig::new(Experiment::Bilinear);
        mc.params.trials = Some(4);
        assert!(mc.validate().is_err());
        assert_eq!(mc.finalize().unwrap().params.seed, Some(DEFAULT_SEED));
    }

    #[test]
    fn mode_spec_parsing() {
        assert_eq!(
            "2:0.3".parse::<ModeSpec>().unwrap(),
            ModeSpec {
                k: 2,
                re: 0.3,
                im: 0.0
            }
        );
        assert_eq!(
            "1:0.5:-1".parse::<ModeSpec>().unwrap(),
            ModeSpec {
                k: 1,
                re: 0.5,
                im: -1.0
            }
        );
        assert!("x".parse::<ModeSpec>().is_err());
    }
}
