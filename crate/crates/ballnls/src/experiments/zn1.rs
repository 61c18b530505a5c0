//! Assembly of the measured exponents into the regularity index.

use std::path::{Path, PathBuf};

use ballnls_core::bilinear::{zn1_exponent_report, BesselMode, GAMMA_THRESHOLD};
use ballnls_core::Error;
use serde::Serialize;
use serde_json::json;

use super::bilinear::BESSEL_SWEEP_FILE;
use super::lattice::GAMMA_SWEEP_FILE;
use super::SweepDocument;
use crate::config::{BesselModeName, Params};
use crate::error::{CliError, CliResult};
use crate::report::{Artifacts, Cell, Table};

pub const ZN1_FILE: &str = "zn1.csv";
pub const ZN1_HEADER: [&str; 3] = ["component", "exponent", "half_width"];

/// Accepted distance between `total / 2` and its target.
pub const HALF_TOTAL_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct Zn1Settings {
    pub gamma_sweep: PathBuf,
    pub bessel_sweep: PathBuf,
    pub bessel_mode: BesselModeName,
}

impl Zn1Settings {
    pub fn resolve(p: &Params, output_dir: &Path) -> CliResult<Self> {
        Ok(Self {
            gamma_sweep: p
                .gamma_sweep
                .clone()
                .unwrap_or_else(|| output_dir.join(GAMMA_SWEEP_FILE)),
            bessel_sweep: p
                .bessel_sweep
                .clone()
                .unwrap_or_else(|| output_dir.join(BESSEL_SWEEP_FILE)),
            bessel_mode: p.bessel_mode.unwrap_or(BesselModeName::Measured),
        })
    }
}

/// Reads a cached sweep; a missing file is an unmet dependency.
pub fn load_sweep(path: &Path) -> CliResult<SweepDocument> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(
                Error::Dependency(format!("cached sweep {} not found", path.display())).into(),
            );
        }
        Err(e) => return Err(CliError::io(path, e)),
    };
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn run(s: &Zn1Settings) -> CliResult<Artifacts> {
    let mode = match s.bessel_mode {
        BesselModeName::Measured => BesselMode::Measured,
        BesselModeName::Zeroed => BesselMode::Zeroed,
    };
    let gamma = load_sweep(&s.gamma_sweep)?.to_report()?;
    let bessel = match mode {
        BesselMode::Measured => Some(load_sweep(&s.bessel_sweep)?.to_report()?),
        BesselMode::Zeroed => None,
    };
    let r = zn1_exponent_report(Some(&gamma), bessel.as_ref(), mode)?;

    let mut table = Table::new(ZN1_FILE, &ZN1_HEADER);
    for (name, e, w) in [
        ("gamma", r.gamma_exponent, r.gamma_half_width),
        ("bessel", r.bessel_exponent, r.bessel_half_width),
        ("cited", r.cited_exponent, 0.0),
        ("total", r.total, r.gamma_half_width + r.bessel_half_width),
        (
            "half_total",
            r.half_total,
            0.5 * (r.gamma_half_width + r.bessel_half_width),
        ),
    ] {
        table.push(vec![Cell::Text(name), e.into(), w.into()]);
    }
    let results = json!({
        "bessel_mode": s.bessel_mode,
        "gamma_exponent": r.gamma_exponent,
        "gamma_half_width": r.gamma_half_width,
        "bessel_exponent": r.bessel_exponent,
        "bessel_half_width": r.bessel_half_width,
        "cited_exponent": r.cited_exponent,
        "total": r.total,
        "half_total": r.half_total,
        "claimed_half_total": r.claimed_half_total,
        "deviation": r.deviation(),
        "within_tolerance": r.deviation() <= HALF_TOTAL_TOLERANCE,
        "gamma_threshold": GAMMA_THRESHOLD,
        "threshold_flag": r.threshold_flag,
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
    use ballnls_core::regression::ScalingReport;

    fn write_doc(dir: &Path, name: &str, exponent: f64) -> PathBuf {
        let samples: Vec<(f64, f64)> = [10.0f64, 20.0, 40.0, 80.0]
            .iter()
            .map(|&n| (n, n.powf(exponent)))
            .collect();
        let doc = SweepDocument::new(
            name,
            &ScalingReport::from_samples(samples, exponent, None).unwrap(),
            None,
        );
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        path
    }

    #[test]
    fn exact_power_laws_reproduce_the_target() {
        let dir = tempfile::tempdir().unwrap();
        let s = Zn1Settings {
            gamma_sweep: write_doc(dir.path(), "g", 2.0 / 3.0),
            bessel_sweep: write_doc(dir.path(), "b", 2.0 / 3.0),
            bessel_mode: BesselModeName::Measured,
        };
        let a = run(&s).unwrap();
        assert!(a.results["deviation"].as_f64().unwrap() < 1e-10);
        assert_eq!(a.results["threshold_flag"], false);
    }

    #[test]
    fn missing_sweep_is_a_dependency_error() {
        let dir = tempfile::tempdir().unwrap();
        let s = Zn1Settings::resolve(&Params::default(), dir.path()).unwrap();
        let err = run(&s).unwrap_err();
        assert!(matches!(err, CliError::Numerical(Error::Dependency(_))));
        assert_eq!(err.exit_code(), 2);
    }
}
