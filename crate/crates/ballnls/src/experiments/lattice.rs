//! Λ and Γ counting profiles over pairs of δ-adic blocks.

use ballnls_core::eigenbasis::DyadicBlock;
use ballnls_core::lattice::{
    block_orders, compare_sources, gamma_max_count, gamma_profile_from_orders, lambda_profile,
    CountProfile, OrderBlock, ZeroSource,
};
use ballnls_core::regression::ScalingReport;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{zero_model, SweepDocument};
use crate::config::{LatticeMode, Params, SourceName};
use crate::error::{invalid, CliResult};
use crate::report::{Artifacts, Table};

pub const PROFILE_FILE: &str = "lattice_profile.csv";
pub const PROFILE_HEADER: [&str; 2] = ["tau", "count"];
pub const SWEEP_FILE: &str = "lattice_sweep.csv";
pub const SWEEP_HEADER: [&str; 3] = ["n", "max_count", "ratio"];
pub const GAMMA_SWEEP_FILE: &str = "gamma_sweep.json";
pub const LAMBDA_SWEEP_FILE: &str = "lambda_sweep.json";

/// Growth exponent each count is compared against: `min(N,L)^{2/3}` for Γ
/// and a small power standing in for `min(N,L)^ε` for Λ.
pub fn claimed_exponent(mode: LatticeMode) -> f64 {
    match mode {
        LatticeMode::Gamma => 2.0 / 3.0,
        LatticeMode::Lambda => 0.25,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeSettings {
    pub mode: LatticeMode,
    pub n: f64,
    pub l: f64,
    pub delta: f64,
    pub source: SourceName,
    pub compare: bool,
    pub sizes: Option<Vec<f64>>,
}

impl LatticeSettings {
    pub fn resolve(p: &Params) -> CliResult<Self> {
        let n = p.n.unwrap_or(500.0);
        let s = Self {
            mode: p.mode.unwrap_or(LatticeMode::Gamma),
            n,
            l: p.l.unwrap_or(n),
            delta: p.delta.unwrap_or(1.2),
            source: p.source.unwrap_or(SourceName::Exact),
            compare: p.compare.unwrap_or(false),
            sizes: p.sizes.clone(),
        };
        if s.mode == LatticeMode::Lambda && s.source != SourceName::Exact {
            return Err(invalid!(
                "the Λ count uses integer frequencies; no zero source applies"
            ));
        }
        if let Some(sizes) = &s.sizes {
            if sizes.len() < 3 {
                return Err(invalid!(
                    "a sweep needs at least 3 sizes, got {}",
                    sizes.len()
                ));
            }
            if sizes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid!("sizes must be strictly increasing"));
            }
        }
        Ok(s)
    }
}

pub fn zero_source(name: SourceName) -> CliResult<ZeroSource> {
    Ok(match name {
        SourceName::Exact => ZeroSource::Exact,
        SourceName::Model => ZeroSource::Model(zero_model()?),
        SourceName::Quadric => ZeroSource::Quadric(zero_model()?),
    })
}

fn order_pair(
    n: &DyadicBlock,
    l: &DyadicBlock,
    source: &ZeroSource,
) -> CliResult<(OrderBlock, OrderBlock)> {
    let a = block_orders(n, source)?;
    let b = if n == l {
        a.clone()
    } else {
        block_orders(l, source)?
    };
    Ok((a, b))
}

/// Largest count over τ for `N = L = size`.
pub fn max_count(mode: LatticeMode, size: f64, delta: f64, source: &ZeroSource) -> CliResult<u32> {
    let block = DyadicBlock::new(size, delta)?;
    Ok(match mode {
        LatticeMode::Lambda => lambda_profile(&block, &block).max_count,
        LatticeMode::Gamma => {
            let orders = block_orders(&block, source)?;
            gamma_max_count(&orders, &orders)
        }
    })
}

/// Fitted growth of the maximal count over `N = L ∈ sizes`.
pub fn sweep(
    mode: LatticeMode,
    sizes: &[f64],
    delta: f64,
    source: &ZeroSource,
) -> CliResult<ScalingReport> {
    let counts = sizes
        .par_iter()
        .map(|&n| max_count(mode, n, delta, source))
        .collect::<CliResult<Vec<_>>>()?;
    let samples = sizes
        .iter()
        .zip(counts)
        .map(|(&n, c)| (n, c as f64))
        .collect();
    Ok(ScalingReport::from_samples(
        samples,
        claimed_exponent(mode),
        None,
    )?)
}

fn profile_json(profile: &CountProfile, claimed: f64) -> Value {
    let ties: Vec<Value> = profile
        .ties
        .iter()
        .map(|t| json!({"n": t.n, "p": t.p, "value": t.value}))
        .collect();
    json!({
        "max_count": profile.max_count,
        "exponent_ratio": profile.max_count as f64 / profile.n_base.min(profile.l_base).powf(claimed),
        "claimed_exponent": claimed,
        "argmax": profile.argmax,
        "total": profile.total(),
        "distinct_tau": profile.counts.len(),
        "ties": ties,
    })
}

pub fn run(s: &LatticeSettings) -> CliResult<Artifacts> {
    let claimed = claimed_exponent(s.mode);
    let nb = DyadicBlock::new(s.n, s.delta)?;
    let lb = DyadicBlock::new(s.l, s.delta)?;
    let source = zero_source(s.source)?;

    let (profile, orders) = match s.mode {
        LatticeMode::Lambda => (lambda_profile(&nb, &lb), None),
        LatticeMode::Gamma => {
            let (a, b) = order_pair(&nb, &lb, &source)?;
            (gamma_profile_from_orders(&a, &b), Some((a, b)))
        }
    };
    let mut profile_table = Table::new(PROFILE_FILE, &PROFILE_HEADER);
    for &(tau, c) in &profile.counts {
        profile_table.push(vec![tau.into(), c.into()]);
    }
    let mut results = profile_json(&profile, claimed);
    results["mode"] = json!(s.mode);

    if s.compare {
        let Some((a, b)) = &orders else {
            return Err(invalid!("source comparison applies to the Γ count only"));
        };
        let other_name = if s.source == SourceName::Exact {
            SourceName::Model
        } else {
            s.source
        };
        let (ea, eb) = if s.source == SourceName::Exact {
            (a.clone(), b.clone())
        } else {
            order_pair(&nb, &lb, &ZeroSource::Exact)?
        };
        let (ma, mb) = if s.source == SourceName::Exact {
            order_pair(&nb, &lb, &zero_source(other_name)?)?
        } else {
            (a.clone(), b.clone())
        };
        let cmp = compare_sources((&ea, &eb), (&ma, &mb));
        results["compare"] = json!({
            "against": other_name,
            "consistent": cmp.consistent,
            "max_square_deviation": cmp.max_square_deviation,
            "ties": cmp.ties.len(),
            "differing_tau": cmp.differing,
        });
    }

    let mut tables = vec![profile_table];
    let mut documents = Vec::new();
    if let Some(sizes) = &s.sizes {
        let report = sweep(s.mode, sizes, s.delta, &source)?;
        let mut t = Table::new(SWEEP_FILE, &SWEEP_HEADER);
        for &(n, c) in &report.samples {
            t.push(vec![
                n.into(),
                (c as i64).into(),
                (c / n.powf(claimed)).into(),
            ]);
        }
        tables.push(t);
        let (file, quantity) = match s.mode {
            LatticeMode::Gamma => (GAMMA_SWEEP_FILE, "gamma_max_count"),
            LatticeMode::Lambda => (LAMBDA_SWEEP_FILE, "lambda_max_count"),
        };
        let doc = SweepDocument::new(quantity, &report, None);
        results["sweep"] = json!({
            "fitted_exponent": report.fitted_exponent,
            "half_width": report.half_width,
            "band_ratio": report.band_ratio(),
            "max_ratio": report.max_ratio,
        });
        documents.push((file.to_string(), doc.to_value()));
    }
    Ok(Artifacts {
        tables,
        documents,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_profile_run() {
        let p = Params {
            mode: Some(LatticeMode::Lambda),
            n: Some(64.0),
            ..Params::default()
        };
        let a = run(&LatticeSettings::resolve(&p).unwrap()).unwrap();
        assert_eq!(a.results["max_count"], 2);
        assert!(a.documents.is_empty());
    }

    #[test]
    fn lambda_rejects_zero_sources_and_comparisons() {
        let p = Params {
            mode: Some(LatticeMode::Lambda),
            source: Some(SourceName::Model),
            ..Params::default()
        };
        assert!(LatticeSettings::resolve(&p).is_err());
        let p = Params {
            mode: Some(LatticeMode::Lambda),
            n: Some(32.0),
            compare: Some(true),
            ..Params::default()
        };
        assert!(run(&LatticeSettings::resolve(&p).unwrap()).is_err());
    }

    #[test]
    fn sweep_writes_document() {
        let p = Params {
            mode: Some(LatticeMode::Lambda),
            n: Some(16.0),
            sizes: Some(vec![16.0, 32.0, 64.0, 128.0]),
            ..Params::default()
        };
        let a = run(&LatticeSettings::resolve(&p).unwrap()).unwrap();
        assert_eq!(a.tables[1].rows.len(), 4);
        assert_eq!(a.documents[0].0, LAMBDA_SWEEP_FILE);
    }
}
