//! Linear least squares and log–log exponent estimation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
#[allow(unused_imports)] // shadowed by std float methods when std is linked
use num_traits::Float;

/// Solution of an overdetermined linear system in the least-squares sense.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Standard errors of the coefficients (zero for an exact fit or when
    /// there are no spare degrees of freedom).
    pub std_errors: Vec<f64>,
}

/// Householder-QR least squares for `rows · β ≈ y`.
#[allow(clippy::needless_range_loop)]
pub fn least_squares<R: AsRef<[f64]>>(rows: &[R], y: &[f64]) -> Result<LeastSquares> {
    let m = rows.len();
    if m == 0 || m != y.len() {
        return Err(Error::Fitting(alloc::format!(
            "{m} rows for {} observations",
            y.len()
        )));
    }
    let p = rows[0].as_ref().len();
    if p == 0 || m < p || rows.iter().any(|r| r.as_ref().len() != p) {
        return Err(Error::Fitting(alloc::format!(
            "design of {m} rows cannot fit {p} columns"
        )));
    }
    // Column-major copy of the design and the right-hand side.
    let mut a: Vec<Vec<f64>> = (0..p)
        .map(|j| rows.iter().map(|r| r.as_ref()[j]).collect())
        .collect();
    let mut b = y.to_vec();
    let scale: f64 = a.iter().flatten().fold(0.0, |s, v| s.max(v.abs()));
    for j in 0..p {
        let norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 1e-12 * scale * (m as f64).sqrt()) {
            return Err(Error::Fitting("rank-deficient design".into()));
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        for col in a.iter_mut().skip(j) {
            let dot: f64 = v.iter().zip(&col[j..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in col[j..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        let dot: f64 = v.iter().zip(&b[j..]).map(|(x, y)| x * y).sum();
        let f = 2.0 * dot / vnorm2;
        for (c, vi) in b[j..].iter_mut().zip(&v) {
            *c -= f * vi;
        }
    }
    // Back substitution with R = upper p×p block of `a`.
    let mut coefficients = alloc::vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = b[i];
        for (k, coef) in coefficients.iter().enumerate().skip(i + 1) {
            s -= a[k][i] * coef;
        }
        coefficients[i] = s / a[i][i];
    }
    let residuals: Vec<f64> = rows
        .iter()
        .zip(y)
        .map(|(r, yi)| {
            yi - r
                .as_ref()
                .iter()
                .zip(&coefficients)
                .map(|(x, c)| x * c)
                .sum::<f64>()
        })
        .collect();
    let dof = m - p;
    let sigma2 = if dof > 0 {
        residuals.iter().map(|r| r * r).sum::<f64>() / dof as f64
    } else {
        0.0
    };
    // diag((RᵀR)⁻¹) = squared row norms of R⁻¹.
    let mut rinv = alloc::vec![alloc::vec![0.0; p]; p];
    for col in 0..p {
        for i in (0..=col).rev() {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in i + 1..=col {
                s -= a[k][i] * rinv[k][col];
            }
            rinv[i][col] = s / a[i][i];
        }
    }
    let std_errors = rinv
        .iter()
        .map(|row| (sigma2 * row.iter().map(|v| v * v).sum::<f64>()).sqrt())
        .collect();
    Ok(LeastSquares {
        coefficients,
        residuals,
        std_errors,
    })
}

/// Power law `value ≈ C · size^e`, optionally with a subleading factor
/// `exp(d · size^{−ω})` absorbing a known finite-size correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Two standard errors of the exponent.
    pub half_width: f64,
    pub constant: f64,
    pub correction: Option<(f64, f64)>,
}

pub fn fit_power_law(
    sizes: &[f64],
    values: &[f64],
    correction: Option<f64>,
) -> Result<PowerLawFit> {
    if sizes.len() != values.len() {
        return Err(Error::Fitting("sizes and values differ in length".into()));
    }
    if sizes
        .iter()
        .chain(values)
        .any(|v| !(*v > 0.0) || !v.is_finite())
    {
        return Err(Error::Fitting(
            "log–log fit needs positive finite data".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = sizes
        .iter()
        .map(|&s| {
            let mut r = alloc::vec![s.ln(), 1.0];
            if let Some(w) = correction {
                r.push(s.powf(-w));
            }
            r
        })
        .collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let fit = least_squares(&rows, &y)?;
    Ok(PowerLawFit {
        exponent: fit.coefficients[0],
        half_width: 2.0 * fit.std_errors[0],
        constant: fit.coefficients[1].exp(),
        correction: correction.map(|w| (w, fit.coefficients[2])),
    })
}

/// Sampled `(size, value)` pairs compared against a claimed power law.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub samples: Vec<(f64, f64)>,
    pub claimed_exponent: f64,
    pub fitted_exponent: f64,
    pub half_width: f64,
    /// `max value / size^claimed`.
    pub max_ratio: f64,
    /// `min value / size^claimed`.
    pub min_ratio: f64,
    /// Prefactor of the fitted power law.
    pub constant_estimate: f64,
}

impl ScalingReport {
    pub fn from_samples(
        samples: Vec<(f64, f64)>,
        claimed: f64,
        correction: Option<f64>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Fitting("no samples".into()));
        }
        if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::Fitting("sizes must be strictly increasing".into()));
        }
        let sizes: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let fit = fit_power_law(&sizes, &values, correction)?;
        let ratios = samples.iter().map(|(n, v)| v / n.powf(claimed));
        let (min_ratio, max_ratio) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        });
        Ok(Self {
            samples,
            claimed_exponent: claimed,
            fitted_exponent: fit.exponent,
            half_width: fit.half_width,
            max_ratio,
            min_ratio,
            constant_estimate: fit.constant,
        })
    }

    /// `max_ratio / min_ratio`.
    pub fn band_ratio(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }

    pub fn exponent_error(&self) -> f64 {
        (self.fitted_exponent - self.claimed_exponent).abs()
    }
}

/// Slope of `log max_trials(measure)` against `log size`.
///
/// `measure(size, trial)` is evaluated for every size and trial; the maximum
/// over trials is the sample value.
pub fn estimate_exponent<F>(
    sizes: &[f64],
    trials: usize,
    claimed: f64,
    correction: Option<f64>,
    mut measure: F,
) -> Result<ScalingReport>
where
    F: FnMut(f64, usize) -> Result<f64>,
{
    if sizes.len() < 4 {
        return Err(Error::Fitting(alloc::format!(
            "need at least 4 sizes, got {}",
            sizes.len()
        )));
    }
    if trials == 0 {
        return Err(Error::Fitting("need at least one trial per size".into()));
    }
    let mut samples = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let mut best = f64::NEG_INFINITY;
        for trial in 0..trials {
            best = best.max(measure(size, trial)?);
        }
        samples.push((size, best));
    }
    ScalingReport::from_samples(samples, claimed, correction)
}
