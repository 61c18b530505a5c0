//! Radial Dirichlet eigenfunctions of the unit ball, spectral fields and the
//! transforms between coefficients and grid values.
//!
//! The normalized radial eigenfunctions are `e_k(r) = sin(kπr) / (r √(2π))`
//! with eigenvalue `k²π²`; normalization is with respect to the ball volume
//! element `4π r² dr`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::RangeInclusive;
#[allow(unused_imports)] // shadowed by std float methods when std is linked
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::quadrature::gauss_legendre;

/// `1/√(2π)`.
pub const NORMALIZATION: f64 = 0.398_942_280_401_432_7;

/// Largest admissible block ratio δ.
pub const MAX_BLOCK_RATIO: f64 = 1.2247;

/// Value of the `k`-th normalized eigenfunction at radius `r ∈ (0, 1]`.
pub fn eigenfunction_value(k: usize, r: f64) -> Result<f64> {
    if k == 0 {
        return Err(domain!("mode index must be positive"));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain!("radius {r} outside (0, 1]"));
    }
    Ok(mode_value(k, r))
}

/// Unchecked evaluation, continuous at `r = 0`.
#[inline]
pub(crate) fn mode_value(k: usize, r: f64) -> f64 {
    let x = k as f64 * PI * r;
    if r == 1.0 {
        return 0.0;
    }
    if x.abs() < 1e-4 {
        let x2 = x * x;
        k as f64 * PI * NORMALIZATION * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        x.sin() / r * NORMALIZATION
    }
}

/// Radial derivative `∂_r e_k(r) = (kπ/r)(cos kπr − sin kπr/(kπr))/√(2π)`.
pub fn eigenfunction_derivative(k: usize, r: f64) -> Result<f64> {
    if k == 0 {
        return Err(domain!("mode index must be positive"));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(domain!("radius {r} outside (0, 1]"));
    }
    let kp = k as f64 * PI;
    Ok(kp / r * NORMALIZATION * cos_minus_sinc(kp * r))
}

/// `cos x − sin x / x`, with a series where cancellation bites.
#[inline]
pub(crate) fn cos_minus_sinc(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        x2 * (-1.0 / 3.0 + x2 * (1.0 / 30.0 - x2 / 840.0))
    } else {
        x.cos() - x.sin() / x
    }
}

/// Eigenvalue `k²π²` of the Dirichlet Laplacian for mode `k`.
pub fn eigenvalue(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(domain!("mode index must be positive"));
    }
    let kp = k as f64 * PI;
    Ok(kp * kp)
}

/// Complex amplitudes `c_1, …, c_K` of a radial function.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain!("a field needs at least one mode"));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(domain!("non-finite coefficient"));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(cutoff: usize) -> Result<Self> {
        Self::new(alloc::vec![Complex64::new(0.0, 0.0); cutoff])
    }

    /// Field with a single nonzero amplitude at mode `k`.
    pub fn single(k: usize, cutoff: usize, amplitude: Complex64) -> Result<Self> {
        if k == 0 || k > cutoff {
            return Err(domain!("mode {k} outside 1..={cutoff}"));
        }
        let mut f = Self::zeros(cutoff)?;
        f.coeffs[k - 1] = amplitude;
        Ok(f)
    }

    /// Field built from `(mode, amplitude)` pairs.
    pub fn from_modes(cutoff: usize, modes: &[(usize, Complex64)]) -> Result<Self> {
        let mut f = Self::zeros(cutoff)?;
        for &(k, c) in modes {
            if k == 0 || k > cutoff {
                return Err(domain!("mode {k} outside 1..={cutoff}"));
            }
            f.coeffs[k - 1] += c;
        }
        Ok(f)
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Amplitude of mode `k` (zero beyond the cutoff).
    pub fn coeff(&self, k: usize) -> Complex64 {
        if k == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(k - 1).copied().unwrap_or_default()
    }

    /// `L²(B)` norm, i.e. the ℓ² norm of the coefficients.
    pub fn mass(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Copy truncated or zero-padded to a new cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(cutoff, Complex64::new(0.0, 0.0));
        Self::new(coeffs)
    }

    /// ℓ² distance between coefficient vectors, padding the shorter one.
    pub fn distance(&self, other: &Self) -> f64 {
        let n = self.cutoff().max(other.cutoff());
        (1..=n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `H^s` distance, padding the shorter field.
    pub fn sobolev_distance(&self, other: &Self, s: f64) -> f64 {
        let n = self.cutoff().max(other.cutoff());
        (1..=n)
            .map(|k| {
                let lam = (k as f64 * PI).powi(2);
                lam.powf(s) * (self.coeff(k) - other.coeff(k)).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.cutoff().max(other.cutoff());
        Self {
            coeffs: (1..=n).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    /// Indices `k` with `c_k ≠ 0`.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(i, _)| i + 1)
    }
}

/// Exact Schrödinger propagator: `c_k ↦ e^{−i k²π² t} c_k`.
pub fn linear_flow(field: &SpectralField, t: f64) -> SpectralField {
    let pt = PI * t;
    let coeffs = field
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| c * phase(((i + 1) * (i + 1)) as f64, pt))
        .collect();
    SpectralField { coeffs }
}

/// `e^{−iπ q s}` with the multiple of π reduced modulo 2 before scaling, so
/// that integer phases are hit exactly.
#[inline]
pub(crate) fn phase(q: f64, s: f64) -> Complex64 {
    let turns = q * s;
    let reduced = turns - 2.0 * (turns * 0.5).round();
    let angle = -PI * reduced;
    Complex64::new(angle.cos(), angle.sin())
}

/// `(Σ_k (k²π²)^s |c_k|²)^{1/2}`.
pub fn sobolev_norm(field: &SpectralField, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(domain!("regularity index {s} must be nonnegative"));
    }
    let sum: f64 = field
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let lam = ((i + 1) as f64 * PI).powi(2);
            let w = if s == 0.0 { 1.0 } else { lam.powf(s) };
            w * c.norm_sqr()
        })
        .sum();
    Ok(sum.sqrt())
}

/// Which node family a [`RadialGrid`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// `r_j = j/(M+1)`, `w_j = 1/(M+1)`: exact discrete sine orthogonality.
    Sine,
    /// Composite 16-point Gauss–Legendre panels.
    GaussLegendre,
}

const PANEL_NODES: usize = 16;

/// Quadrature nodes and weights on (0, 1) for `∫₀¹ · dr`.
///
/// `resolution` is the highest frequency (in units of π) the grid integrates
/// reliably; for the sine grid it is also the node count.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    resolution: usize,
    kind: GridKind,
}

impl RadialGrid {
    pub fn sine(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(domain!("grid needs at least one node"));
        }
        let h = 1.0 / (m + 1) as f64;
        let nodes = (1..=m).map(|j| j as f64 * h).collect();
        let weights = alloc::vec![h; m];
        Ok(Self {
            nodes,
            weights,
            resolution: m,
            kind: GridKind::Sine,
        })
    }

    /// Composite Gauss–Legendre grid resolving frequencies up to `m·π`.
    ///
    /// Panels have width at most `8/(mπ)`, which keeps the 16-point rule
    /// accurate to roughly machine precision for `sin(mπr)`-type integrands.
    pub fn gauss_legendre(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(domain!("grid resolution must be positive"));
        }
        let panels = ((m as f64 * PI / 8.0).ceil() as usize).max(1);
        let (x, w) = gauss_legendre(PANEL_NODES);
        let h = 1.0 / panels as f64;
        let mut nodes = Vec::with_capacity(panels * PANEL_NODES);
        let mut weights = Vec::with_capacity(panels * PANEL_NODES);
        for p in 0..panels {
            let a = p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(a + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        Ok(Self {
            nodes,
            weights,
            resolution: m,
            kind: GridKind::GaussLegendre,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Error unless `resolution ≥ required`.
    pub fn require(&self, required: usize) -> Result<()> {
        if self.resolution < required {
            Err(Error::Resolution {
                resolution: self.resolution,
                required,
            })
        } else {
            Ok(())
        }
    }

    /// `4π Σ_j w_j f(r_j) r_j²`.
    pub fn ball_integral<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        4.0 * PI
            * self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(&r, &w)| w * f(r) * r * r)
                .sum::<f64>()
    }
}

/// Eigenfunction values tabulated on a grid, reused across transforms.
#[derive(Debug, Clone)]
pub struct BasisTable {
    grid: RadialGrid,
    cutoff: usize,
    // values[(k-1) * len + j] = e_k(r_j)
    values: Vec<f64>,
    // 4π w_j r_j²
    measure: Vec<f64>,
}

impl BasisTable {
    pub fn new(grid: &RadialGrid, cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(domain!("cutoff must be positive"));
        }
        grid.require(2 * cutoff)?;
        let n = grid.len();
        let mut values = Vec::with_capacity(cutoff * n);
        for k in 1..=cutoff {
            values.extend(grid.nodes.iter().map(|&r| mode_value(k, r)));
        }
        let measure = grid
            .nodes
            .iter()
            .zip(&grid.weights)
            .map(|(&r, &w)| 4.0 * PI * w * r * r)
            .collect();
        Ok(Self {
            grid: grid.clone(),
            cutoff,
            values,
            measure,
        })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `e_k(r_j)` for all nodes.
    pub fn mode(&self, k: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[(k - 1) * n..k * n]
    }

    /// `4π w_j r_j²`.
    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn synthesize(&self, field: &SpectralField) -> Result<Vec<Complex64>> {
        if field.cutoff() > self.cutoff {
            return Err(Error::Resolution {
                resolution: self.grid.resolution,
                required: 2 * field.cutoff(),
            });
        }
        let n = self.grid.len();
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
        for (i, &c) in field.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            for (o, &e) in out.iter_mut().zip(self.mode(i + 1)) {
                *o += c * e;
            }
        }
        Ok(out)
    }

    /// Projection onto `e_1..e_K` of `cutoff` modes.
    pub fn analyze(&self, values: &[Complex64], cutoff: usize) -> Result<SpectralField> {
        if values.len() != self.grid.len() {
            return Err(domain!(
                "{} values supplied for a grid of {} nodes",
                values.len(),
                self.grid.len()
            ));
        }
        if cutoff > self.cutoff {
            return Err(Error::Resolution {
                resolution: self.grid.resolution,
                required: 2 * cutoff,
            });
        }
        let weighted: Vec<Complex64> = values
            .iter()
            .zip(&self.measure)
            .map(|(v, &m)| v * m)
            .collect();
        let coeffs = (1..=cutoff)
            .map(|k| {
                weighted
                    .iter()
                    .zip(self.mode(k))
                    .fold(Complex64::new(0.0, 0.0), |acc, (v, &e)| acc + v * e)
            })
            .collect();
        SpectralField::new(coeffs)
    }
}

/// Grid values `u(r_j) = Σ c_k e_k(r_j)`.
pub fn synthesize(field: &SpectralField, grid: &RadialGrid) -> Result<Vec<Complex64>> {
    BasisTable::new(grid, field.cutoff())?.synthesize(field)
}

/// Coefficients `c_k = 4π Σ_j w_j u(r_j) e_k(r_j) r_j²` for `k = 1..=cutoff`.
pub fn analyze(values: &[Complex64], grid: &RadialGrid, cutoff: usize) -> Result<SpectralField> {
    BasisTable::new(grid, cutoff)?.analyze(values, cutoff)
}

/// `(4π Σ_j w_j |u(r_j)|^p r_j²)^{1/p}` for `p ∈ {2, 4, 6}`.
pub fn lp_norm_on_ball(field: &SpectralField, p: u32, grid: &RadialGrid) -> Result<f64> {
    if !matches!(p, 2 | 4 | 6) {
        return Err(domain!("unsupported exponent {p}"));
    }
    grid.require(p as usize * field.cutoff())?;
    let support: Vec<(usize, Complex64)> = field.support().map(|k| (k, field.coeff(k))).collect();
    let integral = grid.ball_integral(|r| {
        let u = support
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &(k, c)| {
                acc + c * mode_value(k, r)
            });
        u.norm_sqr().powi(p as i32 / 2)
    });
    Ok(integral.powf(1.0 / p as f64))
}

/// Frequency window `[N, δN]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicBlock {
    base: f64,
    ratio: f64,
}

impl DyadicBlock {
    pub fn new(base: f64, ratio: f64) -> Result<Self> {
        if !(base > 0.0) || !base.is_finite() {
            return Err(domain!("block base {base} must be positive"));
        }
        if !(ratio > 1.0 && ratio <= MAX_BLOCK_RATIO) {
            return Err(domain!(
                "block ratio {ratio} outside (1, {MAX_BLOCK_RATIO}]"
            ));
        }
        Ok(Self { base, ratio })
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn upper(&self) -> f64 {
        self.base * self.ratio
    }

    /// Whether the real number `x` lies in `[N, δN]`.
    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.bounds();
        x >= lo && x <= hi
    }

    // Relative slack so that products like 5 × 1.2 land on the integer.
    fn bounds(&self) -> (f64, f64) {
        let eps = 1e-12 * self.upper().max(1.0);
        (self.base - eps, self.upper() + eps)
    }

    /// Integers `k` with `N ≤ k ≤ δN`; may be empty.
    pub fn indices(&self) -> RangeInclusive<usize> {
        let (lo, hi) = self.bounds();
        let lo = (lo.ceil().max(0.0)) as usize;
        let hi = hi.floor() as usize;
        #[allow(clippy::reversed_empty_ranges)]
        if hi < lo.max(1) {
            return 1..=0;
        }
        lo.max(1)..=hi
    }

    /// Integers `k` with `N ≤ k < δN`, for partitioning a sweep.
    pub fn indices_half_open(&self) -> RangeInclusive<usize> {
        let (lo, _) = self.bounds();
        let lo = (lo.ceil().max(1.0)) as usize;
        let hi_exclusive = (self.upper() - 1e-12 * self.upper().max(1.0)).ceil() as usize;
        #[allow(clippy::reversed_empty_ranges)]
        if hi_exclusive <= lo {
            return 1..=0;
        }
        lo..=hi_exclusive - 1
    }

    /// Support restriction: field with modes outside the block zeroed.
    pub fn restrict(&self, field: &SpectralField) -> SpectralField {
        let range = self.indices();
        let coeffs = field
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if range.contains(&(i + 1)) {
                    c
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        SpectralField { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eigenfunction_examples() {
        assert_eq!(eigenfunction_value(1, 1.0).unwrap(), 0.0);
        assert!((eigenfunction_value(1, 0.5).unwrap() - 0.797_884_560_802_865_4).abs() < 1e-15);
        assert!(eigenfunction_value(3, 1.0 / 3.0).unwrap().abs() < 1e-15);
        assert!(eigenfunction_value(0, 0.5).is_err());
        assert!(eigenfunction_value(1, 0.0).is_err());
        assert!(eigenfunction_value(1, 1.5).is_err());
        // continuous extension at the origin
        assert!((mode_value(2, 1e-9) - 2.0 * PI * NORMALIZATION).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues() {
        assert!((eigenvalue(1).unwrap() - PI * PI).abs() < 1e-14);
        assert!((eigenvalue(10).unwrap() - 100.0 * PI * PI).abs() < 1e-11);
        assert!(eigenvalue(0).is_err());
    }

    #[test]
    fn linear_flow_phases() {
        let f = SpectralField::single(1, 4, c(1.0)).unwrap();
        let g = linear_flow(&f, 1.0 / PI);
        assert!((g.coeff(1) - c(-1.0)).norm() < 1e-15);
        let h =
            SpectralField::from_modes(8, &[(3, c(0.5)), (8, Complex64::new(0.0, 2.0))]).unwrap();
        assert_eq!(linear_flow(&h, 0.0), h);
        assert!(linear_flow(&h, 2.0 / PI).distance(&h) < 1e-13);
    }

    #[test]
    fn sobolev_examples() {
        let f = SpectralField::single(1, 2, c(1.0)).unwrap();
        assert_eq!(sobolev_norm(&f, 0.0).unwrap(), 1.0);
        assert!((sobolev_norm(&f, 1.0).unwrap() - PI).abs() < 1e-14);
        let g = SpectralField::from_modes(2, &[(1, c(1.0)), (2, c(1.0))]).unwrap();
        assert!((sobolev_norm(&g, 1.0).unwrap() - PI * 5f64.sqrt()).abs() < 1e-13);
        assert!(sobolev_norm(&g, -0.5).is_err());
    }

    #[test]
    fn single_mode_round_trip_on_both_grids() {
        for grid in [
            RadialGrid::sine(64).unwrap(),
            RadialGrid::gauss_legendre(64).unwrap(),
        ] {
            let f = SpectralField::single(2, 16, c(1.0)).unwrap();
            let v = synthesize(&f, &grid).unwrap();
            let back = analyze(&v, &grid, 16).unwrap();
            assert!((back.coeff(2) - c(1.0)).norm() < 1e-12);
            for k in (1..=16).filter(|&k| k != 2) {
                assert!(back.coeff(k).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn under_resolved_grid_is_rejected() {
        let grid = RadialGrid::sine(30).unwrap();
        let f = SpectralField::zeros(16).unwrap();
        assert!(matches!(
            synthesize(&f, &grid),
            Err(Error::Resolution { .. })
        ));
        assert!(matches!(
            lp_norm_on_ball(&f, 2, &grid),
            Err(Error::Resolution { .. })
        ));
        assert!(lp_norm_on_ball(&f, 3, &RadialGrid::sine(64).unwrap()).is_err());
    }

    #[test]
    fn grid_weights() {
        let gl = RadialGrid::gauss_legendre(40).unwrap();
        assert!((gl.weights().iter().sum::<f64>() - 1.0).abs() < 1e-13);
        assert!(gl.nodes().iter().all(|&r| r > 0.0 && r < 1.0));
        let s = RadialGrid::sine(40).unwrap();
        assert!((s.weights().iter().sum::<f64>() - 40.0 / 41.0).abs() < 1e-14);
    }

    #[test]
    fn l2_norm_of_mode_is_one() {
        let grid = RadialGrid::gauss_legendre(64).unwrap();
        let f = SpectralField::single(5, 8, c(1.0)).unwrap();
        assert!((lp_norm_on_ball(&f, 2, &grid).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blocks() {
        let b = DyadicBlock::new(5.0, 1.2).unwrap();
        assert_eq!(b.indices(), 5..=6);
        assert_eq!(b.indices_half_open(), 5..=5);
        let tiny = DyadicBlock::new(0.3, 1.2).unwrap();
        assert!(tiny.indices().is_empty());
        let one = DyadicBlock::new(1.0, 1.2).unwrap();
        assert_eq!(one.indices(), 1..=1);
        assert!(DyadicBlock::new(10.0, 1.3).is_err());
        assert!(DyadicBlock::new(10.0, 1.0).is_err());
    }
}
