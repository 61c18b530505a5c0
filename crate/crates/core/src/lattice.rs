//! Counting lattice points `k² + l² = τ` and perturbed-quadric points
//! `|z_{n+1/2}² + z_{p+1/2}² − τ| ≤ 1/2`, together with the exponential-sum
//! machinery used to bound the latter: the smooth model `g` of squared zeros,
//! the counting function `S(x)`, its floor-sum form, Van der Corput ratios and
//! the truncated Fourier series of the fractional part.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::RangeInclusive;
#[allow(unused_imports)] // shadowed by std float methods when std is linked
use num_traits::Float;

use num_complex::Complex64;

use crate::eigenbasis::DyadicBlock;
use crate::error::{domain, Error, Result};
use crate::special::{bessel_first_zero, AsymptoticModel};

/// Per-τ counts for a pair of blocks, sorted by τ, zero counts omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct CountProfile {
    pub n_base: f64,
    pub l_base: f64,
    pub ratio: f64,
    pub counts: Vec<(i64, u32)>,
    pub max_count: u32,
    pub argmax: Option<i64>,
    /// Pairs on a window boundary `|s − τ| = 1/2`, counted in both windows.
    pub ties: Vec<Tie>,
}

impl CountProfile {
    fn from_counts(
        n: &DyadicBlock,
        l: &DyadicBlock,
        counts: Vec<(i64, u32)>,
        ties: Vec<Tie>,
    ) -> Self {
        let (max_count, argmax) =
            counts.iter().fold(
                (0, None),
                |(m, a), &(t, c)| if c > m { (c, Some(t)) } else { (m, a) },
            );
        Self {
            n_base: n.base(),
            l_base: l.base(),
            ratio: n.ratio(),
            counts,
            max_count,
            argmax,
            ties,
        }
    }

    pub fn count(&self, tau: i64) -> u32 {
        self.counts
            .binary_search_by_key(&tau, |e| e.0)
            .map(|i| self.counts[i].1)
            .unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|e| e.1 as u64).sum()
    }
}

/// A pair whose quadric value sits on (or, for source comparisons, near) a
/// window boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tie {
    pub n: usize,
    pub p: usize,
    pub value: f64,
}

fn run_lengths(mut taus: Vec<i64>) -> Vec<(i64, u32)> {
    taus.sort_unstable();
    let mut out: Vec<(i64, u32)> = Vec::new();
    for t in taus {
        match out.last_mut() {
            Some((last, c)) if *last == t => *c += 1,
            _ => out.push((t, 1)),
        }
    }
    out
}

/// Counts of `k² + l² = τ` for `k ∈ [N, δN]`, `l ∈ [L, δL]`.
pub fn lambda_profile(n: &DyadicBlock, l: &DyadicBlock) -> CountProfile {
    let ks = n.indices();
    let ls = l.indices();
    let mut taus = Vec::with_capacity(ks.clone().count() * ls.clone().count());
    for k in ks {
        for j in ls.clone() {
            taus.push((k * k + j * j) as i64);
        }
    }
    CountProfile::from_counts(n, l, run_lengths(taus), Vec::new())
}

/// Pairs `(k, l)` of the two blocks with `k² + l² = τ`.
pub fn lambda_pairs(n: &DyadicBlock, l: &DyadicBlock, tau: i64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in n.indices() {
        for j in l.indices() {
            if (k * k + j * j) as i64 == tau {
                out.push((k, j));
            }
        }
    }
    out
}

/// The smooth model `g(t) = t² + 2αt^{4/3} + (2β + α²)t^{2/3}` of `z_t²`.
pub fn g_function(t: f64, model: &AsymptoticModel) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain!("g needs a positive argument, got {t}"));
    }
    Ok(g_raw(t, model))
}

#[inline]
fn g_raw(t: f64, m: &AsymptoticModel) -> f64 {
    let c = t.cbrt();
    let c2 = c * c;
    t * t + 2.0 * m.alpha * t * c + (2.0 * m.beta + m.alpha * m.alpha) * c2
}

#[inline]
fn g_prime(t: f64, m: &AsymptoticModel) -> f64 {
    let c = t.cbrt();
    2.0 * t + 8.0 / 3.0 * m.alpha * c + 2.0 / 3.0 * (2.0 * m.beta + m.alpha * m.alpha) / c
}

/// `g⁻¹(y)` by safeguarded Newton on `[0, √y]`.
///
/// Requires `g` increasing on the bracket, which holds for `α > 0` and
/// `2β + α² > 0`.
pub fn g_inverse(y: f64, model: &AsymptoticModel) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(domain!("g⁻¹ needs a positive argument, got {y}"));
    }
    let (mut lo, mut hi) = (0.0, y.sqrt());
    let mut t = hi;
    for _ in 0..200 {
        let f = g_raw(t, model) - y;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let d = g_prime(t, model);
        let mut next = t - f / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * t.max(1.0) || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        t = next;
    }
    if hi - lo <= 1e-12 * hi.max(1.0) {
        Ok(0.5 * (lo + hi))
    } else {
        Err(Error::Accuracy(alloc::format!("g⁻¹({y}) did not converge")))
    }
}

/// Where the squared zeros of a Γ count come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroSource {
    /// Computed first zeros.
    Exact,
    /// Squares of `ν + αν^{1/3} + βν^{−1/3}`.
    Model(AsymptoticModel),
    /// The truncated expansion `g(ν)`, which drops the constant `2αβ`.
    Quadric(AsymptoticModel),
}

impl ZeroSource {
    fn square(&self, nu: f64, guide: &AsymptoticModel) -> Result<f64> {
        match self {
            ZeroSource::Exact => {
                let z = bessel_first_zero(nu, guide)?.zero;
                Ok(z * z)
            }
            ZeroSource::Model(m) => Ok(m.predict(nu).powi(2)),
            ZeroSource::Quadric(m) => Ok(g_raw(nu, m)),
        }
    }

    fn estimate(&self) -> AsymptoticModel {
        match self {
            ZeroSource::Exact => AsymptoticModel::leading_order(),
            ZeroSource::Model(m) | ZeroSource::Quadric(m) => *m,
        }
    }
}

/// Orders `n + 1/2` whose zero lies in a block, with the squared zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderBlock {
    pub block: DyadicBlock,
    pub degrees: Vec<usize>,
    pub squares: Vec<f64>,
}

impl OrderBlock {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn square_of(&self, n: usize) -> Option<f64> {
        self.degrees.binary_search(&n).ok().map(|i| self.squares[i])
    }
}

/// Selects degrees `n` with `z_{n+1/2} ∈ [N, δN]` under `source`.
pub fn block_orders(block: &DyadicBlock, source: &ZeroSource) -> Result<OrderBlock> {
    let (lo, hi) = (block.base(), block.upper());
    // The leading-order estimate is within one unit of the true zero, so a
    // margin of three degrees starts the scan below the block.
    let guide = source.estimate();
    let first = first_degree_reaching(lo, &guide).saturating_sub(3);
    if first > 0 && source.square(first as f64 + 0.5, &guide)?.sqrt() >= lo {
        return Err(Error::Search(alloc::format!(
            "order scan for block [{lo}, {hi}] started inside the block"
        )));
    }
    let mut degrees = Vec::new();
    let mut squares = Vec::new();
    let mut above = 0;
    let mut n = first;
    while above < 3 {
        let s = source.square(n as f64 + 0.5, &guide)?;
        let z = s.sqrt();
        if block.contains(z) {
            degrees.push(n);
            squares.push(s);
        } else if z > hi {
            above += 1;
        }
        n += 1;
    }
    Ok(OrderBlock {
        block: *block,
        degrees,
        squares,
    })
}

fn first_degree_reaching(target: f64, model: &AsymptoticModel) -> usize {
    let (mut lo, mut hi) = (0usize, (target.max(1.0) as usize) + 2);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if model.predict(mid as f64 + 0.5) < target {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

// Relative slack for treating |s − τ| = 1/2 as exact.
const BOUNDARY_EPS: f64 = 1e-12;

/// Integer windows containing `s`, i.e. τ with `|s − τ| ≤ 1/2`, and whether
/// `s` sits on a boundary within `band`.
#[inline]
fn windows(s: f64, band: f64) -> (i64, Option<i64>, bool) {
    let t = (s + 0.5).floor();
    let offset = s - t; // in [-1/2, 1/2)
    let tau = t as i64;
    if (offset + 0.5).abs() <= band {
        (tau, Some(tau - 1), true)
    } else if (offset - 0.5).abs() <= band {
        (tau, Some(tau + 1), true)
    } else {
        (tau, None, false)
    }
}

/// Γ profile for two order blocks.
pub fn gamma_profile_from_orders(a: &OrderBlock, b: &OrderBlock) -> CountProfile {
    let mut taus = Vec::with_capacity(a.len() * b.len());
    let mut ties = Vec::new();
    for (&n, &sn) in a.degrees.iter().zip(&a.squares) {
        for (&p, &sp) in b.degrees.iter().zip(&b.squares) {
            let s = sn + sp;
            let (tau, extra, tie) = windows(s, BOUNDARY_EPS * s.max(1.0));
            taus.push(tau);
            if let Some(t) = extra {
                taus.push(t);
            }
            if tie {
                ties.push(Tie { n, p, value: s });
            }
        }
    }
    CountProfile::from_counts(&a.block, &b.block, run_lengths(taus), ties)
}

/// Counts of `|z_{n+1/2}² + z_{p+1/2}² − τ| ≤ 1/2` over the two blocks.
pub fn gamma_profile(
    n: &DyadicBlock,
    l: &DyadicBlock,
    source: &ZeroSource,
) -> Result<CountProfile> {
    let a = block_orders(n, source)?;
    let b = block_orders(l, source)?;
    Ok(gamma_profile_from_orders(&a, &b))
}

/// Pairs of a Γ count at `τ`, re-evaluated from the squared zeros.
pub fn gamma_pairs(a: &OrderBlock, b: &OrderBlock, tau: i64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (&n, &sn) in a.degrees.iter().zip(&a.squares) {
        for (&p, &sp) in b.degrees.iter().zip(&b.squares) {
            let d = (sn + sp - tau as f64).abs();
            if d <= 0.5 * (1.0 + BOUNDARY_EPS) {
                out.push((n, p));
            }
        }
    }
    out
}

/// Maximum Γ count over τ without materializing the whole profile.
///
/// The larger block is swept in chunks of increasing squared zero; counts
/// below the smallest value any later chunk can reach are final and flushed.
pub fn gamma_max_count(a: &OrderBlock, b: &OrderBlock) -> u32 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.is_empty() || large.is_empty() {
        return 0;
    }
    let mut xs = small.squares.clone();
    let mut ys = large.squares.clone();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let chunk = (1usize << 18) / xs.len().max(1) + 1;
    let mut buffer: Vec<i64> = Vec::new();
    let mut best = 0;
    let mut start = 0;
    while start < ys.len() {
        let end = (start + chunk).min(ys.len());
        for &y in &ys[start..end] {
            for &x in &xs {
                let s = x + y;
                let (tau, extra, _) = windows(s, BOUNDARY_EPS * s.max(1.0));
                buffer.push(tau);
                if let Some(t) = extra {
                    buffer.push(t);
                }
            }
        }
        buffer.sort_unstable();
        let final_below = if end < ys.len() {
            (ys[end] + xs[0] - 1.0).floor() as i64
        } else {
            i64::MAX
        };
        let split = buffer.partition_point(|&t| t < final_below);
        let mut i = 0;
        while i < split {
            let mut j = i;
            while j < split && buffer[j] == buffer[i] {
                j += 1;
            }
            best = best.max((j - i) as u32);
            i = j;
        }
        buffer.drain(..split);
        start = end;
    }
    best
}

/// Agreement of Γ counts from two zero sources.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceComparison {
    /// Largest `|s_exact − s_model|` over a single order.
    pub max_square_deviation: f64,
    /// Pairs whose windows could differ between the sources.
    pub ties: Vec<Tie>,
    /// τ where the raw counts differ.
    pub differing: Vec<i64>,
    /// All differences are accounted for by ties.
    pub consistent: bool,
}

/// Compares Γ counts built from two sources over the same blocks.
///
/// A pair is a tie when it belongs to only one source's blocks, or when its
/// value under either source lies within twice the largest per-order square
/// deviation of a window boundary. With ties removed, the per-τ counts of
/// the two sources must coincide.
pub fn compare_sources(
    exact: (&OrderBlock, &OrderBlock),
    model: (&OrderBlock, &OrderBlock),
) -> SourceComparison {
    let deviation = |e: &OrderBlock, m: &OrderBlock| {
        e.degrees
            .iter()
            .zip(&e.squares)
            .filter_map(|(&n, &s)| m.square_of(n).map(|t| (s - t).abs()))
            .fold(0.0, f64::max)
    };
    let max_dev = deviation(exact.0, model.0).max(deviation(exact.1, model.1));
    let band = 2.0 * max_dev;

    let mut tie_set: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (this, other) in [(exact, model), (model, exact)] {
        for (&n, &sn) in this.0.degrees.iter().zip(&this.0.squares) {
            for (&p, &sp) in this.1.degrees.iter().zip(&this.1.squares) {
                let s = sn + sp;
                let shared = other.0.square_of(n).is_some() && other.1.square_of(p).is_some();
                let near = windows(s, band + BOUNDARY_EPS * s.max(1.0)).2;
                if !shared || near {
                    tie_set.entry((n, p)).or_insert(s);
                }
            }
        }
    }
    let recount = |(a, b): (&OrderBlock, &OrderBlock)| {
        let mut taus = Vec::new();
        for (&n, &sn) in a.degrees.iter().zip(&a.squares) {
            for (&p, &sp) in b.degrees.iter().zip(&b.squares) {
                if !tie_set.contains_key(&(n, p)) {
                    let s = sn + sp;
                    taus.push(windows(s, BOUNDARY_EPS * s.max(1.0)).0);
                }
            }
        }
        run_lengths(taus)
    };
    let consistent = recount(exact) == recount(model);

    let pe = gamma_profile_from_orders(exact.0, exact.1);
    let pm = gamma_profile_from_orders(model.0, model.1);
    let mut taus: Vec<i64> = pe.counts.iter().chain(&pm.counts).map(|e| e.0).collect();
    taus.sort_unstable();
    taus.dedup();
    let differing = taus
        .into_iter()
        .filter(|&t| pe.count(t) != pm.count(t))
        .collect();
    let ties = tie_set
        .into_iter()
        .map(|((n, p), value)| Tie { n, p, value })
        .collect();
    SourceComparison {
        max_square_deviation: max_dev,
        ties,
        differing,
        consistent,
    }
}

/// Degrees `n` with `n + 1/2 ∈ [N, δN]`.
pub fn half_shifted_indices(block: &DyadicBlock) -> RangeInclusive<usize> {
    let lo = (block.base() - 0.5).max(0.0).ceil() as usize;
    let hi_f = block.upper() - 0.5;
    if hi_f < lo as f64 {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    }
    lo..=(hi_f + 1e-12 * hi_f.max(1.0)).floor() as usize
}

/// `S(x)` by direct enumeration and by the floor-sum identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SCount {
    pub enumeration: u64,
    pub floor_sum: u64,
}

/// Admissible thresholds for `s_count` on a degree range.
pub fn s_count_range(degrees: &RangeInclusive<usize>, model: &AsymptoticModel) -> (f64, f64) {
    let top = *degrees.end() as f64 + 0.5;
    (g_raw(top, model) + g_raw(1.5, model), 1e15)
}

/// `#{(n, p) : n ∈ degrees, p ≥ 1, g(n+1/2) + g(p+1/2) ≤ x}`.
pub fn s_count(x: f64, degrees: RangeInclusive<usize>, model: &AsymptoticModel) -> Result<SCount> {
    if degrees.is_empty() {
        return Err(domain!("empty degree range"));
    }
    let (lo, hi) = s_count_range(&degrees, model);
    if !(x >= lo && x <= hi) {
        return Err(domain!("threshold {x} outside [{lo}, {hi}]"));
    }
    let mut enumeration = 0u64;
    let mut floor_sum = 0u64;
    for n in degrees {
        let gn = g_raw(n as f64 + 0.5, model);
        // enumeration: largest p with g(p + 1/2) ≤ x − g(n + 1/2)
        let rest = x - gn;
        let mut p = (rest.sqrt() as usize).max(1);
        while p > 0 && g_raw(p as f64 + 0.5, model) > rest {
            p -= 1;
        }
        while g_raw((p + 1) as f64 + 0.5, model) <= rest {
            p += 1;
        }
        enumeration += p as u64;
        let f = f_x(x, n as f64 + 0.5, model)?;
        if f >= 1.0 {
            floor_sum += f.floor() as u64;
        }
    }
    Ok(SCount {
        enumeration,
        floor_sum,
    })
}

/// `f_x(t) = g⁻¹(x − g(t)) − 1/2`.
pub fn f_x(x: f64, t: f64, model: &AsymptoticModel) -> Result<f64> {
    let rest = x - g_raw(t, model);
    if !(rest > 0.0) {
        return Err(domain!("x = {x} does not exceed g({t})"));
    }
    Ok(g_inverse(rest, model)? - 0.5)
}

/// Bands of `f_x` and its derivatives over `t ∈ [N, δN]`, normalized by the
/// scale `L = √x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBands {
    pub scale: f64,
    /// `f_x / L`
    pub value: (f64, f64),
    /// `−f_x' · L / N`
    pub slope: (f64, f64),
    /// `−f_x'' · L`
    pub curvature: (f64, f64),
    /// `∂_x f_x · L`
    pub sensitivity: (f64, f64),
    pub decreasing: bool,
    pub concave: bool,
}

fn widen(band: (f64, f64), v: f64) -> (f64, f64) {
    (band.0.min(v), band.1.max(v))
}

/// Samples `f_x` and central-difference derivatives on 33 points of the block.
pub fn f_x_derivatives_check(
    x: f64,
    block: &DyadicBlock,
    model: &AsymptoticModel,
) -> Result<DerivativeBands> {
    let (a, b) = (block.base(), block.upper());
    let scale = x.sqrt();
    let h = (0.05 * a).clamp(0.05, 1.0);
    let hx = 1e-6 * x;
    let empty = (f64::INFINITY, f64::NEG_INFINITY);
    let mut out = DerivativeBands {
        scale,
        value: empty,
        slope: empty,
        curvature: empty,
        sensitivity: empty,
        decreasing: true,
        concave: true,
    };
    let f = |xx: f64, t: f64| f_x(xx, t, model);
    for i in 0..=32 {
        let t = a + (b - a) * i as f64 / 32.0;
        let (fm, f0, fp) = (f(x, t - h)?, f(x, t)?, f(x, t + h)?);
        let d1 = (fp - fm) / (2.0 * h);
        let d2 = (fp - 2.0 * f0 + fm) / (h * h);
        let dx = (f(x + hx, t)? - f(x - hx, t)?) / (2.0 * hx);
        out.value = widen(out.value, f0 / scale);
        out.slope = widen(out.slope, -d1 * scale / a);
        out.curvature = widen(out.curvature, -d2 * scale);
        out.sensitivity = widen(out.sensitivity, dx * scale);
        out.decreasing &= d1 < 0.0;
        out.concave &= d2 < 0.0;
    }
    Ok(out)
}

/// `Σ_{n+1/2 ∈ [N, δN]} e^{2πi h f_x(n+1/2)}`.
pub fn exp_sum(x: f64, block: &DyadicBlock, h: i64, model: &AsymptoticModel) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for n in half_shifted_indices(block) {
        let f = f_x(x, n as f64 + 0.5, model)?;
        sum += unit_phase(h, f);
    }
    Ok(sum)
}

/// `e^{2πi h θ}` with the phase reduced before scaling.
#[inline]
fn unit_phase(h: i64, theta: f64) -> Complex64 {
    let ip = theta.floor();
    let fr = theta - ip;
    // h·⌊θ⌋ is an integer and drops out.
    let turns = h as f64 * fr;
    let turns = turns - turns.floor();
    let angle = 2.0 * PI * turns;
    Complex64::new(angle.cos(), angle.sin())
}

/// The exponential-sum estimate `N h^{1/2} L^{−1/2} + h^{−1/2} L^{1/2}`.
pub fn exp_sum_bound(n: f64, l: f64, h: f64) -> f64 {
    n * (h / l).sqrt() + (l / h).sqrt()
}

/// One cell of the Van der Corput sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdcRow {
    pub n: f64,
    pub l: f64,
    pub h: i64,
    pub sum_abs: f64,
    /// `h · min |f_x''|`
    pub lambda: f64,
    /// `max |f_x''| / min |f_x''|`
    pub eta: f64,
    pub bound: f64,
    pub ratio: f64,
    /// `min |f_x''| · L`
    pub curvature_scale: f64,
    /// `f_x''` kept a single sign on the block.
    pub band_ok: bool,
}

/// Van der Corput ratios over a sweep of `(N, L, h)`, with `x = g(N) + g(L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VdcReport {
    pub rows: Vec<VdcRow>,
    pub max_ratio: f64,
    /// Every row satisfied the curvature precondition.
    pub precondition_ok: bool,
}

pub fn vdc_bound_check(
    cells: &[(f64, f64)],
    hs: &[i64],
    ratio: f64,
    model: &AsymptoticModel,
) -> Result<VdcReport> {
    let mut rows = Vec::new();
    for &(n, l) in cells {
        let block = DyadicBlock::new(n, ratio)?;
        let x = g_raw(n, model) + g_raw(l, model);
        let (a, b) = (block.base(), block.upper());
        let step = 0.5f64.min(0.05 * a);
        let samples = 65;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        let mut band_ok = true;
        for i in 0..samples {
            let t = a + (b - a) * i as f64 / (samples - 1) as f64;
            let d2 = (f_x(x, t + step, model)? - 2.0 * f_x(x, t, model)?
                + f_x(x, t - step, model)?)
                / (step * step);
            band_ok &= d2 < 0.0;
            lo = lo.min(d2.abs());
            hi = hi.max(d2.abs());
        }
        for &h in hs {
            if h < 1 {
                return Err(domain!("frequency {h} must be at least 1"));
            }
            let sum_abs = exp_sum(x, &block, h, model)?.norm();
            let lambda = h as f64 * lo;
            let eta = hi / lo;
            let bound = eta * lambda.sqrt() * (b - a) + 1.0 / lambda.sqrt();
            rows.push(VdcRow {
                n,
                l,
                h,
                sum_abs,
                lambda,
                eta,
                bound,
                ratio: sum_abs / bound,
                curvature_scale: lo * l,
                band_ok,
            });
        }
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let precondition_ok = rows.iter().all(|r| r.band_ok);
    Ok(VdcReport {
        rows,
        max_ratio,
        precondition_ok,
    })
}

/// Frozen constant `C` of the fractional-part remainder bound.
pub const FRACTIONAL_CONSTANT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalCheck {
    pub theta: f64,
    pub truncation: usize,
    pub fractional_part: f64,
    pub approximation: f64,
    pub error: f64,
    pub bound: f64,
    pub within: bool,
}

/// `{θ}` against `1/2 − Σ_{h=1}^{H−1} sin(2πhθ)/(πh)`.
pub fn fractional_expansion_check(theta: f64, truncation: usize) -> Result<FractionalCheck> {
    if truncation < 2 {
        return Err(domain!("truncation must be at least 2"));
    }
    if !theta.is_finite() {
        return Err(domain!("theta must be finite"));
    }
    let fractional_part = theta - theta.floor();
    let mut series = 0.0;
    for h in 1..truncation {
        let turns = h as f64 * fractional_part;
        let turns = turns - turns.floor();
        series += (2.0 * PI * turns).sin() / (PI * h as f64);
    }
    let approximation = 0.5 - series;
    let error = (fractional_part - approximation).abs();
    let dist = fractional_part.min(1.0 - fractional_part);
    let envelope = if dist == 0.0 {
        1.0
    } else {
        (1.0 / (truncation as f64 * dist)).min(1.0)
    };
    let bound = FRACTIONAL_CONSTANT * envelope;
    Ok(FractionalCheck {
        theta,
        truncation,
        fractional_part,
        approximation,
        error,
        bound,
        within: error <= bound,
    })
}

/// Largest Γ count for one `(N, L)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ln2Cell {
    pub n: f64,
    pub l: f64,
    pub max_count: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ln2Report {
    pub cells: Vec<Ln2Cell>,
    /// `sup L/N²` over cells with a count of at least 2.
    pub sup_ratio: f64,
}

/// Γ maxima over `L = N·2^j` up to `max_factor·N²`.
pub fn ln2_relation_check(
    ns: &[f64],
    max_factor: f64,
    ratio: f64,
    source: &ZeroSource,
) -> Result<Ln2Report> {
    let mut cells = Vec::new();
    for &n in ns {
        let bn = DyadicBlock::new(n, ratio)?;
        let a = block_orders(&bn, source)?;
        let mut l = n;
        while l <= max_factor * n * n * (1.0 + 1e-12) {
            let bl = DyadicBlock::new(l, ratio)?;
            let b = block_orders(&bl, source)?;
            cells.push(Ln2Cell {
                n,
                l,
                max_count: gamma_max_count(&a, &b),
            });
            l *= 2.0;
        }
    }
    let sup_ratio = cells
        .iter()
        .filter(|c| c.max_count >= 2)
        .map(|c| c.l / (c.n * c.n))
        .fold(0.0, f64::max);
    Ok(Ln2Report { cells, sup_ratio })
}
