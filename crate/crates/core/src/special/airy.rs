//! Airy function `Ai` and its derivative on `|x| ≤ 20`.
//!
//! Maclaurin series on `|x| ≤ 8`, summed in double-double arithmetic because
//! the terms grow to ~3e6 before cancelling down to `Ai(8) ≈ 2.5e-7`; the
//! standard asymptotic expansions beyond.

use core::f64::consts::PI;

use crate::error::{domain, Result};
#[allow(unused_imports)] // shadowed by std float methods when std is linked
use num_traits::Float;

/// Supported argument window `|x| ≤ AIRY_WINDOW`.
pub const AIRY_WINDOW: f64 = 20.0;

const SERIES_LIMIT: f64 = 8.0;

// Ai(0) and −Ai'(0) split into high and low parts.
const C1: Dd = Dd(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const C2: Dd = Dd(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

#[derive(Debug, Clone, Copy)]
struct Dd(f64, f64);

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    fn from(a: f64) -> Self {
        Dd(a, 0.0)
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.0, o.0);
        let e = e + self.1 + o.1;
        let (hi, lo) = two_sum(s, e);
        Dd(hi, lo)
    }

    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.0, o.0);
        let e = e + (self.0 * o.1 + self.1 * o.0);
        let (hi, lo) = two_sum(p, e);
        Dd(hi, lo)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q = self.0 / d;
        let (p, e) = two_prod(q, d);
        let r = (self.0 - p - e + self.1) / d;
        let (hi, lo) = two_sum(q, r);
        Dd(hi, lo)
    }

    fn to_f64(self) -> f64 {
        self.0 + self.1
    }
}

/// The two power series `f`, `g` with `Ai = c1 f − c2 g`, and their derivatives.
fn maclaurin(x: f64) -> (Dd, Dd, Dd, Dd) {
    let xd = Dd::from(x);
    let x2 = xd.mul(xd);
    let x3 = x2.mul(xd);

    let mut f = Dd::from(1.0);
    let mut g = xd;
    let mut df = Dd::from(0.0);
    let mut dg = Dd::from(1.0);

    let mut tf = Dd::from(1.0); // x^{3k} term of f
    let mut tg = xd; // x^{3k+1} term of g
    let mut tdf = x2.div_f64(2.0); // x^{3k-1} term of f', k ≥ 1
    let mut tdg = Dd::from(1.0); // x^{3k} term of g'
    df = df.add(tdf);

    for k in 1..200usize {
        let kf = k as f64;
        tf = tf.mul(x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
        tg = tg.mul(x3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        tdg = tdg.mul(x3).div_f64((3.0 * kf) * (3.0 * kf - 2.0));
        f = f.add(tf);
        g = g.add(tg);
        dg = dg.add(tdg);
        if k >= 2 {
            tdf = tdf.mul(x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            df = df.add(tdf);
        }
        let small = tf.0.abs().max(tg.0.abs()).max(tdf.0.abs()).max(tdg.0.abs());
        if small < 1e-34 * (1.0 + f.0.abs()) {
            break;
        }
    }
    (f, g, df, dg)
}

/// Coefficients `u_k` and `v_k` of the large-argument expansions.
fn asymptotic_coefficients(out_u: &mut [f64], out_v: &mut [f64]) {
    out_u[0] = 1.0;
    out_v[0] = 1.0;
    for k in 1..out_u.len() {
        let kf = k as f64;
        out_u[k] = out_u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        out_v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * out_u[k];
    }
}

const TERMS: usize = 24;

/// Alternating sums `Σ (−1)^k c_k ζ^{−k}` truncated at the smallest term.
fn decaying_sum(c: &[f64], zeta: f64) -> f64 {
    let mut sum = 0.0;
    let mut pw = 1.0;
    let mut last = f64::INFINITY;
    for (k, &ck) in c.iter().enumerate() {
        let term = ck * pw;
        if term.abs() > last {
            break;
        }
        sum += if k % 2 == 0 { term } else { -term };
        last = term.abs();
        if last < 1e-18 * sum.abs() {
            break;
        }
        pw /= zeta;
    }
    sum
}

/// Even and odd parts `(Σ(−1)^k c_{2k} ζ^{−2k}, Σ(−1)^k c_{2k+1} ζ^{−2k−1})`.
fn oscillating_sums(c: &[f64], zeta: f64) -> (f64, f64) {
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut pw = 1.0;
    let mut last = f64::INFINITY;
    for (k, &ck) in c.iter().enumerate() {
        let term = ck * pw;
        if term.abs() > last {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
        last = term.abs();
        if last < 1e-18 {
            break;
        }
        pw /= zeta;
    }
    (even, odd)
}

fn series(x: f64) -> (f64, f64) {
    let (f, g, df, dg) = maclaurin(x);
    let ai = C1.mul(f).add(C2.mul(g).neg()).to_f64();
    let aip = C1.mul(df).add(C2.mul(dg).neg()).to_f64();
    (ai, aip)
}

fn asymptotic(x: f64) -> (f64, f64) {
    let mut u = [0.0; TERMS];
    let mut v = [0.0; TERMS];
    asymptotic_coefficients(&mut u, &mut v);
    let sqrt_pi = PI.sqrt();
    let z = x.abs();
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let quarter = z.powf(0.25);
    if x > 0.0 {
        let envelope = (-zeta).exp() / (2.0 * sqrt_pi);
        (
            envelope / quarter * decaying_sum(&u, zeta),
            -envelope * quarter * decaying_sum(&v, zeta),
        )
    } else {
        let (ue, uo) = oscillating_sums(&u, zeta);
        let (ve, vo) = oscillating_sums(&v, zeta);
        let (s, c) = (zeta - PI / 4.0).sin_cos();
        (
            (c * ue + s * uo) / (sqrt_pi * quarter),
            quarter / sqrt_pi * (s * ve - c * vo),
        )
    }
}

fn evaluate(x: f64) -> Result<(f64, f64)> {
    if !(x.abs() <= AIRY_WINDOW) {
        return Err(domain!(
            "Airy argument {x} outside [-{AIRY_WINDOW}, {AIRY_WINDOW}]"
        ));
    }
    Ok(if x.abs() <= SERIES_LIMIT {
        series(x)
    } else {
        asymptotic(x)
    })
}

/// `Ai(x)` for `|x| ≤ 20`.
pub fn airy_ai(x: f64) -> Result<f64> {
    evaluate(x).map(|v| v.0)
}

/// `Ai'(x)` for `|x| ≤ 20`.
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    evaluate(x).map(|v| v.1)
}

/// First negative zero of `Ai`, by bisection on the series.
pub fn airy_first_zero() -> f64 {
    let mut lo = -2.5;
    let mut hi = -2.2;
    let ai = |x: f64| airy_ai(x).unwrap_or(f64::NAN);
    let f_lo = ai(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (ai(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
