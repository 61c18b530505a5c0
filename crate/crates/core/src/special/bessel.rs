use core::f64::consts::PI;

use super::half_integer_degree;
use crate::error::{domain, Result};
#[allow(unused_imports)] // shadowed by std float methods when std is linked
use num_traits::Float;

/// `J_ν(x)` for `ν ∈ {1/2, 3/2, …}` and `x > 0`.
///
/// Uses `J_{n+1/2}(x) = √(2x/π) j_n(x)` with the spherical Bessel function
/// `j_n` from [`spherical_bessel`].
pub fn bessel_half(nu: f64, x: f64) -> Result<f64> {
    let n = half_integer_degree(nu)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain!("argument {x} must be positive and finite"));
    }
    Ok((2.0 * x / PI).sqrt() * spherical_bessel(n, x))
}

/// Spherical Bessel function `j_n(x)` for `x > 0`.
///
/// Closed forms for `n ≤ 1`; upward recurrence when `x ≥ n`, Miller's
/// normalized downward recurrence otherwise.
pub fn spherical_bessel(n: usize, x: f64) -> f64 {
    match n {
        0 => j0(x),
        1 => j1(x),
        _ if x >= n as f64 => upward(n, x),
        _ => miller(n, x),
    }
}

fn j0(x: f64) -> f64 {
    if x < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

fn j1(x: f64) -> f64 {
    if x < 1e-2 {
        let x2 = x * x;
        x * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0)
    } else {
        (x.sin() / x - x.cos()) / x
    }
}

fn upward(n: usize, x: f64) -> f64 {
    let mut prev = j0(x);
    let mut cur = j1(x);
    for k in 1..n {
        let next = (2 * k + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

const RESCALE_ABOVE: f64 = 1e250;

fn miller(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let start = n + 20 + (20.0 * nf.cbrt()).ceil() as usize + x.ceil() as usize;
    let mut next = 0.0; // j_{k+1}
    let mut cur = 1e-300; // j_k
    let mut at_n = 0.0;
    let mut k = start;
    let mut first = 0.0;
    while k > 0 {
        let prev = (2 * k + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if k == n {
            at_n = cur;
        }
        if k == 1 {
            first = cur;
        }
        if cur.abs() > RESCALE_ABOVE {
            let s = 1.0 / cur.abs();
            cur *= s;
            next *= s;
            at_n *= s;
            first *= s;
        }
    }
    // `cur` now holds the unnormalized j_0 and `first` j_1.
    let (exact, approx) = {
        let e0 = j0(x);
        let e1 = j1(x);
        if e0.abs() >= e1.abs() {
            (e0, cur)
        } else {
            (e1, first)
        }
    };
    at_n * (exact / approx)
}
