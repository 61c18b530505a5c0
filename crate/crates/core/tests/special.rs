// Reference values keep every digit they were computed with.
#![allow(clippy::excessive_precision)]

use ballnls_core::special::{
    airy_ai, airy_ai_prime, airy_first_zero, airy_regime_check, bessel_first_zero, bessel_half,
    fit_asymptotic_model, schlafli_t1, schlafli_t2, spherical_bessel, AiryRegime, AsymptoticModel,
};
use proptest::prelude::*;
use std::f64::consts::PI;

// Reference values below were computed with 30-digit arbitrary precision.

const BESSEL: [(f64, f64, f64); 8] = [
    (10.5, 5.0, 0.000_726_752_689_741_487_106_33),
    (10.5, 20.0, 0.141_611_992_284_730_808_09),
    (50.5, 40.0, 0.000_474_092_432_865_323_701_89),
    (50.5, 80.0, -0.075_922_118_036_208_016_12),
    (200.5, 150.0, 5.393_500_500_156_403_880_3e-14),
    (200.5, 250.0, 0.014_899_143_518_604_006_411),
    (3.5, 0.01, 7.598_858_363_056_526_102_3e-10),
    (100.5, 101.0, 0.105_549_280_013_381_555_78),
];

const ZEROS: [(f64, f64); 5] = [
    (10.5, 15.033_469_303_743_438_064),
    (50.5, 57.638_686_770_302_609_953),
    (100.5, 109.350_128_931_692_484_97),
    (200.5, 211.538_055_888_857_156_99),
    (499.5, 514.354_443_740_934_726_24),
];

const AIRY: [(f64, f64, f64); 12] = [
    (
        -15.0,
        0.278_217_490_870_828_929_53,
        0.272_374_204_308_642_020_83,
    ),
    (
        -10.0,
        0.040_241_238_486_443_190_689,
        0.996_265_044_132_790_055_9,
    ),
    (
        -5.0,
        0.350_761_009_024_114_319_79,
        0.327_192_818_554_443_136_79,
    ),
    (
        -2.0,
        0.227_407_428_201_685_575_99,
        0.618_259_020_741_691_041_41,
    ),
    (
        -1.0,
        0.535_560_883_292_352_118_8,
        -0.010_160_567_116_645_209_395,
    ),
    (
        0.5,
        0.231_693_606_480_833_489_77,
        -0.224_910_532_664_683_893_14,
    ),
    (
        1.0,
        0.135_292_416_312_881_415_52,
        -0.159_147_441_296_793_212_79,
    ),
    (
        3.0,
        0.006_591_139_357_460_719_144_3,
        -0.011_912_976_705_951_318_474,
    ),
    (
        6.0,
        9.947_694_360_252_889_570_2e-6,
        -0.000_024_765_200_397_034_954_754,
    ),
    (
        9.0,
        2.471_168_430_872_489_843_3e-9,
        -7.480_641_389_658_946_412_8e-9,
    ),
    (
        12.0,
        1.393_184_688_875_360_839e-13,
        -4.854_736_554_985_308_463e-13,
    ),
    (
        18.0,
        1.060_046_682_524_795_565_6e-23,
        -4.512_001_860_681_941_889_2e-23,
    ),
];

const AIRY_ALPHA: f64 = 1.855_757_081_489_238_478_4;

fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * b.abs() + abs
}

#[test]
fn bessel_reference_values() {
    for (nu, x, expected) in BESSEL {
        let j = bessel_half(nu, x).unwrap();
        assert!(
            close(j, expected, 1e-11, 1e-300),
            "J_{nu}({x}) = {j}, expected {expected}"
        );
    }
}

#[test]
fn bessel_closed_forms() {
    let j = bessel_half(0.5, PI / 2.0).unwrap();
    assert!((j - 2.0 / PI).abs() < 1e-15);
    assert!(bessel_half(1.5, 4.493_409_457_909_064).unwrap().abs() < 1e-8);
    for x in [0.3f64, 2.0, 9.0] {
        let j52 = ((3.0 / (x * x) - 1.0) * x.sin() - 3.0 * x.cos() / x) * (2.0 / (PI * x)).sqrt();
        assert!(close(bessel_half(2.5, x).unwrap(), j52, 1e-12, 1e-15));
    }
}

#[test]
fn recurrence_holds_across_regimes() {
    // J_{ν−1} + J_{ν+1} = (2ν/x) J_ν
    for n in [1usize, 5, 30, 120] {
        let nu = n as f64 + 0.5;
        for x in [0.7, nu * 0.5, nu, nu * 2.0 + 3.0] {
            let lhs = bessel_half(nu - 1.0, x).unwrap() + bessel_half(nu + 1.0, x).unwrap();
            let rhs = 2.0 * nu / x * bessel_half(nu, x).unwrap();
            let scale = lhs.abs().max(rhs.abs()).max(1e-300);
            assert!((lhs - rhs).abs() < 1e-11 * scale, "ν={nu} x={x}");
        }
    }
}

#[test]
fn spherical_and_cylindrical_agree() {
    for n in [0usize, 1, 4, 40] {
        let x = 7.3;
        let j = spherical_bessel(n, x);
        let viajn = (PI / (2.0 * x)).sqrt() * bessel_half(n as f64 + 0.5, x).unwrap();
        assert!(close(j, viajn, 1e-13, 1e-300));
    }
}

#[test]
fn airy_reference_values() {
    for (x, ai, aip) in AIRY {
        let a = airy_ai(x).unwrap();
        let d = airy_ai_prime(x).unwrap();
        assert!(close(a, ai, 1e-12, 1e-15), "Ai({x}) = {a}, expected {ai}");
        assert!(
            close(d, aip, 1e-12, 1e-15),
            "Ai'({x}) = {d}, expected {aip}"
        );
    }
    assert!((airy_ai(0.0).unwrap() - 0.355_028_053_887_817_2).abs() < 1e-15);
    assert!(airy_ai(25.0).is_err());
}

#[test]
fn airy_zero_and_wronskian_shape() {
    let z0 = airy_first_zero();
    assert!((z0 + 2.338_107_410_459_767).abs() < 1e-12);
    assert!(airy_ai(z0).unwrap().abs() < 1e-13);
    // Ai'' = x Ai checked by central differences of Ai'
    for x in [-6.0, -1.5, 0.7, 4.0] {
        let h = 1e-5;
        let second = (airy_ai_prime(x + h).unwrap() - airy_ai_prime(x - h).unwrap()) / (2.0 * h);
        assert!((second - x * airy_ai(x).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn schlafli_identity_for_half_integer_orders() {
    for n in 0..20usize {
        let nu = n as f64 + 0.5;
        for x in [0.5, 3.0, 12.0, 27.0, 50.0] {
            let t1 = schlafli_t1(nu, x).unwrap();
            let t2 = schlafli_t2(nu, x).unwrap();
            let j = bessel_half(nu, x).unwrap();
            assert!(
                (t1 - t2 - j).abs() < 1e-9,
                "ν={nu} x={x}: {} vs {j}",
                t1 - t2
            );
        }
    }
}

#[test]
fn schlafli_integer_order() {
    assert!((schlafli_t1(1.0, 2.0).unwrap() - 0.576_724_807_756_873_387_2).abs() < 1e-9);
    assert_eq!(schlafli_t2(1.0, 2.0).unwrap(), 0.0);
    assert!(schlafli_t2(100.0, 50.0).unwrap().abs() < 1e-8);
}

#[test]
fn second_schlafli_term_decays_like_inverse_order() {
    let scaled: Vec<f64> = [10.5f64, 20.5, 40.5, 80.5, 160.5]
        .iter()
        .map(|&nu| nu * schlafli_t2(nu, nu).unwrap().abs())
        .collect();
    for s in &scaled {
        assert!(*s > 0.1 && *s < 0.25, "{scaled:?}");
    }
}

#[test]
fn airy_regime_examples() {
    let r = airy_regime_check(400.0, 1.0, AiryRegime::default()).unwrap();
    let model = (2.0f64 / 400.0).cbrt() * 0.355_028_053_887_817_2;
    assert!((r.model - model).abs() < 1e-14);
    let d200 = airy_regime_check(200.0, 1.0, AiryRegime::default())
        .unwrap()
        .difference
        .abs();
    assert!(d200 < 200f64.powf(-0.4));
    let diffs: Vec<f64> = [100.0f64, 200.0, 400.0]
        .iter()
        .map(|&nu| {
            let rho = 1.0 + nu.powf(-2.0 / 3.0);
            airy_regime_check(nu, rho, AiryRegime::default())
                .unwrap()
                .difference
                .abs()
        })
        .collect();
    assert!(diffs[0] > diffs[1] && diffs[1] > diffs[2], "{diffs:?}");
    assert!(airy_regime_check(100.0, 1.5, AiryRegime::default()).is_err());
}

#[test]
fn first_zero_reference_values() {
    let model = AsymptoticModel::leading_order();
    assert_eq!(bessel_first_zero(0.5, &model).unwrap().zero, PI);
    for (nu, z) in ZEROS {
        let rec = bessel_first_zero(nu, &model).unwrap();
        assert!(
            (rec.zero - z).abs() < 1e-9,
            "z_{nu} = {}, expected {z}",
            rec.zero
        );
    }
}

#[test]
fn three_halves_zero_solves_tan_equation() {
    // independent bisection on tan x − x over (π, 3π/2)
    let (mut a, mut b) = (PI + 1e-6, 1.5 * PI - 1e-6);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (m.tan() - m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let z = bessel_first_zero(1.5, &AsymptoticModel::leading_order())
        .unwrap()
        .zero;
    assert!((z - 0.5 * (a + b)).abs() < 1e-10);
    let z52 = bessel_first_zero(2.5, &AsymptoticModel::leading_order())
        .unwrap()
        .zero;
    assert!((z52 - 5.763_459_196_894_55).abs() < 1e-9);
}

#[test]
fn zeros_increase_with_order() {
    let model = AsymptoticModel::leading_order();
    let zeros: Vec<f64> = (0..100)
        .map(|n| bessel_first_zero(n as f64 + 0.5, &model).unwrap().zero)
        .collect();
    assert!(zeros.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] < 2.0));
    for (n, z) in zeros.iter().enumerate() {
        assert!(*z > n as f64 + 0.5);
    }
}

#[test]
fn fitted_leading_coefficient_matches_airy_zero() {
    let model = AsymptoticModel::leading_order();
    assert!((model.airy_alpha() - AIRY_ALPHA).abs() < 1e-12);
    let orders: Vec<f64> = (10..=500).step_by(10).map(|n| n as f64 - 0.5).collect();
    let zeros: Vec<f64> = orders
        .iter()
        .map(|&nu| bessel_first_zero(nu, &model).unwrap().zero)
        .collect();
    let fit = fit_asymptotic_model(&orders, &zeros).unwrap();
    assert!(
        (fit.model.alpha - AIRY_ALPHA).abs() < 1e-3,
        "α = {}",
        fit.model.alpha
    );
    assert!(fit.max_scaled_residual < 0.5, "{}", fit.max_scaled_residual);
    assert!(fit_asymptotic_model(&orders[..5], &zeros[..5]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn half_order_bessel_is_bounded(n in 0usize..300, x in 0.01f64..400.0) {
        let j = bessel_half(n as f64 + 0.5, x).unwrap();
        prop_assert!(j.is_finite() && j.abs() <= 1.0);
    }

    #[test]
    fn zero_is_a_sign_change(n in 0usize..400) {
        let rec = bessel_first_zero(n as f64 + 0.5, &AsymptoticModel::leading_order()).unwrap();
        let nu = rec.order;
        let left = bessel_half(nu, rec.zero - 1e-6).unwrap();
        let right = bessel_half(nu, rec.zero + 1e-6).unwrap();
        prop_assert!(left > 0.0 && right < 0.0);
    }
}
