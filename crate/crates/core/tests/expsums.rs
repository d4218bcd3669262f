use std::f64::consts::TAU;

use gl3lab::analysis::{BumpKind, BumpWeight};
use gl3lab::coefficients::{CoefficientProvider, FormKind};
use gl3lab::expsums::{
    constant_coefficients, dyadic_grid, exponent_sweep, fit_slope, smoothing_error_split, twist_sum, TwistSumSpec,
};
use gl3lab::summation::with_workers;
use gl3lab::LabError;
use num_complex::Complex64;

fn bits(z: Complex64) -> (u64, u64) {
    (z.re.to_bits(), z.im.to_bits())
}

#[test]
fn bitwise_reproducible_across_worker_counts() {
    let p = CoefficientProvider::build(FormKind::SymSquareDelta, 1 << 19).unwrap();
    let w = BumpWeight::new(BumpKind::PlateauOnHalfOne, 16.0).unwrap();
    let t = (1u64 << 19) as f64;
    let plain = TwistSumSpec::new(p.table(), t, 1.0, 2.0 / 3.0);
    let smooth = plain.weighted(&w);
    let reference = (bits(twist_sum(&plain).unwrap()), bits(twist_sum(&smooth).unwrap()));
    for workers in [1, 2, 8] {
        let got = with_workers(workers, || (twist_sum(&plain).unwrap(), twist_sum(&smooth).unwrap())).unwrap();
        assert_eq!((bits(got.0), bits(got.1)), reference, "{workers} workers");
    }
}

#[test]
fn parseval_over_equally_spaced_frequencies() {
    let p = CoefficientProvider::build(FormKind::EisensteinD3, 600).unwrap();
    let (t, j) = (500.0, 512usize);
    let mean: f64 = (0..j)
        .map(|k| twist_sum(&TwistSumSpec::new(p.table(), t, k as f64 / j as f64, 1.0)).unwrap().norm_sqr())
        .sum::<f64>()
        / j as f64;
    let energy: f64 = p.table()[..500].iter().map(|l| l * l).sum();
    assert!((mean / energy - 1.0).abs() < 1e-8, "{mean} vs {energy}");
}

#[test]
fn triangle_inequality() {
    let p = CoefficientProvider::build(FormKind::SymSquareDelta, 1 << 14).unwrap();
    for (alpha, beta) in [(1.0, 0.5), (0.3, 2.0 / 3.0), (2.5, 1.5), (-1.0, 0.9)] {
        let t = (1u64 << 14) as f64;
        let s = twist_sum(&TwistSumSpec::new(p.table(), t, alpha, beta)).unwrap();
        let l1: f64 = p.table().iter().map(|l| l.abs()).sum();
        assert!(s.norm() <= l1);
    }
}

#[test]
fn zero_frequency_recovers_summatory_function() {
    let p = CoefficientProvider::build(FormKind::EisensteinD3, 5000).unwrap();
    let s = twist_sum(&TwistSumSpec::new(p.table(), 5000.0, 0.0, 0.7)).unwrap();
    let direct: f64 = p.table().iter().sum();
    assert_eq!(s.re, direct);
    assert_eq!(s.im, 0.0);
    let ones = constant_coefficients(1000);
    let s = twist_sum(&TwistSumSpec::new(&ones, 999.9, 0.0, 1.3)).unwrap();
    assert_eq!(s, Complex64::new(999.0, 0.0));
}

#[test]
fn constant_slope_is_one() {
    let ones = constant_coefficients(1 << 18);
    let r = exponent_sweep(&ones, 0.0, 0.5, &dyadic_grid(8, 18), None).unwrap();
    assert!((r.fitted_slope - 1.0).abs() < 1e-6, "{}", r.fitted_slope);
}

#[test]
fn d3_zero_frequency_slope_carries_log_growth() {
    // Σ d₃(n) ~ T log² T / 2, whose local log-log slope is 1 + 2/ln T.
    let p = CoefficientProvider::build(FormKind::EisensteinD3, 1 << 16).unwrap();
    let r = exponent_sweep(p.table(), 0.0, 1.0, &dyadic_grid(10, 16), None).unwrap();
    assert!(r.fitted_slope > 1.0 && r.fitted_slope < 1.35, "{}", r.fitted_slope);
}

#[test]
fn geometric_closed_form() {
    let ones = constant_coefficients(100_000);
    for alpha in [0.3, 2.0f64.sqrt(), 1e-3] {
        let n = 100_000.0;
        let got = twist_sum(&TwistSumSpec::new(&ones, n, alpha, 1.0)).unwrap();
        let e = |x: f64| Complex64::from_polar(1.0, TAU * x);
        let want = e(alpha) * (e(alpha * n) - 1.0) / (e(alpha) - 1.0);
        assert!((got - want).norm() < 1e-9 * want.norm().max(1.0), "α = {alpha}: {got} vs {want}");
        assert!(got.norm() <= 1.0 / (std::f64::consts::PI * alpha).sin().abs() + 1e-9);
    }
}

#[test]
fn smoothing_split_identity() {
    let p = CoefficientProvider::build(FormKind::SymSquareDelta, 1 << 16).unwrap();
    let t = (1u64 << 16) as f64;
    let y = t.powf(2.0 / 3.0) / 2.0;
    let s = smoothing_error_split(p.table(), t, 1.0, 2.0 / 3.0, y).unwrap();
    assert!((s.difference - s.window_sum).norm() < 1e-9 * s.envelope().max(1.0));
    assert!(s.difference.norm() <= s.envelope());
    assert!(s.window_count > 0);
}

#[test]
fn smoothing_split_without_window_integers_is_exact() {
    let ones = constant_coefficients(2000);
    let s = smoothing_error_split(&ones, 1000.5, 1.0, 1.5, 1e4).unwrap();
    assert_eq!(s.window_count, 0);
    assert_eq!(s.difference, Complex64::new(0.0, 0.0));
}

#[test]
fn preconditions() {
    let ones = constant_coefficients(100);
    assert!(matches!(twist_sum(&TwistSumSpec::new(&ones, 0.5, 1.0, 1.0)), Err(LabError::Domain(_))));
    assert!(matches!(twist_sum(&TwistSumSpec::new(&ones, 101.0, 1.0, 1.0)), Err(LabError::Range(_))));
    // Y = 50 exceeds 100^(0.5 − 0.01) ≈ 9.5.
    let w = BumpWeight::new(BumpKind::PlateauOnHalfOne, 50.0).unwrap();
    let spec = TwistSumSpec::new(&ones, 100.0, 1.0, 0.5).weighted(&w);
    assert!(matches!(twist_sum(&spec), Err(LabError::Domain(_))));
}

#[test]
fn slope_fit_is_exact_on_lines() {
    let pts: Vec<(f64, f64)> = (0..8).map(|i| (i as f64, 0.75 * i as f64 - 2.0)).collect();
    let (slope, err) = fit_slope(&pts).unwrap();
    assert!((slope - 0.75).abs() < 1e-14 && err < 1e-12);
    assert!(matches!(fit_slope(&[(1.0, 1.0)]), Err(LabError::Domain(_))));
}
