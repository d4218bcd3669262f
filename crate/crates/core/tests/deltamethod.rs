use gl3lab::analysis::{BumpKind, BumpWeight};
use gl3lab::arith::e_frac;
use gl3lab::deltamethod::{delta_eval, fourier_periodic, poisson_check, DeltaExpansion, NORMALIZER_RATIO_BOUNDS};
use gl3lab::LabError;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn expansion_detects_zero() {
    for (c_scale, q, big_n) in [(30.0, 1u64, 40u64), (30.0, 2, 40), (12.5, 6, 20), (50.0, 1, 90)] {
        let d = DeltaExpansion::new(c_scale, q).unwrap();
        for n in -(big_n as i64)..=big_n as i64 {
            let want = if n == 0 { 1.0 } else { 0.0 };
            let got = delta_eval(&d, n, big_n).unwrap();
            assert!((got - want).abs() < 1e-8, "C={c_scale} q={q} n={n}: {got}");
        }
    }
}

#[test]
fn normalizer_tracks_c() {
    let (lo, hi) = NORMALIZER_RATIO_BOUNDS;
    for i in 0..20 {
        let c_scale = 10f64.powf(1.0 + 2.0 * i as f64 / 19.0);
        let ratio = DeltaExpansion::new(c_scale, 1).unwrap().normalizer() / c_scale;
        assert!(ratio >= lo && ratio <= hi, "C = {c_scale}: ratio {ratio}");
    }
}

#[test]
fn expansion_preconditions() {
    let d = DeltaExpansion::new(20.0, 1).unwrap();
    assert!(matches!(delta_eval(&d, 11, 10), Err(LabError::Domain(_))));
    let tiny = DeltaExpansion::new(1.01, 1).unwrap();
    assert!(matches!(delta_eval(&tiny, 0, 1 << 40), Err(LabError::Domain(_))));
    assert!(matches!(DeltaExpansion::new(1.0, 1), Err(LabError::Domain(_))));
    assert!(matches!(DeltaExpansion::new(10.0, 0), Err(LabError::Domain(_))));
    let lopsided = BumpWeight::new(BumpKind::PlateauOnOneTwo, 4.0).unwrap();
    let u = BumpWeight::new(BumpKind::SymmetricPlateau, 1.0).unwrap();
    assert!(matches!(DeltaExpansion::with_weights(10.0, 1, lopsided, u), Err(LabError::Domain(_))));
}

#[test]
fn additive_character_transform() {
    let c = 5u64;
    let k: Vec<Complex64> = (0..c as i64).map(|a| e_frac(a, c)).collect();
    let hat = fourier_periodic(&k);
    for (n, v) in hat.iter().enumerate() {
        let want = if n == 1 { 5.0 } else { 0.0 };
        assert!((v - Complex64::new(want, 0.0)).norm() < 1e-12, "n = {n}: {v}");
    }
}

#[test]
fn double_transform_reflects() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for c in [1usize, 2, 7, 12, 31] {
        let k: Vec<Complex64> = (0..c).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let twice = fourier_periodic(&fourier_periodic(&k));
        for n in 0..c {
            let want = k[(c - n) % c] * c as f64;
            assert!((twice[n] - want).norm() < 1e-12 * c as f64);
        }
    }
}

#[test]
fn poisson_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..10 {
        let c = rng.gen_range(1..=30usize);
        let scale = rng.gen_range(0.5..8.0);
        let v = BumpWeight::new(BumpKind::SymmetricPlateau, 2.0).unwrap().dilate(scale);
        let k: Vec<Complex64> = (0..c).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let r = poisson_check(&k, &v).unwrap();
        assert!(r.diff < 1e-8, "c = {c}, scale {scale}: diff {}", r.diff);
        assert!(r.tail_bound <= 1e-10);
    }
}

#[test]
fn poisson_with_no_integer_in_support() {
    // Support ±[0.45, 0.9] avoids every integer.
    let v = BumpWeight::new(BumpKind::SymmetricAnnulus, 4.0).unwrap().dilate(0.45);
    let k: Vec<Complex64> = (0..7).map(|a| e_frac(3 * a, 7)).collect();
    let r = poisson_check(&k, &v).unwrap();
    assert_eq!(r.lhs, Complex64::new(0.0, 0.0));
    assert!(r.rhs.norm() < 1e-8, "{}", r.rhs);
}

#[test]
fn poisson_rejects_empty_residues() {
    let v = BumpWeight::new(BumpKind::SymmetricPlateau, 2.0).unwrap();
    assert!(matches!(poisson_check(&[], &v), Err(LabError::Domain(_))));
}
