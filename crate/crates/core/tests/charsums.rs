use std::f64::consts::TAU;

use gl3lab::arith::{gcd, mod_inverse};
use gl3lab::charsums::{
    additive_reciprocity_holds, closed_form_m0, correlation_sum, kloosterman, ramanujan, recursive_charsum_a1,
    recursive_charsum_a2, CorrelationKey, CorrelationSign, GeneralKey, SimpleKey, DEFAULT_OP_BUDGET,
};
use gl3lab::LabError;
use num_rational::Ratio;
use proptest::prelude::*;

/// `Σ_{x unit} cos(2π(ax + b x̄)/c)` by direct enumeration.
fn kloosterman_oracle(a: i64, b: i64, c: u64) -> f64 {
    let ci = c as i64;
    (0..ci)
        .filter(|&x| gcd(x, ci) == 1)
        .map(|x| {
            let xbar = mod_inverse(x, c).unwrap() as i64;
            let r = (a.rem_euclid(ci) * x + b.rem_euclid(ci) * xbar).rem_euclid(ci);
            (TAU * r as f64 / c as f64).cos()
        })
        .sum()
}

fn inverse(x: i64, c: u64) -> i64 {
    mod_inverse(x, c).unwrap() as i64
}

#[test]
fn kloosterman_matches_enumeration() {
    for c in 1..=60u64 {
        for a in -3..c as i64 {
            for b in [0i64, 1, 2, 7, -5] {
                let got = kloosterman(a, b, c).unwrap();
                let want = kloosterman_oracle(a, b, c);
                assert!((got - want).abs() < 1e-9, "S({a},{b};{c}) = {got}, oracle {want}");
            }
        }
    }
}

#[test]
fn kloosterman_rejects_zero_modulus() {
    assert!(matches!(kloosterman(1, 1, 0), Err(LabError::Domain(_))));
}

#[test]
fn ramanujan_sum_is_kloosterman_with_zero() {
    for q in 1..=120u64 {
        for n in [-4i64, 0, 1, 6, 12, 30] {
            let r = ramanujan(n, q).unwrap() as f64;
            assert!((r - kloosterman_oracle(n, 0, q)).abs() < 1e-8, "c_{q}({n})");
        }
    }
}

#[test]
fn correlation_m0_closed_form_larger_moduli() {
    for (c1, c2) in [(5u64, 5u64), (6, 6), (4, 6), (9, 3), (7, 1)] {
        for (n1, n2) in [(1i64, 1i64), (1, 2), (2, 3)] {
            if gcd(n1, c1 as i64) != 1 || gcd(n2, c2 as i64) != 1 {
                continue;
            }
            for sign in [CorrelationSign::Plus, CorrelationSign::Minus] {
                let key = CorrelationKey { m: 0, n1, n2, c1, c2, sign };
                let Ok(closed) = closed_form_m0(&key) else { continue };
                let brute = correlation_sum(&key).unwrap();
                assert!((brute.re - closed as f64).abs() < 1e-7 && brute.im.abs() < 1e-7, "{key:?}: {brute} vs {closed}");
            }
        }
    }
}

#[test]
fn correlation_sum_rejects_non_units() {
    let key = CorrelationKey { m: 1, n1: 2, n2: 1, c1: 4, c2: 3, sign: CorrelationSign::Plus };
    assert!(matches!(correlation_sum(&key), Err(LabError::Domain(_))));
}

#[test]
fn second_level_matches_triple_enumeration() {
    for (c, u, v, a, b) in [(5u64, 1i64, 1i64, 1i64, 2i64), (7, 1, 2, 3, 5), (11, 2, 3, 1, 1), (15, 1, 1, 2, 7)] {
        let ci = c as i64;
        let first = |x: i64, y: i64| kloosterman_oracle(u * (inverse(x, c) - inverse(y, c)), v * (x - y), c);
        let want: f64 = (0..ci).filter(|&g| gcd(g, ci) == 1).map(|g| first(g, a) * first(g, b)).sum();
        let got = recursive_charsum_a1(&SimpleKey { u, v, c, k: 2, a, b }, DEFAULT_OP_BUDGET).unwrap();
        assert!((got.value - want).abs() < 1e-8 * want.abs().max(1.0), "C={c}: {} vs {want}", got.value);
    }
}

#[test]
fn first_level_is_a_single_kloosterman_sum() {
    let got = recursive_charsum_a1(&SimpleKey { u: 1, v: 1, c: 5, k: 1, a: 1, b: 2 }, DEFAULT_OP_BUDGET).unwrap();
    let want = kloosterman_oracle(1 - inverse(2, 5), 1 - 2, 5);
    assert!((got.value - want).abs() < 1e-12);
}

#[test]
fn general_sum_degenerates_to_simple_sum() {
    for c in [3u64, 5, 7, 15] {
        for k in 1..=3 {
            let (a, b) = (1i64, 2i64);
            let simple = recursive_charsum_a1(&SimpleKey { u: 2, v: 1, c, k, a, b }, DEFAULT_OP_BUDGET).unwrap();
            let key = GeneralKey { u: 2, v: 1, c, q: 1, q1: 1, q2: 1, q3: 1, big_q: c, k, a, b };
            let general = recursive_charsum_a2(&key, DEFAULT_OP_BUDGET).unwrap();
            assert!((simple.value - general.value).abs() <= 1e-9 * simple.value.abs().max(1.0), "C={c} k={k}");
        }
    }
}

#[test]
fn invalid_recursive_keys_are_domain_errors() {
    let bad_c = SimpleKey { u: 1, v: 1, c: 12, k: 2, a: 1, b: 5 };
    assert!(matches!(recursive_charsum_a1(&bad_c, DEFAULT_OP_BUDGET), Err(LabError::Domain(_))));
    let bad_a = SimpleKey { u: 1, v: 1, c: 15, k: 2, a: 3, b: 1 };
    assert!(matches!(recursive_charsum_a1(&bad_a, DEFAULT_OP_BUDGET), Err(LabError::Domain(_))));
    let bad_q = GeneralKey { u: 1, v: 1, c: 6, q: 4, q1: 1, q2: 1, q3: 1, big_q: 6, k: 1, a: 1, b: 5 };
    assert!(matches!(recursive_charsum_a2(&bad_q, DEFAULT_OP_BUDGET), Err(LabError::Domain(_))));
}

#[test]
fn op_budget_overflow_is_a_resource_error() {
    let key = SimpleKey { u: 1, v: 1, c: 97, k: 4, a: 1, b: 2 };
    let err = recursive_charsum_a1(&key, 1e4).unwrap_err();
    assert!(matches!(err, LabError::Resource(_)), "{err:?}");
    assert_eq!(err.exit_code(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, max_global_rejects: 20_000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn additive_reciprocity_exact(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        prop_assume!(gcd(a as i64, b as i64) == 1);
        let abar = mod_inverse(a as i64, b).unwrap() as i128;
        let bbar = mod_inverse(b as i64, a).unwrap() as i128;
        let (ai, bi) = (a as i128, b as i128);
        let lhs = Ratio::new(abar, bi) + Ratio::new(bbar, ai) - Ratio::new(1, ai * bi);
        prop_assert!(lhs.is_integer());
        prop_assert!(additive_reciprocity_holds(a, b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, max_global_rejects: 4_000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn weil_bound(c in 1u64..400, a in -1000i64..1000, b in -1000i64..1000) {
        let s = kloosterman(a, b, c).unwrap();
        let g = gcd(gcd(a, b) as i64, c as i64) as f64;
        let bound = gl3lab::arith::divisor_count(c) as f64 * (c as f64).sqrt() * g.sqrt();
        prop_assert!(s.abs() <= bound * (1.0 + 1e-12), "S({a},{b};{c}) = {s} > {bound}");
    }

    #[test]
    fn twisted_multiplicativity(r in 1u64..60, s in 1u64..60, a in -500i64..500, b in -500i64..500) {
        prop_assume!(gcd(r as i64, s as i64) == 1);
        let sbar = mod_inverse(s as i64, r).unwrap() as i64;
        let rbar = mod_inverse(r as i64, s).unwrap() as i64;
        let lhs = kloosterman(a, b, r * s).unwrap();
        let rhs = kloosterman(sbar * a, sbar * b, r).unwrap() * kloosterman(rbar * a, rbar * b, s).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (r * s) as f64);
    }

    #[test]
    fn kloosterman_is_symmetric(c in 1u64..300, a in -300i64..300, b in -300i64..300) {
        let ab = kloosterman(a, b, c).unwrap();
        prop_assert!((ab - kloosterman(b, a, c).unwrap()).abs() < 1e-9 * c as f64);
        prop_assert!((ab - kloosterman(-a, -b, c).unwrap()).abs() < 1e-9 * c as f64);
    }
}
