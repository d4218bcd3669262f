use gl3lab::arith::gcd;
use gl3lab::coefficients::{
    lambda2, lambda2_from_table, read_cache, write_cache, CoefficientProvider, FormKind, TauTable, CACHE_MAGIC,
    TAU_MAX_INDEX,
};
use gl3lab::LabError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ordered triples `(a, b, c)` with `abc = n`.
fn d3_oracle(n: u64) -> u64 {
    let mut count = 0;
    for a in 1..=n {
        if n % a != 0 {
            continue;
        }
        for b in 1..=n / a {
            if (n / a) % b == 0 {
                count += 1;
            }
        }
    }
    count
}

/// τ(1..=n) from `Δ = q (Σ_k (−1)^k (2k+1) q^{k(k+1)/2})^8`.
fn tau_oracle(n: usize) -> Vec<i128> {
    let mut jacobi = vec![0i128; n];
    let mut k = 0usize;
    while k * (k + 1) / 2 < n {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        jacobi[k * (k + 1) / 2] = sign * (2 * k as i128 + 1);
        k += 1;
    }
    let sparse: Vec<(usize, i128)> = jacobi.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
    let mut power = jacobi.clone();
    for _ in 1..8 {
        let mut next = vec![0i128; n];
        for (i, &c) in power.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(j, s) in &sparse {
                if i + j >= n {
                    break;
                }
                next[i + j] += c * s;
            }
        }
        power = next;
    }
    // τ(m) is the coefficient of q^m, i.e. power[m − 1].
    power
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

#[test]
fn d3_table_matches_divisor_enumeration() {
    let p = CoefficientProvider::build(FormKind::EisensteinD3, 3000).unwrap();
    for n in 1..=3000 {
        assert_eq!(p.lambda(n as usize).unwrap(), d3_oracle(n) as f64, "d3({n})");
    }
    assert_eq!(p.lambda(12).unwrap(), 18.0);
}

#[test]
fn tau_table_matches_jacobi_series() {
    let oracle = tau_oracle(10_000);
    let t = TauTable::new(10_000).unwrap();
    for n in 1..=10_000 {
        assert_eq!(t.get(n), oracle[n - 1].into(), "τ({n})");
    }
    assert_eq!(oracle[..5], [1, -24, 252, -1472, 4830]);
}

#[test]
fn tau_range_is_capped() {
    assert!(matches!(TauTable::new(TAU_MAX_INDEX + 1), Err(LabError::Range(_))));
}

#[test]
fn sym2_table_matches_convolution_of_tau_squares() {
    // L(s, sym² f) = ζ(2s) Σ λ_f(k²) k^{−s}, λ_f(k²) = τ(k²)/k^{11}.
    let n_max = 100usize;
    let oracle = tau_oracle(n_max * n_max);
    let lam_sq = |k: usize| oracle[k * k - 1] as f64 / (k as f64).powi(11);
    let p = CoefficientProvider::build(FormKind::SymSquareDelta, n_max).unwrap();
    for n in 1..=n_max {
        let mut want = 0.0;
        let mut m = 1;
        while m * m <= n {
            if n % (m * m) == 0 {
                want += lam_sq(n / (m * m));
            }
            m += 1;
        }
        assert!(close(p.lambda(n).unwrap(), want, 1e-10), "λ(1,{n}) = {} vs {want}", p.lambda(n).unwrap());
    }
    assert!(close(p.lambda(2).unwrap(), -23.0 / 32.0, 1e-14));
    assert!(close(p.lambda(4).unwrap(), 1265.0 / 1024.0, 1e-14));
}

#[test]
fn multiplicative_on_coprime_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for kind in [FormKind::EisensteinD3, FormKind::SymSquareDelta] {
        let p = CoefficientProvider::build(kind, 100_000).unwrap();
        let mut checked = 0;
        while checked < 10_000 {
            let m = rng.gen_range(1..=316usize);
            let n = rng.gen_range(1..=316usize);
            if gcd(m as i64, n as i64) != 1 {
                continue;
            }
            let lhs = p.lambda(m * n).unwrap();
            let rhs = p.lambda(m).unwrap() * p.lambda(n).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{kind:?} {m} {n}");
            checked += 1;
        }
    }
}

#[test]
fn hecke_relation_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for kind in [FormKind::EisensteinD3, FormKind::SymSquareDelta] {
        let p = CoefficientProvider::build(kind, 10_000).unwrap();
        for _ in 0..1000 {
            let m = rng.gen_range(1..=10_000u64);
            let n = rng.gen_range(1..=10_000u64);
            let direct = lambda2(&p, m, n).unwrap();
            let table = lambda2_from_table(&p, m as usize, n as usize);
            // Absolute floor for values that nearly cancel.
            assert!((direct - table).abs() <= 1e-12 + 1e-10 * direct.abs(), "{kind:?} λ({m},{n}): {direct} vs {table}");
        }
    }
}

#[test]
fn d3_two_variable_values_are_integers() {
    let p = CoefficientProvider::build(FormKind::EisensteinD3, 100).unwrap();
    for m in 1..=30u64 {
        for n in 1..=30u64 {
            let v = lambda2(&p, m, n).unwrap();
            assert_eq!(v, v.round(), "λ({m},{n}) = {v}");
            assert!(v >= 1.0);
        }
    }
    assert_eq!(lambda2(&p, 2, 3).unwrap(), 9.0);
    assert_eq!(lambda2(&p, 5, 5).unwrap(), 8.0);
}

#[test]
fn invalid_indices() {
    let p = CoefficientProvider::build(FormKind::EisensteinD3, 10).unwrap();
    assert!(matches!(p.lambda(0), Err(LabError::Range(_))));
    assert!(matches!(p.lambda(11), Err(LabError::Range(_))));
    assert!(matches!(lambda2(&p, 0, 1), Err(LabError::Domain(_))));
    assert!(matches!(CoefficientProvider::build(FormKind::EisensteinD3, 0), Err(LabError::Domain(_))));
    let s = CoefficientProvider::build(FormKind::SymSquareDelta, 10).unwrap();
    assert!(matches!(lambda2(&s, 13, 1), Err(LabError::Range(_))));
}

#[test]
fn cache_round_trip_is_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    for kind in [FormKind::EisensteinD3, FormKind::SymSquareDelta] {
        let p = CoefficientProvider::build(kind, 5000).unwrap();
        let path = dir.path().join(format!("{}.gl3c", kind.name()));
        write_cache(&p, &path).unwrap();
        let q = read_cache(&path).unwrap();
        assert_eq!(q.kind(), kind);
        assert!(p.table().iter().zip(q.table()).all(|(a, b)| a.to_bits() == b.to_bits()));
        // Satake data is rebuilt from λ(1, p), so λ(m, n) agrees to rounding only.
        assert!(close(lambda2(&q, 12, 18).unwrap(), lambda2(&p, 12, 18).unwrap(), 1e-12));
    }
}

#[test]
fn corrupt_caches_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = CoefficientProvider::build(FormKind::EisensteinD3, 64).unwrap();
    let path = dir.path().join("d3.gl3c");
    write_cache(&p, &path).unwrap();
    let good = std::fs::read(&path).unwrap();

    let mut bad_magic = good.clone();
    bad_magic[0] = b'X';
    std::fs::write(&path, &bad_magic).unwrap();
    assert!(matches!(read_cache(&path), Err(LabError::Format(_))));

    std::fs::write(&path, &good[..good.len() - 3]).unwrap();
    assert!(matches!(read_cache(&path), Err(LabError::Format(_))));

    // Break multiplicativity: λ(1,6) ≠ λ(1,2)λ(1,3).
    let mut tampered = good.clone();
    let offset = CACHE_MAGIC.len() + 4 + 1 + 8 + 5 * 8;
    tampered[offset..offset + 8].copy_from_slice(&5.0f64.to_le_bytes());
    std::fs::write(&path, &tampered).unwrap();
    assert!(matches!(read_cache(&path), Err(LabError::Format(_))));

    let missing = dir.path().join("absent.gl3c");
    assert_eq!(read_cache(&missing).unwrap_err().exit_code(), 2);
}
