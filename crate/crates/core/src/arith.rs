//! Elementary arithmetic shared by the coefficient, delta-symbol and
//! character-sum code: factorisation, modular inverses, Möbius/Euler
//! functions and exact roots of unity.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{LabError, Result};

/// Additive character `e(x) = exp(2πix)`, with `x` reduced mod 1 first.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `e(r/c)` for integers, reduced exactly before the trigonometric call.
#[inline]
pub fn e_frac(r: i64, c: u64) -> Complex64 {
    let c_i = c as i64;
    let r = r.rem_euclid(c_i);
    e(r as f64 / c as f64)
}

/// Table of `e(r/c)` for `0 ≤ r < c`.
#[derive(Debug, Clone)]
pub struct RootTable {
    modulus: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let roots = (0..modulus).map(|r| e_frac(r as i64, modulus)).collect();
        Self { modulus, roots }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, r: i64) -> Complex64 {
        self.roots[r.rem_euclid(self.modulus as i64) as usize]
    }
}

pub fn gcd(a: i64, b: i64) -> u64 {
    a.gcd(&b) as u64
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let m_i = m as i128;
    let eg = (a as i128).rem_euclid(m_i).extended_gcd(&m_i);
    if eg.gcd != 1 {
        return None;
    }
    Some(eg.x.rem_euclid(m_i) as u64)
}

/// Prime factorisation by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, k)| k as u64 + 1).product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, k) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, k)| k == 1)
}

/// `(a, b^∞)`: the largest divisor of `a` supported on the primes of `b`.
pub fn saturation(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Err(LabError::domain("saturation requires a, b >= 1"));
    }
    let mut out = 1;
    let mut rest = a;
    for (p, _) in factorize(b) {
        while rest % p == 0 {
            rest /= p;
            out *= p;
        }
    }
    Ok(out)
}

/// The squarefull part `n_□`: product of the prime powers `p^a ‖ n` with `a ≥ 2`.
pub fn squarefull_part(n: u64) -> Result<u64> {
    Ok(FactorizationContext::new(n)?.squarefull_part)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationContext {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
    pub squarefull_part: u64,
    pub squarefree_part: u64,
}

impl FactorizationContext {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(LabError::domain("factorisation of 0"));
        }
        let factors = factorize(n);
        let mut squarefull_part = 1;
        let mut squarefree_part = 1;
        for &(p, k) in &factors {
            if k >= 2 {
                squarefull_part *= p.pow(k);
            } else {
                squarefree_part *= p;
            }
        }
        Ok(Self {
            n,
            factors,
            squarefull_part,
            squarefree_part,
        })
    }
}

/// Smallest-prime-factor table for `0..=n` (entries 0 and 1 are 0).
pub fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > si || m > n {
                break;
            }
            spf[m] = p;
        }
    }
    spf
}

pub fn primes_up_to(n: usize) -> Vec<u64> {
    spf_sieve(n)
        .iter()
        .enumerate()
        .filter(|&(i, &s)| i >= 2 && s as usize == i)
        .map(|(i, _)| i as u64)
        .collect()
}
