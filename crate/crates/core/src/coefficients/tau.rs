//! Exact Ramanujan τ(n) from the q-expansion of Δ.
//!
//! Δ(q) = q ∏ (1 - qⁿ)²⁴ and Jacobi's identity gives
//! ∏ (1 - qⁿ)³ = Σ_{k≥0} (-1)ᵏ (2k+1) q^{k(k+1)/2}. The cube is squared
//! once in exact integers (a sparse product), then squared twice more
//! with number-theoretic transforms modulo several NTT-friendly primes.
//! Every coefficient is recovered exactly by the Chinese remainder theorem.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{LabError, Result};

/// Primes `p = k·2^25 + 1 < 2^31` with a primitive root.
const NTT_PRIMES: [(u64, u64); 7] = [
    (2_113_929_217, 5),
    (2_013_265_921, 31),
    (1_811_939_329, 13),
    (1_711_276_033, 29),
    (1_107_296_257, 10),
    (469_762_049, 3),
    (167_772_161, 3),
];

/// Largest transform length supported by every prime above.
const MAX_LOG_LEN: u32 = 25;

/// Largest index for which τ can be produced.
pub const TAU_MAX_INDEX: usize = 1 << (MAX_LOG_LEN - 1);

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn ntt(a: &mut [u64], p: u64, g: u64, invert: bool) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(g, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut t = 1u64;
        for _ in 0..half {
            twiddles.push(t);
            t = t * w % p;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = hi[k] * twiddles[k] % p;
                lo[k] = if u + v >= p { u + v - p } else { u + v };
                hi[k] = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * n_inv % p;
        }
    }
}

/// Square a truncated power series modulo `p`, keeping `len` coefficients.
fn square_truncated(series: &[u64], len: usize, p: u64, g: u64) -> Vec<u64> {
    let size = (2 * len).next_power_of_two();
    let mut a = vec![0u64; size];
    a[..series.len().min(len)].copy_from_slice(&series[..series.len().min(len)]);
    ntt(&mut a, p, g, false);
    for x in a.iter_mut() {
        *x = *x * *x % p;
    }
    ntt(&mut a, p, g, true);
    a.truncate(len);
    a
}

/// Coefficients of ∏(1-qⁿ)⁶ up to q^{len-1}, in exact integers.
fn eta_sixth(len: usize) -> Vec<i64> {
    let mut terms: Vec<(usize, i64)> = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let c = (2 * k + 1) as i64 * if k % 2 == 0 { 1 } else { -1 };
        terms.push((e, c));
        k += 1;
    }
    let mut out = vec![0i64; len];
    for (i, &(ei, ci)) in terms.iter().enumerate() {
        for &(ej, cj) in &terms[i..] {
            let idx = ei + ej;
            if idx >= len {
                break;
            }
            let mult = if ej == ei { 1 } else { 2 };
            out[idx] += mult * ci * cj;
        }
    }
    out
}

/// Exact τ(n) for `1 ≤ n ≤ max_index`, stored as residues.
#[derive(Debug, Clone)]
pub struct TauTable {
    max_index: usize,
    moduli: Vec<u64>,
    residues: Vec<Vec<u32>>,
}

impl TauTable {
    pub fn new(max_index: usize) -> Result<Self> {
        if max_index == 0 {
            return Err(LabError::domain("tau table needs max_index >= 1"));
        }
        if max_index > TAU_MAX_INDEX {
            return Err(LabError::range(format!(
                "exact tau limited to n <= {TAU_MAX_INDEX}, requested {max_index}"
            )));
        }
        // |τ(n)| ≤ d(n) n^{11/2} ≤ 2√n · n^{11/2}; keep a 2-bit sign/safety margin.
        let bits_needed = 6.0 * (max_index as f64).log2() + 4.0;
        let mut bits = 0.0;
        let mut count = 0;
        while bits < bits_needed {
            bits += (NTT_PRIMES[count].0 as f64).log2();
            count += 1;
        }
        let len = max_index;
        let base = eta_sixth(len);
        let residues: Vec<Vec<u32>> = NTT_PRIMES[..count]
            .par_iter()
            .map(|&(p, g)| {
                let s6: Vec<u64> = base.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
                let s12 = square_truncated(&s6, len, p, g);
                let s24 = square_truncated(&s12, len, p, g);
                s24.into_iter().map(|x| x as u32).collect()
            })
            .collect();
        Ok(Self {
            max_index,
            moduli: NTT_PRIMES[..count].iter().map(|&(p, _)| p).collect(),
            residues,
        })
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// τ(n) as an exact integer.
    pub fn get(&self, n: usize) -> BigInt {
        assert!(n >= 1 && n <= self.max_index, "tau index {n} out of range");
        // Garner's mixed-radix reconstruction.
        let k = self.moduli.len();
        let mut digits = vec![0u64; k];
        for i in 0..k {
            let p = self.moduli[i];
            let mut x = self.residues[i][n - 1] as u64;
            for j in 0..i {
                let inv = pow_mod(self.moduli[j] % p, p - 2, p);
                x = (x + p - digits[j] % p) % p * inv % p;
            }
            digits[i] = x;
        }
        let mut value = BigInt::zero();
        let mut modulus = BigInt::from(1u8);
        for i in 0..k {
            value += &modulus * digits[i];
            modulus *= self.moduli[i];
        }
        if &value * 2 > modulus {
            value -= modulus;
        }
        value
    }

    /// τ(n) as the nearest double.
    pub fn get_f64(&self, n: usize) -> f64 {
        self.get(n).to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let t = TauTable::new(12).unwrap();
        let expected: [i64; 12] = [
            1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944,
        ];
        for (n, &v) in expected.iter().enumerate() {
            assert_eq!(t.get(n + 1), BigInt::from(v), "tau({})", n + 1);
        }
    }

    #[test]
    fn ntt_square_matches_schoolbook() {
        let (p, g) = NTT_PRIMES[0];
        let a: Vec<u64> = (0..37).map(|i| (i * i + 3) % p).collect();
        let fast = square_truncated(&a, 37, p, g);
        for n in 0..37 {
            let slow = (0..=n).fold(0u64, |acc, i| (acc + a[i] * a[n - i] % p) % p);
            assert_eq!(fast[n], slow);
        }
    }

    #[test]
    fn rejects_oversized_tables() {
        assert!(matches!(TauTable::new(TAU_MAX_INDEX + 1), Err(LabError::Range(_))));
        assert!(TauTable::new(0).is_err());
    }
}
