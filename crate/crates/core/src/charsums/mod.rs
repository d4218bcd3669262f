//! Kloosterman and Ramanujan sums, the correlation sum `𝒞^±` and the
//! recursively defined sums `𝒞_k`.

mod recursive;

use num_complex::Complex64;

pub use crate::arith::{saturation, squarefull_part, FactorizationContext};
pub use recursive::{
    a1_bound_sweep, recursive_charsum_a1, KloostermanTable, recursive_charsum_a2, write_bound_csv, BoundRow, GeneralKey, RecursiveValue,
    SimpleKey, A1_ENVELOPE_CONSTANTS, BOUND_CSV_HEADER, DEFAULT_OP_BUDGET,
};

use crate::arith::{factorize, gcd, mobius, mod_inverse, RootTable};
use crate::error::{LabError, Result};
use crate::summation::ComplexNeumaier;

/// `S(a, b; c)` for a prime power `c`, by enumeration.
fn kloosterman_prime_power(a: i64, b: i64, c: u64, p: u64) -> f64 {
    if c == 1 {
        return 1.0;
    }
    let roots = RootTable::new(c);
    let ci = c as i64;
    let (a, b) = (a.rem_euclid(ci), b.rem_euclid(ci));
    let mut acc = ComplexNeumaier::new();
    for x in 1..ci {
        if x as u64 % p == 0 {
            continue;
        }
        let xbar = mod_inverse(x, c).expect("unit") as i64;
        let r = ((a as i128 * x as i128 + b as i128 * xbar as i128) % ci as i128) as i64;
        acc.add(roots.get(r));
    }
    let v = acc.value();
    debug_assert!(v.im.abs() < 1e-9 * (c as f64).max(1.0), "Kloosterman sum not real: {v}");
    v.re
}

/// `S(a, b; c) = Σ_{x mod c, (x,c)=1} e((ax + b x̄)/c)` via twisted multiplicativity.
pub fn kloosterman(a: i64, b: i64, c: u64) -> Result<f64> {
    if c == 0 {
        return Err(LabError::domain("Kloosterman modulus must be >= 1"));
    }
    let mut out = 1.0;
    let mut rest = c;
    let (mut a, mut b) = (a as i128, b as i128);
    for (p, k) in factorize(c) {
        let pk = p.pow(k);
        rest /= pk;
        // S(a, b; pk·rest) = S(a r̄, b r̄; pk) · S(a p̄k, b p̄k; rest)
        let rbar = mod_inverse(rest as i64 % pk as i64, pk).expect("coprime") as i128;
        let pk_i = pk as i128;
        let (ap, bp) = ((a * rbar).rem_euclid(pk_i) as i64, (b * rbar).rem_euclid(pk_i) as i64);
        out *= kloosterman_prime_power(ap, bp, pk, p);
        if rest > 1 {
            let r_i = rest as i128;
            let pkbar = mod_inverse((pk % rest) as i64, rest).expect("coprime") as i128;
            a = (a.rem_euclid(r_i) * pkbar).rem_euclid(r_i);
            b = (b.rem_euclid(r_i) * pkbar).rem_euclid(r_i);
        }
    }
    Ok(out)
}

/// Ramanujan sum `c_q(n) = S(n, 0; q)`, evaluated as `Σ_{d | (n,q)} μ(q/d) d`.
pub fn ramanujan(n: i64, q: u64) -> Result<i64> {
    if q == 0 {
        return Err(LabError::domain("Ramanujan modulus must be >= 1"));
    }
    let g = gcd(n, q as i64);
    Ok(crate::arith::divisors(g)
        .into_iter()
        .map(|d| mobius(q / d) * d as i64)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrelationSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CorrelationKey {
    pub m: i64,
    pub n1: i64,
    pub n2: i64,
    pub c1: u64,
    pub c2: u64,
    pub sign: CorrelationSign,
}

impl CorrelationKey {
    fn inverses(&self) -> Result<(i64, i64)> {
        if self.c1 == 0 || self.c2 == 0 {
            return Err(LabError::domain("moduli must be >= 1"));
        }
        let n1 = mod_inverse(self.n1, self.c1)
            .ok_or_else(|| LabError::domain("n1 must be coprime to c1"))?;
        let n2 = mod_inverse(self.n2, self.c2)
            .ok_or_else(|| LabError::domain("n2 must be coprime to c2"))?;
        Ok((n1 as i64, n2 as i64))
    }
}

/// `𝒞^±(m, n₁, n₂; c₁, c₂) = Σ_{γ mod c₁c₂} S(±γ, n̄₁; c₁) S(±γ, n̄₂; c₂) e(mγ/(c₁c₂))`.
pub fn correlation_sum(key: &CorrelationKey) -> Result<Complex64> {
    let (n1bar, n2bar) = key.inverses()?;
    let s = match key.sign {
        CorrelationSign::Plus => 1,
        CorrelationSign::Minus => -1,
    };
    let row = |c: u64, nbar: i64| -> Result<Vec<f64>> {
        (0..c as i64).map(|g| kloosterman(s * g, nbar, c)).collect()
    };
    let k1 = row(key.c1, n1bar)?;
    let k2 = row(key.c2, n2bar)?;
    let modulus = key.c1 * key.c2;
    let roots = RootTable::new(modulus);
    let mut acc = ComplexNeumaier::new();
    for g in 0..modulus {
        let w = k1[(g % key.c1) as usize] * k2[(g % key.c2) as usize];
        if w != 0.0 {
            acc.add(w * roots.get((key.m as i128 * g as i128).rem_euclid(modulus as i128) as i64));
        }
    }
    Ok(acc.value())
}

/// Closed form at `m = 0`: `c₁² δ(c₁ = c₂) Σ_{ac' = c₁} μ(a) c' δ(n₁ ≡ n₂ mod c')`.
pub fn closed_form_m0(key: &CorrelationKey) -> Result<i64> {
    key.inverses()?;
    if key.m != 0 {
        return Err(LabError::domain("closed form applies at m = 0 only"));
    }
    if key.c1 != key.c2 {
        return Ok(0);
    }
    let c = key.c1;
    let inner: i64 = crate::arith::divisors(c)
        .into_iter()
        .filter(|&cp| (key.n1 - key.n2).rem_euclid(cp as i64) == 0)
        .map(|cp| mobius(c / cp) * cp as i64)
        .sum();
    Ok((c * c) as i64 * inner)
}

/// `a·ā + b·b̄ ≡ 1 (mod ab)` with `ā` the inverse of `a` mod `b` and `b̄` that
/// of `b` mod `a`, i.e. `ā/b + b̄/a ≡ 1/(ab) (mod 1)`.
pub fn additive_reciprocity_holds(a: u64, b: u64) -> Result<bool> {
    if a == 0 || b == 0 || gcd(a as i64, b as i64) != 1 {
        return Err(LabError::domain("additive reciprocity needs coprime positive a, b"));
    }
    let abar = mod_inverse(a as i64, b).expect("coprime") as u128;
    let bbar = mod_inverse(b as i64, a).expect("coprime") as u128;
    let ab = a as u128 * b as u128;
    Ok((a as u128 * abar + b as u128 * bbar) % ab == 1 % ab)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_kloosterman_values() {
        assert!((kloosterman(1, 1, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!((kloosterman(1, 1, 3).unwrap() + 1.0).abs() < 1e-12);
        assert!((kloosterman(3, 4, 5).unwrap() + 1.0 + 5f64.sqrt()).abs() < 1e-12);
        assert!((kloosterman(1, 0, 6).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(ramanujan(1, 6).unwrap(), 1);
        assert_eq!(ramanujan(0, 12).unwrap(), 4);
    }

    #[test]
    fn worked_correlation_value() {
        let key = CorrelationKey { m: 0, n1: 1, n2: 1, c1: 3, c2: 3, sign: CorrelationSign::Plus };
        assert!((correlation_sum(&key).unwrap() - 18.0).norm() < 1e-9);
        assert_eq!(closed_form_m0(&key).unwrap(), 18);
        let off = CorrelationKey { c1: 2, c2: 3, ..key };
        assert_eq!(closed_form_m0(&off).unwrap(), 0);
        let bad = CorrelationKey { n1: 3, ..key };
        assert!(correlation_sum(&bad).is_err());
    }

    #[test]
    fn reciprocity() {
        assert!(additive_reciprocity_holds(7, 10).unwrap());
        assert!(additive_reciprocity_holds(1, 5).unwrap());
        assert!(additive_reciprocity_holds(4, 6).is_err());
    }
}
