//! `𝒞_1(A,B) = S(…; C)`, `𝒞_{k+1}(A,B) = Σ_γ 𝒞_k(γ,A) 𝒞_k(γ,B)`.
//!
//! With `M_k[γ][δ] = 𝒞_k(γ, δ)` over the admissible residues `γ, δ`, the
//! recursion is `M_{k+1} = M_kᵀ M_k`. Single entries at level `k` only need
//! `M_1, …, M_{k−2}` and two column vectors.

use std::io::Write;

use super::kloosterman;
use crate::arith::{gcd, is_squarefree, mod_inverse, saturation, FactorizationContext};
use crate::error::{LabError, Result};
use crate::summation::Neumaier;

/// Measured suprema of the ratio for primes `C ≤ 97`, `u, v ≤ 3`, `k = 1, 2, 3`
/// were 1.97, 8.03 and 111.1; `k = 1` uses the Weil constant `d(p) = 2`.
pub const A1_ENVELOPE_CONSTANTS: [f64; 3] = [2.0, 12.0, 160.0];

/// Default cap on the estimated number of arithmetic operations.
pub const DEFAULT_OP_BUDGET: f64 = 2e9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursiveValue {
    pub value: f64,
    pub envelope: f64,
    /// `|value| / envelope`.
    pub bound_ratio: f64,
}

type Matrix = Vec<Vec<f64>>;

/// `Mᵀ M`.
fn gram(m: &Matrix) -> Matrix {
    let n = m.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let s: Neumaier = (0..n).map(|g| m[g][i] * m[g][j]).collect();
            out[i][j] = s.value();
            out[j][i] = out[i][j];
        }
    }
    out
}

/// `Mᵀ v`.
fn apply_transpose(m: &Matrix, v: &[f64]) -> Vec<f64> {
    (0..m.len())
        .map(|i| (0..m.len()).map(|g| m[g][i] * v[g]).collect::<Neumaier>().value())
        .collect()
}


struct Recursion<F: Fn(i64, i64) -> Result<f64>> {
    residues: Vec<i64>,
    base: F,
    /// Cost of one base evaluation.
    base_cost: f64,
}


impl<F: Fn(i64, i64) -> Result<f64>> Recursion<F> {
    fn check_budget(&self, k: u32, full_table: bool, budget: f64) -> Result<()> {
        let n = self.residues.len() as f64;
        let levels = if full_table { k.saturating_sub(1) } else { k.saturating_sub(2) } as f64;
        let table = if k >= 3 || full_table { n * n * self.base_cost } else { 2.0 * n * self.base_cost };
        let ops = table + levels * n * n * n;
        if ops > budget {
            return Err(LabError::Resource(format!(
                "recursive sum needs about {ops:.3e} operations, budget {budget:.3e}"
            )));
        }
        Ok(())
    }

    fn base_table(&self) -> Result<Matrix> {
        self.residues
            .iter()
            .map(|&x| self.residues.iter().map(|&y| (self.base)(x, y)).collect())
            .collect()
    }

    fn column(&self, a: i64) -> Result<Vec<f64>> {
        self.residues.iter().map(|&g| (self.base)(g, a)).collect()
    }

    fn entry(&self, k: u32, a: i64, b: i64, budget: f64) -> Result<f64> {
        self.check_budget(k, false, budget)?;
        if k == 1 {
            return (self.base)(a, b);
        }
        let (mut va, mut vb) = (self.column(a)?, self.column(b)?);
        if k >= 3 {
            let mut m = self.base_table()?;
            for level in 1..=k - 2 {
                va = apply_transpose(&m, &va);
                vb = apply_transpose(&m, &vb);
                if level < k - 2 {
                    m = gram(&m);
                }
            }
        }
        Ok(va.iter().zip(&vb).map(|(x, y)| x * y).collect::<Neumaier>().value())
    }

    #[cfg(test)]
    fn table(&self, k: u32, budget: f64) -> Result<Matrix> {
        self.check_budget(k, true, budget)?;
        let mut m = self.base_table()?;
        for _ in 1..k {
            m = gram(&m);
        }
        Ok(m)
    }
}

/// Key of the sum with squarefree modulus `C` and `γ` over units mod `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimpleKey {
    pub u: i64,
    pub v: i64,
    pub c: u64,
    pub k: u32,
    pub a: i64,
    pub b: i64,
}

fn inv(x: i64, m: u64) -> Result<i64> {
    mod_inverse(x, m)
        .map(|v| v as i64)
        .ok_or_else(|| LabError::domain(format!("{x} is not invertible mod {m}")))
}

/// `S(x, y; c)` for all residues `x, y mod c`.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    c: u64,
    values: Vec<f64>,
}

impl KloostermanTable {
    pub fn new(c: u64) -> Result<Self> {
        let n = c as usize;
        let mut values = vec![0.0; n * n];
        for x in 0..n {
            for y in x..n {
                // S(x, y; c) = S(y, x; c) via x ↦ x̄.
                let s = kloosterman(x as i64, y as i64, c)?;
                values[x * n + y] = s;
                values[y * n + x] = s;
            }
        }
        Ok(Self { c, values })
    }

    pub fn get(&self, x: i128, y: i128) -> f64 {
        let c = self.c as i128;
        self.values[(x.rem_euclid(c) * c + y.rem_euclid(c)) as usize]
    }
}

fn simple_recursion(u: i64, v: i64, table: &KloostermanTable) -> Recursion<impl Fn(i64, i64) -> Result<f64> + '_> {
    let c = table.c;
    let residues = (0..c as i64).filter(|&g| gcd(g, c as i64) == 1).collect();
    let base = move |x: i64, y: i64| -> Result<f64> {
        let d = inv(x, c)? - inv(y, c)?;
        Ok(table.get(u as i128 * d as i128, v as i128 * (x - y) as i128))
    };
    Recursion { residues, base, base_cost: 1.0 }
}

fn simple_envelope(key: &SimpleKey) -> f64 {
    let c = key.c as i64;
    let cuv = gcd(c, key.u * key.v) as f64;
    let exponent = (1u64 << (key.k - 1)) as f64 - 0.5;
    (cuv * key.c as f64).powf(exponent) * (gcd(c, key.a - key.b) as f64).sqrt()
}

fn validate_simple(key: &SimpleKey) -> Result<()> {
    if key.k == 0 {
        return Err(LabError::domain("recursion depth k must be >= 1"));
    }
    if !is_squarefree(key.c) {
        return Err(LabError::domain(format!("C = {} must be squarefree", key.c)));
    }
    if gcd(key.a, key.c as i64) != 1 || gcd(key.b, key.c as i64) != 1 {
        return Err(LabError::domain("A and B must be coprime to C"));
    }
    Ok(())
}

pub fn recursive_charsum_a1(key: &SimpleKey, budget: f64) -> Result<RecursiveValue> {
    validate_simple(key)?;
    let table = KloostermanTable::new(key.c)?;
    let value = simple_recursion(key.u, key.v, &table).entry(key.k, key.a, key.b, budget)?;
    let envelope = simple_envelope(key);
    Ok(RecursiveValue { value, envelope, bound_ratio: value.abs() / envelope })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub c: u64,
    pub k: u32,
    pub u: i64,
    pub v: i64,
    pub a: i64,
    pub b: i64,
    pub abs_value: f64,
    pub envelope: f64,
    pub ratio: f64,
}

/// Bound ratios at every level `1..=k_max` for all distinct units `A ≠ B` mod `C`.
pub fn a1_bound_sweep(
    u: i64,
    v: i64,
    table: &KloostermanTable,
    k_max: u32,
    budget: f64,
) -> Result<Vec<BoundRow>> {
    let c = table.c;
    validate_simple(&SimpleKey { u, v, c, k: k_max, a: 1, b: 1 })?;
    let rec = simple_recursion(u, v, table);
    rec.check_budget(k_max, true, budget)?;
    let mut m = rec.base_table()?;
    let mut rows = Vec::new();
    for k in 1..=k_max {
        if k > 1 {
            m = gram(&m);
        }
        for (i, &a) in rec.residues.iter().enumerate() {
            for (j, &b) in rec.residues.iter().enumerate() {
                if a == b {
                    continue;
                }
                let envelope = simple_envelope(&SimpleKey { u, v, c, k, a, b });
                let abs_value = m[i][j].abs();
                rows.push(BoundRow { c, k, u, v, a, b, abs_value, envelope, ratio: abs_value / envelope });
            }
        }
    }
    Ok(rows)
}

pub const BOUND_CSV_HEADER: &str = "C,k,u,v,A,B,abs_value,envelope,ratio";

pub fn write_bound_csv<W: Write>(mut out: W, rows: &[BoundRow]) -> Result<()> {
    writeln!(out, "{BOUND_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.16e},{:.16e},{:.16e}",
            r.c, r.k, r.u, r.v, r.a, r.b, r.abs_value, r.envelope, r.ratio
        )?;
    }
    Ok(())
}

/// Key of the general sum: `C | Q`, `q₁, q₂, q₃ | q | Q`, `(q₃, CQ/q₃) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneralKey {
    pub u: i64,
    pub v: i64,
    pub c: u64,
    pub q: u64,
    pub q1: u64,
    pub q2: u64,
    pub q3: u64,
    pub big_q: u64,
    pub k: u32,
    pub a: i64,
    pub b: i64,
}

impl GeneralKey {
    fn validate(&self) -> Result<()> {
        let GeneralKey { c, q, q1, q2, q3, big_q, .. } = *self;
        if [c, q, q1, q2, q3, big_q].contains(&0) || self.k == 0 {
            return Err(LabError::domain("moduli and k must be >= 1"));
        }
        if big_q % c != 0 || big_q % q != 0 || q % q1 != 0 || q % q2 != 0 || q % q3 != 0 {
            return Err(LabError::domain("need C | Q and q1, q2, q3 | q | Q"));
        }
        if gcd(q3 as i64, (c * big_q / q3) as i64) != 1 {
            return Err(LabError::domain("need (q3, CQ/q3) = 1"));
        }
        if gcd(q1 as i64, q3 as i64) != 1 {
            return Err(LabError::domain("need (q1, q3) = 1 so that residues stay invertible"));
        }
        let m = (c * q1) as i64;
        if gcd(self.a, m) != 1 || gcd(self.b, m) != 1 {
            return Err(LabError::domain("A and B must be coprime to C·q1"));
        }
        Ok(())
    }

    /// `(C₀, C₁, C₂)` with `C₀ = (C, q^∞)` and `C/C₀ = C₁C₂`, `C₁` squarefull, `C₂` squarefree.
    pub fn modulus_split(&self) -> Result<(u64, u64, u64)> {
        let c0 = saturation(self.c, self.q)?;
        let ctx = FactorizationContext::new(self.c / c0)?;
        Ok((c0, ctx.squarefull_part, ctx.squarefree_part))
    }

    /// `(Q/q · C₁ (C₂, uv) C₀)^{2^{k−1}}`.
    pub fn envelope(&self) -> Result<f64> {
        let (c0, c1, c2) = self.modulus_split()?;
        let base = (self.big_q / self.q) as f64
            * c1 as f64
            * gcd(c2 as i64, self.u * self.v) as f64
            * c0 as f64;
        Ok(base.powf((1u64 << (self.k - 1)) as f64))
    }
}

/// Inverses are taken mod `C·q₁`; `A`, `B` are reduced mod `Q` first.
pub fn recursive_charsum_a2(key: &GeneralKey, budget: f64) -> Result<RecursiveValue> {
    key.validate()?;
    let GeneralKey { u, v, c, q, q1, q2, q3, big_q, .. } = *key;
    let inv_mod = c * q1;
    let residues = (0..big_q as i64).filter(|&g| gcd(g, (big_q / q3) as i64) == 1).collect();
    let base = move |x: i64, y: i64| -> Result<f64> {
        if (x - y).rem_euclid(q as i64) != 0 {
            return Ok(0.0);
        }
        let d = inv(x, inv_mod)? - inv(y, inv_mod)?;
        let first = u as i128 * (d / q1 as i64) as i128;
        let second = v as i128 * ((x - y) / q2 as i64) as i128;
        kloosterman(
            first.rem_euclid(c as i128) as i64,
            second.rem_euclid(c as i128) as i64,
            c,
        )
    };
    let rec = Recursion { residues, base, base_cost: c as f64 };
    let qi = big_q as i64;
    let value = rec.entry(key.k, key.a.rem_euclid(qi), key.b.rem_euclid(qi), budget)?;
    let envelope = key.envelope()?;
    Ok(RecursiveValue { value, envelope, bound_ratio: value.abs() / envelope })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple(k: u32, a: i64, b: i64) -> SimpleKey {
        SimpleKey { u: 1, v: 1, c: 5, k, a, b }
    }

    #[test]
    fn first_level_values() {
        let r = recursive_charsum_a1(&simple(1, 1, 2), DEFAULT_OP_BUDGET).unwrap();
        assert!((r.value + 1.0 + 5f64.sqrt()).abs() < 1e-12);
        let r = recursive_charsum_a1(&simple(1, 1, 1), DEFAULT_OP_BUDGET).unwrap();
        assert!((r.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn entry_matches_table() {
        let t = KloostermanTable::new(7).unwrap();
        let rec = simple_recursion(2, 3, &t);
        let m = rec.table(3, DEFAULT_OP_BUDGET).unwrap();
        let e = rec.entry(3, 2, 5, DEFAULT_OP_BUDGET).unwrap();
        assert!((m[1][4] - e).abs() < 1e-9 * e.abs().max(1.0));
    }

    #[test]
    fn rejects_bad_keys() {
        let bad = SimpleKey { c: 12, ..simple(1, 1, 5) };
        assert!(recursive_charsum_a1(&bad, DEFAULT_OP_BUDGET).is_err());
        let r = recursive_charsum_a1(&SimpleKey { c: 97, k: 4, ..simple(4, 1, 2) }, 1e3);
        assert!(matches!(r, Err(LabError::Resource(_))));
    }

    #[test]
    fn general_delta_factor() {
        let key = GeneralKey { u: 1, v: 1, c: 6, q: 2, q1: 1, q2: 1, q3: 1, big_q: 6, k: 1, a: 1, b: 4 };
        assert!(key.validate().is_err());
        let key = GeneralKey { a: 1, b: 5, ..key };
        let r = recursive_charsum_a2(&key, DEFAULT_OP_BUDGET).unwrap();
        // inverses mod 6: 1̄ = 1, 5̄ = 5; S(1·(1 − 5), 1·(1 − 5); 6) = S(2, 2; 6)
        assert!((r.value - kloosterman(2, 2, 6).unwrap()).abs() < 1e-12);
        let off = GeneralKey { q: 3, q1: 1, q2: 1, q3: 1, a: 1, b: 5, ..key };
        assert_eq!(recursive_charsum_a2(&off, DEFAULT_OP_BUDGET).unwrap().value, 0.0);
    }
}
