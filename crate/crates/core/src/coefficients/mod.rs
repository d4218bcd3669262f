//! GL(3) Hecke eigenvalues λ(m, n) for two concrete forms: the Eisenstein
//! series whose L-function is ζ(s)³ (so λ(1, n) = d₃(n)) and the symmetric
//! square lift of the discriminant form Δ.
//!
//! Both are generated from Satake parameters. At a prime p with Satake
//! triple α = (α₁, α₂, α₃), α₁α₂α₃ = 1,
//!
//! ```text
//! λ(p^a, p^b) = s_{(a+b, a, 0)}(α) = h_{a+b} h_a − h_{a+b+1} h_{a−1}
//! ```
//!
//! (Jacobi–Trudi), where h_k is the complete homogeneous symmetric
//! polynomial; in particular λ(1, p^k) = h_k(α). Both forms are self-dual,
//! so λ(m, n) = λ(n, m) and every value is real.

mod cache;
mod tau;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use cache::{read_cache, write_cache, CACHE_MAGIC, CACHE_VERSION};
pub use tau::{TauTable, TAU_MAX_INDEX};

use crate::arith::{factorize, gcd, mobius, spf_sieve};
use crate::error::{LabError, Result};
use crate::summation::Neumaier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    EisensteinD3,
    SymSquareDelta,
}

impl FormKind {
    pub fn code(self) -> u8 {
        match self {
            FormKind::EisensteinD3 => 0,
            FormKind::SymSquareDelta => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(FormKind::EisensteinD3),
            1 => Some(FormKind::SymSquareDelta),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FormKind::EisensteinD3 => "eisenstein-d3",
            FormKind::SymSquareDelta => "sym2delta",
        }
    }
}

impl std::str::FromStr for FormKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d3" | "eisenstein" | "eisenstein-d3" | "eisensteind3" => Ok(FormKind::EisensteinD3),
            "sym2delta" | "sym2" | "symsquaredelta" => Ok(FormKind::SymSquareDelta),
            other => Err(LabError::domain(format!("unknown form kind '{other}'"))),
        }
    }
}

/// Satake parameters at one prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatakeTriple(pub [Complex64; 3]);

impl SatakeTriple {
    pub fn trivial() -> Self {
        SatakeTriple([Complex64::new(1.0, 0.0); 3])
    }

    /// `{α², 1, α⁻²}` for a GL(2) eigenvalue `a = α + α⁻¹` with `|a| ≤ 2`.
    pub fn sym_square(a: f64) -> Self {
        let c = (a / 2.0).clamp(-1.0, 1.0);
        let theta = c.acos();
        let alpha2 = Complex64::from_polar(1.0, 2.0 * theta);
        SatakeTriple([alpha2, Complex64::new(1.0, 0.0), alpha2.conj()])
    }

    pub fn product(&self) -> Complex64 {
        self.0[0] * self.0[1] * self.0[2]
    }

    fn elementary(&self) -> [Complex64; 3] {
        let [a, b, c] = self.0;
        [a + b + c, a * b + a * c + b * c, a * b * c]
    }

    /// `h_0, …, h_kmax` by the Newton-type recurrence
    /// `h_k = e₁h_{k−1} − e₂h_{k−2} + e₃h_{k−3}`.
    pub fn complete_homogeneous(&self, kmax: usize) -> Vec<Complex64> {
        let [e1, e2, e3] = self.elementary();
        let mut h = vec![Complex64::new(0.0, 0.0); kmax + 1];
        h[0] = Complex64::new(1.0, 0.0);
        for k in 1..=kmax {
            let mut v = e1 * h[k - 1];
            if k >= 2 {
                v -= e2 * h[k - 2];
            }
            if k >= 3 {
                v += e3 * h[k - 3];
            }
            h[k] = v;
        }
        h
    }

    /// Schur value `s_{(a+b, a, 0)}` = λ(p^a, p^b).
    pub fn schur(&self, a: u32, b: u32) -> Complex64 {
        let (a, b) = (a as usize, b as usize);
        let h = self.complete_homogeneous(a + b + 1);
        let lower = if a >= 1 { h[a - 1] } else { Complex64::new(0.0, 0.0) };
        h[a + b] * h[a] - h[a + b + 1] * lower
    }
}

/// Langlands parameters (μ₁, μ₂, μ₃) at the archimedean place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub mu: [Complex64; 3],
}

impl SpectralParams {
    pub fn new(mu: [Complex64; 3]) -> Result<Self> {
        let sum: Complex64 = mu.iter().sum();
        if sum.norm() > 1e-12 {
            return Err(LabError::domain("Langlands parameters must sum to 0"));
        }
        if mu.iter().any(|m| m.re.abs() >= 0.5) {
            return Err(LabError::domain("Langlands parameters need |Re μ| < 1/2"));
        }
        Ok(Self { mu })
    }

    pub fn eisenstein() -> Self {
        Self {
            mu: [Complex64::new(0.0, 0.0); 3],
        }
    }
}

/// Table of λ(1, n) for `n ≤ max_index` plus the Satake data behind it.
#[derive(Debug, Clone)]
pub struct CoefficientProvider {
    kind: FormKind,
    max_index: usize,
    table: Vec<f64>,
    primes: Vec<u64>,
    satake: Vec<SatakeTriple>,
}

impl CoefficientProvider {
    pub fn build(kind: FormKind, max_index: usize) -> Result<Self> {
        if max_index == 0 {
            return Err(LabError::domain("coefficient table needs N >= 1"));
        }
        let spf = spf_sieve(max_index);
        let primes: Vec<u64> = (2..=max_index)
            .filter(|&i| spf[i] as usize == i)
            .map(|i| i as u64)
            .collect();
        let satake = match kind {
            FormKind::EisensteinD3 => vec![SatakeTriple::trivial(); primes.len()],
            FormKind::SymSquareDelta => {
                let taus = TauTable::new(max_index)?;
                primes
                    .iter()
                    .map(|&p| {
                        let a = taus.get_f64(p as usize) / (p as f64).powf(5.5);
                        SatakeTriple::sym_square(a)
                    })
                    .collect()
            }
        };
        Ok(Self::assemble(kind, max_index, &spf, primes, satake))
    }

    /// Rebuild a provider from a stored λ(1, ·) table.
    pub fn from_table(kind: FormKind, table: Vec<f64>) -> Result<Self> {
        let max_index = table.len();
        if max_index == 0 {
            return Err(LabError::domain("empty coefficient table"));
        }
        if table[0] != 1.0 {
            return Err(LabError::Format("λ(1,1) must equal 1".into()));
        }
        let spf = spf_sieve(max_index);
        let primes: Vec<u64> = (2..=max_index)
            .filter(|&i| spf[i] as usize == i)
            .map(|i| i as u64)
            .collect();
        let satake = primes
            .iter()
            .map(|&p| match kind {
                FormKind::EisensteinD3 => SatakeTriple::trivial(),
                // λ(1, p) = a_p² − 1 determines the symmetric-square triple.
                FormKind::SymSquareDelta => {
                    SatakeTriple::sym_square((table[p as usize - 1] + 1.0).max(0.0).sqrt())
                }
            })
            .collect();
        let provider = Self::assemble(kind, max_index, &spf, primes, satake);
        let drift = provider
            .table
            .iter()
            .zip(&table)
            .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
            .fold(0.0, f64::max);
        if drift > 1e-9 {
            return Err(LabError::Format(format!(
                "stored table is not multiplicative (relative drift {drift:e})"
            )));
        }
        Ok(Self { table, ..provider })
    }

    fn assemble(
        kind: FormKind,
        max_index: usize,
        spf: &[u32],
        primes: Vec<u64>,
        satake: Vec<SatakeTriple>,
    ) -> Self {
        let mut table = vec![0.0f64; max_index];
        table[0] = 1.0;
        // Prime-power values h_k(p), computed once per prime.
        let mut prime_powers: Vec<Vec<f64>> = Vec::with_capacity(primes.len());
        for (&p, s) in primes.iter().zip(&satake) {
            let mut kmax = 0;
            let mut pk = 1usize;
            while pk <= max_index / p as usize {
                pk *= p as usize;
                kmax += 1;
            }
            prime_powers.push(s.complete_homogeneous(kmax).iter().map(|z| z.re).collect());
        }
        let prime_index = |p: u64| primes.binary_search(&p).expect("prime in table");
        for n in 2..=max_index {
            let p = spf[n] as usize;
            let mut m = n;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            table[n - 1] = table[m - 1] * prime_powers[prime_index(p as u64)][k];
        }
        Self {
            kind,
            max_index,
            table,
            primes,
            satake,
        }
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// λ(1, n) for n = 1..=N, stored at index n − 1.
    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// λ(1, n).
    pub fn lambda(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.max_index {
            return Err(LabError::range(format!("index {n} outside 1..={}", self.max_index)));
        }
        Ok(self.table[n - 1])
    }

    pub fn satake(&self, p: u64) -> Option<SatakeTriple> {
        match self.kind {
            FormKind::EisensteinD3 => Some(SatakeTriple::trivial()),
            FormKind::SymSquareDelta => self.primes.binary_search(&p).ok().map(|i| self.satake[i]),
        }
    }

    pub fn prime_satake(&self) -> impl Iterator<Item = (u64, SatakeTriple)> + '_ {
        self.primes.iter().copied().zip(self.satake.iter().copied())
    }

    /// Archimedean parameters in the Maass normalisation, when the form has one.
    pub fn spectral_params(&self) -> Option<SpectralParams> {
        match self.kind {
            FormKind::EisensteinD3 => Some(SpectralParams::eisenstein()),
            FormKind::SymSquareDelta => None,
        }
    }
}

/// λ(m, n) from per-prime Schur polynomials.
pub fn lambda2(provider: &CoefficientProvider, m: u64, n: u64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(LabError::domain("lambda2 needs m, n >= 1"));
    }
    let fm = factorize(m);
    let fn_ = factorize(n);
    let mut primes: Vec<u64> = fm.iter().chain(fn_.iter()).map(|&(p, _)| p).collect();
    primes.sort_unstable();
    primes.dedup();
    let exp_of = |f: &[(u64, u32)], p: u64| f.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, k)| k);
    let mut value = Complex64::new(1.0, 0.0);
    for p in primes {
        let s = provider.satake(p).ok_or_else(|| {
            LabError::range(format!("no Satake data at p = {p} (table ends at {})", provider.max_index))
        })?;
        value *= s.schur(exp_of(&fm, p), exp_of(&fn_, p));
    }
    Ok(value.re)
}

/// λ(m, n) through the Möbius-inverted Hecke relation and the λ(1, ·) table.
pub fn lambda2_from_table(provider: &CoefficientProvider, m: usize, n: usize) -> f64 {
    let t = provider.table();
    let g = gcd(m as i64, n as i64) as usize;
    if g == 1 {
        return t[m - 1] * t[n - 1];
    }
    crate::arith::divisors(g as u64)
        .into_iter()
        .map(|d| {
            let d = d as usize;
            mobius(d as u64) as f64 * t[m / d - 1] * t[n / d - 1]
        })
        .sum()
}

/// `(Σ_{n₁²n₂ ≤ N} |λ(n₂, n₁)|²) / N`.
pub fn rankin_selberg_ratio(provider: &CoefficientProvider, n_max: usize) -> Result<f64> {
    if n_max == 0 || n_max > provider.max_index() {
        return Err(LabError::range(format!(
            "Rankin–Selberg range {n_max} outside 1..={}",
            provider.max_index()
        )));
    }
    let mut acc = Neumaier::new();
    let mut n1 = 1usize;
    while n1 * n1 <= n_max {
        for n2 in 1..=n_max / (n1 * n1) {
            let v = lambda2_from_table(provider, n2, n1);
            acc.add(v * v);
        }
        n1 += 1;
    }
    Ok(acc.value() / n_max as f64)
}

pub const KIM_SARNAK_EXPONENT: f64 = 5.0 / 14.0;
pub const KIM_SARNAK_EPS: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KimSarnakReport {
    pub max_ratio: f64,
    pub argmax: usize,
    pub exponent: f64,
}

/// Largest `|λ(1, n)| / n^{5/14 + 0.03}` over `n ≤ N`.
pub fn check_kim_sarnak(provider: &CoefficientProvider, n_max: usize) -> Result<KimSarnakReport> {
    if n_max == 0 || n_max > provider.max_index() {
        return Err(LabError::range(format!("scan range {n_max} outside table")));
    }
    let exponent = KIM_SARNAK_EXPONENT + KIM_SARNAK_EPS;
    let (argmax, max_ratio) = provider.table()[..n_max]
        .iter()
        .enumerate()
        .map(|(i, &v)| (i + 1, v.abs() / ((i + 1) as f64).powf(exponent)))
        .fold((1, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(KimSarnakReport {
        max_ratio,
        argmax,
        exponent,
    })
}

/// GL(2) normalised Hecke eigenvalue τ(p)/p^{11/2} used for the Satake data.
pub fn delta_normalised(tau_p: f64, p: u64) -> f64 {
    tau_p / (p as f64).powf(5.5)
}

/// Angle θ_p with τ(p)/p^{11/2} = 2 cos θ_p.
pub fn sato_tate_angle(a_p: f64) -> f64 {
    (a_p / 2.0).clamp(-1.0, 1.0).acos() / PI
}
