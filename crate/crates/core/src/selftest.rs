//! Reduced invariant suite run by the `selftest` subcommand.
//!
//! Every check is small enough that the whole suite finishes in seconds on
//! one core. A check that returns an error counts as a failure.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    gk15_nodes, mellin_exp_identity, stirling_relative_error, voronoi_phase_slope, BumpKind, BumpWeight, Sign,
};
use crate::arith::{gcd, primes_up_to};
use crate::charsums::{
    a1_bound_sweep, additive_reciprocity_holds, closed_form_m0, correlation_sum, kloosterman,
    recursive_charsum_a1, recursive_charsum_a2, CorrelationKey, CorrelationSign, GeneralKey, KloostermanTable,
    SimpleKey, A1_ENVELOPE_CONSTANTS, DEFAULT_OP_BUDGET,
};
use crate::coefficients::{lambda2, lambda2_from_table, rankin_selberg_ratio, CoefficientProvider, FormKind, TauTable};
use crate::deltamethod::{delta_eval, poisson_check, DeltaExpansion};
use crate::error::Result;
use crate::expsums::{bound_calculator, twist_sum, Exponent, TwistSumSpec};
use crate::hardy::{conditional_exponents, hardy_z, hardy_zeros, zeta};
use crate::summation::with_workers;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}::{} {}", self.module, self.name, self.detail)
    }
}

type Probe = fn() -> Result<(bool, String)>;

const CHECKS: &[(&str, &str, Probe)] = &[
    ("coefficients", "hecke_relation", hecke_relation),
    ("coefficients", "tau_small_primes", tau_small_primes),
    ("coefficients", "rankin_selberg_window_sym2", rankin_selberg_window),
    ("analysis", "gk15_polynomial_exactness", gk15_exactness),
    ("analysis", "mellin_identity", mellin_identity),
    ("analysis", "stirling_error_shrinks", stirling_shrinks),
    ("analysis", "bump_plateau_and_support", bump_shape),
    ("analysis", "voronoi_phase_slope", voronoi_slope),
    ("expsums", "worker_count_reproducibility", twist_reproducible),
    ("expsums", "exponent_calculator", exponent_calculator),
    ("deltamethod", "delta_identity", delta_identity),
    ("deltamethod", "poisson_identity", poisson_identity),
    ("charsums", "weil_bound", weil_bound),
    ("charsums", "twisted_multiplicativity", twisted_multiplicativity),
    ("charsums", "correlation_m0_closed_form", correlation_m0),
    ("charsums", "additive_reciprocity", reciprocity),
    ("charsums", "a1_envelope", a1_envelope),
    ("charsums", "a2_degenerate_matches_a1", a2_degenerate),
    ("hardy", "value_at_origin", hardy_origin),
    ("hardy", "zero_count", hardy_zero_count),
    ("hardy", "conditional_exponents", hardy_exponents),
];

/// Run every check in order.
pub fn run_selftest() -> Vec<Check> {
    CHECKS
        .iter()
        .map(|&(module, name, probe)| {
            let (passed, detail) = match probe() {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            Check { module, name, passed, detail }
        })
        .collect()
}

fn hecke_relation() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for kind in [FormKind::EisensteinD3, FormKind::SymSquareDelta] {
        let p = CoefficientProvider::build(kind, 60 * 60)?;
        for m in 1..=60u64 {
            for n in 1..=60u64 {
                let direct = lambda2(&p, m, n)?;
                let table = lambda2_from_table(&p, m as usize, n as usize);
                let rel = (direct - table).abs() / direct.abs().max(1.0);
                if kind == FormKind::EisensteinD3 && direct != table {
                    return Ok((false, format!("d3 mismatch at ({m}, {n}): {direct} vs {table}")));
                }
                worst = worst.max(rel);
            }
        }
    }
    Ok((worst <= 1e-12, format!("max relative deviation {worst:.2e}")))
}

fn tau_small_primes() -> Result<(bool, String)> {
    let t = TauTable::new(32)?;
    let known: [(usize, i64); 6] = [(2, -24), (3, 252), (5, 4830), (7, -16744), (11, 534612), (13, -577738)];
    let bad: Vec<usize> = known.iter().filter(|&&(p, v)| t.get(p) != v.into()).map(|&(p, _)| p).collect();
    Ok((bad.is_empty(), format!("mismatches at {bad:?}")))
}

/// The d₃ ratio grows like a power of log N and is excluded here.
fn rankin_selberg_window() -> Result<(bool, String)> {
    let p = CoefficientProvider::build(FormKind::SymSquareDelta, 1 << 12)?;
    let r = rankin_selberg_ratio(&p, 1 << 12)?;
    Ok(((0.05..=20.0).contains(&r), format!("sym2delta ratio at N = 4096: {r:.4}")))
}

fn gk15_exactness() -> Result<(bool, String)> {
    let s: f64 = gk15_nodes(0.0, 2.0).iter().map(|&(x, w, _)| w * x.powi(12)).sum();
    let exact = 2f64.powi(13) / 13.0;
    let err = (s - exact).abs() / exact;
    Ok((err < 1e-13, format!("relative error {err:.2e}")))
}

fn mellin_identity() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for x in [0.1, 1.0, 3.0, 10.0, 40.0] {
        let r = mellin_exp_identity(x, -0.5)?;
        let exact = Complex64::new(0.0, x).exp() - 1.0;
        worst = worst.max((r.value - exact).norm());
    }
    Ok((worst < 1e-8, format!("max deviation {worst:.2e}")))
}

fn stirling_shrinks() -> Result<(bool, String)> {
    let errs: Vec<f64> = [10.0, 100.0, 1000.0, 1e5].iter().map(|&t| stirling_relative_error(0.5, t)).collect();
    Ok((errs.windows(2).all(|w| w[1] < w[0]), format!("errors {errs:?}")))
}

fn bump_shape() -> Result<(bool, String)> {
    let w = BumpWeight::new(BumpKind::PlateauOnOneTwo, 4.0)?;
    let (a, b) = w.support();
    let ok = w.value(1.5) == 1.0 && w.value(a - 1e-9) == 0.0 && w.value(b + 1e-9) == 0.0;
    Ok((ok, format!("support [{a}, {b}]")))
}

fn voronoi_slope() -> Result<(bool, String)> {
    let h = BumpWeight::narrow(1.0, 0.05)?;
    let params = crate::coefficients::SpectralParams::eisenstein();
    let s = voronoi_phase_slope(1e3, &h, &params, Sign::Plus, 1e-3)?;
    let rel = (s.measured / s.predicted - 1.0).abs();
    Ok((rel < 0.1, format!("measured/predicted − 1 = {rel:.3e}")))
}

fn twist_reproducible() -> Result<(bool, String)> {
    let p = CoefficientProvider::build(FormKind::EisensteinD3, 1 << 18)?;
    let spec = TwistSumSpec::new(p.table(), (1u64 << 18) as f64, 1.0, 2.0 / 3.0);
    let one = with_workers(1, || twist_sum(&spec))??;
    let two = with_workers(2, || twist_sum(&spec))??;
    let same = one.re.to_bits() == two.re.to_bits() && one.im.to_bits() == two.im.to_bits();
    Ok((same, format!("S = {one}")))
}

fn exponent_calculator() -> Result<(bool, String)> {
    let b = bound_calculator(1.0, Exponent::new(2, 3));
    let ok = b.exponent == Exponent::new(17, 18) && b.kms == Exponent::new(27, 28);
    Ok((ok, format!("β = 2/3 gives {} and {}", b.exponent, b.kms)))
}

fn delta_identity() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for q in [1, 3] {
        let d = DeltaExpansion::new(20.0, q)?;
        for n in -5i64..=5 {
            let expected = if n == 0 { 1.0 } else { 0.0 };
            worst = worst.max((delta_eval(&d, n, 10)? - expected).abs());
        }
    }
    Ok((worst < 1e-8, format!("max deviation {worst:.2e}")))
}

fn poisson_identity() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let v = BumpWeight::new(BumpKind::SymmetricPlateau, 2.0)?.dilate(5.0);
    let mut worst = 0.0f64;
    for c in [1usize, 4, 9] {
        let k: Vec<Complex64> = (0..c).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        worst = worst.max(poisson_check(&k, &v)?.diff);
    }
    Ok((worst < 1e-8, format!("max diff {worst:.2e}")))
}

fn weil_bound() -> Result<(bool, String)> {
    let mut violations = 0;
    for c in 1..=40u64 {
        let bound = (crate::arith::divisor_count(c) as f64) * (c as f64).sqrt();
        for a in 0..c as i64 {
            for b in 0..c as i64 {
                let g = gcd(gcd(a, b) as i64, c as i64) as f64;
                if kloosterman(a, b, c)?.abs() > bound * g.sqrt() * (1.0 + 1e-12) {
                    violations += 1;
                }
            }
        }
    }
    Ok((violations == 0, format!("{violations} violations for c ≤ 40")))
}

fn twisted_multiplicativity() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (r, s) in [(3u64, 4u64), (5, 7), (8, 9), (7, 11)] {
        let (ri, si) = (r as i64, s as i64);
        let s_bar = crate::arith::mod_inverse(si, r).unwrap_or(0) as i64;
        let r_bar = crate::arith::mod_inverse(ri, s).unwrap_or(0) as i64;
        for (a, b) in [(1i64, 1i64), (2, 5), (3, 0), (6, 13)] {
            let lhs = kloosterman(a, b, r * s)?;
            let rhs = kloosterman(s_bar * a, s_bar * b, r)? * kloosterman(r_bar * a, r_bar * b, s)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok((worst < 1e-9, format!("max deviation {worst:.2e}")))
}

fn correlation_m0() -> Result<(bool, String)> {
    let mut mismatches = 0;
    for c1 in 1..=6u64 {
        for c2 in 1..=6u64 {
            for sign in [CorrelationSign::Plus, CorrelationSign::Minus] {
                let key = CorrelationKey { m: 0, n1: 1, n2: 1, c1, c2, sign };
                let brute = correlation_sum(&key)?;
                if (brute - closed_form_m0(&key)? as f64).norm() > 1e-7 {
                    mismatches += 1;
                }
            }
        }
    }
    let worked = correlation_sum(&CorrelationKey { m: 0, n1: 1, n2: 1, c1: 3, c2: 3, sign: CorrelationSign::Plus })?;
    let ok = mismatches == 0 && (worked.re - 18.0).abs() < 1e-9;
    Ok((ok, format!("{mismatches} mismatches; value at (0,1,1;3,3) = {:.6}", worked.re)))
}

fn reciprocity() -> Result<(bool, String)> {
    let mut failures = 0;
    for a in 1..=30u64 {
        for b in 1..=30u64 {
            if gcd(a as i64, b as i64) == 1 && !additive_reciprocity_holds(a, b)? {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, format!("{failures} failures for a, b ≤ 30")))
}

fn a1_envelope() -> Result<(bool, String)> {
    let mut worst = [0.0f64; 2];
    for c in primes_up_to(13).into_iter().filter(|&p| p > 2) {
        let table = KloostermanTable::new(c)?;
        for row in a1_bound_sweep(1, 1, &table, 2, DEFAULT_OP_BUDGET)? {
            let i = row.k as usize - 1;
            worst[i] = worst[i].max(row.ratio);
        }
    }
    let ok = worst.iter().zip(A1_ENVELOPE_CONSTANTS).all(|(w, c)| *w <= c);
    Ok((ok, format!("max ratios by level {worst:?}")))
}

fn a2_degenerate() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for c in [5u64, 7] {
        for k in 1..=2 {
            for (a, b) in [(1i64, 2i64), (2, 3), (1, c as i64 - 1)] {
                let simple = recursive_charsum_a1(&SimpleKey { u: 1, v: 2, c, k, a, b }, DEFAULT_OP_BUDGET)?;
                let general = GeneralKey { u: 1, v: 2, c, q: 1, q1: 1, q2: 1, q3: 1, big_q: c, k, a, b };
                let g = recursive_charsum_a2(&general, DEFAULT_OP_BUDGET)?;
                worst = worst.max((simple.value - g.value).abs() / simple.value.abs().max(1.0));
            }
        }
    }
    Ok((worst < 1e-9, format!("max relative deviation {worst:.2e}")))
}

fn hardy_origin() -> Result<(bool, String)> {
    let z0 = hardy_z(0.0)?;
    let zeta_half = zeta(Complex64::new(0.5, 0.0))?.re;
    let err = (z0 - zeta_half).abs();
    Ok((err < 1e-6, format!("Z(0) = {z0:.12}")))
}

fn hardy_zero_count() -> Result<(bool, String)> {
    let n = hardy_zeros(0.0, 100.0, 0.05)?.len();
    Ok((n == 29, format!("{n} sign changes in [0, 100]")))
}

fn hardy_exponents() -> Result<(bool, String)> {
    let e = conditional_exponents(Exponent::new(1, 18), Exponent::new(1, 6))?;
    Ok((e.from_eta == Exponent::new(7, 6), format!("η = 1/18 gives {}", e.from_eta)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_checks_pass() {
        for (_, name, probe) in CHECKS.iter().filter(|c| matches!(c.1, "gk15_polynomial_exactness" | "exponent_calculator" | "tau_small_primes")) {
            let (ok, detail) = probe().unwrap();
            assert!(ok, "{name}: {detail}");
        }
    }
}
