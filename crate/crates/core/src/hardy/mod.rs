//! Hardy's function `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, its moments `𝓕_k(T)`,
//! the divisor-sum approximation of `𝓕₃` and the conditional exponents.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::analysis::gamma::ln_gamma_stirling;
use crate::analysis::integrate_panels_ordered;
use crate::ddouble::phase_frac;
use crate::error::{LabError, Result};
use crate::expsums::Exponent;
use crate::summation::Neumaier;

/// Euler–Maclaurin is used up to this height, Riemann–Siegel beyond; the
/// omitted `C₄` term is below 2e−7 from here on.
pub const RS_THRESHOLD: f64 = 200.0;
pub const MAX_HEIGHT: f64 = 1e5;

/// `θ(t) = Im ln Γ(1/4 + it/2) − (t/2) ln π`, continuous with `θ(0) = 0`.
pub fn theta(t: f64) -> f64 {
    // Shift by 12 so the Stirling series applies; Re(z + k) > 0 keeps every
    // logarithm on its principal, continuous branch.
    let z = Complex64::new(0.25, 0.5 * t);
    let mut acc = ln_gamma_stirling(z + 12.0);
    for k in 0..12 {
        acc -= (z + k as f64).ln();
    }
    acc.im - 0.5 * t * PI.ln()
}

/// `B_{2k}` for `k = 1..=14`.
const BERNOULLI: [f64; 14] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
];

/// `ζ(s)` by Euler–Maclaurin summation, `s ≠ 1`, `Re s > −10`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() < 1e-12 {
        return Err(LabError::domain("ζ has a pole at s = 1"));
    }
    if s.re <= -10.0 {
        return Err(LabError::domain("Euler–Maclaurin evaluation needs Re s > -10"));
    }
    let m = BERNOULLI.len();
    // Tail ratio |s + 2m| / (2πN) ≤ 1/4.
    let n = ((s.norm() + 2.0 * m as f64 + 1.0) / (0.5 * PI)).ceil().max(10.0) as u64;
    let mut re = Neumaier::new();
    let mut im = Neumaier::new();
    for k in 1..n {
        let v = (-s * (k as f64).ln()).exp();
        re.add(v.re);
        im.add(v.im);
    }
    let nf = n as f64;
    let n_pow = (-s * nf.ln()).exp();
    let mut tail = n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    // Σ B_{2j}/(2j)! · s(s+1)…(s+2j−2) N^{−s−2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut pow = n_pow / nf;
    for (j, b) in BERNOULLI.iter().enumerate() {
        tail += b / fact * rising * pow;
        let j2 = 2.0 * (j + 1) as f64;
        rising *= (s + j2 - 1.0) * (s + j2);
        fact *= (j2 + 1.0) * (j2 + 2.0);
        pow /= nf * nf;
    }
    Ok(Complex64::new(re.value(), im.value()) + tail)
}

/// `e^{iθ(t)} ζ(1/2 + it)` before discarding the (vanishing) imaginary part.
pub fn hardy_z_complex(t: f64) -> Result<Complex64> {
    Ok(Complex64::from_polar(1.0, theta(t)) * zeta(Complex64::new(0.5, t))?)
}

/// `Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp)`, entire.
fn psi(p: Complex64) -> Complex64 {
    (TAU * (p * p - p - 1.0 / 16.0)).cos() / (TAU * p).cos()
}

const CAUCHY_RADIUS: f64 = 0.5;
const CAUCHY_POINTS: usize = 64;

/// `Ψ^{(j)}(p)` for `j = 0..=9` by the trapezoid rule on Cauchy's integral.
fn psi_derivatives(p: f64) -> [f64; 10] {
    let mut coeff = [Complex64::new(0.0, 0.0); 10];
    for j in 0..CAUCHY_POINTS {
        // Half-step offset keeps every node off the real axis.
        let phi = TAU * (j as f64 + 0.5) / CAUCHY_POINTS as f64;
        let w = Complex64::from_polar(CAUCHY_RADIUS, phi);
        let f = psi(p + w);
        for (k, c) in coeff.iter_mut().enumerate() {
            *c += f * Complex64::from_polar(1.0, -(k as f64) * phi);
        }
    }
    let mut out = [0.0; 10];
    let mut fact = 1.0;
    for k in 0..10 {
        if k > 0 {
            fact *= k as f64;
        }
        out[k] = (coeff[k] / CAUCHY_POINTS as f64).re * fact / CAUCHY_RADIUS.powi(k as i32);
    }
    out
}

/// Riemann–Siegel correction coefficients `C₀ … C₃` at fractional part `p`.
fn rs_corrections(p: f64) -> [f64; 4] {
    let d = psi_derivatives(p);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    [
        d[0],
        -d[3] / (96.0 * pi2),
        d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4),
        -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5_308_416.0 * pi4 * pi2),
    ]
}

/// Riemann–Siegel formula with four correction terms, `t ≥ 2π`.
pub fn hardy_z_rs(t: f64) -> f64 {
    let a = (t / TAU).sqrt();
    let n = a.floor() as u64;
    let th = theta(t);
    let mut main = Neumaier::new();
    for k in 1..=n {
        let kf = k as f64;
        main.add((th - t * kf.ln()).cos() / kf.sqrt());
    }
    let c = rs_corrections(a - n as f64);
    let mut corr = 0.0;
    for &ck in c.iter().rev() {
        corr = corr / a + ck;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main.value() + sign * corr / a.sqrt()
}

/// Hardy's function; even in `t`.
pub fn hardy_z(t: f64) -> Result<f64> {
    let t = t.abs();
    if !(t <= MAX_HEIGHT) {
        return Err(LabError::range(format!("Z(t) implemented for |t| <= {MAX_HEIGHT}")));
    }
    if t <= RS_THRESHOLD {
        let z = hardy_z_complex(t)?;
        debug_assert!(z.im.abs() < 1e-8, "Z({t}) has imaginary residue {}", z.im);
        Ok(z.re)
    } else {
        Ok(hardy_z_rs(t))
    }
}

/// Zeros of `Z` on `[a, b]` located by sign changes on a grid of `step`
/// and refined by bisection.
pub fn hardy_zeros(a: f64, b: f64, step: f64) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let n = ((b - a) / step).ceil() as usize;
    let mut x0 = a;
    let mut z0 = hardy_z(x0)?;
    for i in 1..=n {
        let x1 = (a + step * i as f64).min(b);
        let z1 = hardy_z(x1)?;
        if z0 == 0.0 {
            out.push(x0);
        } else if z0 * z1 < 0.0 {
            let (mut lo, mut hi, mut zl) = (x0, x1, z0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let zm = hardy_z(mid)?;
                if zm * zl <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    zl = zm;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        x0 = x1;
        z0 = z1;
    }
    Ok(out)
}

/// Riemann–von Mangoldt count `⌊θ(T)/π + 1⌋`.
pub fn zero_count_estimate(t: f64) -> u64 {
    (theta(t) / PI + 1.0).floor() as u64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyMomentSpec {
    pub t: f64,
    /// Moment order, 1 or 3.
    pub k: u32,
    pub quad_tol: f64,
}

/// Node spacing `0.25 / log(2 + t)` becomes GK15 panels of 15 nodes.
fn moment_panels(breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut panels = Vec::new();
    let mut lo = 0.0;
    for &hi in breaks {
        let mut x = lo;
        while x < hi {
            let len = (15.0 * 0.25 / (2.0 + x).ln()).min(hi - x);
            panels.push((x, x + len));
            x += len;
        }
        lo = hi;
    }
    panels
}

/// `𝓕_k(T) = ∫_0^T Z(t)^k dt` at every `T` in the increasing list `ts`.
pub fn moment_sweep(ts: &[f64], k: u32, quad_tol: f64) -> Result<Vec<f64>> {
    if !(k == 1 || k == 3) {
        return Err(LabError::domain("moment order must be 1 or 3"));
    }
    if ts.windows(2).any(|w| w[1] <= w[0]) || ts.iter().any(|&t| !(t >= 0.0)) {
        return Err(LabError::domain("moment heights must be increasing and nonnegative"));
    }
    if ts.last().is_some_and(|&t| t > MAX_HEIGHT) {
        return Err(LabError::range(format!("moments implemented for T <= {MAX_HEIGHT}")));
    }
    let breaks: Vec<f64> = ts.iter().copied().filter(|&t| t > 0.0).collect();
    let panels = moment_panels(&breaks);
    let f = |t: f64| Complex64::new(hardy_z(t).map(|z| z.powi(k as i32)).unwrap_or(f64::NAN), 0.0);
    let pieces = integrate_panels_ordered(&f, &panels, quad_tol)?;
    let mut out = Vec::with_capacity(ts.len());
    let mut acc = Neumaier::new();
    let mut i = 0;
    for &t in ts {
        while i < panels.len() && panels[i].1 <= t {
            acc.add(pieces[i].re);
            i += 1;
        }
        out.push(acc.value());
    }
    if out.iter().any(|v| v.is_nan()) {
        return Err(LabError::accuracy("Z evaluation failed inside the moment", Complex64::new(f64::NAN, 0.0), f64::INFINITY));
    }
    Ok(out)
}

pub fn moment_direct(spec: &HardyMomentSpec) -> Result<f64> {
    if !(spec.t >= 0.0) {
        return Err(LabError::domain("moment height must be nonnegative"));
    }
    Ok(moment_sweep(&[spec.t], spec.k, spec.quad_tol)?[0])
}

/// `2π√(2/3) Σ d₃(n) n^{−1/6} cos(3πn^{2/3} + π/8)` over
/// `(T/2π)^{3/2} ≤ n ≤ (T/π)^{3/2}`; `d3[n − 1] = d₃(n)`.
pub fn cubic_moment_approx(d3: &[f64], t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(LabError::domain("T must be nonnegative"));
    }
    let lo = (t / TAU).powf(1.5).ceil().max(1.0) as usize;
    let hi = (t / PI).powf(1.5).floor() as usize;
    if hi > d3.len() {
        return Err(LabError::range(format!("cubic moment needs d3 up to {hi}, table stops at {}", d3.len())));
    }
    let mut acc = Neumaier::new();
    for n in lo..=hi {
        let nf = n as f64;
        // cos(3πn^{2/3} + π/8) = cos 2π(3/2 n^{2/3} + 1/16)
        let phase = (phase_frac(1.5, 2.0 / 3.0, nf) + 1.0 / 16.0) * TAU;
        acc.add(d3[n - 1] * nf.powf(-1.0 / 6.0) * phase.cos());
    }
    Ok(TAU * (2.0f64 / 3.0).sqrt() * acc.value())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalExponents {
    /// `5/4 − 3η/2`.
    pub from_eta: Exponent,
    /// `5/4 − δ/2`.
    pub from_delta: Exponent,
    /// `η > 1/6`.
    pub zeros_threshold_met: bool,
}

impl ConditionalExponents {
    pub fn to_map(&self) -> BTreeMap<&'static str, Exponent> {
        BTreeMap::from([("from_eta", self.from_eta), ("from_delta", self.from_delta)])
    }
}

pub fn conditional_exponents(eta: Exponent, delta: Exponent) -> Result<ConditionalExponents> {
    let zero = Ratio::from_integer(0);
    if eta < zero || delta < zero {
        return Err(LabError::domain("eta and delta must be nonnegative"));
    }
    Ok(ConditionalExponents {
        from_eta: Ratio::new(5, 4) - Ratio::new(3, 2) * eta,
        from_delta: Ratio::new(5, 4) - delta / 2,
        zeros_threshold_met: eta > Ratio::new(1, 6),
    })
}

pub const MOMENT_CSV_HEADER: &str = "T,F1_direct,F3_direct,F3_approx,diff,envelope_ratio";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub t: f64,
    pub f1: f64,
    pub f3: f64,
    pub f3_approx: f64,
}

impl MomentRow {
    pub fn diff(&self) -> f64 {
        self.f3 - self.f3_approx
    }

    /// `|diff| / T^{0.80}`.
    pub fn envelope_ratio(&self) -> f64 {
        self.diff().abs() / self.t.powf(F3_ENVELOPE_EXPONENT)
    }
}

pub const F3_ENVELOPE_EXPONENT: f64 = 0.80;

/// Direct moments and the divisor-sum approximation at each `T` in `ts`.
pub fn moment_table(d3: &[f64], ts: &[f64], quad_tol: f64) -> Result<Vec<MomentRow>> {
    let f1 = moment_sweep(ts, 1, quad_tol)?;
    let f3 = moment_sweep(ts, 3, quad_tol)?;
    ts.iter()
        .zip(f1.iter().zip(&f3))
        .map(|(&t, (&f1, &f3))| Ok(MomentRow { t, f1, f3, f3_approx: cubic_moment_approx(d3, t)? }))
        .collect()
}

pub fn write_moment_csv<W: Write>(mut out: W, rows: &[MomentRow]) -> Result<()> {
    writeln!(out, "{MOMENT_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.t,
            r.f1,
            r.f3,
            r.f3_approx,
            r.diff(),
            r.envelope_ratio()
        )?;
    }
    Ok(())
}
