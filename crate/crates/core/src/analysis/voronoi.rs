//! The GL(3) Voronoi transform
//!
//! ```text
//! ℋ±(x) = (1/2πi) ∫_{(σ)} x^{−s} γ±(s) h̃(−s) ds,   γ± = γ₀ ∓ iγ₁,
//! γ_a(s) = (π^{−3s−3/2}/2) ∏ᵢ Γ((1+s+μᵢ+a)/2) / Γ((−s−μᵢ+a)/2),
//! ```
//!
//! on σ = −1/2. With `s = σ + iτ` the integral is `(1/2π) ∫ F(τ) dτ`.
//! `F` is analytic in the strip `|Im τ| < 1/2` (the nearest poles of γ± sit
//! at s = −1), so the truncated trapezoid rule converges geometrically; two
//! step sizes give the error estimate.
//!
//! `h̃(−s) = ∫ g(u) e^{−iτu} du` with `g(u) = h(eᵘ) e^{−σu}`. Integration by
//! parts gives `|h̃(−s)| ≤ K_j / |τ|^j`, `K_j = ∫ |g^{(j)}|`, which fixes the
//! truncation point.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::bump::BumpWeight;
use super::gamma::ln_gamma;
use super::jet::{Jet, JET_ORDER};
use crate::coefficients::SpectralParams;
use crate::error::{LabError, Result};
use crate::summation::{pairwise_reduce, ComplexNeumaier};

pub const VORONOI_SIGMA: f64 = -0.5;
pub const VORONOI_TAIL_TOL: f64 = 1e-10;
/// Relative agreement required between the two trapezoid resolutions.
pub const VORONOI_RESOLUTION_TOL: f64 = 1e-6;
const L1_GRID: usize = 4096;
const L1_INFLATION: f64 = 1.02;
const MAX_REFINEMENTS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub tau_max: f64,
    pub step: f64,
}

/// `ln γ_a(s)`.
pub fn ln_gamma_factor(s: Complex64, mu: &[Complex64; 3], a: u8) -> Complex64 {
    let a = a as f64;
    let mut acc = (-3.0 * s - 1.5) * PI.ln() - 2f64.ln();
    for &m in mu {
        acc += ln_gamma((1.0 + s + m + a) / 2.0) - ln_gamma((-s - m + a) / 2.0);
    }
    acc
}

/// `γ±(s)`.
pub fn gamma_pm(s: Complex64, mu: &[Complex64; 3], sign: Sign) -> Complex64 {
    let g0 = ln_gamma_factor(s, mu, 0).exp();
    let g1 = ln_gamma_factor(s, mu, 1).exp();
    g0 - Complex64::i() * g1 * sign.value()
}

/// `∫ |d^j/du^j g(u)| du` for `j = 0..=8`, `g(u) = h(eᵘ) e^{−σu}`.
fn mellin_l1_norms(h: &BumpWeight, u_lo: f64, u_hi: f64) -> [f64; JET_ORDER + 1] {
    let du = (u_hi - u_lo) / L1_GRID as f64;
    let mut k = [0.0; JET_ORDER + 1];
    for i in 0..=L1_GRID {
        let u = u_lo + du * i as f64;
        let g = h.eval_jet(Jet::exp_variable(u)) * Jet::variable(u).scale(-VORONOI_SIGMA).exp();
        let w = if i == 0 || i == L1_GRID { 0.5 } else { 1.0 };
        for (j, kj) in k.iter_mut().enumerate() {
            *kj += w * du * g.derivative(j).abs();
        }
    }
    k.map(|v| v * L1_INFLATION)
}

/// `γ±(σ + iτ)`, with a fast path when every μᵢ vanishes: the denominator
/// arguments are then conjugates of the numerator ones.
fn gamma_pm_on_line(tau: f64, mu: &[Complex64; 3], trivial: bool, sign: Sign) -> Complex64 {
    let s = Complex64::new(VORONOI_SIGMA, tau);
    if !trivial {
        return gamma_pm(s, mu, sign);
    }
    let base = (-3.0 * s - 1.5) * PI.ln() - 2f64.ln();
    let g = |a: f64| {
        let l = ln_gamma((1.0 + s + a) / 2.0);
        (base + Complex64::new(0.0, 6.0 * l.im)).exp()
    };
    g(0.0) - Complex64::i() * g(1.0) * sign.value()
}

/// Chebyshev nodes per interpolation segment of `h̃`.
const CHEB_NODES: usize = 24;

/// Chebyshev interpolant of `τ ↦ Σ_j w_j e^{−iτ v_j}` on `[lo, hi]`.
struct ChebSegment {
    lo: f64,
    hi: f64,
    coeffs: Vec<Complex64>,
}

impl ChebSegment {
    fn new(lo: f64, hi: f64, nodes: &[(f64, f64)]) -> Self {
        let n = CHEB_NODES;
        let vals: Vec<Complex64> = (0..n)
            .map(|k| {
                let t = (PI * (k as f64 + 0.5) / n as f64).cos();
                let tau = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
                nodes.iter().map(|&(v, w)| Complex64::from_polar(w, -tau * v)).sum()
            })
            .collect();
        let coeffs = (0..n)
            .map(|j| {
                let c: Complex64 = vals
                    .iter()
                    .enumerate()
                    .map(|(k, &f)| f * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                    .sum();
                c * (2.0 / n as f64)
            })
            .collect();
        Self { lo, hi, coeffs }
    }

    fn eval(&self, tau: f64) -> Complex64 {
        let t = (2.0 * tau - self.lo - self.hi) / (self.hi - self.lo);
        let (mut b1, mut b2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + b1 * (2.0 * t) - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] * 0.5 + b1 * t - b2
    }
}

/// Evaluate ℋ±(x) for a weight supported in (0, ∞).
pub fn voronoi_h(x: f64, h: &BumpWeight, params: &SpectralParams, sign: Sign) -> Result<VoronoiResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(LabError::domain("Voronoi transform needs x > 0"));
    }
    let (a, b) = h.support();
    if !(a > 0.0) || !b.is_finite() {
        return Err(LabError::domain("Voronoi weight must be supported in (0, ∞)"));
    }
    let mu = params.mu;
    let trivial = mu.iter().all(|m| m.norm() == 0.0);
    let (u_lo, u_hi) = (a.ln(), b.ln());
    let u_c = 0.5 * (u_lo + u_hi);
    let norms = mellin_l1_norms(h, u_lo, u_hi);

    // |γ±| ≤ |γ₀| + |γ₁| = 1 on the line when μ = 0; otherwise sampled far
    // out, where Σ Re μᵢ = 0 makes it flat.
    let gamma_env = |t: f64| {
        if trivial {
            return 1.0;
        }
        [t, -t, 2.0 * t, -2.0 * t]
            .iter()
            .map(|&tt| gamma_pm(Complex64::new(VORONOI_SIGMA, tt), &mu, sign).norm())
            .fold(0.0, f64::max)
            * 1.1
    };
    let prefactor = x.powf(-VORONOI_SIGMA) / PI;
    let mut tau_max = f64::INFINITY;
    for j in 2..=JET_ORDER {
        let root = |env: f64| {
            (prefactor * env * norms[j] / ((j - 1) as f64 * VORONOI_TAIL_TOL)).powf(1.0 / (j - 1) as f64)
        };
        let guess = root(1.0).max(10.0);
        tau_max = tau_max.min(root(gamma_env(guess)).max(10.0));
    }
    if !tau_max.is_finite() || tau_max > 1e8 {
        return Err(LabError::accuracy(
            "Voronoi truncation point could not be certified",
            Complex64::new(f64::NAN, f64::NAN),
            f64::INFINITY,
        ));
    }

    // |d/dτ arg F| ≤ |3 ln(τ/2π) − ln x − u_c| + ℓ/2, with a floor for small τ.
    let big_l = x.ln() + u_c;
    let omega = (3.0 * (tau_max / (2.0 * PI)).ln() - big_l).abs().max(big_l.abs() + 17.0)
        + 0.5 * (u_hi - u_lo)
        + 1.0;
    let mut step = 2.0 * PI / (3.0 * omega);
    let mut last = None;
    for _ in 0..=MAX_REFINEMENTS {
        let (coarse, fine) = trapezoid_pair(x, h, &mu, trivial, sign, (u_lo, u_hi, u_c), tau_max, step);
        let diff = (coarse - fine).norm();
        let error_estimate = diff + 2.0 * VORONOI_TAIL_TOL;
        if diff <= VORONOI_RESOLUTION_TOL * fine.norm() + VORONOI_TAIL_TOL {
            return Ok(VoronoiResult {
                value: fine,
                error_estimate,
                tau_max,
                step: step / 2.0,
            });
        }
        last = Some((fine, error_estimate));
        step /= 2.0;
    }
    let (value, err) = last.expect("at least one refinement");
    Err(LabError::accuracy("Voronoi trapezoid rule did not converge", value, err))
}

/// Trapezoid sums with steps `step` and `step/2` over `[−T, T]`.
#[allow(clippy::too_many_arguments)]
fn trapezoid_pair(
    x: f64,
    h: &BumpWeight,
    mu: &[Complex64; 3],
    trivial: bool,
    sign: Sign,
    (u_lo, u_hi, u_c): (f64, f64, f64),
    tau_max: f64,
    step: f64,
) -> (Complex64, Complex64) {
    let delta = step / 2.0;
    let k_max = (tau_max / delta).ceil() as i64;
    // u-grid fine enough that aliased frequencies exceed 3T.
    let m = (((u_hi - u_lo) * 2.0 * tau_max / PI).ceil() as usize).max(64);
    let du = (u_hi - u_lo) / m as f64;
    let nodes: Vec<(f64, f64)> = (1..m)
        .map(|i| {
            let u = u_lo + du * i as f64;
            (u - u_c, h.value(u.exp()) * (-VORONOI_SIGMA * u).exp() * du)
        })
        .filter(|&(_, g)| g != 0.0)
        .collect();
    // Each segment spans a phase of at most ±2 radians for every node.
    let seg_len = 4.0 / (u_hi - u_lo);
    let per_seg = ((seg_len / delta).floor() as i64).max(1);
    let total = 2 * k_max + 1;
    let n_seg = (total + per_seg - 1) / per_seg;
    let ln_x = x.ln();
    let parts: Vec<(ComplexNeumaier, ComplexNeumaier)> = (0..n_seg)
        .into_par_iter()
        .map(|c| {
            let k0 = -k_max + c * per_seg;
            let k1 = (k0 + per_seg).min(k_max + 1);
            let cheb = ChebSegment::new(k0 as f64 * delta, (k1 - 1) as f64 * delta + delta * 1e-9, &nodes);
            let mut even = ComplexNeumaier::new();
            let mut odd = ComplexNeumaier::new();
            for k in k0..k1 {
                let tau = k as f64 * delta;
                // x^{−s} e^{−iτ u_c} folds the centring shift of the u-grid.
                let lead = Complex64::new(-VORONOI_SIGMA * ln_x, -tau * (ln_x + u_c)).exp();
                let f = lead * gamma_pm_on_line(tau, mu, trivial, sign) * cheb.eval(tau);
                if k.rem_euclid(2) == 0 {
                    even.add(f);
                } else {
                    odd.add(f);
                }
            }
            (even, odd)
        })
        .collect();
    let zero = (ComplexNeumaier::new(), ComplexNeumaier::new());
    let (even, odd) = pairwise_reduce(&parts, zero, &|(a, b), (c, d)| (a.merge(c), b.merge(d)));
    let scale = 1.0 / (2.0 * PI);
    let coarse = even.value() * (step * scale);
    let fine = even.merge(odd).value() * (delta * scale);
    (coarse, fine)
}

/// `∫ h(y) y^{1/3} dy / ∫ h(y) dy`.
pub fn weighted_cube_root_center(h: &BumpWeight) -> f64 {
    let (a, b) = h.support();
    let n = 20_000;
    let dy = (b - a) / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        let y = a + (i as f64 + 0.5) * dy;
        let v = h.value(y);
        num += v * y.cbrt();
        den += v;
    }
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSlope {
    /// Measured d/dx of arg(ℋ(x)/x), in cycles per unit x.
    pub measured: f64,
    /// `± ⟨y^{1/3}⟩ x^{−2/3}`.
    pub predicted: f64,
}

/// Finite-difference phase slope of `x ↦ ℋ±(x)/x` between `x` and `x(1 + δ)`.
pub fn voronoi_phase_slope(
    x: f64,
    h: &BumpWeight,
    params: &SpectralParams,
    sign: Sign,
    rel_step: f64,
) -> Result<PhaseSlope> {
    let x2 = x * (1.0 + rel_step);
    let h1 = voronoi_h(x, h, params, sign)?.value / x;
    let h2 = voronoi_h(x2, h, params, sign)?.value / x2;
    let dphi = (h2 / h1).arg();
    let measured = dphi / (2.0 * PI) / (x2 - x);
    let center = weighted_cube_root_center(h);
    Ok(PhaseSlope {
        measured,
        predicted: sign.value() * center * x.powf(-2.0 / 3.0),
    })
}
