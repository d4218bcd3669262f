//! The delta-symbol expansion of `δ(n = 0)` and Poisson summation for
//! periodic coefficients.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::analysis::{gk15_nodes, BumpKind, BumpWeight};
use crate::arith::e_frac;
use crate::error::{LabError, Result};
use crate::summation::{ComplexNeumaier, Neumaier};

/// Default inertness of `W` and `U`.
pub const DEFAULT_W_SCALE: f64 = 10.0;
pub const DEFAULT_U_SCALE: f64 = 1.0;
/// `C` must exceed `N^{DELTA_EPS}`.
pub const DELTA_EPS: f64 = 0.01;
/// Recorded bounds `c₁ ≤ 𝒞/C ≤ c₂` for the default `W`, `C ∈ [10, 10³]`.
pub const NORMALIZER_RATIO_BOUNDS: (f64, f64) = (0.85, 0.95);

#[derive(Debug, Clone)]
pub struct DeltaExpansion {
    c_scale: f64,
    q: u64,
    w: BumpWeight,
    u: BumpWeight,
    normalizer: f64,
}

impl DeltaExpansion {
    /// Default weights: `W` even on `±[1, 2]`, `U` equal to 1 on `[−2, 2]`.
    pub fn new(c_scale: f64, q: u64) -> Result<Self> {
        let w = BumpWeight::new(BumpKind::SymmetricAnnulus, DEFAULT_W_SCALE)?;
        let u = BumpWeight::new(BumpKind::SymmetricPlateau, DEFAULT_U_SCALE)?;
        Self::with_weights(c_scale, q, w, u)
    }

    pub fn with_weights(c_scale: f64, q: u64, w: BumpWeight, u: BumpWeight) -> Result<Self> {
        if !(c_scale > 1.0) || !c_scale.is_finite() {
            return Err(LabError::domain("delta expansion needs C > 1"));
        }
        if q == 0 {
            return Err(LabError::domain("delta expansion needs q >= 1"));
        }
        if !w.is_symmetric() || w.transitions()[0].0 < 1.0 || w.support().1 > 2.0 {
            return Err(LabError::domain("W must be even and supported on ±[1, 2]"));
        }
        let plateau = u.plateau().map_or(false, |(a, b)| a <= -2.0 && b >= 2.0);
        if !u.is_symmetric() || !plateau {
            return Err(LabError::domain("U must be even and equal to 1 on [−2, 2]"));
        }
        let c_max = (2.0 * c_scale).floor() as u64;
        let normalizer: Neumaier = (1..=c_max).map(|c| w.value(c as f64 / c_scale)).collect();
        Ok(Self {
            c_scale,
            q,
            w,
            u,
            normalizer: normalizer.value(),
        })
    }

    pub fn c_scale(&self) -> f64 {
        self.c_scale
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `𝒞 = Σ_c W(c/C)`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// `V₀(x, y) = W(x)U(x)U(y) − W(y)U(x)U(y)`.
    pub fn v0(&self, x: f64, y: f64) -> f64 {
        let (w, u) = (&self.w, &self.u);
        let uu = u.value(x) * u.value(y);
        if uu == 0.0 {
            return 0.0;
        }
        (w.value(x) - w.value(y)) * uu
    }

    /// Largest `c` with `U(c/C) ≠ 0`; `V₀(c/C, ·)` vanishes beyond it.
    pub fn c_cutoff(&self) -> u64 {
        (self.u.support().1 * self.c_scale).floor() as u64
    }
}

/// Right-hand side of the expansion at `n`, truncated exactly by the support of `U`.
pub fn delta_eval(exp: &DeltaExpansion, n: i64, big_n: u64) -> Result<f64> {
    if n.unsigned_abs() > big_n {
        return Err(LabError::domain(format!("|n| = {} exceeds N = {big_n}", n.abs())));
    }
    if exp.c_scale <= (big_n as f64).powf(DELTA_EPS) {
        return Err(LabError::domain(format!("C must exceed N^{DELTA_EPS}")));
    }
    let q = exp.q;
    let mut total = Neumaier::new();
    for c in 1..=exp.c_cutoff() {
        let modulus = c * q;
        let v = exp.v0(c as f64 / exp.c_scale, n as f64 / (modulus as f64 * exp.c_scale));
        if v == 0.0 {
            continue;
        }
        let mut a_sum = ComplexNeumaier::new();
        let step = n.rem_euclid(modulus as i64);
        let mut r = 0i64;
        for _ in 0..modulus {
            a_sum.add(e_frac(r, modulus));
            r = (r + step) % modulus as i64;
        }
        total.add(a_sum.value().re * v / modulus as f64);
    }
    Ok(total.value() / exp.normalizer)
}

/// `K̂(n) = Σ_{a mod c} K(a) e(−an/c)` for `0 ≤ n < c`.
pub fn fourier_periodic(k: &[Complex64]) -> Vec<Complex64> {
    let c = k.len() as u64;
    (0..c as i64)
        .map(|n| {
            let mut acc = ComplexNeumaier::new();
            for (a, &ka) in k.iter().enumerate() {
                acc.add(ka * e_frac(-(a as i64) * n, c));
            }
            acc.value()
        })
        .collect()
}

/// Quadrature table for `V̂(ξ) = ∫ V(x) e(−xξ) dx`, `V` even, `|ξ| ≤ ξ_max`.
///
/// The plateau contributes in closed form; each transition carries GK15
/// panels spanning at most half a cycle of `cos(2πξx)`.
#[derive(Debug, Clone)]
pub struct EvenTransform {
    plateau: Option<(f64, f64)>,
    nodes: Vec<f64>,
    kronrod: Vec<f64>,
    gauss: Vec<f64>,
}

impl EvenTransform {
    pub fn new(v: &BumpWeight, xi_max: f64) -> Result<Self> {
        if !v.is_symmetric() {
            return Err(LabError::domain("Fourier transform implemented for even weights"));
        }
        let plateau = v.plateau().map(|(a, b)| (a.max(0.0), b));
        let (mut nodes, mut kronrod, mut gauss) = (Vec::new(), Vec::new(), Vec::new());
        for (lo, hi) in v.transitions() {
            let len = hi - lo;
            let panel = (len / 64.0).min(0.5 / xi_max.abs().max(1e-300));
            let count = (len / panel).ceil() as usize;
            for i in 0..count {
                let a = lo + len * i as f64 / count as f64;
                let b = lo + len * (i + 1) as f64 / count as f64;
                for (x, wk, wg) in gk15_nodes(a, b) {
                    let vx = v.value(x);
                    if vx != 0.0 {
                        nodes.push(x);
                        kronrod.push(2.0 * wk * vx);
                        gauss.push(2.0 * wg * vx);
                    }
                }
            }
        }
        Ok(Self { plateau, nodes, kronrod, gauss })
    }

    fn plateau_part(&self, xi: f64) -> f64 {
        let Some((a, b)) = self.plateau else { return 0.0 };
        if xi == 0.0 {
            2.0 * (b - a)
        } else {
            let w = TAU * xi;
            2.0 * ((w * b).sin() - (w * a).sin()) / w
        }
    }

    /// `(V̂(ξ), |K15 − G7|)` at a single frequency.
    pub fn eval(&self, xi: f64) -> (f64, f64) {
        let (mut k, mut g) = (Neumaier::new(), Neumaier::new());
        for ((&x, &wk), &wg) in self.nodes.iter().zip(&self.kronrod).zip(&self.gauss) {
            let c = (TAU * xi * x).cos();
            k.add(wk * c);
            g.add(wg * c);
        }
        (self.plateau_part(xi) + k.value(), (k.value() - g.value()).abs())
    }

    /// `V̂(n·step)` for `0 ≤ n ≤ m`, via the Chebyshev recurrence in `n`.
    pub fn eval_grid(&self, step: f64, m: u64) -> Vec<(f64, f64)> {
        let mut prev: Vec<f64> = self.nodes.iter().map(|&x| (TAU * step * x).cos()).collect();
        let twice: Vec<f64> = prev.iter().map(|c| 2.0 * c).collect();
        let mut cur = vec![1.0; self.nodes.len()];
        let mut out = Vec::with_capacity(m as usize + 1);
        for n in 0..=m {
            let (mut k, mut g) = (Neumaier::new(), Neumaier::new());
            for i in 0..cur.len() {
                k.add(self.kronrod[i] * cur[i]);
                g.add(self.gauss[i] * cur[i]);
            }
            out.push((self.plateau_part(n as f64 * step) + k.value(), (k.value() - g.value()).abs()));
            for i in 0..cur.len() {
                // cos((n+1)θ) = 2cos θ cos(nθ) − cos((n−1)θ); `prev` holds cos((n−1)θ).
                let next = if n == 0 { prev[i] } else { twice[i] * cur[i] - prev[i] };
                prev[i] = cur[i];
                cur[i] = next;
            }
        }
        out
    }
}

pub fn fourier_weight(v: &BumpWeight, xi: f64) -> Result<f64> {
    Ok(EvenTransform::new(v, xi)?.eval(xi).0)
}

/// Upper bounds for `∫ |V^{(j)}|`, `j = 0..=8`, from a dense grid on the transitions.
pub fn derivative_l1_bounds(v: &BumpWeight) -> [f64; 9] {
    const GRID: usize = 4096;
    let mut out = [0.0; 9];
    if let Some((a, b)) = v.plateau() {
        out[0] = b - a.max(if v.is_symmetric() { 0.0 } else { a });
    }
    for (lo, hi) in v.transitions() {
        let h = (hi - lo) / GRID as f64;
        let jets: Vec<[f64; 9]> = (0..=GRID)
            .map(|i| {
                let jet = v.jet(lo + h * i as f64);
                std::array::from_fn(|j| jet.derivative(j).abs())
            })
            .collect();
        for j in 0..9 {
            let s: f64 = jets.windows(2).map(|w| w[0][j].max(w[1][j])).sum();
            out[j] += 1.02 * h * s;
        }
    }
    let halves = if v.is_symmetric() { 2.0 } else { 1.0 };
    out.map(|x| x * halves)
}

pub const POISSON_TAIL_TOL: f64 = 1e-10;
const MAX_POISSON_TERMS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub diff: f64,
    /// Dual terms `|n| ≤ cutoff` were summed.
    pub cutoff: u64,
    pub tail_bound: f64,
    /// Accumulated `|K15 − G7|` over the dual terms.
    pub quad_error: f64,
}

/// Smallest `M` with `Σ_{|n|>M} |K̂(n)| |V̂(n/c)| / c ≤ tol`, using
/// `|V̂(ξ)| ≤ ∫|V^{(j)}| / (2π|ξ|)^j` for the best `2 ≤ j ≤ 8`.
fn poisson_cutoff(v: &BumpWeight, c: u64, k_hat_max: f64) -> Result<(u64, f64)> {
    let c = c as f64;
    let l1 = derivative_l1_bounds(v);
    let tail = |m: u64, j: usize| -> f64 {
        let m = m as f64;
        let jf = j as f64;
        (2.0 / c) * k_hat_max * l1[j] * (c / TAU).powf(jf) * m.powf(1.0 - jf) / (jf - 1.0)
    };
    let best = |m: u64| (2..=8).map(|j| tail(m, j)).fold(f64::INFINITY, f64::min);
    let mut m = 1u64;
    while best(m) > POISSON_TAIL_TOL {
        m *= 2;
        if m > MAX_POISSON_TERMS {
            return Err(LabError::accuracy(
                "Poisson tail cannot be certified within the term budget",
                Complex64::new(f64::NAN, f64::NAN),
                best(m),
            ));
        }
    }
    // Bisect down to the smallest certified cutoff.
    let (mut lo, mut hi) = (m / 2, m);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if best(mid) <= POISSON_TAIL_TOL {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, best(hi)))
}

/// Both sides of `Σ_{n∈ℤ} K(n) V(n) = (1/c) Σ_{n∈ℤ} K̂(n) V̂(n/c)`; `k.len() = c`.
pub fn poisson_check(k: &[Complex64], v: &BumpWeight) -> Result<PoissonCheck> {
    let c = k.len() as u64;
    if c == 0 {
        return Err(LabError::domain("K needs at least one residue"));
    }
    if !v.is_symmetric() {
        return Err(LabError::domain("Poisson check needs an even weight"));
    }
    let s = v.support().1;
    let mut lhs = ComplexNeumaier::new();
    for n in -(s.floor() as i64)..=(s.floor() as i64) {
        lhs.add(k[n.rem_euclid(c as i64) as usize] * v.value(n as f64));
    }
    let k_hat = fourier_periodic(k);
    let k_hat_max = k_hat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (cutoff, tail_bound) = poisson_cutoff(v, c, k_hat_max)?;
    let transform = EvenTransform::new(v, cutoff as f64 / c as f64)?;
    let v_hat = transform.eval_grid(1.0 / c as f64, cutoff);
    let mut rhs = ComplexNeumaier::new();
    let mut quad_error = 0.0;
    for (n, &(vh, err)) in v_hat.iter().enumerate() {
        let n = n as i64;
        let kh = k_hat[n.rem_euclid(c as i64) as usize];
        let kh = if n == 0 { kh } else { kh + k_hat[(-n).rem_euclid(c as i64) as usize] };
        rhs.add(kh * vh);
        quad_error += kh.norm() * err;
    }
    let rhs = rhs.value() / c as f64;
    let lhs = lhs.value();
    Ok(PoissonCheck {
        lhs,
        rhs,
        diff: (lhs - rhs).norm(),
        cutoff,
        tail_bound,
        quad_error: quad_error / c as f64,
    })
}
