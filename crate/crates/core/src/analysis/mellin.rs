//! `e^{ix} − 1 = (1/2πi) ∫_{(σ)} Γ(s) e(s/4) x^{−s} ds` for −1 < σ < 0.
//!
//! The integrand decays like `e^{−π τ}` for τ → +∞ but only algebraically
//! for τ → −∞. The lower half of the line is therefore rotated onto the ray
//! `s = σ + r e^{i(−π/2 − θ)}`, which stays in Im s < 0 and so crosses no
//! pole of Γ; along it the integrand decays faster than any exponential.
//! The upper half stays on Re s = σ.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::quad::{frequency_panels, integrate_panels, DEFAULT_PANEL_BUDGET};
use crate::error::{LabError, Result};

pub const MELLIN_TAIL_TOL: f64 = 1e-10;
pub const MELLIN_TARGET: f64 = 1e-8;
const MAX_RADIUS: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub upper_length: f64,
    pub ray_length: f64,
    pub ray_angle: f64,
}

fn ln_integrand(s: Complex64, ln_x: f64) -> Complex64 {
    ln_gamma(s) + Complex64::new(0.0, FRAC_PI_2) * s - s * ln_x
}

/// Smallest length `R` (doubling from 1) at which `|F(R)| / rate ≤ tol`,
/// where `rate` is the logarithmic decay rate of `|F|` there.
fn truncation<P: Fn(f64) -> Complex64>(ln_f: &P, tol: f64) -> Result<f64> {
    let mut r = 1.0;
    while r <= MAX_RADIUS {
        let h = 1e-3 * r;
        let a = ln_f(r).re;
        let rate = (a - ln_f(r + h).re) / h;
        let rate_far = (ln_f(2.0 * r).re - ln_f(2.0 * r + h).re) / h;
        if rate > 0.0 && rate_far >= rate * 0.999 && a.exp() / rate <= tol {
            return Ok(r);
        }
        r *= 2.0;
    }
    Err(LabError::accuracy(
        "Mellin contour tail does not decay within the search radius",
        Complex64::new(f64::NAN, f64::NAN),
        f64::INFINITY,
    ))
}

/// Evaluate the Mellin–Barnes representation of `e^{ix} − 1`.
pub fn mellin_exp_identity(x: f64, sigma: f64) -> Result<MellinResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(LabError::domain("Mellin identity needs x > 0"));
    }
    if !(sigma > -1.0 && sigma < 0.0) {
        return Err(LabError::domain("Mellin identity needs -1 < sigma < 0"));
    }
    let ln_x = x.ln();
    let theta = FRAC_PI_4.min(1.0 / (1.0 + x));
    let dir = Complex64::from_polar(1.0, -FRAC_PI_2 - theta);
    let s0 = Complex64::new(sigma, 0.0);
    let two_pi = 2.0 * PI;

    let upper = |t: f64| s0 + Complex64::new(0.0, t);
    let ray = |r: f64| s0 + dir * r;
    let ln_upper = |t: f64| ln_integrand(upper(t), ln_x) - two_pi.ln();
    let ln_ray = |r: f64| ln_integrand(ray(r), ln_x) - two_pi.ln();

    let tail_tol = MELLIN_TAIL_TOL / 2.0;
    let t_up = truncation(&ln_upper, tail_tol)?;
    let r_max = truncation(&ln_ray, tail_tol)?;

    // Local angular frequency: Im of (d/dt) ln F ≈ Im[(ln s + iπ/2 − ln x) s′].
    let omega = |s: Complex64, ds: Complex64| {
        let d = (s.ln() - 0.5 / s + Complex64::new(-ln_x, FRAC_PI_2)) * ds;
        d.im.abs() + 1.0
    };
    let i = Complex64::i();
    let up_panels = frequency_panels(&|t| omega(upper(t), i), 0.0, t_up, 0.25, DEFAULT_PANEL_BUDGET)?;
    let ray_panels = frequency_panels(&|r| omega(ray(r), dir), 0.0, r_max, 0.25, DEFAULT_PANEL_BUDGET)?;

    // (1/2πi) ∫ F ds: ds = i dt on the line, and the ray is traversed inwards.
    let f_up = |t: f64| ln_upper(t).exp();
    let f_ray = |r: f64| -(ln_ray(r).exp() * dir / i);
    let quad_tol = MELLIN_TAIL_TOL;
    let up = integrate_panels(&f_up, &up_panels, quad_tol, DEFAULT_PANEL_BUDGET)?;
    let lo = integrate_panels(&f_ray, &ray_panels, quad_tol, DEFAULT_PANEL_BUDGET)?;
    let value = up.value + lo.value;
    let error_estimate = up.error_estimate + lo.error_estimate + 2.0 * tail_tol;
    if error_estimate > MELLIN_TARGET {
        return Err(LabError::accuracy(
            "Mellin identity error estimate above target",
            value,
            error_estimate,
        ));
    }
    Ok(MellinResult {
        value,
        error_estimate,
        upper_length: t_up,
        ray_length: r_max,
        ray_angle: theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn target(x: f64) -> Complex64 {
        Complex64::new(0.0, x).exp() - 1.0
    }

    #[test]
    fn unit_argument() {
        let r = mellin_exp_identity(1.0, -0.75).unwrap();
        assert!((r.value - Complex64::new(-0.459_697_694_131_860_3, 0.841_470_984_807_896_5)).norm() < 1e-8);
    }

    #[test]
    fn small_and_large_arguments() {
        let r = mellin_exp_identity(0.001, -0.5).unwrap();
        assert!((r.value - target(0.001)).norm() < 1e-8);
        assert!((r.value - Complex64::new(0.0, 0.001)).norm() < 1e-6);
        let r = mellin_exp_identity(10.0, -0.5).unwrap();
        assert!((r.value - target(10.0)).norm() < 1e-8);
    }

    #[test]
    fn rejects_bad_abscissa() {
        assert!(mellin_exp_identity(1.0, 0.2).is_err());
        assert!(mellin_exp_identity(-1.0, -0.5).is_err());
    }
}
