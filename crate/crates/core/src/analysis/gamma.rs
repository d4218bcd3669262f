//! Complex Γ in logarithmic form and the leading Stirling approximation.

use std::f64::consts::{FRAC_PI_4, LN_2, PI};

use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// `ln sin(πz)`, stable for large `|Im z|`.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 10.0 {
        return (z * PI).sin().ln();
    }
    // sin(πz) = (e^{iπz} − e^{−iπz}) / 2i; keep the dominant exponential.
    let ln_2i = Complex64::new(LN_2, PI / 2.0);
    if z.im < 0.0 {
        i * PI * z - ln_2i + (-(-2.0 * i * PI * z).exp()).ln_1p()
    } else {
        -i * PI * z - ln_2i + ln_minus_one() + (-(2.0 * i * PI * z).exp()).ln_1p()
    }
}

fn ln_minus_one() -> Complex64 {
    Complex64::new(0.0, PI)
}

trait Ln1p {
    fn ln_1p(self) -> Complex64;
}

impl Ln1p for Complex64 {
    fn ln_1p(self) -> Complex64 {
        if self.norm() < 1e-8 {
            self - self * self / 2.0
        } else {
            (self + 1.0).ln()
        }
    }
}

/// Below this modulus the Lanczos sum is used instead of the Stirling series.
const STIRLING_MIN_MODULUS: f64 = 12.0;

/// Stirling series for `ln Γ(z)`, `Re z > 0`, `|z| ≥ 12`; principal branch,
/// continuous in `z`.
pub fn ln_gamma_stirling(z: Complex64) -> Complex64 {
    let w = z.inv();
    let w2 = w * w;
    let series = w * (1.0 / 12.0 + w2 * (-1.0 / 360.0 + w2 * (1.0 / 1260.0 + w2 * (-1.0 / 1680.0))));
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series
}

/// A logarithm of Γ(z) (branch not normalised; `exp` of it is Γ(z)).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re > 0.0 && z.norm() >= STIRLING_MIN_MODULUS {
        return ln_gamma_stirling(z);
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1 − z) = π / sin(πz)
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    ln_gamma_lanczos(z)
}

/// Lanczos approximation (g = 7, 9 terms) with reflection; independent of
/// the Stirling series and used as the comparison oracle.
pub fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_lanczos(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// Logarithm of the leading Stirling term for Γ(σ + iτ), `τ ≠ 0`.
fn ln_stirling_leading(sigma: f64, tau: f64) -> Complex64 {
    let at = tau.abs();
    let ln_modulus = -PI * at / 2.0 + (sigma - 0.5) * at.ln() + HALF_LN_TWO_PI;
    let phase = tau * (at.ln() - 1.0) + FRAC_PI_4 * (2.0 * sigma - 1.0) * tau.signum();
    Complex64::new(ln_modulus, phase)
}

/// Leading Stirling term for Γ(σ + iτ), `|τ| ≥ 3`; exact Γ below that.
pub fn stirling_gamma(sigma: f64, tau: f64) -> Complex64 {
    if tau.abs() < 3.0 {
        return gamma(Complex64::new(sigma, tau));
    }
    ln_stirling_leading(sigma, tau).exp()
}

/// `|Stirling / Γ − 1|` at σ + iτ, compared in logarithms so that large `|τ|` does not underflow.
pub fn stirling_relative_error(sigma: f64, tau: f64) -> f64 {
    if tau.abs() < 3.0 {
        return 0.0;
    }
    let exact = ln_gamma_lanczos(Complex64::new(sigma, tau));
    ((ln_stirling_leading(sigma, tau) - exact).exp() - 1.0).norm()
}
