//! Adaptive Gauss–Kronrod (7/15) quadrature for oscillatory integrands.
//!
//! Panels are first split until the phase advances by at most 1/8 of a
//! cycle across each one, then refined adaptively on the panel with the
//! largest `|K15 − G7|`. Panel values are summed in left-to-right order.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::e;
use crate::error::{LabError, Result};
use crate::summation::ComplexNeumaier;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Largest phase advance (cycles) tolerated across one panel.
pub const MAX_PHASE_ADVANCE: f64 = 0.125;
pub const DEFAULT_PANEL_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    Panel {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).norm(),
    }
}

/// Nodes of the 15-point Kronrod rule on `[a, b]` as `(x, w_kronrod, w_gauss)`;
/// `w_gauss` is zero at the non-Gauss nodes.
pub fn gk15_nodes(a: f64, b: f64) -> [(f64, f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(c, WGK[7] * h, WG[3] * h); 15];
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] * h } else { 0.0 };
        out[2 * j] = (c - h * XGK[j], WGK[j] * h, wg);
        out[2 * j + 1] = (c + h * XGK[j], WGK[j] * h, wg);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Split `[a, b]` until `phase` (in cycles) varies by at most 1/8 on each piece.
pub fn phase_panels<P: Fn(f64) -> f64>(phase: &P, a: f64, b: f64, budget: usize) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut stack = vec![(a, b)];
    while let Some((lo, hi)) = stack.pop() {
        let samples: Vec<f64> = (0..=4).map(|i| phase(lo + (hi - lo) * i as f64 / 4.0)).collect();
        let spread = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - samples.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread <= MAX_PHASE_ADVANCE || hi - lo <= 1e-12 * (1.0 + lo.abs()) {
            out.push((lo, hi));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi));
            stack.push((lo, mid));
        }
        if out.len() + stack.len() > budget {
            return Err(LabError::accuracy(
                "panel budget exhausted while resolving the phase",
                Complex64::new(f64::NAN, f64::NAN),
                f64::INFINITY,
            ));
        }
    }
    Ok(out)
}

/// Panels of `[a, b]` on which a phase with local angular frequency
/// `omega(t)` (radians per unit) advances by at most π/4.
pub fn frequency_panels<W: Fn(f64) -> f64>(omega: &W, a: f64, b: f64, max_len: f64, budget: usize) -> Result<Vec<(f64, f64)>> {
    let quarter = PI / 4.0;
    let mut out = Vec::new();
    let mut t = a;
    while t < b {
        let mut h = max_len.min(b - t);
        let w0 = omega(t).abs();
        if w0 * h > quarter {
            h = quarter / w0;
        }
        let w1 = omega(t + h).abs();
        if w1 * h > quarter {
            h = quarter / w0.max(w1);
        }
        let next = if t + h >= b { b } else { t + h };
        out.push((t, next));
        t = next;
        if out.len() > budget {
            return Err(LabError::accuracy(
                "panel budget exhausted while resolving the phase",
                Complex64::new(f64::NAN, f64::NAN),
                f64::INFINITY,
            ));
        }
    }
    Ok(out)
}

/// Adaptive integration of `f` starting from the given panels.
pub fn integrate_panels<F>(f: &F, initial: &[(f64, f64)], tol: f64, budget: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if !(tol > 0.0) {
        return Err(LabError::domain("tolerance must be positive"));
    }
    let first: Vec<Panel> = initial.par_iter().map(|&(a, b)| gk15(f, a, b)).collect();
    let mut total_err: f64 = first.iter().map(|p| p.error).sum();
    let mut heap: BinaryHeap<Panel> = first.into_iter().collect();
    while total_err > tol {
        if heap.len() >= budget {
            let (value, error_estimate) = collect(heap.into_vec());
            return Err(LabError::accuracy("quadrature panel budget exhausted", value, error_estimate));
        }
        let worst = heap.pop().expect("nonempty panel set");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(Panel { error: 0.0, ..worst });
            total_err -= worst.error;
            continue;
        }
        let l = gk15(f, worst.a, mid);
        let r = gk15(f, mid, worst.b);
        total_err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    let panels = heap.len();
    let (value, error_estimate) = collect(heap.into_vec());
    Ok(QuadResult {
        value,
        error_estimate,
        panels,
    })
}

fn collect(mut panels: Vec<Panel>) -> (Complex64, f64) {
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut acc = ComplexNeumaier::new();
    let mut err = 0.0;
    for p in &panels {
        acc.add(p.value);
        err += p.error;
    }
    (acc.value(), err)
}

/// Integral over each of `panels` separately, in order; the tolerance is
/// shared out in proportion to panel length.
pub fn integrate_panels_ordered<F>(f: &F, panels: &[(f64, f64)], tol: f64) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let total: f64 = panels.iter().map(|p| p.1 - p.0).sum();
    panels
        .par_iter()
        .map(|&(a, b)| {
            let share = (tol * (b - a) / total).max(f64::MIN_POSITIVE);
            let mut heap = vec![gk15(f, a, b)];
            let mut err = heap[0].error;
            while err > share && heap.len() < 4096 {
                let i = (0..heap.len()).max_by(|&x, &y| heap[x].error.total_cmp(&heap[y].error)).expect("nonempty");
                let w = heap.swap_remove(i);
                let mid = 0.5 * (w.a + w.b);
                if mid <= w.a || mid >= w.b {
                    heap.push(Panel { error: 0.0, ..w });
                    err -= w.error;
                    continue;
                }
                let (l, r) = (gk15(f, w.a, mid), gk15(f, mid, w.b));
                err += l.error + r.error - w.error;
                heap.push(l);
                heap.push(r);
            }
            let (value, error) = collect(heap);
            if error > share {
                return Err(LabError::accuracy("panel refinement budget exhausted", value, error));
            }
            Ok(value)
        })
        .collect()
}

/// Adaptive integration of a smooth (non-oscillatory or mildly oscillatory) integrand.
pub fn integrate<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let n = 16;
    let initial: Vec<(f64, f64)> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / n as f64, a + (b - a) * (i + 1) as f64 / n as f64))
        .collect();
    integrate_panels(f, &initial, tol, DEFAULT_PANEL_BUDGET)
}

/// `∫ₐᵇ g(t) e(φ(t)) dt` with a real amplitude and a phase in cycles.
pub struct OscillatoryIntegral<'a> {
    pub amplitude: Box<dyn Fn(f64) -> f64 + Sync + 'a>,
    pub phase: Box<dyn Fn(f64) -> f64 + Sync + 'a>,
    pub interval: (f64, f64),
    /// Lower bound for `φ''` on the interval, checked on a sample grid.
    pub second_derivative_floor: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
    /// `8 (|g(b)| + ∫|g′|) / √(2πλ)` when a floor λ is set.
    pub envelope: Option<f64>,
}

const FLOOR_CHECK_POINTS: usize = 2048;

pub fn oscillatory_quad(integral: &OscillatoryIntegral<'_>, tol: f64) -> Result<OscillatoryResult> {
    let (a, b) = integral.interval;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(LabError::domain("oscillatory integral needs a finite interval a < b"));
    }
    let amp = &integral.amplitude;
    let phase = &integral.phase;
    let f = |t: f64| {
        let g = amp(t);
        if g == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            e(phase(t)) * g
        }
    };
    let panels = phase_panels(phase, a, b, DEFAULT_PANEL_BUDGET)?;
    let res = integrate_panels(&f, &panels, tol, DEFAULT_PANEL_BUDGET)?;
    let envelope = match integral.second_derivative_floor {
        None => None,
        Some(lambda) => {
            if !(lambda > 0.0) {
                return Err(LabError::domain("second-derivative floor must be positive"));
            }
            let h = (b - a) / FLOOR_CHECK_POINTS as f64;
            let mut variation = 0.0;
            let mut prev = amp(a);
            for i in 1..=FLOOR_CHECK_POINTS {
                let t = a + h * i as f64;
                let g = amp(t);
                variation += (g - prev).abs();
                prev = g;
                if i < FLOOR_CHECK_POINTS {
                    let d2 = (phase(t + h) - 2.0 * phase(t) + phase(t - h)) / (h * h);
                    if d2 < lambda * (1.0 - 1e-6) {
                        return Err(LabError::domain(format!(
                            "phase'' = {d2:e} at t = {t} is below the declared floor {lambda:e}"
                        )));
                    }
                }
            }
            Some(8.0 * (amp(b).abs() + variation) / (2.0 * PI * lambda).sqrt())
        }
    };
    Ok(OscillatoryResult {
        value: res.value,
        error_estimate: res.error_estimate,
        panels: res.panels,
        envelope,
    })
}

/// Parameters of `ℐ(m, n, q) = ∫₀^∞ W(y) e(α(Ty)^β + 3(mTy)^{1/3}/q − nTy/q) dy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchParams {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub m: f64,
    pub n: f64,
    pub q: f64,
}

impl SketchParams {
    /// Phase of the integrand, in cycles.
    pub fn phase(&self, y: f64) -> f64 {
        let ty = self.t * y;
        self.alpha * ty.powf(self.beta) + 3.0 * (self.m * ty).cbrt() / self.q - self.n * ty / self.q
    }
}

/// `ℐ(m, n, q)` for a weight supported in `(0, ∞)`.
pub fn sketch_integral(p: &SketchParams, w: &super::BumpWeight, tol: f64) -> Result<OscillatoryResult> {
    let (a, b) = w.support();
    if !(a > 0.0) || !b.is_finite() {
        return Err(LabError::domain("sketch integral weight must be supported in (0, ∞)"));
    }
    let integral = OscillatoryIntegral {
        amplitude: Box::new(|y| w.value(y)),
        phase: Box::new(|y| p.phase(y)),
        interval: (a, b),
        second_derivative_floor: None,
    };
    oscillatory_quad(&integral, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_trig() {
        let r = integrate(&|x: f64| Complex64::new(x * x, 0.0), 0.0, 3.0, 1e-12).unwrap();
        assert!((r.value.re - 9.0).abs() < 1e-12);
        let s = integrate(&|x: f64| Complex64::new(0.0, x.sin()), 0.0, PI, 1e-12).unwrap();
        assert!((s.value.im - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_phase_gives_real_integral() {
        let i = OscillatoryIntegral {
            amplitude: Box::new(|t: f64| t * (1.0 - t)),
            phase: Box::new(|_| 0.0),
            interval: (0.0, 1.0),
            second_derivative_floor: None,
        };
        let r = oscillatory_quad(&i, 1e-12).unwrap();
        assert!((r.value.re - 1.0 / 6.0).abs() < 1e-13);
        assert_eq!(r.value.im, 0.0);
    }

    #[test]
    fn linear_phase_closed_form() {
        let k = 37.25;
        let i = OscillatoryIntegral {
            amplitude: Box::new(|_| 1.0),
            phase: Box::new(move |t: f64| k * t),
            interval: (0.0, 1.0),
            second_derivative_floor: None,
        };
        let r = oscillatory_quad(&i, 1e-12).unwrap();
        let exact = (e(k) - 1.0) / Complex64::new(0.0, 2.0 * PI * k);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn floor_violation_is_reported() {
        let i = OscillatoryIntegral {
            amplitude: Box::new(|_| 1.0),
            phase: Box::new(|t: f64| t * t),
            interval: (0.0, 1.0),
            second_derivative_floor: Some(10.0),
        };
        assert!(matches!(oscillatory_quad(&i, 1e-10), Err(LabError::Domain(_))));
    }

    #[test]
    fn budget_exhaustion_is_an_accuracy_error() {
        let f = |x: f64| Complex64::new(1.0 / x.sqrt(), 0.0);
        let r = integrate_panels(&f, &[(0.0, 1.0)], 1e-15, 8);
        assert!(matches!(r, Err(LabError::Accuracy { .. })));
    }
}
