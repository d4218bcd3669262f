//! Smooth compactly supported weights built from the glue function
//! `f(t) = exp(−1/t)` (t > 0), `f(t) = 0` (t ≤ 0).
//!
//! The step `S(t) = f(t) / (f(t) + f(1 − t))` is 0 for t ≤ 0 and 1 for
//! t ≥ 1. A weight rises through `S` on `[s₀, p₀]`, equals 1 on the plateau
//! `[p₀, p₁]` and falls through `S` on `[p₁, s₁]`. Symmetric weights are
//! evaluated at `|x|`.

use super::jet::{Jet, JET_ORDER};
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BumpKind {
    /// Support `[1/2, 1]`, transitions of width `1/Y` inside it.
    PlateauOnHalfOne,
    /// Plateau `[1, 2]`, transitions of width `1/Y` outside it.
    PlateauOnOneTwo,
    /// Even, support `±[1, 2]`, transitions inside.
    SymmetricAnnulus,
    /// Even, equal to 1 on `[−2, 2]`, support `±(2 + 1/Y)`.
    SymmetricPlateau,
    /// Support `[1, 2]`, transitions inside.
    InsideOneTwo,
    /// Arbitrary rise/plateau/fall layout.
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BumpWeight {
    kind: BumpKind,
    inert_scale: f64,
    /// `None` means the weight is 1 to the left of the fall.
    rise: Option<(f64, f64)>,
    fall: (f64, f64),
    symmetric: bool,
    /// `c_j` with `sup |x^j W^{(j)}(x)| ≤ c_j Y^j`, `j = 0..=8`.
    derivative_bounds: [f64; JET_ORDER + 1],
}

fn glue(t: Jet) -> Jet {
    if t.value() <= 0.0 {
        Jet::constant(0.0)
    } else {
        (-t.recip()).exp()
    }
}

/// The smooth step `S` applied to a jet.
pub fn smooth_step(t: Jet) -> Jet {
    let t0 = t.value();
    if t0 <= 0.0 {
        return Jet::constant(0.0);
    }
    if t0 >= 1.0 {
        return Jet::constant(1.0);
    }
    let a = glue(t);
    let b = glue(-t + 1.0);
    a * (a + b).recip()
}

fn step_value(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Dense grid samples per transition used when recording derivative bounds.
const BOUND_GRID: usize = 8192;
/// Grid maxima are inflated by this factor so they dominate the suprema.
const BOUND_INFLATION: f64 = 1.02;

impl BumpWeight {
    pub fn new(kind: BumpKind, y: f64) -> Result<Self> {
        if !(y >= 1.0) || !y.is_finite() {
            return Err(LabError::domain(format!("inertness scale Y must be >= 1, got {y}")));
        }
        let w = 1.0 / y;
        // Inward transitions are capped at a quarter of the support length.
        let (rise, fall, symmetric) = match kind {
            BumpKind::PlateauOnHalfOne => {
                let w = w.min(0.125);
                (Some((0.5, 0.5 + w)), (1.0 - w, 1.0), false)
            }
            BumpKind::PlateauOnOneTwo => (Some((1.0 - w, 1.0)), (2.0, 2.0 + w), false),
            BumpKind::SymmetricAnnulus | BumpKind::InsideOneTwo => {
                let w = w.min(0.25);
                (Some((1.0, 1.0 + w)), (2.0 - w, 2.0), kind == BumpKind::SymmetricAnnulus)
            }
            BumpKind::SymmetricPlateau => (None, (2.0, 2.0 + w), true),
            BumpKind::Custom => {
                return Err(LabError::domain("custom weights are built with BumpWeight::custom"))
            }
        };
        Ok(Self::assemble(kind, y, rise, fall, symmetric))
    }

    /// A weight rising on `rise`, falling on `fall`; `rise.1 ≤ fall.0`.
    pub fn custom(rise: (f64, f64), fall: (f64, f64), y: f64) -> Result<Self> {
        let ok = rise.0 < rise.1 && rise.1 <= fall.0 && fall.0 < fall.1;
        if !ok || !(y >= 1.0) {
            return Err(LabError::domain("custom weight needs s0 < p0 <= p1 < s1 and Y >= 1"));
        }
        Ok(Self::assemble(BumpKind::Custom, y, Some(rise), fall, false))
    }

    /// A narrow weight centred at `center` with total width `width` and no plateau.
    pub fn narrow(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) || center - width / 2.0 <= 0.0 {
            return Err(LabError::domain("narrow weight must sit inside (0, ∞)"));
        }
        let h = width / 2.0;
        Self::custom((center - h, center), (center, center + h), 1.0)
    }

    fn assemble(
        kind: BumpKind,
        y: f64,
        rise: Option<(f64, f64)>,
        fall: (f64, f64),
        symmetric: bool,
    ) -> Self {
        let mut out = Self {
            kind,
            inert_scale: y,
            rise,
            fall,
            symmetric,
            derivative_bounds: [0.0; JET_ORDER + 1],
        };
        out.derivative_bounds = out.measure_bounds();
        out
    }

    fn measure_bounds(&self) -> [f64; JET_ORDER + 1] {
        let mut c = [0.0f64; JET_ORDER + 1];
        c[0] = 1.0;
        let mut intervals = vec![self.fall];
        if let Some(r) = self.rise {
            intervals.push(r);
        }
        for (lo, hi) in intervals {
            for i in 0..=BOUND_GRID {
                let x = lo + (hi - lo) * i as f64 / BOUND_GRID as f64;
                let jet = self.jet(x);
                for (j, cj) in c.iter_mut().enumerate().skip(1) {
                    let v = (x.powi(j as i32) * jet.derivative(j)).abs()
                        / self.inert_scale.powi(j as i32);
                    *cj = cj.max(v * BOUND_INFLATION);
                }
            }
        }
        c
    }

    /// Dilate the weight: the result is `x ↦ W(x / s)`.
    pub fn dilate(&self, s: f64) -> Self {
        assert!(s > 0.0, "dilation factor must be positive");
        Self {
            rise: self.rise.map(|(a, b)| (a * s, b * s)),
            fall: (self.fall.0 * s, self.fall.1 * s),
            ..self.clone()
        }
    }

    pub fn kind(&self) -> BumpKind {
        self.kind
    }

    pub fn inert_scale(&self) -> f64 {
        self.inert_scale
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Closed support `[a, b]`.
    pub fn support(&self) -> (f64, f64) {
        if self.symmetric {
            (-self.fall.1, self.fall.1)
        } else {
            (self.rise.map_or(f64::NEG_INFINITY, |r| r.0), self.fall.1)
        }
    }

    /// Interval on which the weight is identically 1 (right half for even weights).
    pub fn plateau(&self) -> Option<(f64, f64)> {
        let lo = match (self.rise, self.symmetric) {
            (Some(r), _) => r.1,
            (None, true) => -self.fall.0,
            (None, false) => f64::NEG_INFINITY,
        };
        (lo <= self.fall.0).then_some((lo, self.fall.0))
    }

    /// Intervals (right half for even weights) where the weight is not constant.
    pub fn transitions(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self.rise.into_iter().collect();
        v.push(self.fall);
        v
    }

    pub fn derivative_bounds(&self) -> &[f64; JET_ORDER + 1] {
        &self.derivative_bounds
    }

    /// Jet of the weight at an arbitrary jet argument (chain rule included).
    pub fn eval_jet(&self, x: Jet) -> Jet {
        let x = if self.symmetric && x.value() < 0.0 { -x } else { x };
        let up = match self.rise {
            Some((a, b)) => smooth_step((x + (-a)).scale(1.0 / (b - a))),
            None => Jet::constant(1.0),
        };
        let (c, d) = self.fall;
        let down = smooth_step((-x + d).scale(1.0 / (d - c)));
        up * down
    }

    pub fn jet(&self, x: f64) -> Jet {
        self.eval_jet(Jet::variable(x))
    }

    pub fn value(&self, x: f64) -> f64 {
        let x = if self.symmetric { x.abs() } else { x };
        let up = match self.rise {
            Some((a, b)) => step_value((x - a) / (b - a)),
            None => 1.0,
        };
        let (c, d) = self.fall;
        up * step_value((d - x) / (d - c))
    }

    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        assert!(k <= JET_ORDER, "derivatives available up to order {JET_ORDER}");
        self.jet(x).derivative(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_support_examples() {
        let w = BumpWeight::new(BumpKind::PlateauOnHalfOne, 10.0).unwrap();
        assert_eq!(w.value(0.75), 1.0);
        assert_eq!(w.value(0.49), 0.0);
        let u = BumpWeight::new(BumpKind::PlateauOnOneTwo, 1.0).unwrap();
        assert_eq!(u.value(1.5), 1.0);
        assert_eq!(u.value(3.0), 0.0);
        let s = BumpWeight::new(BumpKind::SymmetricPlateau, 4.0).unwrap();
        assert_eq!(s.value(-1.9), 1.0);
        assert_eq!(s.value(2.3), 0.0);
        assert!(BumpWeight::new(BumpKind::PlateauOnHalfOne, 0.5).is_err());
    }

    #[test]
    fn even_weights_are_even() {
        let a = BumpWeight::new(BumpKind::SymmetricAnnulus, 3.0).unwrap();
        for x in [1.05, 1.3, 1.95] {
            assert_eq!(a.value(x), a.value(-x));
        }
        assert_eq!(a.value(0.5), 0.0);
    }

    #[test]
    fn step_is_smooth_and_monotone() {
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = smooth_step(Jet::variable(i as f64 / 100.0)).value();
            assert!(v >= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
        for t in [0.01, 0.3, 0.77] {
            assert!((step_value(t) - smooth_step(Jet::variable(t)).value()).abs() < 1e-15);
        }
        let mid = smooth_step(Jet::variable(0.5));
        assert!((mid.value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let w = BumpWeight::new(BumpKind::InsideOneTwo, 5.0).unwrap();
        let x = 1.1;
        let h = 1e-6;
        let fd = (w.value(x + h) - w.value(x - h)) / (2.0 * h);
        assert!((w.derivative(x, 1) - fd).abs() < 1e-6);
        let fd2 = (w.derivative(x + h, 1) - w.derivative(x - h, 1)) / (2.0 * h);
        assert!((w.derivative(x, 2) - fd2).abs() < 1e-4);
    }

    #[test]
    fn dilation_preserves_scaled_bounds() {
        let w = BumpWeight::new(BumpKind::SymmetricAnnulus, 2.0).unwrap();
        let v = w.dilate(3.0);
        assert_eq!(v.support(), (-6.0, 6.0));
        assert!((v.value(4.5) - w.value(1.5)).abs() < 1e-15);
    }
}
