//! Twisted sums `Σ λ(1,n) e(α n^β)`, their smoothed variants and dyadic
//! exponent fits.

mod bounds;

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;

pub use bounds::{bound_calculator, exponent_from_f64, kms_crossover, BoundReport, Exponent};

use crate::analysis::{BumpKind, BumpWeight};
use crate::ddouble::phase_frac;
use crate::error::{LabError, Result};
use crate::summation::reproducible_sum;

/// Smoothing must satisfy `Y ≤ T^{β − SMOOTHING_MARGIN}`.
pub const SMOOTHING_MARGIN: f64 = 0.01;
pub const MIN_SWEEP_POINTS: usize = 6;

/// λ ≡ 1 on `1..=n`.
pub fn constant_coefficients(n: usize) -> Vec<f64> {
    vec![1.0; n]
}

#[derive(Debug, Clone, Copy)]
pub struct TwistSumSpec<'a> {
    /// `coefficients[n − 1] = λ(1, n)`.
    pub coefficients: &'a [f64],
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub weight: Option<&'a BumpWeight>,
}

impl<'a> TwistSumSpec<'a> {
    pub fn new(coefficients: &'a [f64], t: f64, alpha: f64, beta: f64) -> Self {
        Self { coefficients, t, alpha, beta, weight: None }
    }

    pub fn weighted(mut self, weight: &'a BumpWeight) -> Self {
        self.weight = Some(weight);
        self
    }

    /// Integer range `lo..hi` of indices that can contribute.
    fn index_range(&self) -> Result<(u64, u64)> {
        if !(self.t >= 1.0) || !self.t.is_finite() {
            return Err(LabError::domain(format!("T must be >= 1, got {}", self.t)));
        }
        let (lo, hi) = match self.weight {
            None => (1.0, self.t.floor()),
            Some(w) => {
                let (a, b) = w.support();
                ((a * self.t).ceil().max(1.0), (b * self.t).floor())
            }
        };
        if hi > self.coefficients.len() as f64 {
            return Err(LabError::range(format!(
                "sum needs λ(1, n) up to n = {hi}, table stops at {}",
                self.coefficients.len()
            )));
        }
        Ok((lo as u64, (hi as u64 + 1).max(lo as u64)))
    }
}

#[inline]
fn twist(alpha: f64, beta: f64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * phase_frac(alpha, beta, n as f64))
}

/// `Σ_{n ≤ T} λ(1,n) e(αn^β)`, or `Σ_n λ(1,n) e(αn^β) W(n/T)` when weighted.
pub fn twist_sum(spec: &TwistSumSpec) -> Result<Complex64> {
    let (lo, hi) = spec.index_range()?;
    if let Some(w) = spec.weight {
        let cap = spec.t.powf(spec.beta - SMOOTHING_MARGIN);
        if w.inert_scale() > cap {
            return Err(LabError::domain(format!(
                "inertness scale {} exceeds T^(β − {SMOOTHING_MARGIN}) = {cap}",
                w.inert_scale()
            )));
        }
    }
    let (lambda, alpha, beta, t) = (spec.coefficients, spec.alpha, spec.beta, spec.t);
    Ok(match spec.weight {
        None => reproducible_sum(lo..hi, |n| lambda[n as usize - 1] * twist(alpha, beta, n)),
        Some(w) => reproducible_sum(lo..hi, |n| {
            let v = w.value(n as f64 / t);
            if v == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                lambda[n as usize - 1] * v * twist(alpha, beta, n)
            }
        }),
    })
}

/// `T = 2^k` for `k_min ≤ k ≤ k_max`.
pub fn dyadic_grid(k_min: u32, k_max: u32) -> Vec<f64> {
    (k_min..=k_max).map(|k| (k as f64).exp2()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub sum: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentReport {
    pub alpha: f64,
    pub beta: f64,
    pub rows: Vec<SweepRow>,
    /// `(log₂ T, log₂ |S|)`.
    pub points: Vec<(f64, f64)>,
    pub fitted_slope: f64,
    pub slope_stderr: f64,
    pub predicted: Option<BoundReport>,
}

/// Least-squares line through `points`; returns `(slope, stderr of slope)`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if points.len() < 2 || !(sxx > 0.0) {
        return Err(LabError::domain("slope fit needs at least two distinct T"));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let stderr = if points.len() > 2 {
        let rss: f64 = points
            .iter()
            .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
            .sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok((slope, stderr))
}

/// Evaluate the sum at every `T` in `t_list` and fit the growth exponent.
///
/// A weight, when given, is applied at every `T` as `W(n/T)`.
pub fn exponent_sweep(
    coefficients: &[f64],
    alpha: f64,
    beta: f64,
    t_list: &[f64],
    weight: Option<&BumpWeight>,
) -> Result<ExponentReport> {
    let mut rows = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let mut spec = TwistSumSpec::new(coefficients, t, alpha, beta);
        spec.weight = weight;
        rows.push(SweepRow { t, sum: twist_sum(&spec)? });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.t.log2(), r.sum.norm().log2())).collect();
    if points.iter().any(|p| !p.1.is_finite()) {
        return Err(LabError::domain("a swept sum vanished; log |S| undefined"));
    }
    let (fitted_slope, slope_stderr) = fit_slope(&points)?;
    Ok(ExponentReport {
        alpha,
        beta,
        predicted: exponent_from_f64(beta).map(|b| bound_calculator(alpha, b)),
        rows,
        points,
        fitted_slope,
        slope_stderr,
    })
}

pub const CSV_HEADER: &str = "T,alpha,beta,re,im,abs,log2T,log2abs";

/// Write sweep rows as CSV with 17 significant digits.
pub fn write_csv<W: Write>(mut out: W, alpha: f64, beta: f64, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let a = r.sum.norm();
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.t,
            alpha,
            beta,
            r.sum.re,
            r.sum.im,
            a,
            r.t.log2(),
            a.log2()
        )?;
    }
    Ok(())
}

impl ExponentReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(out, self.alpha, self.beta, &self.rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingSplit {
    /// `Σ λ(1,n) e(αn^β) W(n/T)` with `W` on `[1/2, 1]`.
    pub smoothed: Complex64,
    /// `Σ_{T/2 < n ≤ T} λ(1,n) e(αn^β)`.
    pub unsmoothed: Complex64,
    pub difference: Complex64,
    /// `Σ λ(1,n) e(αn^β) (W(n/T) − 1)` over the transition windows only.
    pub window_sum: Complex64,
    pub window_count: u64,
    pub window_max_lambda: f64,
}

impl SmoothingSplit {
    /// `window_count · max |λ|` over the windows; `|W − 1| ≤ 1` there.
    pub fn envelope(&self) -> f64 {
        self.window_count as f64 * self.window_max_lambda
    }
}

/// Compare the `[1/2, 1]`-smoothed dyadic sum with the sharp one.
pub fn smoothing_error_split(
    coefficients: &[f64],
    t: f64,
    alpha: f64,
    beta: f64,
    y: f64,
) -> Result<SmoothingSplit> {
    let w = BumpWeight::new(BumpKind::PlateauOnHalfOne, y)?;
    let smoothed = twist_sum(&TwistSumSpec::new(coefficients, t, alpha, beta).weighted(&w))?;
    let lo = (t / 2.0).floor() as u64 + 1;
    let hi = t.floor() as u64 + 1;
    let unsmoothed = reproducible_sum(lo..hi, |n| coefficients[n as usize - 1] * twist(alpha, beta, n));

    let mut window_sum = Complex64::new(0.0, 0.0);
    let mut window_count = 0;
    let mut window_max_lambda = 0.0f64;
    for n in lo..hi {
        let v = w.value(n as f64 / t);
        if v != 1.0 {
            let l = coefficients[n as usize - 1];
            window_sum += l * (v - 1.0) * twist(alpha, beta, n);
            window_count += 1;
            window_max_lambda = window_max_lambda.max(l.abs());
        }
    }
    Ok(SmoothingSplit {
        smoothed,
        unsmoothed,
        difference: smoothed - unsmoothed,
        window_sum,
        window_count,
        window_max_lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term() {
        let one = constant_coefficients(4);
        let s = twist_sum(&TwistSumSpec::new(&one, 1.0, 0.3, 0.7)).unwrap();
        assert!((s - Complex64::from_polar(1.0, TAU * 0.3)).norm() < 1e-15);
    }

    #[test]
    fn geometric_closed_form() {
        let one = constant_coefficients(1000);
        let alpha = 2f64.sqrt();
        let e = |x: f64| Complex64::from_polar(1.0, TAU * x);
        let s = twist_sum(&TwistSumSpec::new(&one, 1000.0, alpha, 1.0)).unwrap();
        let closed = (e(1001.0 * alpha) - e(alpha)) / (e(alpha) - 1.0);
        assert!((s - closed).norm() < 1e-10);
    }

    #[test]
    fn range_error_past_table() {
        let one = constant_coefficients(10);
        assert!(matches!(
            twist_sum(&TwistSumSpec::new(&one, 11.0, 0.0, 0.5)),
            Err(LabError::Range(_))
        ));
    }

    #[test]
    fn constant_sweep_slope_is_one() {
        let one = constant_coefficients(1 << 12);
        let r = exponent_sweep(&one, 0.0, 0.5, &dyadic_grid(5, 12), None).unwrap();
        assert!((r.fitted_slope - 1.0).abs() < 1e-6);
        assert!(fit_slope(&[(1.0, 2.0), (1.0, 3.0)]).is_err());
    }

    #[test]
    fn csv_shape() {
        let rows = [SweepRow { t: 1024.0, sum: Complex64::new(3.0, -4.0) }];
        let mut buf = Vec::new();
        write_csv(&mut buf, 1.0, 0.5, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 8);
        assert_eq!(fields[5].parse::<f64>().unwrap(), 5.0);
    }
}
