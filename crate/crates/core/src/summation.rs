//! Compensated, order-fixed summation.
//!
//! Long sums are cut into blocks of [`BLOCK_LEN`] consecutive terms. Each
//! block is accumulated sequentially with Neumaier's compensated sum and
//! the block totals are then combined by a pairwise tree in index order.
//! The block layout depends only on the summation range, so the result is
//! bitwise identical whatever the number of rayon workers.

use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{LabError, Result};

pub const BLOCK_LEN: u64 = 1 << 16;

/// Error-free transformation `a + b = s + err`.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merge another accumulator, keeping both compensation terms.
    #[inline]
    pub fn merge(self, other: Neumaier) -> Neumaier {
        let (s, err) = two_sum(self.sum, other.sum);
        Neumaier {
            sum: s,
            comp: self.comp + other.comp + err,
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated accumulator for complex terms (independent real/imaginary parts).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn merge(self, other: ComplexNeumaier) -> ComplexNeumaier {
        ComplexNeumaier {
            re: self.re.merge(other.re),
            im: self.im.merge(other.im),
        }
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Ordered pairwise tree reduction; the tree shape depends only on `parts.len()`.
pub fn pairwise_reduce<T: Copy>(parts: &[T], zero: T, merge: &impl Fn(T, T) -> T) -> T {
    match parts.len() {
        0 => zero,
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            merge(pairwise_reduce(l, zero, merge), pairwise_reduce(r, zero, merge))
        }
    }
}

fn pairwise(parts: &[ComplexNeumaier]) -> ComplexNeumaier {
    pairwise_reduce(parts, ComplexNeumaier::new(), &|a, b| a.merge(b))
}

/// Sum `term(n)` over `range` with fixed blocks and ordered pairwise reduction.
pub fn reproducible_sum<F>(range: Range<u64>, term: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    if range.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let len = range.end - range.start;
    let n_blocks = len.div_ceil(BLOCK_LEN);
    let blocks: Vec<ComplexNeumaier> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let lo = range.start + b * BLOCK_LEN;
            let hi = (lo + BLOCK_LEN).min(range.end);
            let mut acc = ComplexNeumaier::new();
            for n in lo..hi {
                acc.add(term(n));
            }
            acc
        })
        .collect();
    pairwise(&blocks).value()
}

/// Run `f` on a dedicated pool with `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| LabError::Resource(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
