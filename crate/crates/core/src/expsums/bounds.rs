//! Closed-form exponents for the twisted sums, in exact rational arithmetic.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

pub type Exponent = Ratio<i64>;

fn r(n: i64, d: i64) -> Exponent {
    Ratio::new(n, d)
}

/// β at which the new exponent meets the Kumar–Mallesham–Singh exponent.
pub fn kms_crossover() -> Exponent {
    r(17, 37)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub beta: Exponent,
    /// The three competing terms `2/3 + 5β/12`, `7/8`, `19/14 − β`.
    pub terms: [Exponent; 3],
    pub exponent: Exponent,
    /// `5/14 < β < 4/5`.
    pub in_range: bool,
    pub kms: Exponent,
    /// `1/3 < β < 7/9`.
    pub kms_valid: bool,
    /// Prefactor `α √β` of the KMS bound.
    pub kms_constant: f64,
    /// `max(2/3, 3β/2)` for fixed α.
    pub ren_ye: Exponent,
    pub trivial: Exponent,
    pub improves_on_kms: bool,
}

impl BoundReport {
    pub fn to_map(&self) -> BTreeMap<&'static str, Exponent> {
        BTreeMap::from([
            ("exponent", self.exponent),
            ("kms", self.kms),
            ("ren_ye", self.ren_ye),
            ("trivial", self.trivial),
        ])
    }

    pub fn exponent_f64(&self) -> f64 {
        self.exponent.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn bound_calculator(alpha: f64, beta: Exponent) -> BoundReport {
    let terms = [r(2, 3) + r(5, 12) * beta, r(7, 8), r(19, 14) - beta];
    let exponent = terms.iter().copied().max().unwrap_or_else(Exponent::one);
    let kms = r(3, 4) + r(9, 28) * beta;
    let beta_f = beta.to_f64().unwrap_or(f64::NAN);
    BoundReport {
        beta,
        terms,
        exponent,
        in_range: beta > r(5, 14) && beta < r(4, 5),
        kms,
        kms_valid: beta > r(1, 3) && beta < r(7, 9),
        kms_constant: alpha * beta_f.max(0.0).sqrt(),
        ren_ye: r(2, 3).max(r(3, 2) * beta),
        trivial: Exponent::one(),
        improves_on_kms: exponent < kms,
    }
}

/// Continued-fraction approximation: the first convergent within 1e−12 of
/// `beta`, with denominator at most 10⁶.
pub fn exponent_from_f64(beta: f64) -> Option<Exponent> {
    if !beta.is_finite() || beta.abs() > 1e6 {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut x = beta;
    loop {
        let a = x.floor();
        let (h2, k2) = (a as i64 * h1 + h0, a as i64 * k1 + k0);
        if k2 > 1_000_000 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = x - a;
        if (h1 as f64 / k1 as f64 - beta).abs() < 1e-12 || f == 0.0 {
            break;
        }
        x = 1.0 / f;
    }
    Some(Ratio::new(h1, k1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_thirds() {
        let b = bound_calculator(1.0, r(2, 3));
        assert_eq!(b.exponent, r(17, 18));
        assert_eq!(b.kms, r(27, 28));
        assert!(b.improves_on_kms && b.in_range && b.kms_valid);
    }

    #[test]
    fn crossover_and_boundary() {
        let b = bound_calculator(1.0, kms_crossover());
        assert_eq!(b.exponent, b.kms);
        assert!(!b.improves_on_kms);
        let e = bound_calculator(1.0, r(4, 5));
        assert_eq!(e.terms[0], Exponent::one());
        assert!(!e.in_range);
    }

    #[test]
    fn float_conversion() {
        assert_eq!(exponent_from_f64(0.5), Some(r(1, 2)));
        assert_eq!(exponent_from_f64(2.0 / 3.0), Some(r(2, 3)));
    }
}
