//! Minimal double-double arithmetic, used only to reduce phases `α n^β`
//! modulo 1 without losing the fractional digits to the integer part.

use crate::summation::two_sum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

const LN2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn quick_two_sum(a: f64, b: f64) -> DoubleDouble {
    let s = a + b;
    DoubleDouble {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact product of two doubles.
    pub fn product(a: f64, b: f64) -> Self {
        let (p, e) = two_prod(a, b);
        quick_two_sum(p, e)
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }

    #[inline]
    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    #[inline]
    pub fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        quick_two_sum(p, e + self.lo * b)
    }

    /// Multiplication by a power of two (exact).
    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn exp(self) -> Self {
        let k = (self.hi / LN2.hi).round();
        let r = self.sub(LN2.mul_f64(k)).ldexp(-10);
        // Taylor series of exp(r) - 1 for |r| < 4e-4.
        let mut term = r;
        let mut sum = r;
        for j in 2..=10 {
            term = term.mul(r).mul_f64(1.0 / j as f64);
            sum = sum.add(term);
        }
        // (1 + s)^2 - 1 = s (2 + s), kept in expm1 form to avoid cancellation.
        for _ in 0..10 {
            sum = sum.mul(sum.add(DoubleDouble::from_f64(2.0)));
        }
        sum.add(Self::ONE).ldexp(k as i32)
    }

    /// Natural logarithm of a positive double, to double-double accuracy.
    pub fn ln_of(x: f64) -> Self {
        debug_assert!(x > 0.0);
        let y = DoubleDouble::from_f64(x.ln());
        // One Newton step on exp(y) = x.
        let corr = y.neg().exp().mul_f64(x).sub(Self::ONE);
        y.add(corr)
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac(self) -> f64 {
        let h = self.hi - self.hi.floor();
        let t = h + self.lo;
        let f = t - t.floor();
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }
}

/// `α n^β mod 1` with the power evaluated in double-double arithmetic.
pub fn phase_frac(alpha: f64, beta: f64, n: f64) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    let v = if beta == 1.0 {
        DoubleDouble::product(alpha, n)
    } else if beta == 0.0 {
        DoubleDouble::from_f64(alpha)
    } else {
        DoubleDouble::ln_of(n).mul_f64(beta).exp().mul_f64(alpha)
    };
    v.frac()
}
