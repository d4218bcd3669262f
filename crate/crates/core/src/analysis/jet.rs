//! Truncated Taylor jets: `Jet.0[k]` is the k-th Taylor coefficient, so the
//! k-th derivative is `k! · Jet.0[k]`.

use std::ops::{Add, Mul, Neg, Sub};

pub const JET_ORDER: usize = 8;
const N: usize = JET_ORDER + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; N]);

impl Jet {
    pub fn constant(c: f64) -> Self {
        let mut a = [0.0; N];
        a[0] = c;
        Jet(a)
    }

    /// The identity map at `x`.
    pub fn variable(x: f64) -> Self {
        let mut a = [0.0; N];
        a[0] = x;
        a[1] = 1.0;
        Jet(a)
    }

    /// `exp(u)` as a function of `u`, at `u`.
    pub fn exp_variable(u: f64) -> Self {
        Jet::variable(u).exp()
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// `d^k/dx^k` at the base point.
    pub fn derivative(&self, k: usize) -> f64 {
        self.0[k] * (1..=k).map(|i| i as f64).product::<f64>()
    }

    pub fn scale(self, c: f64) -> Self {
        Jet(self.0.map(|v| v * c))
    }

    pub fn recip(self) -> Self {
        let b = self.0;
        let mut c = [0.0; N];
        c[0] = 1.0 / b[0];
        for k in 1..N {
            let s: f64 = (1..=k).map(|j| b[j] * c[k - j]).sum();
            c[k] = -s * c[0];
        }
        Jet(c)
    }

    pub fn exp(self) -> Self {
        let a = self.0;
        let mut b = [0.0; N];
        b[0] = a[0].exp();
        for k in 1..N {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
            b[k] = s / k as f64;
        }
        Jet(b)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut r = self.0;
        for (x, y) in r.iter_mut().zip(o.0) {
            *x += y;
        }
        Jet(r)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|v| -v))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut r = [0.0; N];
        for i in 0..N {
            for j in 0..N - i {
                r[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(r)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        let mut r = self.0;
        r[0] += c;
        Jet(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_and_recip_derivatives() {
        let x = Jet::variable(0.3);
        let e = x.exp();
        for k in 0..=JET_ORDER {
            assert!((e.derivative(k) - 0.3f64.exp()).abs() < 1e-12);
        }
        let r = x.recip();
        // d^k (1/x) = (-1)^k k! / x^{k+1}
        let mut fact = 1.0;
        for k in 0..=JET_ORDER {
            if k > 0 {
                fact *= k as f64;
            }
            let expect = (-1f64).powi(k as i32) * fact / 0.3f64.powi(k as i32 + 1);
            assert!((r.derivative(k) - expect).abs() < 1e-9 * expect.abs());
        }
    }

    #[test]
    fn product_rule() {
        let x = Jet::variable(2.0);
        let p = x * x * x;
        assert_eq!(p.derivative(1), 12.0);
        assert_eq!(p.derivative(2), 12.0);
        assert_eq!(p.derivative(3), 6.0);
        assert_eq!(p.derivative(4), 0.0);
    }
}
