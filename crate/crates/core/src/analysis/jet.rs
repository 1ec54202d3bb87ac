//! Truncated Taylor series in one variable, used for exact time derivatives
//! of closed-form kernels.

use std::ops::{Add, Mul, Neg, Sub};

/// `c[j] = f^{(j)}(t_0) / j!` for `j <= order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub c: Vec<f64>,
}

impl Jet {
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet { c }
    }

    /// The independent variable at `t0`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut j = Jet::constant(t0, order);
        if order >= 1 {
            j.c[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `f^{(j)}(t_0)`.
    pub fn derivative(&self, j: usize) -> f64 {
        self.c[j] * (1..=j).map(|i| i as f64).product::<f64>()
    }

    pub fn scale(&self, a: f64) -> Jet {
        Jet {
            c: self.c.iter().map(|v| a * v).collect(),
        }
    }

    pub fn add_const(&self, a: f64) -> Jet {
        let mut out = self.clone();
        out.c[0] += a;
        out
    }

    /// `f(self)` from the derivatives `d[j] = f^{(j)}(self.value())`.
    pub fn compose(&self, d: &[f64]) -> Jet {
        let k = self.order();
        let mut shifted = self.clone();
        shifted.c[0] = 0.0;
        let mut out = Jet::constant(d[0], k);
        let mut power = Jet::constant(1.0, k);
        let mut fact = 1.0;
        for (j, dj) in d.iter().enumerate().take(k + 1).skip(1) {
            power = &power * &shifted;
            fact *= j as f64;
            for i in 0..=k {
                out.c[i] += dj / fact * power.c[i];
            }
        }
        out
    }

    pub fn exp(&self) -> Jet {
        let k = self.order();
        let mut g = vec![0.0; k + 1];
        g[0] = self.c[0].exp();
        for j in 1..=k {
            let s: f64 = (1..=j).map(|i| i as f64 * self.c[i] * g[j - i]).sum();
            g[j] = s / j as f64;
        }
        Jet { c: g }
    }

    pub fn ln(&self) -> Jet {
        let k = self.order();
        let x = self.c[0];
        let mut d = vec![x.ln()];
        let mut fact = 1.0;
        for j in 1..=k {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            d.push(sign * fact / x.powi(j as i32));
            fact *= j as f64;
        }
        self.compose(&d)
    }

    pub fn recip(&self) -> Jet {
        let k = self.order();
        let mut g = vec![0.0; k + 1];
        g[0] = 1.0 / self.c[0];
        for j in 1..=k {
            let s: f64 = (1..=j).map(|i| self.c[i] * g[j - i]).sum();
            g[j] = -s * g[0];
        }
        Jet { c: g }
    }

    /// `sinh(a t)` and `cosh(a t)` for `self = t`.
    pub fn sinh_cosh(&self, a: f64) -> (Jet, Jet) {
        let k = self.order();
        let x = a * self.c[0];
        let (s, c) = (x.sinh(), x.cosh());
        let mut ds = Vec::with_capacity(k + 1);
        let mut dc = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let aj = a.powi(j as i32);
            if j % 2 == 0 {
                ds.push(aj * s);
                dc.push(aj * c);
            } else {
                ds.push(aj * c);
                dc.push(aj * s);
            }
        }
        // derivatives are taken in a t, so compose on t itself
        (self.compose(&ds), self.compose(&dc))
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let k = self.order();
        let mut c = vec![0.0; k + 1];
        for i in 0..=k {
            for j in 0..=k - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Jet { c }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_derivatives() {
        let t = Jet::variable(0.7, 4);
        let e = t.scale(2.0).exp();
        for j in 0..=4 {
            assert!((e.derivative(j) - 2f64.powi(j as i32) * 1.4f64.exp()).abs() < 1e-12);
        }
        let l = t.ln();
        assert!((l.derivative(3) - 2.0 / 0.7f64.powi(3)).abs() < 1e-10);
        let r = t.recip();
        assert!((r.derivative(2) - 2.0 / 0.7f64.powi(3)).abs() < 1e-10);
        let (s, c) = t.sinh_cosh(2.0);
        assert!((s.derivative(1) - 2.0 * 1.4f64.cosh()).abs() < 1e-12);
        assert!((c.derivative(3) - 8.0 * 1.4f64.sinh()).abs() < 1e-11);
        let p = &(&t * &t) - &t;
        assert!((p.derivative(2) - 2.0).abs() < 1e-14);
        assert!((p.derivative(1) - (2.0 * 0.7 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn composition_against_finite_differences() {
        // f(t) = exp(sin-like jet) checked by central differences
        let f = |t: f64| ((2.0 * t).sinh() / (1.0 + t * t)).exp();
        let t0 = 0.4;
        let t = Jet::variable(t0, 2);
        let (s, _) = t.sinh_cosh(2.0);
        let den = (&t * &t).add_const(1.0).recip();
        let j = (&s * &den).exp();
        let h = 1e-4;
        let d1 = (f(t0 + h) - f(t0 - h)) / (2.0 * h);
        let d2 = (f(t0 + h) - 2.0 * f(t0) + f(t0 - h)) / (h * h);
        assert!((j.derivative(1) - d1).abs() < 1e-7);
        assert!((j.derivative(2) - d2).abs() < 1e-5);
    }
}
