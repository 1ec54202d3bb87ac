//! One-dimensional Gauss rules, mapped radial and temporal rules, and product
//! rules on the circle and on S^2.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{hermite_fns_into, ln_gamma};

/// The measure a rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFunction {
    /// `(1-u)^a (1+u)^b du` on `[-1, 1]`.
    Jacobi { a: f64, b: f64 },
    /// `r^power dr` on `[0, r_max]`.
    Radial { power: f64, r_max: f64 },
    /// `t^{2k-1} dt` on `(0, t_max]`.
    Temporal { k: usize, t_max: f64 },
    /// `e^{-x^2} dx` on R.
    Hermite,
    /// `dx` on R, integrands assumed to carry Gaussian decay.
    Lebesgue,
    /// `s^a e^{-s} ds` on `(0, inf)`.
    Laguerre { a: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub weight: WeightFunction,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Radial measure exponent, if this is a radial rule.
    pub fn radial_power(&self) -> Option<f64> {
        match self.weight {
            WeightFunction::Radial { power, .. } => Some(power),
            _ => None,
        }
    }

    /// Same nodes, measure `r^power dr` instead of the current radial power.
    pub fn with_radial_power(&self, power: f64) -> Result<QuadratureRule> {
        let WeightFunction::Radial { power: old, r_max } = self.weight else {
            return Err(Error::GridMismatch("not a radial rule".into()));
        };
        let weights = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * r.powf(power - old))
            .collect();
        Ok(QuadratureRule {
            nodes: self.nodes.clone(),
            weights,
            weight: WeightFunction::Radial { power, r_max },
        })
    }
}

/// Surface measure `omega_{n-1}` of `S^{n-1}`.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

/// Gauss-Legendre nodes/weights on `[-1, 1]` by Newton iteration on `P_N`.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule {
        nodes,
        weights,
        weight: WeightFunction::Jacobi { a: 0.0, b: 0.0 },
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Gauss-Chebyshev rule for `(1-u^2)^{-1/2}`.
pub fn gauss_chebyshev(n: usize) -> QuadratureRule {
    let nf = n as f64;
    let nodes = (0..n).map(|i| -(PI * (2.0 * i as f64 + 1.0) / (2.0 * nf)).cos()).collect();
    QuadratureRule {
        nodes,
        weights: vec![PI / nf; n],
        weight: WeightFunction::Jacobi { a: -0.5, b: -0.5 },
    }
}

/// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights the
/// squared first eigenvector components scaled by `mu0`.
fn golub_welsch(diag: &[f64], offdiag: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = offdiag[i];
            m[(i + 1, i)] = offdiag[i];
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| (eig.eigenvalues[j], mu0 * eig.eigenvectors[(0, j)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Gauss-Jacobi rule for `(1-u)^a (1+u)^b` via Golub-Welsch.
pub fn gauss_jacobi_ab(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::InvalidParameter(format!("Jacobi exponents must exceed -1, got ({a}, {b})")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("rule needs at least one node".into()));
    }
    let ab = a + b;
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            let kf = k as f64;
            if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
            }
        })
        .collect();
    let offdiag: Vec<f64> = (1..n)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            let num = 4.0 * kf * (kf + a) * (kf + b) * (kf + ab);
            let den = s * s * (s + 1.0) * (s - 1.0);
            if k == 1 && (ab + 1.0).abs() < 1e-14 {
                // (s - 1) and (k + a + b) both vanish; take the limit.
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
            } else {
                (num / den).sqrt()
            }
        })
        .collect();
    let mu0 = ((ab + 1.0) * 2.0f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(ab + 2.0)).exp();
    let (nodes, weights) = golub_welsch(&diag, &offdiag, mu0);
    Ok(QuadratureRule {
        nodes,
        weights,
        weight: WeightFunction::Jacobi { a, b },
    })
}

/// Rule for the Funk-Hecke measure `(1-u^2)^{(n-3)/2} du` on `[-1, 1]`.
///
/// `n = 2` is Gauss-Chebyshev, `n = 3` Gauss-Legendre, larger `n` Golub-Welsch.
pub fn gauss_jacobi(order: usize, n: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::InvalidParameter("rule needs at least one node".into()));
    }
    match n {
        0 | 1 => Err(Error::UnsupportedDimension(n)),
        2 => Ok(gauss_chebyshev(order)),
        3 => Ok(gauss_legendre(order)),
        _ => {
            let e = (n as f64 - 3.0) / 2.0;
            gauss_jacobi_ab(order, e, e)
        }
    }
}

/// Generalized Gauss-Laguerre nodes and weights for `s^a e^{-s}`.
pub(crate) fn gauss_laguerre_raw(n: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + a + 1.0).collect();
    let offdiag: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + a)).sqrt()).collect();
    golub_welsch(&diag, &offdiag, ln_gamma(a + 1.0).exp())
}

pub fn gauss_laguerre(n: usize, a: f64) -> Result<QuadratureRule> {
    if !(a > -1.0) || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "Gauss-Laguerre needs n >= 1 and a > -1, got ({n}, {a})"
        )));
    }
    let (nodes, weights) = gauss_laguerre_raw(n, a);
    Ok(QuadratureRule {
        nodes,
        weights,
        weight: WeightFunction::Laguerre { a },
    })
}

fn hermite_nodes_and_christoffel(n: usize) -> (Vec<f64>, Vec<f64>) {
    let diag = vec![0.0; n];
    let offdiag: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let (mut nodes, _) = golub_welsch(&diag, &offdiag, PI.sqrt());
    let mut h = vec![0.0; n + 1];
    let mut scaled = vec![0.0; n];
    for (x, s) in nodes.iter_mut().zip(scaled.iter_mut()) {
        for _ in 0..3 {
            hermite_fns_into(*x, &mut h);
            let d = (2.0 * n as f64).sqrt() * h[n - 1] - *x * h[n];
            if d != 0.0 {
                *x -= h[n] / d;
            }
        }
        hermite_fns_into(*x, &mut h);
        *s = 1.0 / h[..n].iter().map(|v| v * v).sum::<f64>();
    }
    // symmetrize
    for i in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 0.5 * (scaled[i] + scaled[n - 1 - i]);
        scaled[i] = w;
        scaled[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, scaled)
}

/// Gauss-Hermite rule for `e^{-x^2} dx`.
pub fn gauss_hermite(n: usize) -> QuadratureRule {
    let (nodes, scaled) = hermite_nodes_and_christoffel(n);
    let weights = nodes.iter().zip(&scaled).map(|(x, s)| s * (-x * x).exp()).collect();
    QuadratureRule {
        nodes,
        weights,
        weight: WeightFunction::Hermite,
    }
}

/// Gauss-Hermite nodes with weights `w_i e^{x_i^2}`, for plain `int f dx`.
///
/// Weights come from the Christoffel function of the normalized Hermite
/// functions, so they never pass through an underflowing `e^{-x^2}`.
pub fn gauss_hermite_lebesgue(n: usize) -> QuadratureRule {
    let (nodes, weights) = hermite_nodes_and_christoffel(n);
    QuadratureRule {
        nodes,
        weights,
        weight: WeightFunction::Lebesgue,
    }
}

/// Default radial cutoff: every integrand in scope carries `e^{-r^2/2}`.
pub const DEFAULT_R_MAX: f64 = 14.0;

/// Exponent descriptor of a radial measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialMeasure {
    /// `r^{n-1} dr`, Lebesgue measure on R^n in polar coordinates.
    Dimension(usize),
    /// `r^{2 alpha + 1} dr`, the Laguerre measure `mu_alpha`.
    Laguerre(f64),
    /// `r^p dr`.
    Power(f64),
}

impl RadialMeasure {
    pub fn power(&self) -> f64 {
        match *self {
            RadialMeasure::Dimension(n) => n as f64 - 1.0,
            RadialMeasure::Laguerre(alpha) => 2.0 * alpha + 1.0,
            RadialMeasure::Power(p) => p,
        }
    }
}

/// Mapped Gauss-Legendre rule on `[0, r_max]` against `r^p dr`.
pub fn radial_rule(order: usize, measure: RadialMeasure, r_max: f64) -> Result<QuadratureRule> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::OutOfDomain {
            value: r_max,
            domain: "R_max in (0, inf)",
        });
    }
    if order == 0 {
        return Err(Error::InvalidParameter("rule needs at least one node".into()));
    }
    let power = measure.power();
    if power <= -1.0 {
        return Err(Error::InvalidParameter(format!("radial power {power} is not integrable at 0")));
    }
    let gl = gauss_legendre(order);
    let half = 0.5 * r_max;
    let nodes: Vec<f64> = gl.nodes.iter().map(|x| half * (x + 1.0)).collect();
    let weights = nodes.iter().zip(&gl.weights).map(|(r, w)| half * w * r.powf(power)).collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        weight: WeightFunction::Radial { power, r_max },
    })
}

/// `T_max = 40/n`: the slowest temporal decay in scope is `e^{-2nt}`.
pub fn default_t_max(n: usize) -> f64 {
    40.0 / n as f64
}

/// Composite rule on `(0, t_max]` against `t^{2k-1} dt`: Gauss-Legendre on
/// `[0, 1]` and Gauss-Legendre in `log t` on `[1, t_max]`, `order` nodes each.
pub fn temporal_rule(order: usize, k: usize, t_max: f64) -> Result<QuadratureRule> {
    if order == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "temporal rule needs N >= 1 and k >= 1, got ({order}, {k})"
        )));
    }
    if !(t_max > 1.0) {
        return Err(Error::OutOfDomain {
            value: t_max,
            domain: "t_max in (1, inf)",
        });
    }
    let gl = gauss_legendre(order);
    let p = 2 * k as i32 - 1;
    let mut nodes = Vec::with_capacity(2 * order);
    let mut weights = Vec::with_capacity(2 * order);
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let t = 0.5 * (x + 1.0);
        nodes.push(t);
        weights.push(0.5 * w * t.powi(p));
    }
    let span = t_max.ln();
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let s = 0.5 * span * (x + 1.0);
        let t = s.exp();
        nodes.push(t);
        weights.push(0.5 * span * w * t.powi(p + 1));
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        weight: WeightFunction::Temporal { k, t_max },
    })
}

/// Gauss-Legendre in `log t` over `[t_min, t_max]` against `t^{2k-1} dt`,
/// for integrands whose features span many decades of `t`.
pub fn log_temporal_rule(order: usize, k: usize, t_min: f64, t_max: f64) -> Result<QuadratureRule> {
    if order == 0 || k == 0 || !(t_min > 0.0 && t_max > t_min) {
        return Err(Error::InvalidParameter(format!(
            "log temporal rule needs N, k >= 1 and 0 < t_min < t_max, got ({order}, {k}, {t_min}, {t_max})"
        )));
    }
    let gl = gauss_legendre(order);
    let (a, b) = (t_min.ln(), t_max.ln());
    let p = 2 * k as i32;
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let t = (a + 0.5 * (b - a) * (x + 1.0)).exp();
        nodes.push(t);
        weights.push(0.5 * (b - a) * w * t.powi(p));
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        weight: WeightFunction::Temporal { k, t_max },
    })
}

/// Product rule on `S^{n-1}`, `n` in {2, 3}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereRule {
    pub n: usize,
    /// Exactness degree for spherical harmonics.
    pub order: usize,
    /// Unit vectors, stored contiguously with stride `n`.
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.n..(i + 1) * self.n]
    }

    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        (0..self.len()).map(|i| self.weights[i] * f(self.point(i))).sum()
    }
}

/// Trapezoid on the circle (`2 order + 1` nodes) or Gauss-Legendre in `cos theta`
/// times trapezoid in longitude on S^2.
pub fn sphere_rule(n: usize, order: usize) -> Result<SphereRule> {
    match n {
        2 => {
            let m = 2 * order + 1;
            let mut points = Vec::with_capacity(2 * m);
            for i in 0..m {
                let th = 2.0 * PI * i as f64 / m as f64;
                points.push(th.cos());
                points.push(th.sin());
            }
            Ok(SphereRule {
                n,
                order,
                points,
                weights: vec![2.0 * PI / m as f64; m],
            })
        }
        3 => {
            let n_theta = order / 2 + 1;
            let n_phi = order + 1;
            let gl = gauss_legendre(n_theta);
            let mut points = Vec::with_capacity(3 * n_theta * n_phi);
            let mut weights = Vec::with_capacity(n_theta * n_phi);
            for (c, w) in gl.nodes.iter().zip(&gl.weights) {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for j in 0..n_phi {
                    let ph = 2.0 * PI * j as f64 / n_phi as f64;
                    points.extend_from_slice(&[s * ph.cos(), s * ph.sin(), *c]);
                    weights.push(w * 2.0 * PI / n_phi as f64);
                }
            }
            Ok(SphereRule { n, order, points, weights })
        }
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{hermite_fn_1d, laguerre_psi, ultraspherical_p};
    use approx::assert_relative_eq;

    fn beta(a: f64, b: f64) -> f64 {
        (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
    }

    #[test]
    fn jacobi_total_mass() {
        for order in [1usize, 2, 7, 40] {
            assert_relative_eq!(gauss_jacobi(order, 3).unwrap().integrate(|_| 1.0), 2.0, epsilon = 1e-13);
            assert_relative_eq!(gauss_jacobi(order, 2).unwrap().integrate(|_| 1.0), PI, epsilon = 1e-13);
        }
        assert!(gauss_jacobi(4, 1).is_err());
    }

    #[test]
    fn jacobi_second_moment_n4() {
        let r = gauss_jacobi(20, 4).unwrap();
        assert_relative_eq!(r.integrate(|u| u * u), PI / 8.0, epsilon = 1e-13);
    }

    #[test]
    fn gauss_exactness_against_declared_weight() {
        // int u^{2j} (1-u^2)^e du = B(j + 1/2, e + 1)
        for n in 2..=6usize {
            let e = (n as f64 - 3.0) / 2.0;
            for order in [4usize, 16, 33] {
                let r = gauss_jacobi(order, n).unwrap();
                for deg in 0..2 * order {
                    let got = r.integrate(|u| u.powi(deg as i32));
                    let exact = if deg % 2 == 1 { 0.0 } else { beta(deg as f64 / 2.0 + 0.5, e + 1.0) };
                    assert!(
                        (got - exact).abs() <= 1e-12 * exact.abs().max(1e-3),
                        "n={n} N={order} deg={deg}: {got} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn asymmetric_jacobi_exactness() {
        let (a, b) = (0.3, 1.7);
        let r = gauss_jacobi_ab(12, a, b).unwrap();
        // int (1-u)^a (1+u)^b du = 2^{a+b+1} B(a+1, b+1)
        let exact = 2f64.powf(a + b + 1.0) * beta(a + 1.0, b + 1.0);
        assert_relative_eq!(r.integrate(|_| 1.0), exact, max_relative = 1e-13);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn radial_polynomial_exactness_and_gaussian() {
        for n in 2..=4 {
            let r = radial_rule(n / 2 + 1, RadialMeasure::Dimension(n), 3.0).unwrap();
            assert_relative_eq!(r.integrate(|_| 1.0), 3f64.powi(n as i32) / n as f64, max_relative = 1e-13);
        }
        let r = radial_rule(200, RadialMeasure::Dimension(2), DEFAULT_R_MAX).unwrap();
        assert!((r.integrate(|x| (-x * x).exp()) - 0.5).abs() < 1e-12);
        let r = radial_rule(200, RadialMeasure::Laguerre(0.5), DEFAULT_R_MAX).unwrap();
        let norm = r.integrate(|x| laguerre_psi(0, 0.5, x).unwrap().powi(2));
        assert!((norm - 1.0).abs() < 1e-10);
        assert!(radial_rule(10, RadialMeasure::Dimension(2), 0.0).is_err());
        assert!(radial_rule(10, RadialMeasure::Dimension(2), -1.0).is_err());
    }

    #[test]
    fn laguerre_orthogonality_by_radial_rule() {
        let r = radial_rule(200, RadialMeasure::Laguerre(0.5), DEFAULT_R_MAX).unwrap();
        let v = r.integrate(|x| laguerre_psi(2, 0.5, x).unwrap() * laguerre_psi(3, 0.5, x).unwrap());
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn temporal_gamma_integrals() {
        for n in 2..=3usize {
            let lam = n as f64;
            let r = temporal_rule(64, 1, default_t_max(n)).unwrap();
            let got = r.integrate(|t| (-2.0 * lam * t).exp());
            assert_relative_eq!(got, (2.0 * lam).powi(-2), max_relative = 1e-10);
        }
        let r = temporal_rule(64, 2, default_t_max(2)).unwrap();
        assert_relative_eq!(r.integrate(|t| (-4.0 * t).exp()), 6.0 / 256.0, max_relative = 1e-10);
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hermite_rule_orthonormality() {
        let r = gauss_hermite_lebesgue(128);
        let h35 = r.integrate(|x| hermite_fn_1d(3, x) * hermite_fn_1d(5, x));
        let h33 = r.integrate(|x| hermite_fn_1d(3, x).powi(2));
        assert!(h35.abs() < 1e-12);
        assert!((h33 - 1.0).abs() < 1e-12);
        let classical = gauss_hermite(40);
        assert_relative_eq!(classical.integrate(|x| x * x), PI.sqrt() / 2.0, max_relative = 1e-13);
    }

    #[test]
    fn sphere_masses_and_moments() {
        let c = sphere_rule(2, 10).unwrap();
        assert!((c.integrate(|_| 1.0) - 2.0 * PI).abs() < 1e-13);
        let s = sphere_rule(3, 10).unwrap();
        assert!((s.integrate(|_| 1.0) - 4.0 * PI).abs() < 1e-13);
        assert!((s.integrate(|w| w[0] * w[0]) - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!(sphere_rule(4, 3).is_err());
        assert_relative_eq!(sphere_area(2), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(3), 4.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn zonal_mass_vanishes() {
        for n in 2..=3 {
            let s = sphere_rule(n, 24).unwrap();
            let pole: Vec<f64> = (0..n)
                .map(|i| {
                    if i == n - 1 {
                        0.6
                    } else if i == 0 {
                        0.8
                    } else {
                        0.0
                    }
                })
                .collect();
            for m in 1..=12 {
                let v = s.integrate(|w| {
                    let u: f64 = w.iter().zip(&pole).map(|(a, b)| a * b).sum();
                    ultraspherical_p(m, n, u.clamp(-1.0, 1.0)).unwrap()
                });
                assert!(v.abs() < 1e-11, "n={n} m={m}: {v}");
            }
        }
    }

    #[test]
    fn refinement_of_mehler_angular_integrand() {
        // int_{S^2} K_t(x, y') dy' at t = 0.5, |x| = |y| = 1
        let t: f64 = 0.5;
        let f = |u: f64| (-(0.5 / (2.0 * t).tanh()) * 2.0 + 2.0 * u / (2.0 * t).sinh()).exp();
        let mut prev = gauss_jacobi(64, 3).unwrap().integrate(f);
        for order in [128usize, 256] {
            let next = gauss_jacobi(order, 3).unwrap().integrate(f);
            assert!((next - prev).abs() < 1e-9);
            prev = next;
        }
    }
}
