//! Mehler and Laguerre heat kernels, Hermite projection kernels, Bochner-Riesz
//! kernels, and the Funk-Hecke component kernels `K_m(r, s)`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::exp_remainder;
use crate::quadrature::QuadratureRule;
use crate::specfun::{hermite_fns_into, laguerre_psis_into, ln_gamma, reduced_scaled_unchecked, ultraspherical_into};

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm2(x: &[f64]) -> f64 {
    dot(x, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MehlerForm {
    /// `exp(-coth(2t)(|x|^2+|y|^2)/2 + csch(2t) x.y)`.
    Closed,
    /// `exp(-coth(t)|x-y|^2/4) exp(-tanh(t)|x+y|^2/4)`.
    Factorized,
}

/// `(2 pi sinh 2t)^{-n/2}` in log form.
fn mehler_log_prefactor(t: f64, n: usize) -> f64 {
    -0.5 * n as f64 * (2.0 * PI * (2.0 * t).sinh()).ln()
}

/// Kernel of `e^{-tH}` on R^n.
pub fn mehler_kernel(t: f64, x: &[f64], y: &[f64], form: MehlerForm) -> Result<f64> {
    check_time(t)?;
    if x.len() != y.len() {
        return Err(Error::GridMismatch("points of different dimension".into()));
    }
    let n = x.len();
    let e = match form {
        MehlerForm::Closed => {
            let s2 = (2.0 * t).sinh();
            -0.5 * (2.0 * t).cosh() / s2 * (norm2(x) + norm2(y)) + dot(x, y) / s2
        }
        MehlerForm::Factorized => {
            let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
            let s2: f64 = x.iter().zip(y).map(|(a, b)| (a + b) * (a + b)).sum();
            -0.25 * d2 / t.tanh() - 0.25 * t.tanh() * s2
        }
    };
    Ok((mehler_log_prefactor(t, n) + e).exp())
}

/// Mehler kernel as a function of `u = |x-y|`, `v = |x+y|`.
pub fn mehler_k0(t: f64, n: usize, u: f64, v: f64) -> f64 {
    (mehler_log_prefactor(t, n) - 0.25 * u * u / t.tanh() - 0.25 * t.tanh() * v * v).exp()
}

/// Laguerre heat kernel `K_t^alpha(r, s)` against `r^{2 alpha + 1} dr`:
/// `(sinh 2t)^{-1} e^{-coth(2t)(r^2+s^2)/2} (rs)^{-alpha} I_alpha(rs csch 2t)`.
pub fn laguerre_kernel(t: f64, alpha: f64, r: f64, s: f64) -> Result<f64> {
    check_time(t)?;
    if !(alpha > -1.0) {
        return Err(Error::InvalidLaguerreType(alpha));
    }
    if !(r >= 0.0 && s >= 0.0) {
        return Err(Error::OutOfDomain {
            value: r.min(s),
            domain: "[0, inf)",
        });
    }
    Ok(laguerre_kernel_unchecked(t, alpha, r, s))
}

pub(crate) fn laguerre_kernel_unchecked(t: f64, alpha: f64, r: f64, s: f64) -> f64 {
    let sh = (2.0 * t).sinh();
    let z = r * s / sh;
    // -coth(2t)(r^2+s^2)/2 + z, written without cancellation
    let e = -((r - s) * (r - s) * (2.0 * t).cosh() + 2.0 * r * s * ((2.0 * t).cosh() - 1.0)) / (2.0 * sh);
    let h = reduced_scaled_unchecked(alpha, z);
    if h == 0.0 {
        return 0.0;
    }
    (e - (1.0 + alpha) * sh.ln() + h.ln()).exp()
}

/// `sum_{k < terms} e^{-(4k+2 alpha+2)t} psi_k(r) psi_k(s)`.
pub fn laguerre_kernel_spectral(t: f64, alpha: f64, r: f64, s: f64, terms: usize) -> Result<f64> {
    check_time(t)?;
    if !(alpha > -1.0) {
        return Err(Error::InvalidLaguerreType(alpha));
    }
    let mut pr = vec![0.0; terms];
    let mut ps = vec![0.0; terms];
    laguerre_psis_into(alpha, r, &mut pr);
    laguerre_psis_into(alpha, s, &mut ps);
    Ok((0..terms)
        .map(|k| (-(4.0 * k as f64 + 2.0 * alpha + 2.0) * t).exp() * pr[k] * ps[k])
        .sum())
}

/// `Phi_0, ..., Phi_kmax` at `(x, y)` by convolving the one-dimensional
/// sequences `h_j(x_i) h_j(y_i)`: the multi-index sum grouped by level.
pub fn projection_kernels_direct(kmax: usize, x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut hx = vec![0.0; kmax + 1];
    let mut hy = vec![0.0; kmax + 1];
    let mut acc = vec![0.0; kmax + 1];
    acc[0] = 1.0;
    let mut next = vec![0.0; kmax + 1];
    for (xi, yi) in x.iter().zip(y) {
        hermite_fns_into(*xi, &mut hx);
        hermite_fns_into(*yi, &mut hy);
        let seq: Vec<f64> = hx.iter().zip(&hy).map(|(a, b)| a * b).collect();
        for k in 0..=kmax {
            next[k] = (0..=k).map(|j| acc[k - j] * seq[j]).sum();
        }
        std::mem::swap(&mut acc, &mut next);
    }
    acc
}

/// `sum_k w^k Phi_k(x, y)` for complex `|w| < 1`, principal branch.
pub fn hermite_generating_function(w: Complex64, x: &[f64], y: &[f64]) -> Complex64 {
    let n = x.len() as f64;
    let one = Complex64::new(1.0, 0.0);
    let d = one - w * w;
    let expo = -((one + w * w) * (norm2(x) + norm2(y)) - 4.0 * w * dot(x, y)) / (2.0 * d);
    (expo - 0.5 * n * d.ln() - 0.5 * n * PI.ln()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ProjectionMethod {
    /// Trapezoid rule on `|w| = radius` applied to the generating function.
    Contour {
        radius: f64,
        nodes: usize,
    },
    Direct,
}

impl Default for ProjectionMethod {
    fn default() -> Self {
        ProjectionMethod::Contour { radius: 0.5, nodes: 256 }
    }
}

/// Kernel `Phi_k(x, y)` of the projection onto the `k`-th eigenspace.
pub fn projection_kernel(k: usize, x: &[f64], y: &[f64], method: ProjectionMethod) -> Result<f64> {
    match method {
        ProjectionMethod::Direct => Ok(projection_kernels_direct(k, x, y)[k]),
        ProjectionMethod::Contour { radius, nodes } => {
            if !(radius > 0.0 && radius < 1.0) {
                return Err(Error::OutOfDomain {
                    value: radius,
                    domain: "contour radius in (0, 1)",
                });
            }
            if nodes == 0 {
                return Err(Error::InvalidParameter("contour needs at least one node".into()));
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..nodes {
                let th = 2.0 * PI * i as f64 / nodes as f64;
                let w = Complex64::from_polar(radius, th);
                acc += hermite_generating_function(w, x, y) * Complex64::from_polar(1.0, -(k as f64) * th);
            }
            Ok(acc.re / nodes as f64 / radius.powi(k as i32))
        }
    }
}

/// `(1 - lambda/R)_+^delta`; zero once `lambda >= R`.
pub fn riesz_factor(lambda: f64, radius: f64, delta: f64) -> f64 {
    if lambda >= radius {
        0.0
    } else if delta == 0.0 {
        1.0
    } else {
        (1.0 - lambda / radius).powf(delta)
    }
}

/// Highest level `k` with `2k + n < R`, if any.
pub fn riesz_top_level(radius: f64, n: usize) -> Option<usize> {
    let top = ((radius - n as f64) / 2.0).ceil() - 1.0;
    (top >= 0.0).then_some(top as usize)
}

/// Bochner-Riesz kernel `sum_k (1 - (2k+n)/R)_+^delta Phi_k(x, y)`.
pub fn bochner_riesz_kernel(radius: f64, delta: f64, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let Some(top) = riesz_top_level(radius, n) else {
        return 0.0;
    };
    projection_kernels_direct(top, x, y)
        .iter()
        .enumerate()
        .map(|(k, p)| riesz_factor((2 * k + n) as f64, radius, delta) * p)
        .sum()
}

/// A rotation-invariant kernel given through `K_0(|x-y|, |x+y|)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kernel", rename_all = "snake_case")]
pub enum KernelK0 {
    Heat { t: f64, n: usize },
    BochnerRiesz { radius: f64, delta: f64, n: usize },
    Projection { k: usize, n: usize },
    Constant { value: f64, n: usize },
    Abs(Box<KernelK0>),
}

impl KernelK0 {
    pub fn n(&self) -> usize {
        match self {
            KernelK0::Heat { n, .. } | KernelK0::BochnerRiesz { n, .. } | KernelK0::Projection { n, .. } | KernelK0::Constant { n, .. } => {
                *n
            }
            KernelK0::Abs(k) => k.n(),
        }
    }

    pub fn abs(&self) -> KernelK0 {
        match self {
            KernelK0::Abs(_) => self.clone(),
            _ => KernelK0::Abs(Box::new(self.clone())),
        }
    }

    /// `K_0(u, v)` with `u = |x-y|` and `v = |x+y|`.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match self {
            KernelK0::Heat { t, n } => mehler_k0(*t, *n, u, v),
            KernelK0::Constant { value, .. } => *value,
            KernelK0::Abs(k) => k.eval(u, v).abs(),
            KernelK0::BochnerRiesz { radius, delta, n } => {
                let (x, y) = representative_points(*n, u, v);
                bochner_riesz_kernel(*radius, *delta, &x[..*n], &y[..*n])
            }
            KernelK0::Projection { k, n } => {
                let (x, y) = representative_points(*n, u, v);
                projection_kernels_direct(*k, &x[..*n], &y[..*n])[*k]
            }
        }
    }

    pub fn eval_points(&self, x: &[f64], y: &[f64]) -> f64 {
        let u: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let v: f64 = x.iter().zip(y).map(|(a, b)| (a + b) * (a + b)).sum::<f64>().sqrt();
        self.eval(u, v)
    }

    /// For kernels of the form `A e^{z u}` in `u = w.w'` on shells `|x| = r`,
    /// `|y| = s`, returns `(ln A, z)`.
    fn exponential_profile(&self, r: f64, s: f64) -> Option<(f64, f64)> {
        match self {
            KernelK0::Heat { t, n } => {
                let sh = (2.0 * t).sinh();
                let ln_a = mehler_log_prefactor(*t, *n) - 0.5 * (2.0 * t).cosh() / sh * (r * r + s * s);
                Some((ln_a, r * s / sh))
            }
            _ => None,
        }
    }
}

/// `x = (v/2, u/2, 0)`, `y = (v/2, -u/2, 0)` so that `|x-y| = u`, `|x+y| = v`.
fn representative_points(n: usize, u: f64, v: f64) -> ([f64; 3], [f64; 3]) {
    let mut x = [0.0; 3];
    let mut y = [0.0; 3];
    x[0] = 0.5 * v;
    y[0] = 0.5 * v;
    if n >= 2 {
        x[1] = 0.5 * u;
        y[1] = -0.5 * u;
    }
    (x, y)
}

/// `K_m(r, s) = int K_0(q_-^{1/2}, q_+^{1/2}) P_m(u) (1-u^2)^{(n-3)/2} du`,
/// `q_(+/-) = r^2 + s^2 +/- 2rsu`. First slot is the chord `|x - y|`.
pub fn component_kernel(k0: &KernelK0, m: usize, r: f64, s: f64, rule: &QuadratureRule) -> f64 {
    let mut p = vec![0.0; m + 1];
    component_kernels_at(k0, m, r, s, rule, &mut p)[m]
}

/// `K_0, ..., K_{m_max}` at one `(r, s)`; `p` is scratch of length `m_max + 1`.
fn component_kernels_at(k0: &KernelK0, m_max: usize, r: f64, s: f64, rule: &QuadratureRule, p: &mut [f64]) -> Vec<f64> {
    let n = k0.n();
    let mut out = vec![0.0; m_max + 1];
    if let Some((ln_a, z)) = k0.exponential_profile(r, s) {
        // quadrature of the Taylor remainder, free of the e^{zu} cancellation
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            ultraspherical_into(n, u, p);
            for m in 0..=m_max {
                out[m] += w * exp_remainder(z * u, m) * p[m];
            }
        }
        let a = ln_a.exp();
        out.iter_mut().for_each(|v| *v *= a);
        return out;
    }
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let qm = (r * r + s * s - 2.0 * r * s * u).max(0.0).sqrt();
        let qp = (r * r + s * s + 2.0 * r * s * u).max(0.0).sqrt();
        let kv = w * k0.eval(qm, qp);
        ultraspherical_into(n, u, p);
        for m in 0..=m_max {
            out[m] += kv * p[m];
        }
    }
    out
}

/// Sampled `K_m(r_i, s_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentKernelTable {
    pub m: usize,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    /// Row-major in `r`.
    pub values: Vec<f64>,
    pub kernel: KernelK0,
    pub jacobi_nodes: usize,
}

impl ComponentKernelTable {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.s.len() + j]
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["m", "r", "s", "value"])?;
        for (i, r) in self.r.iter().enumerate() {
            for (j, s) in self.s.iter().enumerate() {
                wr.write_record([self.m.to_string(), r.to_string(), s.to_string(), self.get(i, j).to_string()])?;
            }
        }
        wr.flush()?;
        Ok(())
    }
}

/// Tables for every `m <= m_max` over `r x s`, parallel over `r`.
pub fn component_kernel_tables(k0: &KernelK0, m_max: usize, r: &[f64], s: &[f64], rule: &QuadratureRule) -> Vec<ComponentKernelTable> {
    let rows: Vec<Vec<Vec<f64>>> = r
        .par_iter()
        .map(|&ri| {
            let mut p = vec![0.0; m_max + 1];
            s.iter().map(|&sj| component_kernels_at(k0, m_max, ri, sj, rule, &mut p)).collect()
        })
        .collect();
    (0..=m_max)
        .map(|m| ComponentKernelTable {
            m,
            r: r.to_vec(),
            s: s.to_vec(),
            values: rows.iter().flat_map(|row| row.iter().map(move |v| v[m])).collect(),
            kernel: k0.clone(),
            jacobi_nodes: rule.len(),
        })
        .collect()
}

/// `c_n = Gamma(1/2) Gamma((n-1)/2) 2^{n/2-1}`: the reduction constant for the
/// Gaussian `(sinh 2t)^{-n/2} exp(...)` without the `(2 pi)^{-n/2}` factor.
pub fn hecke_bochner_constant(n: usize) -> f64 {
    let nf = n as f64;
    (ln_gamma(0.5) + ln_gamma((nf - 1.0) / 2.0) + (nf / 2.0 - 1.0) * 2f64.ln()).exp()
}

/// `(2 pi)^{n/2} K_m(r, s) / ((rs)^m K_t^{n/2+m-1}(r, s))` for the heat kernel:
/// the reduction constant measured in the convention of
/// [`hecke_bochner_constant`].
pub fn fitted_hecke_bochner_constant(t: f64, n: usize, m: usize, r: f64, s: f64, rule: &QuadratureRule) -> Result<f64> {
    check_time(t)?;
    let km = component_kernel(&KernelK0::Heat { t, n }, m, r, s, rule);
    let alpha = n as f64 / 2.0 + m as f64 - 1.0;
    let lag = laguerre_kernel(t, alpha, r, s)?;
    Ok((2.0 * PI).powf(n as f64 / 2.0) * km / ((r * s).powi(m as i32) * lag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::{exponential_coefficient, funk_hecke_constant};
    use crate::quadrature::{gauss_hermite_lebesgue, gauss_jacobi, radial_rule, sphere_rule, RadialMeasure, DEFAULT_R_MAX};
    use crate::specfun::laguerre_psi;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng, n: usize, max: f64) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-max..max)).collect()
    }

    fn rotate2(x: &[f64], th: f64) -> Vec<f64> {
        vec![th.cos() * x[0] - th.sin() * x[1], th.sin() * x[0] + th.cos() * x[1]]
    }

    #[test]
    fn mehler_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..=3 {
            for _ in 0..1000 {
                let t = rng.random_range(0.05..3.0);
                let x = random_point(&mut rng, n, 4.0 / (n as f64).sqrt());
                let y = random_point(&mut rng, n, 4.0 / (n as f64).sqrt());
                let a = mehler_kernel(t, &x, &y, MehlerForm::Closed).unwrap();
                let b = mehler_kernel(t, &x, &y, MehlerForm::Factorized).unwrap();
                assert!(a > 0.0);
                assert!(((a - b) / a).abs() < 1e-12);
                let c = mehler_kernel(t, &y, &x, MehlerForm::Closed).unwrap();
                assert!(((a - c) / a).abs() < 1e-14);
            }
        }
        assert_eq!(
            mehler_kernel(0.0, &[0.0], &[0.0], MehlerForm::Closed),
            Err(Error::NonPositiveTime(0.0))
        );
    }

    #[test]
    fn mehler_ground_state_eigenvalue() {
        // int K_t(x, y) Phi_0(y) dy = e^{-2t} Phi_0(x), n = 2
        let rule = gauss_hermite_lebesgue(80);
        let t = 0.4;
        let x = [0.3, -0.7];
        let phi0 = |y: &[f64]| (-0.5 * norm2(y)).exp() / PI.sqrt();
        let mut acc = 0.0;
        for (a, wa) in rule.nodes.iter().zip(&rule.weights) {
            for (b, wb) in rule.nodes.iter().zip(&rule.weights) {
                let y = [*a, *b];
                acc += wa * wb * mehler_kernel(t, &x, &y, MehlerForm::Closed).unwrap() * phi0(&y);
            }
        }
        let expected = (-2.0 * t).exp() * phi0(&x);
        assert!(((acc - expected) / expected).abs() < 1e-9);
    }

    #[test]
    fn mehler_semigroup_law() {
        let rule = gauss_hermite_lebesgue(96);
        let (t, s) = (0.3, 0.5);
        let x = [0.4, -0.2];
        let y = [-0.5, 0.9];
        let mut acc = 0.0;
        for (a, wa) in rule.nodes.iter().zip(&rule.weights) {
            for (b, wb) in rule.nodes.iter().zip(&rule.weights) {
                let z = [*a, *b];
                acc +=
                    wa * wb * mehler_kernel(t, &x, &z, MehlerForm::Closed).unwrap() * mehler_kernel(s, &z, &y, MehlerForm::Closed).unwrap();
            }
        }
        let expected = mehler_kernel(t + s, &x, &y, MehlerForm::Closed).unwrap();
        assert!(((acc - expected) / expected).abs() < 1e-8);
    }

    #[test]
    fn heat_trace() {
        // int K_t(x, x) dx = (2 sinh t)^{-n}, n = 2, by polar quadrature
        let rule = radial_rule(200, RadialMeasure::Dimension(2), DEFAULT_R_MAX).unwrap();
        for &t in &[0.3, 0.7, 1.5] {
            let v = 2.0 * PI * rule.integrate(|r| mehler_kernel(t, &[r, 0.0], &[r, 0.0], MehlerForm::Closed).unwrap());
            let series: f64 = (0..400).map(|k| (k + 1) as f64 * (-(2.0 * k as f64 + 2.0) * t).exp()).sum();
            assert!(((v - series) / series).abs() < 1e-7);
        }
    }

    #[test]
    fn laguerre_kernel_against_spectral_sum() {
        for &alpha in &[0.5, 1.0, 1.5] {
            for &t in &[0.1, 0.3, 1.0] {
                for i in 0..=12 {
                    for j in 0..=12 {
                        let (r, s) = (0.5 * i as f64, 0.5 * j as f64);
                        let c = laguerre_kernel(t, alpha, r, s).unwrap();
                        let sp = laguerre_kernel_spectral(t, alpha, r, s, 64).unwrap();
                        let scale = (laguerre_kernel(t, alpha, r, r).unwrap() * laguerre_kernel(t, alpha, s, s).unwrap()).sqrt();
                        assert!((c - sp).abs() < 1e-8 * scale, "a={alpha} t={t} r={r} s={s}: {c} vs {sp}");
                        assert!(c > 0.0 || c == 0.0 && scale == 0.0);
                        assert_eq!(c, laguerre_kernel(t, alpha, s, r).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn laguerre_kernel_origin_limit() {
        let (t, alpha, s): (f64, f64, f64) = (0.4, 1.5, 1.2);
        let sh = (2.0 * t).sinh();
        let limit = (-0.5 * (2.0 * t).cosh() / sh * s * s).exp() / sh * sh.powf(-alpha) / (2f64.powf(alpha) * ln_gamma(alpha + 1.0).exp());
        let v = laguerre_kernel(t, alpha, 0.0, s).unwrap();
        assert!(((v - limit) / limit).abs() < 1e-13);
        assert!(((laguerre_kernel(t, alpha, 1e-9, s).unwrap() - v) / v).abs() < 1e-8);
        assert!(laguerre_kernel(t, -1.0, 1.0, 1.0).is_err());
        assert!(laguerre_kernel(-t, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn laguerre_kernel_eigen_relation() {
        for &alpha in &[0.0, 0.5, 1.5] {
            let rule = radial_rule(200, RadialMeasure::Laguerre(alpha), DEFAULT_R_MAX).unwrap();
            let t = 0.3;
            for &r in &[0.0, 0.5, 1.3, 2.4] {
                let v = rule.integrate(|s| laguerre_kernel(t, alpha, r, s).unwrap() * laguerre_psi(0, alpha, s).unwrap());
                let expected = (-(2.0 * alpha + 2.0) * t).exp() * laguerre_psi(0, alpha, r).unwrap();
                assert!(((v - expected) / expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn projection_methods_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let phi0 = |x: &[f64], y: &[f64]| (-(norm2(x) + norm2(y)) / 2.0).exp() / PI;
        for _ in 0..20 {
            let x = random_point(&mut rng, 2, 2.5);
            let y = random_point(&mut rng, 2, 2.5);
            let d0 = projection_kernel(0, &x, &y, ProjectionMethod::Direct).unwrap();
            assert!((d0 - phi0(&x, &y)).abs() < 1e-15);
            for k in 0..=8 {
                let c = projection_kernel(k, &x, &y, ProjectionMethod::default()).unwrap();
                let d = projection_kernel(k, &x, &y, ProjectionMethod::Direct).unwrap();
                let scale = (projection_kernel(k, &x, &x, ProjectionMethod::Direct).unwrap()
                    * projection_kernel(k, &y, &y, ProjectionMethod::Direct).unwrap())
                .sqrt();
                assert!((c - d).abs() < 1e-8 * scale, "k={k}: {c} vs {d}");
            }
        }
        assert!(projection_kernel(1, &[0.0], &[0.0], ProjectionMethod::Contour { radius: 1.0, nodes: 8 }).is_err());
    }

    #[test]
    fn projection_reproducing_property() {
        let rule = gauss_hermite_lebesgue(64);
        let x = [0.5, -0.3];
        let y = [-0.2, 0.8];
        for k in 0..=4 {
            let mut acc = 0.0;
            for (a, wa) in rule.nodes.iter().zip(&rule.weights) {
                for (b, wb) in rule.nodes.iter().zip(&rule.weights) {
                    let z = [*a, *b];
                    acc += wa * wb * projection_kernels_direct(k, &x, &z)[k] * projection_kernels_direct(k, &z, &y)[k];
                }
            }
            let expected = projection_kernels_direct(k, &x, &y)[k];
            assert!(((acc - expected) / expected).abs() < 1e-8);
        }
    }

    #[test]
    fn bochner_riesz_values_and_invariance() {
        let x = [0.3, 0.4];
        let y = [-0.1, 0.6];
        assert_eq!(bochner_riesz_kernel(2.0, 1.0, &x, &y), 0.0);
        let p0 = projection_kernels_direct(0, &x, &y)[0];
        assert!((bochner_riesz_kernel(4.0, 1.0, &x, &y) - 0.5 * p0).abs() < 1e-16);
        assert!((bochner_riesz_kernel(4.0, 0.0, &x, &y) - p0).abs() < 1e-16);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let k0 = KernelK0::BochnerRiesz {
            radius: 20.0,
            delta: 1.0,
            n: 2,
        };
        for _ in 0..20 {
            let a = random_point(&mut rng, 2, 2.0);
            let b = random_point(&mut rng, 2, 2.0);
            let th = rng.random_range(0.0..2.0 * PI);
            let direct = bochner_riesz_kernel(20.0, 1.0, &a, &b);
            let rotated = bochner_riesz_kernel(20.0, 1.0, &rotate2(&a, th), &rotate2(&b, th));
            assert!((direct - rotated).abs() < 1e-10);
            assert!((direct - k0.eval_points(&a, &b)).abs() < 1e-10);
        }
    }

    #[test]
    fn heat_k0_matches_mehler() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k0 = KernelK0::Heat { t: 0.7, n: 3 };
        for _ in 0..50 {
            let x = random_point(&mut rng, 3, 2.0);
            let y = random_point(&mut rng, 3, 2.0);
            let m = mehler_kernel(0.7, &x, &y, MehlerForm::Closed).unwrap();
            assert!(((k0.eval_points(&x, &y) - m) / m).abs() < 1e-12);
        }
    }

    #[test]
    fn component_kernel_trivial_and_direct_sphere() {
        let rule = gauss_jacobi(24, 3).unwrap();
        let one = KernelK0::Constant { value: 1.0, n: 3 };
        assert!((component_kernel(&one, 0, 0.3, 2.0, &rule) - 2.0).abs() < 1e-14);
        // m = 0 heat kernel against direct integration over S^2
        let t = 0.5;
        let k0 = KernelK0::Heat { t, n: 3 };
        let jac = gauss_jacobi(64, 3).unwrap();
        let sph = sphere_rule(3, 60).unwrap();
        let x = [0.0, 0.0, 1.0];
        let direct = sph.integrate(|w| mehler_kernel(t, &x, w, MehlerForm::Closed).unwrap());
        let fh = funk_hecke_constant(3) * component_kernel(&k0, 0, 1.0, 1.0, &jac);
        assert!(((direct - fh) / direct).abs() < 1e-9);
    }

    #[test]
    fn hecke_bochner_constant_from_component_kernels() {
        for n in 2..=3 {
            let rule = gauss_jacobi(64, n).unwrap();
            let cn = hecke_bochner_constant(n);
            for &t in &[0.2, 0.5, 1.0] {
                for m in 0..=8 {
                    for &(r, s) in &[(0.5, 0.7), (1.0, 1.0), (1.5, 2.5), (3.0, 2.0)] {
                        let c = fitted_hecke_bochner_constant(t, n, m, r, s, &rule).unwrap();
                        assert!(((c - cn) / cn).abs() < 1e-8, "n={n} t={t} m={m} r={r} s={s}: {c} vs {cn}");
                    }
                }
            }
        }
        assert!((hecke_bochner_constant(2) - PI).abs() < 1e-14);
    }

    #[test]
    fn heat_component_kernel_is_bessel_value() {
        let n = 3;
        let rule = gauss_jacobi(64, n).unwrap();
        let (t, r, s): (f64, f64, f64) = (0.5, 1.2, 0.8);
        let sh = (2.0 * t).sinh();
        let z = r * s / sh;
        let a = (2.0 * PI * sh).powf(-1.5) * (-0.5 * (2.0 * t).cosh() / sh * (r * r + s * s)).exp();
        for m in 0..6 {
            let v = component_kernel(&KernelK0::Heat { t, n }, m, r, s, &rule);
            let e = a * exponential_coefficient(z, m, n).unwrap();
            assert!(((v - e) / e).abs() < 1e-10);
        }
    }

    #[test]
    fn component_kernels_bounded_by_abs_m0() {
        let k0 = KernelK0::BochnerRiesz {
            radius: 12.0,
            delta: 0.5,
            n: 2,
        };
        let rule = gauss_jacobi(32, 2).unwrap();
        let r: Vec<f64> = (0..8).map(|i| 0.3 + 0.4 * i as f64).collect();
        let tabs = component_kernel_tables(&k0, 6, &r, &r, &rule);
        let dom = component_kernel_tables(&k0.abs(), 0, &r, &r, &rule).remove(0);
        for tab in &tabs {
            for i in 0..r.len() {
                for j in 0..r.len() {
                    assert!(tab.get(i, j).abs() <= dom.get(i, j) + 1e-14);
                    assert!((tab.get(i, j) - tab.get(j, i)).abs() < 1e-13);
                }
            }
        }
        let mut buf = Vec::new();
        tabs[1].write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("m,r,s,value\n1,"));
        assert_eq!(text.lines().count(), 1 + 64);
    }
}
