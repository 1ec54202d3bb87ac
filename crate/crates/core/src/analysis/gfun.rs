//! Littlewood-Paley g-functions of the Hermite semigroup, their component
//! versions for `T_{t,m}`, and the `g*` functions.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{PolarField, PolarGrid, RadialProfile};
use crate::operators::HermiteCoefficients;
use crate::quadrature::{gauss_jacobi, gauss_legendre, log_temporal_rule, temporal_rule, QuadratureRule, WeightFunction};
use crate::specfun::{ln_gamma, radial_hermite_fns_into};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GMethod {
    /// Closed-form `t` integral of the spectral expansion.
    Spectral,
    /// [`temporal_rule`] with the given order.
    Temporal { order: usize },
}

/// Default order for [`GMethod::Temporal`]; resolves `e^{-2 lambda t}` up to
/// `lambda ~ 200` on the unit interval.
pub const DEFAULT_TEMPORAL_ORDER: usize = 160;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GFunctionResult<T> {
    pub k: usize,
    pub method: GMethod,
    pub values: T,
    /// Fraction of `||f||^2` outside the expansion.
    pub truncation_mass: f64,
}

/// `||g_k f||_2 / ||f||_2 = 2^{-k} Gamma(2k)^{1/2}`.
pub fn g_norm_constant(k: usize) -> f64 {
    (0.5 * ln_gamma(2.0 * k as f64) - k as f64 * 2f64.ln()).exp()
}

fn check_k(k: usize) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("g-functions need k >= 1".into()))
    }
}

/// `g_k^2` from the spectral pieces `u_l` with eigenvalues `lambda_l`.
fn g_squared(u: &[Complex64], lambdas: &[f64], k: usize, method: GMethod, trule: Option<&QuadratureRule>) -> f64 {
    let kf = k as i32;
    match method {
        GMethod::Spectral => {
            let g2k = ln_gamma(2.0 * k as f64).exp();
            let mut acc = 0.0;
            for (a, (ua, la)) in u.iter().zip(lambdas).enumerate() {
                if ua.re == 0.0 && ua.im == 0.0 {
                    continue;
                }
                acc += ua.norm_sqr() * la.powi(2 * kf) * (2.0 * la).powi(-2 * kf);
                for (ub, lb) in u.iter().zip(lambdas).skip(a + 1) {
                    let cross = (ua * ub.conj()).re;
                    if cross != 0.0 {
                        acc += 2.0 * cross * (la * lb).powi(kf) * (la + lb).powi(-2 * kf);
                    }
                }
            }
            (g2k * acc).max(0.0)
        }
        GMethod::Temporal { .. } => {
            let rule = trule.expect("temporal rule supplied with temporal method");
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&t, &w)| {
                    let d: Complex64 = u.iter().zip(lambdas).map(|(ul, l)| ul * (sign * l.powi(kf) * (-l * t).exp())).sum();
                    w * d.norm_sqr()
                })
                .sum()
        }
    }
}

fn temporal_for(method: GMethod, k: usize, n: usize) -> Result<Option<QuadratureRule>> {
    match method {
        GMethod::Spectral => Ok(None),
        GMethod::Temporal { order } => temporal_rule(order, k, crate::quadrature::default_t_max(n)).map(Some),
    }
}

/// `g_k(f, x)` at every node of `grid` from the Hermite expansion of `f`.
pub fn g_k(c: &HermiteCoefficients, k: usize, grid: Arc<PolarGrid>, method: GMethod) -> Result<GFunctionResult<PolarField>> {
    check_k(k)?;
    let levels = c.level_values_on_grid(&grid)?;
    let lambdas: Vec<f64> = (0..=c.k_max).map(|l| (2 * l + c.n) as f64).collect();
    let trule = temporal_for(method, k, c.n)?;
    let values: Vec<f64> = levels
        .par_iter()
        .map(|u| g_squared(u, &lambdas, k, method, trule.as_ref()).sqrt())
        .collect();
    Ok(GFunctionResult {
        k,
        method,
        values: PolarField::new(grid, values, None)?,
        truncation_mass: c.truncation_mass(),
    })
}

/// Laguerre coefficients `b_i = int g(r) r^m psi_i^{n/2+m-1}(r) r^{n-1} dr`.
pub fn component_coefficients(g: &RadialProfile, m: usize, n: usize, i_max: usize) -> Result<Vec<f64>> {
    match g.rule.radial_power() {
        Some(p) if (p - (n as f64 - 1.0)).abs() < 1e-12 => {}
        _ => return Err(Error::GridMismatch("component g-functions need an r^{n-1} rule".into())),
    }
    let mut b = vec![0.0; i_max + 1];
    let mut buf = vec![0.0; i_max + 1];
    for ((&r, &w), &v) in g.rule.nodes.iter().zip(&g.rule.weights).zip(&g.values) {
        radial_hermite_fns_into(m, n, r, &mut buf);
        for (bi, p) in b.iter_mut().zip(&buf) {
            *bi += w * v * p;
        }
    }
    Ok(b)
}

fn component_lambdas(m: usize, n: usize, i_max: usize) -> Vec<f64> {
    (0..=i_max).map(|i| (4 * i + 2 * m + n) as f64).collect()
}

/// `g_{k,m}(g, r)` at the nodes of `g`: the g-function of `T_{t,m}`, the
/// component of `e^{-tH}` on degree-`m` harmonics, via the Laguerre expansion
/// of `s^{-m} g` with `i_max + 1` terms.
pub fn g_k_component(
    g: &RadialProfile,
    m: usize,
    n: usize,
    k: usize,
    method: GMethod,
    i_max: usize,
) -> Result<GFunctionResult<RadialProfile>> {
    check_k(k)?;
    let b = component_coefficients(g, m, n, i_max)?;
    let lambdas = component_lambdas(m, n, i_max);
    let trule = temporal_for(method, k, n)?;
    let values: Vec<f64> = g
        .nodes()
        .par_iter()
        .map(|&r| {
            let mut buf = vec![0.0; i_max + 1];
            radial_hermite_fns_into(m, n, r, &mut buf);
            let u: Vec<Complex64> = b.iter().zip(&buf).map(|(bi, p)| Complex64::new(bi * p, 0.0)).collect();
            g_squared(&u, &lambdas, k, method, trule.as_ref()).sqrt()
        })
        .collect();
    let norm_sq: f64 = g.values.iter().zip(&g.rule.weights).map(|(v, w)| w * v * v).sum();
    let captured: f64 = b.iter().map(|v| v * v).sum();
    Ok(GFunctionResult {
        k,
        method,
        values: RadialProfile::new(g.rule.clone(), values)?,
        truncation_mass: if norm_sq > 0.0 { 1.0 - captured / norm_sq } else { 0.0 },
    })
}

/// `A_t(r, s) = t^{-n/2} int_{S^{n-1}} (1 + |r x' - s y'|^2 / t)^{-k} dy'`.
pub fn gstar_angular_kernel(n: usize, k: usize, t: f64, r: f64, s: f64) -> f64 {
    let c = 1.0 + (r * r + s * s) / t;
    let d = 2.0 * r * s / t;
    let pref = t.powf(-(n as f64) / 2.0);
    match n {
        2 => {
            // int_0^{2 pi} (c - d cos)^{-k} = 2 pi (c^2-d^2)^{-k/2} P_{k-1}(c/sqrt(c^2-d^2)),
            // run as a recurrence on Q_j = P_j / D^{j+1}
            let d2 = (c - d) * (c + d);
            let dd = d2.sqrt();
            let mut q_prev = 1.0 / dd;
            if k == 1 {
                return pref * 2.0 * PI * q_prev;
            }
            let mut q = c / (dd * d2);
            for j in 1..k - 1 {
                let jf = j as f64;
                let next = ((2.0 * jf + 1.0) * c * q - jf * q_prev) / ((jf + 1.0) * d2);
                q_prev = q;
                q = next;
            }
            pref * 2.0 * PI * q
        }
        3 => {
            // 2 pi int_{-1}^1 (c - d u)^{-k} du
            if k == 1 {
                let v = if d < 1e-8 * c { 2.0 / c } else { ((c + d) / (c - d)).ln() / d };
                return pref * 2.0 * PI * v;
            }
            let km = k - 1;
            let mut odd = 0.0;
            let mut binom = 1.0;
            for l in 1..=km {
                binom = binom * (km - l + 1) as f64 / l as f64;
                if l % 2 == 1 {
                    odd += binom * c.powi((km - l) as i32) * d.powi(l as i32 - 1);
                }
            }
            let denom = ((c - d) * (c + d)).powi(km as i32);
            pref * 2.0 * PI * 2.0 * odd / (km as f64 * denom)
        }
        _ => {
            let rule = gauss_jacobi(64, n).expect("n >= 2");
            let area = crate::quadrature::sphere_area(n - 1);
            pref * area * rule.integrate(|u| (c - d * u).powi(-(k as i32)))
        }
    }
}

/// Quadrature controls for [`g_star_component`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GStarOptions {
    pub temporal_order: usize,
    pub t_min: f64,
    pub panel_nodes: usize,
    pub i_max: usize,
}

impl Default for GStarOptions {
    fn default() -> Self {
        GStarOptions {
            temporal_order: 120,
            t_min: 1e-7,
            panel_nodes: 12,
            i_max: 20,
        }
    }
}

fn radial_extent(rule: &QuadratureRule) -> f64 {
    match rule.weight {
        WeightFunction::Radial { r_max, .. } => r_max,
        _ => rule.nodes[rule.len() - 1],
    }
}

/// Breakpoints `r +/- sqrt(t) 2^j` clipped to `[0, s_max]`.
fn panels_around(r: f64, scale: f64, s_max: f64) -> Vec<f64> {
    let mut pts = vec![0.0, s_max, r.min(s_max)];
    let mut h = scale;
    while h < s_max {
        for p in [r - h, r + h] {
            if p > 0.0 && p < s_max {
                pts.push(p);
            }
        }
        h *= 2.0;
    }
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    pts
}

/// `g_{k,m}^*(g, r)^2 = int int A_t(r, s) |d_t T_{t,m} g(s)|^2 s^{n-1} ds t dt`
/// at the nodes of `g`; requires `k > n/2`.
pub fn g_star_component(g: &RadialProfile, m: usize, n: usize, k: usize, opts: GStarOptions) -> Result<GFunctionResult<RadialProfile>> {
    if 2 * k <= n {
        return Err(Error::InvalidParameter(format!("g* needs k > n/2, got k = {k}, n = {n}")));
    }
    let b = component_coefficients(g, m, n, opts.i_max)?;
    let lambdas = component_lambdas(m, n, opts.i_max);
    let trule = log_temporal_rule(opts.temporal_order, 1, opts.t_min, crate::quadrature::default_t_max(n))?;
    let gl = gauss_legendre(opts.panel_nodes);
    let s_max = radial_extent(&g.rule);
    let dt_profile = |t: f64, s: f64, buf: &mut [f64]| -> f64 {
        radial_hermite_fns_into(m, n, s, buf);
        b.iter()
            .zip(buf.iter())
            .zip(&lambdas)
            .map(|((bi, p), l)| -l * (-l * t).exp() * bi * p)
            .sum()
    };
    let values: Vec<f64> = g
        .nodes()
        .par_iter()
        .map(|&r| {
            let mut buf = vec![0.0; opts.i_max + 1];
            let mut total = 0.0;
            for (&t, &wt) in trule.nodes.iter().zip(&trule.weights) {
                let pts = panels_around(r, t.sqrt(), s_max);
                let mut inner = 0.0;
                for w in pts.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    for (x, wx) in gl.nodes.iter().zip(&gl.weights) {
                        let s = lo + 0.5 * (hi - lo) * (1.0 + x);
                        let d = dt_profile(t, s, &mut buf);
                        inner += 0.5 * (hi - lo) * wx * gstar_angular_kernel(n, k, t, r, s) * d * d * s.powi(n as i32 - 1);
                    }
                }
                total += wt * inner;
            }
            total.sqrt()
        })
        .collect();
    Ok(GFunctionResult {
        k,
        method: GMethod::Temporal {
            order: opts.temporal_order,
        },
        values: RadialProfile::new(g.rule.clone(), values)?,
        truncation_mass: 0.0,
    })
}

/// `g_k^*(f, x)` at the given points, with the field's polar rule as the
/// spatial quadrature and `d_t T_t f` taken from the Hermite expansion.
pub fn g_star(c: &HermiteCoefficients, k: usize, grid: &PolarGrid, points: &[Vec<f64>], temporal_order: usize) -> Result<Vec<f64>> {
    let n = c.n;
    if 2 * k <= n {
        return Err(Error::InvalidParameter(format!("g* needs k > n/2, got k = {k}, n = {n}")));
    }
    let levels = c.level_values_on_grid(grid)?;
    let lambdas: Vec<f64> = (0..=c.k_max).map(|l| (2 * l + n) as f64).collect();
    let trule = log_temporal_rule(temporal_order, 1, 1e-6, crate::quadrature::default_t_max(n))?;
    let ys = grid.points();
    let ns = grid.n_sphere();
    let wy: Vec<f64> = (0..grid.len()).map(|i| grid.weight(i / ns, i % ns)).collect();
    // |d_t T_t f(y)|^2 per temporal node and grid point
    let dt2: Vec<Vec<f64>> = trule
        .nodes
        .par_iter()
        .map(|&t| {
            levels
                .iter()
                .map(|u| {
                    u.iter()
                        .zip(&lambdas)
                        .map(|(ul, l)| ul * (-l * (-l * t).exp()))
                        .sum::<Complex64>()
                        .norm_sqr()
                })
                .collect()
        })
        .collect();
    Ok(points
        .par_iter()
        .map(|x| {
            let mut total = 0.0;
            for ((&t, &wt), d) in trule.nodes.iter().zip(&trule.weights).zip(&dt2) {
                let mut inner = 0.0;
                for ((y, w), dv) in ys.iter().zip(&wy).zip(d) {
                    let dist2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                    inner += w * (1.0 + dist2 / t).powi(-(k as i32)) * dv;
                }
                total += wt * t.powf(-(n as f64) / 2.0) * inner;
            }
            total.sqrt()
        })
        .collect())
}

/// One `(f, h)` pair of the maximal-domination battery.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationSample {
    pub m: usize,
    pub f_id: String,
    pub h_id: String,
    /// `int g_{k,m}^*(f)^2 h r^{n-1} dr`.
    pub lhs: f64,
    /// `int g_{1,m}(f)^2 M_{n/2-1} h r^{n-1} dr`.
    pub rhs: f64,
}

impl DominationSample {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

/// `int (g*)^2 h dmu` against `int g_1^2 (M h) dmu` for each `(f, h)`.
pub fn maximal_domination(
    m: usize,
    n: usize,
    k: usize,
    fs: &[(String, RadialProfile)],
    hs: &[(String, RadialProfile)],
    opts: GStarOptions,
) -> Result<Vec<DominationSample>> {
    let alpha = n as f64 / 2.0 - 1.0;
    let maxes: Vec<RadialProfile> = hs.iter().map(|(_, h)| super::maximal_fn(h, alpha)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (fid, f) in fs {
        let gs = g_star_component(f, m, n, k, opts)?;
        let g1 = g_k_component(f, m, n, 1, GMethod::Spectral, opts.i_max)?;
        for ((hid, h), mh) in hs.iter().zip(&maxes) {
            let w = &f.rule.weights;
            let lhs: f64 = (0..w.len()).map(|i| w[i] * gs.values.values[i].powi(2) * h.values[i]).sum();
            let rhs: f64 = (0..w.len()).map(|i| w[i] * g1.values.values[i].powi(2) * mh.values[i]).sum();
            out.push(DominationSample {
                m,
                f_id: fid.clone(),
                h_id: hid.clone(),
                lhs,
                rhs,
            });
        }
    }
    Ok(out)
}

/// `g_k(f, x)` at a single point, spectral form.
pub fn g_k_at(c: &HermiteCoefficients, k: usize, x: &[f64]) -> Result<f64> {
    check_k(k)?;
    let u = c.level_values_at(x);
    let lambdas: Vec<f64> = (0..=c.k_max).map(|l| (2 * l + c.n) as f64).collect();
    Ok(g_squared(&u, &lambdas, k, GMethod::Spectral, None).sqrt())
}

/// `c` with `g_1(f, x) <= c g_k^*(f, x)`: `(2^k / v_n)^{1/2}`, `v_n` the
/// volume of the unit ball.
pub fn g_star_domination_constant(n: usize, k: usize) -> f64 {
    let nf = n as f64;
    let ln_vn = 0.5 * nf * PI.ln() - ln_gamma(nf / 2.0 + 1.0);
    (0.5 * (k as f64 * 2f64.ln() - ln_vn)).exp()
}

/// `int_{R^n} t^{-n/2}(1 + |z|^2/t)^{-k} dz = pi^{n/2} Gamma(k - n/2) / Gamma(k)`.
pub fn gstar_kernel_mass(n: usize, k: usize) -> f64 {
    let nf = n as f64;
    (0.5 * nf * PI.ln() + ln_gamma(k as f64 - nf / 2.0) - ln_gamma(k as f64)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::{build_basis, decompose};
    use crate::operators::{hermite_analyze_polar, BasisKind, BasisLabel};
    use crate::quadrature::{radial_rule, sphere_area, RadialMeasure};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_coefficients(n: usize, k_max: usize, seed: u64) -> HermiteCoefficients {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = HermiteCoefficients::zeros(n, k_max, BasisKind::Spherical { m_max: k_max });
        for level in c.values.iter_mut() {
            for v in level.iter_mut() {
                *v = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            }
        }
        c.input_norm_sq = c.norm_sq();
        c
    }

    #[test]
    fn norm_constants() {
        assert!((g_norm_constant(1) - 0.5).abs() < 1e-15);
        assert!((g_norm_constant(2) - (3.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!((gstar_kernel_mass(2, 2) - PI).abs() < 1e-13);
    }

    #[test]
    fn g_identity_and_method_agreement() {
        let grid = Arc::new(PolarGrid::new(2, 80, 24, 10.0).unwrap());
        for seed in 0..3 {
            let c = random_coefficients(2, 8, seed);
            for k in 1..=2 {
                let a = g_k(&c, k, grid.clone(), GMethod::Spectral).unwrap();
                let b = g_k(
                    &c,
                    k,
                    grid.clone(),
                    GMethod::Temporal {
                        order: DEFAULT_TEMPORAL_ORDER,
                    },
                )
                .unwrap();
                let (d, s) = a.values.max_diff(&b.values);
                assert!(d < 1e-9 * s, "k={k}: {d} vs {s}");
                let ratio = a.values.l2_norm() / c.norm_sq().sqrt();
                assert!((ratio - g_norm_constant(k)).abs() < 1e-9, "k={k}: {ratio}");
            }
        }
        let zero = HermiteCoefficients::zeros(2, 4, BasisKind::Spherical { m_max: 4 });
        assert!(g_k(&zero, 1, grid.clone(), GMethod::Spectral)
            .unwrap()
            .values
            .re
            .iter()
            .all(|v| *v == 0.0));
        assert!(g_k(&zero, 0, grid, GMethod::Spectral).is_err());
    }

    #[test]
    fn eigenfunction_g_values() {
        // f = r^m psi_i Y: g_k^2 = Gamma(2k) 4^{-k} f^2
        let grid = Arc::new(PolarGrid::new(3, 40, 12, 8.0).unwrap());
        let mut c = HermiteCoefficients::zeros(3, 6, BasisKind::Spherical { m_max: 6 });
        c.set(&BasisLabel::Spherical { m: 2, j: 1, i: 1 }, Complex64::new(1.0, 0.0))
            .unwrap();
        let f = c.to_field(grid.clone()).unwrap();
        let g = g_k(&c, 2, grid, GMethod::Spectral).unwrap();
        for (a, b) in g.values.re.iter().zip(&f.re) {
            assert!((a - g_norm_constant(2) * b.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn shell_identity_for_components() {
        let n = 2;
        let grid = Arc::new(PolarGrid::new(n, 60, 24, 10.0).unwrap());
        let c = random_coefficients(n, 8, 11);
        let f = c.to_field(grid.clone()).unwrap();
        let basis = build_basis(n, 8, grid.sphere.clone()).unwrap();
        let d = decompose(&f, &basis).unwrap();
        let full = g_k(&c, 1, grid.clone(), GMethod::Spectral).unwrap();
        let shells = full.values.shell_l2_squared();
        let mut sum = vec![0.0; grid.n_radial()];
        for (p, &(m, _)) in d.profiles.iter().zip(&d.labels) {
            let gm = g_k_component(p, m, n, 1, GMethod::Spectral, 8).unwrap();
            for (s, v) in sum.iter_mut().zip(&gm.values.values) {
                *s += v * v;
            }
        }
        for (a, b) in shells.iter().zip(&sum) {
            assert!((a - b).abs() < 1e-9 * shells.iter().copied().fold(0.0, f64::max));
        }
        // the radial part alone is the m = 0 component
        let rad = RadialProfile::from_fn(grid.radial.clone(), |r| (-r * r / 2.0).exp() * (1.0 + r * r));
        let field = PolarField::from_polar_fn(grid.clone(), |r, _| (-r * r / 2.0).exp() * (1.0 + r * r));
        let cf = hermite_analyze_polar(&field, 0, 10).unwrap();
        let gfull = g_k(&cf, 1, grid.clone(), GMethod::Spectral).unwrap();
        let gm = g_k_component(&rad.map(|_, v| v * sphere_area(n).sqrt()), 0, n, 1, GMethod::Spectral, 5).unwrap();
        let ns = grid.n_sphere();
        for ir in 0..grid.n_radial() {
            assert!((gfull.values.re[ir * ns] * sphere_area(n).sqrt() - gm.values.values[ir]).abs() < 1e-9);
        }
    }

    #[test]
    fn angular_kernel_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=3 {
            let rule = gauss_jacobi(200, n).unwrap();
            for _ in 0..50 {
                let (t, r, s): (f64, f64, f64) = (rng.random_range(0.01..3.0), rng.random_range(0.0..4.0), rng.random_range(0.0..4.0));
                for k in 1..=4 {
                    let c = 1.0 + (r * r + s * s) / t;
                    let d = 2.0 * r * s / t;
                    let q = sphere_area(n - 1) * t.powf(-(n as f64) / 2.0) * rule.integrate(|u| (c - d * u).powi(-(k as i32)));
                    let v = gstar_angular_kernel(n, k, t, r, s);
                    assert!(((v - q) / q).abs() < 1e-7, "n={n} k={k} t={t} r={r} s={s}: {v} vs {q}");
                }
            }
        }
    }

    #[test]
    fn g_star_is_quadratic_and_dominates() {
        let rule = Arc::new(radial_rule(40, RadialMeasure::Dimension(2), 8.0).unwrap());
        let f = RadialProfile::from_fn(rule.clone(), |r| (-r * r / 2.0).exp());
        let opts = GStarOptions {
            temporal_order: 60,
            ..GStarOptions::default()
        };
        let a = g_star_component(&f, 0, 2, 2, opts).unwrap();
        let b = g_star_component(&f.map(|_, v| 3.0 * v), 0, 2, 2, opts).unwrap();
        for (x, y) in a.values.values.iter().zip(&b.values.values) {
            assert!(x.is_finite() && *x > 0.0);
            assert!((3.0 * x - y).abs() < 1e-12 * y);
        }
        assert!(g_star_component(&f, 0, 2, 1, opts).is_err());
        let one = RadialProfile::from_fn(rule.clone(), |_| 1.0);
        let s = maximal_domination(0, 2, 2, &[("gauss".into(), f)], &[("one".into(), one)], opts).unwrap();
        assert!(s[0].ratio().is_finite() && s[0].ratio() > 0.0);
    }

    #[test]
    fn full_g_star_pointwise() {
        let grid = Arc::new(PolarGrid::new(2, 40, 16, 8.0).unwrap());
        let c = random_coefficients(2, 4, 5);
        let pts = vec![vec![0.3, 0.2], vec![-1.0, 0.5]];
        let a = g_star(&c, 2, &grid, &pts, 60).unwrap();
        let c2 = c.map_levels(|_| Complex64::new(2.0, 0.0));
        let b = g_star(&c2, 2, &grid, &pts, 60).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.is_finite() && *x > 0.0);
            assert!((2.0 * x - y).abs() < 1e-12 * y);
        }
        assert!(g_star(&c, 1, &grid, &pts, 60).is_err());
    }
}
