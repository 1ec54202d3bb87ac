//! Calderón-Zygmund kernel estimates for the component semigroups
//! `T_{t,m}`, the auxiliary beta-type integral bound, and the temporal
//! square-function bound of the Mehler kernel.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::jet::Jet;
use crate::error::{Error, Result};
use crate::quadrature::{default_t_max, gauss_legendre, log_temporal_rule, QuadratureRule};
use crate::specfun::reduced_scaled_unchecked;

/// Log-magnitudes below this are treated as exact zeros.
const LOG_UNDERFLOW: f64 = -745.0;

/// `d^j/dz^j H_alpha(z)` for `j <= order`, `H_alpha(z) = e^{-z} z^{-alpha} I_alpha(z)`.
///
/// Uses `H_b' = z H_{b+1} - H_b`, carrying each derivative as a combination of
/// `z^a H_{alpha+i}`.
pub fn reduced_bessel_derivatives(alpha: f64, z: f64, order: usize) -> Vec<f64> {
    let mut terms: BTreeMap<(u32, usize), f64> = BTreeMap::new();
    terms.insert((0, 0), 1.0);
    let mut h_cache: Vec<f64> = Vec::new();
    let mut h = |i: usize| -> f64 {
        while h_cache.len() <= i {
            h_cache.push(reduced_scaled_unchecked(alpha + h_cache.len() as f64, z));
        }
        h_cache[i]
    };
    let mut out = Vec::with_capacity(order + 1);
    for j in 0..=order {
        out.push(terms.iter().map(|(&(a, i), c)| c * z.powi(a as i32) * h(i)).sum());
        if j == order {
            break;
        }
        let mut next: BTreeMap<(u32, usize), f64> = BTreeMap::new();
        for (&(a, i), &c) in &terms {
            if a > 0 {
                *next.entry((a - 1, i)).or_default() += a as f64 * c;
            }
            *next.entry((a + 1, i + 1)).or_default() += c;
            *next.entry((a, i)).or_default() -= c;
        }
        terms = next;
    }
    out
}

/// Taylor jet in `t` of `K_m(r, s; t) = (rs)^m K_t^{n/2+m-1}(r, s)`, the
/// kernel of `T_{t,m}` against `s^{n-1} ds`. `None` when it underflows.
pub fn component_kernel_jet(n: usize, m: usize, r: f64, s: f64, t: f64, order: usize) -> Option<Jet> {
    let alpha = n as f64 / 2.0 + m as f64 - 1.0;
    let tj = Jet::variable(t, order);
    let (sh, ch) = tj.sinh_cosh(1.0);
    // sinh 2t = 2 sinh t cosh t, cosh 2t - 1 = 2 sinh^2 t
    let s2 = (&sh * &ch).scale(2.0);
    let c2m1 = (&sh * &sh).scale(2.0);
    let inv = s2.recip();
    let z = inv.scale(r * s);
    let num = &c2m1.add_const(1.0).scale((r - s) * (r - s)) + &c2m1.scale(2.0 * r * s);
    let e = (&num * &inv).scale(-0.5);
    let rs_term = if m == 0 { 0.0 } else { m as f64 * (r * s).ln() };
    let lnpre = (&s2.ln().scale(-(1.0 + alpha)) + &e).add_const(rs_term);
    let hd = reduced_bessel_derivatives(alpha, z.value(), order);
    if hd[0] <= 0.0 || lnpre.value() + hd[0].ln() < LOG_UNDERFLOW {
        return None;
    }
    Some(&lnpre.exp() * &z.compose(&hd))
}

/// `d_t^k K_m(r, s; t)`.
pub fn component_kernel_dt(n: usize, m: usize, k: usize, r: f64, s: f64, t: f64) -> f64 {
    component_kernel_jet(n, m, r, s, t, k).map_or(0.0, |j| j.derivative(k))
}

/// Quadrature and grid controls for [`verify_cz_estimates`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CzOptions {
    pub grid_points: usize,
    pub r_min: f64,
    pub r_max: f64,
    /// Pairs with `|r - s|` below this are skipped.
    pub band: f64,
    pub t_min: f64,
    pub temporal_order: usize,
    /// Step of the central difference in `r`.
    pub h: f64,
}

impl Default for CzOptions {
    fn default() -> Self {
        CzOptions {
            grid_points: 60,
            r_min: 0.1,
            r_max: 6.0,
            band: 0.05,
            t_min: 1e-8,
            temporal_order: 160,
            h: 1e-4,
        }
    }
}

/// Sup ratios for one `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CzRow {
    pub m: usize,
    /// `sup (int |d_t^k K_m|^2 t^{2k-1} dt)^{1/2} |r-s| (r+s)^{n-1}`.
    pub sup_size: f64,
    pub argmax_size: (f64, f64),
    /// Same with `d_r d_t^k K_m` and `|r-s|^2 (r+s)^{n-1}`.
    pub sup_gradient: f64,
    pub argmax_gradient: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CzReport {
    pub n: usize,
    pub k: usize,
    pub options: CzOptions,
    pub rows: Vec<CzRow>,
}

impl CzReport {
    /// `max/min - 1` of both sups over rows with `m` in `ms`.
    pub fn variation(&self, ms: std::ops::RangeInclusive<usize>) -> (f64, f64) {
        let rows: Vec<&CzRow> = self.rows.iter().filter(|r| ms.contains(&r.m)).collect();
        let spread = |f: &dyn Fn(&CzRow) -> f64| {
            let hi = rows.iter().map(|r| f(r)).fold(f64::NEG_INFINITY, f64::max);
            let lo = rows.iter().map(|r| f(r)).fold(f64::INFINITY, f64::min);
            hi / lo - 1.0
        };
        (spread(&|r| r.sup_size), spread(&|r| r.sup_gradient))
    }

    pub fn sup_size(&self) -> f64 {
        self.rows.iter().map(|r| r.sup_size).fold(0.0, f64::max)
    }

    pub fn sup_gradient(&self) -> f64 {
        self.rows.iter().map(|r| r.sup_gradient).fold(0.0, f64::max)
    }
}

fn temporal_norm<F: Fn(f64) -> f64>(rule: &QuadratureRule, f: F) -> f64 {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, w)| {
            let v = f(t);
            w * v * v
        })
        .sum::<f64>()
        .sqrt()
}

/// Size and smoothness bounds for `K_m` against the ball measure
/// `|r-s| (r+s)^{n-1}` over an off-diagonal grid, for every `m` in `m_list`.
pub fn verify_cz_estimates(m_list: &[usize], k: usize, n: usize, opts: CzOptions) -> Result<CzReport> {
    if k == 0 || n < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 1 and n >= 2, got k = {k}, n = {n}")));
    }
    if !(opts.r_min - opts.h > 0.0 && opts.r_max > opts.r_min && opts.grid_points >= 2) {
        return Err(Error::InvalidParameter("CZ grid must lie in (h, inf)".into()));
    }
    let rule = log_temporal_rule(opts.temporal_order, k, opts.t_min, default_t_max(n))?;
    let step = (opts.r_max - opts.r_min) / (opts.grid_points - 1) as f64;
    let axis: Vec<f64> = (0..opts.grid_points).map(|i| opts.r_min + i as f64 * step).collect();
    let pairs: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&r| axis.iter().map(move |&s| (r, s)))
        .filter(|(r, s)| (r - s).abs() >= opts.band)
        .collect();
    let rows = m_list
        .iter()
        .map(|&m| {
            let vals: Vec<(f64, f64)> = pairs
                .par_iter()
                .map(|&(r, s)| {
                    let size = temporal_norm(&rule, |t| component_kernel_dt(n, m, k, r, s, t));
                    let grad = temporal_norm(&rule, |t| {
                        (component_kernel_dt(n, m, k, r + opts.h, s, t) - component_kernel_dt(n, m, k, r - opts.h, s, t)) / (2.0 * opts.h)
                    });
                    let ball = (r - s).abs() * (r + s).powi(n as i32 - 1);
                    (size * ball, grad * ball * (r - s).abs())
                })
                .collect();
            let (mut i1, mut i2) = (0, 0);
            for (i, v) in vals.iter().enumerate() {
                if v.0 > vals[i1].0 {
                    i1 = i;
                }
                if v.1 > vals[i2].1 {
                    i2 = i;
                }
            }
            CzRow {
                m,
                sup_size: vals[i1].0,
                argmax_size: pairs[i1],
                sup_gradient: vals[i2].1,
                argmax_gradient: pairs[i2],
            }
        })
        .collect();
    Ok(CzReport { n, k, options: opts, rows })
}

/// `(1-b)^lambda int_0^1 v^{c-1/2} (1-b+bv)^{-(c+lambda+1/2)} dv` with
/// `b = B/A`: the integral
/// `int_0^1 (1-u)^{c-1/2} (A-Bu)^{-(c+lambda+1/2)} du` divided by
/// `A^{-(c+1/2)} (A-B)^{-lambda}`. The ratio depends on `A, B` only via `b`.
pub fn beta_integral_ratio(a: f64, b: f64, c: f64, lambda: f64, panel_nodes: usize) -> Result<f64> {
    if !(a > 0.0 && b >= 0.0 && b < a && c >= 0.5 && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= B < A, c >= 1/2, lambda > 0; got A = {a}, B = {b}, c = {c}, lambda = {lambda}"
        )));
    }
    let q = b / a;
    let e = c + lambda + 0.5;
    // v = w^2 removes the v^{c-1/2} endpoint singularity for c = 1/2; the
    // integrand changes scale at w ~ sqrt(1-q)
    let scale = (1.0 - q).sqrt();
    let mut pts = vec![0.0];
    let mut x = scale / 64.0;
    while x < 1.0 {
        pts.push(x);
        x *= 2.0;
    }
    pts.push(1.0);
    let gl = gauss_legendre(panel_nodes);
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        total += 0.5
            * (hi - lo)
            * gl.integrate(|x| {
                let w = lo + 0.5 * (hi - lo) * (1.0 + x);
                2.0 * w.powf(2.0 * c) * (1.0 - q + q * w * w).powf(-e)
            });
    }
    Ok((1.0 - q).powf(lambda) * total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaSweep {
    pub sup_ratio: f64,
    /// `(A, B, c, lambda)` of the sup.
    pub argmax: (f64, f64, f64, f64),
    pub refined_sup_ratio: f64,
    /// `|refined - coarse| / refined`.
    pub refinement_change: f64,
}

fn beta_sweep_sup(points: usize, panel_nodes: usize) -> Result<(f64, (f64, f64, f64, f64))> {
    let mut best = (f64::NEG_INFINITY, (0.0, 0.0, 0.0, 0.0));
    for ia in 0..points {
        let a = 1.0 + 9.0 * ia as f64 / (points - 1) as f64;
        for ib in 0..points {
            let q = 0.1 + 0.89 * ib as f64 / (points - 1) as f64;
            for c in [0.5, 1.0, 2.0] {
                for lambda in [0.5, 1.0] {
                    let v = beta_integral_ratio(a, q * a, c, lambda, panel_nodes)?;
                    if v > best.0 {
                        best = (v, (a, q * a, c, lambda));
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Sup of [`beta_integral_ratio`] over `A in [1, 10]`, `B/A in [0.1, 0.99]`,
/// `c in {1/2, 1, 2}`, `lambda in {1/2, 1}` on `points` values per axis, and
/// again with the grid and quadrature doubled.
pub fn beta_integral_sweep(points: usize) -> Result<BetaSweep> {
    if points < 2 {
        return Err(Error::InvalidParameter("sweep needs at least two points per axis".into()));
    }
    let (sup, argmax) = beta_sweep_sup(points, 16)?;
    let (refined, _) = beta_sweep_sup(2 * points - 1, 32)?;
    Ok(BetaSweep {
        sup_ratio: sup,
        argmax,
        refined_sup_ratio: refined,
        refinement_change: (refined - sup).abs() / refined,
    })
}

/// Jet in `t` of the Mehler kernel with `u = |x-y|`, `v = |x+y|`.
pub fn mehler_jet(n: usize, u: f64, v: f64, t: f64, order: usize) -> Option<Jet> {
    let tj = Jet::variable(t, order);
    let (sh, ch) = tj.sinh_cosh(1.0);
    let coth = &ch * &sh.recip();
    let tanh = &sh * &ch.recip();
    let ln_s2 = (&sh * &ch).scale(2.0).ln();
    let nf = n as f64;
    let lnk = (&(&ln_s2.scale(-nf / 2.0) - &coth.scale(0.25 * u * u)) - &tanh.scale(0.25 * v * v))
        .add_const(-nf / 2.0 * (2.0 * std::f64::consts::PI).ln());
    if lnk.value() < LOG_UNDERFLOW {
        return None;
    }
    Some(lnk.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MehlerBoundProbe {
    pub samples: usize,
    /// `sup (int |d_t K_t(x,y)|^2 t dt)^{1/2} |x-y|^n`.
    pub sup: f64,
    pub argmax: (Vec<f64>, Vec<f64>),
    /// Same sup restricted to `|x - y| < 0.1`.
    pub near_diagonal_sup: f64,
}

/// Random pairs in `[-3, 3]^n` with `|x - y| >= 0.01`.
pub fn mehler_gradient_probe(n: usize, samples: usize, seed: u64) -> Result<MehlerBoundProbe> {
    let rule = log_temporal_rule(160, 1, 1e-9, default_t_max(n))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(samples);
    while pairs.len() < samples {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        // half the pairs close to the diagonal
        let spread = if pairs.len() % 2 == 0 { 0.1 } else { 3.0 };
        let y: Vec<f64> = x.iter().map(|xi| xi + rng.random_range(-spread..spread)).collect();
        let d = dist(&x, &y);
        if d >= 0.01 {
            pairs.push((x, y));
        }
    }
    let vals: Vec<f64> = pairs
        .par_iter()
        .map(|(x, y)| {
            let u = dist(x, y);
            let v = x.iter().zip(y).map(|(a, b)| (a + b) * (a + b)).sum::<f64>().sqrt();
            temporal_norm(&rule, |t| mehler_jet(n, u, v, t, 1).map_or(0.0, |j| j.derivative(1))) * u.powi(n as i32)
        })
        .collect();
    let mut best = 0;
    let mut near: f64 = 0.0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
        if dist(&pairs[i].0, &pairs[i].1) < 0.1 {
            near = near.max(*v);
        }
    }
    Ok(MehlerBoundProbe {
        samples,
        sup: vals[best],
        argmax: pairs[best].clone(),
        near_diagonal_sup: near,
    })
}

fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}
