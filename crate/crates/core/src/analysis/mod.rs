//! Mixed `L^{p,2}` norms, weights and their `A_p` constants on `(R^+, mu_alpha)`,
//! the maximal function `M_alpha`, g-functions, kernel-estimate scans and
//! operator-norm probes.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{PolarField, RadialProfile};
use crate::harmonics::HarmonicDecomposition;
use crate::quadrature::{gauss_jacobi_ab, gauss_legendre, QuadratureRule, WeightFunction};

pub mod cz;
pub mod gfun;
pub mod jet;
pub mod probe;

pub use cz::*;
pub use gfun::*;
pub use probe::*;

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidExponent { p, min: 1.0 })
    }
}

/// `(sum_i w_i W(r_i) S_i^{p/2})^{1/p}` for shell energies `S_i` on an
/// `r^{n-1}` rule.
pub fn mixed_norm_from_shells(shell_sq: &[f64], rule: &QuadratureRule, p: f64, weight: Option<&Weight>) -> Result<f64> {
    check_p(p)?;
    if shell_sq.len() != rule.len() {
        return Err(Error::GridMismatch("shell energies do not match the radial rule".into()));
    }
    let s: f64 = shell_sq
        .iter()
        .zip(&rule.nodes)
        .zip(&rule.weights)
        .map(|((e, &r), w)| w * weight.map_or(1.0, |wt| wt.eval(r)) * e.max(0.0).powf(p / 2.0))
        .sum();
    Ok(s.powf(1.0 / p))
}

/// `||f||_{L^{p,2}}`: sphere `L^2` inside, radial `L^p(r^{n-1} dr)` outside.
pub fn mixed_norm(f: &PolarField, p: f64) -> Result<f64> {
    mixed_norm_from_shells(&f.shell_l2_squared(), &f.grid.radial, p, None)
}

/// Same norm from the profiles `f_{m,j}` via shell Parseval.
pub fn mixed_norm_decomposed(d: &HarmonicDecomposition, p: f64) -> Result<f64> {
    mixed_norm_from_shells(&d.shell_energy(), &d.radial, p, None)
}

/// Outer measure `w(r) r^{n-1} dr`.
pub fn weighted_mixed_norm(f: &PolarField, p: f64, w: &Weight) -> Result<f64> {
    mixed_norm_from_shells(&f.shell_l2_squared(), &f.grid.radial, p, Some(w))
}

/// A positive weight on `R^+`.
#[derive(Clone)]
pub enum Weight {
    Unit,
    /// `r^gamma`.
    Power {
        gamma: f64,
    },
    /// `e^{rate r}`.
    Exp {
        rate: f64,
    },
    /// Piecewise-linear interpolation of samples, constant past the ends.
    Sampled {
        nodes: Vec<f64>,
        values: Vec<f64>,
    },
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Unit => write!(f, "Unit"),
            Weight::Power { gamma } => write!(f, "Power {{ gamma: {gamma} }}"),
            Weight::Exp { rate } => write!(f, "Exp {{ rate: {rate} }}"),
            Weight::Sampled { nodes, .. } => write!(f, "Sampled({} nodes)", nodes.len()),
            Weight::Function(_) => write!(f, "Function"),
        }
    }
}

impl Weight {
    pub fn from_profile(p: &RadialProfile) -> Result<Self> {
        if p.values.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidParameter("weights must be positive".into()));
        }
        Ok(Weight::Sampled {
            nodes: p.nodes().to_vec(),
            values: p.values.clone(),
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Weight::Unit => 1.0,
            Weight::Power { gamma } => r.powf(*gamma),
            Weight::Exp { rate } => (rate * r).exp(),
            Weight::Sampled { nodes, values } => {
                let i = nodes.partition_point(|&x| x < r);
                if i == 0 {
                    values[0]
                } else if i == nodes.len() {
                    values[values.len() - 1]
                } else {
                    let th = (r - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
                    values[i - 1] + th * (values[i] - values[i - 1])
                }
            }
            Weight::Function(f) => f(r),
        }
    }

    /// `ln int_a^b w(r)^e r^{2 alpha + 1} dr`.
    fn log_moment(&self, e: f64, a: f64, b: f64, alpha: f64) -> f64 {
        let beta = 2.0 * alpha + 2.0;
        match self {
            Weight::Unit => log_power_integral(beta, a, b),
            Weight::Power { gamma } => log_power_integral(gamma * e + beta, a, b),
            Weight::Exp { rate } => {
                let c = rate * e;
                // the mass sits within ~40/|c| of one end
                let (lo, hi) = if c > 0.0 {
                    ((b - 40.0 / c).max(a), b)
                } else if c < 0.0 {
                    (a, (a - 40.0 / c).min(b))
                } else {
                    (a, b)
                };
                log_panel_integral(|r| c * r, lo, hi, alpha, ((hi - lo) * c.abs()).ceil().clamp(1.0, 64.0) as usize)
            }
            _ => {
                let panels = (b - a).ceil().clamp(1.0, 64.0) as usize;
                log_panel_integral(|r| e * self.eval(r).ln(), a, b, alpha, panels)
            }
        }
    }
}

/// `ln int_a^b r^{e-1} dr`, `+inf` when divergent at 0.
fn log_power_integral(e: f64, a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return if e <= 0.0 { f64::INFINITY } else { e * b.ln() - e.ln() };
    }
    if e == 0.0 {
        (b / a).ln().ln()
    } else if e > 0.0 {
        e * b.ln() + (-(a / b).powf(e)).ln_1p() - e.ln()
    } else {
        e * a.ln() + (-(a / b).powf(-e)).ln_1p() - (-e).ln()
    }
}

/// `ln int_a^b e^{g(r)} r^{2 alpha+1} dr` by Gauss panels in log-sum-exp form;
/// a panel touching 0 uses Gauss-Jacobi with the `r^{2 alpha + 1}` weight.
fn log_panel_integral<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, alpha: f64, panels: usize) -> f64 {
    let power = 2.0 * alpha + 1.0;
    let gl = gauss_legendre(16);
    let mut terms = Vec::with_capacity(16 * panels);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let (lo, hi) = (a + p as f64 * h, a + (p + 1) as f64 * h);
        if lo == 0.0 {
            let gj = gauss_jacobi_ab(16, 0.0, power).expect("valid Jacobi parameters");
            // r = hi (1 + x)/2: r^power dr = (hi/2)^{power+1} (1+x)^power dx
            for (x, w) in gj.nodes.iter().zip(&gj.weights) {
                let r = 0.5 * hi * (1.0 + x);
                terms.push(g(r) + w.ln() + (power + 1.0) * (0.5 * hi).ln());
            }
        } else {
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                let r = lo + 0.5 * (hi - lo) * (1.0 + x);
                terms.push(g(r) + (0.5 * (hi - lo) * w).ln() + power * r.ln());
            }
        }
    }
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Intervals `[j 2^i, (j+1) 2^i]` for `i` in `min_scale..=max_scale`,
/// `j <= max_index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DyadicFamily {
    pub min_scale: i32,
    pub max_scale: i32,
    pub max_index: usize,
}

impl DyadicFamily {
    /// About 10^4 intervals from length `2^-12` to `2^12`.
    pub fn global() -> Self {
        DyadicFamily {
            min_scale: -12,
            max_scale: 12,
            max_index: 400,
        }
    }

    /// Intervals of length at most one.
    pub fn local() -> Self {
        DyadicFamily {
            max_scale: 0,
            ..Self::global()
        }
    }

    pub fn intervals(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for i in self.min_scale..=self.max_scale {
            let h = 2f64.powi(i);
            for j in 0..=self.max_index {
                out.push((j as f64 * h, (j + 1) as f64 * h));
            }
        }
        out
    }
}

/// `sup_Q (avg_Q w)(avg_Q w^{-1/(p-1)})^{p-1}` over the family, averages
/// against `mu_alpha`. Divergent averages give `+inf`.
pub fn ap_constant(w: &Weight, p: f64, alpha: f64, family: &DyadicFamily) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidExponent { p, min: 1.0 });
    }
    if !(alpha > -1.0) {
        return Err(Error::InvalidLaguerreType(alpha));
    }
    let beta = 2.0 * alpha + 2.0;
    let e = -1.0 / (p - 1.0);
    let logs: Vec<f64> = family
        .intervals()
        .par_iter()
        .map(|&(a, b)| {
            let ln_mu = log_power_integral(beta, a, b);
            let l1 = w.log_moment(1.0, a, b, alpha) - ln_mu;
            let l2 = w.log_moment(e, a, b, alpha) - ln_mu;
            l1 + (p - 1.0) * l2
        })
        .collect();
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // every constant is >= 1 by Jensen; clamp the rounding below it
    Ok(m.exp().max(1.0))
}

fn radial_extent(rule: &QuadratureRule) -> f64 {
    match rule.weight {
        WeightFunction::Radial { r_max, .. } => r_max,
        _ => {
            let k = rule.len();
            if k >= 2 {
                rule.nodes[k - 1] + 0.5 * (rule.nodes[k - 1] - rule.nodes[k - 2])
            } else {
                2.0 * rule.nodes[0]
            }
        }
    }
}

/// Ball radii `2^{-10} .. 2^4` in ratio `2^{1/4}`.
pub fn maximal_radii() -> Vec<f64> {
    (0..=56).map(|i| 2f64.powf(-10.0 + 0.25 * i as f64)).collect()
}

/// Piecewise-constant model of `|h|` on cells around the nodes of its rule,
/// on the space `([0, r_max], mu_alpha)`.
struct CellModel {
    edges: Vec<f64>,
    values: Vec<f64>,
    /// `int_0^{edges[c]} |h| dmu`.
    prefix: Vec<f64>,
    beta: f64,
}

impl CellModel {
    fn new(h: &RadialProfile, alpha: f64) -> Self {
        let nodes = h.nodes();
        let r_max = radial_extent(&h.rule);
        let mut edges = Vec::with_capacity(nodes.len() + 1);
        edges.push(0.0);
        for w in nodes.windows(2) {
            edges.push(0.5 * (w[0] + w[1]));
        }
        edges.push(r_max);
        let beta = 2.0 * alpha + 2.0;
        let values: Vec<f64> = h.values.iter().map(|v| v.abs()).collect();
        let mut prefix = vec![0.0; edges.len()];
        for c in 0..values.len() {
            prefix[c + 1] = prefix[c] + values[c] * (mu(edges[c + 1], beta) - mu(edges[c], beta));
        }
        CellModel {
            edges,
            values,
            prefix,
            beta,
        }
    }

    fn r_max(&self) -> f64 {
        self.edges[self.edges.len() - 1]
    }

    fn mass_below(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, self.r_max());
        let c = self.edges.partition_point(|&e| e <= x).saturating_sub(1).min(self.values.len() - 1);
        self.prefix[c] + self.values[c] * (mu(x, self.beta) - mu(self.edges[c], self.beta))
    }

    fn ball_average(&self, r: f64, rho: f64) -> f64 {
        let lo = (r - rho).max(0.0);
        let hi = (r + rho).min(self.r_max());
        let m = mu(hi, self.beta) - mu(lo, self.beta);
        if m <= 0.0 {
            return 0.0;
        }
        (self.mass_below(hi) - self.mass_below(lo)) / m
    }
}

fn mu(x: f64, beta: f64) -> f64 {
    x.powf(beta) / beta
}

/// Centered maximal function on `([0, r_max], mu_alpha)` over
/// [`maximal_radii`], plus the value at the node itself.
pub fn maximal_fn(h: &RadialProfile, alpha: f64) -> Result<RadialProfile> {
    if !(alpha > -1.0) {
        return Err(Error::InvalidLaguerreType(alpha));
    }
    let model = CellModel::new(h, alpha);
    let radii = maximal_radii();
    let values = h
        .nodes()
        .iter()
        .zip(&model.values)
        .map(|(&r, &v)| radii.iter().map(|&rho| model.ball_average(r, rho)).fold(v, f64::max))
        .collect();
    RadialProfile::new(h.rule.clone(), values)
}

/// `s = (1 + q')/2`, inside the admissible range `1 < s < q'`.
pub fn default_a1_exponent(q: f64) -> f64 {
    let qp = q / (q - 1.0);
    0.5 * (1.0 + qp)
}

/// `(M_alpha |v|^s)^{1/s}`, an `A_1` weight for `s > 1`.
pub fn a1_weight(v: &RadialProfile, s: f64, alpha: f64) -> Result<RadialProfile> {
    if !(s > 1.0) {
        return Err(Error::InvalidExponent { p: s, min: 1.0 });
    }
    let m = maximal_fn(&v.map(|_, x| x.abs().powf(s)), alpha)?;
    Ok(m.map(|_, x| x.powf(1.0 / s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PolarGrid;
    use crate::harmonics::{build_basis, decompose};
    use crate::quadrature::{radial_rule, sphere_area, RadialMeasure};
    use crate::specfun::hermite_fn_1d;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Arc<PolarGrid> {
        Arc::new(PolarGrid::new(n, 120, 16, 12.0).unwrap())
    }

    #[test]
    fn mixed_norm_special_cases() {
        for n in 2..=3 {
            let g = grid(n);
            let f = PolarField::from_fn(g.clone(), |x| (-x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp() * (1.0 + x[0]));
            assert!((mixed_norm(&f, 2.0).unwrap() - f.l2_norm()).abs() < 1e-10 * f.l2_norm());
            let p = 3.0;
            let rad = PolarField::from_polar_fn(g.clone(), |r, _| (-r * r).exp());
            let radial_lp = g.radial.integrate(|r| (-p * r * r).exp()).powf(1.0 / p);
            let expected = sphere_area(n).sqrt() * radial_lp;
            assert!((mixed_norm(&rad, p).unwrap() - expected).abs() < 1e-10 * expected);
            let basis = build_basis(n, 4, g.sphere.clone()).unwrap();
            let h = basis.position(2, 1).unwrap();
            let y = basis.row(h).to_vec();
            let vals: Vec<f64> = (0..g.n_radial())
                .flat_map(|ir| {
                    let r = g.radial.nodes[ir];
                    y.iter().map(move |v| v * r * (-r).exp()).collect::<Vec<_>>()
                })
                .collect();
            let sep = PolarField::new(g.clone(), vals, None).unwrap();
            let expected = g.radial.integrate(|r| (r * (-r).exp()).powf(p)).powf(1.0 / p);
            assert!((mixed_norm(&sep, p).unwrap() - expected).abs() < 1e-10 * expected);
            let d = decompose(&sep, &basis).unwrap();
            assert!((mixed_norm_decomposed(&d, p).unwrap() - expected).abs() < 1e-10 * expected);
        }
        assert!(mixed_norm(&PolarField::zeros(grid(2)), 0.5).is_err());
    }

    #[test]
    fn weighted_norms() {
        let g = grid(2);
        let f = PolarField::from_fn(g.clone(), |x| hermite_fn_1d(1, x[0]) * hermite_fn_1d(0, x[1]));
        assert!((weighted_mixed_norm(&f, 2.0, &Weight::Unit).unwrap() - 1.0).abs() < 1e-10);
        // pure power on [0, R]: int_0^R r^{a p + gamma + 1} dr in closed form
        let (a, gamma, p) = (1.5, 0.7, 3.0);
        let pw = PolarField::from_polar_fn(g.clone(), |r, _| r.powf(a) / (2.0 * PI).sqrt());
        let v = weighted_mixed_norm(&pw, p, &Weight::Power { gamma }).unwrap();
        let e = a * p + gamma + 2.0;
        let expected = (12f64.powf(e) / e).powf(1.0 / p);
        assert!((v - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn ap_constants() {
        let fam = DyadicFamily::global();
        assert_eq!(fam.intervals().len(), 25 * 401);
        assert!((ap_constant(&Weight::Unit, 2.0, 0.0, &fam).unwrap() - 1.0).abs() < 1e-12);
        let alpha = 0.0;
        let beta = 2.0 * alpha + 2.0;
        let p = 2.0;
        for &gamma in &[-1.5, 0.0, 1.0, 1.9] {
            let c = ap_constant(&Weight::Power { gamma }, p, alpha, &fam).unwrap();
            assert!(c.is_finite() && c >= 1.0, "gamma={gamma}: {c}");
        }
        assert!(ap_constant(&Weight::Power { gamma: -beta }, p, alpha, &fam).unwrap().is_infinite());
        assert!(ap_constant(
            &Weight::Power {
                gamma: beta * (p - 1.0) + 0.1
            },
            p,
            alpha,
            &fam
        )
        .unwrap()
        .is_infinite());
        // the constant grows toward the edges of the admissible range
        let c1 = ap_constant(&Weight::Power { gamma: 1.0 }, p, alpha, &fam).unwrap();
        let c2 = ap_constant(&Weight::Power { gamma: 1.95 }, p, alpha, &fam).unwrap();
        assert!(c2 > 5.0 * c1);
        // exponential weights: local but not global
        let ex = Weight::Exp { rate: 1.0 };
        let local = ap_constant(&ex, 2.0, 0.5, &DyadicFamily::local()).unwrap();
        let global = ap_constant(&ex, 2.0, 0.5, &fam).unwrap();
        assert!(local < 5.0, "{local}");
        assert!(global > 1e100);
        // scaling invariance
        let w = Weight::Function(Arc::new(|r: f64| 1.0 + r.sin().abs()));
        let w3 = Weight::Function(Arc::new(|r: f64| 3.0 * (1.0 + r.sin().abs())));
        let small = DyadicFamily {
            min_scale: -4,
            max_scale: 2,
            max_index: 20,
        };
        let a = ap_constant(&w, 3.0, 0.5, &small).unwrap();
        let b = ap_constant(&w3, 3.0, 0.5, &small).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        assert!(ap_constant(&w, 1.0, 0.5, &small).is_err());
    }

    #[test]
    fn maximal_function_properties() {
        let rule = Arc::new(radial_rule(80, RadialMeasure::Power(2.0), 6.0).unwrap());
        let one = RadialProfile::from_fn(rule.clone(), |_| 1.0);
        let m = maximal_fn(&one, 0.5).unwrap();
        assert!(m.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let h = RadialProfile::from_fn(rule.clone(), |r| if (1.0..=2.0).contains(&r) { 1.0 } else { 0.0 });
        let mh = maximal_fn(&h, 0.5).unwrap();
        assert!(mh.values.iter().zip(&h.values).all(|(a, b)| a >= b));
        // brute force over cells and radii
        let model = CellModel::new(&h, 0.5);
        let beta = 3.0;
        for (i, &r) in rule.nodes.iter().enumerate() {
            let mut best = h.values[i];
            for &rho in &maximal_radii() {
                let lo = (r - rho).max(0.0);
                let hi = (r + rho).min(6.0);
                let mut mass = 0.0;
                for c in 0..model.values.len() {
                    let a = model.edges[c].max(lo);
                    let b = model.edges[c + 1].min(hi);
                    if b > a {
                        mass += model.values[c] * (mu(b, beta) - mu(a, beta));
                    }
                }
                best = best.max(mass / (mu(hi, beta) - mu(lo, beta)));
            }
            assert!((best - mh.values[i]).abs() < 1e-12, "r={r}");
        }
        let a1 = a1_weight(&h.map(|_, v| v + 0.1), default_a1_exponent(3.0), 0.5).unwrap();
        assert!(a1.values.iter().all(|v| *v > 0.0));
        assert!((default_a1_exponent(2.0) - 1.5).abs() < 1e-15);
    }
}
