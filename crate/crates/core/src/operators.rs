//! Operators on sampled functions: Hermite expansions and multipliers
//! `phi(H)`, the Hermite and Laguerre semigroups, Bochner-Riesz means, and
//! the reduction of rotation-invariant kernels to radial component operators.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{PolarField, PolarGrid, RadialProfile};
use crate::harmonics::{
    build_basis, decompose_complex, degree_dim, eval_harmonics, funk_hecke_constant, resynthesize, HarmonicDecomposition,
    SphericalHarmonicBasis,
};
use crate::kernels::{
    bochner_riesz_kernel, component_kernel_tables, laguerre_kernel_unchecked, mehler_kernel, riesz_factor, KernelK0, MehlerForm,
};
use crate::quadrature::{gauss_hermite_lebesgue, gauss_legendre, QuadratureRule};
use crate::specfun::{hermite_fns_into, radial_hermite_fns_into};

/// Largest admissible fraction of `||f||^2` missed by a Hermite expansion.
pub const TRUNCATION_LIMIT: f64 = 0.1;

/// Index of a Hermite eigenfunction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum BasisLabel {
    /// Tensor product `Phi_alpha(x) = prod h_{alpha_i}(x_i)`.
    Multi(Vec<usize>),
    /// `r^m psi_i^{n/2+m-1}(r) Y_{m,j}(omega)`, level `2i + m`.
    Spherical { m: usize, j: usize, i: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    Cartesian,
    Spherical { m_max: usize },
}

/// Coefficients `<f, Phi>` grouped by spectral level `k` (eigenvalue `2k+n`).
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteCoefficients {
    pub n: usize,
    pub k_max: usize,
    pub kind: BasisKind,
    pub labels: Vec<Vec<BasisLabel>>,
    pub values: Vec<Vec<Complex64>>,
    /// `||f||_2^2` measured by the analysis quadrature.
    pub input_norm_sq: f64,
}

/// All multi-indices of length `n` with `|alpha| = k`, lexicographic.
pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in multi_indices(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn spherical_labels(n: usize, k: usize, m_max: usize) -> Vec<BasisLabel> {
    let mut out = Vec::new();
    let mut m = k % 2;
    while m <= k.min(m_max) {
        for j in 0..degree_dim(n, m) {
            out.push(BasisLabel::Spherical { m, j, i: (k - m) / 2 });
        }
        m += 2;
    }
    out
}

impl HermiteCoefficients {
    pub fn zeros(n: usize, k_max: usize, kind: BasisKind) -> Self {
        let labels: Vec<Vec<BasisLabel>> = (0..=k_max)
            .map(|k| match kind {
                BasisKind::Cartesian => multi_indices(n, k).into_iter().map(BasisLabel::Multi).collect(),
                BasisKind::Spherical { m_max } => spherical_labels(n, k, m_max),
            })
            .collect();
        let values = labels.iter().map(|l| vec![Complex64::new(0.0, 0.0); l.len()]).collect();
        HermiteCoefficients {
            n,
            k_max,
            kind,
            labels,
            values,
            input_norm_sq: 0.0,
        }
    }

    pub fn get(&self, label: &BasisLabel) -> Option<Complex64> {
        let k = match label {
            BasisLabel::Multi(a) => a.iter().sum(),
            BasisLabel::Spherical { m, i, .. } => 2 * i + m,
        };
        let pos = self.labels.get(k)?.iter().position(|l| l == label)?;
        Some(self.values[k][pos])
    }

    pub fn set(&mut self, label: &BasisLabel, v: Complex64) -> Result<()> {
        for (k, ls) in self.labels.iter().enumerate() {
            if let Some(p) = ls.iter().position(|l| l == label) {
                self.values[k][p] = v;
                return Ok(());
            }
        }
        Err(Error::InvalidParameter(format!("no basis function {label:?} in this expansion")))
    }

    pub fn len(&self) -> usize {
        self.values.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Plancherel sum `sum |c|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    /// `1 - sum |c|^2 / ||f||^2`, zero for the zero function.
    pub fn truncation_mass(&self) -> f64 {
        if self.input_norm_sq > 0.0 {
            1.0 - self.norm_sq() / self.input_norm_sq
        } else {
            0.0
        }
    }

    /// Multiply level `k` by `phi(k)`.
    pub fn map_levels<F: Fn(usize) -> Complex64>(&self, phi: F) -> HermiteCoefficients {
        let mut out = self.clone();
        for (k, level) in out.values.iter_mut().enumerate() {
            let f = phi(k);
            level.iter_mut().for_each(|c| *c *= f);
        }
        out
    }

    /// Synthesis `sum c Phi` at one point.
    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        match self.kind {
            BasisKind::Cartesian => {
                let tables: Vec<Vec<f64>> = x
                    .iter()
                    .map(|&xi| {
                        let mut h = vec![0.0; self.k_max + 1];
                        hermite_fns_into(xi, &mut h);
                        h
                    })
                    .collect();
                let mut acc = Complex64::new(0.0, 0.0);
                for (ls, vs) in self.labels.iter().zip(&self.values) {
                    for (l, c) in ls.iter().zip(vs) {
                        if let BasisLabel::Multi(a) = l {
                            let phi: f64 = a.iter().enumerate().map(|(d, &ad)| tables[d][ad]).product();
                            acc += c * phi;
                        }
                    }
                }
                acc
            }
            BasisKind::Spherical { m_max } => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let omega: Vec<f64> = if r > 0.0 {
                    x.iter().map(|v| v / r).collect()
                } else {
                    let mut e = vec![0.0; self.n];
                    e[0] = 1.0;
                    e
                };
                let m_top = m_max.min(self.k_max);
                let mut y = Vec::new();
                eval_harmonics(self.n, m_top, &omega, &mut y).expect("dimension checked at analysis");
                let profiles = self.radial_profiles_at(r, m_top);
                profiles.iter().zip(&y).map(|(p, y)| p * y).sum()
            }
        }
    }

    /// `f_{m,j}(r) = sum_i c_{m,j,i} r^m psi_i(r)` for every harmonic of
    /// degree `<= m_top`, in harmonic-label order.
    fn radial_profiles_at(&self, r: f64, m_top: usize) -> Vec<Complex64> {
        let mut offsets = Vec::with_capacity(m_top + 2);
        let mut acc = 0;
        for m in 0..=m_top {
            offsets.push(acc);
            acc += degree_dim(self.n, m);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); acc];
        let mut radial: Vec<Vec<f64>> = (0..=m_top).map(|m| vec![0.0; (self.k_max.saturating_sub(m)) / 2 + 1]).collect();
        for (m, buf) in radial.iter_mut().enumerate() {
            radial_hermite_fns_into(m, self.n, r, buf);
        }
        for (ls, vs) in self.labels.iter().zip(&self.values) {
            for (l, c) in ls.iter().zip(vs) {
                if let BasisLabel::Spherical { m, j, i } = *l {
                    if m <= m_top {
                        out[offsets[m] + j] += c * radial[m][i];
                    }
                }
            }
        }
        out
    }

    /// Projections `P_l f(x)` for every level `l`, at every grid node:
    /// `out[point][l]` in grid order.
    pub fn level_values_on_grid(&self, grid: &PolarGrid) -> Result<Vec<Vec<Complex64>>> {
        if grid.n != self.n {
            return Err(Error::GridMismatch("expansion and grid dimensions differ".into()));
        }
        let ns = grid.n_sphere();
        match self.kind {
            BasisKind::Cartesian => Ok((0..grid.len())
                .into_par_iter()
                .map(|i| self.level_values_at(&grid.point(i / ns, i % ns)))
                .collect()),
            BasisKind::Spherical { m_max } => {
                let m_top = m_max.min(self.k_max);
                let mut ytab = Vec::with_capacity(ns);
                let mut y = Vec::new();
                for is in 0..ns {
                    eval_harmonics(self.n, m_top, grid.sphere.point(is), &mut y)?;
                    ytab.push(y.clone());
                }
                let offsets = harmonic_offsets(self.n, m_top);
                Ok((0..grid.n_radial())
                    .into_par_iter()
                    .flat_map_iter(|ir| {
                        let radial = self.radial_table(grid.radial.nodes[ir], m_top);
                        ytab.iter().map(|y| self.spherical_levels(&radial, y, &offsets)).collect::<Vec<_>>()
                    })
                    .collect())
            }
        }
    }

    /// `P_l f(x)` for every level `l`.
    pub fn level_values_at(&self, x: &[f64]) -> Vec<Complex64> {
        match self.kind {
            BasisKind::Cartesian => {
                let tables: Vec<Vec<f64>> = x
                    .iter()
                    .map(|&xi| {
                        let mut h = vec![0.0; self.k_max + 1];
                        hermite_fns_into(xi, &mut h);
                        h
                    })
                    .collect();
                self.labels
                    .iter()
                    .zip(&self.values)
                    .map(|(ls, vs)| {
                        ls.iter()
                            .zip(vs)
                            .map(|(l, c)| match l {
                                BasisLabel::Multi(a) => c * a.iter().enumerate().map(|(d, &ad)| tables[d][ad]).product::<f64>(),
                                BasisLabel::Spherical { .. } => Complex64::new(0.0, 0.0),
                            })
                            .sum()
                    })
                    .collect()
            }
            BasisKind::Spherical { m_max } => {
                let m_top = m_max.min(self.k_max);
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let omega: Vec<f64> = if r > 0.0 {
                    x.iter().map(|v| v / r).collect()
                } else {
                    let mut e = vec![0.0; self.n];
                    e[0] = 1.0;
                    e
                };
                let mut y = Vec::new();
                eval_harmonics(self.n, m_top, &omega, &mut y).expect("dimension checked at analysis");
                let radial = self.radial_table(r, m_top);
                self.spherical_levels(&radial, &y, &harmonic_offsets(self.n, m_top))
            }
        }
    }

    /// `radial[m][i] = r^m psi_i^{n/2+m-1}(r)`.
    fn radial_table(&self, r: f64, m_top: usize) -> Vec<Vec<f64>> {
        (0..=m_top)
            .map(|m| {
                let mut buf = vec![0.0; self.k_max.saturating_sub(m) / 2 + 1];
                radial_hermite_fns_into(m, self.n, r, &mut buf);
                buf
            })
            .collect()
    }

    fn spherical_levels(&self, radial: &[Vec<f64>], y: &[f64], offsets: &[usize]) -> Vec<Complex64> {
        self.labels
            .iter()
            .zip(&self.values)
            .map(|(ls, vs)| {
                ls.iter()
                    .zip(vs)
                    .map(|(l, c)| match *l {
                        BasisLabel::Spherical { m, j, i } => c * (radial[m][i] * y[offsets[m] + j]),
                        BasisLabel::Multi(_) => Complex64::new(0.0, 0.0),
                    })
                    .sum()
            })
            .collect()
    }

    /// Synthesis on every node of a polar grid.
    pub fn to_field(&self, grid: Arc<PolarGrid>) -> Result<PolarField> {
        if grid.n != self.n {
            return Err(Error::GridMismatch("expansion and grid dimensions differ".into()));
        }
        let ns = grid.n_sphere();
        let vals: Vec<Complex64> = match self.kind {
            BasisKind::Spherical { m_max } => {
                let m_top = m_max.min(self.k_max);
                let mut ytab = Vec::with_capacity(ns);
                let mut y = Vec::new();
                for is in 0..ns {
                    eval_harmonics(self.n, m_top, grid.sphere.point(is), &mut y)?;
                    ytab.push(y.clone());
                }
                (0..grid.n_radial())
                    .into_par_iter()
                    .flat_map_iter(|ir| {
                        let prof = self.radial_profiles_at(grid.radial.nodes[ir], m_top);
                        ytab.iter()
                            .map(|y| prof.iter().zip(y).map(|(p, y)| p * y).sum::<Complex64>())
                            .collect::<Vec<_>>()
                    })
                    .collect()
            }
            BasisKind::Cartesian => (0..grid.len())
                .into_par_iter()
                .map(|i| self.evaluate(&grid.point(i / ns, i % ns)))
                .collect(),
        };
        complex_field(grid, vals)
    }

    /// RFC-4180 table with columns `level,index,re,im`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["level", "index", "re", "im"])?;
        for (k, vs) in self.values.iter().enumerate() {
            for (i, c) in vs.iter().enumerate() {
                wr.write_record([k.to_string(), i.to_string(), c.re.to_string(), c.im.to_string()])?;
            }
        }
        wr.flush()?;
        Ok(())
    }
}

fn harmonic_offsets(n: usize, m_top: usize) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(m_top + 1);
    let mut acc = 0;
    for m in 0..=m_top {
        offsets.push(acc);
        acc += degree_dim(n, m);
    }
    offsets
}

/// Real field when every imaginary part vanishes exactly.
pub(crate) fn complex_field(grid: Arc<PolarGrid>, vals: Vec<Complex64>) -> Result<PolarField> {
    let re = vals.iter().map(|c| c.re).collect();
    let im = vals.iter().any(|c| c.im != 0.0).then(|| vals.iter().map(|c| c.im).collect());
    PolarField::new(grid, re, im)
}

fn check_truncation(c: HermiteCoefficients) -> Result<HermiteCoefficients> {
    let mass = c.truncation_mass();
    if mass > TRUNCATION_LIMIT {
        Err(Error::Truncation {
            mass,
            limit: TRUNCATION_LIMIT,
        })
    } else {
        Ok(c)
    }
}

/// Inner products against `Phi_alpha`, `|alpha| <= k_max`, by a tensor
/// Gauss-Hermite rule with `nodes` points per axis.
pub fn hermite_analyze<F: Fn(&[f64]) -> f64 + Sync>(f: F, n: usize, k_max: usize, nodes: usize) -> Result<HermiteCoefficients> {
    if n == 0 || n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if nodes <= k_max {
        return Err(Error::InvalidParameter(format!("{nodes} nodes cannot resolve level {k_max}")));
    }
    let rule = gauss_hermite_lebesgue(nodes);
    let nn = rule.len();
    let total = nn.pow(n as u32);
    let samples: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut x = [0.0; 3];
            let mut rem = idx;
            for d in (0..n).rev() {
                x[d] = rule.nodes[rem % nn];
                rem /= nn;
            }
            f(&x[..n])
        })
        .collect();
    let mut norm_sq = 0.0;
    for (idx, v) in samples.iter().enumerate() {
        let mut w = 1.0;
        let mut rem = idx;
        for _ in 0..n {
            w *= rule.weights[rem % nn];
            rem /= nn;
        }
        norm_sq += w * v * v;
    }
    // weighted Hermite table: wh[a * (K+1) + k] = w_a h_k(x_a)
    let kk = k_max + 1;
    let mut wh = vec![0.0; nn * kk];
    for a in 0..nn {
        hermite_fns_into(rule.nodes[a], &mut wh[a * kk..(a + 1) * kk]);
        wh[a * kk..(a + 1) * kk].iter_mut().for_each(|v| *v *= rule.weights[a]);
    }
    // contract one axis at a time; the tensor keeps row-major layout
    let mut tensor = samples;
    let mut dims = vec![nn; n];
    for d in 0..n {
        let pre: usize = dims[..d].iter().product();
        let post: usize = dims[d + 1..].iter().product();
        let mut next = vec![0.0; pre * kk * post];
        for p in 0..pre {
            for a in 0..nn {
                let src = &tensor[(p * nn + a) * post..(p * nn + a + 1) * post];
                for k in 0..kk {
                    let c = wh[a * kk + k];
                    let dst = &mut next[(p * kk + k) * post..(p * kk + k + 1) * post];
                    for (o, s) in dst.iter_mut().zip(src) {
                        *o += c * s;
                    }
                }
            }
        }
        tensor = next;
        dims[d] = kk;
    }
    let mut out = HermiteCoefficients::zeros(n, k_max, BasisKind::Cartesian);
    for (ls, vs) in out.labels.iter().zip(out.values.iter_mut()) {
        for (l, v) in ls.iter().zip(vs.iter_mut()) {
            if let BasisLabel::Multi(a) = l {
                let idx = a.iter().fold(0, |acc, &ad| acc * kk + ad);
                *v = Complex64::new(tensor[idx], 0.0);
            }
        }
    }
    out.input_norm_sq = norm_sq;
    check_truncation(out)
}

/// Spherical-basis coefficients of a polar field: harmonic decomposition
/// followed by radial inner products against `r^m psi_i^{n/2+m-1}`.
pub fn hermite_analyze_polar(f: &PolarField, m_max: usize, k_max: usize) -> Result<HermiteCoefficients> {
    let m_max = m_max.min(k_max);
    let basis = build_basis(f.grid.n, m_max, f.grid.sphere.clone())?;
    let (re, im) = decompose_complex(f, &basis)?;
    let mut out = analyze_decomposition(&re, im.as_ref(), k_max)?;
    out.input_norm_sq = f.l2_norm().powi(2);
    check_truncation(out)
}

/// Radial inner products of an existing decomposition; leaves
/// `input_norm_sq` at the decomposition's own shell energy.
pub fn analyze_decomposition(re: &HarmonicDecomposition, im: Option<&HarmonicDecomposition>, k_max: usize) -> Result<HermiteCoefficients> {
    let n = re.n;
    let m_max = re.m_max.min(k_max);
    let rule = &re.radial;
    if rule.radial_power().is_none_or(|p| (p - (n as f64 - 1.0)).abs() > 1e-12) {
        return Err(Error::GridMismatch("decomposition must live on an r^{n-1} rule".into()));
    }
    let nr = rule.len();
    let mut tables: Vec<Vec<f64>> = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let ni = (k_max - m) / 2 + 1;
        let mut t = vec![0.0; nr * ni];
        for (ir, &r) in rule.nodes.iter().enumerate() {
            radial_hermite_fns_into(m, n, r, &mut t[ir * ni..(ir + 1) * ni]);
            t[ir * ni..(ir + 1) * ni].iter_mut().for_each(|v| *v *= rule.weights[ir]);
        }
        tables.push(t);
    }
    let mut out = HermiteCoefficients::zeros(n, k_max, BasisKind::Spherical { m_max });
    let mut energy = 0.0;
    for h in 0..re.labels.len() {
        let p_re = &re.profiles[h];
        energy += p_re.values.iter().zip(&rule.weights).map(|(v, w)| w * v * v).sum::<f64>();
        if let Some(im) = im {
            energy += im.profiles[h].values.iter().zip(&rule.weights).map(|(v, w)| w * v * v).sum::<f64>();
        }
    }
    for (ls, vs) in out.labels.iter().zip(out.values.iter_mut()) {
        for (l, v) in ls.iter().zip(vs.iter_mut()) {
            let BasisLabel::Spherical { m, j, i } = *l else { continue };
            let Some(h) = re.labels.iter().position(|&x| x == (m, j)) else {
                continue;
            };
            let ni = (k_max - m) / 2 + 1;
            let t = &tables[m];
            let dot = |p: &RadialProfile| (0..nr).map(|ir| p.values[ir] * t[ir * ni + i]).sum::<f64>();
            *v = Complex64::new(dot(&re.profiles[h]), im.map_or(0.0, |d| dot(&d.profiles[h])));
        }
    }
    out.input_norm_sq = energy;
    Ok(out)
}

/// A spectral multiplier `phi` on the levels `k` of `H` on R^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MultiplierFamily {
    Constant {
        value: f64,
    },
    /// `lambda^{i tau}`.
    ImaginaryPower {
        tau: f64,
    },
    /// `e^{-t lambda}`.
    Semigroup {
        t: f64,
    },
    /// `(1 - lambda/R)_+^delta`.
    RieszMean {
        radius: f64,
        delta: f64,
    },
    /// `(-1)^k`.
    Alternating,
    /// `phi(k) = values[k]`; levels past the table repeat the last entry.
    Tabulated {
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSpec {
    pub n: usize,
    #[serde(flatten)]
    pub family: MultiplierFamily,
}

impl MultiplierSpec {
    pub fn new(n: usize, family: MultiplierFamily) -> Self {
        MultiplierSpec { n, family }
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        (2 * k + self.n) as f64
    }

    pub fn at_level(&self, k: usize) -> Complex64 {
        let lambda = self.eigenvalue(k);
        match &self.family {
            MultiplierFamily::Constant { value } => Complex64::new(*value, 0.0),
            MultiplierFamily::ImaginaryPower { tau } => Complex64::from_polar(1.0, tau * lambda.ln()),
            MultiplierFamily::Semigroup { t } => Complex64::new((-t * lambda).exp(), 0.0),
            MultiplierFamily::RieszMean { radius, delta } => Complex64::new(riesz_factor(lambda, *radius, *delta), 0.0),
            MultiplierFamily::Alternating => Complex64::new(if k.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0),
            MultiplierFamily::Tabulated { values } => Complex64::new(values.get(k).or(values.last()).copied().unwrap_or(0.0), 0.0),
        }
    }

    /// `Delta^j phi(k)` for `k = 0..=k_scan`.
    pub fn differences(&self, j: usize, k_scan: usize) -> Vec<Complex64> {
        match &self.family {
            MultiplierFamily::ImaginaryPower { tau } if j > 0 => {
                (0..=k_scan).map(|k| imaginary_power_difference(*tau, self.n, j, k)).collect()
            }
            MultiplierFamily::Semigroup { t } => {
                let f = ((-2.0 * t).exp() - 1.0).powi(j as i32);
                (0..=k_scan).map(|k| self.at_level(k) * f).collect()
            }
            _ => {
                let mut v: Vec<Complex64> = (0..=k_scan + j).map(|k| self.at_level(k)).collect();
                for step in 0..j {
                    for k in 0..v.len() - 1 - step {
                        v[k] = v[k + 1] - v[k];
                    }
                }
                v.truncate(k_scan + 1);
                v
            }
        }
    }
}

/// Cardinal B-spline `M_j` (support `[0, j]`, unit mass).
fn cardinal_bspline(j: usize, x: f64) -> f64 {
    if x <= 0.0 || x >= j as f64 {
        return 0.0;
    }
    let mut binom = 1.0;
    let mut sum = 0.0;
    let mut fact = 1.0;
    for i in 1..j {
        fact *= i as f64;
    }
    for l in 0..=j {
        if l > 0 {
            binom = binom * (j - l + 1) as f64 / l as f64;
        }
        let d = x - l as f64;
        if d > 0.0 {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom * d.powi(j as i32 - 1);
        }
    }
    sum / fact
}

/// `Delta^j phi(k) = int_0^j phi^{(j)}(k+s) M_j(s) ds` for
/// `phi(s) = (2s+n)^{i tau}`: no cancellation at large `k`.
fn imaginary_power_difference(tau: f64, n: usize, j: usize, k: usize) -> Complex64 {
    let gl = gauss_legendre(16);
    let it = Complex64::new(0.0, tau);
    let mut falling = Complex64::new(1.0, 0.0);
    for i in 0..j {
        falling *= it - i as f64;
    }
    let coef = falling * 2f64.powi(j as i32);
    let mut acc = Complex64::new(0.0, 0.0);
    for piece in 0..j {
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let s = piece as f64 + 0.5 * (x + 1.0);
            let base = 2.0 * (k as f64 + s) + n as f64;
            let deriv = coef * (Complex64::new(base.ln(), 0.0) * (it - j as f64)).exp();
            acc += deriv * (0.5 * w * cardinal_bspline(j, s));
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierConditionReport {
    pub k_scan: usize,
    /// `C_j = max_{k <= K} |Delta^j phi(k)| (2k+n)^j`, `j = 0..=j_max`.
    pub constants: Vec<f64>,
    /// Same maxima over `k <= K/2`.
    pub half_scan_constants: Vec<f64>,
    /// Orders whose constant still grows with the scan range or exceeds the
    /// supplied bound.
    pub failed_orders: Vec<usize>,
    pub pass: bool,
}

/// Growth factor of `C_j` from `K/2` to `K` above which the sup is taken to diverge.
pub const MULTIPLIER_GROWTH_LIMIT: f64 = 1.5;

/// Scan of the difference condition `|Delta^j phi(k)| <= C_j (2k+n)^{-j}`.
pub fn check_multiplier_condition(
    spec: &MultiplierSpec,
    k_scan: usize,
    j_max: usize,
    bounds: Option<&[f64]>,
) -> Result<MultiplierConditionReport> {
    if j_max < 1 || k_scan < 2 {
        return Err(Error::InvalidParameter("need j_max >= 1 and K_scan >= 2".into()));
    }
    let mut constants = Vec::with_capacity(j_max + 1);
    let mut half = Vec::with_capacity(j_max + 1);
    let mut failed = Vec::new();
    for j in 0..=j_max {
        let d = spec.differences(j, k_scan);
        let scaled: Vec<f64> = d
            .iter()
            .enumerate()
            .map(|(k, v)| v.norm() * spec.eigenvalue(k).powi(j as i32))
            .collect();
        let c = scaled.iter().copied().fold(0.0, f64::max);
        let ch = scaled[..=k_scan / 2].iter().copied().fold(0.0, f64::max);
        let grows = c > MULTIPLIER_GROWTH_LIMIT * ch;
        let over = bounds.and_then(|b| b.get(j)).is_some_and(|b| c > *b);
        if grows || over {
            failed.push(j);
        }
        constants.push(c);
        half.push(ch);
    }
    Ok(MultiplierConditionReport {
        k_scan,
        constants,
        half_scan_constants: half,
        pass: failed.is_empty(),
        failed_orders: failed,
    })
}

/// `c -> phi(2k+n) c` levelwise.
pub fn apply_multiplier(spec: &MultiplierSpec, c: &HermiteCoefficients) -> Result<HermiteCoefficients> {
    if spec.n != c.n {
        return Err(Error::GridMismatch(format!("multiplier for n = {} applied in n = {}", spec.n, c.n)));
    }
    Ok(c.map_levels(|k| spec.at_level(k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    /// Quadrature against the integral kernel.
    Kernel,
    /// Diagonal action on Hermite coefficients.
    Spectral,
}

/// Truncation of the spectral paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralOptions {
    pub m_max: usize,
    pub k_max: usize,
}

impl SpectralOptions {
    pub fn for_dimension(n: usize) -> Self {
        let k_max = if n == 2 { 40 } else { 24 };
        SpectralOptions { m_max: k_max, k_max }
    }
}

/// `int K(x, y) f(y) dy` at each output point, by the field's own polar rule.
pub fn kernel_quadrature<K: Fn(&[f64], &[f64]) -> f64 + Sync>(kernel: K, f: &PolarField, points: &[Vec<f64>]) -> Vec<Complex64> {
    let g = &f.grid;
    let ns = g.n_sphere();
    let ys = g.points();
    let weights: Vec<f64> = (0..g.len()).map(|i| g.weight(i / ns, i % ns)).collect();
    points
        .par_iter()
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, y) in ys.iter().enumerate() {
                let fv = Complex64::new(f.re[i], f.im.as_ref().map_or(0.0, |v| v[i]));
                if fv.re != 0.0 || fv.im != 0.0 {
                    acc += fv * (weights[i] * kernel(x, y));
                }
            }
            acc
        })
        .collect()
}

fn spectral_apply(spec: &MultiplierSpec, f: &PolarField, opts: SpectralOptions) -> Result<PolarField> {
    let c = hermite_analyze_polar(f, opts.m_max, opts.k_max)?;
    apply_multiplier(spec, &c)?.to_field(f.grid.clone())
}

/// `phi(H) f` on the field's grid by the spectral path.
pub fn hermite_multiplier(spec: &MultiplierSpec, f: &PolarField, opts: SpectralOptions) -> Result<PolarField> {
    spectral_apply(spec, f, opts)
}

/// `e^{-tH} f` on the field's grid.
pub fn hermite_semigroup(t: f64, f: &PolarField, path: Path, opts: SpectralOptions) -> Result<PolarField> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    match path {
        Path::Spectral => spectral_apply(&MultiplierSpec::new(f.grid.n, MultiplierFamily::Semigroup { t }), f, opts),
        Path::Kernel => {
            let pts = f.grid.points();
            let vals = hermite_semigroup_at(t, f, &pts)?;
            complex_field(f.grid.clone(), vals)
        }
    }
}

/// `e^{-tH} f` at arbitrary points by Mehler-kernel quadrature.
pub fn hermite_semigroup_at(t: f64, f: &PolarField, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    Ok(kernel_quadrature(
        |x, y| mehler_kernel(t, x, y, MehlerForm::Closed).unwrap_or(0.0),
        f,
        points,
    ))
}

/// `S_R^delta f` on the field's grid.
pub fn bochner_riesz(radius: f64, delta: f64, f: &PolarField, path: Path, opts: SpectralOptions) -> Result<PolarField> {
    if !(radius > 0.0) || !(delta >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Riesz means need R > 0, delta >= 0, got ({radius}, {delta})"
        )));
    }
    match path {
        Path::Spectral => {
            let spec = MultiplierSpec::new(f.grid.n, MultiplierFamily::RieszMean { radius, delta });
            spectral_apply(&spec, f, opts)
        }
        Path::Kernel => {
            let pts = f.grid.points();
            complex_field(f.grid.clone(), bochner_riesz_at(radius, delta, f, &pts))
        }
    }
}

/// `S_R^delta f` at arbitrary points by kernel quadrature.
pub fn bochner_riesz_at(radius: f64, delta: f64, f: &PolarField, points: &[Vec<f64>]) -> Vec<Complex64> {
    kernel_quadrature(|x, y| bochner_riesz_kernel(radius, delta, x, y), f, points)
}

fn check_radial_power(rule: &QuadratureRule, power: f64, what: &str) -> Result<()> {
    match rule.radial_power() {
        Some(p) if (p - power).abs() < 1e-12 => Ok(()),
        _ => Err(Error::GridMismatch(format!("{what} needs a radial rule against r^{power} dr"))),
    }
}

/// `T_t^alpha g(r) = int K_t^alpha(r, s) g(s) dmu_alpha(s)` at the nodes of `g`.
pub fn laguerre_semigroup(t: f64, alpha: f64, g: &RadialProfile) -> Result<RadialProfile> {
    let values = laguerre_semigroup_at(t, alpha, g, g.nodes())?;
    RadialProfile::new(g.rule.clone(), values)
}

/// `T_t^alpha g` at arbitrary radii.
pub fn laguerre_semigroup_at(t: f64, alpha: f64, g: &RadialProfile, r_out: &[f64]) -> Result<Vec<f64>> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if !(alpha > -1.0) {
        return Err(Error::InvalidLaguerreType(alpha));
    }
    check_radial_power(&g.rule, 2.0 * alpha + 1.0, "Laguerre semigroup")?;
    let rule = &g.rule;
    Ok(r_out
        .par_iter()
        .map(|&r| {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .zip(&g.values)
                .map(|((&s, &w), &v)| w * v * laguerre_kernel_unchecked(t, alpha, r, s))
                .sum()
        })
        .collect())
}

/// Radial operators `T_m g(r) = int omega_{n-2} K_m(r, s) g(s) s^{n-1} ds`
/// for `m = 0..=m_max` on the nodes of `rule`.
#[derive(Debug, Clone)]
pub struct ComponentOperators {
    pub rule: Arc<QuadratureRule>,
    /// `matrices[m][i * N + j] = omega_{n-2} K_m(r_i, s_j) w_j`.
    matrices: Vec<Vec<f64>>,
}

impl ComponentOperators {
    pub fn new(k0: &KernelK0, m_max: usize, rule: Arc<QuadratureRule>, jacobi: &QuadratureRule) -> Result<Self> {
        let n = k0.n();
        check_radial_power(&rule, n as f64 - 1.0, "component operator")?;
        let tables = component_kernel_tables(k0, m_max, &rule.nodes, &rule.nodes, jacobi);
        let c = funk_hecke_constant(n);
        let nr = rule.len();
        let matrices = tables
            .into_iter()
            .map(|t| {
                let mut v = t.values;
                for i in 0..nr {
                    for j in 0..nr {
                        v[i * nr + j] *= c * rule.weights[j];
                    }
                }
                v
            })
            .collect();
        Ok(ComponentOperators { rule, matrices })
    }

    pub fn m_max(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn apply(&self, m: usize, g: &RadialProfile) -> Result<RadialProfile> {
        if g.rule.nodes != self.rule.nodes {
            return Err(Error::GridMismatch("profile and operator use different radial rules".into()));
        }
        let mat = self
            .matrices
            .get(m)
            .ok_or_else(|| Error::InvalidParameter(format!("degree {m} above the tabulated {}", self.m_max())))?;
        let nr = self.rule.len();
        let values = (0..nr)
            .map(|i| mat[i * nr..(i + 1) * nr].iter().zip(&g.values).map(|(a, b)| a * b).sum())
            .collect();
        RadialProfile::new(g.rule.clone(), values)
    }
}

/// One component operator `T_m` applied to `g`.
pub fn component_operator(k0: &KernelK0, m: usize, g: &RadialProfile, jacobi: &QuadratureRule) -> Result<RadialProfile> {
    let ops = ComponentOperators::new(k0, m, g.rule.clone(), jacobi)?;
    ops.apply(m, g)
}

/// `Tf = sum_{m,j} (T_m f_{m,j}) Y_{m,j}`: decompose, apply the component
/// operators, resynthesize.
pub fn apply_via_components(k0: &KernelK0, f: &PolarField, basis: &SphericalHarmonicBasis, jacobi: &QuadratureRule) -> Result<PolarField> {
    let ops = ComponentOperators::new(k0, basis.m_max, f.grid.radial.clone(), jacobi)?;
    apply_decomposed(&ops, f, basis)
}

/// As [`apply_via_components`] with prebuilt operators.
pub fn apply_decomposed(ops: &ComponentOperators, f: &PolarField, basis: &SphericalHarmonicBasis) -> Result<PolarField> {
    let (re, im) = decompose_complex(f, basis)?;
    let map = |d: &HarmonicDecomposition| -> Result<HarmonicDecomposition> {
        let mut out = d.clone();
        for (p, &(m, _)) in out.profiles.iter_mut().zip(&d.labels) {
            *p = ops.apply(m, p)?;
        }
        Ok(out)
    };
    let re_out = resynthesize(&map(&re)?, basis, f.grid.clone())?;
    let im_out = im
        .map(|d| map(&d).and_then(|d| resynthesize(&d, basis, f.grid.clone())))
        .transpose()?;
    PolarField::new(f.grid.clone(), re_out.re, im_out.map(|p| p.re))
}
