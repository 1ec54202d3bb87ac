//! Sampled functions: radial profiles and fields on polar product grids.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{radial_rule, sphere_rule, QuadratureRule, RadialMeasure, SphereRule};

/// A function of `r >= 0` sampled at the nodes of a radial rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub rule: Arc<QuadratureRule>,
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(rule: Arc<QuadratureRule>, values: Vec<f64>) -> Result<Self> {
        if rule.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} values on a {}-node rule",
                values.len(),
                rule.len()
            )));
        }
        Ok(RadialProfile { rule, values })
    }

    pub fn from_fn<F: FnMut(f64) -> f64>(rule: Arc<QuadratureRule>, mut f: F) -> Self {
        let values = rule.nodes.iter().map(|&r| f(r)).collect();
        RadialProfile { rule, values }
    }

    pub fn zeros(rule: Arc<QuadratureRule>) -> Self {
        let values = vec![0.0; rule.len()];
        RadialProfile { rule, values }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.rule.nodes
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `int f(r) r^power dr` with the rule's own measure.
    pub fn integral(&self) -> f64 {
        self.values.iter().zip(&self.rule.weights).map(|(v, w)| v * w).sum()
    }

    /// `(int |f|^p dmu)^{1/p}` against the rule's measure.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let s: f64 = self.values.iter().zip(&self.rule.weights).map(|(v, w)| w * v.abs().powf(p)).sum();
        s.powf(1.0 / p)
    }

    pub fn map<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> RadialProfile {
        let values = self.nodes().iter().zip(&self.values).map(|(&r, &v)| f(r, v)).collect();
        RadialProfile {
            rule: self.rule.clone(),
            values,
        }
    }

    pub fn max_abs_diff(&self, other: &RadialProfile) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Radial nodes times sphere nodes in R^n, `n` in {2, 3}.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    pub n: usize,
    /// Measure `r^{n-1} dr`.
    pub radial: Arc<QuadratureRule>,
    pub sphere: Arc<SphereRule>,
}

impl PolarGrid {
    pub fn new(n: usize, radial_order: usize, sphere_order: usize, r_max: f64) -> Result<Self> {
        let radial = radial_rule(radial_order, RadialMeasure::Dimension(n), r_max)?;
        let sphere = sphere_rule(n, sphere_order)?;
        Ok(PolarGrid {
            n,
            radial: Arc::new(radial),
            sphere: Arc::new(sphere),
        })
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.sphere.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_radial(&self) -> usize {
        self.radial.len()
    }

    pub fn n_sphere(&self) -> usize {
        self.sphere.len()
    }

    /// Flat index of `(radial node, sphere node)`.
    pub fn index(&self, ir: usize, is: usize) -> usize {
        ir * self.sphere.len() + is
    }

    pub fn point(&self, ir: usize, is: usize) -> Vec<f64> {
        let r = self.radial.nodes[ir];
        self.sphere.point(is).iter().map(|w| r * w).collect()
    }

    /// Quadrature weight of a grid point for `int dx` over R^n.
    pub fn weight(&self, ir: usize, is: usize) -> f64 {
        self.radial.weights[ir] * self.sphere.weights[is]
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.len());
        for ir in 0..self.n_radial() {
            for is in 0..self.n_sphere() {
                out.push(self.point(ir, is));
            }
        }
        out
    }
}

/// Complex-valued function on a [`PolarGrid`], stored row-major by radius.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField {
    pub grid: Arc<PolarGrid>,
    pub re: Vec<f64>,
    /// Imaginary part; `None` for real fields.
    pub im: Option<Vec<f64>>,
}

impl PolarField {
    pub fn new(grid: Arc<PolarGrid>, re: Vec<f64>, im: Option<Vec<f64>>) -> Result<Self> {
        if re.len() != grid.len() || im.as_ref().is_some_and(|v| v.len() != grid.len()) {
            return Err(Error::GridMismatch("field length differs from grid size".into()));
        }
        Ok(PolarField { grid, re, im })
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: Arc<PolarGrid>, f: F) -> Self {
        let mut re = Vec::with_capacity(grid.len());
        let mut x = vec![0.0; grid.n];
        for ir in 0..grid.n_radial() {
            let r = grid.radial.nodes[ir];
            for is in 0..grid.n_sphere() {
                for (xi, wi) in x.iter_mut().zip(grid.sphere.point(is)) {
                    *xi = r * wi;
                }
                re.push(f(&x));
            }
        }
        PolarField { grid, re, im: None }
    }

    /// `f(r, omega)` for separable inputs.
    pub fn from_polar_fn<F: Fn(f64, &[f64]) -> f64>(grid: Arc<PolarGrid>, f: F) -> Self {
        let mut re = Vec::with_capacity(grid.len());
        for ir in 0..grid.n_radial() {
            let r = grid.radial.nodes[ir];
            for is in 0..grid.n_sphere() {
                re.push(f(r, grid.sphere.point(is)));
            }
        }
        PolarField { grid, re, im: None }
    }

    pub fn zeros(grid: Arc<PolarGrid>) -> Self {
        let re = vec![0.0; grid.len()];
        PolarField { grid, re, im: None }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_none()
    }

    pub fn abs2(&self, i: usize) -> f64 {
        let im = self.im.as_ref().map_or(0.0, |v| v[i]);
        self.re[i] * self.re[i] + im * im
    }

    /// `int_{S^{n-1}} |f(r_i w)|^2 dw` for every radial node.
    pub fn shell_l2_squared(&self) -> Vec<f64> {
        let g = &self.grid;
        (0..g.n_radial())
            .map(|ir| (0..g.n_sphere()).map(|is| g.sphere.weights[is] * self.abs2(g.index(ir, is))).sum())
            .collect()
    }

    pub fn l2_norm(&self) -> f64 {
        self.shell_l2_squared()
            .iter()
            .zip(&self.grid.radial.weights)
            .map(|(s, w)| s * w)
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, c: f64) -> PolarField {
        PolarField {
            grid: self.grid.clone(),
            re: self.re.iter().map(|v| c * v).collect(),
            im: self.im.as_ref().map(|v| v.iter().map(|x| c * x).collect()),
        }
    }

    /// `max |f - g|` and `max |g|` over the grid.
    pub fn max_diff(&self, other: &PolarField) -> (f64, f64) {
        let mut diff: f64 = 0.0;
        let mut size: f64 = 0.0;
        for i in 0..self.re.len() {
            let a_im = self.im.as_ref().map_or(0.0, |v| v[i]);
            let b_im = other.im.as_ref().map_or(0.0, |v| v[i]);
            diff = diff.max((self.re[i] - other.re[i]).hypot(a_im - b_im));
            size = size.max(other.re[i].hypot(b_im));
        }
        (diff, size)
    }
}
