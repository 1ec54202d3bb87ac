//! Real spherical harmonics on S^1 and S^2, the Funk-Hecke transform, and
//! decomposition of polar fields into radial profiles `f_{m,j}`.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{PolarField, PolarGrid, RadialProfile};
use crate::quadrature::{sphere_area, QuadratureRule, SphereRule};
use crate::specfun::{bessel_i, ln_gamma, ultraspherical_into, ultraspherical_p};

/// Dimension `d(m)` of the degree-`m` spherical harmonics on `S^{n-1}`.
pub fn degree_dim(n: usize, m: usize) -> usize {
    fn binom(a: usize, b: usize) -> usize {
        if b > a {
            return 0;
        }
        let b = b.min(a - b);
        (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1))
    }
    if n < 2 {
        return 0;
    }
    let lower = if m >= 2 { binom(m + n - 3, n - 1) } else { 0 };
    binom(m + n - 1, n - 1) - lower
}

/// `(m, j)` labels in basis order: `m` ascending, then `j = 0..d(m)`.
pub fn harmonic_labels(n: usize, m_max: usize) -> Vec<(usize, usize)> {
    (0..=m_max).flat_map(|m| (0..degree_dim(n, m)).map(move |j| (m, j))).collect()
}

/// All real orthonormal harmonics of degree `<= m_max` at the unit vector
/// `omega`, in [`harmonic_labels`] order.
///
/// n = 2: `1/sqrt(2 pi)`, then `cos(m theta)/sqrt(pi)`, `sin(m theta)/sqrt(pi)`.
/// n = 3: within degree `m`, orders `-m..=m` with sines for negative orders.
pub fn eval_harmonics(n: usize, m_max: usize, omega: &[f64], out: &mut Vec<f64>) -> Result<()> {
    out.clear();
    match n {
        2 => {
            out.push(1.0 / (2.0 * PI).sqrt());
            let c = 1.0 / PI.sqrt();
            let (x, y) = (omega[0], omega[1]);
            let (mut re, mut im) = (1.0, 0.0);
            for _ in 1..=m_max {
                (re, im) = (re * x - im * y, re * y + im * x);
                out.push(c * re);
                out.push(c * im);
            }
            Ok(())
        }
        3 => {
            let (x, y, z) = (omega[0], omega[1], omega[2]);
            // powers (x + i y)^m carry the sin^m(theta) factor
            let mut pow_re = vec![1.0; m_max + 1];
            let mut pow_im = vec![0.0; m_max + 1];
            for m in 1..=m_max {
                pow_re[m] = pow_re[m - 1] * x - pow_im[m - 1] * y;
                pow_im[m] = pow_re[m - 1] * y + pow_im[m - 1] * x;
            }
            // q[m][l]: normalized associated Legendre divided by sin^m(theta)
            let mut q = vec![vec![0.0; m_max + 1]; m_max + 1];
            let mut b = 1.0;
            for m in 0..=m_max {
                if m > 0 {
                    b *= ((2 * m - 1) as f64 / (2 * m) as f64).sqrt();
                }
                let s2 = if m > 0 { 2f64.sqrt() } else { 1.0 };
                let qmm = s2 * ((2 * m + 1) as f64 / (4.0 * PI)).sqrt() * b;
                q[m][m] = qmm;
                if m < m_max {
                    q[m][m + 1] = ((2 * m + 3) as f64).sqrt() * z * qmm;
                }
                for l in m + 2..=m_max {
                    let (lf, mf) = (l as f64, m as f64);
                    let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                    let bb = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
                    q[m][l] = a * (z * q[m][l - 1] - bb * q[m][l - 2]);
                }
            }
            #[allow(clippy::needless_range_loop)]
            for l in 0..=m_max {
                for mm in (1..=l).rev() {
                    out.push(q[mm][l] * pow_im[mm]);
                }
                out.push(q[0][l]);
                for mm in 1..=l {
                    out.push(q[mm][l] * pow_re[mm]);
                }
            }
            Ok(())
        }
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// Reproducing kernel of degree `m`: `(d(m)/omega_{n-1}) P_m(u)`.
pub fn zonal_kernel(n: usize, m: usize, u: f64) -> Result<f64> {
    Ok(degree_dim(n, m) as f64 / sphere_area(n) * ultraspherical_p(m, n, u)?)
}

/// Harmonic values tabulated on the nodes of a sphere rule.
#[derive(Debug, Clone)]
pub struct SphericalHarmonicBasis {
    pub n: usize,
    pub m_max: usize,
    pub rule: Arc<SphereRule>,
    pub labels: Vec<(usize, usize)>,
    /// `table[h * rule.len() + i] = Y_h(omega_i)`.
    table: Vec<f64>,
    offsets: Vec<usize>,
}

impl SphericalHarmonicBasis {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn d(&self, m: usize) -> usize {
        degree_dim(self.n, m)
    }

    /// Flat index of `Y_{m,j}`.
    pub fn position(&self, m: usize, j: usize) -> Option<usize> {
        (m <= self.m_max && j < self.d(m)).then(|| self.offsets[m] + j)
    }

    pub fn degree_range(&self, m: usize) -> std::ops::Range<usize> {
        self.offsets[m]..self.offsets[m] + self.d(m)
    }

    pub fn row(&self, h: usize) -> &[f64] {
        let k = self.rule.len();
        &self.table[h * k..(h + 1) * k]
    }

    pub fn value(&self, h: usize, node: usize) -> f64 {
        self.table[h * self.rule.len() + node]
    }

    pub fn eval_at(&self, omega: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        eval_harmonics(self.n, self.m_max, omega, &mut out).expect("dimension checked at construction");
        out
    }

    /// Discrete Gram matrix under the paired rule, row-major.
    pub fn gram(&self) -> Vec<f64> {
        let h = self.len();
        let w = &self.rule.weights;
        let mut g = vec![0.0; h * h];
        for a in 0..h {
            for b in a..h {
                let v: f64 = self.row(a).iter().zip(self.row(b)).zip(w).map(|((x, y), w)| x * y * w).sum();
                g[a * h + b] = v;
                g[b * h + a] = v;
            }
        }
        g
    }
}

pub fn build_basis(n: usize, m_max: usize, rule: Arc<SphereRule>) -> Result<SphericalHarmonicBasis> {
    if rule.n != n {
        return Err(Error::GridMismatch(format!("sphere rule for n = {} used with n = {n}", rule.n)));
    }
    if rule.order < 2 * m_max {
        return Err(Error::InsufficientRuleOrder {
            need: 2 * m_max,
            have: rule.order,
        });
    }
    let labels = harmonic_labels(n, m_max);
    let k = rule.len();
    let mut table = vec![0.0; labels.len() * k];
    let mut buf = Vec::with_capacity(labels.len());
    for i in 0..k {
        eval_harmonics(n, m_max, rule.point(i), &mut buf)?;
        for (h, v) in buf.iter().enumerate() {
            table[h * k + i] = *v;
        }
    }
    let mut offsets = Vec::with_capacity(m_max + 1);
    let mut acc = 0;
    for m in 0..=m_max {
        offsets.push(acc);
        acc += degree_dim(n, m);
    }
    Ok(SphericalHarmonicBasis {
        n,
        m_max,
        rule,
        labels,
        table,
        offsets,
    })
}

/// Radial profiles `f_{m,j}(r) = int f(r w) Y_{m,j}(w) dw`.
#[derive(Debug, Clone)]
pub struct HarmonicDecomposition {
    pub n: usize,
    pub m_max: usize,
    pub labels: Vec<(usize, usize)>,
    pub profiles: Vec<RadialProfile>,
    pub radial: Arc<QuadratureRule>,
}

impl HarmonicDecomposition {
    pub fn zeros(n: usize, m_max: usize, radial: Arc<QuadratureRule>) -> Self {
        let labels = harmonic_labels(n, m_max);
        let profiles = labels.iter().map(|_| RadialProfile::zeros(radial.clone())).collect();
        HarmonicDecomposition {
            n,
            m_max,
            labels,
            profiles,
            radial,
        }
    }

    pub fn get(&self, m: usize, j: usize) -> Option<&RadialProfile> {
        self.labels.iter().position(|&l| l == (m, j)).map(|h| &self.profiles[h])
    }

    /// `sum_{m,j} f_{m,j}(r_i)^2` per radial node.
    pub fn shell_energy(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.radial.len()];
        for p in &self.profiles {
            for (o, v) in out.iter_mut().zip(&p.values) {
                *o += v * v;
            }
        }
        out
    }
}

/// Sphere quadrature of `f(r_i, .)` against every basis harmonic. Uses the
/// real part of complex fields.
pub fn decompose(f: &PolarField, basis: &SphericalHarmonicBasis) -> Result<HarmonicDecomposition> {
    decompose_values(&f.grid, &f.re, basis)
}

/// Real and imaginary parts decomposed separately.
pub fn decompose_complex(f: &PolarField, basis: &SphericalHarmonicBasis) -> Result<(HarmonicDecomposition, Option<HarmonicDecomposition>)> {
    let re = decompose_values(&f.grid, &f.re, basis)?;
    let im = f.im.as_ref().map(|v| decompose_values(&f.grid, v, basis)).transpose()?;
    Ok((re, im))
}

fn decompose_values(grid: &PolarGrid, values: &[f64], basis: &SphericalHarmonicBasis) -> Result<HarmonicDecomposition> {
    if *grid.sphere != *basis.rule {
        return Err(Error::GridMismatch("field and basis use different sphere rules".into()));
    }
    let ns = grid.n_sphere();
    let nr = grid.n_radial();
    let w = &basis.rule.weights;
    let rows: Vec<Vec<f64>> = (0..nr)
        .into_par_iter()
        .map(|ir| {
            let shell = &values[ir * ns..(ir + 1) * ns];
            let weighted: Vec<f64> = shell.iter().zip(w).map(|(f, w)| f * w).collect();
            (0..basis.len())
                .map(|h| basis.row(h).iter().zip(&weighted).map(|(y, fw)| y * fw).sum())
                .collect()
        })
        .collect();
    let profiles = (0..basis.len())
        .map(|h| RadialProfile {
            rule: grid.radial.clone(),
            values: rows.iter().map(|row| row[h]).collect(),
        })
        .collect();
    Ok(HarmonicDecomposition {
        n: basis.n,
        m_max: basis.m_max,
        labels: basis.labels.clone(),
        profiles,
        radial: grid.radial.clone(),
    })
}

/// Pointwise `sum_{m,j} f_{m,j}(r) Y_{m,j}(omega)` on the grid.
pub fn resynthesize(d: &HarmonicDecomposition, basis: &SphericalHarmonicBasis, grid: Arc<PolarGrid>) -> Result<PolarField> {
    if *grid.sphere != *basis.rule || grid.radial.nodes != d.radial.nodes {
        return Err(Error::GridMismatch("decomposition, basis and grid disagree".into()));
    }
    if d.labels.len() > basis.len() {
        return Err(Error::GridMismatch("decomposition has more harmonics than the basis".into()));
    }
    let ns = grid.n_sphere();
    let re: Vec<f64> = (0..grid.n_radial())
        .into_par_iter()
        .flat_map_iter(|ir| {
            let mut shell = vec![0.0; ns];
            for (h, p) in d.profiles.iter().enumerate() {
                let c = p.values[ir];
                if c != 0.0 {
                    for (s, y) in shell.iter_mut().zip(basis.row(h)) {
                        *s += c * y;
                    }
                }
            }
            shell
        })
        .collect();
    PolarField::new(grid, re, None)
}

/// `lambda_m(F) = int F(t) P_m(t) (1-t^2)^{(n-3)/2} dt` on a Funk-Hecke rule.
pub fn funk_hecke_coefficient<F: Fn(f64) -> f64>(f: F, m: usize, n: usize, rule: &QuadratureRule) -> Result<f64> {
    let mut p = vec![0.0; m + 1];
    let mut acc = 0.0;
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        ultraspherical_into(n, u, &mut p);
        acc += w * f(u) * p[m];
    }
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(acc)
}

/// `omega_{n-2}`, the factor that turns `lambda_m(F)` into the eigenvalue of
/// the zonal operator `Y -> int F(w.w') Y(w') dw'`.
pub fn funk_hecke_constant(n: usize) -> f64 {
    sphere_area(n - 1)
}

/// Closed form of `lambda_m(e^{z t})`:
/// `Gamma(1/2) Gamma((n-1)/2) (z/2)^{1-n/2} I_{n/2+m-1}(z)`.
pub fn exponential_coefficient(z: f64, m: usize, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let nf = n as f64;
    let pre = (ln_gamma(0.5) + ln_gamma((nf - 1.0) / 2.0) + (1.0 - nf / 2.0) * (z / 2.0).ln()).exp();
    Ok(pre * bessel_i(nf / 2.0 + m as f64 - 1.0, z)?)
}

/// `e^x - sum_{j<m} x^j/j!` summed from the `x^m/m!` term up.
///
/// Polynomials of degree `< m` are annihilated by `lambda_m`, so quadrature of
/// this remainder gives the same value as quadrature of `e^x` without the
/// cancellation that swamps `lambda_m(e^{zt}) ~ z^m` at small `z`.
pub fn exp_remainder(x: f64, m: usize) -> f64 {
    if m == 0 {
        return x.exp();
    }
    let mut term = (1..=m).fold(1.0, |acc, j| acc * x / j as f64);
    let mut sum = term;
    let mut j = m;
    loop {
        j += 1;
        term *= x / j as f64;
        sum += term;
        if (j as f64 > x.abs() && term.abs() <= 1e-17 * sum.abs()) || j > m + 400 {
            break;
        }
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunkHeckeReport {
    /// `max |LHS - omega_{n-2} Y(omega) lambda_m(F)|`.
    pub max_residual: f64,
    /// Largest `|RHS|` seen, for scale.
    pub max_reference: f64,
    pub samples: usize,
}

/// Compares sphere quadrature of `int F(w.w') Y_{m,j}(w') dw'` against
/// `omega_{n-2} Y_{m,j}(w) lambda_m(F)` from the independent Jacobi rule, at
/// each sample direction and every basis harmonic.
pub fn verify_funk_hecke<F: Fn(f64) -> f64 + Sync>(
    f: F,
    basis: &SphericalHarmonicBasis,
    jacobi: &QuadratureRule,
    samples: &[Vec<f64>],
) -> Result<FunkHeckeReport> {
    let n = basis.n;
    let lambdas: Vec<f64> = (0..=basis.m_max)
        .map(|m| funk_hecke_coefficient(&f, m, n, jacobi))
        .collect::<Result<_>>()?;
    let c = funk_hecke_constant(n);
    let rule = &basis.rule;
    let mut max_residual: f64 = 0.0;
    let mut max_reference: f64 = 0.0;
    for omega in samples {
        let y_here = basis.eval_at(omega);
        let fw: Vec<f64> = (0..rule.len())
            .map(|i| {
                let u: f64 = rule.point(i).iter().zip(omega).map(|(a, b)| a * b).sum();
                rule.weights[i] * f(u.clamp(-1.0, 1.0))
            })
            .collect();
        for (h, &(m, _)) in basis.labels.iter().enumerate() {
            let lhs: f64 = basis.row(h).iter().zip(&fw).map(|(y, a)| y * a).sum();
            let rhs = c * y_here[h] * lambdas[m];
            max_residual = max_residual.max((lhs - rhs).abs());
            max_reference = max_reference.max(rhs.abs());
        }
    }
    Ok(FunkHeckeReport {
        max_residual,
        max_reference,
        samples: samples.len(),
    })
}

/// `((-1)^m / (2^m ((n-1)/2)_m)) (d/dt)^m (1-t^2)^{(n-3)/2+m}` by Leibniz on
/// `(1-t)^g (1+t)^g`, for `-1 < t < 1`.
pub fn rodrigues_rhs(m: usize, n: usize, t: f64) -> f64 {
    let g = (n as f64 - 3.0) / 2.0 + m as f64;
    let falling = |j: usize| (0..j).fold(1.0, |acc, i| acc * (g - i as f64));
    let mut binom = 1.0;
    let mut sum = 0.0;
    for j in 0..=m {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let left = sign * falling(j) * (1.0 - t).powf(g - j as f64);
        let right = falling(m - j) * (1.0 + t).powf(g - (m - j) as f64);
        sum += binom * left * right;
        binom = binom * (m - j) as f64 / (j + 1) as f64;
    }
    let poch = (0..m).fold(1.0, |acc, i| acc * ((n as f64 - 1.0) / 2.0 + i as f64));
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * sum / (2f64.powi(m as i32) * poch)
}
