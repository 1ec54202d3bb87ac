//! Randomized lower bounds for mixed-norm operator norms.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::gfun::{g_k, GMethod};
use super::mixed_norm;
use crate::error::{Error, Result};
use crate::grid::{PolarField, PolarGrid};
use crate::harmonics::{build_basis, decompose, degree_dim};
use crate::kernels::riesz_factor;
use crate::operators::{analyze_decomposition, BasisKind, BasisLabel, HermiteCoefficients, MultiplierSpec};

/// A band-limited test function: its Hermite expansion and its samples.
#[derive(Debug, Clone)]
pub struct Trial {
    pub id: String,
    pub coefficients: HermiteCoefficients,
    pub field: PolarField,
}

/// Composition of the trial set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSetOptions {
    pub k_max: usize,
    /// Random coefficient vectors over all levels.
    pub random: usize,
    /// Random radial profiles times one harmonic.
    pub products: usize,
    /// Centers of Gaussian bumps of width `bump_width`, projected onto
    /// levels `<= k_max`.
    pub bump_centers: Vec<f64>,
    pub bump_width: f64,
    pub seed: u64,
}

impl TrialSetOptions {
    pub fn new(k_max: usize, seed: u64) -> Self {
        TrialSetOptions {
            k_max,
            random: 4,
            products: 4,
            bump_centers: vec![0.0, 1.0],
            bump_width: 0.5,
            seed,
        }
    }
}

/// `Phi_0`, random expansions, radial-times-harmonic products and bumps,
/// in that order; all sampled on `grid`.
pub fn build_trial_set(grid: Arc<PolarGrid>, opts: &TrialSetOptions) -> Result<Vec<Trial>> {
    let n = grid.n;
    let k_max = opts.k_max;
    let kind = BasisKind::Spherical { m_max: k_max };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut coeffs: Vec<(String, HermiteCoefficients)> = Vec::new();

    let mut phi0 = HermiteCoefficients::zeros(n, k_max, kind);
    phi0.set(&BasisLabel::Spherical { m: 0, j: 0, i: 0 }, Complex64::new(1.0, 0.0))?;
    coeffs.push(("phi0".into(), phi0));

    for t in 0..opts.random {
        let mut c = HermiteCoefficients::zeros(n, k_max, kind);
        for level in c.values.iter_mut() {
            for v in level.iter_mut() {
                *v = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            }
        }
        coeffs.push((format!("random-{t}"), c));
    }

    for t in 0..opts.products {
        let m = rng.random_range(0..=k_max.min(12));
        let j = rng.random_range(0..degree_dim(n, m));
        let mut c = HermiteCoefficients::zeros(n, k_max, kind);
        for i in 0..=(k_max - m) / 2 {
            c.set(&BasisLabel::Spherical { m, j, i }, Complex64::new(rng.random_range(-1.0..1.0), 0.0))?;
        }
        coeffs.push((format!("product-{t}-m{m}"), c));
    }

    if !opts.bump_centers.is_empty() {
        let basis = build_basis(n, k_max, grid.sphere.clone())?;
        for &r0 in &opts.bump_centers {
            let w2 = 2.0 * opts.bump_width * opts.bump_width;
            let f = PolarField::from_fn(grid.clone(), |x| {
                let d2: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| if i == 0 { (v - r0).powi(2) } else { v * v })
                    .sum();
                (-d2 / w2).exp()
            });
            let d = decompose(&f, &basis)?;
            coeffs.push((format!("bump-{r0:.4}"), analyze_decomposition(&d, None, k_max)?));
        }
    }

    coeffs
        .into_par_iter()
        .map(|(id, mut c)| {
            c.input_norm_sq = c.norm_sq();
            let field = c.to_field(grid.clone())?;
            Ok(Trial {
                id,
                coefficients: c,
                field,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub p: f64,
    pub max_ratio: f64,
    pub argmax: String,
    /// `(trial id, ||Tf|| / ||f||)` in trial order.
    pub ratios: Vec<(String, f64)>,
}

/// `max ||T f||_{L^{p,2}} / ||f||_{L^{p,2}}` over the trials: a lower bound
/// for the operator norm.
pub fn operator_norm_probe<F>(apply: F, p: f64, trials: &[Trial]) -> Result<ProbeResult>
where
    F: Fn(&Trial) -> Result<PolarField> + Sync,
{
    if trials.is_empty() {
        return Err(Error::InvalidParameter("empty trial set".into()));
    }
    let ratios: Vec<(String, f64)> = trials
        .par_iter()
        .map(|t| {
            let out = apply(t)?;
            Ok((t.id.clone(), mixed_norm(&out, p)? / mixed_norm(&t.field, p)?))
        })
        .collect::<Result<_>>()?;
    Ok(best_of(p, ratios))
}

/// As [`operator_norm_probe`] with the images already computed.
fn operator_norm_probe_images(p: f64, trials: &[Trial], images: &[PolarField]) -> Result<ProbeResult> {
    let ratios: Vec<(String, f64)> = trials
        .par_iter()
        .zip(images)
        .map(|(t, out)| Ok((t.id.clone(), mixed_norm(out, p)? / mixed_norm(&t.field, p)?)))
        .collect::<Result<_>>()?;
    Ok(best_of(p, ratios))
}

fn best_of(p: f64, ratios: Vec<(String, f64)>) -> ProbeResult {
    let mut best = 0;
    for (i, r) in ratios.iter().enumerate() {
        if r.1 > ratios[best].1 {
            best = i;
        }
    }
    ProbeResult {
        p,
        max_ratio: ratios[best].1,
        argmax: ratios[best].0.clone(),
        ratios,
    }
}

/// `phi(H)` applied to a trial through its expansion.
pub fn apply_spectral(spec: &MultiplierSpec, trial: &Trial) -> Result<PolarField> {
    crate::operators::apply_multiplier(spec, &trial.coefficients)?.to_field(trial.field.grid.clone())
}

/// `(2n/(n+1+2 delta), 2n/(n-1-2 delta))`: the conjectured range of `p` for
/// `S_R^delta` on mixed norms; the upper end is infinite once
/// `delta >= (n-1)/2`.
pub fn riesz_conjecture_window(n: usize, delta: f64) -> (f64, f64) {
    let nf = n as f64;
    let hi = if nf - 1.0 - 2.0 * delta > 0.0 {
        2.0 * nf / (nf - 1.0 - 2.0 * delta)
    } else {
        f64::INFINITY
    };
    (2.0 * nf / (nf + 1.0 + 2.0 * delta), hi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RieszScanRow {
    pub n: usize,
    pub delta: f64,
    pub p: f64,
    pub radius: f64,
    pub norm_lower_bound: f64,
    pub trial_id: String,
}

/// Probe `S_R^delta` for every `(delta, p, R)`.
pub fn riesz_scan(trials: &[Trial], deltas: &[f64], ps: &[f64], radii: &[f64]) -> Result<Vec<RieszScanRow>> {
    let n = trials
        .first()
        .map(|t| t.coefficients.n)
        .ok_or_else(|| Error::InvalidParameter("empty trial set".into()))?;
    let mut rows = Vec::new();
    for &delta in deltas {
        for &radius in radii {
            // the image does not depend on p; synthesize once
            let images: Vec<PolarField> = trials
                .par_iter()
                .map(|t| {
                    t.coefficients
                        .map_levels(|k| Complex64::new(riesz_factor((2 * k + n) as f64, radius, delta), 0.0))
                        .to_field(t.field.grid.clone())
                })
                .collect::<Result<_>>()?;
            for &p in ps {
                let res = operator_norm_probe_images(p, trials, &images)?;
                rows.push(RieszScanRow {
                    n,
                    delta,
                    p,
                    radius,
                    norm_lower_bound: res.max_ratio,
                    trial_id: res.argmax,
                });
            }
        }
    }
    Ok(rows)
}

/// `[min, max]` of `||g_k f||_{L^{p,2}} / ||f||_{L^{p,2}}` over the trials.
pub fn g_bracket(trials: &[Trial], k: usize, p: f64) -> Result<(f64, f64)> {
    let ratios: Vec<f64> = trials
        .par_iter()
        .map(|t| {
            let g = g_k(&t.coefficients, k, t.field.grid.clone(), GMethod::Spectral)?;
            Ok(mixed_norm(&g.values, p)? / mixed_norm(&t.field, p)?)
        })
        .collect::<Result<_>>()?;
    Ok((
        ratios.iter().copied().fold(f64::INFINITY, f64::min),
        ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::MultiplierFamily;

    fn trials() -> Vec<Trial> {
        let grid = Arc::new(PolarGrid::new(2, 60, 32, 9.0).unwrap());
        build_trial_set(grid, &TrialSetOptions::new(10, 1)).unwrap()
    }

    #[test]
    fn identity_and_semigroup() {
        let ts = trials();
        assert_eq!(ts.len(), 11);
        let id = operator_norm_probe(|t| Ok(t.field.clone()), 3.0, &ts).unwrap();
        assert_eq!(id.max_ratio, 1.0);
        let t = 0.3;
        let spec = MultiplierSpec::new(2, MultiplierFamily::Semigroup { t });
        let r = operator_norm_probe(|tr| apply_spectral(&spec, tr), 2.0, &ts).unwrap();
        assert!((r.max_ratio - (-2.0 * t).exp()).abs() < 1e-12);
        assert_eq!(r.argmax, "phi0");
        assert!(operator_norm_probe(|t| Ok(t.field.clone()), 2.0, &[]).is_err());
    }

    #[test]
    fn determinism_and_window() {
        let a = trials();
        let b = trials();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.field.re, y.field.re);
        }
        assert_eq!(riesz_conjecture_window(2, 0.0), (4.0 / 3.0, 4.0));
        assert_eq!(riesz_conjecture_window(2, 1.0).1, f64::INFINITY);
    }

    #[test]
    fn riesz_scan_small() {
        let ts = trials();
        let rows = riesz_scan(&ts, &[1.0], &[2.0], &[4.0, 16.0]).unwrap();
        assert_eq!(rows.len(), 2);
        // R = 4 keeps level 0 only, scaled by 1 - 2/4
        assert!((rows[0].norm_lower_bound - 0.5).abs() < 1e-12);
        let (lo, hi) = g_bracket(&ts, 1, 2.0).unwrap();
        assert!((lo - 0.5).abs() < 1e-9 && (hi - 0.5).abs() < 1e-9);
    }
}
