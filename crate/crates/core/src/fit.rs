//! Focal-value estimation from sampled displacement data.
//!
//! The displacement expands as `d(x0) = sum_j v_j x0^j`; a column-scaled
//! least-squares fit against monomials recovers `v_1..v_J`. Vandermonde
//! conditioning is the dominant hazard, so the fit reports its condition
//! number and a Richardson-style leading-coefficient extractor is provided
//! as an independent cross-check.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::polar::ReturnMapTable;

/// Conditioning beyond this flags the fit (reported, not fatal).
pub const CONDITION_THRESHOLD: f64 = 1e12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {needed} samples for {j_max} coefficients, got {got}")]
    TooFewSamples { needed: usize, got: usize, j_max: usize },
    #[error("singular value decomposition failed to solve the fit")]
    SolveFailed,
}

#[derive(Clone, Debug)]
pub struct FittedFocal {
    /// Estimates `v_1..v_J` (index 0 holds `v_1`).
    pub v: Vec<f64>,
    /// Root-mean-square residual of the fitted model over the samples.
    pub residual: f64,
    /// Standard error of each `v_j`, propagated from the residual through
    /// the SVD of the scaled design matrix.
    pub sigma: Vec<f64>,
    /// Condition number of the column-scaled design matrix.
    pub condition: f64,
    pub ill_conditioned: bool,
}

impl FittedFocal {
    /// `v_j` with the paper's 1-based indexing.
    pub fn v_at(&self, j: usize) -> f64 {
        self.v[j - 1]
    }

    /// Standard error of `v_j` (1-based).
    pub fn sigma_at(&self, j: usize) -> f64 {
        self.sigma[j - 1]
    }
}

/// Least-squares fit of the table's displacement column against
/// `x0^1..x0^j_max`. Needs at least `2 j_max` samples.
pub fn fit_focal(table: &ReturnMapTable, j_max: usize) -> Result<FittedFocal, FitError> {
    assert!(j_max >= 1);
    let m = table.samples.len();
    if m < 2 * j_max {
        return Err(FitError::TooFewSamples {
            needed: 2 * j_max,
            got: m,
            j_max,
        });
    }
    let mut a = DMatrix::<f64>::zeros(m, j_max);
    let mut rhs = DVector::<f64>::zeros(m);
    for (i, &(x0, _, d)) in table.samples.iter().enumerate() {
        let mut p = 1.0;
        for j in 0..j_max {
            p *= x0;
            a[(i, j)] = p;
        }
        rhs[i] = d;
    }
    // Column scaling keeps the singular values comparable.
    let mut scales = vec![0.0f64; j_max];
    for j in 0..j_max {
        let norm = a.column(j).norm();
        scales[j] = if norm > 0.0 { norm } else { 1.0 };
        for i in 0..m {
            a[(i, j)] /= scales[j];
        }
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let w = svd
        .solve(&rhs, smax * 1e-300)
        .map_err(|_| FitError::SolveFailed)?;
    let fitted = &a * &w;
    let resid_l2 = (&fitted - &rhs).norm();
    let residual = resid_l2 / (m as f64).sqrt();
    let v: Vec<f64> = (0..j_max).map(|j| w[j] / scales[j]).collect();
    // Per-coefficient standard errors: sigma(w_j)^2 = s^2 sum_k V[j,k]^2/sv_k^2
    // with s^2 the residual variance.
    let dof = (m - j_max).max(1) as f64;
    let s2 = resid_l2 * resid_l2 / dof;
    let v_t = svd.v_t.as_ref().expect("svd with v requested");
    let sigma: Vec<f64> = (0..j_max)
        .map(|j| {
            let mut acc = 0.0;
            for k in 0..sv.len() {
                if sv[k] > 0.0 {
                    let vjk = v_t[(k, j)];
                    acc += (vjk / sv[k]) * (vjk / sv[k]);
                }
            }
            (s2 * acc).sqrt() / scales[j]
        })
        .collect();
    Ok(FittedFocal {
        v,
        residual,
        sigma,
        condition,
        ill_conditioned: condition > CONDITION_THRESHOLD,
    })
}

/// Richardson-style cross-check: extrapolates `d(x0)/x0^leading` to
/// `x0 -> 0` by Neville's algorithm over the smallest sample points,
/// estimating the leading coefficient `v_leading` without a global fit.
pub fn richardson_leading(table: &ReturnMapTable, leading: usize) -> f64 {
    let mut pts: Vec<(f64, f64)> = table
        .samples
        .iter()
        .map(|&(x0, _, d)| (x0, d / x0.powi(leading as i32)))
        .collect();
    pts.sort_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap());
    let k = pts.len().min(6);
    let xs: Vec<f64> = pts[..k].iter().map(|p| p.0).collect();
    let mut t: Vec<f64> = pts[..k].iter().map(|p| p.1).collect();
    // Neville elimination toward x = 0.
    for level in 1..k {
        for i in 0..k - level {
            let (x_lo, x_hi) = (xs[i], xs[i + level]);
            t[i] = (x_hi * t[i] - x_lo * t[i + 1]) / (x_hi - x_lo);
        }
    }
    t[0]
}
