//! Ordinary least squares with t-based inference.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

use super::design::DesignSpec;

/// Relative singular-value cutoff for rank decisions.
pub(crate) const RANK_EPS: f64 = 1e-10;

/// A fitted OLS model. Coefficient order: intercept first, then regressors
/// in spec order.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// 95% confidence bounds.
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    /// Two-sided p-values against zero.
    pub p_values: Vec<f64>,
    pub r2: f64,
    pub r2_adj: f64,
    pub fitted: Vec<f64>,
    pub residual_df: usize,
}

/// Significance stars per the 0.05/0.01 convention.
pub fn stars(p: f64) -> &'static str {
    if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

fn design_matrix(spec: &DesignSpec) -> DMatrix<f64> {
    let n = spec.n();
    let k = spec.k();
    DMatrix::from_fn(n, k + 1, |r, c| if c == 0 { 1.0 } else { spec.x[c - 1][r] })
}

/// Name the regressors whose removal restores full rank, for the
/// singular-design error message.
fn collinear_columns(spec: &DesignSpec) -> Vec<String> {
    let full = design_matrix(spec);
    let full_rank = full.rank(RANK_EPS);
    let mut names = Vec::new();
    for drop in 0..spec.k() {
        let m = DMatrix::from_fn(spec.n(), spec.k(), |r, c| {
            if c == 0 {
                1.0
            } else {
                let col = if c - 1 < drop { c - 1 } else { c };
                spec.x[col][r]
            }
        });
        if m.rank(RANK_EPS) == full_rank {
            names.push(spec.regressor_names[drop].clone());
        }
    }
    if names.is_empty() {
        names = spec.regressor_names.clone();
    }
    names
}

/// Fit y on the regressors with an intercept.
///
/// Inference is homoskedastic t-based with n−k−1 degrees of freedom; the
/// 95% CI uses the same t quantile.
pub fn ols_fit(spec: &DesignSpec) -> Result<OlsFit> {
    let n = spec.n();
    let k = spec.k();
    let xm = design_matrix(spec);
    let yv = DVector::from_column_slice(&spec.y);

    let svd = xm.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > max_sv * RANK_EPS).count();
    if rank < k + 1 {
        return Err(Error::Numerical(format!(
            "singular design for target {}: collinear regressors {:?}",
            spec.target_name,
            collinear_columns(spec)
        )));
    }

    let beta = svd
        .solve(&yv, max_sv * RANK_EPS)
        .map_err(|e| Error::Numerical(format!("least-squares solve failed: {e}")))?;
    let fitted = &xm * &beta;
    let residuals = &yv - &fitted;
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let y_mean = spec.y.iter().sum::<f64>() / n as f64;
    let tss: f64 = spec.y.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    if tss == 0.0 {
        return Err(Error::Numerical(format!("target {} has zero variance", spec.target_name)));
    }
    let r2 = 1.0 - rss / tss;
    let df = n - k - 1;
    let r2_adj = 1.0 - (1.0 - r2) * (n as f64 - 1.0) / (df as f64);

    // (X'X)^{-1} via the SVD: V Σ^{-2} V'.
    let v_t = svd.v_t.as_ref().expect("computed");
    let mut xtx_inv = DMatrix::zeros(k + 1, k + 1);
    for a in 0..=k {
        for b in 0..=k {
            let mut sum = 0.0;
            for s in 0..svd.singular_values.len() {
                let sv = svd.singular_values[s];
                if sv > max_sv * RANK_EPS {
                    sum += v_t[(s, a)] * v_t[(s, b)] / (sv * sv);
                }
            }
            xtx_inv[(a, b)] = sum;
        }
    }

    let sigma2 = rss / df as f64;
    let t_dist = StudentsT::new(0.0, 1.0, df as f64)
        .map_err(|e| Error::Numerical(format!("t-distribution (df = {df}): {e}")))?;
    let t_crit = t_dist.inverse_cdf(0.975);

    let mut standard_errors = Vec::with_capacity(k + 1);
    let mut ci_low = Vec::with_capacity(k + 1);
    let mut ci_high = Vec::with_capacity(k + 1);
    let mut p_values = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let se = (sigma2 * xtx_inv[(i, i)]).sqrt();
        let b = beta[i];
        standard_errors.push(se);
        ci_low.push(b - t_crit * se);
        ci_high.push(b + t_crit * se);
        let p = if se == 0.0 {
            if b == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            2.0 * (1.0 - t_dist.cdf((b / se).abs()))
        };
        p_values.push(p);
    }

    Ok(OlsFit {
        coefficients: beta.iter().copied().collect(),
        standard_errors,
        ci_low,
        ci_high,
        p_values,
        r2,
        r2_adj,
        fitted: fitted.iter().copied().collect(),
        residual_df: df,
    })
}
