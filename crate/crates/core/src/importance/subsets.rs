//! R² for every subset of regressors, the shared engine behind
//! commonality, dominance, and LMG.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::design::DesignSpec;
use super::ols::RANK_EPS;

/// R²(S) for all 2^k subsets S, indexed by bitmask (bit i = regressor i).
#[derive(Debug, Clone)]
pub struct SubsetR2Table {
    pub k: usize,
    /// `r2[mask]`; `r2[0] = 0` (intercept-only model).
    pub r2: Vec<f64>,
    /// Subsets whose design was rank-deficient (R² from the pseudoinverse
    /// projection, still well-defined).
    pub degenerate: Vec<bool>,
}

impl SubsetR2Table {
    pub fn full_r2(&self) -> f64 {
        self.r2[self.r2.len() - 1]
    }

    /// Increment Δ(i | S) = R²(S ∪ {i}) − R²(S); `mask` must not contain i.
    pub fn increment(&self, i: usize, mask: usize) -> f64 {
        debug_assert_eq!(mask & (1 << i), 0);
        self.r2[mask | (1 << i)] - self.r2[mask]
    }
}

/// R² of the least-squares fit of y on the masked columns plus intercept.
fn subset_r2(spec: &DesignSpec, mask: usize, tss: f64) -> (f64, bool) {
    let n = spec.n();
    let cols: Vec<usize> = (0..spec.k()).filter(|i| mask & (1 << i) != 0).collect();
    let m = DMatrix::from_fn(n, cols.len() + 1, |r, c| {
        if c == 0 {
            1.0
        } else {
            spec.x[cols[c - 1]][r]
        }
    });
    let yv = DVector::from_column_slice(&spec.y);
    let svd = m.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > max_sv * RANK_EPS).count();
    let degenerate = rank < cols.len() + 1;
    let beta = svd.solve(&yv, max_sv * RANK_EPS).expect("svd computed with u/v");
    let fitted = &m * &beta;
    let rss: f64 = spec.y.iter().zip(fitted.iter()).map(|(y, f)| (y - f) * (y - f)).sum();
    (1.0 - rss / tss, degenerate)
}

/// Fit one OLS per subset of regressors (2^k solves, k ≤ 20).
pub fn all_subsets_r2(spec: &DesignSpec) -> Result<SubsetR2Table> {
    let k = spec.k();
    if k > 20 {
        return Err(Error::Validation(format!("all-subsets R² limited to k ≤ 20, got {k}")));
    }
    let y_mean = spec.y.iter().sum::<f64>() / spec.n() as f64;
    let tss: f64 = spec.y.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    if tss == 0.0 {
        return Err(Error::Numerical(format!("target {} has zero variance", spec.target_name)));
    }

    let results: Vec<(f64, bool)> = (1..1usize << k)
        .into_par_iter()
        .map(|mask| subset_r2(spec, mask, tss))
        .collect();

    let mut r2 = Vec::with_capacity(1 << k);
    let mut degenerate = Vec::with_capacity(1 << k);
    r2.push(0.0);
    degenerate.push(false);
    for (v, d) in results {
        r2.push(v);
        degenerate.push(d);
    }
    Ok(SubsetR2Table { k, r2, degenerate })
}
