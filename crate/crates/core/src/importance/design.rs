//! Regression problem definition: one target, named regressor columns.

use crate::error::{Error, Result};

/// A fully materialized OLS problem (no missing values).
#[derive(Debug, Clone)]
pub struct DesignSpec {
    pub target_name: String,
    pub regressor_names: Vec<String>,
    /// Response, length n.
    pub y: Vec<f64>,
    /// Regressor columns (column-major), each length n.
    pub x: Vec<Vec<f64>>,
}

impl DesignSpec {
    pub fn new(
        target_name: impl Into<String>,
        regressor_names: Vec<String>,
        y: Vec<f64>,
        x: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let target_name = target_name.into();
        let n = y.len();
        let k = x.len();
        if regressor_names.len() != k {
            return Err(Error::Validation(format!(
                "{} regressor names for {k} columns",
                regressor_names.len()
            )));
        }
        if k == 0 {
            return Err(Error::Validation("no regressors".into()));
        }
        if n <= k + 1 {
            return Err(Error::Validation(format!(
                "need n > k+1 observations (n = {n}, k = {k})"
            )));
        }
        for (name, col) in regressor_names.iter().zip(&x) {
            if col.len() != n {
                return Err(Error::Validation(format!(
                    "regressor {name}: {} rows, target has {n}",
                    col.len()
                )));
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation(format!("regressor {name}: missing or non-finite value")));
            }
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("target {target_name}: missing or non-finite value")));
        }
        Ok(DesignSpec { target_name, regressor_names, y, x })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn k(&self) -> usize {
        self.x.len()
    }
}

/// Population standard deviation (divide by N).
pub(crate) fn population_sd(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt()
}

/// Pearson correlation.
pub(crate) fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    cov / (va.sqrt() * vb.sqrt())
}
