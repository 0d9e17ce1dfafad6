//! Pairwise Pearson correlations among named variables.

use std::io::Write;

use crate::error::{Error, Result};

use super::design::pearson;

/// Symmetric correlation matrix with its variable order.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    /// Row-major n×n Pearson r, unit diagonal.
    pub r: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.r[i * self.names.len() + j]
    }
}

/// Correlate every pair of columns.
pub fn correlation_matrix(names: &[String], columns: &[Vec<f64>]) -> Result<CorrelationMatrix> {
    if names.len() != columns.len() || names.len() < 2 {
        return Err(Error::Validation(format!(
            "correlation matrix needs ≥ 2 named columns, got {} names / {} columns",
            names.len(),
            columns.len()
        )));
    }
    let n_rows = columns[0].len();
    for (name, col) in names.iter().zip(columns) {
        if col.len() != n_rows {
            return Err(Error::Validation(format!("column {name}: ragged length")));
        }
        let mean = col.iter().sum::<f64>() / n_rows as f64;
        if col.iter().all(|&v| v == col[0]) || col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() == 0.0 {
            return Err(Error::Numerical(format!("column {name} has zero variance")));
        }
    }

    let k = names.len();
    let mut r = vec![0.0; k * k];
    for i in 0..k {
        r[i * k + i] = 1.0;
        for j in (i + 1)..k {
            let v = pearson(&columns[i], &columns[j]);
            r[i * k + j] = v;
            r[j * k + i] = v;
        }
    }
    Ok(CorrelationMatrix { names: names.to_vec(), r })
}

/// Long-format export: `var_a,var_b,r,r_squared` for every pair a ≤ b.
pub fn write_correlation_csv<W: Write>(m: &CorrelationMatrix, mut out: W) -> std::io::Result<()> {
    writeln!(out, "var_a,var_b,r,r_squared")?;
    for i in 0..m.names.len() {
        for j in i..m.names.len() {
            let r = m.at(i, j);
            writeln!(out, "{},{},{},{}", m.names[i], m.names[j], r, r * r)?;
        }
    }
    Ok(())
}
