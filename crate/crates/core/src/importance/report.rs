//! Assembled per-target importance report and its exports.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

use super::commonality::commonality;
use super::design::{pearson, population_sd, DesignSpec};
use super::dominance::{dominance, Verdict};
use super::lmg::lmg;
use super::ols::{ols_fit, stars, OlsFit};
use super::subsets::all_subsets_r2;

/// Standardized coefficients β_i = b_i · sd(x_i)/sd(y).
pub fn beta_weights(spec: &DesignSpec) -> Result<Vec<f64>> {
    let fit = ols_fit(spec)?;
    beta_from_fit(spec, &fit)
}

fn beta_from_fit(spec: &DesignSpec, fit: &OlsFit) -> Result<Vec<f64>> {
    let sd_y = population_sd(&spec.y);
    if sd_y == 0.0 {
        return Err(Error::Numerical(format!("target {} has zero variance", spec.target_name)));
    }
    spec.x
        .iter()
        .zip(&spec.regressor_names)
        .zip(fit.coefficients.iter().skip(1))
        .map(|((col, name), b)| {
            let sd_x = population_sd(col);
            if sd_x == 0.0 {
                return Err(Error::Numerical(format!("regressor {name} has zero variance")));
            }
            Ok(b * sd_x / sd_y)
        })
        .collect()
}

/// Structure coefficients r_s(i) = corr(x_i, ŷ).
pub fn structure_coefficients(spec: &DesignSpec) -> Result<Vec<f64>> {
    let fit = ols_fit(spec)?;
    structure_from_fit(spec, &fit)
}

fn structure_from_fit(spec: &DesignSpec, fit: &OlsFit) -> Result<Vec<f64>> {
    if fit.r2 <= 0.0 {
        return Err(Error::Numerical(format!(
            "target {}: R = 0, structure coefficients undefined",
            spec.target_name
        )));
    }
    Ok(spec.x.iter().map(|col| pearson(col, &fit.fitted)).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientReport {
    pub name: String,
    pub b: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_value: f64,
    pub stars: String,
}

/// Everything the report tables need for one regressor.
#[derive(Debug, Clone, Serialize)]
pub struct RegressorImportance {
    pub name: String,
    pub b: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_value: f64,
    pub stars: String,
    pub beta: f64,
    pub r_s: f64,
    pub u_ca: f64,
    pub c_ca: f64,
    pub tot_ca: f64,
    pub lmg: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommonalityComponent {
    /// Regressor names in the subset, spec order.
    pub subset: Vec<String>,
    pub coefficient: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SizeAverages {
    pub regressor: String,
    /// Mean Δ over subsets of each size 0..k (excluding the regressor).
    pub average_contribution_by_size: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairVerdictReport {
    pub regressor_a: String,
    pub regressor_b: String,
    /// Name of the dominant regressor, or empty when dominance could not
    /// be established.
    pub complete: String,
    pub conditional: String,
    pub general: String,
}

/// Full OLS + importance decomposition for one target.
#[derive(Debug, Clone, Serialize)]
pub struct ImportanceReport {
    pub target: String,
    pub n: usize,
    pub k: usize,
    pub r2: f64,
    pub r2_adj: f64,
    pub intercept: CoefficientReport,
    pub regressors: Vec<RegressorImportance>,
    pub commonality_components: Vec<CommonalityComponent>,
    pub dominance_by_size: Vec<SizeAverages>,
    pub dominance_verdicts: Vec<PairVerdictReport>,
    /// Subsets whose design matrix was rank-deficient.
    pub degenerate_subsets: Vec<Vec<String>>,
}

fn subset_names(mask: usize, names: &[String]) -> Vec<String> {
    names
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, n)| n.clone())
        .collect()
}

/// Fit and decompose one target.
pub fn build_importance_report(spec: &DesignSpec) -> Result<ImportanceReport> {
    let fit = ols_fit(spec)?;
    let betas = beta_from_fit(spec, &fit)?;
    let r_s = structure_from_fit(spec, &fit)?;
    let table = all_subsets_r2(spec)?;
    let com = commonality(&table);
    let lmg_shares = lmg(&table);
    let dom = dominance(&table);

    let names = &spec.regressor_names;
    let regressors = (0..spec.k())
        .map(|i| RegressorImportance {
            name: names[i].clone(),
            b: fit.coefficients[i + 1],
            ci_low: fit.ci_low[i + 1],
            ci_high: fit.ci_high[i + 1],
            p_value: fit.p_values[i + 1],
            stars: stars(fit.p_values[i + 1]).to_string(),
            beta: betas[i],
            r_s: r_s[i],
            u_ca: com.unique[i],
            c_ca: com.common[i],
            tot_ca: com.total[i],
            lmg: lmg_shares[i],
        })
        .collect();

    let commonality_components = (1..1usize << spec.k())
        .map(|mask| CommonalityComponent {
            subset: subset_names(mask, names),
            coefficient: com.components[mask],
        })
        .collect();

    let dominance_by_size = (0..spec.k())
        .map(|i| SizeAverages {
            regressor: names[i].clone(),
            average_contribution_by_size: dom.conditional_averages[i].clone(),
        })
        .collect();

    let verdict_name = |v: Verdict, i: usize, j: usize| match v {
        Verdict::First => names[i].clone(),
        Verdict::Second => names[j].clone(),
        Verdict::Undetermined => String::new(),
    };
    let dominance_verdicts = dom
        .pairs
        .iter()
        .map(|p| PairVerdictReport {
            regressor_a: names[p.i].clone(),
            regressor_b: names[p.j].clone(),
            complete: verdict_name(p.complete, p.i, p.j),
            conditional: verdict_name(p.conditional, p.i, p.j),
            general: verdict_name(p.general, p.i, p.j),
        })
        .collect();

    let degenerate_subsets = (1..1usize << spec.k())
        .filter(|&mask| table.degenerate[mask])
        .map(|mask| subset_names(mask, names))
        .collect();

    Ok(ImportanceReport {
        target: spec.target_name.clone(),
        n: spec.n(),
        k: spec.k(),
        r2: fit.r2,
        r2_adj: fit.r2_adj,
        intercept: CoefficientReport {
            name: "(intercept)".to_string(),
            b: fit.coefficients[0],
            ci_low: fit.ci_low[0],
            ci_high: fit.ci_high[0],
            p_value: fit.p_values[0],
            stars: stars(fit.p_values[0]).to_string(),
        },
        regressors,
        commonality_components,
        dominance_by_size,
        dominance_verdicts,
        degenerate_subsets,
    })
}

/// `importance.json`: array of per-target reports.
pub fn write_importance_json<W: Write>(reports: &[ImportanceReport], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, reports)
        .map_err(|e| Error::Validation(format!("serializing importance report: {e}")))
}

/// `importance_summary.csv`: one row per (target, regressor) with the
/// coefficient table and importance columns.
pub fn write_importance_summary_csv<W: Write>(
    reports: &[ImportanceReport],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(
        out,
        "target,regressor,b,ci_low,ci_high,p_value,stars,beta,r_s,u_ca,c_ca,tot_ca,lmg,r2,r2_adj"
    )?;
    for rep in reports {
        for r in &rep.regressors {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                rep.target,
                r.name,
                r.b,
                r.ci_low,
                r.ci_high,
                r.p_value,
                r.stars,
                r.beta,
                r.r_s,
                r.u_ca,
                r.c_ca,
                r.tot_ca,
                r.lmg,
                rep.r2,
                rep.r2_adj
            )?;
        }
    }
    Ok(())
}

/// `dominance_verdicts.csv`: the Tables 2–4 style grids in long form; the
/// `dominant` field is empty where dominance could not be established.
pub fn write_dominance_csv<W: Write>(
    reports: &[ImportanceReport],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "target,level,regressor_a,regressor_b,dominant")?;
    for rep in reports {
        for p in &rep.dominance_verdicts {
            for (level, v) in [
                ("complete", &p.complete),
                ("conditional", &p.conditional),
                ("general", &p.general),
            ] {
                writeln!(
                    out,
                    "{},{level},{},{},{v}",
                    rep.target, p.regressor_a, p.regressor_b
                )?;
            }
        }
    }
    Ok(())
}
