//! Commonality analysis: decompose R² into unique and shared components.

use super::subsets::SubsetR2Table;

/// Commonality decomposition over all nonempty regressor subsets.
#[derive(Debug, Clone)]
pub struct Commonality {
    /// `components[mask]` for nonempty masks; index 0 unused (0.0).
    pub components: Vec<f64>,
    /// Unique effect per regressor: the component of its singleton set.
    pub unique: Vec<f64>,
    /// Common effect per regressor: sum of components of every set of
    /// size ≥ 2 containing it. Can legitimately be negative (suppression).
    pub common: Vec<f64>,
    /// unique + common; equals the squared zero-order correlation with y.
    pub total: Vec<f64>,
}

/// Compute all 2^k − 1 commonality components from the subset R² table.
///
/// C(S) = Σ_{T ⊆ S} (−1)^{|T|+1} · R²((V∖S) ∪ T) — the inclusion–exclusion
/// share of R² attributable jointly (and only jointly) to the regressors
/// in S.
pub fn commonality(table: &SubsetR2Table) -> Commonality {
    let k = table.k;
    let full = (1usize << k) - 1;
    let mut components = vec![0.0; 1 << k];

    for s in 1..=full {
        let complement = full & !s;
        let mut c = 0.0;
        // Enumerate T ⊆ S, including T = ∅ (which contributes
        // (−1)^{0+1}·R²(V∖S), folded in by starting the loop at t = s and
        // ending after t = 0).
        let mut t = s;
        loop {
            let sign = if t.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
            c += sign * table.r2[complement | t];
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        components[s] = c;
    }

    let mut unique = vec![0.0; k];
    let mut common = vec![0.0; k];
    let mut total = vec![0.0; k];
    for i in 0..k {
        unique[i] = components[1 << i];
        for s in 1..=full {
            if s & (1 << i) != 0 && s.count_ones() >= 2 {
                common[i] += components[s];
            }
        }
        total[i] = unique[i] + common[i];
    }

    Commonality { components, unique, common, total }
}
