//! Dominance analysis: pairwise comparisons of R² contributions.

use super::subsets::SubsetR2Table;

/// Outcome of one pairwise comparison (for an ordered pair (i, j), i < j).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Regressor i dominates j.
    First,
    /// Regressor j dominates i.
    Second,
    /// Dominance could not be established (ties or mixed directions).
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::First => "first",
            Verdict::Second => "second",
            Verdict::Undetermined => "",
        }
    }
}

/// Verdicts at the three dominance levels for one unordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairDominance {
    pub i: usize,
    pub j: usize,
    pub complete: Verdict,
    pub conditional: Verdict,
    pub general: Verdict,
}

/// Full dominance analysis output.
#[derive(Debug, Clone)]
pub struct Dominance {
    /// One entry per unordered pair, i < j, in lexicographic order.
    pub pairs: Vec<PairDominance>,
    /// `conditional_averages[i][s]`: mean Δ(i|S) over subsets S of size s
    /// not containing i (s ∈ 0..k).
    pub conditional_averages: Vec<Vec<f64>>,
    /// General dominance weight per regressor: mean over sizes of the
    /// size-conditional averages. Identical to the LMG share.
    pub general: Vec<f64>,
}

/// Compare with the ≥-everywhere-and-somewhere-strict rule.
fn directional(ge_all: bool, strict_any: bool, le_all: bool, strict_any_rev: bool) -> Verdict {
    if ge_all && strict_any {
        Verdict::First
    } else if le_all && strict_any_rev {
        Verdict::Second
    } else {
        Verdict::Undetermined
    }
}

/// Run complete, conditional, and general dominance over all pairs.
pub fn dominance(table: &SubsetR2Table) -> Dominance {
    let k = table.k;
    let full = (1usize << k) - 1;

    // Size-conditional average contributions.
    let mut conditional_averages = vec![vec![0.0; k]; k];
    for i in 0..k {
        let mut sums = vec![0.0; k];
        let mut counts = vec![0usize; k];
        let others = full & !(1 << i);
        let mut s = others;
        loop {
            let size = s.count_ones() as usize;
            sums[size] += table.increment(i, s);
            counts[size] += 1;
            if s == 0 {
                break;
            }
            s = (s - 1) & others;
        }
        for sz in 0..k {
            conditional_averages[i][sz] = sums[sz] / counts[sz] as f64;
        }
    }

    let general: Vec<f64> =
        conditional_averages.iter().map(|row| row.iter().sum::<f64>() / k as f64).collect();

    let mut pairs = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            // Complete: compare increments over every subset excluding both.
            let others = full & !(1 << i) & !(1 << j);
            let (mut ge_all, mut le_all) = (true, true);
            let (mut strict_i, mut strict_j) = (false, false);
            let mut s = others;
            loop {
                let di = table.increment(i, s);
                let dj = table.increment(j, s);
                if di > dj {
                    strict_i = true;
                    le_all = false;
                } else if dj > di {
                    strict_j = true;
                    ge_all = false;
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & others;
            }
            let complete = directional(ge_all, strict_i, le_all, strict_j);

            // Conditional: compare size-conditional averages at every size.
            let (mut ge_all, mut le_all) = (true, true);
            let (mut strict_i, mut strict_j) = (false, false);
            for sz in 0..k {
                let ai = conditional_averages[i][sz];
                let aj = conditional_averages[j][sz];
                if ai > aj {
                    strict_i = true;
                    le_all = false;
                } else if aj > ai {
                    strict_j = true;
                    ge_all = false;
                }
            }
            let conditional = directional(ge_all, strict_i, le_all, strict_j);

            // General: single strict comparison of the overall averages.
            let general_verdict = if general[i] > general[j] {
                Verdict::First
            } else if general[j] > general[i] {
                Verdict::Second
            } else {
                Verdict::Undetermined
            };

            pairs.push(PairDominance { i, j, complete, conditional, general: general_verdict });
        }
    }

    Dominance { pairs, conditional_averages, general }
}
