//! LMG relative importance: R² increments averaged over all orderings.

use super::subsets::SubsetR2Table;

/// LMG share per regressor.
///
/// LMG(i) = Σ_{S ⊆ V∖{i}} |S|!·(k−|S|−1)!/k! · (R²(S∪{i}) − R²(S)):
/// the average improvement from adding regressor i, over all positions in
/// all orderings. Shares telescope: Σ_i LMG(i) = R²(V).
pub fn lmg(table: &SubsetR2Table) -> Vec<f64> {
    let k = table.k;
    let mut factorial = vec![1.0; k + 1];
    for i in 1..=k {
        factorial[i] = factorial[i - 1] * i as f64;
    }
    let weight = |s: usize| factorial[s] * factorial[k - s - 1] / factorial[k];

    let full = (1usize << k) - 1;
    let mut shares = vec![0.0; k];
    for (i, share) in shares.iter_mut().enumerate() {
        let others = full & !(1 << i);
        // Enumerate S ⊆ V∖{i} via submask iteration (∅ included).
        let mut s = others;
        loop {
            *share += weight(s.count_ones() as usize) * table.increment(i, s);
            if s == 0 {
                break;
            }
            s = (s - 1) & others;
        }
    }
    shares
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::importance::design::{pearson, DesignSpec};
    use crate::importance::subsets::all_subsets_r2;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_regressor_lmg_is_r2() {
        let x: Vec<f64> = (0..12).map(|i| f64::from(i) * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + v + (v * 3.0).sin() * 0.2).collect();
        let s = DesignSpec::new("y", vec!["x".into()], y, vec![x]).unwrap();
        let t = all_subsets_r2(&s).unwrap();
        assert_abs_diff_eq!(lmg(&t)[0], t.full_r2(), epsilon = 1e-15);
    }

    #[test]
    fn orthogonal_regressors_get_their_own_r2() {
        let x0 = vec![1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0];
        let x1 = vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let y: Vec<f64> = (0..8)
            .map(|i| 2.0 * x0[i] + x1[i] + [0.3, -0.1, 0.2, -0.4, 0.1, -0.3, 0.25, -0.05][i])
            .collect();
        let s = DesignSpec::new(
            "y",
            vec!["a".into(), "b".into()],
            y.clone(),
            vec![x0.clone(), x1.clone()],
        )
        .unwrap();
        let t = all_subsets_r2(&s).unwrap();
        let shares = lmg(&t);
        for (i, col) in [x0, x1].iter().enumerate() {
            let r = pearson(col, &y);
            assert_abs_diff_eq!(shares[i], r * r, epsilon = 1e-10);
        }
    }

    #[test]
    fn shares_sum_to_full_r2() {
        let n = 30;
        let x0: Vec<f64> = (0..n).map(|i| (f64::from(i) * 0.7).sin()).collect();
        let x1: Vec<f64> = (0..n).map(|i| (f64::from(i) * 1.1).cos() + 0.5 * x0[i as usize]).collect();
        let x2: Vec<f64> = (0..n).map(|i| f64::from(i % 4) - 1.5).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let i = i as usize;
                x0[i] - x1[i] + 0.25 * x2[i] + (i as f64).sqrt() * 0.1
            })
            .collect();
        let names = vec!["a".into(), "b".into(), "c".into()];
        let s = DesignSpec::new("y", names, y, vec![x0, x1, x2]).unwrap();
        let t = all_subsets_r2(&s).unwrap();
        let shares = lmg(&t);
        assert_abs_diff_eq!(shares.iter().sum::<f64>(), t.full_r2(), epsilon = 1e-12);
    }
}
