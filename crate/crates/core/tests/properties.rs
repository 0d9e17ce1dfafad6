//! Property tests for the estimator and decomposition invariants.

use proptest::prelude::*;

use cellsync_core::data::{assign_cells, OverlapRow, RegionMapRow};
use cellsync_core::data::{load_activity, write_canonical_activity_csv, ActivityCube, CellSeries};
use cellsync_core::importance::{
    all_subsets_r2, commonality, dominance, lmg, DesignSpec, Verdict,
};
use cellsync_core::normalize::hourly_zscore;
use cellsync_core::rng::keyed_rng;
use cellsync_core::spatial::{build_weights, morans_i, WeightScheme};
use cellsync_core::sync::{daily_mi, BiasCorrection, MiConfig};
use rand_distr::{Distribution, StandardNormal};
use std::collections::BTreeMap;

fn mi_cfg(bins: usize, correction: BiasCorrection) -> MiConfig {
    MiConfig { bins, bias_correction: correction, ..MiConfig::default() }
}

/// Strictly monotone value-preserving transform for rank invariance tests:
/// distinct inputs stay distinct in [-30, 30] -> exp.
fn monotone(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.exp()).collect()
}

fn all_distinct(v: &[f64]) -> bool {
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).all(|w| w[0] < w[1])
}

proptest! {
    #[test]
    fn mi_is_symmetric_and_bounded(
        xs in prop::collection::vec(-30.0f64..30.0, 24),
        ys in prop::collection::vec(-30.0f64..30.0, 24),
        bins in 2usize..6,
    ) {
        let cfg = mi_cfg(bins, BiasCorrection::None);
        let ixy = daily_mi(&xs, &ys, &cfg).unwrap();
        let iyx = daily_mi(&ys, &xs, &cfg).unwrap();
        prop_assert_eq!(ixy.to_bits(), iyx.to_bits());
        prop_assert!(ixy >= 0.0, "plug-in MI negative: {}", ixy);
        prop_assert!(ixy <= (bins as f64).ln() + 1e-12, "MI {} above ln({})", ixy, bins);
    }

    #[test]
    fn mi_depends_only_on_ranks(
        xs in prop::collection::vec(-30.0f64..30.0, 24),
        ys in prop::collection::vec(-30.0f64..30.0, 24),
        bins in 2usize..6,
    ) {
        prop_assume!(all_distinct(&xs) && all_distinct(&ys));
        let cfg = mi_cfg(bins, BiasCorrection::MillerMadow);
        let base = daily_mi(&xs, &ys, &cfg).unwrap();
        let warped = daily_mi(&monotone(&xs), &monotone(&ys), &cfg).unwrap();
        prop_assert_eq!(base.to_bits(), warped.to_bits());
    }

    #[test]
    fn mi_is_invariant_under_joint_reordering(
        xs in prop::collection::vec(-30.0f64..30.0, 24),
        ys in prop::collection::vec(-30.0f64..30.0, 24),
        seed in 0u64..1000,
    ) {
        prop_assume!(all_distinct(&xs) && all_distinct(&ys));
        let mut order: Vec<usize> = (0..24).collect();
        use rand::seq::SliceRandom;
        order.shuffle(&mut keyed_rng(seed, "prop-joint-reorder", &[]));
        let px: Vec<f64> = order.iter().map(|&i| xs[i]).collect();
        let py: Vec<f64> = order.iter().map(|&i| ys[i]).collect();
        let cfg = mi_cfg(4, BiasCorrection::None);
        let a = daily_mi(&xs, &ys, &cfg).unwrap();
        let b = daily_mi(&px, &py, &cfg).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }
}

fn cube_from_values(values: Vec<Vec<(u32, bool)>>, slot_width: u32) -> ActivityCube {
    let n_slots = (24 / slot_width) as usize;
    let cells: BTreeMap<String, CellSeries> = values
        .into_iter()
        .enumerate()
        .map(|(i, cell)| {
            assert_eq!(cell.len() % n_slots, 0);
            let series = CellSeries {
                values: cell.iter().map(|&(v, p)| if p { v } else { 0 }).collect(),
                present: cell.iter().map(|&(_, p)| p).collect(),
            };
            (format!("C{i:03}"), series)
        })
        .collect();
    let n_days = cells.values().next().unwrap().values.len() / n_slots;
    ActivityCube::from_parts(cells, "2015-04-01".parse().unwrap(), n_days, slot_width).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zscores_have_zero_mean_unit_sd_and_affine_invariance(
        raw in prop::collection::vec(prop::collection::vec((0u32..2000, prop::bool::weighted(0.9)), 24 * 4), 1..4),
        scale in 1u32..5,
        shift in 0u32..50,
    ) {
        let cube = cube_from_values(raw.clone(), 1);
        let z = hourly_zscore(&cube).unwrap();
        for c in 0..raw.len() {
            let cell = z.cell(c);
            for slot in 0..24 {
                if cell.degenerate[slot] {
                    continue;
                }
                let mut sum = 0.0;
                let mut sumsq = 0.0;
                let mut n = 0.0;
                for day in 0..4 {
                    let idx = day * 24 + slot;
                    if cell.present[idx] {
                        sum += cell.z[idx];
                        sumsq += cell.z[idx] * cell.z[idx];
                        n += 1.0;
                    }
                }
                prop_assert!(n >= 2.0);
                prop_assert!((sum / n).abs() <= 1e-12);
                prop_assert!(((sumsq / n).sqrt() - 1.0).abs() <= 1e-9);
            }
        }

        // a*x + b with a > 0 leaves z untouched.
        let scaled: Vec<Vec<(u32, bool)>> = raw
            .iter()
            .map(|cell| cell.iter().map(|&(v, p)| (v * scale + shift, p)).collect())
            .collect();
        let z2 = hourly_zscore(&cube_from_values(scaled, 1)).unwrap();
        for c in 0..raw.len() {
            let (a, b) = (z.cell(c), z2.cell(c));
            prop_assert_eq!(&a.degenerate, &b.degenerate);
            prop_assert_eq!(&a.present, &b.present);
            for (za, zb) in a.z.iter().zip(&b.z) {
                prop_assert!((za - zb).abs() <= 1e-9, "z {} vs {}", za, zb);
            }
        }
    }

    #[test]
    fn canonical_activity_round_trips(
        raw in prop::collection::vec(prop::collection::vec((0u32..5000, prop::bool::weighted(0.8)), 12 * 3), 1..4),
    ) {
        let cube = cube_from_values(raw, 2);
        let mut buf = Vec::new();
        write_canonical_activity_csv(&cube, &mut buf).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("activity.csv");
        std::fs::write(&path, &buf).unwrap();
        let reread = load_activity(&path, 2).unwrap();
        prop_assert_eq!(reread, cube);
    }

    #[test]
    fn assignment_ignores_row_order(
        n_cells in 1usize..12,
        seed in 0u64..1000,
    ) {
        let mut rng = keyed_rng(seed, "prop-assign", &[]);
        use rand::Rng as _;
        use rand::seq::SliceRandom as _;
        let munis = ["MA", "MB", "MC"];
        let mut overlaps = Vec::new();
        for c in 0..n_cells {
            for m in &munis {
                if rng.gen::<f64>() < 0.7 {
                    overlaps.push(OverlapRow {
                        cell_id: format!("C{c:02}"),
                        municipality_id: (*m).to_string(),
                        overlap_km2: (rng.gen::<f64>() * 10.0).max(0.0),
                    });
                }
            }
        }
        let region_map = vec![
            RegionMapRow { municipality_id: "MA".into(), region_id: "R1".into() },
            RegionMapRow { municipality_id: "MB".into(), region_id: "R1".into() },
            RegionMapRow { municipality_id: "MC".into(), region_id: "R2".into() },
        ];
        let (a1, w1) = assign_cells(&overlaps, &region_map).unwrap();
        let mut shuffled = overlaps.clone();
        shuffled.shuffle(&mut rng);
        let mut region_map_rev = region_map.clone();
        region_map_rev.reverse();
        let (a2, w2) = assign_cells(&shuffled, &region_map_rev).unwrap();
        prop_assert_eq!(a1, a2);
        let sorted = |mut v: Vec<String>| { v.sort(); v };
        prop_assert_eq!(sorted(w1), sorted(w2));
    }
}

fn random_design(seed: u64, n: usize, k: usize) -> DesignSpec {
    let mut rng = keyed_rng(seed, "prop-design", &[n as u64, k as u64]);
    let x: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect();
    let y: Vec<f64> = (0..n)
        .map(|i| {
            let signal: f64 = x.iter().enumerate().map(|(j, col)| (j as f64 - 1.0) * col[i]).sum();
            let noise: f64 = StandardNormal.sample(&mut rng);
            signal + noise
        })
        .collect();
    let names = (0..k).map(|j| format!("x{j}")).collect();
    DesignSpec::new("y", names, y, x).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subset_r2_is_monotone_in_the_subset(seed in 0u64..5000) {
        let spec = random_design(seed, 30, 4);
        let table = all_subsets_r2(&spec).unwrap();
        for mask in 1usize..(1 << 4) {
            for j in 0..4 {
                if mask & (1 << j) != 0 {
                    let without = mask & !(1 << j);
                    prop_assert!(
                        table.r2[mask] + 1e-9 >= table.r2[without],
                        "R2 dropped adding x{}: {} -> {}",
                        j, table.r2[without], table.r2[mask]
                    );
                }
            }
        }
    }

    #[test]
    fn decompositions_add_up(seed in 0u64..5000) {
        let spec = random_design(seed, 40, 3);
        let table = all_subsets_r2(&spec).unwrap();
        let full = table.full_r2();

        let com = commonality(&table);
        let component_sum: f64 = com.components[1..].iter().sum();
        prop_assert!((component_sum - full).abs() <= 1e-10);
        for i in 0..3 {
            prop_assert!((com.unique[i] + com.common[i] - com.total[i]).abs() <= 1e-10);
            // Tot equals the squared zero-order correlation with y.
            let xi = &spec.x[i];
            let r = pearson(xi, &spec.y);
            prop_assert!((com.total[i] - r * r).abs() <= 1e-10, "Tot {} vs r^2 {}", com.total[i], r * r);
        }

        let shares = lmg(&table);
        let lmg_sum: f64 = shares.iter().sum();
        prop_assert!((lmg_sum - full).abs() <= 1e-10);

        // General dominance equals LMG.
        let dom = dominance(&table);
        for i in 0..3 {
            prop_assert!((dom.general[i] - shares[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn dominance_chain_is_implicational(seed in 0u64..5000) {
        let spec = random_design(seed, 25, 4);
        let table = all_subsets_r2(&spec).unwrap();
        let dom = dominance(&table);
        for p in &dom.pairs {
            if p.complete != Verdict::Undetermined {
                prop_assert_eq!(p.conditional, p.complete, "complete must imply conditional");
            }
            if p.conditional != Verdict::Undetermined {
                prop_assert_eq!(p.general, p.conditional, "conditional must imply general");
            }
        }
    }

    #[test]
    fn morans_i_is_affine_invariant(
        seed in 0u64..5000,
        scale in prop::sample::select(vec![-3.0f64, -0.5, 0.25, 2.0]),
        shift in -10.0f64..10.0,
    ) {
        let mut rng = keyed_rng(seed, "prop-moran", &[]);
        let centroids: Vec<(String, f64, f64)> = (0..10)
            .map(|i| {
                let jitter: f64 = StandardNormal.sample(&mut rng);
                (format!("R{i:02}"), 9.0 + 0.05 * f64::from(i as u8), 45.0 + 0.02 * jitter)
            })
            .collect();
        let values: Vec<f64> = (0..10).map(|_| StandardNormal.sample(&mut rng)).collect();
        let w = build_weights(&centroids, WeightScheme::InverseDistance).unwrap();
        let base = morans_i("v", &values, &w, 19, seed).unwrap();
        let transformed: Vec<f64> = values.iter().map(|v| scale * v + shift).collect();
        let other = morans_i("v", &transformed, &w, 19, seed).unwrap();
        prop_assert!((base.observed_i - other.observed_i).abs() <= 1e-9);
    }
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
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

/// Pairs built as z_j = alpha * z_i + (1 - alpha) * noise: the estimated
/// average daily MI must increase with the coupling, averaged over seeds.
#[test]
fn estimated_mi_increases_with_coupling() {
    let cfg = mi_cfg(4, BiasCorrection::MillerMadow);
    let n_days = 15;
    let n_slots = 24;
    let mut averages = Vec::new();
    for &alpha in &[0.0f64, 0.5, 0.9] {
        let mut total = 0.0;
        for seed in 0..20u64 {
            let mut day_sum = 0.0;
            for day in 0..n_days {
                let mut rng = keyed_rng(seed, "coupling-recovery", &[alpha.to_bits(), day]);
                let zi: Vec<f64> = (0..n_slots).map(|_| StandardNormal.sample(&mut rng)).collect();
                let zj: Vec<f64> = zi
                    .iter()
                    .map(|z| {
                        let eps: f64 = StandardNormal.sample(&mut rng);
                        alpha * z + (1.0 - alpha) * eps
                    })
                    .collect();
                day_sum += daily_mi(&zi, &zj, &cfg).unwrap();
            }
            total += day_sum / n_days as f64;
        }
        averages.push(total / 20.0);
    }
    assert!(
        averages[0] < averages[1] && averages[1] < averages[2],
        "not increasing: {averages:?}"
    );
}
