mod common;

use boxball::paths::path_of_config;
use boxball::permutations::{avoids, Permutation};
use boxball::random::{
    dual_config, harris_walk, sample_config, sample_config_with, sample_gw_forest, stream_rng,
    subexcursion_count, uniform_dyck_path, uniform_dyck_path_with, uniform_stack_sortable, RandomParams,
};
use boxball::stats::chi_square_goodness_of_fit;
use boxball::young::young_rows;
use boxball::BoxBallConfig;
use common::arb_config;
use proptest::prelude::*;
use std::collections::HashMap;

fn within_three_sigma(observed: f64, mean: f64, sd: f64) -> bool {
    (observed - mean).abs() <= 3.0 * sd
}

#[test]
fn ball_count_mean() {
    let (n, p) = (100_000, 0.5);
    let total: usize = (0..100)
        .map(|seed| sample_config(RandomParams::new(n, p, seed).unwrap()).ball_count())
        .sum();
    let sd = (n as f64 * p * (1.0 - p) / 100.0).sqrt();
    assert!(within_three_sigma(total as f64 / 100.0, n as f64 * p, sd));
}

#[test]
fn single_box_probability() {
    let p = 0.3;
    let draws = 100_000;
    let hits = (0..draws)
        .filter(|&seed| sample_config(RandomParams::new(1, p, seed).unwrap()).contains(1))
        .count();
    let sd = (p * (1.0 - p) / draws as f64).sqrt();
    assert!(within_three_sigma(hits as f64 / draws as f64, p, sd));
}

#[test]
fn sampling_is_deterministic() {
    let params = RandomParams::new(5000, 0.4, 0xdead_beef).unwrap();
    assert_eq!(sample_config(params), sample_config(params));
    assert_eq!(sample_gw_forest(params), sample_gw_forest(params));
    assert_eq!(uniform_dyck_path(50, 9).unwrap(), uniform_dyck_path(50, 9).unwrap());
    let other = RandomParams::new(5000, 0.4, 0xdead_bef0).unwrap();
    assert_ne!(sample_config(params), sample_config(other));
}

#[test]
fn dual_examples() {
    let x = BoxBallConfig::new([1, 2]).unwrap();
    assert_eq!(dual_config(&x, 3).unwrap(), BoxBallConfig::new([1]).unwrap());
    assert!(dual_config(&x, 1).is_err());
}

#[test]
fn dual_of_supercritical_is_subcritical() {
    let (n, seeds) = (100, 10_000u64);
    let total: usize = (0..seeds)
        .map(|s| {
            let x = sample_config(RandomParams::new(n, 0.7, s).unwrap());
            dual_config(&x, n).unwrap().ball_count()
        })
        .sum();
    let sd = (n as f64 * 0.21 / seeds as f64).sqrt();
    assert!(within_three_sigma(total as f64 / seeds as f64, 30.0, sd));
}

#[test]
fn empty_walk_is_flat() {
    let t = harris_walk(&BoxBallConfig::empty(), 20);
    assert!(t.h.iter().all(|&h| h == 0));
    assert_eq!(subexcursion_count(&t, 1), 0);
}

#[test]
fn golden_walk() {
    let x = BoxBallConfig::new([2, 3, 5, 6, 7, 11]).unwrap();
    let t = harris_walk(&x, 13);
    let h: Vec<i32> = t.h.iter().map(|&v| v as i32).collect();
    assert_eq!(h, path_of_config(&x).heights());
}

/// Subexcursion heights found by scanning every start for its first return.
fn brute_force_counts(s: &[i64]) -> HashMap<usize, usize> {
    let mut counts = HashMap::new();
    for l in 0..s.len() - 1 {
        if s[l + 1] <= s[l] {
            continue;
        }
        if let Some(r) = (l + 1..s.len()).find(|&r| s[r] == s[l]) {
            let top = s[l..=r].iter().max().unwrap() - s[l];
            *counts.entry(top as usize).or_insert(0) += 1;
        }
    }
    counts
}

#[test]
fn subexcursions_exhaustive() {
    let n = 14;
    for mask in 0u32..1 << n {
        let bits: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
        let x = BoxBallConfig::from_bits(&bits);
        let t = harris_walk(&x, n);
        let expected = brute_force_counts(&t.s);
        let rows = young_rows(&path_of_config(&x)).unwrap();
        for i in 1..=n {
            let got = subexcursion_count(&t, i);
            assert_eq!(got, expected.get(&i).copied().unwrap_or(0), "mask {mask:b}, i = {i}");
            let rho = rows.get(i - 1).copied().unwrap_or(0);
            assert!(got.abs_diff(rho) <= 1, "mask {mask:b}, i = {i}: N = {got}, rho = {rho}");
        }
    }
}

#[test]
fn dyck_paths_are_uniform() {
    let catalan = [1usize, 2, 5, 14, 42];
    let draws = 1_000_000u64;
    for n in 1..=5 {
        let mut rng = stream_rng(2024, n as u64);
        let mut counts: HashMap<Vec<i32>, u64> = HashMap::new();
        for _ in 0..draws {
            let g = uniform_dyck_path_with(&mut rng, n);
            assert!(g.is_dyck() && g.len() == 2 * n + 1);
            *counts.entry(g.into_heights()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), catalan[n - 1]);
        let observed: Vec<u64> = counts.into_values().collect();
        let probs = vec![1.0 / catalan[n - 1] as f64; observed.len()];
        let fit = chi_square_goodness_of_fit(&observed, &probs).unwrap();
        assert!(fit.p_value > 0.01, "n = {n}: {fit:?}");
    }
}

#[test]
fn stack_sortable_of_length_three() {
    let draws = 100_000u64;
    let mut counts: HashMap<String, u64> = HashMap::new();
    let p231: Permutation = "2 3 1".parse().unwrap();
    for seed in 0..draws {
        let s = uniform_stack_sortable(3, seed).unwrap();
        assert!(avoids(&s, &p231).unwrap());
        *counts.entry(s.to_string()).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 5);
    let sd = (0.2 * 0.8 / draws as f64).sqrt();
    for (perm, c) in counts {
        assert!(within_three_sigma(c as f64 / draws as f64, 0.2, sd), "{perm}: {c}");
    }
}

#[test]
fn root_offspring_mean() {
    let (p, samples) = (0.3, 100_000u64);
    let total: usize = (0..samples)
        .map(|s| {
            let f = sample_gw_forest(RandomParams::new(200, p, s).unwrap());
            let root = f.roots().next();
            root.map_or(0, |r| f.children(r).count())
        })
        .sum();
    let mean = p / (1.0 - p);
    let sd = (p / (1.0 - p).powi(2) / samples as f64).sqrt();
    assert!(within_three_sigma(total as f64 / samples as f64, mean, sd));
}

#[test]
fn sparse_forests_are_mostly_roots() {
    let f = sample_gw_forest(RandomParams::new(1000, 0.01, 5).unwrap());
    assert!(f.tree_count() > 900);
    assert!(f.max_level() <= 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn harris_identities(x in arb_config(300)) {
        let n = x.extent().max(1);
        let t = harris_walk(&x, n);
        let mut min = 0;
        for k in 1..=n {
            prop_assert_eq!(t.h[k], (t.h[k - 1] + t.xi[k - 1] as i64).max(0));
            min = min.min(t.s[k]);
            prop_assert_eq!(t.h[k], t.s[k] - min);
        }
        let g = path_of_config(&x);
        for k in 0..=n {
            prop_assert_eq!(t.h[k], g.at(k) as i64);
        }
    }

    #[test]
    fn dual_is_an_involution(x in arb_config(300), extra in 0usize..20) {
        let n = x.extent() + extra;
        prop_assert_eq!(dual_config(&dual_config(&x, n).unwrap(), n).unwrap(), x);
    }

    #[test]
    fn streams_decouple_trials(seed in any::<u64>(), t in 0u64..1000) {
        let a = sample_config_with(&mut stream_rng(seed, t), 256, 0.5);
        let b = sample_config_with(&mut stream_rng(seed, t), 256, 0.5);
        prop_assert_eq!(a, b);
    }
}
