mod common;

use boxball::forests::forest_of_path;
use boxball::paths::{config_of_path, path_of_config};
use boxball::permutations::{
    avoids, greedy_lambda_rho, rs_shape, sigma_of_config, sigma_of_forest, sigma_of_path, Permutation,
};
use boxball::random::uniform_stack_sortable;
use boxball::young::young_diagram;
use boxball::{BoxBallConfig, LatticePath};
use common::arb_config;
use proptest::prelude::*;
use std::collections::HashSet;

fn pattern(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn all_dyck_paths(n: usize) -> Vec<LatticePath> {
    fn go(h: &mut Vec<i32>, ups: usize, n: usize, out: &mut Vec<LatticePath>) {
        let last = *h.last().unwrap();
        if h.len() == 2 * n + 1 {
            out.push(LatticePath::new(h.clone()).unwrap());
            return;
        }
        if ups < n {
            h.push(last + 1);
            go(h, ups + 1, n, out);
            h.pop();
        }
        if last > 0 {
            h.push(last - 1);
            go(h, ups, n, out);
            h.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut vec![0], 0, n, &mut out);
    out
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n);
            out.push(q);
        }
    }
    out
}

/// Longest strictly monotone subsequence by quadratic DP.
fn longest(values: &[usize], increasing: bool) -> usize {
    let mut best = vec![1; values.len()];
    for i in 0..values.len() {
        for j in 0..i {
            if (values[j] < values[i]) == increasing {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Row lengths of the insertion shape by Greene's theorem: the first `k`
/// rows hold the largest union of `k` increasing subsequences, that is the
/// largest subset whose longest decreasing subsequence has length `<= k`.
fn greene_rows(values: &[usize]) -> Vec<usize> {
    let m = values.len();
    let mut best_union = vec![0usize; m + 1];
    for mask in 0u32..1 << m {
        let subset: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| values[i]).collect();
        let d = longest(&subset, false);
        for slot in best_union.iter_mut().skip(d.max(1)) {
            *slot = (*slot).max(subset.len());
        }
    }
    (1..=m)
        .map(|k| best_union[k] - best_union[k - 1])
        .take_while(|&r| r > 0)
        .collect()
}

#[test]
fn figure_values() {
    let x = BoxBallConfig::new([1, 3, 4, 5, 7, 8]).unwrap();
    assert_eq!(sigma_of_config(&x).to_string(), "1 4 6 5 3 2");
    let g = path_of_config(&x);
    let s = sigma_of_path(&g).unwrap();
    assert_eq!(s.to_string(), "1 6 5 2 4 3");
    assert_eq!(s.values()[2], 5);
    assert_eq!(sigma_of_forest(&forest_of_path(&g).unwrap()), s);
}

#[test]
fn catalan_bijection() {
    let catalan = [1, 2, 5, 14, 42, 132];
    let p231 = pattern("2 3 1");
    for n in 1..=6 {
        let images: HashSet<Vec<usize>> = all_dyck_paths(n)
            .iter()
            .map(|g| sigma_of_path(g).unwrap().values().to_vec())
            .collect();
        assert_eq!(images.len(), catalan[n - 1]);
        let avoiders: HashSet<Vec<usize>> = all_permutations(n)
            .into_iter()
            .filter(|v| avoids(&Permutation::new(v.clone()).unwrap(), &p231).unwrap())
            .collect();
        assert_eq!(images, avoiders, "n = {n}");
    }
}

#[test]
fn stack_sorting_shortcuts_agree_with_scanning() {
    // Reversing both permutation and pattern sends 231 to 132 and 312 to 213,
    // which go through the exhaustive scan.
    for n in 1..=7 {
        for v in all_permutations(n) {
            let p = Permutation::new(v.clone()).unwrap();
            let r = Permutation::new(v.iter().rev().copied().collect()).unwrap();
            assert_eq!(avoids(&p, &pattern("2 3 1")).unwrap(), avoids(&r, &pattern("1 3 2")).unwrap());
            assert_eq!(avoids(&p, &pattern("3 1 2")).unwrap(), avoids(&r, &pattern("2 1 3")).unwrap());
        }
    }
}

#[test]
fn insertion_shape_matches_greene() {
    for n in 1..=7 {
        for v in all_permutations(n) {
            let shape = rs_shape(&Permutation::new(v.clone()).unwrap());
            assert_eq!(shape.rows(), greene_rows(&v), "{v:?}");
        }
    }
}

#[test]
fn greedy_against_insertion() {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for n in 1..=8 {
        for g in all_dyck_paths(n) {
            let s = sigma_of_path(&g).unwrap();
            let greedy = greedy_lambda_rho(&s);
            let shape = rs_shape(&s);
            // The first greedy lengths are the longest monotone lengths.
            assert_eq!(greedy.lambda[0], shape.columns()[0]);
            assert_eq!(greedy.rho[0], shape.rows()[0]);
            checked += 1;
            if !greedy.matches_rs {
                mismatches.push(s.to_string());
            }
        }
    }
    for n in 9..=12 {
        for seed in 0..500 {
            let s = uniform_stack_sortable(n, seed).unwrap();
            checked += 1;
            if !greedy_lambda_rho(&s).matches_rs {
                mismatches.push(s.to_string());
            }
        }
    }
    eprintln!("greedy vs insertion: {} mismatches out of {checked}", mismatches.len());
    for m in mismatches.iter().take(10) {
        eprintln!("  {m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn insertion_shape_is_the_diagram(x in arb_config(200)) {
        prop_assume!(x.ball_count() > 0);
        let s = sigma_of_config(&x);
        prop_assert_eq!(rs_shape(&s), young_diagram(&path_of_config(&x)).unwrap());
    }

    #[test]
    fn inverse_laws(x in arb_config(200)) {
        let g = path_of_config(&x);
        let inv = sigma_of_config(&x).inverse();
        prop_assert_eq!(sigma_of_path(&g).unwrap(), inv.clone());
        prop_assert_eq!(sigma_of_forest(&forest_of_path(&g).unwrap()), inv);
        prop_assert_eq!(config_of_path(&g).unwrap(), x);
    }

    #[test]
    fn avoidance(x in arb_config(200)) {
        prop_assert!(avoids(&sigma_of_config(&x), &pattern("3 1 2")).unwrap());
        prop_assert!(avoids(&sigma_of_path(&path_of_config(&x)).unwrap(), &pattern("2 3 1")).unwrap());
    }

    #[test]
    fn small_shapes_match_greene(v in Just((1..=10).collect::<Vec<usize>>()).prop_shuffle()) {
        prop_assert_eq!(rs_shape(&Permutation::new(v.clone()).unwrap()).rows(), greene_rows(&v));
    }

    #[test]
    fn text_round_trip(v in Just((1..=30).collect::<Vec<usize>>()).prop_shuffle()) {
        let p = Permutation::new(v).unwrap();
        prop_assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p.clone());
        prop_assert_eq!(p.inverse().inverse(), p);
    }
}
