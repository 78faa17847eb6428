#![allow(dead_code)]

use boxball::random::{sample_config_with, stream_rng};
use boxball::{BoxBallConfig, LatticePath};
use proptest::prelude::*;

/// Bernoulli configuration on at most `max_n` boxes with a density from
/// {0.3, 0.5, 0.7}.
pub fn arb_config(max_n: usize) -> impl Strategy<Value = BoxBallConfig> {
    (1..=max_n, prop::sample::select(vec![0.3, 0.5, 0.7]), any::<u64>())
        .prop_map(|(n, p, seed)| sample_config_with(&mut stream_rng(seed, 0), n, p))
}

/// Builds a Motzkin path from steps in {-1, 0, 1}: a down step at 0 becomes
/// flat and the path is closed with down steps.
pub fn motzkin_from_steps(steps: &[i8]) -> LatticePath {
    let mut h = vec![0i32];
    for &s in steps {
        let last = *h.last().unwrap();
        h.push((last + s as i32).max(0));
    }
    while *h.last().unwrap() > 0 {
        let last = *h.last().unwrap();
        h.push(last - 1);
    }
    LatticePath::new(h).unwrap()
}

/// Motzkin path with flat steps allowed at any height.
pub fn arb_motzkin(max_len: usize) -> impl Strategy<Value = LatticePath> {
    prop::collection::vec(-1i8..=1, 0..max_len).prop_map(|s| motzkin_from_steps(&s))
}

/// `sup_t |f(t) - g(t)|` over both prefixes and their constant tails.
pub fn sup_distance(f: &LatticePath, g: &LatticePath) -> i32 {
    (0..f.len().max(g.len()))
        .map(|t| (f.at(t) - g.at(t)).abs())
        .max()
        .unwrap()
}

/// Pads a path with copies of its last sample.
pub fn padded(f: &LatticePath, len: usize) -> LatticePath {
    LatticePath::new((0..len.max(f.len())).map(|t| f.at(t)).collect()).unwrap()
}
