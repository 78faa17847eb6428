//! Seeded samplers.
//!
//! Every random object is drawn from a ChaCha8 stream. Stream `t` of seed `s`
//! is `ChaCha8Rng::seed_from_u64(s)` with its stream id set to `t`, so trial
//! `t` of an experiment sees the same numbers whatever the thread count.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::bitset::PackedConfig;
use crate::config::BoxBallConfig;
use crate::error::{Error, Result};
use crate::forests::RootedForest;
use crate::paths::LatticePath;
use crate::permutations::{sigma_of_path, Permutation};

pub use crate::paths::{dual_config, harris_walk, subexcursion_count, WalkTrace};

/// Horizon, ball density and seed of a Bernoulli configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl RandomParams {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("the horizon n must be positive".into()));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("p = {p} is not in (0, 1)")));
        }
        Ok(Self { n, p, seed })
    }
}

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Bernoulli(p) bits from one 32-bit draw each: a ball when the draw falls
/// below `p * 2^32`.
pub fn bernoulli_bits<R: RngCore>(rng: &mut R, n: usize, p: f64) -> impl Iterator<Item = bool> + '_ {
    let threshold = (p * 4294967296.0).round() as u64;
    (0..n).map(move |_| (rng.next_u32() as u64) < threshold)
}

pub fn sample_config_with<R: RngCore>(rng: &mut R, n: usize, p: f64) -> BoxBallConfig {
    let mut words = vec![0u64; n.div_ceil(64)];
    for (i, b) in bernoulli_bits(rng, n, p).enumerate() {
        if b {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    PackedConfig::from_words(words).to_config()
}

/// `X^{n,p}` from stream 0 of the seed.
pub fn sample_config(params: RandomParams) -> BoxBallConfig {
    sample_config_with(&mut stream_rng(params.seed, 0), params.n, params.p)
}

/// Path of `X^{n,p}` built straight from the bits; equal to
/// `path_of_config` of [`sample_config_with`] on the same stream.
pub fn sample_path_with<R: RngCore>(rng: &mut R, n: usize, p: f64) -> LatticePath {
    crate::paths::path_from_bits(bernoulli_bits(rng, n, p))
}

/// Galton–Watson forest with Geometric(1 - p) offspring, explored depth
/// first for `n` moves.
///
/// A move either enters the next unexplored child of the current node or
/// leaves the node once its children are exhausted; leaving a root starts a
/// new tree. Offspring counts are drawn when a node is first reached, so only
/// the explored part of each tree is ever sampled.
pub fn sample_gw_forest_with<R: Rng>(rng: &mut R, n: usize, p: f64) -> RootedForest {
    let offspring = Geometric::new(1.0 - p).expect("1 - p lies in (0, 1)");
    let mut levels = Vec::new();
    // Unexplored children of each node on the current root-to-node path.
    let mut pending: Vec<u64> = Vec::new();
    let mut moves = 0;
    while moves < n {
        levels.push(0);
        pending.push(offspring.sample(rng));
        while moves < n {
            moves += 1;
            let top = pending.last_mut().unwrap();
            if *top > 0 {
                *top -= 1;
                levels.push(pending.len());
                pending.push(offspring.sample(rng));
            } else {
                pending.pop();
                if pending.is_empty() {
                    break;
                }
            }
        }
    }
    RootedForest::from_levels(&levels).expect("depth-first levels are valid")
}

pub fn sample_gw_forest(params: RandomParams) -> RootedForest {
    sample_gw_forest_with(&mut stream_rng(params.seed, 0), params.n, params.p)
}

/// Uniform Dyck path with `n` up steps.
///
/// A shuffled word of `n` up and `n + 1` down steps has exactly one rotation
/// whose proper prefixes stay nonnegative: the one starting at the first
/// minimum of its prefix sums. That rotation ends with a down step, which is
/// dropped.
pub fn uniform_dyck_path_with<R: Rng>(rng: &mut R, n: usize) -> LatticePath {
    let mut word: Vec<i32> = std::iter::repeat_n(1, n).chain(std::iter::repeat_n(-1, n + 1)).collect();
    word.shuffle(rng);
    let mut sum = 0;
    let mut min = 0;
    let mut start = 0;
    for (i, &step) in word.iter().enumerate() {
        sum += step;
        if sum < min {
            min = sum;
            start = i + 1;
        }
    }
    word.rotate_left(start);
    let mut heights = Vec::with_capacity(2 * n + 1);
    heights.push(0);
    let mut h = 0;
    for &step in &word[..2 * n] {
        h += step;
        heights.push(h);
    }
    LatticePath::from_vec(heights)
}

pub fn uniform_dyck_path(n: usize, seed: u64) -> Result<LatticePath> {
    if n == 0 {
        return Err(Error::Domain("a Dyck path needs n >= 1".into()));
    }
    Ok(uniform_dyck_path_with(&mut stream_rng(seed, 0), n))
}

/// Uniform 231-avoiding permutation through the path bijection.
pub fn uniform_stack_sortable_with<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    sigma_of_path(&uniform_dyck_path_with(rng, n)).expect("Dyck paths are Motzkin")
}

pub fn uniform_stack_sortable(n: usize, seed: u64) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::Domain("a permutation needs n >= 1".into()));
    }
    Ok(uniform_stack_sortable_with(&mut stream_rng(seed, 0), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::path_of_config;

    #[test]
    fn params_validated() {
        assert!(RandomParams::new(0, 0.5, 1).is_err());
        assert!(RandomParams::new(5, 1.0, 1).is_err());
        assert!(RandomParams::new(5, f64::NAN, 1).is_err());
        assert!(RandomParams::new(5, 0.3, 1).is_ok());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..4).map(|_| stream_rng(7, 3).next_u32()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(stream_rng(7, 3).next_u64(), stream_rng(7, 4).next_u64());
        assert_ne!(stream_rng(7, 3).next_u64(), stream_rng(8, 3).next_u64());
    }

    #[test]
    fn config_and_path_agree() {
        let x = sample_config_with(&mut stream_rng(11, 2), 500, 0.4);
        let g = sample_path_with(&mut stream_rng(11, 2), 500, 0.4);
        assert_eq!(path_of_config(&x), g);
        assert!(x.extent() <= 500);
    }

    #[test]
    fn small_dyck_paths() {
        let g = uniform_dyck_path(1, 5).unwrap();
        assert_eq!(g.heights(), &[0, 1, 0]);
        for seed in 0..50 {
            let g = uniform_dyck_path(6, seed).unwrap();
            assert!(g.is_dyck());
            assert_eq!(g.len(), 13);
        }
        assert!(uniform_dyck_path(0, 1).is_err());
        assert_eq!(uniform_stack_sortable(1, 9).unwrap().values(), &[1]);
    }

    #[test]
    fn gw_forest_move_budget() {
        let f = sample_gw_forest(RandomParams::new(40, 0.5, 3).unwrap());
        // Every non-root node costs one move to enter.
        assert!(f.non_roots().count() <= 40);
        assert!(f.tree_count() >= 1);
    }
}
