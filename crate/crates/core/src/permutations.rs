//! Stack permutations of configurations, paths and forests, with the
//! Robinson–Schensted shape and pattern checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::BoxBallConfig;
use crate::error::{Error, Result};
use crate::forests::RootedForest;
use crate::paths::LatticePath;
use crate::young::YoungDiagram;

/// One-line notation of a permutation of `1..=m`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let m = values.len();
        let mut seen = vec![false; m + 1];
        for &v in &values {
            if v == 0 || v > m || seen[v] {
                return Err(Error::Domain(format!("{values:?} is not a permutation of 1..={m}")));
            }
            seen[v] = true;
        }
        Ok(Self(values))
    }

    pub fn identity(m: usize) -> Self {
        Self((1..=m).collect())
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self(inv)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Domain(format!("{t:?} is not a positive integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// Balls are labelled `1..=m` left to right and carried on a stack; entry `i`
/// is the label of the `i`-th ball after one sweep.
pub fn sigma_of_config(config: &BoxBallConfig) -> Permutation {
    let mut stack = Vec::new();
    let mut out = Vec::with_capacity(config.ball_count());
    let mut balls = config.occupied().iter().peekable();
    let mut label = 0;
    let mut k = 1;
    while balls.peek().is_some() || !stack.is_empty() {
        if balls.next_if_eq(&&k).is_some() {
            label += 1;
            stack.push(label);
        } else if let Some(top) = stack.pop() {
            out.push(top);
        }
        k += 1;
    }
    Permutation(out)
}

/// `sigma(k) = k + u_k + 1 - h_k`, where the `k`-th upstroke ends at height
/// `h_k` and `u_k` upstrokes follow it before the path first drops below
/// `h_k`.
pub fn sigma_of_path(path: &LatticePath) -> Result<Permutation> {
    path.require_motzkin("sigma_of_path")?;
    let mut out = vec![0; path.upstroke_count()];
    // Open upstrokes as (ordinal k, height reached, upstrokes seen so far).
    let mut open: Vec<(usize, i32, usize)> = Vec::new();
    let mut ups = 0usize;
    for w in path.heights().windows(2) {
        if w[1] > w[0] {
            ups += 1;
            open.push((ups, w[1], ups));
        } else if w[1] < w[0] {
            let (k, h, seen) = open.pop().expect("Motzkin paths close every upstroke");
            out[k - 1] = k + (ups - seen) + 1 - h as usize;
        }
    }
    Ok(Permutation(out))
}

/// `sigma(k) = k + |subtree(v_k)| - level(v_k)` over non-root nodes `v_k` in
/// preorder.
pub fn sigma_of_forest(forest: &RootedForest) -> Permutation {
    let out = forest
        .non_roots()
        .enumerate()
        .map(|(i, v)| {
            let node = &forest.nodes()[v];
            i + 1 + node.subtree_size - node.level
        })
        .collect();
    Permutation(out)
}

/// Row lengths of the insertion tableau as a diagram.
pub fn rs_shape(perm: &Permutation) -> YoungDiagram {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &v in perm.values() {
        let mut x = v;
        let mut placed = false;
        for row in rows.iter_mut() {
            let i = row.partition_point(|&y| y < x);
            if i == row.len() {
                row.push(x);
                placed = true;
                break;
            }
            std::mem::swap(&mut row[i], &mut x);
        }
        if !placed {
            rows.push(vec![x]);
        }
    }
    YoungDiagram::from_rows(rows.iter().map(Vec::len).collect()).expect("insertion rows shrink")
}

/// Whether no subsequence of `perm` is order-isomorphic to `pattern`.
///
/// 231 and 312 use stack sorting; other patterns of length up to 4 are
/// scanned exhaustively.
pub fn avoids(perm: &Permutation, pattern: &Permutation) -> Result<bool> {
    let k = pattern.len();
    if !(2..=4).contains(&k) {
        return Err(Error::Domain(format!("patterns of length {k} are not supported")));
    }
    match pattern.values() {
        [2, 3, 1] => return Ok(stack_sortable(perm.values())),
        [3, 1, 2] => return Ok(stack_sortable(perm.inverse().values())),
        _ => {}
    }
    let mut chosen = Vec::with_capacity(k);
    Ok(!contains_from(perm.values(), pattern.values(), 0, &mut chosen))
}

fn stack_sortable(values: &[usize]) -> bool {
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 1;
    for &v in values {
        while stack.last().is_some_and(|&top| top < v) {
            if stack.pop() != Some(next) {
                return false;
            }
            next += 1;
        }
        stack.push(v);
    }
    while let Some(top) = stack.pop() {
        if top != next {
            return false;
        }
        next += 1;
    }
    true
}

fn contains_from(values: &[usize], pattern: &[usize], start: usize, chosen: &mut Vec<usize>) -> bool {
    let j = chosen.len();
    if j == pattern.len() {
        return true;
    }
    for i in start..values.len() {
        let v = values[i];
        let consistent = chosen
            .iter()
            .zip(pattern)
            .all(|(&c, &p)| (values[c] < v) == (p < pattern[j]));
        if consistent {
            chosen.push(i);
            if contains_from(values, pattern, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Shape statistics from greedy deletion of longest monotone subsequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyShape {
    pub lambda: Vec<usize>,
    pub rho: Vec<usize>,
    /// Whether `lambda` and `rho` agree with the insertion shape.
    pub matches_rs: bool,
}

/// `lambda_j` is the longest decreasing length after deleting `j - 1`
/// longest decreasing subsequences; `rho_i` likewise with increasing ones.
/// Among longest subsequences the lexicographically first position set is
/// deleted.
pub fn greedy_lambda_rho(perm: &Permutation) -> GreedyShape {
    let lambda = greedy_lengths(perm.values(), |a, b| a > b);
    let rho = greedy_lengths(perm.values(), |a, b| a < b);
    let shape = rs_shape(perm);
    let matches_rs = shape.columns() == lambda.as_slice() && shape.rows() == rho;
    GreedyShape {
        lambda,
        rho,
        matches_rs,
    }
}

fn greedy_lengths(values: &[usize], before: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut rest = values.to_vec();
    let mut lengths = Vec::new();
    while !rest.is_empty() {
        let n = rest.len();
        // best[i]: longest monotone subsequence starting at i.
        let mut best = vec![1usize; n];
        for i in (0..n).rev() {
            for j in i + 1..n {
                if before(rest[i], rest[j]) {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        let len = *best.iter().max().unwrap();
        let mut take = vec![false; n];
        let mut i = best.iter().position(|&b| b == len).unwrap();
        take[i] = true;
        for need in (1..len).rev() {
            let j = (i + 1..n)
                .find(|&j| before(rest[i], rest[j]) && best[j] == need)
                .unwrap();
            take[j] = true;
            i = j;
        }
        lengths.push(len);
        rest = rest
            .iter()
            .zip(&take)
            .filter(|(_, &t)| !t)
            .map(|(&v, _)| v)
            .collect();
    }
    lengths
}
