//! Lattice paths of configurations and the operators acting on them.
//!
//! A path is stored as its explicit prefix of heights. Past the last sample
//! it is constant, so two paths are equal when their prefixes agree after
//! collapsing the trailing constant run.

use std::fmt;
use std::ops::Sub;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::BoxBallConfig;
use crate::error::{Error, Result};

/// Nearest-neighbor path `t -> heights[t]` with a constant tail.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticePath {
    heights: Vec<i32>,
}

/// Harris walk of the first `n` boxes of a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace {
    /// `xi[k - 1]` is `+1` if box `k` holds a ball and `-1` otherwise.
    pub xi: Vec<i8>,
    /// Partial sums `S_0 = 0, ..., S_n`.
    pub s: Vec<i64>,
    /// Reflected walk `H_k = S_k - min_{j <= k} S_j`.
    pub h: Vec<i64>,
}

impl LatticePath {
    /// Validates that consecutive heights differ by at most 1.
    pub fn new(heights: Vec<i32>) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::Domain("a path needs at least one sample".into()));
        }
        if let Some(t) = heights.windows(2).position(|w| (w[1] - w[0]).abs() > 1) {
            return Err(Error::Domain(format!("step {t} -> {} is not nearest-neighbor", t + 1)));
        }
        Ok(Self { heights })
    }

    pub(crate) fn from_vec(heights: Vec<i32>) -> Self {
        debug_assert!(!heights.is_empty());
        Self { heights }
    }

    pub fn heights(&self) -> &[i32] {
        &self.heights
    }

    pub fn into_heights(self) -> Vec<i32> {
        self.heights
    }

    /// Number of explicit samples.
    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Height at `t`, extending the last sample forever.
    pub fn at(&self, t: usize) -> i32 {
        *self.heights.get(t).unwrap_or_else(|| self.heights.last().unwrap())
    }

    pub fn max_height(&self) -> i32 {
        self.heights.iter().copied().max().unwrap()
    }

    /// Prefix with the trailing constant run collapsed to one sample.
    pub fn canonical(&self) -> &[i32] {
        let h = &self.heights;
        let last = *h.last().unwrap();
        let keep = h.iter().rposition(|&x| x != last).map_or(1, |i| i + 2);
        &h[..keep]
    }

    /// Starts at 0, stays nonnegative and ends at 0.
    pub fn is_motzkin(&self) -> bool {
        self.heights[0] == 0 && *self.heights.last().unwrap() == 0 && self.heights.iter().all(|&x| x >= 0)
    }

    /// Motzkin with flat steps only at height 0.
    pub fn is_h_restricted(&self) -> bool {
        self.is_motzkin() && self.heights.windows(2).all(|w| w[0] != w[1] || w[0] == 0)
    }

    /// Motzkin without flat steps inside the canonical prefix.
    pub fn is_dyck(&self) -> bool {
        self.is_motzkin() && self.canonical().windows(2).all(|w| w[0] != w[1])
    }

    pub fn upstroke_count(&self) -> usize {
        self.heights.windows(2).filter(|w| w[1] > w[0]).count()
    }

    pub(crate) fn require_motzkin(&self, what: &str) -> Result<()> {
        if self.is_motzkin() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{what} needs a Motzkin path")))
        }
    }
}

impl PartialEq for LatticePath {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for LatticePath {}

/// Comma-separated heights.
impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.heights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{h}")?;
        }
        Ok(())
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let heights = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::Domain(format!("bad height {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(heights)
    }
}

/// Path read left to right: up on a ball, down on an empty box at positive
/// height, flat on an empty box at height 0.
pub fn path_of_config(config: &BoxBallConfig) -> LatticePath {
    let extent = config.extent();
    let mut heights = Vec::with_capacity(extent + 1);
    heights.push(0);
    let mut h = 0i32;
    let mut next = config.occupied().iter().peekable();
    for k in 1..=extent {
        if next.next_if_eq(&&k).is_some() {
            h += 1;
        } else if h > 0 {
            h -= 1;
        }
        heights.push(h);
    }
    while h > 0 {
        h -= 1;
        heights.push(h);
    }
    LatticePath::from_vec(heights)
}

/// Path of a 0/1 sequence, closed by a descent to 0 after the last entry.
pub fn path_from_bits<I: IntoIterator<Item = bool>>(bits: I) -> LatticePath {
    let bits = bits.into_iter();
    let mut heights = Vec::with_capacity(bits.size_hint().0 + 1);
    heights.push(0);
    let mut h = 0i32;
    for b in bits {
        if b {
            h += 1;
        } else if h > 0 {
            h -= 1;
        }
        heights.push(h);
    }
    while h > 0 {
        h -= 1;
        heights.push(h);
    }
    LatticePath::from_vec(heights)
}

/// Inverse of [`path_of_config`] on h-restricted Motzkin paths.
pub fn config_of_path(path: &LatticePath) -> Result<BoxBallConfig> {
    if !path.is_h_restricted() {
        return Err(Error::Domain("expected an h-restricted Motzkin path".into()));
    }
    let occupied = path
        .heights()
        .windows(2)
        .enumerate()
        .filter_map(|(k, w)| (w[1] > w[0]).then_some(k + 1))
        .collect();
    Ok(BoxBallConfig::from_sorted(occupied))
}

/// Configuration after one sweep: box `k + 1` is occupied exactly when the
/// path steps down from `k` to `k + 1`.
pub fn next_config_of_path(path: &LatticePath) -> Result<BoxBallConfig> {
    if !path.is_h_restricted() {
        return Err(Error::Domain("expected an h-restricted Motzkin path".into()));
    }
    let occupied = path
        .heights()
        .windows(2)
        .enumerate()
        .filter_map(|(k, w)| (w[1] < w[0]).then_some(k + 1))
        .collect();
    Ok(BoxBallConfig::from_sorted(occupied))
}

/// Path read right to left from the rightmost ball `r`; zero on `[r, oo)`.
///
/// The result may start above 0 when the configuration is not the image of
/// a sweep.
pub fn backward_path(config: &BoxBallConfig) -> LatticePath {
    let r = config.extent();
    let mut heights = vec![0i32; r + 1];
    for k in (0..r).rev() {
        let next = heights[k + 1];
        heights[k] = if config.contains(k + 1) {
            next + 1
        } else if next >= 1 {
            next - 1
        } else {
            0
        };
    }
    LatticePath::from_vec(heights)
}

/// Maximal plateaus `[a, b]` whose neighbors both sit one level lower, with
/// height 0 assumed before the first sample. A plateau that reaches the tail
/// is never a hill.
pub fn hill_intervals(path: &LatticePath) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for_each_hill(path.heights(), |a, b| out.push((a, b)));
    out
}

pub fn hill_count(path: &LatticePath) -> usize {
    count_hills(path.heights())
}

/// Lowers every hill by one.
pub fn hill_flatten(path: &LatticePath) -> LatticePath {
    let mut h = path.heights().to_vec();
    flatten_hills_in_place(&mut h);
    LatticePath::from_vec(h)
}

fn for_each_hill(h: &[i32], mut visit: impl FnMut(usize, usize)) {
    let n = h.len();
    let mut a = 0;
    while a < n {
        let mut b = a;
        while b + 1 < n && h[b + 1] == h[a] {
            b += 1;
        }
        let left = if a == 0 { 0 } else { h[a - 1] };
        if b + 1 < n && left == h[a] - 1 && h[b + 1] == h[a] - 1 {
            visit(a, b);
        }
        a = b + 1;
    }
}

pub(crate) fn count_hills(h: &[i32]) -> usize {
    let mut c = 0;
    for_each_hill(h, |_, _| c += 1);
    c
}

/// Flattens hills in place and returns how many there were.
pub(crate) fn flatten_hills_in_place(h: &mut [i32]) -> usize {
    let mut hills = Vec::new();
    for_each_hill(h, |a, b| hills.push((a, b)));
    for &(a, b) in &hills {
        for x in &mut h[a..=b] {
            *x -= 1;
        }
    }
    hills.len()
}

/// `E_b(f)(t) = f(t) - min f` over the closed interval between `b` and `t`.
///
/// `b` past the explicit prefix behaves like the last sample.
pub fn pivot_excursion_values<T>(f: &[T], b: usize) -> Vec<T>
where
    T: Copy + PartialOrd + Sub<Output = T>,
{
    let mut out = f.to_vec();
    pivot_excursion_in_place(&mut out, b);
    out
}

pub(crate) fn pivot_excursion_in_place<T>(f: &mut [T], b: usize)
where
    T: Copy + PartialOrd + Sub<Output = T>,
{
    if f.is_empty() {
        return;
    }
    let b = b.min(f.len() - 1);
    let pivot = f[b];
    let mut m = pivot;
    for x in f[b..].iter_mut() {
        if *x < m {
            m = *x;
        }
        *x = *x - m;
    }
    let mut m = pivot;
    for x in f[..b].iter_mut().rev() {
        if *x < m {
            m = *x;
        }
        *x = *x - m;
    }
}

pub fn pivot_excursion(path: &LatticePath, b: usize) -> LatticePath {
    LatticePath::from_vec(pivot_excursion_values(path.heights(), b))
}

/// Last index of the explicit prefix attaining the maximum.
pub fn rightmost_argmax_values<T: Copy + PartialOrd>(f: &[T]) -> usize {
    let mut best = 0;
    for (i, &x) in f.iter().enumerate() {
        if x >= f[best] {
            best = i;
        }
    }
    best
}

pub fn rightmost_argmax(path: &LatticePath) -> usize {
    rightmost_argmax_values(path.heights())
}

/// Pivot excursion around the rightmost maximum.
pub fn excursion(path: &LatticePath) -> LatticePath {
    pivot_excursion(path, rightmost_argmax(path))
}

pub(crate) fn excursion_in_place(h: &mut [i32]) {
    let m = rightmost_argmax_values(h);
    pivot_excursion_in_place(h, m);
}

/// Harris walk over boxes `1..=n`.
pub fn harris_walk(config: &BoxBallConfig, n: usize) -> WalkTrace {
    let bits = config.to_bits(n);
    let mut xi = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n + 1);
    let mut h = Vec::with_capacity(n + 1);
    s.push(0i64);
    h.push(0i64);
    let mut min = 0i64;
    for b in bits {
        let step: i8 = if b { 1 } else { -1 };
        let next = s.last().unwrap() + step as i64;
        min = min.min(next);
        xi.push(step);
        s.push(next);
        h.push(next - min);
    }
    WalkTrace { xi, s, h }
}

/// `k -> 1 - X(n - k + 1)` on boxes `1..=n`.
pub fn dual_config(config: &BoxBallConfig, n: usize) -> Result<BoxBallConfig> {
    if config.extent() > n {
        return Err(Error::Domain(format!(
            "ball at box {} lies outside 1..={n}",
            config.extent()
        )));
    }
    let occupied = (1..=n).filter(|&k| !config.contains(n - k + 1)).collect();
    Ok(BoxBallConfig::from_sorted(occupied))
}

/// Number of subexcursions of height exactly `i` that start and end inside
/// the trace. A subexcursion starts at `l` with an up step and ends at the
/// first return to `S_l`.
pub fn subexcursion_count(trace: &WalkTrace, i: usize) -> usize {
    subexcursion_heights(&trace.s)
        .into_iter()
        .filter(|&h| h == i)
        .count()
}

/// Heights of the completed subexcursions of a ±1 walk, in order of return.
pub(crate) fn subexcursion_heights(s: &[i64]) -> Vec<usize> {
    let mut out = Vec::new();
    // Open subexcursions as (base level, running max).
    let mut open: Vec<(i64, i64)> = Vec::new();
    for w in s.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > a {
            open.push((a, b));
        } else if b < a {
            // The top frame, if any, has base `b`: it is the latest up step
            // that has not returned yet.
            if let Some((base, max)) = open.pop() {
                debug_assert_eq!(base, b);
                out.push((max - base) as usize);
                if let Some(parent) = open.last_mut() {
                    parent.1 = parent.1.max(max);
                }
            }
        }
    }
    out
}
