//! Ball configurations and the carrier update.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of occupied boxes on the positive integers.
///
/// Boxes are numbered from 1. The indices are kept sorted and distinct.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BoxBallConfig {
    occupied: Vec<usize>,
}

/// Result of running sweeps until the configuration is stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilized {
    pub config: BoxBallConfig,
    pub sweeps: u64,
}

impl BoxBallConfig {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a configuration from occupied box indices in any order.
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut occupied: Vec<usize> = indices.into_iter().collect();
        occupied.sort_unstable();
        if occupied.first() == Some(&0) {
            return Err(Error::Domain("box indices start at 1".into()));
        }
        if occupied.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("duplicate box index".into()));
        }
        Ok(Self { occupied })
    }

    /// Caller guarantees strictly increasing indices starting at 1 or later.
    pub(crate) fn from_sorted(occupied: Vec<usize>) -> Self {
        debug_assert!(occupied.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(occupied.first().map_or(true, |&k| k >= 1));
        Self { occupied }
    }

    /// Builds a configuration from a 0/1 indicator; entry `i` is box `i + 1`.
    pub fn from_bits(bits: &[bool]) -> Self {
        let occupied = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i + 1))
            .collect();
        Self { occupied }
    }

    pub fn occupied(&self) -> &[usize] {
        &self.occupied
    }

    pub fn ball_count(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    /// Index of the rightmost ball, or 0 for the empty configuration.
    pub fn extent(&self) -> usize {
        self.occupied.last().copied().unwrap_or(0)
    }

    pub fn contains(&self, k: usize) -> bool {
        self.occupied.binary_search(&k).is_ok()
    }

    /// Indicator of boxes `1..=n`.
    pub fn to_bits(&self, n: usize) -> Vec<bool> {
        let mut bits = vec![false; n];
        for &k in self.occupied.iter().take_while(|&&k| k <= n) {
            bits[k - 1] = true;
        }
        bits
    }

    /// Maximal runs of consecutive balls as `(first box, length)`.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &k in &self.occupied {
            match runs.last_mut() {
                Some((start, len)) if *start + *len == k => *len += 1,
                _ => runs.push((k, 1)),
            }
        }
        runs
    }

    /// One carrier sweep from left to right.
    ///
    /// The carrier picks up every ball it meets and drops one ball into each
    /// empty box while it is loaded.
    pub fn carrier_update(&self) -> Self {
        let occ = &self.occupied;
        let mut out = Vec::with_capacity(occ.len());
        let mut carried = 0usize;
        let mut i = 0;
        while i < occ.len() {
            let start = occ[i];
            let mut end = start;
            i += 1;
            while i < occ.len() && occ[i] == end + 1 {
                end += 1;
                i += 1;
            }
            carried += end - start + 1;
            let room = if i < occ.len() { occ[i] - end - 1 } else { carried };
            let drop = carried.min(room);
            out.extend(end + 1..=end + drop);
            carried -= drop;
        }
        Self { occupied: out }
    }

    /// The orbit `X_0, ..., X_s`.
    pub fn evolve(&self, sweeps: usize) -> Vec<Self> {
        let mut orbit = Vec::with_capacity(sweeps + 1);
        orbit.push(self.clone());
        for _ in 0..sweeps {
            let next = orbit.last().unwrap().carrier_update();
            orbit.push(next);
        }
        orbit
    }

    /// Runs are weakly increasing in length and each gap is at least as long
    /// as the run before it.
    pub fn is_stable(&self) -> bool {
        let runs = self.runs();
        runs.windows(2).all(|w| {
            let (a, la) = w[0];
            let (b, lb) = w[1];
            let gap = b - (a + la);
            la <= lb && gap >= la
        })
    }

    /// Default sweep budget for [`stabilize`](Self::stabilize).
    pub fn default_budget(&self) -> u64 {
        let m = self.ball_count() as u64;
        m * m + m + 1
    }

    /// Sweeps until stable. `max_sweeps` defaults to `m^2 + m + 1`.
    pub fn stabilize(&self, max_sweeps: Option<u64>) -> Result<Stabilized> {
        let budget = max_sweeps.unwrap_or_else(|| self.default_budget());
        let mut config = self.clone();
        let mut sweeps = 0;
        while !config.is_stable() {
            if sweeps == budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    balls: self.ball_count(),
                });
            }
            config = config.carrier_update();
            sweeps += 1;
        }
        Ok(Stabilized { config, sweeps })
    }

    /// Run lengths of a stable configuration, left to right.
    pub fn soliton_lengths(&self) -> Result<Vec<usize>> {
        if !self.is_stable() {
            return Err(Error::Precondition(
                "soliton lengths need a stable configuration".into(),
            ));
        }
        Ok(self.runs().into_iter().map(|(_, len)| len).collect())
    }
}

/// Parses a 0/1 string; position `i` (0-based) is box `i + 1`.
pub fn parse_config(s: &str) -> Result<BoxBallConfig> {
    let mut occupied = Vec::new();
    for (i, c) in s.chars().enumerate() {
        match c {
            '1' => occupied.push(i + 1),
            '0' => {}
            found => return Err(Error::Parse { position: i, found }),
        }
    }
    Ok(BoxBallConfig { occupied })
}

/// 0/1 string up to the rightmost ball.
pub fn serialize_config(config: &BoxBallConfig) -> String {
    config.to_string()
}

impl FromStr for BoxBallConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_config(s)
    }
}

impl fmt::Display for BoxBallConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .to_bits(self.extent())
            .into_iter()
            .map(|b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl TryFrom<Vec<usize>> for BoxBallConfig {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BoxBallConfig> for Vec<usize> {
    fn from(c: BoxBallConfig) -> Self {
        c.occupied
    }
}
