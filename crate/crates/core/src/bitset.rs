//! Packed bitset configurations and the word-level sweep kernel.

use crate::config::BoxBallConfig;

/// Dense configuration: bit `i` of the packed words is box `i + 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PackedConfig {
    words: Vec<u64>,
}

impl PackedConfig {
    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Self { words }
    }

    pub fn from_config(config: &BoxBallConfig) -> Self {
        let mut words = vec![0u64; config.extent().div_ceil(64)];
        for &k in config.occupied() {
            let i = k - 1;
            words[i / 64] |= 1 << (i % 64);
        }
        Self { words }
    }

    pub fn to_config(&self) -> BoxBallConfig {
        let mut occupied = Vec::with_capacity(self.ball_count());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                occupied.push(wi * 64 + b + 1);
                w &= w - 1;
            }
        }
        BoxBallConfig::from_sorted(occupied)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn ball_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Whether box `k` (1-based) holds a ball.
    pub fn get(&self, k: usize) -> bool {
        k >= 1 && self.words.get((k - 1) / 64).is_some_and(|w| w >> ((k - 1) % 64) & 1 == 1)
    }

    /// One carrier sweep.
    ///
    /// Words are processed whole when the carrier is empty over an empty word
    /// or holds at least 64 balls, in which case every empty box is filled.
    pub fn sweep(&self) -> Self {
        let mut out = Vec::with_capacity(self.words.len() + 1);
        let mut carried: u64 = 0;
        for &w in &self.words {
            if carried == 0 && w == 0 {
                out.push(0);
            } else if carried >= 64 {
                let o = !w;
                carried = carried + w.count_ones() as u64 - o.count_ones() as u64;
                out.push(o);
            } else {
                let mut o = 0u64;
                for b in 0..64 {
                    if w >> b & 1 == 1 {
                        carried += 1;
                    } else if carried > 0 {
                        o |= 1 << b;
                        carried -= 1;
                    }
                }
                out.push(o);
            }
        }
        while carried > 0 {
            let k = carried.min(64);
            out.push(if k == 64 { u64::MAX } else { (1u64 << k) - 1 });
            carried -= k;
        }
        Self::from_words(out)
    }
}
