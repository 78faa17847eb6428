//! Limit laws for rows and columns of random diagrams.

use std::f64::consts::PI;

use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal upper tail `1 - Phi(x)`, accurate far into the tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("p = {p} is not in (0, 1)")))
    }
}

/// `theta = (1 - p) / p`.
pub fn theta(p: f64) -> f64 {
    (1.0 - p) / p
}

/// Probability that a walk started at 1 hits 0 before `big_n`.
fn hit_zero_first(big_n: u32, p: f64) -> f64 {
    let t = theta(p);
    if (t - 1.0).abs() < 1e-12 {
        1.0 - 1.0 / big_n as f64
    } else {
        let tn = t.powi(big_n as i32);
        (tn - t) / (tn - 1.0)
    }
}

/// `mu_i = P{max of S over its first excursion = i}`, the limit of
/// `rho_i(n) / n`.
pub fn mu_i_theoretical(i: usize, p: f64) -> Result<f64> {
    if i == 0 {
        return Err(Error::Domain("row index i starts at 1".into()));
    }
    check_p(p)?;
    let i = i as u32;
    Ok(p * (hit_zero_first(i + 1, p) - hit_zero_first(i, p)))
}

/// Normal approximation of the first row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowClt {
    pub mean: f64,
    /// `n p (1 - p) (1 - 3 p (1 - p))`.
    pub variance: f64,
    /// Exact variance of the number of `10` patterns among the first `n`
    /// boxes: `(n - 1) p (1 - p) - (3n - 5) p^2 (1 - p)^2`.
    pub exact_variance: f64,
}

pub fn row_clt_reference(n: usize, p: f64) -> Result<RowClt> {
    check_p(p)?;
    let n = n as f64;
    let q = p * (1.0 - p);
    Ok(RowClt {
        mean: n * q,
        variance: n * q * (1.0 - 3.0 * q),
        exact_variance: (n - 1.0) * q - (3.0 * n - 5.0) * q * q,
    })
}

/// Gumbel-type sandwich for the longest soliton when `p < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subcritical {
    pub p: f64,
    pub theta: f64,
    /// `log_theta((1 - 2p)^2 n / (1 - p))`.
    pub center: f64,
}

impl Subcritical {
    /// `exp(-theta^{-x})`.
    pub fn lower(&self, x: f64) -> f64 {
        (-self.theta.powf(-x)).exp()
    }

    /// `exp(-theta^{-(x + 1)})`.
    pub fn upper(&self, x: f64) -> f64 {
        (-self.theta.powf(-(x + 1.0))).exp()
    }

    /// Upper envelope for the `j`-th column:
    /// `exp(-theta^{-(x + 1)}) sum_{k < j} theta^{-kx} / k!`.
    pub fn upper_column(&self, x: f64, j: usize) -> f64 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 0..j {
            if k > 0 {
                term *= self.theta.powf(-x) / k as f64;
            }
            sum += term;
        }
        (self.upper(x) * sum).min(1.0)
    }

    /// Distribution function of the height of one excursion of `H`:
    /// `1 - (1 - 2p) / (theta^{floor(x) + 1} - 1)` for `x >= 0`.
    pub fn excursion_height_cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        1.0 - (1.0 - 2.0 * self.p) / (self.theta.powf(x.floor() + 1.0) - 1.0)
    }
}

pub fn subcritical_reference(n: usize, p: f64) -> Result<Subcritical> {
    check_p(p)?;
    if p >= 0.5 {
        return Err(Error::Regime {
            kind: "subcritical".into(),
            reason: format!("needs p < 1/2, got {p}"),
        });
    }
    let t = theta(p);
    let arg = (1.0 - 2.0 * p).powi(2) * n as f64 / (1.0 - p);
    Ok(Subcritical {
        p,
        theta: t,
        center: arg.ln() / t.ln(),
    })
}

/// `P{h_j >= y}` for the `j`-th largest excursion height of reflected
/// Brownian motion on `[0, 1]`:
/// `2^{j+1} sum_k (-1)^k C(k + j - 1, k) (1 - Phi((2k + 2j - 1) y))`.
pub fn csaki_hu_tail(j: usize, y: f64) -> f64 {
    assert!(j >= 1, "rank j starts at 1");
    if y <= 0.0 {
        return 1.0;
    }
    let prefactor = 2f64.powi(j as i32 + 1);
    let mut binom = 1.0;
    let mut sum = 0.0;
    for k in 0..50_000_000u64 {
        if k > 0 {
            binom *= (k + j as u64 - 1) as f64 / k as f64;
        }
        let x = (2 * k + 2 * j as u64 - 1) as f64 * y;
        let term = binom * normal_sf(x);
        sum += if k % 2 == 0 { term } else { -term };
        // Past x = 1 the terms shrink monotonically.
        if x > 1.0 && prefactor * term < 1e-12 {
            break;
        }
    }
    (prefactor * sum).clamp(0.0, 1.0)
}

/// Centering and scale of the longest soliton when `p > 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supercritical {
    pub n: usize,
    /// `p / (1 - p)`.
    pub mu: f64,
    /// `(2p - 1) n`.
    pub mean: f64,
    /// `2 sqrt(p (1 - p) n)`.
    pub sd: f64,
}

impl Supercritical {
    /// `(eps + 5 / ln mu) ln n`, above which the second column is rare.
    pub fn lambda2_threshold(&self, eps: f64) -> f64 {
        (eps + 5.0 / self.mu.ln()) * (self.n as f64).ln()
    }
}

pub fn supercritical_reference(n: usize, p: f64) -> Result<Supercritical> {
    check_p(p)?;
    if p <= 0.5 {
        return Err(Error::Regime {
            kind: "supercritical".into(),
            reason: format!("needs p > 1/2, got {p}"),
        });
    }
    Ok(Supercritical {
        n,
        mu: p / (1.0 - p),
        mean: (2.0 * p - 1.0) * n as f64,
        sd: 2.0 * (p * (1.0 - p) * n as f64).sqrt(),
    })
}

/// `E[max_{[0,1]} |B|] = sqrt(pi / 2)`.
pub fn critical_mean() -> f64 {
    (PI / 2.0).sqrt()
}

/// Mean of the longest decreasing subsequence of a uniform stack-sortable
/// permutation of length `n`: `sqrt(pi n) - 1.5`.
pub fn permutation_lambda1_mean(n: usize) -> f64 {
    (PI * n as f64).sqrt() - 1.5
}
