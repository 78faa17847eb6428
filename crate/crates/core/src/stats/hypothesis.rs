//! Sample statistics and goodness-of-fit tests.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

fn nonempty(samples: &[f64]) -> Result<()> {
    if samples.is_empty() {
        Err(Error::Domain("no samples".into()))
    } else {
        Ok(())
    }
}

pub fn mean(samples: &[f64]) -> Result<f64> {
    nonempty(samples)?;
    Ok(samples.iter().sum::<f64>() / samples.len() as f64)
}

/// Unbiased sample variance; 0 for a single sample.
pub fn variance(samples: &[f64]) -> Result<f64> {
    let m = mean(samples)?;
    if samples.len() == 1 {
        return Ok(0.0);
    }
    let ss: f64 = samples.iter().map(|x| (x - m) * (x - m)).sum();
    Ok(ss / (samples.len() - 1) as f64)
}

/// Lower median of the samples.
pub fn median(samples: &[f64]) -> Result<f64> {
    nonempty(samples)?;
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s[(s.len() - 1) / 2])
}

/// `sup_x |F_n(x) - F(x)|` for a right-continuous distribution function.
///
/// The supremum is taken over both sides of every sample, using the left
/// limit `F(x-)`, so ties and reference atoms are handled exactly.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    nonempty(samples)?;
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        let x = s[i];
        let mut j = i;
        while j < s.len() && s[j] == x {
            j += 1;
        }
        let below = i as f64 / n;
        let upto = j as f64 / n;
        d = d.max((cdf(x.next_down()) - below).abs());
        d = d.max((upto - cdf(x)).abs());
        i = j;
    }
    Ok(d)
}

/// Fraction of samples at or below `x`.
pub fn ecdf(samples_sorted: &[f64], x: f64) -> f64 {
    samples_sorted.partition_point(|&s| s <= x) as f64 / samples_sorted.len() as f64
}

/// `(mean - mu) / (sd / sqrt(n))`.
pub fn z_score(samples: &[f64], mu: f64, sd: f64) -> Result<f64> {
    let m = mean(samples)?;
    Ok((m - mu) / (sd / (samples.len() as f64).sqrt()))
}

/// Outcome of a chi-square test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn chi_square_p(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    dist.sf(statistic)
}

/// Goodness of fit of observed counts to cell probabilities. Adjacent cells
/// are pooled left to right until each expects at least 5 counts.
pub fn chi_square_goodness_of_fit(observed: &[u64], probs: &[f64]) -> Result<ChiSquare> {
    if observed.len() != probs.len() || observed.is_empty() {
        return Err(Error::Domain("observed counts and probabilities differ in length".into()));
    }
    let total: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (&o, &q) in observed.iter().zip(probs) {
        acc.0 += o as f64;
        acc.1 += q * total as f64;
        if acc.1 >= 5.0 {
            cells.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => cells.push(acc),
        }
    }
    let statistic = cells.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len().saturating_sub(1);
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: chi_square_p(statistic, dof),
    })
}

/// Two-sample homogeneity test on histograms over the same bins. Adjacent
/// bins are pooled left to right until each expects at least 5 counts in
/// both samples.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> Result<ChiSquare> {
    let len = a.len().max(b.len());
    let get = |h: &[u64], i: usize| h.get(i).copied().unwrap_or(0) as f64;
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Domain("both histograms need counts".into()));
    }
    let total = na + nb;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for i in 0..len {
        acc.0 += get(a, i);
        acc.1 += get(b, i);
        let pooled = acc.0 + acc.1;
        if pooled * na.min(nb) / total >= 5.0 {
            cells.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => cells.push(acc),
        }
    }
    let mut statistic = 0.0;
    for &(oa, ob) in &cells {
        let pooled = oa + ob;
        let (ea, eb) = (pooled * na / total, pooled * nb / total);
        statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    let dof = cells.len().saturating_sub(1);
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: chi_square_p(statistic, dof),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::reference::normal_cdf;

    #[test]
    fn moments() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&x).unwrap(), 2.5);
        assert!((variance(&x).unwrap() - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(median(&x).unwrap(), 2.0);
        assert!(mean(&[]).is_err());
    }

    #[test]
    fn ks_point_mass() {
        let step = |x: f64| if x >= 3.0 { 1.0 } else { 0.0 };
        assert_eq!(ks_distance(&[3.0; 10], step).unwrap(), 0.0);
        assert_eq!(ks_distance(&[2.0; 10], step).unwrap(), 1.0);
    }

    #[test]
    fn ks_against_uniform() {
        let u = |x: f64| x.clamp(0.0, 1.0);
        assert!((ks_distance(&[0.5], u).unwrap() - 0.5).abs() < 1e-12);
        let grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_distance(&grid, u).unwrap() <= 0.0005 + 1e-12);
    }

    #[test]
    fn ks_against_normal_quantiles() {
        let q: Vec<f64> = (1..=999)
            .map(|i| {
                let target = i as f64 / 1000.0;
                let (mut lo, mut hi) = (-10.0, 10.0);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if normal_cdf(mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            })
            .collect();
        assert!(ks_distance(&q, normal_cdf).unwrap() < 0.002);
    }

    #[test]
    fn z_values() {
        assert_eq!(z_score(&[1.0, 1.0, 1.0, 1.0], 0.0, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn chi_square() {
        let fit = chi_square_goodness_of_fit(&[50, 50], &[0.5, 0.5]).unwrap();
        assert_eq!(fit.statistic, 0.0);
        assert_eq!(fit.dof, 1);
        assert!((fit.p_value - 1.0).abs() < 1e-12);
        let bad = chi_square_goodness_of_fit(&[90, 10], &[0.5, 0.5]).unwrap();
        assert!(bad.p_value < 1e-10);
        let same = chi_square_homogeneity(&[10, 20, 30, 1], &[20, 40, 60, 2]).unwrap();
        assert!(same.statistic < 1e-12);
        assert_eq!(same.dof, 2);
        let diff = chi_square_homogeneity(&[100, 0], &[0, 100]).unwrap();
        assert!(diff.p_value < 1e-10);
    }
}
