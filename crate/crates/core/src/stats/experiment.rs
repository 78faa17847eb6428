//! Monte Carlo experiments on random configurations and permutations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hypothesis::{ecdf, ks_distance, mean, median, variance};
use super::reference::{
    critical_mean, csaki_hu_tail, mu_i_theoretical, normal_cdf, permutation_lambda1_mean,
    row_clt_reference, subcritical_reference, supercritical_reference,
};
use crate::error::{Error, Result};
use crate::paths::config_of_path;
use crate::random::{sample_path_with, stream_rng, uniform_dyck_path_with, RandomParams};
use crate::young::{columns_from_heights, rows_from_heights};

/// Rows and columns recorded per trial.
pub const OBSERVABLES: usize = 5;

/// Stabilization sweeps are counted only up to this horizon.
pub const SWEEP_LIMIT: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Row densities `rho_i / n` against `mu_i`.
    Rows,
    /// Normal fluctuations of the first row.
    RowsClt,
    /// Gumbel sandwich for the longest soliton, `p < 1/2`.
    ColumnsSubcritical,
    /// Brownian scaling of the top columns, `p = 1/2`.
    ColumnsCritical,
    /// Condensation into one long soliton, `p > 1/2`.
    ColumnsSupercritical,
    /// Uniform stack-sortable permutations of length `n`.
    Permutation,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        Self::Rows,
        Self::RowsClt,
        Self::ColumnsSubcritical,
        Self::ColumnsCritical,
        Self::ColumnsSupercritical,
        Self::Permutation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Rows => "rows",
            Self::RowsClt => "rows-clt",
            Self::ColumnsSubcritical => "columns-subcritical",
            Self::ColumnsCritical => "columns-critical",
            Self::ColumnsSupercritical => "columns-supercritical",
            Self::Permutation => "permutation",
        }
    }

    fn check_regime(self, p: f64) -> Result<()> {
        let ok = match self {
            Self::ColumnsSubcritical => p < 0.5,
            Self::ColumnsCritical => p == 0.5,
            Self::ColumnsSupercritical => p > 0.5,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            let need = match self {
                Self::ColumnsSubcritical => "p < 0.5",
                Self::ColumnsCritical => "p = 0.5",
                _ => "p > 0.5",
            };
            Err(Error::Regime {
                kind: self.name().into(),
                reason: format!("needs {need}, got p = {p}"),
            })
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// Random stream of the trial; equal to its index.
    pub stream: u64,
    /// `rho_1..rho_5`, zero padded.
    pub rows: Vec<usize>,
    /// `lambda_1..lambda_5`, zero padded.
    pub columns: Vec<usize>,
    /// Sweeps until stable, when `n <= SWEEP_LIMIT`.
    pub sweeps: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
}

impl Rule {
    fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Self::AtMost => value <= bound,
            Self::Below => value < bound,
            Self::Above => value > bound,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::AtMost => "<=",
            Self::Below => "<",
            Self::Above => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub value: f64,
    pub rule: Rule,
    pub bound: f64,
    pub passed: bool,
}

impl Verdict {
    fn new(name: &str, value: f64, rule: Rule, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            rule,
            bound,
            passed: rule.holds(value, bound),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {:.6} {} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.rule.symbol(),
            self.bound
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub row_means: Vec<f64>,
    pub row_variances: Vec<f64>,
    pub column_means: Vec<f64>,
    pub column_variances: Vec<f64>,
}

/// Distribution function sampled on a grid, as `[x, F(x)]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfGrid {
    pub name: String,
    pub points: Vec<[f64; 2]>,
}

impl CdfGrid {
    /// Two whitespace-separated columns, one point per line.
    pub fn to_dat(&self) -> String {
        let mut out = format!("# {}\n", self.name);
        for [x, y] in &self.points {
            out.push_str(&format!("{x} {y}\n"));
        }
        out
    }
}

/// Wall-clock data; excluded from reproducibility comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub threads: usize,
    pub elapsed_micros: u64,
    pub trial_micros: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    pub per_trial: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    pub statistics: BTreeMap<String, f64>,
    pub reference: BTreeMap<String, f64>,
    pub cdfs: Vec<CdfGrid>,
    pub verdicts: Vec<Verdict>,
    pub metadata: Metadata,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// Everything except the metadata; identical for identical inputs.
    pub fn primary_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v.as_object_mut().unwrap().remove("metadata");
        v
    }

    /// One row per trial; the last column is wall time.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("stream");
        for i in 1..=OBSERVABLES {
            out.push_str(&format!(",rho{i}"));
        }
        for j in 1..=OBSERVABLES {
            out.push_str(&format!(",lambda{j}"));
        }
        out.push_str(",sweeps,micros\n");
        for (t, rec) in self.per_trial.iter().enumerate() {
            out.push_str(&rec.stream.to_string());
            for v in rec.rows.iter().chain(&rec.columns) {
                out.push_str(&format!(",{v}"));
            }
            let sweeps = rec.sweeps.map(|s| s.to_string()).unwrap_or_default();
            let micros = self.metadata.trial_micros.get(t).copied().unwrap_or(0);
            out.push_str(&format!(",{sweeps},{micros}\n"));
        }
        out
    }
}

/// Runs `trials` independent trials on the current rayon pool. Trial `t`
/// draws from stream `t` of `params.seed`.
pub fn run_experiment(kind: ExperimentKind, params: RandomParams, trials: usize) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is needed".into()));
    }
    kind.check_regime(params.p)?;
    let RandomParams { n, p, seed } = params;
    let start = Instant::now();
    let results: Vec<(TrialRecord, u64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(kind, n, p, seed, t))
        .collect();
    let elapsed_micros = start.elapsed().as_micros() as u64;
    let (per_trial, trial_micros): (Vec<_>, Vec<_>) = results.into_iter().unzip();

    let column = |get: &dyn Fn(&TrialRecord) -> usize| -> Vec<f64> {
        per_trial.iter().map(|r| get(r) as f64).collect()
    };
    let rows: Vec<Vec<f64>> = (0..OBSERVABLES).map(|i| column(&|r| r.rows[i])).collect();
    let cols: Vec<Vec<f64>> = (0..OBSERVABLES).map(|j| column(&|r| r.columns[j])).collect();
    let aggregates = Aggregates {
        row_means: rows.iter().map(|x| mean(x).unwrap()).collect(),
        row_variances: rows.iter().map(|x| variance(x).unwrap()).collect(),
        column_means: cols.iter().map(|x| mean(x).unwrap()).collect(),
        column_variances: cols.iter().map(|x| variance(x).unwrap()).collect(),
    };

    let mut eval = Evaluation::default();
    match kind {
        ExperimentKind::Rows => eval_rows(&mut eval, n, p, &rows)?,
        ExperimentKind::RowsClt => eval_rows_clt(&mut eval, n, p, &rows[0])?,
        ExperimentKind::ColumnsSubcritical => eval_subcritical(&mut eval, n, p, &cols[0])?,
        ExperimentKind::ColumnsCritical => eval_critical(&mut eval, n, &cols)?,
        ExperimentKind::ColumnsSupercritical => eval_supercritical(&mut eval, n, p, &cols)?,
        ExperimentKind::Permutation => eval_permutation(&mut eval, n, &rows, &cols[0])?,
    }

    Ok(ExperimentReport {
        kind,
        n,
        p,
        trials,
        seed,
        per_trial,
        aggregates,
        statistics: eval.statistics,
        reference: eval.reference,
        cdfs: eval.cdfs,
        verdicts: eval.verdicts,
        metadata: Metadata {
            threads: rayon::current_num_threads(),
            elapsed_micros,
            trial_micros,
        },
    })
}

fn run_trial(kind: ExperimentKind, n: usize, p: f64, seed: u64, t: u64) -> (TrialRecord, u64) {
    let start = Instant::now();
    let mut rng = stream_rng(seed, t);
    let path = match kind {
        ExperimentKind::Permutation => uniform_dyck_path_with(&mut rng, n),
        _ => sample_path_with(&mut rng, n, p),
    };
    let rows = rows_from_heights(path.heights(), OBSERVABLES);
    let columns = columns_from_heights(path.heights(), OBSERVABLES);
    let sweeps = if kind != ExperimentKind::Permutation && n <= SWEEP_LIMIT {
        config_of_path(&path)
            .ok()
            .and_then(|x| x.stabilize(None).ok())
            .map(|s| s.sweeps)
    } else {
        None
    };
    let record = TrialRecord {
        stream: t,
        rows,
        columns,
        sweeps,
    };
    (record, start.elapsed().as_micros() as u64)
}

#[derive(Default)]
struct Evaluation {
    statistics: BTreeMap<String, f64>,
    reference: BTreeMap<String, f64>,
    cdfs: Vec<CdfGrid>,
    verdicts: Vec<Verdict>,
}

impl Evaluation {
    fn stat(&mut self, name: &str, v: f64) {
        self.statistics.insert(name.into(), v);
    }

    fn reference(&mut self, name: &str, v: f64) {
        self.reference.insert(name.into(), v);
    }

    fn verdict(&mut self, name: &str, value: f64, rule: Rule, bound: f64) {
        self.verdicts.push(Verdict::new(name, value, rule, bound));
    }

    fn empirical_cdf(&mut self, name: &str, samples: &[f64], grid: &[f64]) {
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let points = grid.iter().map(|&x| [x, ecdf(&s, x)]).collect();
        self.cdfs.push(CdfGrid {
            name: name.into(),
            points,
        });
    }

    fn reference_cdf(&mut self, name: &str, f: impl Fn(f64) -> f64, grid: &[f64]) {
        let points = grid.iter().map(|&x| [x, f(x)]).collect();
        self.cdfs.push(CdfGrid {
            name: name.into(),
            points,
        });
    }

    /// `|mean, variance|` gates and the KS distance to the standard normal.
    fn normality(&mut self, prefix: &str, z: &[f64]) -> Result<()> {
        let m = mean(z)?;
        let v = variance(z)?;
        let ks = ks_distance(z, normal_cdf)?;
        self.stat(&format!("{prefix}_mean"), m);
        self.stat(&format!("{prefix}_variance"), v);
        self.stat(&format!("{prefix}_ks_normal"), ks);
        self.verdict(&format!("|mean of standardized {prefix}|"), m.abs(), Rule::Below, 0.05);
        self.verdict(&format!("|variance of standardized {prefix} - 1|"), (v - 1.0).abs(), Rule::Below, 0.05);
        self.verdict(&format!("KS(standardized {prefix}, normal)"), ks, Rule::AtMost, 0.02);
        let grid = grid(-4.0, 4.0, 0.05);
        self.empirical_cdf(&format!("{prefix}_standardized"), z, &grid);
        self.reference_cdf("normal", normal_cdf, &grid);
        Ok(())
    }
}

fn grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    let k = ((to - from) / step).round() as usize;
    (0..=k).map(|i| from + i as f64 * step).collect()
}

fn rel_err(value: f64, target: f64) -> f64 {
    (value / target - 1.0).abs()
}

fn eval_rows(e: &mut Evaluation, n: usize, p: f64, rows: &[Vec<f64>]) -> Result<()> {
    for i in 1..=3 {
        let mu = mu_i_theoretical(i, p)?;
        let density = mean(&rows[i - 1])? / n as f64;
        e.reference(&format!("mu{i}"), mu);
        e.stat(&format!("mean_rho{i}_over_n"), density);
        e.verdict(&format!("relative error of mean rho{i}/n"), rel_err(density, mu), Rule::AtMost, 0.01);
    }
    Ok(())
}

fn eval_rows_clt(e: &mut Evaluation, n: usize, p: f64, rho1: &[f64]) -> Result<()> {
    let r = row_clt_reference(n, p)?;
    e.reference("rho1_mean", r.mean);
    e.reference("rho1_variance", r.variance);
    let sd = r.variance.sqrt();
    let z: Vec<f64> = rho1.iter().map(|&x| (x - r.mean) / sd).collect();
    e.normality("rho1", &z)
}

fn eval_subcritical(e: &mut Evaluation, n: usize, p: f64, lambda1: &[f64]) -> Result<()> {
    let s = subcritical_reference(n, p)?;
    e.reference("center", s.center);
    e.reference("theta", s.theta);
    e.stat("mean_lambda1", mean(lambda1)?);
    let shifted: Vec<f64> = lambda1.iter().map(|&x| x - s.center).collect();
    let mut sorted = shifted.clone();
    sorted.sort_by(f64::total_cmp);
    let grid = grid(-3.0, 6.0, 0.01);
    let mut worst: f64 = 0.0;
    for &x in &grid {
        let g = ecdf(&sorted, x);
        worst = worst.max(s.lower(x) - g).max(g - s.upper(x));
    }
    e.stat("sandwich_violation", worst);
    e.verdict("sandwich violation on [-3, 6]", worst, Rule::AtMost, 0.03);
    e.empirical_cdf("lambda1_minus_center", &shifted, &grid);
    e.reference_cdf("lower_envelope", |x| s.lower(x), &grid);
    e.reference_cdf("upper_envelope", |x| s.upper(x), &grid);
    Ok(())
}

fn eval_critical(e: &mut Evaluation, n: usize, cols: &[Vec<f64>]) -> Result<()> {
    let root = (n as f64).sqrt();
    let scaled: Vec<Vec<f64>> = cols[..3]
        .iter()
        .map(|c| c.iter().map(|&x| x / root).collect())
        .collect();
    let law = |x: f64| if x <= 0.0 { 0.0 } else { 1.0 - csaki_hu_tail(1, x) };
    let ks = ks_distance(&scaled[0], law)?;
    e.stat("ks_lambda1", ks);
    e.verdict("KS(lambda1/sqrt(n), reflected Brownian maximum)", ks, Rule::AtMost, 0.05);
    let m = mean(&scaled[0])?;
    e.reference("mean_lambda1_over_sqrt_n", critical_mean());
    e.stat("mean_lambda1_over_sqrt_n", m);
    e.verdict("relative error of mean lambda1/sqrt(n)", rel_err(m, critical_mean()), Rule::AtMost, 0.02);
    for j in [2, 3] {
        let med = median(&scaled[j - 1])?;
        e.stat(&format!("median_lambda{j}_over_sqrt_n"), med);
        e.verdict(&format!("median lambda{j}/sqrt(n)"), med, Rule::Above, 0.1);
    }
    let disorder = (0..cols[0].len())
        .filter(|&t| cols[1][t] > cols[0][t] || cols[2][t] > cols[1][t])
        .count();
    e.stat("column_order_violations", disorder as f64);
    e.verdict("trials with lambda3 > lambda2 or lambda2 > lambda1", disorder as f64, Rule::AtMost, 0.0);
    let grid = grid(0.0, 3.0, 0.01);
    for (j, s) in scaled.iter().enumerate() {
        e.empirical_cdf(&format!("lambda{}_over_sqrt_n", j + 1), s, &grid);
    }
    e.reference_cdf("reflected_brownian_maximum", law, &grid);
    Ok(())
}

fn eval_supercritical(e: &mut Evaluation, n: usize, p: f64, cols: &[Vec<f64>]) -> Result<()> {
    let s = supercritical_reference(n, p)?;
    e.reference("lambda1_mean", s.mean);
    e.reference("lambda1_sd", s.sd);
    let z: Vec<f64> = cols[0].iter().map(|&x| (x - s.mean) / s.sd).collect();
    e.normality("lambda1", &z)?;
    let floor = (2.0 * p - 1.0 - 0.05) * n as f64;
    let big = cols[0].iter().filter(|&&x| x > floor).count() as f64 / cols[0].len() as f64;
    e.reference("lambda1_floor", floor);
    e.stat("frequency_lambda1_above_floor", big);
    e.verdict("frequency of lambda1 > (2p - 1 - 0.05) n", big, Rule::Above, 0.95);
    let threshold = s.lambda2_threshold(0.5);
    let second = cols[1].iter().filter(|&&x| x > threshold).count() as f64 / cols[1].len() as f64;
    e.reference("lambda2_threshold", threshold);
    e.stat("frequency_lambda2_above_threshold", second);
    e.verdict("frequency of lambda2 > (0.5 + 5/ln mu) ln n", second, Rule::Below, 0.05);
    Ok(())
}

fn eval_permutation(e: &mut Evaluation, n: usize, rows: &[Vec<f64>], lambda1: &[f64]) -> Result<()> {
    let rho1 = mean(&rows[0])?;
    let target = (n as f64 + 1.0) / 2.0;
    e.reference("rho1_mean", target);
    e.stat("mean_rho1", rho1);
    e.verdict("relative error of mean rho1", rel_err(rho1, target), Rule::AtMost, 0.01);
    let l1 = mean(lambda1)?;
    let target = permutation_lambda1_mean(n);
    e.reference("lambda1_mean", target);
    e.stat("mean_lambda1", l1);
    e.verdict("relative error of mean lambda1", rel_err(l1, target), Rule::AtMost, 0.03);
    let scaled = l1 / (n as f64).sqrt();
    let target = std::f64::consts::PI.sqrt();
    e.reference("lambda1_over_sqrt_n", target);
    e.stat("mean_lambda1_over_sqrt_n", scaled);
    e.verdict("relative error of mean lambda1/sqrt(n)", rel_err(scaled, target), Rule::AtMost, 0.03);
    for i in 1..=3 {
        let mu = mu_i_theoretical(i, 0.5)?;
        let density = mean(&rows[i - 1])? / (2 * n) as f64;
        e.reference(&format!("mu{i}"), mu);
        e.stat(&format!("mean_rho{i}_over_2n"), density);
        e.verdict(&format!("relative error of mean rho{i}/2n"), rel_err(density, mu), Rule::AtMost, 0.02);
    }
    Ok(())
}
