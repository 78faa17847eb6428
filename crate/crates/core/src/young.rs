//! Young diagrams of paths and configurations.
//!
//! Rows come from repeated hill flattening, columns from repeated pivot
//! excursions. Columns are the soliton lengths.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::BoxBallConfig;
use crate::error::{Error, Result};
use crate::paths::{
    count_hills, excursion_in_place, flatten_hills_in_place, path_of_config,
    subexcursion_heights, LatticePath,
};

/// Partition stored by its columns, longest first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct YoungDiagram {
    columns: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    lambda: Vec<usize>,
    rho: Vec<usize>,
}

impl YoungDiagram {
    pub fn from_columns(columns: Vec<usize>) -> Result<Self> {
        check_partition(&columns)?;
        Ok(Self { columns })
    }

    pub fn from_rows(rows: Vec<usize>) -> Result<Self> {
        check_partition(&rows)?;
        Ok(Self {
            columns: conjugate(&rows),
        })
    }

    /// Column lengths `lambda_1 >= lambda_2 >= ...`.
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// Row lengths `rho_1 >= rho_2 >= ...`.
    pub fn rows(&self) -> Vec<usize> {
        conjugate(&self.columns)
    }

    /// Number of cells.
    pub fn size(&self) -> usize {
        self.columns.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        Self { columns: self.rows() }
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.columns.iter().map(|c| c.to_string()).collect();
        write!(f, "λ={}", parts.join(","))
    }
}

impl From<YoungDiagram> for DiagramRepr {
    fn from(d: YoungDiagram) -> Self {
        let rho = d.rows();
        Self {
            lambda: d.columns,
            rho,
        }
    }
}

impl TryFrom<DiagramRepr> for YoungDiagram {
    type Error = Error;

    fn try_from(r: DiagramRepr) -> Result<Self> {
        let d = Self::from_columns(r.lambda)?;
        if d.rows() != r.rho {
            return Err(Error::Domain("rho is not the conjugate of lambda".into()));
        }
        Ok(d)
    }
}

fn check_partition(parts: &[usize]) -> Result<()> {
    if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Domain(format!("{parts:?} is not a partition")));
    }
    Ok(())
}

/// Conjugate partition.
pub fn conjugate(parts: &[usize]) -> Vec<usize> {
    let first = parts.first().copied().unwrap_or(0);
    (1..=first)
        .map(|i| parts.iter().take_while(|&&p| p >= i).count())
        .collect()
}

/// `rho_i` is the hill count after `i - 1` flattenings.
pub fn young_rows(path: &LatticePath) -> Result<Vec<usize>> {
    path.require_motzkin("young_rows")?;
    let mut h = path.heights().to_vec();
    let mut rows = Vec::new();
    loop {
        let hills = flatten_hills_in_place(&mut h);
        if hills == 0 {
            break;
        }
        rows.push(hills);
    }
    Ok(rows)
}

/// Rows in one pass: `rho_i` counts the subexcursions of height exactly `i`.
pub fn young_rows_fast(path: &LatticePath) -> Result<Vec<usize>> {
    path.require_motzkin("young_rows_fast")?;
    Ok(rows_from_heights(path.heights(), usize::MAX))
}

/// First `k` rows, padded with zeros.
pub(crate) fn rows_from_heights(h: &[i32], k: usize) -> Vec<usize> {
    let s: Vec<i64> = h.iter().map(|&x| x as i64).collect();
    let mut rows = Vec::new();
    for height in subexcursion_heights(&s) {
        if rows.len() < height {
            rows.resize(height, 0);
        }
        rows[height - 1] += 1;
    }
    if k != usize::MAX {
        rows.resize(k, 0);
    }
    rows
}

/// `lambda_j` is the maximum after `j - 1` excursions. Each excursion must
/// remove exactly one hill.
pub fn young_columns(path: &LatticePath) -> Result<Vec<usize>> {
    path.require_motzkin("young_columns")?;
    let mut h = path.heights().to_vec();
    let mut hills = count_hills(&h);
    let mut columns = Vec::with_capacity(hills);
    for _ in 0..hills {
        let max = *h.iter().max().unwrap();
        columns.push(max as usize);
        excursion_in_place(&mut h);
        let after = count_hills(&h);
        if after + 1 != hills {
            return Err(Error::Invariant(format!(
                "excursion changed the hill count from {hills} to {after}"
            )));
        }
        hills = after;
    }
    Ok(columns)
}

/// First `k` columns, padded with zeros.
pub(crate) fn columns_from_heights(h: &[i32], k: usize) -> Vec<usize> {
    let mut h = h.to_vec();
    let mut columns = Vec::with_capacity(k);
    for j in 0..k {
        let max = *h.iter().max().unwrap();
        columns.push(max as usize);
        if max == 0 {
            columns.resize(k, 0);
            break;
        }
        if j + 1 < k {
            excursion_in_place(&mut h);
        }
    }
    columns
}

/// Diagram from both constructions; they must be conjugate.
pub fn young_diagram(path: &LatticePath) -> Result<YoungDiagram> {
    let rows = young_rows(path)?;
    let columns = young_columns(path)?;
    if conjugate(&columns) != rows {
        return Err(Error::Invariant(format!(
            "rows {rows:?} are not conjugate to columns {columns:?}"
        )));
    }
    YoungDiagram::from_columns(columns)
}

/// Diagram of a configuration through its path.
pub fn young_of_config(config: &BoxBallConfig) -> YoungDiagram {
    let rows = young_rows_fast(&path_of_config(config)).expect("configuration paths are Motzkin");
    YoungDiagram::from_rows(rows).expect("row counts are nonincreasing")
}

/// Rows by counting runs of balls and deleting every `10` pattern.
pub fn rows_by_contraction(config: &BoxBallConfig) -> Vec<usize> {
    let mut bits = config.to_bits(config.extent() + 1);
    let mut rows = Vec::new();
    loop {
        let runs = bits.windows(2).filter(|w| w[0] && !w[1]).count();
        if runs == 0 {
            break;
        }
        rows.push(runs);
        let mut next = Vec::with_capacity(bits.len());
        let mut i = 0;
        while i < bits.len() {
            if bits[i] && i + 1 < bits.len() && !bits[i + 1] {
                i += 2;
            } else {
                next.push(bits[i]);
                i += 1;
            }
        }
        // Keep a closing empty box so the last run is still followed by one.
        next.push(false);
        bits = next;
    }
    rows
}
