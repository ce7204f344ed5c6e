//! Column-labeled numeric data and rank statistics.
//!
//! Ranks follow the counting convention used throughout the estimators:
//! `R_k` counts observations `<=` the k-th value and `L_k` counts
//! observations `>=` it (both counts include the observation itself).

use crate::error::{Error, Result};

/// Dense row-major matrix of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl Matrix {
    /// Builds from rows. Every entry must be finite.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::ShapeMismatch(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    d
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(data, n, d)
    }

    /// Builds from column slices, all of equal length.
    pub fn from_columns(cols: &[&[f64]]) -> Result<Matrix> {
        let d = cols.len();
        let n = cols.first().map_or(0, |c| c.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "column {} has {} entries, expected {}",
                    j + 1,
                    col.len(),
                    n
                )));
            }
        }
        let mut data = Vec::with_capacity(n * d);
        for i in 0..n {
            for col in cols {
                data.push(col[i]);
            }
        }
        Self::from_vec(data, n, d)
    }

    /// Builds from a row-major buffer of length `n * d`.
    pub fn from_vec(data: Vec<f64>, n: usize, d: usize) -> Result<Matrix> {
        if data.len() != n * d {
            return Err(Error::ShapeMismatch(format!(
                "buffer holds {} values, expected {}x{}",
                data.len(),
                n,
                d
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / d.max(1) + 1,
                column: format!("{}", pos % d.max(1) + 1),
            });
        }
        Ok(Matrix { data, n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.d + j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.d).map(|j| self.column(j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Interleaves column slices into a row-major point buffer for neighbor search.
pub(crate) fn interleave_columns(cols: &[&[f64]]) -> Vec<f64> {
    let n = cols.first().map_or(0, |c| c.len());
    let mut out = Vec::with_capacity(n * cols.len());
    for i in 0..n {
        for col in cols {
            out.push(col[i]);
        }
    }
    out
}

/// Column-labeled dataset: the universal input of every estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    values: Matrix,
}

impl Dataset {
    /// Validates shape, finiteness and name uniqueness (`n >= 2`, `d >= 1`).
    pub fn new(names: Vec<String>, values: Matrix) -> Result<Dataset> {
        if values.d() != names.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} column names for {} columns",
                names.len(),
                values.d()
            )));
        }
        if values.d() == 0 {
            return Err(Error::ShapeMismatch("dataset needs at least one column".into()));
        }
        if values.n() < 2 {
            return Err(Error::InsufficientObservations {
                needed: 2,
                got: values.n(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        Ok(Dataset { names, values })
    }

    pub fn n(&self) -> usize {
        self.values.n()
    }

    pub fn d(&self) -> usize {
        self.values.d()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.column(j)
    }

    /// Sub-matrix of the named columns, in the given order.
    pub fn select(&self, names: &[String]) -> Result<Matrix> {
        let cols: Vec<Vec<f64>> = names
            .iter()
            .map(|name| self.column_index(name).map(|j| self.column(j)))
            .collect::<Result<_>>()?;
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        Matrix::from_columns(&refs)
    }
}

/// Per-observation ranks of a response column.
///
/// `r[k]` counts values `<=` the k-th one, `l[k]` counts values `>=` it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    r: Vec<u32>,
    l: Vec<u32>,
}

impl RankProfile {
    pub fn r(&self) -> &[u32] {
        &self.r
    }

    pub fn l(&self) -> &[u32] {
        &self.l
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

/// Ranks of `y` in `O(n log n)` via a single sort.
///
/// Equal values share both counts: within a tied run `[a, b)` of the sorted
/// order, every member gets `R = b` and `L = n - a`.
pub fn compute_ranks(y: &[f64]) -> Result<RankProfile> {
    if y.is_empty() {
        return Err(Error::InsufficientObservations { needed: 1, got: 0 });
    }
    if let Some(pos) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: pos + 1,
            column: "y".into(),
        });
    }
    let n = y.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| y[a as usize].total_cmp(&y[b as usize]));

    let mut r = vec![0u32; n];
    let mut l = vec![0u32; n];
    let mut start = 0;
    while start < n {
        let value = y[order[start] as usize];
        let mut end = start + 1;
        while end < n && y[order[end] as usize] == value {
            end += 1;
        }
        for &idx in &order[start..end] {
            r[idx as usize] = end as u32;
            l[idx as usize] = (n - start) as u32;
        }
        start = end;
    }
    Ok(RankProfile { r, l })
}

/// Replaces every column by its `R`-ranks (ties get the shared upper count).
pub fn rank_transform_columns(x: &Matrix) -> Result<Matrix> {
    let ranked: Vec<Vec<f64>> = x
        .columns()
        .iter()
        .map(|col| {
            let profile = compute_ranks(col)?;
            Ok(profile.r().iter().map(|&v| v as f64).collect())
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&[f64]> = ranked.iter().map(Vec::as_slice).collect();
    Matrix::from_columns(&refs)
}

/// Rank-transform of a single column.
pub fn rank_transform(y: &[f64]) -> Result<Vec<f64>> {
    Ok(compute_ranks(y)?.r().iter().map(|&v| v as f64).collect())
}
