//! CSV ingestion and dataset export.
//!
//! Input files are UTF-8, comma-separated, `.` decimal, with a header row and
//! an all-numeric body. A row with any unparseable or non-finite cell is
//! rejected with its file row number (the header is row 1).

use crate::CliError;
use multidep::{Dataset, Matrix};
use std::io::Write;
use std::path::Path;

pub fn load_csv(path: &Path) -> Result<Dataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::config(format!("cannot open `{}`: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::config(format!("cannot read header: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if headers.is_empty() {
        return Err(CliError::config("empty header row"));
    }
    let mut seen = std::collections::HashSet::new();
    for name in &headers {
        if !seen.insert(name.clone()) {
            return Err(CliError::config(format!("duplicate header `{name}`")));
        }
    }

    let mut rows: Vec<f64> = Vec::new();
    let mut n = 0usize;
    for (i, record) in reader.records().enumerate() {
        let file_row = i + 2;
        let record =
            record.map_err(|e| CliError::config(format!("row {file_row}: {e}")))?;
        if record.len() != headers.len() {
            return Err(CliError::config(format!(
                "row {file_row}: {} cells for {} columns",
                record.len(),
                headers.len()
            )));
        }
        for (cell, name) in record.iter().zip(&headers) {
            let value: f64 = cell.trim().parse().map_err(|_| {
                CliError::config(format!(
                    "row {file_row}, column `{name}`: cannot parse `{cell}` as a number"
                ))
            })?;
            if !value.is_finite() {
                return Err(CliError::config(format!(
                    "row {file_row}, column `{name}`: non-finite value `{cell}`"
                )));
            }
            rows.push(value);
        }
        n += 1;
    }
    if n == 0 {
        return Err(CliError::config("empty body"));
    }
    let matrix = Matrix::from_vec(rows, n, headers.len())
        .map_err(|e| CliError::config(e.to_string()))?;
    Dataset::new(headers, matrix).map_err(|e| CliError::config(e.to_string()))
}

/// Writes a dataset as CSV with shortest-round-trip float formatting.
pub fn write_dataset_csv<W: Write>(dataset: &Dataset, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{}", dataset.names().join(","))?;
    for i in 0..dataset.n() {
        let row = dataset.values().row(i);
        let mut line = String::new();
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format!("{v}"));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
