//! CSV and JSON files.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use varsens_core::{InputSpec, Matrix};

use crate::error::{CliError, Result};

/// 17 significant digits, enough to read every `f64` back exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_float(s: &str) -> Option<f64> {
    s.trim().parse().ok()
}

pub fn read_spec(path: &Path) -> Result<InputSpec> {
    read_json(path)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|source| CliError::Json { path: path.into(), source })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Rows of `x` under a header of factor names.
pub fn matrix_csv(names: &[String], x: &Matrix) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(names).expect("writing to memory");
    for row in x.iter_rows() {
        w.write_record(row.iter().map(|v| fmt_float(*v))).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

pub fn write_matrix(path: &Path, names: &[String], x: &Matrix) -> Result<()> {
    fs::write(path, matrix_csv(names, x)).map_err(|e| CliError::io(path, e))
}

pub fn read_matrix(path: &Path) -> Result<(Vec<String>, Matrix)> {
    let csv_err = |source| CliError::Csv { path: path.into(), source };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let names: Vec<String> = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let mut x = Matrix::with_cols(names.len());
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|s| parse_float(s).ok_or_else(|| bad_value(path, i + 2, s)))
            .collect::<Result<Vec<f64>>>()?;
        x.push_row(&row)?;
    }
    Ok((names, x))
}

/// A one-column file with header `y`.
pub fn write_responses(path: &Path, y: &[f64]) -> Result<()> {
    let mut text = String::with_capacity(24 * (y.len() + 1));
    text.push_str("y\n");
    for v in y {
        text.push_str(&fmt_float(*v));
        text.push('\n');
    }
    write_text(path, &text)
}

pub fn read_responses(path: &Path) -> Result<Vec<f64>> {
    let (names, x) = read_matrix(path)?;
    if names.len() != 1 {
        return Err(CliError::input(format!(
            "{}: expected a single response column, found {}",
            path.display(),
            names.len()
        )));
    }
    Ok(x.into_vec())
}

fn bad_value(path: &Path, line: usize, s: &str) -> CliError {
    CliError::input(format!("{}:{line}: `{s}` is not a number", path.display()))
}
