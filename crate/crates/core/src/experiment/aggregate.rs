use std::path::{Path, PathBuf};

use crate::dynamics::CorrelationGrid;
use crate::error::{Error, Result};

/// Columns that label a cell rather than hold a measurement.
const KEY_COLUMNS: [&str; 2] = ["t", "r"];

/// A numeric table read from a CSV file (header line) or a JSON-lines file
/// (one flat object per line).
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub keys: Vec<String>,
    pub columns: Vec<String>,
    /// Key cells as written in the file, so aggregates reproduce them verbatim.
    pub key_text: Vec<Vec<String>>,
    pub key_values: Vec<Vec<f64>>,
    pub data: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let first = text.trim_start().chars().next();
        let cells = if first == Some('{') { json_cells(text, source_name)? } else { csv_cells(text, source_name)? };
        let (header, rows) = cells;
        let parse_err = |message: String| Error::Parse { source_name: source_name.to_string(), message };
        let key_idx: Vec<usize> = KEY_COLUMNS.iter().filter_map(|k| header.iter().position(|h| h == k)).collect();
        let val_idx: Vec<usize> = (0..header.len()).filter(|i| !key_idx.contains(i)).collect();
        let mut table = Table {
            keys: key_idx.iter().map(|&i| header[i].clone()).collect(),
            columns: val_idx.iter().map(|&i| header[i].clone()).collect(),
            key_text: Vec::with_capacity(rows.len()),
            key_values: Vec::with_capacity(rows.len()),
            data: Vec::with_capacity(rows.len()),
        };
        for (line, row) in rows.iter().enumerate() {
            let number = |i: usize| -> Result<f64> {
                let cell = row[i].trim();
                if cell == "null" {
                    return Ok(f64::NAN);
                }
                cell.parse::<f64>()
                    .map_err(|_| parse_err(format!("row {}: '{}' is not a number", line + 1, cell)))
            };
            table.key_text.push(key_idx.iter().map(|&i| row[i].trim().to_string()).collect());
            table.key_values.push(key_idx.iter().map(|&i| number(i)).collect::<Result<_>>()?);
            table.data.push(val_idx.iter().map(|&i| number(i)).collect::<Result<_>>()?);
        }
        Ok(table)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.data.iter().map(|row| row[j]).collect())
    }

    /// Why `other` cannot be averaged with `self`, if it cannot.
    fn mismatch(&self, other: &Table) -> Option<String> {
        if self.keys != other.keys || self.columns != other.columns {
            return Some(format!(
                "shape mismatch: columns [{}] vs [{}]",
                [self.keys.clone(), self.columns.clone()].concat().join(","),
                [other.keys.clone(), other.columns.clone()].concat().join(",")
            ));
        }
        if self.rows() != other.rows() {
            return Some(format!("shape mismatch: {} rows vs {} rows", self.rows(), other.rows()));
        }
        let bad = self.key_values.iter().zip(&other.key_values).position(|(a, b)| a != b)?;
        Some(format!("shape mismatch: key cells differ at row {}", bad + 1))
    }
}

type Cells = (Vec<String>, Vec<Vec<String>>);

fn csv_cells(text: &str, source_name: &str) -> Result<Cells> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse { source_name: source_name.to_string(), message: "empty file".into() })?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<String> = line.split(',').map(str::to_string).collect();
        if row.len() != header.len() {
            return Err(Error::Parse {
                source_name: source_name.to_string(),
                message: format!("row {} has {} cells, header has {}", i + 1, row.len(), header.len()),
            });
        }
        rows.push(row);
    }
    Ok((header, rows))
}

fn json_cells(text: &str, source_name: &str) -> Result<Cells> {
    let err = |message: String| Error::Parse { source_name: source_name.to_string(), message };
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (i, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        let object: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(line).map_err(|e| err(format!("line {}: {e}", i + 1)))?;
        // map iteration is sorted by key, so the column order is canonical
        let names: Vec<String> = object.keys().cloned().collect();
        match &header {
            None => header = Some(names),
            Some(h) if *h != names => return Err(err(format!("line {} has different keys", i + 1))),
            Some(_) => {}
        }
        let row = object
            .values()
            .map(|v| match v {
                serde_json::Value::Number(x) => Ok(x.to_string()),
                serde_json::Value::Null => Ok("null".to_string()),
                other => Err(err(format!("line {}: non-numeric value {other}", i + 1))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((header.ok_or_else(|| err("empty file".into()))?, rows))
}

/// Per-cell mean and standard error of the mean over equally shaped tables.
#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub keys: Vec<String>,
    pub columns: Vec<String>,
    pub key_text: Vec<Vec<String>>,
    pub key_values: Vec<Vec<f64>>,
    pub mean: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
    pub count: usize,
}

impl Aggregate {
    /// Header `keys…, {col}_mean, {col}_stderr …, count`.
    pub fn to_csv(&self) -> String {
        let mut header: Vec<String> = self.keys.clone();
        for c in &self.columns {
            header.push(format!("{c}_mean"));
            header.push(format!("{c}_stderr"));
        }
        header.push("count".into());
        let mut out = header.join(",");
        out.push('\n');
        for (i, keys) in self.key_text.iter().enumerate() {
            let mut cells = keys.clone();
            for (m, s) in self.mean[i].iter().zip(&self.stderr[i]) {
                cells.push(format!("{m:.16e}"));
                cells.push(format!("{s:.16e}"));
            }
            cells.push(self.count.to_string());
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn mean_column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.mean.iter().map(|row| row[j]).collect())
    }

    /// Mean `C` as a grid, for (t, r)-keyed correlation aggregates.
    pub fn correlation_grid(&self, origin: usize) -> Result<CorrelationGrid<f64>> {
        if self.keys != ["t", "r"] {
            return Err(Error::invalid("aggregate is not keyed by (t, r)"));
        }
        let c = self.mean_column("C").ok_or_else(|| Error::invalid("aggregate has no C column"))?;
        let mut offsets = Vec::new();
        for k in &self.key_values {
            if k[0] != self.key_values[0][0] {
                break;
            }
            offsets.push(k[1] as isize);
        }
        if offsets.is_empty() || self.key_values.len() % offsets.len() != 0 {
            return Err(Error::invalid("correlation aggregate is not a full grid"));
        }
        let mut grid = CorrelationGrid::new(origin, Vec::new(), offsets.clone(), Vec::new());
        for (block, values) in self.key_values.chunks(offsets.len()).zip(c.chunks(offsets.len())) {
            if block.iter().zip(&offsets).any(|(k, &r)| k[1] as isize != r || k[0] != block[0][0]) {
                return Err(Error::invalid("correlation aggregate is not a full grid"));
            }
            grid.push_timed_row(block[0][0], values.to_vec());
        }
        Ok(grid)
    }
}

/// Averages tables in the given order; `tables` pairs a display name (used in
/// shape errors) with the parsed table.
pub fn aggregate_tables(tables: &[(String, Table)]) -> Result<Aggregate> {
    let (_, first) = tables.first().ok_or_else(|| Error::invalid("nothing to aggregate"))?;
    for (name, t) in &tables[1..] {
        if let Some(message) = first.mismatch(t) {
            return Err(Error::File { path: PathBuf::from(name), message });
        }
    }
    let k = tables.len();
    let kf = k as f64;
    let (rows, cols) = (first.rows(), first.columns.len());
    let mut mean = vec![vec![0.0; cols]; rows];
    for (_, t) in tables {
        for (acc, row) in mean.iter_mut().zip(&t.data) {
            for (a, x) in acc.iter_mut().zip(row) {
                *a += x;
            }
        }
    }
    for row in mean.iter_mut() {
        for a in row.iter_mut() {
            *a /= kf;
        }
    }
    let mut stderr = vec![vec![0.0; cols]; rows];
    if k > 1 {
        for (_, t) in tables {
            for ((acc, row), m) in stderr.iter_mut().zip(&t.data).zip(&mean) {
                for ((a, x), mu) in acc.iter_mut().zip(row).zip(m) {
                    *a += (x - mu) * (x - mu);
                }
            }
        }
        for row in stderr.iter_mut() {
            for a in row.iter_mut() {
                *a = (*a / (kf - 1.0)).sqrt() / kf.sqrt();
            }
        }
    }
    Ok(Aggregate {
        keys: first.keys.clone(),
        columns: first.columns.clone(),
        key_text: first.key_text.clone(),
        key_values: first.key_values.clone(),
        mean,
        stderr,
        count: k,
    })
}

/// Reads and averages files, visiting them sorted by path so the result does
/// not depend on the order they were listed in.
pub fn aggregate_files(paths: &[PathBuf]) -> Result<Aggregate> {
    if paths.is_empty() {
        return Err(Error::invalid("aggregate needs at least one input file"));
    }
    let mut sorted = paths.to_vec();
    sorted.sort();
    let tables = sorted
        .iter()
        .map(|p| Ok((p.display().to_string(), Table::read(p)?)))
        .collect::<Result<Vec<_>>>()?;
    aggregate_tables(&tables)
}
