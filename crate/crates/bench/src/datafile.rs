//! Plot-ready data files.
//!
//! A file is one `# key=value ...` provenance line, a column header line,
//! then one whitespace-separated row per point. Error rates are on the
//! x100 scale with four decimals, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{BenchError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.4}"),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Real(v) => Some(v),
            Cell::Text(_) => None,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DataFile {
    pub name: String,
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl DataFile {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.header.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the columns");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::from("#");
        for (k, v) in &self.header {
            write!(out, " {k}={v}").expect("string write");
        }
        out.push('\n');
        out.push_str(&self.columns.join(" "));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let path = dir.join(&self.name);
        std::fs::write(&path, self.render()).map_err(|e| BenchError::io(path, e))
    }

    /// Values of column `name`, parsed as numbers.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }
}

/// A parsed data file.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedData {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedData {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r.get(i)?.parse().ok()).collect()
    }
}

pub fn parse_data(text: &str) -> Option<ParsedData> {
    let mut lines = text.lines();
    let header = lines
        .next()?
        .strip_prefix('#')?
        .split_whitespace()
        .map(|kv| {
            let (k, v) = kv.split_once('=')?;
            Some((k.to_string(), v.to_string()))
        })
        .collect::<Option<Vec<_>>>()?;
    let columns = lines.next()?.split_whitespace().map(str::to_string).collect();
    let rows = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    Some(ParsedData { header, columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse() {
        let mut f = DataFile::new("x.dat", &["w", "Error"])
            .meta("scenario", "window-sweep")
            .meta("seed", 3);
        f.push(vec![100u64.into(), 1.23456.into()]);
        f.push(vec![1000u64.into(), 99.0.into()]);
        let text = f.render();
        assert_eq!(
            text,
            "# scenario=window-sweep seed=3\nw Error\n100 1.2346\n1000 99.0000\n"
        );
        let parsed = parse_data(&text).unwrap();
        assert_eq!(parsed.meta("seed"), Some("3"));
        assert_eq!(parsed.column("w").unwrap(), vec![100.0, 1000.0]);
        assert_eq!(f.column("Error").unwrap(), vec![1.23456, 99.0]);
    }
}
