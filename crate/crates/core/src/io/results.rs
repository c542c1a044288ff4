use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::io::RunManifest;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Float(f64),
    Empty,
}

impl Cell {
    fn delimited(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(v) => format!("{v:?}"),
            Cell::Empty => String::new(),
        }
    }

    fn aligned(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.4}"),
            other => other.delimited(),
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Cell::Int(_) | Cell::Float(_))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    /// Space-padded columns for terminals.
    Aligned,
    /// Comma-separated with a header line.
    Delimited,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn append(&mut self, other: ResultTable) {
        debug_assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Delimited => {
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::delimited).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            OutputFormat::Aligned => {
                let text: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::aligned).collect())
                    .collect();
                let widths: Vec<usize> = (0..self.columns.len())
                    .map(|j| {
                        text.iter()
                            .map(|r| r[j].len())
                            .chain([self.columns[j].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let header: Vec<String> = self
                    .columns
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                out.push_str(header.join("  ").trim_end());
                out.push('\n');
                for (cells, row) in text.iter().zip(&self.rows) {
                    let line: Vec<String> = cells
                        .iter()
                        .zip(row)
                        .zip(&widths)
                        .map(|((s, cell), w)| {
                            if cell.is_numeric() {
                                format!("{s:>w$}")
                            } else {
                                format!("{s:<w$}")
                            }
                        })
                        .collect();
                    out.push_str(line.join("  ").trim_end());
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Writes `table` to `dir/<stem>.csv` (delimited, with a trailing `manifest`
/// column naming the manifest file) or `dir/<stem>.txt` (aligned), and the
/// manifest itself to `dir/<stem>.manifest.json`. Returns the written paths.
pub fn emit_results(
    table: &ResultTable,
    format: OutputFormat,
    dir: impl AsRef<Path>,
    stem: &str,
    manifest: &RunManifest,
) -> Result<Vec<PathBuf>> {
    if table.rows.is_empty() {
        return Err(Error::invalid("no result rows to emit"));
    }
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let manifest_name = format!("{stem}.manifest.json");
    let (name, text) = match format {
        OutputFormat::Delimited => {
            let mut t = table.clone();
            t.columns.push("manifest".into());
            for row in &mut t.rows {
                row.push(Cell::Text(manifest_name.clone()));
            }
            (format!("{stem}.csv"), t.render(OutputFormat::Delimited))
        }
        OutputFormat::Aligned => {
            let mut text = format!("# manifest: {manifest_name}\n");
            text.push_str(&table.render(OutputFormat::Aligned));
            (format!("{stem}.txt"), text)
        }
    };
    let data_path = dir.join(&name);
    fs::write(&data_path, text).map_err(|e| Error::io(&data_path, e))?;
    let mut manifest = manifest.clone();
    if !manifest.outputs.contains(&name) {
        manifest.outputs.push(name);
    }
    let manifest_path = dir.join(&manifest_name);
    manifest.write(&manifest_path)?;
    Ok(vec![data_path, manifest_path])
}

/// Reads a delimited result file back; numeric-looking cells become numbers.
pub fn read_table(path: impl AsRef<Path>) -> Result<ResultTable> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let columns = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        rows.push(
            record
                .iter()
                .map(|s| {
                    if s.is_empty() {
                        Cell::Empty
                    } else if let Ok(i) = s.parse::<u64>() {
                        Cell::Int(i)
                    } else if let Ok(v) = s.parse::<f64>() {
                        Cell::Float(v)
                    } else {
                        Cell::Text(s.to_string())
                    }
                })
                .collect(),
        );
    }
    Ok(ResultTable { columns, rows })
}
