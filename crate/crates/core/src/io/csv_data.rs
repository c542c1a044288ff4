use std::fs::File;
use std::io::Write;
use std::path::Path;

use log::info;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetColumn {
    /// The last column of the file.
    Last,
    Index(usize),
    /// Header name; requires `has_header`.
    Name(String),
}

impl std::str::FromStr for TargetColumn {
    type Err = std::convert::Infallible;

    /// Digits select an index, anything else a header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => TargetColumn::Index(i),
            Err(_) => TargetColumn::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvSchema {
    pub has_header: bool,
    pub target: TargetColumn,
    pub delimiter: u8,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            has_header: true,
            target: TargetColumn::Last,
            delimiter: b',',
        }
    }
}

struct RawTable {
    headers: Option<Vec<String>>,
    /// Parsed cells, row-major.
    rows: Vec<Vec<f64>>,
}

fn read_raw(path: &Path, schema: &CsvSchema) -> Result<RawTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(schema.has_header)
        .delimiter(schema.delimiter)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let headers = if schema.has_header {
        Some(reader.headers()?.iter().map(str::to_string).collect())
    } else {
        None
    };
    let mut rows = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let mut values = Vec::with_capacity(record.len());
        for (column, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column,
                message: format!("cannot parse {cell:?} as a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite { row, column });
            }
            values.push(v);
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(Error::Schema(format!("{}: no data rows", path.display())));
    }
    Ok(RawTable { headers, rows })
}

fn resolve_target(schema: &CsvSchema, headers: Option<&[String]>, width: usize) -> Result<usize> {
    let idx = match &schema.target {
        TargetColumn::Last => width.checked_sub(1),
        TargetColumn::Index(i) => Some(*i),
        TargetColumn::Name(name) => {
            let headers = headers.ok_or_else(|| {
                Error::Schema(format!("target column {name:?} given by name but the file has no header"))
            })?;
            Some(
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::Schema(format!("no column named {name:?}")))?,
            )
        }
    };
    match idx {
        Some(i) if i < width => Ok(i),
        _ => Err(Error::Schema(format!(
            "target column {:?} does not exist in a {width}-column file",
            schema.target
        ))),
    }
}

/// Loads a dataset: the target column becomes `y`, every other column a
/// feature in file order. Row and column numbers in errors are 0-based and
/// count data rows only.
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset> {
    let path = path.as_ref();
    let raw = read_raw(path, schema)?;
    let width = raw.rows[0].len();
    let target = resolve_target(schema, raw.headers.as_deref(), width)?;
    if width < 2 {
        return Err(Error::Schema("need at least one feature column besides the target".into()));
    }
    let mut features = Vec::with_capacity(raw.rows.len() * (width - 1));
    let mut targets = Vec::with_capacity(raw.rows.len());
    for row in &raw.rows {
        for (j, v) in row.iter().enumerate() {
            if j == target {
                targets.push(*v);
            } else {
                features.push(*v);
            }
        }
    }
    let data = Dataset::from_flat(features, width - 1, targets)?;
    match &raw.headers {
        Some(h) => info!(
            "{}: {} rows, target {:?}, features {:?}",
            path.display(),
            data.len(),
            h[target],
            h.iter().enumerate().filter(|(j, _)| *j != target).map(|(_, n)| n).collect::<Vec<_>>()
        ),
        None => info!(
            "{}: {} rows, {} features, target column {target}",
            path.display(),
            data.len(),
            data.dim()
        ),
    }
    Ok(data)
}

/// Loads feature rows only; with `drop_target` the schema's target column is
/// skipped.
pub fn load_feature_rows(path: impl AsRef<Path>, schema: &CsvSchema, drop_target: bool) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let raw = read_raw(path, schema)?;
    if !drop_target {
        return Ok(raw.rows);
    }
    let target = resolve_target(schema, raw.headers.as_deref(), raw.rows[0].len())?;
    Ok(raw
        .rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|(j, _)| *j != target)
                .map(|(_, v)| v)
                .collect()
        })
        .collect())
}

/// Writes `x0..x{d-1},y` with a header, using round-trip float formatting.
pub fn write_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    let names: Vec<String> = (0..data.dim()).map(|j| format!("x{j}")).chain(["y".to_string()]).collect();
    out.push_str(&names.join(","));
    out.push('\n');
    for (x, y) in data.rows().zip(data.targets()) {
        for v in x {
            out.push_str(&format!("{v:?},"));
        }
        out.push_str(&format!("{y:?}\n"));
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}
