//! CSV tables. Lines starting with `#` are comments, the first other line is
//! the header, and column 1 carries its unit as a name suffix
//! (`frequency_hz`, `bias_v`, `n_m`). Numbers are written with 17
//! significant digits so a write/read cycle is bit-exact.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{unit_suffix, CliError};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// 1-based line in the file.
    pub line: u64,
    pub fields: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub path: PathBuf,
    pub headers: Vec<String>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn f64_at(&self, row: &Row, col: usize) -> Result<f64, CliError> {
        let raw = &row.fields[col];
        raw.parse::<f64>().map_err(|_| CliError::Malformed {
            path: self.path.clone(),
            line: row.line,
            message: format!("`{raw}` in column `{}` is not a number", self.headers[col]),
        })
    }

    /// Every row of column `col` as numbers.
    pub fn f64_column(&self, col: usize) -> Result<Vec<f64>, CliError> {
        self.rows.iter().map(|r| self.f64_at(r, col)).collect()
    }

    /// Rejects a first column whose unit suffix differs from `expected`'s.
    pub fn expect_abscissa(&self, command: &'static str, expected: &'static str) -> Result<(), CliError> {
        let found = &self.headers[0];
        if unit_suffix(found) != unit_suffix(expected) {
            return Err(CliError::UnitMismatch {
                path: self.path.clone(),
                command,
                found: found.clone(),
                expected,
            });
        }
        Ok(())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read(path: &Path, min_columns: usize) -> Result<Table, CliError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file);
    let malformed = |line: u64, message: String| CliError::Malformed {
        path: path.to_path_buf(),
        line,
        message,
    };
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line());
        match e.into_kind() {
            csv::ErrorKind::Io(source) => CliError::Io {
                path: path.to_path_buf(),
                source,
            },
            kind => malformed(line, format!("{kind:?}")),
        }
    };
    let headers: Vec<String> = reader.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    if headers.len() < min_columns || headers.iter().any(String::is_empty) {
        return Err(malformed(
            1,
            format!("expected a header with at least {min_columns} named columns, got `{}`", headers.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(malformed(
                line,
                format!("expected {} fields, found {}", headers.len(), record.len()),
            ));
        }
        rows.push(Row {
            line,
            fields: record.iter().map(str::to_owned).collect(),
        });
    }
    if rows.is_empty() {
        return Err(malformed(1, "no data rows".into()));
    }
    Ok(Table {
        path: path.to_path_buf(),
        headers,
        rows,
    })
}

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes named columns of equal length.
pub fn write(path: &Path, columns: &[(&str, &[f64])]) -> Result<(), CliError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    write_to(&mut out, columns).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

pub fn write_to(out: &mut impl Write, columns: &[(&str, &[f64])]) -> std::io::Result<()> {
    let names: Vec<&str> = columns.iter().map(|c| c.0).collect();
    writeln!(out, "{}", names.join(","))?;
    let n = columns.first().map_or(0, |c| c.1.len());
    for i in 0..n {
        let row: Vec<String> = columns.iter().map(|c| format_number(c.1[i])).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Writes rows whose fields are already text (mixed columns such as the
/// anticrossing branch names).
pub fn write_rows(path: &Path, headers: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let mut emit = || -> std::io::Result<()> {
        writeln!(out, "{}", headers.join(","))?;
        for r in rows {
            writeln!(out, "{}", r.join(","))?;
        }
        out.flush()
    };
    emit().map_err(io_err(path))
}
