//! Pipe-separated files with a header row.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::SerializeError;

pub(crate) fn writer(path: &Path) -> Result<csv::Writer<fs::File>, SerializeError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| SerializeError::io(parent, e))?;
    }
    csv::WriterBuilder::new()
        .delimiter(b'|')
        .quote_style(csv::QuoteStyle::Never)
        .terminator(csv::Terminator::Any(b'\n'))
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_io(path, e))
}

pub(crate) fn csv_io(path: &Path, e: csv::Error) -> SerializeError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => SerializeError::io(path, io),
        other => SerializeError::parse(path, line, format!("{other:?}")),
    }
}

pub(crate) fn write_table(path: &Path, columns: &[&str], rows: &[Vec<String>]) -> Result<(), SerializeError> {
    let mut w = writer(path)?;
    w.write_record(columns).map_err(|e| csv_io(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| SerializeError::io(path, e))
}

pub(crate) struct TableFile {
    pub path: PathBuf,
    pub columns: Vec<String>,
    /// 1-based line number and cells of each data row.
    pub rows: Vec<(u64, Vec<String>)>,
}

/// Reads a headerless-body file of `|`-separated cells; every row must have
/// exactly as many cells as the header.
pub(crate) fn read_rows(path: &Path, expected: Option<&[&str]>) -> Result<TableFile, SerializeError> {
    let mut r = csv::ReaderBuilder::new()
        .delimiter(b'|')
        .quoting(false)
        .flexible(true)
        .has_headers(expected.is_some())
        .from_path(path)
        .map_err(|e| csv_io(path, e))?;
    let mut columns = Vec::new();
    if let Some(want) = expected {
        let header = r.headers().map_err(|e| csv_io(path, e))?;
        columns = header.iter().map(str::to_string).collect();
        if columns != want {
            return Err(SerializeError::parse(path, 1, format!("expected header {:?}, found {columns:?}", want.join("|"))));
        }
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_io(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if !columns.is_empty() && rec.len() != columns.len() {
            return Err(SerializeError::parse(path, line, format!("expected {} columns, found {}", columns.len(), rec.len())));
        }
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(TableFile { path: path.to_path_buf(), columns, rows })
}

/// Whether `file_name` is a part of table `stem`, i.e. `<stem>_<n>_<m>.csv`.
pub(crate) fn is_part_of(file_name: &str, stem: &str) -> bool {
    let Some(rest) = file_name.strip_prefix(stem).and_then(|r| r.strip_suffix(".csv")) else { return false };
    let parts: Vec<&str> = rest.split('_').collect();
    parts.len() == 3 && parts[0].is_empty() && parts[1..].iter().all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
}

/// All parts of table `stem` in `dir`, in file name order.
pub(crate) fn read_table_files(dir: &Path, stem: &str, columns: &[&str]) -> Result<Vec<TableFile>, SerializeError> {
    let entries = fs::read_dir(dir).map_err(|e| SerializeError::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| SerializeError::io(dir, e))?;
        if entry.file_name().to_str().is_some_and(|n| is_part_of(n, stem)) {
            paths.push(entry.path());
        }
    }
    if paths.is_empty() {
        return Err(SerializeError::io(dir.join(format!("{stem}_0_0.csv")), std::io::ErrorKind::NotFound.into()));
    }
    paths.sort();
    paths.iter().map(|p| read_rows(p, Some(columns))).collect()
}

#[cfg(test)]
mod tests {
    use super::is_part_of;

    #[test]
    fn part_names() {
        assert!(is_part_of("person_0_0.csv", "person"));
        assert!(is_part_of("person_12_0.csv", "person"));
        assert!(!is_part_of("person_knows_person_0_0.csv", "person"));
        assert!(!is_part_of("person_0.csv", "person"));
    }
}
