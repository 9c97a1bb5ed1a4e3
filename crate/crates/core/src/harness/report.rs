use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::run::Report;
use super::stats::Comparison;
use super::table::CountsTable;
use crate::error::{Error, Result};

pub const REPORT_FILE: &str = "report.json";
pub const CSV_FILE: &str = "counts.csv";
pub const COMPARISON_FILE: &str = "comparison.json";

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes `report.json`, `counts.csv` and, when given, `comparison.json` into
/// `dir`. Output depends only on the values passed in.
pub fn emit_report(
    report: &Report,
    stats: Option<&Comparison>,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    let mut written = vec![
        write(dir.join(REPORT_FILE), &json)?,
        write(dir.join(CSV_FILE), &report.table.to_csv())?,
    ];
    if let Some(c) = stats {
        let mut json = serde_json::to_string_pretty(c)?;
        json.push('\n');
        written.push(write(dir.join(COMPARISON_FILE), &json)?);
    }
    Ok(written)
}

#[derive(Deserialize)]
struct TableOnly {
    table: CountsTable,
}

/// Reads the counts table back from a report file, or from a directory holding
/// one.
pub fn load_table(path: &Path) -> Result<CountsTable> {
    let file = if path.is_dir() {
        path.join(REPORT_FILE)
    } else {
        path.to_path_buf()
    };
    let text = std::fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
    let parsed: TableOnly =
        serde_json::from_str(&text).map_err(|e| Error::from(e).in_file(&file))?;
    Ok(parsed.table)
}
