//! Batch analysis of CSV or JSON-lines knot tables.

use std::io;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::parse::parse_matrix;
use crate::report::{analyze, AnalyzeOptions, KnotRecord, Report, SCHEMA};

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("CSV header must contain `name` and `seifert` columns")]
    Header,
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    JsonLines,
}

/// An in-stream failure for one input row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorRow {
    pub schema: String,
    pub row: usize,
    pub name: Option<String>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScanRow {
    Report(Box<Report>),
    Error(ErrorRow),
}

impl ScanRow {
    pub fn is_error(&self) -> bool {
        matches!(self, ScanRow::Error(_))
    }

    pub fn report(&self) -> Option<&Report> {
        match self {
            ScanRow::Report(r) => Some(r),
            ScanRow::Error(_) => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("row serializes")
    }
}

/// Unparsed input row; `row` counts data rows from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRow {
    pub row: usize,
    pub name: Option<String>,
    pub seifert: Result<String, String>,
    pub source: String,
}

#[derive(Deserialize)]
struct JsonLine<'a> {
    name: Option<String>,
    #[serde(borrow)]
    seifert: Option<&'a RawValue>,
    source: Option<String>,
}

pub fn detect_format(text: &str) -> InputFormat {
    match text.lines().map(str::trim).find(|l| !l.is_empty()) {
        Some(l) if l.starts_with('{') => InputFormat::JsonLines,
        _ => InputFormat::Csv,
    }
}

fn json_rows(text: &str, origin: &str) -> Vec<RawRow> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            let row = i + 1;
            let source = format!("{origin}:{row}");
            match serde_json::from_str::<JsonLine>(line) {
                Ok(j) => {
                    let seifert = match j.seifert {
                        None => Err("missing `seifert` field".to_string()),
                        Some(raw) => match serde_json::from_str::<String>(raw.get()) {
                            Ok(s) => Ok(s),
                            Err(_) => Ok(raw.get().to_string()),
                        },
                    };
                    RawRow {
                        row,
                        name: j.name,
                        seifert,
                        source: j.source.unwrap_or(source),
                    }
                }
                Err(e) => RawRow {
                    row,
                    name: None,
                    seifert: Err(format!("invalid JSON: {e}")),
                    source,
                },
            }
        })
        .collect()
}

fn csv_rows(text: &str, origin: &str) -> Result<Vec<RawRow>, ScanError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |want: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(want));
    let (Some(name_col), Some(seifert_col)) = (col("name"), col("seifert")) else {
        return Err(ScanError::Header);
    };
    let source_col = col("source");
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let default_source = format!("{origin}:{row}");
        match rec {
            Ok(r) => out.push(RawRow {
                row,
                name: r.get(name_col).map(str::to_string),
                seifert: r
                    .get(seifert_col)
                    .map(str::to_string)
                    .ok_or_else(|| "missing `seifert` column".to_string()),
                source: source_col
                    .and_then(|c| r.get(c))
                    .filter(|s| !s.is_empty())
                    .map_or(default_source, str::to_string),
            }),
            Err(e) => out.push(RawRow {
                row,
                name: None,
                seifert: Err(format!("CSV: {e}")),
                source: default_source,
            }),
        }
    }
    Ok(out)
}

/// Splits a table into rows, picking the format from the first non-empty line.
pub fn read_rows(text: &str, origin: &str) -> Result<Vec<RawRow>, ScanError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    match detect_format(text) {
        InputFormat::JsonLines => Ok(json_rows(text, origin)),
        InputFormat::Csv => csv_rows(text, origin),
    }
}

fn process(raw: &RawRow, opts: &AnalyzeOptions) -> ScanRow {
    let fail = |error: String| {
        ScanRow::Error(ErrorRow {
            schema: SCHEMA.to_string(),
            row: raw.row,
            name: raw.name.clone(),
            error,
        })
    };
    let text = match &raw.seifert {
        Ok(t) => t,
        Err(e) => return fail(e.clone()),
    };
    let seifert = match parse_matrix(text) {
        Ok(v) => v,
        Err(e) => return fail(e.to_string()),
    };
    let record = KnotRecord {
        name: raw.name.clone().unwrap_or_else(|| format!("row {}", raw.row)),
        seifert,
        source: raw.source.clone(),
    };
    match analyze(&record, opts) {
        Ok(r) => ScanRow::Report(Box::new(r)),
        Err(e) => fail(e.to_string()),
    }
}

/// Analyzes every row with up to `jobs` workers, returning results in input order.
pub fn scan_text(text: &str, origin: &str, opts: &AnalyzeOptions, jobs: usize) -> Result<Vec<ScanRow>, ScanError> {
    let rows = read_rows(text, origin)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    Ok(pool.install(|| rows.par_iter().map(|r| process(r, opts)).collect()))
}

pub fn scan_path(path: &Path, opts: &AnalyzeOptions, jobs: usize) -> Result<Vec<ScanRow>, ScanError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScanError::Io {
        path: path.display().to_string(),
        source,
    })?;
    scan_text(&text, &path.display().to_string(), opts, jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn extendable(rows: &[ScanRow]) -> Vec<Option<u64>> {
        rows.iter().map(|r| r.report().map(Report::extendable_total)).collect()
    }

    #[test]
    fn csv_two_rows() {
        let text = "name,seifert\n3_1,\"{{-1,1},{0,-1}}\"\n6_1,\"{{-1,1},{0,2}}\"\n";
        let rows = scan_text(text, "t.csv", &AnalyzeOptions::default(), 2).unwrap();
        assert_eq!(extendable(&rows), vec![Some(0), Some(1)]);
        assert_eq!(rows[0].report().unwrap().name, "3_1");
        assert_eq!(rows[1].report().unwrap().source, "t.csv:2");
    }

    #[test]
    fn jsonl_rows_and_isolation() {
        let text = concat!(
            "{\"name\":\"3_1\",\"seifert\":[[-1,1],[0,-1]]}\n",
            "{\"name\":\"bad\",\"seifert\":\"{{1,1},{1,1}}\"}\n",
            "not json\n",
            "{\"name\":\"6_1\",\"seifert\":\"{{-1,1},{0,2}}\",\"source\":\"census\"}\n",
        );
        let rows = scan_text(text, "t.jsonl", &AnalyzeOptions::default(), 3).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(extendable(&rows), vec![Some(0), None, None, Some(1)]);
        match &rows[1] {
            ScanRow::Error(e) => {
                assert_eq!(e.row, 2);
                assert_eq!(e.name.as_deref(), Some("bad"));
                assert!(e.error.contains("unimodular"));
            }
            other => panic!("expected an error row, got {other:?}"),
        }
        assert_eq!(rows[3].report().unwrap().source, "census");
        let back: ScanRow = serde_json::from_str(&rows[1].to_json()).unwrap();
        assert_eq!(back, rows[1]);
    }

    #[test]
    fn empty_and_header_only() {
        assert!(scan_text("", "e", &AnalyzeOptions::default(), 1).unwrap().is_empty());
        assert!(scan_text("name,seifert\n", "e", &AnalyzeOptions::default(), 1).unwrap().is_empty());
        assert!(matches!(
            scan_text("a,b\n1,2\n", "e", &AnalyzeOptions::default(), 1),
            Err(ScanError::Header)
        ));
    }

    #[test]
    fn order_independent_of_jobs() {
        let mut text = String::from("name,seifert\n");
        for m in -12..=12 {
            text.push_str(&format!("t{m},\"{{{{-1,1}},{{0,{m}}}}}\"\n"));
        }
        let one = scan_text(&text, "o", &AnalyzeOptions::default(), 1).unwrap();
        let many = scan_text(&text, "o", &AnalyzeOptions::default(), 8).unwrap();
        assert_eq!(one, many);
        assert_eq!(one.len(), 25);
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            scan_path(Path::new("/nonexistent/knots.csv"), &AnalyzeOptions::default(), 1),
            Err(ScanError::Io { .. })
        ));
    }
}
