//! Reading `date,close` price files and aligning return series by date.

use std::collections::HashMap;
use std::path::Path;

use chrono::NaiveDate;
use comove_core::{to_log_returns, PriceSeries, ReturnSeries};

use crate::error::{CliError, Result};

/// Series id for a file: its stem, or the whole name if there is none.
pub fn series_id(path: &Path) -> String {
    path.file_stem()
        .or_else(|| path.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Parses a headed `date,close` CSV. Rows are sorted by date; duplicate
/// dates, malformed rows and non-positive closes are rejected with their
/// line number.
pub fn ingest_csv(path: &Path) -> Result<PriceSeries> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_prices(path, series_id(path), &bytes)
}

pub fn parse_prices(path: &Path, id: String, bytes: &[u8]) -> Result<PriceSeries> {
    let file_err = |message: String| CliError::File { path: path.to_path_buf(), message };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(bytes);
    let headers = reader.headers().map_err(|e| file_err(e.to_string()))?.clone();
    let lower: Vec<String> = headers.iter().map(str::to_ascii_lowercase).collect();
    if lower.len() != 2 || lower[0] != "date" || lower[1] != "close" {
        return Err(file_err(format!("expected header `date,close`, found `{}`", lower.join(","))));
    }

    let mut rows: Vec<(NaiveDate, f64, u64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Row { path: path.to_path_buf(), line, message: e.to_string() }
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row_err = |message: String| CliError::Row { path: path.to_path_buf(), line, message };
        if record.len() != 2 {
            return Err(row_err(format!("expected 2 fields, found {}", record.len())));
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d")
            .map_err(|_| row_err(format!("invalid ISO date {:?}", &record[0])))?;
        let close: f64 = record[1]
            .parse()
            .map_err(|_| row_err(format!("invalid close {:?}", &record[1])))?;
        if close <= 0.0 || !close.is_finite() {
            return Err(row_err(format!("non-positive price {close}")));
        }
        rows.push((date, close, line));
    }
    rows.sort_by_key(|r| (r.0, r.2));
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(CliError::Row {
            path: path.to_path_buf(),
            line: w[1].2.max(w[0].2),
            message: format!("duplicate date {} (also on line {})", w[1].0, w[1].2.min(w[0].2)),
        });
    }
    let (dates, closes): (Vec<_>, Vec<_>) = rows.into_iter().map(|(d, c, _)| (d, c)).unzip();
    PriceSeries::new(id, dates, closes).map_err(|e| CliError::core(path.display().to_string(), e))
}

pub fn load_returns(path: &Path) -> Result<ReturnSeries> {
    let prices = ingest_csv(path)?;
    to_log_returns(&prices).map_err(|e| CliError::core(path.display().to_string(), e))
}

/// Two return series restricted to their common dates.
#[derive(Debug, Clone)]
pub struct AlignedPair {
    pub benchmark: ReturnSeries,
    pub target: ReturnSeries,
    pub dropped_benchmark: usize,
    pub dropped_target: usize,
}

/// Inner join on date.
pub fn align(benchmark: &ReturnSeries, target: &ReturnSeries) -> Result<AlignedPair> {
    let index: HashMap<NaiveDate, usize> =
        target.dates().iter().enumerate().map(|(i, d)| (*d, i)).collect();
    let (mut dates, mut bx, mut ty) = (Vec::new(), Vec::new(), Vec::new());
    for (i, d) in benchmark.dates().iter().enumerate() {
        if let Some(&j) = index.get(d) {
            dates.push(*d);
            bx.push(benchmark.values()[i]);
            ty.push(target.values()[j]);
        }
    }
    let context = format!("{} vs {}", benchmark.id(), target.id());
    if dates.is_empty() {
        return Err(CliError::core(context, comove_core::Error::EmptyIntersection));
    }
    let common = dates.len();
    let build = |id: &str, v| ReturnSeries::new(id, dates.clone(), v).map_err(|e| CliError::core(context.clone(), e));
    Ok(AlignedPair {
        benchmark: build(benchmark.id(), bx)?,
        target: build(target.id(), ty)?,
        dropped_benchmark: benchmark.len() - common,
        dropped_target: target.len() - common,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<PriceSeries> {
        parse_prices(Path::new("t.csv"), "t".into(), text.as_bytes())
    }

    fn d(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    #[test]
    fn sorts_rows() {
        let p = parse("date,close\n2020-01-03,3\n2020-01-01,1\n2020-01-02,2\n").unwrap();
        assert_eq!(p.closes(), &[1.0, 2.0, 3.0]);
        assert_eq!(p.dates()[0], d("2020-01-01"));
    }

    #[test]
    fn rejects_bad_rows_with_line_numbers() {
        let e = parse("date,close\n2020-01-01,1\n2020-01-02,-4\n").unwrap_err();
        assert!(matches!(e, CliError::Row { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("non-positive"));

        let e = parse("date,close\n2020-01-01,1\n2020-13-02,4\n").unwrap_err();
        assert!(matches!(e, CliError::Row { line: 3, .. }), "{e}");

        let e = parse("date,close\n2020-01-01,1\n2020-01-02,abc\n").unwrap_err();
        assert!(matches!(e, CliError::Row { line: 3, .. }));

        let e = parse("date,close\n2020-01-02,1\n2020-01-01,2\n2020-01-02,3\n").unwrap_err();
        assert!(matches!(e, CliError::Row { line: 4, .. }), "{e}");
        assert!(e.to_string().contains("duplicate"));
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(matches!(parse("day,price\n2020-01-01,1\n"), Err(CliError::File { .. })));
    }

    #[test]
    fn inner_join_counts_drops() {
        let a = ReturnSeries::new("a", vec![d("2020-01-01"), d("2020-01-02"), d("2020-01-03")], vec![1.0, 2.0, 3.0]).unwrap();
        let b = ReturnSeries::new("b", vec![d("2020-01-02"), d("2020-01-03"), d("2020-01-04"), d("2020-01-05")], vec![5.0, 6.0, 7.0, 8.0]).unwrap();
        let p = align(&a, &b).unwrap();
        assert_eq!(p.benchmark.values(), &[2.0, 3.0]);
        assert_eq!(p.target.values(), &[5.0, 6.0]);
        assert_eq!((p.dropped_benchmark, p.dropped_target), (1, 2));
        assert_eq!(p.benchmark.dates(), p.target.dates());
    }

    #[test]
    fn disjoint_dates() {
        let a = ReturnSeries::new("a", vec![d("2020-01-01")], vec![1.0]).unwrap();
        let b = ReturnSeries::new("b", vec![d("2021-01-01")], vec![1.0]).unwrap();
        let e = align(&a, &b).unwrap_err();
        assert!(matches!(e, CliError::Core { source: comove_core::Error::EmptyIntersection, .. }));
        assert_eq!(e.exit_code(), 2);
    }
}
