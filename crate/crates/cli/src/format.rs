//! Deterministic text rendering of result tables.

use comove_core::{McStudy, PairReport, PairSummary, SummaryStats, WindowOutcome};
use serde::Serialize;

use crate::error::Result;

/// Six significant digits in fixed notation; magnitudes below 1e-4 switch
/// to scientific notation with the same precision.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if mag < -4 {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.999996 -> 10.00000).
    if decimals > 0 && s.parse::<f64>().is_ok_and(|r| r.abs() >= 10f64.powi(mag + 1)) {
        s = format!("{x:.prec$}", prec = decimals - 1);
    }
    if s.starts_with("-0") && s.chars().all(|c| matches!(c, '-' | '0' | '.')) {
        s[1..].to_string()
    } else {
        s
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn json_text<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn stats_csv(rows: &[(String, SummaryStats)]) -> Result<String> {
    csv_text(
        &["series", "mean", "min", "max", "std_dev", "skewness", "kurtosis", "jarque_bera", "n"],
        rows.iter().map(|(id, s)| {
            vec![
                id.clone(),
                sig6(s.mean),
                sig6(s.min),
                sig6(s.max),
                sig6(s.std_dev),
                sig6(s.skewness),
                sig6(s.kurtosis),
                sig6(s.jarque_bera),
                s.n.to_string(),
            ]
        }),
    )
}

/// One summary row per pair, with the alignment drop counts.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SummaryRow {
    pub observations: usize,
    pub dropped_benchmark: usize,
    pub dropped_target: usize,
    #[serde(flatten)]
    pub summary: PairSummary,
}

pub fn summary_csv(rows: &[SummaryRow]) -> Result<String> {
    csv_text(
        &[
            "benchmark",
            "target",
            "observations",
            "dropped_benchmark",
            "dropped_target",
            "n_windows",
            "n_skipped",
            "n_significant",
            "pct_significant",
            "full_sample_correlation",
            "largest_window_index",
            "largest_window_h_xxy",
            "largest_window_correlation",
        ],
        rows.iter().map(|r| {
            let s = &r.summary;
            let (li, lh, lc) = match &s.largest_window {
                Some(l) => (l.window_index.to_string(), sig6(l.h_xxy), sig6(l.correlation)),
                None => (String::new(), String::new(), String::new()),
            };
            vec![
                s.benchmark_id.clone(),
                s.target_id.clone(),
                r.observations.to_string(),
                r.dropped_benchmark.to_string(),
                r.dropped_target.to_string(),
                s.n_windows.to_string(),
                s.n_skipped.to_string(),
                s.n_significant.to_string(),
                format!("{:.1}", s.pct_significant),
                sig6(s.full_sample_correlation),
                li,
                lh,
                lc,
            ]
        }),
    )
}

pub fn significant_csv(summary: &PairSummary) -> Result<String> {
    csv_text(
        &["window_index", "start_date", "end_date", "one_minus_p"],
        summary.significant.iter().map(|w| {
            vec![w.window_index.to_string(), w.start_date.to_string(), w.end_date.to_string(), sig6(w.one_minus_p)]
        }),
    )
}

pub fn plot_csv(report: &PairReport) -> Result<String> {
    csv_text(
        &["window_index", "start_date", "one_minus_p"],
        report
            .plot_series
            .iter()
            .map(|p| vec![p.window_index.to_string(), p.start_date.to_string(), sig6(p.one_minus_p)]),
    )
}

pub fn windows_csv(report: &PairReport) -> Result<String> {
    csv_text(
        &[
            "window_index",
            "start_date",
            "end_date",
            "status",
            "h_xy",
            "df_xy",
            "p_xy",
            "h_xxy",
            "df_xxy",
            "p_xxy",
            "window_correlation",
            "ar_order_x",
            "ar_order_y",
            "var_order",
            "skip_reason",
        ],
        report.windows.iter().map(|o| match o {
            WindowOutcome::Tested(w) => vec![
                w.window_index.to_string(),
                w.start_date.to_string(),
                w.end_date.to_string(),
                "tested".into(),
                sig6(w.h_xy),
                w.df_xy.to_string(),
                sig6(w.p_xy),
                sig6(w.h_xxy),
                w.df_xxy.to_string(),
                sig6(w.p_xxy),
                sig6(w.window_correlation),
                w.ar_order_x.to_string(),
                w.ar_order_y.to_string(),
                w.var_order.to_string(),
                String::new(),
            ],
            WindowOutcome::Skipped { window_index, start_date, end_date, reason } => {
                let mut row = vec![window_index.to_string(), start_date.to_string(), end_date.to_string(), "skipped".into()];
                row.extend(std::iter::repeat_n(String::new(), 10));
                row.push(reason.as_str().into());
                row
            }
        }),
    )
}

pub fn simulation_csv(study: &McStudy) -> Result<String> {
    csv_text(
        &[
            "statistic",
            "theta",
            "length",
            "lag_depth",
            "replications",
            "rejections",
            "rejection_rate",
            "std_error",
            "alpha",
            "seed",
        ],
        [("h_xy", &study.h_xy), ("h_xxy", &study.h_xxy)].into_iter().map(|(name, r)| {
            vec![
                name.into(),
                sig6(study.theta),
                study.length.to_string(),
                study.lag_depth.to_string(),
                r.replications.to_string(),
                r.rejections.to_string(),
                sig6(r.rejection_rate),
                sig6(r.std_error()),
                sig6(r.alpha),
                r.seed.to_string(),
            ]
        }),
    )
}
