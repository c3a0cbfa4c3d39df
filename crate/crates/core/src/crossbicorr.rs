//! Windowed cross-correlation and cross-bicorrelation portmanteau tests.
//!
//! A pair of aligned return series is cut into non-overlapping windows. In
//! each window both series are standardized and pre-whitened, then two
//! statistics are computed on the residuals:
//!
//! * `H_xy`, the sum over lags `r = 1..=L` of `(N - r) C_xy(r)^2`, with `L`
//!   degrees of freedom;
//! * `H_xxy`, the sum of `count(r, s) C_xxy(r, s)^2` over `r = 1..=L`,
//!   `s = -L..=L`, `s != 0`, `s != r`, with `L (2L - 1)` degrees of freedom.
//!
//! Window significance is judged on `H_xxy`.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use chrono::NaiveDate;

use crate::chisq::chi_square_sf;
use crate::error::{Error, Result};
use crate::math;
use crate::prewhiten::{
    fit_ar, fit_var, select_order_bic, BicTarget, OrderRule, PrewhitenConfig, PrewhitenScope,
};
use crate::series::{mean, pearson_correlation, sample_variance, standardize, ReturnSeries};

/// Tolerance on mean and standard deviation for inputs that must be
/// standardized.
pub const STANDARDIZED_TOL: f64 = 1e-6;

pub const DEFAULT_WINDOW_LENGTH: usize = 25;
pub const DEFAULT_EXPONENT: f64 = 0.4;
pub const DEFAULT_ALPHA: f64 = 0.05;

/// Residual mean square below which a fit is treated as exact.
const EXACT_FIT_MS: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowSpec {
    pub window_length: usize,
    pub exponent: f64,
    pub lag_depth: usize,
    pub alpha: f64,
}

impl WindowSpec {
    /// Spec with `L = floor(n^c)`.
    pub fn new(window_length: usize, exponent: f64, alpha: f64) -> Result<Self> {
        let lag_depth = lag_depth(window_length, exponent)?;
        Self { window_length, exponent, lag_depth, alpha }.validated()
    }

    /// Replaces the derived lag depth.
    pub fn with_lag_depth(self, lag_depth: usize) -> Result<Self> {
        Self { lag_depth, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter("alpha must lie in (0, 1]"));
        }
        if !(self.exponent > 0.0 && self.exponent < 0.5) {
            return Err(Error::InvalidParameter("exponent must lie in (0, 0.5)"));
        }
        if self.lag_depth < 1 {
            return Err(Error::InvalidParameter("lag depth must be at least 1"));
        }
        if self.window_length <= 2 * self.lag_depth {
            return Err(Error::WindowTooShort { len: self.window_length, lag_depth: self.lag_depth });
        }
        Ok(self)
    }

    pub fn df_xy(&self) -> usize {
        self.lag_depth
    }

    pub fn df_xxy(&self) -> usize {
        self.lag_depth * (2 * self.lag_depth - 1)
    }
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self::new(DEFAULT_WINDOW_LENGTH, DEFAULT_EXPONENT, DEFAULT_ALPHA)
            .expect("default window spec is valid")
    }
}

/// `L = floor(n^c)`.
pub fn lag_depth(window_length: usize, exponent: f64) -> Result<usize> {
    if window_length < 2 {
        return Err(Error::InsufficientData { needed: 2, got: window_length });
    }
    if !(exponent > 0.0 && exponent < 0.5) {
        return Err(Error::InvalidParameter("exponent must lie in (0, 0.5)"));
    }
    // The nudge keeps exact powers such as 32^0.4 = 4 from flooring to 3.
    let l = math::floor(math::powf(window_length as f64, exponent) + 1e-9) as usize;
    if l < 1 {
        return Err(Error::InvalidParameter("lag depth below 1"));
    }
    Ok(l)
}

/// `floor(len / window)` consecutive ranges of exactly `window` indices,
/// starting at 0. Trailing observations that do not fill a window are dropped.
pub fn partition_windows(len: usize, window: usize) -> Result<Vec<Range<usize>>> {
    if window == 0 {
        return Err(Error::InvalidParameter("window length must be positive"));
    }
    if len < window {
        return Err(Error::ShorterThanWindow { len, window });
    }
    Ok((0..len / window).map(|k| k * window..(k + 1) * window).collect())
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    Ok(())
}

/// `C_xy(r) = (N - r)^-1 sum_t x(t) y(t + r)`.
pub fn cross_correlation(x: &[f64], y: &[f64], r: usize) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len();
    if r < 1 || r >= n {
        return Err(Error::WindowTooShortForLag { r, s: 0 });
    }
    let sum: f64 = x[..n - r].iter().zip(&y[r..]).map(|(a, b)| a * b).sum();
    Ok(sum / (n - r) as f64)
}

/// Admissible `t` for lag pair `(r, s)`: those with `t`, `t + r` and `t + s`
/// all inside `0..n`.
fn admissible(n: usize, r: usize, s: i64) -> Option<Range<usize>> {
    let lo = if s < 0 { s.unsigned_abs() as usize } else { 0 };
    let reach = r.max(if s > 0 { s as usize } else { 0 });
    let hi = n.checked_sub(reach)?;
    (hi > lo).then_some(lo..hi)
}

/// `C_xxy(r, s)`: mean of `x(t) x(t + r) y(t + s)` over admissible `t`.
/// For `s >= 0` the divisor is `N - max(r, s)`.
pub fn cross_bicorrelation(x: &[f64], y: &[f64], r: usize, s: i64) -> Result<f64> {
    check_pair(x, y)?;
    let range = match admissible(x.len(), r, s) {
        Some(range) if r >= 1 => range,
        _ => return Err(Error::WindowTooShortForLag { r, s }),
    };
    let count = range.len();
    let sum: f64 = range
        .map(|t| x[t] * x[t + r] * y[(t as i64 + s) as usize])
        .sum();
    Ok(sum / count as f64)
}

/// Lag pairs entering `H_xxy`: `r = 1..=L`, `s = -L..=L` without `s = 0`
/// and `s = r`. There are `L (2L - 1)` of them.
pub fn included_lag_pairs(lag_depth: usize) -> Vec<(usize, i64)> {
    let l = lag_depth as i64;
    (1..=lag_depth)
        .flat_map(|r| (-l..=l).filter(move |&s| s != 0 && s != r as i64).map(move |s| (r, s)))
        .collect()
}

/// A portmanteau statistic and its asymptotic chi-square degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Portmanteau {
    pub statistic: f64,
    pub df: usize,
}

impl Portmanteau {
    pub fn p_value(&self) -> f64 {
        chi_square_sf(self.statistic, self.df).unwrap_or(f64::NAN)
    }
}

fn check_standardized(values: &[f64]) -> Result<()> {
    let m = mean(values);
    let sd = math::sqrt(sample_variance(values));
    if m.abs() > STANDARDIZED_TOL || (sd - 1.0).abs() > STANDARDIZED_TOL {
        return Err(Error::NotStandardized { mean: m, std_dev: sd });
    }
    Ok(())
}

/// `H_xy = sum_{r=1}^{L} (N - r) C_xy(r)^2` on standardized inputs.
pub fn h_xy(x: &[f64], y: &[f64], lag_depth: usize) -> Result<Portmanteau> {
    check_pair(x, y)?;
    if lag_depth < 1 {
        return Err(Error::InvalidParameter("lag depth must be at least 1"));
    }
    let n = x.len();
    if n <= lag_depth {
        return Err(Error::WindowTooShort { len: n, lag_depth });
    }
    check_standardized(x)?;
    check_standardized(y)?;
    let mut statistic = 0.0;
    for r in 1..=lag_depth {
        let c = cross_correlation(x, y, r)?;
        statistic += (n - r) as f64 * c * c;
    }
    Ok(Portmanteau { statistic, df: lag_depth })
}

/// `H_xxy = sum count(r, s) C_xxy(r, s)^2` over [`included_lag_pairs`], on
/// standardized inputs.
pub fn h_xxy(x: &[f64], y: &[f64], lag_depth: usize) -> Result<Portmanteau> {
    check_pair(x, y)?;
    if lag_depth < 1 {
        return Err(Error::InvalidParameter("lag depth must be at least 1"));
    }
    let n = x.len();
    if n <= 2 * lag_depth {
        return Err(Error::WindowTooShort { len: n, lag_depth });
    }
    check_standardized(x)?;
    check_standardized(y)?;

    let l = lag_depth as i64;
    let mut statistic = 0.0;
    let mut products = Vec::with_capacity(n);
    for r in 1..=lag_depth {
        // x(t) x(t + r) for t in 0..n - r, shared by every s.
        products.clear();
        products.extend(x[..n - r].iter().zip(&x[r..]).map(|(a, b)| a * b));
        for s in -l..=l {
            if s == 0 || s == r as i64 {
                continue;
            }
            let range = admissible(n, r, s).ok_or(Error::WindowTooShortForLag { r, s })?;
            let count = range.len();
            let shifted = (range.start as i64 + s) as usize;
            let sum: f64 = products[range.clone()]
                .iter()
                .zip(&y[shifted..shifted + count])
                .map(|(p, v)| p * v)
                .sum();
            let c = sum / count as f64;
            statistic += count as f64 * c * c;
        }
    }
    Ok(Portmanteau { statistic, df: lag_depth * (2 * lag_depth - 1) })
}

/// Why a window produced no statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SkipReason {
    /// One of the raw series is constant in the window.
    DegenerateWindow,
    /// The target is an exact linear function of the benchmark.
    CollinearPair,
    /// An autoregressive design is rank deficient.
    SingularDesign,
    /// Too few observations remain after filtering.
    InsufficientData,
}

impl SkipReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            SkipReason::DegenerateWindow => "degenerate_window",
            SkipReason::CollinearPair => "collinear_pair",
            SkipReason::SingularDesign => "singular_design",
            SkipReason::InsufficientData => "insufficient_data",
        }
    }
}

/// Statistics for one tested window. `window_index` counts from 1.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowResult {
    pub window_index: usize,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub h_xy: f64,
    pub df_xy: usize,
    pub p_xy: f64,
    pub h_xxy: f64,
    pub df_xxy: usize,
    pub p_xxy: f64,
    /// Pearson correlation of the raw window returns.
    pub window_correlation: f64,
    pub ar_order_x: usize,
    pub ar_order_y: usize,
    pub var_order: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", rename_all = "snake_case"))]
pub enum WindowOutcome {
    Tested(WindowResult),
    Skipped {
        window_index: usize,
        start_date: NaiveDate,
        end_date: NaiveDate,
        reason: SkipReason,
    },
}

impl WindowOutcome {
    pub fn window_index(&self) -> usize {
        match self {
            WindowOutcome::Tested(w) => w.window_index,
            WindowOutcome::Skipped { window_index, .. } => *window_index,
        }
    }

    pub fn tested(&self) -> Option<&WindowResult> {
        match self {
            WindowOutcome::Tested(w) => Some(w),
            WindowOutcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlotPoint {
    pub window_index: usize,
    pub start_date: NaiveDate,
    pub one_minus_p: f64,
}

/// Every window of one (benchmark, target) pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairReport {
    pub benchmark_id: String,
    pub target_id: String,
    pub spec: WindowSpec,
    pub prewhiten: PrewhitenConfig,
    pub windows: Vec<WindowOutcome>,
    /// Windows with `p_xxy < alpha`.
    pub n_significant: usize,
    /// `100 n_significant / windows.len()`.
    pub pct_significant: f64,
    pub full_sample_correlation: f64,
    /// `(window_index, 1 - p_xxy)` for each tested window.
    pub plot_series: Vec<PlotPoint>,
}

impl PairReport {
    pub fn tested(&self) -> impl Iterator<Item = &WindowResult> {
        self.windows.iter().filter_map(WindowOutcome::tested)
    }

    pub fn is_significant(&self, w: &WindowResult) -> bool {
        w.p_xxy < self.spec.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Orders {
    ar_x: usize,
    ar_y: usize,
    var: usize,
}

/// Filter residuals, each pair aligned in time. `*_start` is the offset of
/// the first residual within the filtered input.
#[derive(Debug, Clone)]
struct Filtered {
    xy: (Vec<f64>, Vec<f64>),
    xy_start: usize,
    xxy: (Vec<f64>, Vec<f64>),
    xxy_start: usize,
    orders: Orders,
}

/// Largest BIC order whose biggest candidate (the VAR `y` equation with
/// `2p + 2` regressors) keeps at least twice as many observations as
/// regressors on the common sample, and leaves more than `2L` residuals.
pub fn feasible_max_order(len: usize, lag_depth: usize) -> usize {
    let mut p = 0;
    while {
        let q = p + 1;
        len > q + 2 && len - q >= 2 * (2 * q + 2) && len - q > 2 * lag_depth
    } {
        p += 1;
    }
    p
}

fn skip_for(err: Error) -> SkipReason {
    match err {
        Error::SingularDesign => SkipReason::SingularDesign,
        Error::DegenerateWindow | Error::DegenerateSeries => SkipReason::DegenerateWindow,
        _ => SkipReason::InsufficientData,
    }
}

fn mean_square(values: &[f64]) -> f64 {
    values.iter().map(|e| e * e).sum::<f64>() / values.len() as f64
}

fn prewhiten_pair(
    x: &[f64],
    y: &[f64],
    rule: OrderRule,
    lag_depth: usize,
) -> core::result::Result<Filtered, SkipReason> {
    let orders = match rule {
        OrderRule::Fixed { order } => Orders { ar_x: order, ar_y: order, var: order },
        OrderRule::Bic { max_order } => {
            let max = max_order.min(feasible_max_order(x.len(), lag_depth));
            let pair = BicTarget::Bivariate { x, y, contemporaneous: true };
            let var = match select_order_bic(pair, max) {
                Ok(p) => p,
                Err(Error::SingularDesign) => return Err(SkipReason::CollinearPair),
                Err(e) => return Err(skip_for(e)),
            };
            Orders {
                ar_x: select_order_bic(BicTarget::Univariate(x), max).map_err(skip_for)?,
                ar_y: select_order_bic(BicTarget::Univariate(y), max).map_err(skip_for)?,
                var,
            }
        }
    };

    let var = match fit_var(x, y, orders.var, true) {
        Ok(fit) => fit,
        Err(Error::SingularDesign) => return Err(SkipReason::CollinearPair),
        Err(e) => return Err(skip_for(e)),
    };
    let scale_y = mean_square(y).max(f64::MIN_POSITIVE);
    if mean_square(&var.residuals_y) < EXACT_FIT_MS * scale_y {
        return Err(SkipReason::CollinearPair);
    }

    let ar_x = fit_ar(x, orders.ar_x).map_err(skip_for)?;
    let ar_y = fit_ar(y, orders.ar_y).map_err(skip_for)?;
    let xy_start = orders.ar_x.max(orders.ar_y);
    let ex = ar_x.residuals[xy_start - orders.ar_x..].to_vec();
    let ey = ar_y.residuals[xy_start - orders.ar_y..].to_vec();

    Ok(Filtered {
        xy: (ex, ey),
        xy_start,
        xxy: (var.residuals_x, var.residuals_y),
        xxy_start: orders.var,
        orders,
    })
}

fn statistics(
    xy: (&[f64], &[f64]),
    xxy: (&[f64], &[f64]),
    lag_depth: usize,
) -> core::result::Result<(Portmanteau, Portmanteau), SkipReason> {
    let zx = standardize(xy.0).map_err(skip_for)?;
    let zy = standardize(xy.1).map_err(skip_for)?;
    let second = h_xy(&zx, &zy, lag_depth).map_err(skip_for)?;
    let zx = standardize(xxy.0).map_err(skip_for)?;
    let zy = standardize(xxy.1).map_err(|e| match e {
        Error::DegenerateWindow => SkipReason::CollinearPair,
        e => skip_for(e),
    })?;
    let third = h_xxy(&zx, &zy, lag_depth).map_err(skip_for)?;
    Ok((second, third))
}

/// Slice of a time-aligned residual series (first residual at `start`)
/// covering `range` of the original time index.
fn residual_slice<'v>(values: &'v [f64], start: usize, range: &Range<usize>) -> &'v [f64] {
    let lo = range.start.max(start) - start;
    let hi = range.end.saturating_sub(start).max(lo);
    &values[lo..hi]
}

/// A prepared pair test. Windows can be evaluated independently and in any
/// order with [`PairTest::run_window`]; [`PairTest::finish`] orders them.
#[derive(Debug, Clone)]
pub struct PairTest<'a> {
    benchmark: &'a ReturnSeries,
    target: &'a ReturnSeries,
    spec: WindowSpec,
    config: PrewhitenConfig,
    windows: Vec<Range<usize>>,
    full_sample: Option<core::result::Result<Filtered, SkipReason>>,
}

impl<'a> PairTest<'a> {
    pub fn prepare(
        benchmark: &'a ReturnSeries,
        target: &'a ReturnSeries,
        spec: WindowSpec,
        config: PrewhitenConfig,
    ) -> Result<Self> {
        if benchmark.len() != target.len() {
            return Err(Error::LengthMismatch { left: benchmark.len(), right: target.len() });
        }
        if let Some(i) = benchmark.dates().iter().zip(target.dates()).position(|(a, b)| a != b) {
            return Err(Error::MisalignedDates { index: i });
        }
        let spec = spec.validated()?;
        let windows = partition_windows(benchmark.len(), spec.window_length)?;
        let full_sample = match config.scope {
            PrewhitenScope::PerWindow => None,
            PrewhitenScope::FullSample => Some(prewhiten_full(benchmark, target, &config, &spec)),
        };
        Ok(Self { benchmark, target, spec, config, windows, full_sample })
    }

    pub fn window_count(&self) -> usize {
        self.windows.len()
    }

    /// Evaluates window `k` (0-based position; reported index is `k + 1`).
    pub fn run_window(&self, k: usize) -> WindowOutcome {
        let range = self.windows[k].clone();
        let dates = &self.benchmark.dates()[range.clone()];
        let (start_date, end_date) = (dates[0], dates[dates.len() - 1]);
        let window_index = k + 1;
        let skipped = |reason| WindowOutcome::Skipped { window_index, start_date, end_date, reason };

        let bx = &self.benchmark.values()[range.clone()];
        let ty = &self.target.values()[range.clone()];
        let window_correlation = match pearson_correlation(bx, ty) {
            Ok(c) => c,
            Err(_) => return skipped(SkipReason::DegenerateWindow),
        };

        let computed = match &self.full_sample {
            None => standardize(bx)
                .and_then(|zx| standardize(ty).map(|zy| (zx, zy)))
                .map_err(skip_for)
                .and_then(|(zx, zy)| {
                    prewhiten_pair(&zx, &zy, self.config.rule, self.spec.lag_depth)
                })
                .and_then(|f| {
                    statistics((&f.xy.0, &f.xy.1), (&f.xxy.0, &f.xxy.1), self.spec.lag_depth)
                        .map(|stats| (stats, f.orders))
                }),
            Some(Err(reason)) => Err(*reason),
            Some(Ok(f)) => statistics(
                (
                    residual_slice(&f.xy.0, f.xy_start, &range),
                    residual_slice(&f.xy.1, f.xy_start, &range),
                ),
                (
                    residual_slice(&f.xxy.0, f.xxy_start, &range),
                    residual_slice(&f.xxy.1, f.xxy_start, &range),
                ),
                self.spec.lag_depth,
            )
            .map(|stats| (stats, f.orders)),
        };

        match computed {
            Err(reason) => skipped(reason),
            Ok(((second, third), orders)) => WindowOutcome::Tested(WindowResult {
                window_index,
                start_date,
                end_date,
                h_xy: second.statistic,
                df_xy: second.df,
                p_xy: second.p_value(),
                h_xxy: third.statistic,
                df_xxy: third.df,
                p_xxy: third.p_value(),
                window_correlation,
                ar_order_x: orders.ar_x,
                ar_order_y: orders.ar_y,
                var_order: orders.var,
            }),
        }
    }

    /// Assembles the report. Outcomes may arrive in any order.
    pub fn finish(&self, mut outcomes: Vec<WindowOutcome>) -> Result<PairReport> {
        outcomes.sort_by_key(WindowOutcome::window_index);
        if outcomes.len() != self.windows.len()
            || outcomes.iter().enumerate().any(|(k, o)| o.window_index() != k + 1)
        {
            return Err(Error::InvalidParameter("window outcomes do not cover the partition"));
        }
        let alpha = self.spec.alpha;
        let n_significant = outcomes
            .iter()
            .filter_map(WindowOutcome::tested)
            .filter(|w| w.p_xxy < alpha)
            .count();
        let plot_series = outcomes
            .iter()
            .filter_map(WindowOutcome::tested)
            .map(|w| PlotPoint {
                window_index: w.window_index,
                start_date: w.start_date,
                one_minus_p: 1.0 - w.p_xxy,
            })
            .collect();
        let full_sample_correlation =
            pearson_correlation(self.benchmark.values(), self.target.values())?;
        Ok(PairReport {
            benchmark_id: self.benchmark.id().into(),
            target_id: self.target.id().into(),
            spec: self.spec,
            prewhiten: self.config,
            pct_significant: 100.0 * n_significant as f64 / outcomes.len() as f64,
            windows: outcomes,
            n_significant,
            full_sample_correlation,
            plot_series,
        })
    }
}

fn prewhiten_full(
    benchmark: &ReturnSeries,
    target: &ReturnSeries,
    config: &PrewhitenConfig,
    spec: &WindowSpec,
) -> core::result::Result<Filtered, SkipReason> {
    let zx = standardize(benchmark.values()).map_err(skip_for)?;
    let zy = standardize(target.values()).map_err(skip_for)?;
    prewhiten_pair(&zx, &zy, config.rule, spec.lag_depth)
}

/// Runs every window serially and assembles the report.
pub fn run_pair_test(
    benchmark: &ReturnSeries,
    target: &ReturnSeries,
    spec: WindowSpec,
    config: PrewhitenConfig,
) -> Result<PairReport> {
    let test = PairTest::prepare(benchmark, target, spec, config)?;
    let outcomes = (0..test.window_count()).map(|k| test.run_window(k)).collect();
    test.finish(outcomes)
}

/// Single-window test on raw (unfiltered) data: both inputs are
/// standardized and both statistics computed at the given lag depth.
pub fn test_window(x: &[f64], y: &[f64], lag_depth: usize) -> Result<(Portmanteau, Portmanteau)> {
    let zx = standardize(x)?;
    let zy = standardize(y)?;
    Ok((h_xy(&zx, &zy, lag_depth)?, h_xxy(&zx, &zy, lag_depth)?))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignificantWindow {
    pub window_index: usize,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub one_minus_p: f64,
}

/// The tested window with the largest `H_xxy`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LargestWindow {
    pub window_index: usize,
    pub h_xxy: f64,
    pub correlation: f64,
}

/// Headline numbers of a pair report plus its dated significant windows.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairSummary {
    pub benchmark_id: String,
    pub target_id: String,
    pub n_windows: usize,
    pub n_skipped: usize,
    pub n_significant: usize,
    pub pct_significant: f64,
    pub full_sample_correlation: f64,
    pub largest_window: Option<LargestWindow>,
    pub significant: Vec<SignificantWindow>,
}

pub fn summarize(report: &PairReport) -> PairSummary {
    let significant = report
        .tested()
        .filter(|w| report.is_significant(w))
        .map(|w| SignificantWindow {
            window_index: w.window_index,
            start_date: w.start_date,
            end_date: w.end_date,
            one_minus_p: 1.0 - w.p_xxy,
        })
        .collect();
    let largest_window = report
        .tested()
        .fold(None::<&WindowResult>, |best, w| match best {
            Some(b) if b.h_xxy >= w.h_xxy => Some(b),
            _ => Some(w),
        })
        .map(|w| LargestWindow {
            window_index: w.window_index,
            h_xxy: w.h_xxy,
            correlation: w.window_correlation,
        });
    PairSummary {
        benchmark_id: report.benchmark_id.clone(),
        target_id: report.target_id.clone(),
        n_windows: report.windows.len(),
        n_skipped: report.windows.len() - report.tested().count(),
        n_significant: report.n_significant,
        pct_significant: report.pct_significant,
        full_sample_correlation: report.full_sample_correlation,
        largest_window,
        significant,
    }
}
