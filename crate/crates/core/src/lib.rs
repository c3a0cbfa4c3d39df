//! Episodic nonlinear dependence between pairs of return series.
//!
//! The crate implements the bivariate portmanteau tests of windowed
//! cross-correlation (`H_xy`) and cross-bicorrelation (`H_xxy`), the linear
//! pre-whitening filters that precede them, and a seeded Monte Carlo harness
//! for checking size and power. Everything here is pure computation over
//! in-memory slices; file formats and the command-line front end live in the
//! `comove` crate.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]
// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod chisq;
pub mod crossbicorr;
pub mod error;
mod linalg;
mod math;
pub mod prewhiten;
pub mod series;
pub mod simgen;

pub use chisq::chi_square_sf;
pub use crossbicorr::{
    cross_bicorrelation, cross_correlation, h_xxy, h_xy, included_lag_pairs, lag_depth,
    partition_windows, run_pair_test, summarize, test_window, LargestWindow, PairReport,
    PairSummary, PairTest, PlotPoint, Portmanteau, SignificantWindow, SkipReason, WindowOutcome,
    WindowResult, WindowSpec,
};
pub use error::{Error, Result};
pub use prewhiten::{
    fit_ar, fit_var, select_order_bic, ArFit, BicTarget, OrderRule, PrewhitenConfig, PrewhitenScope,
    VarEquation, VarFit,
};
pub use simgen::{
    gen_ar, gen_cross_bilinear, gen_gaussian_iid, monte_carlo_power, monte_carlo_size,
    monte_carlo_study, McResult, McStudy, ProcessKind, ProcessSpec, Realization, Statistic,
};
pub use series::{
    pearson_correlation, standardize, summary_stats, to_log_returns, PriceSeries, ReturnSeries,
    SummaryStats,
};
