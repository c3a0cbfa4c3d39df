//! Linear pre-whitening: OLS autoregressions, bivariate VARs with an optional
//! contemporaneous regressor, and BIC order selection.
//!
//! Residuals from these fits carry no linear auto- or cross-correlation at the
//! fitted lags, so any dependence left for the portmanteau tests is nonlinear.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{ols, OlsFit};
use crate::math;

/// Default largest order considered by BIC selection.
pub const DEFAULT_MAX_ORDER: usize = 10;
/// Order used by fixed-order pre-whitening.
pub const DEFAULT_FIXED_ORDER: usize = 2;

/// Univariate AR(p) fit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArFit {
    pub order: usize,
    pub intercept: f64,
    /// `coefficients[i]` multiplies `x_{t-1-i}`.
    pub coefficients: Vec<f64>,
    /// Standard errors of `coefficients`, same order.
    pub std_errors: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Mean squared residual.
    pub sigma2: f64,
    pub bic: f64,
}

/// One equation of a bivariate VAR.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarEquation {
    pub intercept: f64,
    /// `x_lags[i]` multiplies `x_{t-1-i}`.
    pub x_lags: Vec<f64>,
    /// `y_lags[i]` multiplies `y_{t-1-i}`.
    pub y_lags: Vec<f64>,
    pub contemporaneous_x: Option<f64>,
    /// Standard errors in regressor order: intercept, x lags, y lags, then
    /// the contemporaneous term if present.
    pub std_errors: Vec<f64>,
}

/// Bivariate VAR(p) fit. The contemporaneous term, when requested, enters the
/// `y` equation only.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarFit {
    pub order: usize,
    pub eq_x: VarEquation,
    pub eq_y: VarEquation,
    pub residuals_x: Vec<f64>,
    pub residuals_y: Vec<f64>,
    pub bic: f64,
}

/// Series (or pair) whose autoregressive order is to be chosen.
#[derive(Debug, Clone, Copy)]
pub enum BicTarget<'a> {
    Univariate(&'a [f64]),
    Bivariate { x: &'a [f64], y: &'a [f64], contemporaneous: bool },
}

/// How the pre-whitening order is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OrderRule {
    /// BIC over `0..=max_order`.
    Bic { max_order: usize },
    Fixed { order: usize },
}

/// Whether filters are estimated inside each window or once over the sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PrewhitenScope {
    PerWindow,
    FullSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrewhitenConfig {
    pub rule: OrderRule,
    pub scope: PrewhitenScope,
}

impl Default for PrewhitenConfig {
    fn default() -> Self {
        Self {
            rule: OrderRule::Fixed { order: DEFAULT_FIXED_ORDER },
            scope: PrewhitenScope::PerWindow,
        }
    }
}

/// `series[start - lag .. len - lag]`: the `lag`-shifted regressor aligned
/// with targets `series[start..]`.
fn lagged(series: &[f64], start: usize, lag: usize) -> Vec<f64> {
    series[start - lag..series.len() - lag].to_vec()
}

fn ar_design(series: &[f64], p: usize, start: usize) -> Vec<Vec<f64>> {
    let mut cols = Vec::with_capacity(p + 1);
    cols.push(vec![1.0; series.len() - start]);
    cols.extend((1..=p).map(|lag| lagged(series, start, lag)));
    cols
}

fn mean_square(values: &[f64]) -> f64 {
    values.iter().map(|e| e * e).sum::<f64>() / values.len() as f64
}

fn penalty(params: usize, t_eff: usize) -> f64 {
    params as f64 * math::ln(t_eff as f64) / t_eff as f64
}

/// AR(p) estimated on targets `series[start..]`, `start >= p`.
fn fit_ar_on(series: &[f64], p: usize, start: usize) -> Result<ArFit> {
    let OlsFit { coefficients, std_errors, residuals } =
        ols(&ar_design(series, p, start), &series[start..])?;
    let sigma2 = mean_square(&residuals);
    let bic = math::ln(sigma2) + penalty(p + 1, residuals.len());
    Ok(ArFit {
        order: p,
        intercept: coefficients[0],
        coefficients: coefficients[1..].to_vec(),
        std_errors: std_errors[1..].to_vec(),
        residuals,
        sigma2,
        bic,
    })
}

/// OLS AR(p) with intercept, using every observation from `t = p` on.
pub fn fit_ar(series: &[f64], p: usize) -> Result<ArFit> {
    if series.len() <= p + 1 {
        return Err(Error::InsufficientData { needed: p + 2, got: series.len() });
    }
    fit_ar_on(series, p, p)
}

fn split_equation(fit: &OlsFit, p: usize, contemporaneous: bool) -> VarEquation {
    let c = &fit.coefficients;
    VarEquation {
        intercept: c[0],
        x_lags: c[1..=p].to_vec(),
        y_lags: c[p + 1..=2 * p].to_vec(),
        contemporaneous_x: contemporaneous.then(|| c[2 * p + 1]),
        std_errors: fit.std_errors.clone(),
    }
}

fn fit_var_on(x: &[f64], y: &[f64], p: usize, contemporaneous: bool, start: usize) -> Result<VarFit> {
    let n = x.len() - start;
    let mut cols = Vec::with_capacity(2 * p + 2);
    cols.push(vec![1.0; n]);
    cols.extend((1..=p).map(|lag| lagged(x, start, lag)));
    cols.extend((1..=p).map(|lag| lagged(y, start, lag)));
    let fit_x = ols(&cols, &x[start..])?;
    if contemporaneous {
        cols.push(x[start..].to_vec());
    }
    let fit_y = ols(&cols, &y[start..])?;

    let sxx = mean_square(&fit_x.residuals);
    let syy = mean_square(&fit_y.residuals);
    let sxy = fit_x.residuals.iter().zip(&fit_y.residuals).map(|(a, b)| a * b).sum::<f64>()
        / n as f64;
    let params = 2 * (2 * p + 1) + usize::from(contemporaneous);
    let bic = math::ln(sxx * syy - sxy * sxy) + penalty(params, n);

    Ok(VarFit {
        order: p,
        eq_x: split_equation(&fit_x, p, false),
        eq_y: split_equation(&fit_y, p, contemporaneous),
        residuals_x: fit_x.residuals,
        residuals_y: fit_y.residuals,
        bic,
    })
}

/// Equation-by-equation OLS VAR(p). With `contemporaneous` set, the `y`
/// equation also regresses on `x_t`.
pub fn fit_var(x: &[f64], y: &[f64], p: usize, contemporaneous: bool) -> Result<VarFit> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() <= p + 2 {
        return Err(Error::InsufficientData { needed: p + 3, got: x.len() });
    }
    fit_var_on(x, y, p, contemporaneous, p)
}

/// BIC-minimizing order in `0..=max_order`. Every candidate is fitted on the
/// same targets `t = max_order ..`, so criteria are comparable.
pub fn select_order_bic(target: BicTarget<'_>, max_order: usize) -> Result<usize> {
    let len = match target {
        BicTarget::Univariate(s) => s.len(),
        BicTarget::Bivariate { x, y, .. } => {
            if x.len() != y.len() {
                return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
            }
            x.len()
        }
    };
    if len <= max_order + 2 {
        return Err(Error::InsufficientData { needed: max_order + 3, got: len });
    }
    let mut best = (0, f64::INFINITY);
    for p in 0..=max_order {
        let bic = match target {
            BicTarget::Univariate(s) => fit_ar_on(s, p, max_order)?.bic,
            BicTarget::Bivariate { x, y, contemporaneous } => {
                fit_var_on(x, y, p, contemporaneous, max_order)?.bic
            }
        };
        if bic < best.1 {
            best = (p, bic);
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simgen::{gen_ar, gen_gaussian_iid, replication_seed};
    use proptest::prelude::*;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn order_zero_demeans() {
        let s = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        let fit = fit_ar(&s, 0).unwrap();
        let m = s.iter().sum::<f64>() / s.len() as f64;
        for (e, v) in fit.residuals.iter().zip(&s) {
            assert!((e - (v - m)).abs() < 1e-12);
        }
        assert!(fit.coefficients.is_empty());
        assert!((fit.sigma2 - mean_square(&fit.residuals)).abs() < 1e-15);
    }

    #[test]
    fn constant_series_is_singular() {
        assert_eq!(fit_ar(&[2.0; 20], 1), Err(Error::SingularDesign));
        assert!(matches!(fit_ar(&[1.0, 2.0], 1), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn ar1_coefficient_recovered() {
        let x = gen_ar(&[0.5], 5000, 11, 100).unwrap();
        let fit = fit_ar(&x, 1).unwrap();
        assert!((fit.coefficients[0] - 0.5).abs() < 0.05, "{}", fit.coefficients[0]);
        assert_eq!(fit.residuals.len(), x.len() - 1);
        // OLS orthogonality of residuals to the regressors.
        assert!(fit.residuals.iter().sum::<f64>().abs() < 1e-8);
        assert!(dot(&fit.residuals, &x[..x.len() - 1]).abs() < 1e-8);
    }

    #[test]
    fn iid_ar2_slopes_insignificant() {
        let x = gen_gaussian_iid(3000, 5);
        let fit = fit_ar(&x, 2).unwrap();
        for (b, se) in fit.coefficients.iter().zip(&fit.std_errors) {
            assert!(b.abs() < 2.5 * se, "{b} vs se {se}");
        }
    }

    #[test]
    fn var_identical_series_contemporaneous_is_exact() {
        let x = gen_gaussian_iid(50, 3);
        let fit = fit_var(&x, &x, 0, true).unwrap();
        assert!((fit.eq_y.contemporaneous_x.unwrap() - 1.0).abs() < 1e-10);
        assert!(fit.residuals_y.iter().all(|e| e.abs() < 1e-10));
        assert!(fit.eq_x.contemporaneous_x.is_none());
        // With lags the design repeats columns.
        assert_eq!(fit_var(&x, &x, 2, true), Err(Error::SingularDesign));
    }

    #[test]
    fn var_independent_pair_slopes_insignificant() {
        let x = gen_gaussian_iid(3000, 21);
        let y = gen_gaussian_iid(3000, 22);
        let fit = fit_var(&x, &y, 2, true).unwrap();
        for eq in [&fit.eq_x, &fit.eq_y] {
            let slopes = eq.x_lags.iter().chain(&eq.y_lags).chain(eq.contemporaneous_x.iter());
            for (b, se) in slopes.zip(&eq.std_errors[1..]) {
                assert!(b.abs() < 2.5 * se, "{b} vs se {se}");
            }
        }
        assert_eq!(fit.residuals_x.len(), 2998);
        assert_eq!(fit.residuals_y.len(), 2998);
    }

    #[test]
    fn var_contemporaneous_coefficient_recovered() {
        let x = gen_gaussian_iid(5000, 31);
        let noise = gen_gaussian_iid(5000, 32);
        let y: Vec<f64> = x.iter().zip(&noise).map(|(a, e)| 0.7 * a + e).collect();
        let fit = fit_var(&x, &y, 2, true).unwrap();
        let c = fit.eq_y.contemporaneous_x.unwrap();
        assert!((c - 0.7).abs() < 0.05, "{c}");
        let corr = crate::series::pearson_correlation(&fit.residuals_y, &x[2..]).unwrap();
        assert!(corr.abs() < 1e-8, "{corr}");
    }

    #[test]
    fn var_rejects_mismatch() {
        assert!(matches!(
            fit_var(&[1.0; 10], &[1.0; 9], 1, false),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn bic_single_candidate() {
        let x = gen_gaussian_iid(30, 1);
        assert_eq!(select_order_bic(BicTarget::Univariate(&x), 0).unwrap(), 0);
        assert!(matches!(
            select_order_bic(BicTarget::Univariate(&x[..5]), 3),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn bic_recovers_ar2_and_white_noise() {
        let reps = 200;
        let mut hits_ar2 = 0;
        let mut hits_iid = 0;
        for rep in 0..reps {
            let ar = gen_ar(&[0.5, -0.3], 2000, replication_seed(99, rep), 100).unwrap();
            if select_order_bic(BicTarget::Univariate(&ar), 8).unwrap() == 2 {
                hits_ar2 += 1;
            }
            let iid = gen_gaussian_iid(2000, replication_seed(1234, rep));
            if select_order_bic(BicTarget::Univariate(&iid), 8).unwrap() == 0 {
                hits_iid += 1;
            }
        }
        assert!(hits_ar2 as f64 >= 0.9 * reps as f64, "AR(2) hits {hits_ar2}");
        assert!(hits_iid as f64 >= 0.8 * reps as f64, "iid hits {hits_iid}");
    }

    #[test]
    fn bic_bivariate_picks_true_order() {
        // y depends on x_{t-1}; x is white.
        let x = gen_gaussian_iid(2000, 41);
        let e = gen_gaussian_iid(2000, 42);
        let mut y = vec![0.0; 2000];
        for t in 1..2000 {
            y[t] = 0.6 * x[t - 1] + e[t];
        }
        let target = BicTarget::Bivariate { x: &x, y: &y, contemporaneous: true };
        assert_eq!(select_order_bic(target, 5).unwrap(), 1);
    }

    #[test]
    fn ar_residual_autocorrelation_small() {
        let t = 2000;
        let x = gen_ar(&[0.5, -0.3], t, 8, 100).unwrap();
        let fit = fit_ar(&x, 2).unwrap();
        let r = &fit.residuals;
        let denom = dot(r, r);
        for lag in 1..=2 {
            let acf = dot(&r[lag..], &r[..r.len() - lag]) / denom;
            assert!(acf.abs() < 3.0 / (t as f64).sqrt(), "lag {lag}: {acf}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn extra_lag_never_raises_sigma2(seed in any::<u64>(), p in 0usize..4) {
            let x = gen_ar(&[0.3], 200, seed, 50).unwrap();
            let start = p + 1;
            let a = fit_ar_on(&x, p, start).unwrap();
            let b = fit_ar_on(&x, p + 1, start).unwrap();
            prop_assert!(b.sigma2 <= a.sigma2 * (1.0 + 1e-12));
        }

        #[test]
        fn bic_scale_invariant(seed in any::<u64>(), k in 0.01f64..100.0) {
            let x = gen_ar(&[0.4, 0.2], 300, seed, 50).unwrap();
            let scaled: Vec<f64> = x.iter().map(|v| v * k).collect();
            prop_assert_eq!(
                select_order_bic(BicTarget::Univariate(&x), 6).unwrap(),
                select_order_bic(BicTarget::Univariate(&scaled), 6).unwrap()
            );
        }
    }
}
