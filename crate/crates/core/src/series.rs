//! Price and return series, standardization, descriptive statistics and
//! Pearson correlation.

use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::math;

/// Dated daily closing prices for one index.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PriceSeries {
    id: String,
    dates: Vec<NaiveDate>,
    closes: Vec<f64>,
}

impl PriceSeries {
    /// Validates and wraps a price history. Dates must be strictly increasing
    /// and every close finite and positive.
    pub fn new(id: impl Into<String>, dates: Vec<NaiveDate>, closes: Vec<f64>) -> Result<Self> {
        if dates.len() != closes.len() {
            return Err(Error::LengthMismatch { left: dates.len(), right: closes.len() });
        }
        if closes.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: closes.len() });
        }
        if let Some((index, &value)) =
            closes.iter().enumerate().find(|(_, c)| !(c.is_finite() && **c > 0.0))
        {
            return Err(Error::NonPositivePrice { index, value });
        }
        check_increasing(&dates)?;
        Ok(Self { id: id.into(), dates, closes })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn closes(&self) -> &[f64] {
        &self.closes
    }

    pub fn len(&self) -> usize {
        self.closes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closes.is_empty()
    }
}

/// Percentage log returns, dated by the later day of each price pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReturnSeries {
    id: String,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl ReturnSeries {
    pub fn new(id: impl Into<String>, dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::LengthMismatch { left: dates.len(), right: values.len() });
        }
        check_increasing(&dates)?;
        Ok(Self { id: id.into(), dates, values })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_increasing(dates: &[NaiveDate]) -> Result<()> {
    match dates.windows(2).position(|w| w[0] >= w[1]) {
        Some(i) => Err(Error::UnorderedDates { index: i + 1 }),
        None => Ok(()),
    }
}

/// Descriptive statistics of a return sample.
///
/// `std_dev` uses the `n - 1` divisor. Skewness and kurtosis are population
/// moment ratios; kurtosis is raw, so a Gaussian sample gives about 3.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub std_dev: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub jarque_bera: f64,
}

/// `r_t = 100 (ln p_t - ln p_{t-1})`.
pub fn to_log_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    let closes = prices.closes();
    if closes.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: closes.len() });
    }
    let values = closes.windows(2).map(|w| 100.0 * (math::ln(w[1]) - math::ln(w[0]))).collect();
    Ok(ReturnSeries {
        id: prices.id.clone(),
        dates: prices.dates[1..].to_vec(),
        values,
    })
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance with the `n - 1` divisor.
pub(crate) fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

// Relative guard for "zero" variance. Exactly constant inputs can still
// produce a tiny nonzero variance through rounding of the mean.
fn is_degenerate(values: &[f64], variance: f64) -> bool {
    let scale = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    !(variance > 1e-24 * scale * scale) || !variance.is_finite()
}

pub fn summary_stats(returns: &[f64]) -> Result<SummaryStats> {
    let n = returns.len();
    if n < 4 {
        return Err(Error::InsufficientData { needed: 4, got: n });
    }
    let mean = mean(returns);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in returns {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        min = min.min(v);
        max = max.max(v);
    }
    let nf = n as f64;
    if is_degenerate(returns, m2 / nf) {
        return Err(Error::DegenerateSeries);
    }
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    let skewness = m3 / (m2 * math::sqrt(m2));
    let kurtosis = m4 / (m2 * m2);
    let excess = kurtosis - 3.0;
    let jarque_bera = nf / 6.0 * (skewness * skewness + excess * excess / 4.0);
    Ok(SummaryStats {
        n,
        mean,
        min,
        max,
        std_dev: math::sqrt(m2 * nf / (nf - 1.0)),
        skewness,
        kurtosis,
        jarque_bera,
    })
}

/// Rescales to sample mean 0 and sample standard deviation 1.
pub fn standardize(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: values.len() });
    }
    let m = mean(values);
    let var = sample_variance(values);
    if is_degenerate(values, var) {
        return Err(Error::DegenerateWindow);
    }
    let sd = math::sqrt(var);
    Ok(values.iter().map(|v| (v - m) / sd).collect())
}

pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: x.len() });
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let n = x.len() as f64;
    if is_degenerate(x, sxx / n) || is_degenerate(y, syy / n) {
        return Err(Error::DegenerateSeries);
    }
    Ok((sxy / math::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn days(n: usize) -> Vec<NaiveDate> {
        let start = NaiveDate::from_ymd_opt(2003, 1, 2).unwrap();
        (0..n).map(|i| start + chrono::Days::new(i as u64)).collect()
    }

    fn prices(closes: &[f64]) -> PriceSeries {
        PriceSeries::new("idx", days(closes.len()), closes.to_vec()).unwrap()
    }

    fn gaussian(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn log_returns_examples() {
        assert_eq!(to_log_returns(&prices(&[1.0, 1.0])).unwrap().values(), &[0.0]);
        let r = to_log_returns(&prices(&[1.0, core::f64::consts::E])).unwrap();
        assert!((r.values()[0] - 100.0).abs() < 1e-12);
        let r = to_log_returns(&prices(&[100.0, 110.0])).unwrap();
        assert!((r.values()[0] - 9.531_017_980_432_486).abs() < 1e-12);
        assert_eq!(r.dates(), &days(2)[1..]);
    }

    #[test]
    fn price_series_validation() {
        assert!(matches!(
            PriceSeries::new("x", days(1), vec![1.0]),
            Err(Error::InsufficientData { .. })
        ));
        assert!(matches!(
            PriceSeries::new("x", days(2), vec![1.0, -1.0]),
            Err(Error::NonPositivePrice { index: 1, .. })
        ));
        let mut d = days(3);
        d.swap(1, 2);
        assert!(matches!(
            PriceSeries::new("x", d, vec![1.0, 2.0, 3.0]),
            Err(Error::UnorderedDates { index: 2 })
        ));
    }

    #[test]
    fn summary_symmetric_sample() {
        let s = summary_stats(&[-1.0, 1.0, -1.0, 1.0]).unwrap();
        assert_eq!(s.skewness, 0.0);
        assert_eq!(s.kurtosis, 1.0);
        // Only the kurtosis term contributes: 4/6 * (1 - 3)^2 / 4.
        assert!((s.jarque_bera - 4.0 / 6.0).abs() < 1e-12);
        assert!((s.std_dev - (4.0_f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!((s.min, s.max, s.mean), (-1.0, 1.0, 0.0));
    }

    #[test]
    fn summary_rejects_constant_and_short() {
        assert_eq!(summary_stats(&[0.3; 10]), Err(Error::DegenerateSeries));
        assert!(matches!(summary_stats(&[1.0, 2.0, 3.0]), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn gaussian_kurtosis_near_three() {
        let x = gaussian(100_000, 7);
        let s = summary_stats(&x).unwrap();
        assert!((2.9..=3.1).contains(&s.kurtosis), "kurtosis {}", s.kurtosis);
        assert!(s.skewness.abs() < 4.0 * (6.0 / x.len() as f64).sqrt());
    }

    #[test]
    fn standardize_examples() {
        assert_eq!(standardize(&[1.0, 2.0, 3.0]).unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(standardize(&[5.0, 5.0, 5.0]), Err(Error::DegenerateWindow));
        let z = standardize(&gaussian(50, 3)).unwrap();
        let zz = standardize(&z).unwrap();
        for (a, b) in z.iter().zip(&zz) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson_correlation(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_correlation(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        let r = pearson_correlation(&x, &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
        assert!(matches!(pearson_correlation(&x, &x[..3]), Err(Error::LengthMismatch { .. })));
        assert_eq!(pearson_correlation(&x, &[2.0; 4]), Err(Error::DegenerateSeries));
    }

    proptest! {
        #[test]
        fn returns_invariant_to_price_scale(
            closes in proptest::collection::vec(0.01f64..1e4, 2..40),
            k in 0.001f64..1000.0,
        ) {
            let a = to_log_returns(&prices(&closes)).unwrap();
            let scaled: Vec<f64> = closes.iter().map(|c| c * k).collect();
            let b = to_log_returns(&prices(&scaled)).unwrap();
            for (u, v) in a.values().iter().zip(b.values()) {
                prop_assert!((u - v).abs() < 1e-9);
            }
        }

        #[test]
        fn standardize_affine_invariant(
            x in proptest::collection::vec(-100.0f64..100.0, 3..40),
            a in 0.01f64..100.0,
            b in -100.0f64..100.0,
        ) {
            prop_assume!(sample_variance(&x) > 1e-6);
            let z = standardize(&x).unwrap();
            let moved: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let w = standardize(&moved).unwrap();
            for (u, v) in z.iter().zip(&w) {
                prop_assert!((u - v).abs() < 1e-8);
            }
        }

        #[test]
        fn pearson_symmetric_and_bounded(
            pairs in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..40),
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            prop_assume!(sample_variance(&x) > 1e-6 && sample_variance(&y) > 1e-6);
            let r = pearson_correlation(&x, &y).unwrap();
            prop_assert!((-1.0..=1.0).contains(&r));
            prop_assert_eq!(r, pearson_correlation(&y, &x).unwrap());
        }
    }
}
