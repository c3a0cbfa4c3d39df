//! Seeded process generators and a Monte Carlo harness for size and power.
//!
//! Every generator is a pure function of its parameters and a `u64` seed.
//! Replication `i` of a study draws from `replication_seed(master, i)`, so a
//! study gives the same counts whether replications run serially, in
//! parallel, or in any order.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::crossbicorr::{test_window, WindowSpec};
use crate::error::{Error, Result};

pub const DEFAULT_BURN_IN: usize = 100;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for substream `index` of `master`. Distinct indices give distinct
/// seeds for a fixed master: the map is a bijection of `index`.
pub fn replication_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master).wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normals(rng: &mut ChaCha8Rng, n: usize) -> impl Iterator<Item = f64> + '_ {
    (0..n).map(move |_| StandardNormal.sample(rng))
}

pub fn gen_gaussian_iid(length: usize, seed: u64) -> Vec<f64> {
    normals(&mut rng(seed), length).collect()
}

/// Rejects AR coefficients outside the stationary region.
///
/// Uses the step-down (Schur-Cohn) recursion: the process is stationary
/// exactly when every partial autocorrelation it produces lies strictly
/// inside (-1, 1), which is equivalent to the companion matrix having
/// spectral radius below one.
pub fn check_stationary(coefficients: &[f64]) -> Result<()> {
    let mut a: Vec<f64> = coefficients.to_vec();
    while let Some(&k) = a.last() {
        if !(k.abs() < 1.0) {
            return Err(Error::NonStationary);
        }
        let m = a.len();
        let denom = 1.0 - k * k;
        let prev: Vec<f64> = (0..m - 1).map(|i| (a[i] + k * a[m - 2 - i]) / denom).collect();
        a = prev;
    }
    Ok(())
}

/// `x_t = sum_i phi_i x_{t-i} + e_t` with standard Gaussian innovations,
/// discarding the first `burn_in` values. An empty coefficient list has no
/// initial condition to forget and returns the innovation stream itself, the
/// same values as [`gen_gaussian_iid`].
pub fn gen_ar(coefficients: &[f64], length: usize, seed: u64, burn_in: usize) -> Result<Vec<f64>> {
    check_stationary(coefficients)?;
    if coefficients.is_empty() {
        return Ok(gen_gaussian_iid(length, seed));
    }
    let p = coefficients.len();
    let mut r = rng(seed);
    let total = burn_in + length;
    let mut x: Vec<f64> = Vec::with_capacity(total);
    for e in normals(&mut r, total) {
        let t = x.len();
        let ar: f64 = coefficients
            .iter()
            .enumerate()
            .take(t.min(p))
            .map(|(i, phi)| phi * x[t - 1 - i])
            .sum();
        x.push(ar + e);
    }
    Ok(x.split_off(burn_in))
}

/// `y_t = theta x_{t-1} x_{t-2} + e_t`. The first two values have no lagged
/// product and are pure noise.
pub fn gen_cross_bilinear(x: &[f64], theta: f64, seed: u64) -> Result<Vec<f64>> {
    if x.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: x.len() });
    }
    Ok(normals(&mut rng(seed), x.len())
        .enumerate()
        .map(|(t, e)| if t >= 2 { theta * x[t - 1] * x[t - 2] + e } else { e })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ProcessKind {
    GaussianIid,
    Ar { coefficients: Vec<f64> },
    /// Benchmark `x` is Gaussian white noise; target follows
    /// [`gen_cross_bilinear`].
    CrossBilinear { theta: f64 },
}

/// A validated recipe for one synthetic realization.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProcessSpec {
    kind: ProcessKind,
    length: usize,
    seed: u64,
    burn_in: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Realization {
    Single(Vec<f64>),
    Pair { x: Vec<f64>, y: Vec<f64> },
}

impl ProcessSpec {
    pub fn new(kind: ProcessKind, length: usize, seed: u64) -> Result<Self> {
        if length < 1 {
            return Err(Error::InvalidParameter("length must be at least 1"));
        }
        match &kind {
            ProcessKind::Ar { coefficients } => check_stationary(coefficients)?,
            ProcessKind::CrossBilinear { .. } if length < 3 => {
                return Err(Error::InsufficientData { needed: 3, got: length })
            }
            _ => {}
        }
        Ok(Self { kind, length, seed, burn_in: DEFAULT_BURN_IN })
    }

    pub fn with_burn_in(self, burn_in: usize) -> Self {
        Self { burn_in, ..self }
    }

    pub fn generate(&self) -> Result<Realization> {
        Ok(match &self.kind {
            ProcessKind::GaussianIid => Realization::Single(gen_gaussian_iid(self.length, self.seed)),
            ProcessKind::Ar { coefficients } => {
                Realization::Single(gen_ar(coefficients, self.length, self.seed, self.burn_in)?)
            }
            ProcessKind::CrossBilinear { theta } => {
                let x = gen_gaussian_iid(self.length, replication_seed(self.seed, 0));
                let y = gen_cross_bilinear(&x, *theta, replication_seed(self.seed, 1))?;
                Realization::Pair { x, y }
            }
        })
    }
}

/// Which statistic a rejection count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Statistic {
    HXy,
    HXxy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McResult {
    pub statistic: Statistic,
    pub replications: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub alpha: f64,
    pub seed: u64,
}

impl McResult {
    fn new(statistic: Statistic, replications: usize, rejections: usize, alpha: f64, seed: u64) -> Self {
        Self {
            statistic,
            replications,
            rejections,
            rejection_rate: rejections as f64 / replications as f64,
            alpha,
            seed,
        }
    }

    /// Binomial standard error of the rejection rate at its own estimate.
    pub fn std_error(&self) -> f64 {
        let p = self.rejection_rate;
        libm::sqrt(p * (1.0 - p) / self.replications as f64)
    }
}

/// Rejections of both statistics in one study.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McStudy {
    pub theta: f64,
    pub length: usize,
    pub lag_depth: usize,
    pub h_xy: McResult,
    pub h_xxy: McResult,
}

/// Smallest replication count a study accepts.
pub const MIN_REPLICATIONS: usize = 100;

/// Rejection flags `(H_xy, H_xxy)` of one replication.
///
/// The replication draws `x` of `length + 2` standard normals, builds `y` by
/// [`gen_cross_bilinear`] (pure noise when `theta == 0`), drops the first two
/// observations so every `y_t` carries its lagged product, then runs the
/// single-window test at the spec's lag depth and `alpha`.
pub fn replication_outcome(
    theta: f64,
    spec: &WindowSpec,
    length: usize,
    master_seed: u64,
    index: u64,
) -> Result<(bool, bool)> {
    let seed = replication_seed(master_seed, index);
    let x = gen_gaussian_iid(length + 2, replication_seed(seed, 0));
    let y = gen_cross_bilinear(&x, theta, replication_seed(seed, 1))?;
    let (second, third) = test_window(&x[2..], &y[2..], spec.lag_depth)?;
    Ok((second.p_value() < spec.alpha, third.p_value() < spec.alpha))
}

/// Validates replication count and sample length for a study.
pub fn check_study(replications: usize, length: usize, spec: &WindowSpec) -> Result<()> {
    if replications < MIN_REPLICATIONS {
        return Err(Error::InvalidParameter("at least 100 replications are required"));
    }
    if length <= 2 * spec.lag_depth {
        return Err(Error::WindowTooShort { len: length, lag_depth: spec.lag_depth });
    }
    Ok(())
}

/// Folds per-replication outcomes into a study. The outcomes may come from
/// any execution order.
pub fn tally(
    theta: f64,
    spec: &WindowSpec,
    length: usize,
    seed: u64,
    outcomes: impl IntoIterator<Item = (bool, bool)>,
) -> McStudy {
    let (mut n, mut rx, mut rxx) = (0, 0, 0);
    for (a, b) in outcomes {
        n += 1;
        rx += usize::from(a);
        rxx += usize::from(b);
    }
    McStudy {
        theta,
        length,
        lag_depth: spec.lag_depth,
        h_xy: McResult::new(Statistic::HXy, n, rx, spec.alpha, seed),
        h_xxy: McResult::new(Statistic::HXxy, n, rxx, spec.alpha, seed),
    }
}

/// Serial size/power study of both statistics.
pub fn monte_carlo_study(
    theta: f64,
    spec: &WindowSpec,
    length: usize,
    replications: usize,
    seed: u64,
) -> Result<McStudy> {
    check_study(replications, length, spec)?;
    let outcomes = (0..replications as u64)
        .map(|i| replication_outcome(theta, spec, length, seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(theta, spec, length, seed, outcomes))
}

/// `H_xxy` rejection rate under independent Gaussian pairs of the spec's
/// window length.
pub fn monte_carlo_size(spec: &WindowSpec, replications: usize, seed: u64) -> Result<McResult> {
    Ok(monte_carlo_study(0.0, spec, spec.window_length, replications, seed)?.h_xxy)
}

/// `H_xxy` rejection rate under the cross-bilinear alternative.
pub fn monte_carlo_power(
    theta: f64,
    spec: &WindowSpec,
    length: usize,
    replications: usize,
    seed: u64,
) -> Result<McResult> {
    Ok(monte_carlo_study(theta, spec, length, replications, seed)?.h_xxy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossbicorr::{cross_bicorrelation, cross_correlation};
    use crate::series::{mean, sample_variance, standardize};
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn gaussian_determinism_and_moments() {
        assert_eq!(gen_gaussian_iid(50, 1), gen_gaussian_iid(50, 1));
        assert_ne!(gen_gaussian_iid(50, 1), gen_gaussian_iid(50, 2));
        let x = gen_gaussian_iid(100_000, 17);
        let v = sample_variance(&x);
        assert!((0.97..=1.03).contains(&v), "{v}");
        assert!(mean(&x).abs() < 0.02);
    }

    #[test]
    fn ar_examples() {
        assert_eq!(gen_ar(&[], 40, 5, 100).unwrap(), gen_gaussian_iid(40, 5));
        assert_eq!(gen_ar(&[1.1], 10, 1, 100), Err(Error::NonStationary));
        let x = gen_ar(&[0.5], 5000, 3, 100).unwrap();
        let z = standardize(&x).unwrap();
        let acf = z[1..].iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() / (z.len() - 1) as f64;
        assert!((acf - 0.5).abs() < 0.05, "{acf}");
        assert_eq!(x.len(), 5000);
    }

    // Oracle: spectral radius < 1 iff powers of the companion matrix vanish.
    fn companion_power_norm(phi: &[f64], power: u32) -> f64 {
        let p = phi.len();
        let mut m = vec![vec![0.0; p]; p];
        m[0].copy_from_slice(phi);
        for i in 1..p {
            m[i][i - 1] = 1.0;
        }
        let mut acc = m.clone();
        for _ in 1..power {
            let mut next = vec![vec![0.0; p]; p];
            for i in 0..p {
                for j in 0..p {
                    next[i][j] = (0..p).map(|k| acc[i][k] * m[k][j]).sum();
                }
            }
            acc = next;
        }
        acc.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
    }

    #[test]
    fn stationarity_agrees_with_companion_powers() {
        let cases: [&[f64]; 8] = [
            &[0.5, -0.3],
            &[0.5, 0.5],
            &[1.2, -0.5],
            &[0.2, 0.2, 0.2],
            &[0.9, 0.2],
            &[-0.5, -0.9],
            &[0.3, 0.3, 0.3, 0.3],
            &[1.5, -0.9, 0.2],
        ];
        for phi in cases {
            let norm = companion_power_norm(phi, 400);
            let stationary = check_stationary(phi).is_ok();
            if norm < 1e-3 {
                assert!(stationary, "{phi:?}");
            } else if norm > 1.0 {
                assert!(!stationary, "{phi:?}");
            }
        }
        // Unit root on the boundary.
        assert!(check_stationary(&[0.5, 0.5]).is_err());
    }

    #[test]
    fn bilinear_null_and_alternative() {
        let x = gen_gaussian_iid(5000, 100);
        let y0 = gen_cross_bilinear(&x, 0.0, 101).unwrap();
        assert_eq!(y0, gen_gaussian_iid(5000, 101));

        let y = gen_cross_bilinear(&x, 0.8, 101).unwrap();
        let zx = standardize(&x).unwrap();
        let zy = standardize(&y).unwrap();
        let bound = 3.0 / (5000f64).sqrt();
        assert!(cross_bicorrelation(&zx, &zy, 1, 2).unwrap().abs() > bound);
        for r in 1..=3 {
            assert!(cross_correlation(&zx, &zy, r).unwrap().abs() < bound);
        }
        assert!(gen_cross_bilinear(&x[..2], 0.8, 1).is_err());
    }

    #[test]
    fn process_spec_validates() {
        assert!(ProcessSpec::new(ProcessKind::Ar { coefficients: vec![1.0] }, 10, 1).is_err());
        assert!(ProcessSpec::new(ProcessKind::GaussianIid, 0, 1).is_err());
        let spec = ProcessSpec::new(ProcessKind::CrossBilinear { theta: 0.8 }, 100, 7).unwrap();
        match spec.generate().unwrap() {
            Realization::Pair { x, y } => assert_eq!((x.len(), y.len()), (100, 100)),
            other => panic!("{other:?}"),
        }
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
        let ar = ProcessSpec::new(ProcessKind::Ar { coefficients: vec![0.3] }, 20, 2)
            .unwrap()
            .with_burn_in(0);
        assert_eq!(ar.generate().unwrap(), Realization::Single(gen_ar(&[0.3], 20, 2, 0).unwrap()));
    }

    #[test]
    fn alpha_extremes() {
        let always = WindowSpec { alpha: 1.0, ..WindowSpec::default() };
        assert_eq!(monte_carlo_size(&always, 2000, 42).unwrap().rejection_rate, 1.0);
        let never = WindowSpec { alpha: 1e-12, ..WindowSpec::default() };
        assert_eq!(monte_carlo_size(&never, 2000, 42).unwrap().rejections, 0);
    }

    #[test]
    fn study_rejects_few_replications() {
        assert!(monte_carlo_size(&WindowSpec::default(), 99, 1).is_err());
    }

    #[test]
    fn power_grows_with_theta() {
        let spec = WindowSpec::default();
        let rates: Vec<f64> = [0.0, 0.4, 0.8]
            .iter()
            .map(|&t| monte_carlo_power(t, &spec, 100, 400, 77).unwrap().rejection_rate)
            .collect();
        assert!(rates[0] <= rates[1] && rates[1] <= rates[2], "{rates:?}");
    }

    #[test]
    fn tally_is_order_independent() {
        let spec = WindowSpec::default();
        let mut outcomes: Vec<(bool, bool)> = (0..200)
            .map(|i| replication_outcome(0.4, &spec, 25, 9, i).unwrap())
            .collect();
        let a = tally(0.4, &spec, 25, 9, outcomes.clone());
        outcomes.reverse();
        assert_eq!(a, tally(0.4, &spec, 25, 9, outcomes));
        assert_eq!(a, monte_carlo_study(0.4, &spec, 25, 200, 9).unwrap());
    }

    proptest! {
        #[test]
        fn replication_seeds_distinct(master in any::<u64>(), i in any::<u64>(), j in any::<u64>()) {
            prop_assume!(i != j);
            prop_assert_ne!(replication_seed(master, i), replication_seed(master, j));
        }
    }
}
