//! Chi-square upper tail through the regularized incomplete gamma function.

use crate::error::{Error, Result};
use crate::math;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 1000;
const TINY: f64 = 1e-300;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(a)` for `a > 0`.
pub fn ln_gamma(a: f64) -> f64 {
    if a < 0.5 {
        // Reflection keeps the series in its accurate range.
        let pi = core::f64::consts::PI;
        return math::ln(pi / libm::sin(pi * a)) - ln_gamma(1.0 - a);
    }
    let z = a - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * math::ln(2.0 * core::f64::consts::PI) + (z + 0.5) * math::ln(t) - t + math::ln(sum)
}

// Lower regularized gamma P(a, x) by its power series; converges fast for x < a + 1.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..MAX_ITER {
        term *= x / (a + n as f64);
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * math::exp(-x + a * math::ln(x) - ln_gamma(a))
}

// Upper regularized gamma Q(a, x) by modified Lentz continued fraction; x >= a + 1.
fn upper_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    math::exp(-x + a * math::ln(x) - ln_gamma(a)) * h
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        (1.0 - lower_series(a, x)).clamp(0.0, 1.0)
    } else {
        upper_fraction(a, x).clamp(0.0, 1.0)
    }
}

/// `P(χ²_df > x)`.
pub fn chi_square_sf(x: f64, df: usize) -> Result<f64> {
    if df < 1 {
        return Err(Error::InvalidParameter("degrees of freedom must be at least 1"));
    }
    if !(x >= 0.0) {
        return Err(Error::InvalidParameter("chi-square statistic must be non-negative"));
    }
    Ok(gamma_q(df as f64 / 2.0, x / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sf_at_zero_is_one() {
        for df in 1..40 {
            assert_eq!(chi_square_sf(0.0, df).unwrap(), 1.0);
        }
    }

    #[test]
    fn two_degrees_of_freedom_closed_form() {
        assert!((chi_square_sf(2.0, 2).unwrap() - (-1.0f64).exp()).abs() < 1e-12);
        let mut x = 0.0;
        while x <= 50.0 {
            let sf = chi_square_sf(x, 2).unwrap();
            assert!((sf - (-x / 2.0).exp()).abs() < 1e-10, "x={x}");
            x += 0.01;
        }
    }

    #[test]
    fn one_degree_of_freedom_matches_erfc() {
        // P(Z^2 > x) = erfc(sqrt(x / 2)).
        assert!((chi_square_sf(3.841_459, 1).unwrap() - 0.05).abs() < 1e-4);
        for i in 1..400 {
            let x = i as f64 * 0.1;
            let sf = chi_square_sf(x, 1).unwrap();
            let oracle = libm::erfc((x / 2.0).sqrt());
            assert!((sf - oracle).abs() < 1e-12, "x={x}: {sf} vs {oracle}");
        }
    }

    #[test]
    fn even_df_poisson_sum() {
        // Q(k, y) = e^{-y} sum_{j<k} y^j / j! for integer k.
        for k in 1..40usize {
            for &x in &[0.5, 3.0, 15.0, 30.0, 80.0, 150.0] {
                let y: f64 = x / 2.0;
                let mut term = 1.0;
                let mut sum = 0.0;
                for j in 0..k {
                    if j > 0 {
                        term *= y / j as f64;
                    }
                    sum += term;
                }
                let oracle = (-y).exp() * sum;
                let sf = chi_square_sf(x, 2 * k).unwrap();
                assert!((sf - oracle).abs() < 1e-12, "df={} x={x}: {sf} vs {oracle}", 2 * k);
            }
        }
    }

    #[test]
    fn ln_gamma_at_integers_and_halves() {
        let mut fact = 1.0f64;
        for n in 1..30 {
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-12 * fact.ln().max(1.0));
            fact *= n as f64;
        }
        assert!((ln_gamma(0.5) - core::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(chi_square_sf(-1.0, 3).is_err());
        assert!(chi_square_sf(1.0, 0).is_err());
        assert!(chi_square_sf(f64::NAN, 3).is_err());
    }

    proptest! {
        #[test]
        fn sf_is_probability_and_non_increasing(
            a in 0.0f64..200.0,
            gap in 1e-6f64..50.0,
            df in 1usize..80,
        ) {
            let lo = chi_square_sf(a, df).unwrap();
            let hi = chi_square_sf(a + gap, df).unwrap();
            prop_assert!((0.0..=1.0).contains(&lo));
            prop_assert!(hi <= lo);
        }
    }
}
