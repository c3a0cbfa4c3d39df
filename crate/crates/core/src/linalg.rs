//! Small dense least squares through the normal equations.
//!
//! The Gram matrix is equilibrated to unit diagonal and factored with a
//! cyclic Jacobi eigendecomposition, which exposes its reciprocal condition
//! number directly.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Designs whose equilibrated Gram matrix has `lambda_min / lambda_max`
/// below this are rejected as singular.
pub(crate) const RCOND_THRESHOLD: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub(crate) struct OlsFit {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Row-major symmetric matrix of order `k`.
#[derive(Debug, Clone)]
struct SymMatrix {
    k: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    fn zeros(k: usize) -> Self {
        Self { k, data: vec![0.0; k * k] }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.k + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.k + j] = v;
    }
}

struct Eigen {
    values: Vec<f64>,
    // Column j is the eigenvector for values[j].
    vectors: SymMatrix,
}

fn jacobi_eigen(mut a: SymMatrix) -> Eigen {
    let k = a.k;
    let mut v = SymMatrix::zeros(k);
    for i in 0..k {
        v.set(i, i, 1.0);
    }
    let total: f64 = a.data.iter().map(|x| x * x).sum();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..k {
            for q in (p + 1)..k {
                off += a.get(p, q) * a.get(p, q);
            }
        }
        if off <= 1e-32 * total {
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for r in 0..k {
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    a.set(r, p, c * arp - s * arq);
                    a.set(r, q, s * arp + c * arq);
                }
                for r in 0..k {
                    let apr = a.get(p, r);
                    let aqr = a.get(q, r);
                    a.set(p, r, c * apr - s * aqr);
                    a.set(q, r, s * apr + c * aqr);
                }
                for r in 0..k {
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, c * vrp - s * vrq);
                    v.set(r, q, s * vrp + c * vrq);
                }
            }
        }
    }
    Eigen { values: (0..k).map(|i| a.get(i, i)).collect(), vectors: v }
}

/// Inverse of an equilibrated Gram matrix, or `SingularDesign`.
fn invert_equilibrated(gram: SymMatrix) -> Result<SymMatrix> {
    let k = gram.k;
    let eig = jacobi_eigen(gram);
    let max = eig.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.values.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || !(min / max >= RCOND_THRESHOLD) {
        return Err(Error::SingularDesign);
    }
    let mut inv = SymMatrix::zeros(k);
    for i in 0..k {
        for j in i..k {
            let mut acc = 0.0;
            for (m, lambda) in eig.values.iter().enumerate() {
                acc += eig.vectors.get(i, m) * eig.vectors.get(j, m) / lambda;
            }
            inv.set(i, j, acc);
            inv.set(j, i, acc);
        }
    }
    Ok(inv)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Ordinary least squares of `y` on the given regressor columns.
pub(crate) fn ols(columns: &[Vec<f64>], y: &[f64]) -> Result<OlsFit> {
    let k = columns.len();
    let n = y.len();
    debug_assert!(columns.iter().all(|c| c.len() == n));
    if n < k || k == 0 {
        return Err(Error::SingularDesign);
    }

    let mut gram = SymMatrix::zeros(k);
    for i in 0..k {
        for j in i..k {
            let g = dot(&columns[i], &columns[j]);
            gram.set(i, j, g);
            gram.set(j, i, g);
        }
    }
    let scale: Vec<f64> = (0..k)
        .map(|i| {
            let d = gram.get(i, i);
            if d > 0.0 {
                1.0 / math::sqrt(d)
            } else {
                0.0
            }
        })
        .collect();
    if scale.iter().any(|&s| s == 0.0 || !s.is_finite()) {
        return Err(Error::SingularDesign);
    }
    let mut eq = gram.clone();
    for i in 0..k {
        for j in 0..k {
            eq.set(i, j, gram.get(i, j) * scale[i] * scale[j]);
        }
    }
    let inv = invert_equilibrated(eq)?;

    // beta = D inv D X'y, followed by one step of iterative refinement.
    let xty: Vec<f64> = columns.iter().map(|c| dot(c, y)).collect();
    let apply = |rhs: &[f64]| -> Vec<f64> {
        (0..k)
            .map(|i| scale[i] * (0..k).map(|j| inv.get(i, j) * scale[j] * rhs[j]).sum::<f64>())
            .collect()
    };
    let mut beta = apply(&xty);
    let correction: Vec<f64> = (0..k)
        .map(|i| xty[i] - (0..k).map(|j| gram.get(i, j) * beta[j]).sum::<f64>())
        .collect();
    for (b, d) in beta.iter_mut().zip(apply(&correction)) {
        *b += d;
    }

    let residuals: Vec<f64> = (0..n)
        .map(|t| y[t] - columns.iter().zip(&beta).map(|(c, b)| c[t] * b).sum::<f64>())
        .collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let s2 = if n > k { ssr / (n - k) as f64 } else { f64::NAN };
    let std_errors = (0..k).map(|i| math::sqrt(s2 * inv.get(i, i)) * scale[i]).collect();
    Ok(OlsFit { coefficients: beta, std_errors, residuals })
}
