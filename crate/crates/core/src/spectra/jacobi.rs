//! Cyclic Jacobi eigensolver for small dense symmetric matrices.
//!
//! Each sweep visits every pair `(p, q)`, `p < q`, in row order and applies
//! the plane rotation that annihilates `a[p][q]`. The loop stops once the
//! off-diagonal Frobenius norm drops below `1e-13 * ‖A‖_F`. Everything is
//! sequential and branch-for-branch identical on every platform.

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
pub const RELATIVE_OFF_TOL: f64 = 1e-13;

/// Eigenvalues sorted non-increasing, with matching unit eigenvectors
/// (`vectors[i]` belongs to `values[i]`) when requested.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
}

fn off_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += 2.0 * a[p * n + q] * a[p * n + q];
        }
    }
    s.sqrt()
}

/// Diagonalises the row-major symmetric `n x n` matrix held in `a` (consumed
/// as scratch).
pub fn jacobi_eigen(mut a: Vec<f64>, n: usize, want_vectors: bool) -> Result<Eigen> {
    debug_assert_eq!(a.len(), n * n);
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut v = if want_vectors {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        Some(v)
    } else {
        None
    };

    let threshold = RELATIVE_OFF_TOL * norm;
    let mut sweeps = 0;
    loop {
        let off = off_norm(&a, n);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort on the diagonal keeps ties in index order.
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = v.map(|v| {
        order
            .iter()
            .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
            .collect()
    });
    Ok(Eigen { values, vectors })
}
