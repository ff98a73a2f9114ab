//! Signed adjacency matrices, spectra, exact polynomials and equitable quotients.

pub mod jacobi;
pub mod poly;
pub mod quotient;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, SignedGraph};

pub use jacobi::Eigen;
pub use poly::{g_poly, largest_real_root, poly_eval_int, Polynomial};
pub use quotient::{
    cancelling_shifts, quotient, residual_spectrum, spectrum_via_quotient, QuotientMatrix, QuotientSpectrum,
    VertexPartition,
};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MULTISET_TOL: f64 = 1e-8;

/// Dense real symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvariantViolation(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::InvariantViolation(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvariantViolation("matrix has a non-finite entry".into()));
        }
        Ok(SymmetricMatrix { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn eigen(&self, want_vectors: bool) -> Result<Eigen> {
        jacobi::jacobi_eigen(self.data.clone(), self.n, want_vectors)
    }
}

/// Signed adjacency matrix: `a_ij = sign(ij)` on edges, `0` elsewhere.
pub fn adjacency(g: &SignedGraph) -> SymmetricMatrix {
    let n = g.n();
    let mut data = vec![0.0; n * n];
    for u in 0..n {
        for v in bits(g.positive_neighbors(u)) {
            data[u * n + v] = 1.0;
        }
        for v in bits(g.negative_neighbors(u)) {
            data[u * n + v] = -1.0;
        }
    }
    SymmetricMatrix { n, data }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Non-increasing.
    pub eigenvalues: Vec<f64>,
    pub lambda1: f64,
    pub rho: f64,
    pub tol: f64,
}

impl SpectrumReport {
    pub fn from_values(mut eigenvalues: Vec<f64>, tol: f64) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let lambda1 = eigenvalues.first().copied().unwrap_or(0.0);
        let last = eigenvalues.last().copied().unwrap_or(0.0);
        SpectrumReport {
            lambda1,
            rho: lambda1.abs().max(last.abs()),
            eigenvalues,
            tol,
        }
    }

    /// Largest pairwise deviation against another sorted multiset of the same size.
    pub fn max_deviation(&self, other: &[f64]) -> Option<f64> {
        multiset_deviation(&self.eigenvalues, other)
    }
}

pub fn spectrum(m: &SymmetricMatrix, tol: f64) -> Result<SpectrumReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::PreconditionViolated(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let e = m.eigen(false)?;
    Ok(SpectrumReport::from_values(e.values, tol))
}

/// Largest adjacency eigenvalue of `g`.
pub fn lambda1(g: &SignedGraph) -> Result<f64> {
    let e = adjacency(g).eigen(false)?;
    Ok(e.values[0])
}

/// Largest pairwise deviation between two multisets after sorting both.
/// `None` if the sizes differ.
pub fn multiset_deviation(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Some(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

pub fn multisets_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    multiset_deviation(a, b).is_some_and(|d| d <= tol)
}

/// Removes one element within `tol` of each entry of `remove` from `from`,
/// choosing the closest unused candidate. `None` if some entry has no match.
pub fn multiset_difference(from: &[f64], remove: &[f64], tol: f64) -> Option<Vec<f64>> {
    let mut used = vec![false; from.len()];
    for &x in remove {
        let best = from
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, &y)| (i, (x - y).abs()))
            .filter(|(_, d)| *d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        used[best.0] = true;
    }
    Some(from.iter().zip(used).filter(|(_, u)| !u).map(|(&y, _)| y).collect())
}
