//! Closed-form spectral radius bounds used as cross-oracles.

use crate::error::{Error, Result};
use crate::forbidden::find_unbalanced_kr;
use crate::graph::SignedGraph;
use crate::spectra::{adjacency, spectrum, DEFAULT_TOL};

/// `(sqrt(n^2 - 8) + n - 4) / 2`, the spectral radius ceiling for unbalanced
/// graphs without a negative triangle.
pub fn bound_c3free(n: usize) -> f64 {
    let n = n as f64;
    ((n * n - 8.0).sqrt() + n - 4.0) / 2.0
}

/// Whether `ρ(g) <= n - 2 + tol` for an unbalanced graph with no unbalanced
/// `K_4`, on at least 7 vertices.
pub fn bound_k4free_check(g: &SignedGraph, tol: f64) -> Result<bool> {
    let n = g.n();
    if n < 7 {
        return Err(Error::PreconditionViolated(format!("need n >= 7, got {n}")));
    }
    if g.is_balanced() {
        return Err(Error::PreconditionViolated("graph is balanced".into()));
    }
    if find_unbalanced_kr(g, 4).is_some() {
        return Err(Error::PreconditionViolated("graph contains an unbalanced K4".into()));
    }
    let s = spectrum(&adjacency(g), DEFAULT_TOL)?;
    Ok(s.rho <= (n - 2) as f64 + tol)
}
