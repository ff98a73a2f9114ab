//! Equitable partitions, quotient matrices, and spectrum reconstruction from
//! a quotient plus a block-shifted residual matrix.
//!
//! For an equitable partition the eigenvalues of the quotient `Q` are
//! eigenvalues of `M`, and the remaining ones belong to eigenvectors that sum
//! to zero on every block. Adding a constant to every entry of a block leaves
//! those eigenvectors (and their eigenvalues) alone, so
//! `spec(M) = spec(Q) ⊎ (spec(M') ∖ spec(Q'))` for any block-shifted `M'`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{multiset_deviation, multiset_difference, spectrum, SpectrumReport, SymmetricMatrix};
use crate::error::{Error, Result};

/// Ordered disjoint nonempty blocks covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvariantViolation(format!("block {i} is empty")));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::InvariantViolation(format!("vertex {v} outside 0..{n}")));
                }
                if seen[v] {
                    return Err(Error::InvariantViolation(format!("vertex {v} appears twice")));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvariantViolation(format!("vertex {v} is not covered")));
        }
        Ok(VertexPartition { n, blocks })
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition {
            n,
            blocks: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuotientMatrix {
    /// Average row sums of each block.
    pub q: Vec<Vec<BigRational>>,
    pub equitable: bool,
    pub sizes: Vec<usize>,
    /// First non-constant block, if any.
    pub witness: Option<(usize, usize)>,
}

impl QuotientMatrix {
    pub fn k(&self) -> usize {
        self.q.len()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.q
            .iter()
            .map(|row| row.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }

    /// Eigenvalues of `Q`, via the similar symmetric matrix with entries
    /// `q_ij * |V_i| / sqrt(|V_i| |V_j|)`.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let k = self.k();
        let mut data = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                let total = &self.q[i][j] * BigRational::from_integer(BigInt::from(self.sizes[i]));
                let denom = ((self.sizes[i] * self.sizes[j]) as f64).sqrt();
                data[i * k + j] = total.to_f64().unwrap_or(f64::NAN) / denom;
            }
        }
        let s = SymmetricMatrix::new(k, data)?;
        Ok(s.eigen(false)?.values)
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

fn check_partition(m: &SymmetricMatrix, p: &VertexPartition) -> Result<()> {
    if m.n() != p.n() {
        return Err(Error::PreconditionViolated(format!(
            "partition covers {} vertices, matrix has {}",
            p.n(),
            m.n()
        )));
    }
    Ok(())
}

/// Average row sums of every block, with an exact equitability check.
pub fn quotient(m: &SymmetricMatrix, p: &VertexPartition) -> Result<QuotientMatrix> {
    check_partition(m, p)?;
    let k = p.k();
    let mut q = vec![vec![BigRational::zero(); k]; k];
    let mut witness = None;
    for (i, bi) in p.blocks().iter().enumerate() {
        for (j, bj) in p.blocks().iter().enumerate() {
            let sums: Vec<BigRational> = bi
                .iter()
                .map(|&r| bj.iter().fold(BigRational::zero(), |acc, &c| acc + exact(m.get(r, c))))
                .collect();
            if witness.is_none() && sums.iter().any(|s| s != &sums[0]) {
                witness = Some((i, j));
            }
            let total = sums.into_iter().fold(BigRational::zero(), |a, b| a + b);
            q[i][j] = total / BigRational::from_integer(BigInt::from(bi.len()));
        }
    }
    Ok(QuotientMatrix {
        q,
        equitable: witness.is_none(),
        sizes: p.sizes(),
        witness,
    })
}

/// Shifts that zero every block whose off-diagonal entries share one value
/// (so `J - I` becomes `-I` and `J` becomes `0`); other blocks get no shift.
pub fn cancelling_shifts(m: &SymmetricMatrix, p: &VertexPartition) -> Result<Vec<Vec<BigRational>>> {
    check_partition(m, p)?;
    let k = p.k();
    let mut shifts = vec![vec![BigRational::zero(); k]; k];
    for (i, bi) in p.blocks().iter().enumerate() {
        for (j, bj) in p.blocks().iter().enumerate() {
            let mut common: Option<f64> = None;
            let mut constant = true;
            for &r in bi {
                for &c in bj {
                    if r == c {
                        continue;
                    }
                    let x = m.get(r, c);
                    match common {
                        None => common = Some(x),
                        Some(y) if y != x => constant = false,
                        _ => {}
                    }
                }
            }
            if let (true, Some(c)) = (constant, common) {
                shifts[i][j] = -exact(c);
            }
        }
    }
    Ok(shifts)
}

fn shifted(m: &SymmetricMatrix, p: &VertexPartition, shifts: &[Vec<BigRational>]) -> Result<SymmetricMatrix> {
    let k = p.k();
    if shifts.len() != k || shifts.iter().any(|row| row.len() != k) {
        return Err(Error::PreconditionViolated(format!("shift matrix must be {k}x{k}")));
    }
    let asymmetric = (0..k)
        .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
        .find(|&(i, j)| shifts[i][j] != shifts[j][i]);
    if let Some((i, j)) = asymmetric {
        return Err(Error::PreconditionViolated(format!(
            "shift matrix not symmetric at ({i}, {j})"
        )));
    }
    let n = m.n();
    let mut data = m.data().to_vec();
    for (i, bi) in p.blocks().iter().enumerate() {
        for (j, bj) in p.blocks().iter().enumerate() {
            let s = shifts[i][j].to_f64().unwrap_or(f64::NAN);
            for &r in bi {
                for &c in bj {
                    data[r * n + c] += s;
                }
            }
        }
    }
    SymmetricMatrix::new(n, data)
}

fn require_equitable(q: &QuotientMatrix) -> Result<()> {
    match q.witness {
        Some((row_block, col_block)) => Err(Error::NotEquitable { row_block, col_block }),
        None => Ok(()),
    }
}

/// Spectrum of `m` with `shifts[i][j]` added to every entry of block `(i, j)`.
pub fn residual_spectrum(
    m: &SymmetricMatrix,
    p: &VertexPartition,
    shifts: &[Vec<BigRational>],
    tol: f64,
) -> Result<SpectrumReport> {
    require_equitable(&quotient(m, p)?)?;
    spectrum(&shifted(m, p, shifts)?, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientSpectrum {
    /// Eigenvalues of the quotient, non-increasing.
    pub quotient_eigenvalues: Vec<f64>,
    /// Full spectrum of the block-shifted matrix.
    pub shifted: SpectrumReport,
    /// `n - k` eigenvalues not carried by the quotient, non-increasing.
    pub residual: Vec<f64>,
    pub reconstructed: SpectrumReport,
    pub direct: SpectrumReport,
    pub max_deviation: f64,
}

/// Rebuilds `spec(m)` from the quotient and the shifted residual and checks
/// it against a direct eigensolve.
pub fn spectrum_via_quotient(
    m: &SymmetricMatrix,
    p: &VertexPartition,
    shifts: &[Vec<BigRational>],
    tol: f64,
) -> Result<QuotientSpectrum> {
    let q = quotient(m, p)?;
    require_equitable(&q)?;
    let mut q_vals = q.eigenvalues()?;
    q_vals.sort_by(|a, b| b.total_cmp(a));

    let shifted_m = shifted(m, p, shifts)?;
    let shifted_spec = spectrum(&shifted_m, tol)?;
    let q_shifted = quotient(&shifted_m, p)?;
    let q_shifted_vals = q_shifted.eigenvalues()?;

    let deviation = |d: f64| Error::MultisetMismatch { deviation: d };
    let mut residual = multiset_difference(&shifted_spec.eigenvalues, &q_shifted_vals, tol.max(1e-8))
        .ok_or_else(|| deviation(f64::INFINITY))?;
    residual.sort_by(|a, b| b.total_cmp(a));

    let mut all = q_vals.clone();
    all.extend_from_slice(&residual);
    let reconstructed = SpectrumReport::from_values(all, tol);
    let direct = spectrum(m, tol)?;
    let dev = multiset_deviation(&reconstructed.eigenvalues, &direct.eigenvalues).unwrap_or(f64::INFINITY);
    if dev.is_nan() || dev > tol {
        return Err(deviation(dev));
    }
    Ok(QuotientSpectrum {
        quotient_eigenvalues: q_vals,
        shifted: shifted_spec,
        residual,
        reconstructed,
        direct,
        max_deviation: dev,
    })
}
