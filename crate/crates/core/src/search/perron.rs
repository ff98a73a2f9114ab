//! Nonnegative λ₁-eigenvectors via switching, and the edge perturbations
//! that cannot decrease λ₁ relative to such a vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, bits, Sign, SignedGraph, SwitchingSet};
use crate::spectra::adjacency;

/// Unit λ₁-eigenvector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronVector {
    pub lambda1: f64,
    pub entries: Vec<f64>,
}

impl PerronVector {
    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest `|A x - λ₁ x|` component.
    pub fn residual(&self, g: &SignedGraph) -> f64 {
        let a = adjacency(g);
        let n = g.n();
        (0..n)
            .map(|i| {
                let ax: f64 = (0..n).map(|j| a.get(i, j) * self.entries[j]).sum();
                (ax - self.lambda1 * self.entries[i]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Switches `g` at the negative support of its λ₁-eigenvector. The switched
/// graph has the entrywise absolute value of that vector as a λ₁-eigenvector.
pub fn normalize_to_nonneg(g: &SignedGraph) -> Result<(SignedGraph, SwitchingSet, PerronVector)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let e = adjacency(g).eigen(true)?;
    let x = &e.vectors.expect("vectors requested")[0];
    let mask = x
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < 0.0)
        .fold(0u64, |m, (i, _)| m | bit(i));
    let set = SwitchingSet::new(g.n(), mask)?;
    let switched = g.switch(&set);
    Ok((
        switched,
        set,
        PerronVector {
            lambda1: e.values[0],
            entries: x.iter().map(|v| v.abs()).collect(),
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveRule {
    /// (a) add a positive edge `r s`.
    AddPositive,
    /// (b) delete a negative edge.
    RemoveNegative,
    /// (c) make a negative edge positive.
    ReverseNegative,
    /// (d) move positive edge `s w` to `r w`.
    Rotate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub graph: SignedGraph,
    pub rule: MoveRule,
    /// `[r, s]` for (a)–(c); `[s, w, r]` for (d).
    pub vertices: Vec<usize>,
}

/// All perturbations of `g` licensed by a nonnegative λ₁-eigenvector `x`.
/// Entries at most `tol` count as zero.
pub fn perturb_moves(g: &SignedGraph, x: &PerronVector, tol: f64) -> Vec<Candidate> {
    let n = g.n();
    let xs = &x.entries;
    let mut out = Vec::new();
    for r in 0..n {
        for s in (r + 1)..n {
            if !g.adjacent(r, s) && xs[r] * xs[s] >= 0.0 && (xs[r] > tol || xs[s] > tol) {
                if let Ok(h) = g.with_edge(r, s, Sign::Positive) {
                    out.push(Candidate {
                        graph: h,
                        rule: MoveRule::AddPositive,
                        vertices: vec![r, s],
                    });
                }
            }
        }
    }
    for (r, s) in g.negative_edges() {
        if let Ok(h) = g.without_edge(r, s) {
            out.push(Candidate {
                graph: h,
                rule: MoveRule::RemoveNegative,
                vertices: vec![r, s],
            });
        }
        if let Ok(h) = g.with_edge(r, s, Sign::Positive) {
            out.push(Candidate {
                graph: h,
                rule: MoveRule::ReverseNegative,
                vertices: vec![r, s],
            });
        }
    }
    for r in 0..n {
        let closed = g.neighbors(r) | bit(r);
        for s in 0..n {
            if s == r || xs[r] < xs[s] {
                continue;
            }
            for w in bits(g.positive_neighbors(s) & !closed) {
                if xs[w] <= tol {
                    continue;
                }
                let moved = g.without_edge(s, w).and_then(|h| h.with_edge(r, w, Sign::Positive));
                if let Ok(h) = moved {
                    out.push(Candidate {
                        graph: h,
                        rule: MoveRule::Rotate,
                        vertices: vec![s, w, r],
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, FamilySpec};
    use crate::graph::Sign::{Negative as N, Positive as P};
    use crate::spectra::lambda1;

    #[test]
    fn positive_graph_needs_no_switching() {
        let g = SignedGraph::new(4, [(0, 1, P), (1, 2, P), (2, 3, P)]).unwrap();
        let (h, set, x) = normalize_to_nonneg(&g).unwrap();
        assert_eq!(h, g);
        assert!(set.is_empty());
        assert!(x.min_entry() >= 0.0);
    }

    #[test]
    fn unbalanced_triangle() {
        let g = SignedGraph::new(3, [(0, 1, N), (0, 2, P), (1, 2, P)]).unwrap();
        let (h, set, x) = normalize_to_nonneg(&g).unwrap();
        assert!((x.lambda1 - 1.0).abs() < 1e-12);
        assert!(x.min_entry() >= -1e-12);
        assert!(x.residual(&h) < 1e-10);
        assert_eq!(g.switch(&set), h);
    }

    #[test]
    fn idempotent() {
        let g = build(&FamilySpec::gamma(7, 3)).unwrap();
        let (h, _, x) = normalize_to_nonneg(&g).unwrap();
        let (h2, _, x2) = normalize_to_nonneg(&h).unwrap();
        assert_eq!(h, h2);
        for (a, b) in x.entries.iter().zip(&x2.entries) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g = SignedGraph::new(4, [(0, 1, P), (2, 3, P)]).unwrap();
        assert!(matches!(normalize_to_nonneg(&g), Err(Error::Disconnected)));
    }

    #[test]
    fn removing_negative_edge_increases_lambda1() {
        let g = build(&FamilySpec::gamma(8, 4)).unwrap();
        let (h, _, x) = normalize_to_nonneg(&g).unwrap();
        assert!(x.min_entry() > 1e-6);
        let moves = perturb_moves(&h, &x, 1e-12);
        let remove: Vec<_> = moves.iter().filter(|c| c.rule == MoveRule::RemoveNegative).collect();
        assert!(!remove.is_empty());
        for c in remove {
            assert!(lambda1(&c.graph).unwrap() > x.lambda1);
        }
    }

    #[test]
    fn complete_positive_graph_has_no_moves() {
        let g = SignedGraph::complete(6).unwrap();
        let (h, _, x) = normalize_to_nonneg(&g).unwrap();
        assert!(perturb_moves(&h, &x, 1e-12).is_empty());
    }

    #[test]
    fn reversing_gamma_edge_balances() {
        let g = build(&FamilySpec::gamma(7, 3)).unwrap();
        let (h, _, x) = normalize_to_nonneg(&g).unwrap();
        let rev: Vec<_> = perturb_moves(&h, &x, 1e-12)
            .into_iter()
            .filter(|c| c.rule == MoveRule::ReverseNegative)
            .collect();
        assert!(!rev.is_empty());
        assert!(rev.iter().all(|c| c.graph.is_balanced()));
    }
}
