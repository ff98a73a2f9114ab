//! Signed simple graphs on at most 64 vertices, switching, and balance.
//!
//! Vertices are `0..n`. Each vertex carries two neighbour bitmasks, one for
//! positive and one for negative edges, so most set operations are a handful
//! of word operations.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard ceiling on the vertex count imposed by the `u64` neighbour masks.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

#[inline]
pub(crate) fn bit(v: usize) -> u64 {
    1u64 << v
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterate over the set bits of a mask in increasing order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// A simple graph with every edge labelled `+1` or `-1`.
///
/// Immutable once built; the `with_*` / `without_*` helpers return new graphs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedGraph {
    n: usize,
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl fmt::Debug for SignedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedGraph(n={}, [", self.n)?;
        for (i, (u, v, s)) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}{s}{v}")?;
        }
        f.write_str("])")
    }
}

impl SignedGraph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvariantViolation(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(SignedGraph {
            n,
            pos: vec![0; n],
            neg: vec![0; n],
        })
    }

    /// Builds a graph from an edge list, rejecting loops, parallel edges and
    /// out-of-range endpoints. Endpoint order within a pair does not matter.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let mut g = SignedGraph::empty(n)?;
        for (u, v, s) in edges {
            if u >= n || v >= n {
                return Err(Error::InvariantViolation(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvariantViolation(format!("self-loop at vertex {u}")));
            }
            if g.adjacent(u, v) {
                return Err(Error::InvariantViolation(format!("duplicate edge ({u}, {v})")));
            }
            g.set_edge(u, v, Some(s));
        }
        Ok(g)
    }

    /// Complete graph with every edge positive.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = SignedGraph::empty(n)?;
        for u in 0..n {
            g.pos[u] = full_mask(n) & !bit(u);
        }
        Ok(g)
    }

    pub(crate) fn from_masks(n: usize, pos: Vec<u64>, neg: Vec<u64>) -> Self {
        debug_assert_eq!(pos.len(), n);
        debug_assert_eq!(neg.len(), n);
        SignedGraph { n, pos, neg }
    }

    fn set_edge(&mut self, u: usize, v: usize, s: Option<Sign>) {
        self.pos[u] &= !bit(v);
        self.pos[v] &= !bit(u);
        self.neg[u] &= !bit(v);
        self.neg[v] &= !bit(u);
        match s {
            Some(Sign::Positive) => {
                self.pos[u] |= bit(v);
                self.pos[v] |= bit(u);
            }
            Some(Sign::Negative) => {
                self.neg[u] |= bit(v);
                self.neg[v] |= bit(u);
            }
            None => {}
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.pos
            .iter()
            .zip(&self.neg)
            .map(|(p, q)| (p | q).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn negative_edge_count(&self) -> usize {
        self.neg.iter().map(|q| q.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> u64 {
        self.pos[u] | self.neg[u]
    }

    #[inline]
    pub fn positive_neighbors(&self, u: usize) -> u64 {
        self.pos[u]
    }

    #[inline]
    pub fn negative_neighbors(&self, u: usize) -> u64 {
        self.neg[u]
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors(u) & bit(v) != 0
    }

    pub fn sign(&self, u: usize, v: usize) -> Option<Sign> {
        if self.pos[u] & bit(v) != 0 {
            Some(Sign::Positive)
        } else if self.neg[u] & bit(v) != 0 {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbors(u).count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    /// Edges as `(u, v, sign)` with `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Sign)> + '_ {
        (0..self.n).flat_map(move |u| {
            let above = !full_mask(u + 1);
            bits(self.neighbors(u) & above).map(move |v| {
                let s = if self.pos[u] & bit(v) != 0 {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                (u, v, s)
            })
        })
    }

    pub fn negative_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| bits(self.neg[u] & !full_mask(u + 1)).map(move |v| (u, v)))
            .collect()
    }

    /// Returns a copy with edge `{u, v}` present with sign `s` (added or re-signed).
    pub fn with_edge(&self, u: usize, v: usize, s: Sign) -> Result<Self> {
        self.check_pair(u, v)?;
        let mut g = self.clone();
        g.set_edge(u, v, Some(s));
        Ok(g)
    }

    /// Returns a copy with edge `{u, v}` removed (no-op when absent).
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Self> {
        self.check_pair(u, v)?;
        let mut g = self.clone();
        g.set_edge(u, v, None);
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n || u == v {
            return Err(Error::InvariantViolation(format!(
                "invalid vertex pair ({u}, {v}) for n = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Relabels vertices: vertex `v` of `self` becomes vertex `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvariantViolation("permutation length mismatch".into()));
        }
        let mut seen = 0u64;
        for &p in perm {
            if p >= self.n || seen & bit(p) != 0 {
                return Err(Error::InvariantViolation("not a permutation".into()));
            }
            seen |= bit(p);
        }
        let map = |mask: u64| bits(mask).fold(0u64, |acc, w| acc | bit(perm[w]));
        let mut pos = vec![0; self.n];
        let mut neg = vec![0; self.n];
        for v in 0..self.n {
            pos[perm[v]] = map(self.pos[v]);
            neg[perm[v]] = map(self.neg[v]);
        }
        Ok(SignedGraph::from_masks(self.n, pos, neg))
    }

    /// Subgraph induced on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        let mut g = SignedGraph::empty(vertices.len())?;
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if let Some(s) = self.sign(a, b) {
                    g.set_edge(i, j, Some(s));
                }
            }
        }
        Ok(g)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen & bit(start) != 0 {
                continue;
            }
            let mut comp = bit(start);
            let mut frontier = bit(start);
            while frontier != 0 {
                let mut next = 0u64;
                for v in bits(frontier) {
                    next |= self.neighbors(v);
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(bits(comp).collect());
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// True iff `{u, v}` is an edge whose removal disconnects its endpoints.
    pub fn is_bridge(&self, u: usize, v: usize) -> bool {
        if !self.adjacent(u, v) {
            return false;
        }
        let mut reach = bit(u);
        let mut frontier = bit(u);
        while frontier != 0 {
            let mut next = 0u64;
            for w in bits(frontier) {
                let mut nb = self.neighbors(w);
                if w == u {
                    nb &= !bit(v);
                }
                if w == v {
                    nb &= !bit(u);
                }
                next |= nb;
            }
            frontier = next & !reach;
            reach |= next;
        }
        reach & bit(v) == 0
    }

    /// A vertex labelling `x` with `sign(u,v) = x_u * x_v` on every edge, if one
    /// exists. Found by breadth-first propagation per component.
    pub fn balancing_labeling(&self) -> Option<Vec<i8>> {
        let mut label = vec![0i8; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if label[root] != 0 {
                continue;
            }
            label[root] = 1;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for w in bits(self.neighbors(u)) {
                    let s = if self.pos[u] & bit(w) != 0 { 1 } else { -1 };
                    let want = label[u] * s;
                    if label[w] == 0 {
                        label[w] = want;
                        queue.push_back(w);
                    } else if label[w] != want {
                        return None;
                    }
                }
            }
        }
        Some(label)
    }

    /// Every cycle has an even number of negative edges.
    pub fn is_balanced(&self) -> bool {
        self.balancing_labeling().is_some()
    }

    /// Flips the sign of every edge with exactly one endpoint in `set`.
    pub fn switch(&self, set: &SwitchingSet) -> SignedGraph {
        let inside = set.mask() & full_mask(self.n);
        let outside = full_mask(self.n) & !inside;
        let mut pos = self.pos.clone();
        let mut neg = self.neg.clone();
        for u in 0..self.n {
            let cross = if inside & bit(u) != 0 { outside } else { inside };
            let (p, q) = (self.pos[u], self.neg[u]);
            pos[u] = (p & !cross) | (q & cross);
            neg[u] = (q & !cross) | (p & cross);
        }
        SignedGraph::from_masks(self.n, pos, neg)
    }

    /// Same underlying graph with every edge positive.
    pub fn underlying(&self) -> SignedGraph {
        let pos = (0..self.n).map(|u| self.neighbors(u)).collect();
        SignedGraph::from_masks(self.n, pos, vec![0; self.n])
    }

    /// Sign product around a closed walk given as a vertex sequence
    /// (the closing edge back to `cycle[0]` is implied). `None` if an edge is missing.
    pub fn cycle_sign(&self, cycle: &[usize]) -> Option<Sign> {
        let mut acc = Sign::Positive;
        for i in 0..cycle.len() {
            let a = cycle[i];
            let b = cycle[(i + 1) % cycle.len()];
            if a >= self.n || b >= self.n {
                return None;
            }
            acc = acc * self.sign(a, b)?;
        }
        Some(acc)
    }
}

/// A vertex subset `U` defining the switching at `U`.
///
/// Stored with vertex 0 excluded: `U` and its complement define the same
/// switching, so the representative without vertex 0 is kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwitchingSet {
    n: usize,
    mask: u64,
}

impl SwitchingSet {
    pub fn new(n: usize, mask: u64) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES || mask & !full_mask(n) != 0 {
            return Err(Error::InvariantViolation(format!(
                "switching mask {mask:#x} is not a subset of 0..{n}"
            )));
        }
        let mask = if mask & 1 != 0 { full_mask(n) & !mask } else { mask };
        Ok(SwitchingSet { n, mask })
    }

    pub fn empty(n: usize) -> Self {
        SwitchingSet { n, mask: 0 }
    }

    pub fn from_vertices(n: usize, vertices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &v in vertices {
            if v >= n {
                return Err(Error::InvariantViolation(format!("vertex {v} outside 0..{n}")));
            }
            mask |= bit(v);
        }
        SwitchingSet::new(n, mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, v: usize) -> bool {
        self.mask & bit(v) != 0
    }

    pub fn members(&self) -> Vec<usize> {
        bits(self.mask).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }
}

/// Limits guarding the exponential routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest `n` accepted by canonical labelling.
    pub canonical: usize,
    /// Largest `n` accepted by exhaustive switching enumeration.
    pub switching: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            canonical: 10,
            switching: 20,
        }
    }
}

/// Among all switchings of `g`, one with the fewest negative edges; ties go to the
/// lexicographically smallest sorted negative-edge list, then the smallest mask.
/// Returns the switched graph and the switching that produces it from `g`.
pub fn negative_edge_minimize(g: &SignedGraph, limits: &Limits) -> Result<(SignedGraph, SwitchingSet)> {
    let n = g.n();
    if n > limits.switching {
        return Err(Error::LimitExceeded {
            what: "negative_edge_minimize",
            n,
            limit: limits.switching,
        });
    }
    let all = full_mask(n);
    let count_negative = |inside: u64| -> u32 {
        let outside = all & !inside;
        let mut twice = 0u32;
        for u in 0..n {
            let cross = if inside & bit(u) != 0 { outside } else { inside };
            twice += (g.neg[u] & !cross).count_ones() + (g.pos[u] & cross).count_ones();
        }
        twice / 2
    };

    let mut best_count = u32::MAX;
    let mut best: Option<(Vec<(usize, usize)>, u64)> = None;
    // Masks over vertices 1..n only.
    for half in 0..(1u64 << (n - 1)) {
        let mask = half << 1;
        let c = count_negative(mask);
        if c > best_count {
            continue;
        }
        let edges = g.switch(&SwitchingSet { n, mask }).negative_edges();
        let better = match &best {
            None => true,
            Some((e, _)) => c < best_count || edges < *e,
        };
        if better {
            best_count = c;
            best = Some((edges, mask));
        }
    }
    let (_, mask) = best.expect("at least the empty switching is examined");
    let set = SwitchingSet { n, mask };
    Ok((g.switch(&set), set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Negative as N, Positive as P};

    fn unbalanced_triangle() -> SignedGraph {
        SignedGraph::new(3, [(0, 1, N), (0, 2, P), (1, 2, P)]).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(SignedGraph::new(3, [(0, 0, P)]).is_err());
        assert!(SignedGraph::new(3, [(0, 1, P), (1, 0, N)]).is_err());
        assert!(SignedGraph::new(3, [(0, 3, P)]).is_err());
        assert!(SignedGraph::empty(0).is_err());
        assert!(SignedGraph::empty(65).is_err());
    }

    #[test]
    fn balance_examples() {
        assert!(SignedGraph::complete(5).unwrap().is_balanced());
        assert!(!unbalanced_triangle().is_balanced());
        let two_neg = SignedGraph::new(3, [(0, 1, N), (0, 2, N), (1, 2, P)]).unwrap();
        assert!(two_neg.is_balanced());
        // Disconnected: a balanced edge plus an unbalanced triangle elsewhere.
        let g = SignedGraph::new(6, [(0, 1, N), (3, 4, N), (3, 5, P), (4, 5, P)]).unwrap();
        assert!(!g.is_balanced());
    }

    #[test]
    fn trivial_switchings_are_identity() {
        let g = unbalanced_triangle();
        assert_eq!(g.switch(&SwitchingSet::empty(3)), g);
        let all = SwitchingSet::new(3, 0b111).unwrap();
        assert!(all.is_empty());
        assert_eq!(g.switch(&all), g);
    }

    #[test]
    fn switching_triangle_moves_negative_edge() {
        let g = unbalanced_triangle();
        // Switch at vertex 1, an endpoint of the negative edge 0-1.
        let h = g.switch(&SwitchingSet::from_vertices(3, &[1]).unwrap());
        assert_eq!(h.negative_edges(), vec![(1, 2)]);
        // All 8 subsets keep an odd number of negative edges on the triangle.
        for mask in 0..8u64 {
            let s = SwitchingSet::new(3, mask).unwrap();
            let k = g.switch(&s).negative_edge_count();
            assert_eq!(k % 2, 1, "mask {mask:#b}");
        }
    }

    #[test]
    fn switching_set_excludes_vertex_zero() {
        let s = SwitchingSet::new(4, 0b0011).unwrap();
        assert_eq!(s.mask(), 0b1100);
        assert!(SwitchingSet::new(4, 0b10000).is_err());
    }

    #[test]
    fn minimize_balanced_gives_all_positive() {
        let g = SignedGraph::new(4, [(0, 1, N), (1, 2, N), (2, 3, P), (0, 3, P), (0, 2, P)]).unwrap();
        assert!(g.is_balanced());
        let (h, s) = negative_edge_minimize(&g, &Limits::default()).unwrap();
        assert_eq!(h.negative_edge_count(), 0);
        assert_eq!(g.switch(&s), h);
    }

    #[test]
    fn minimize_triangle_any_signature() {
        for signs in [[N, P, P], [N, N, N], [P, N, P]] {
            let g = SignedGraph::new(3, [(0, 1, signs[0]), (0, 2, signs[1]), (1, 2, signs[2])]).unwrap();
            let (h, s) = negative_edge_minimize(&g, &Limits::default()).unwrap();
            assert_eq!(h.negative_edge_count(), 1);
            assert_eq!(h.negative_edges(), vec![(0, 1)]);
            assert_eq!(g.switch(&s), h);
        }
    }

    #[test]
    fn minimize_respects_limit() {
        let g = SignedGraph::empty(21).unwrap();
        assert!(matches!(
            negative_edge_minimize(&g, &Limits::default()),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn bridges_and_components() {
        let g = SignedGraph::new(5, [(0, 1, P), (1, 2, P), (0, 2, N), (2, 3, P)]).unwrap();
        assert!(g.is_bridge(2, 3));
        assert!(!g.is_bridge(0, 1));
        assert_eq!(g.components(), vec![vec![0, 1, 2, 3], vec![4]]);
        assert!(!g.is_connected());
    }

    #[test]
    fn cycle_sign_and_permute() {
        let g = unbalanced_triangle();
        assert_eq!(g.cycle_sign(&[0, 1, 2]), Some(N));
        assert_eq!(g.cycle_sign(&[0, 1, 3]), None);
        let h = g.permute(&[2, 0, 1]).unwrap();
        assert_eq!(h.sign(2, 0), Some(N));
        assert!(g.permute(&[0, 0, 1]).is_err());
    }
}
