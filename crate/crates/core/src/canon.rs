//! Canonical keys for signed graphs up to relabelling and switching.
//!
//! The key is the minimum, over all labellings reachable by an
//! individualisation-refinement search, of the pair
//! `(underlying adjacency bits, normalised signature bits)`.
//!
//! Refinement starts from the switching-invariant colouring
//! `(degree, negative triangles through the vertex)`. For a fixed labelling
//! the signature is normalised by switching so that the first spanning forest
//! in edge order is all positive; this is the lexicographically smallest
//! signature in the switching class, so it is a class invariant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, bits, full_mask, Limits, Sign, SignedGraph};

/// Width of the packed encodings.
const MAX_CANONICAL: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalKey {
    bytes: Vec<u8>,
}

impl CanonicalKey {
    fn new(n: usize, underlying: u128, signature: u128) -> Self {
        let mut bytes = Vec::with_capacity(33);
        bytes.push(n as u8);
        bytes.extend_from_slice(&underlying.to_be_bytes());
        bytes.extend_from_slice(&signature.to_be_bytes());
        CanonicalKey { bytes }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Pairs `(i, j)`, `i < j`, in colex order: all pairs inside the first `k`
/// positions precede any pair touching position `k`.
fn colex_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
}

struct Search<'a> {
    g: &'a SignedGraph,
    n: usize,
    pairs: Vec<(usize, usize)>,
    best: Option<Leaf>,
}

#[derive(Clone)]
struct Leaf {
    underlying: u128,
    signature: u128,
    order: Vec<usize>,
}

type Cells = Vec<Vec<usize>>;

impl<'a> Search<'a> {
    fn initial_cells(&self) -> Cells {
        let g = self.g;
        let n = self.n;
        let mut negtri = vec![0u32; n];
        for a in 0..n {
            for b in bits(g.neighbors(a) & !full_mask(a + 1)) {
                for c in bits(g.neighbors(a) & g.neighbors(b) & !full_mask(b + 1)) {
                    let s = g.sign(a, b).unwrap() * g.sign(a, c).unwrap() * g.sign(b, c).unwrap();
                    if s == Sign::Negative {
                        negtri[a] += 1;
                        negtri[b] += 1;
                        negtri[c] += 1;
                    }
                }
            }
        }
        let mut verts: Vec<usize> = (0..n).collect();
        let color = |v: usize| (g.degree(v), negtri[v]);
        verts.sort_by_key(|&v| (color(v), v));
        let mut cells: Cells = Vec::new();
        for v in verts {
            match cells.last_mut() {
                Some(cell) if color(cell[0]) == color(v) => cell.push(v),
                _ => cells.push(vec![v]),
            }
        }
        cells
    }

    /// Equitable refinement: split cells by neighbour counts into every cell
    /// until stable. Depends only on cell order, never on vertex names.
    fn refine(&self, mut cells: Cells) -> Cells {
        loop {
            let masks: Vec<u64> = cells.iter().map(|c| c.iter().fold(0u64, |m, &v| m | bit(v))).collect();
            let mut next: Cells = Vec::with_capacity(cells.len());
            let mut split = false;
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let nb = self.g.neighbors(v);
                        (masks.iter().map(|m| (nb & m).count_ones()).collect(), v)
                    })
                    .collect();
                keyed.sort();
                let start = next.len();
                let mut prev_key: Option<Vec<u32>> = None;
                for (key, v) in keyed {
                    if prev_key.as_ref() == Some(&key) {
                        next.last_mut().unwrap().push(v);
                    } else {
                        next.push(vec![v]);
                        prev_key = Some(key);
                    }
                }
                if next.len() - start > 1 {
                    split = true;
                }
            }
            cells = next;
            if !split {
                return cells;
            }
        }
    }

    fn underlying_bits(&self, order: &[usize], upto: usize) -> u128 {
        let mut acc = 0u128;
        for &(i, j) in &self.pairs[..upto] {
            acc = (acc << 1) | self.g.adjacent(order[i], order[j]) as u128;
        }
        acc
    }

    /// Signature bits after switching the first spanning forest (in colex
    /// edge order) to positive. Bit set = negative edge.
    fn signature_bits(&self, order: &[usize]) -> u128 {
        let n = self.n;
        let mut parent: Vec<usize> = (0..n).collect();
        let mut parity = vec![false; n];
        fn find(parent: &mut [usize], parity: &mut [bool], v: usize) -> (usize, bool) {
            let mut root = v;
            let mut acc = false;
            while parent[root] != root {
                acc ^= parity[root];
                root = parent[root];
            }
            // path compression with parity bookkeeping
            let mut cur = v;
            let mut cur_par = acc;
            while parent[cur] != cur {
                let next = parent[cur];
                let next_par = cur_par ^ parity[cur];
                parent[cur] = root;
                parity[cur] = cur_par;
                cur = next;
                cur_par = next_par;
            }
            (root, acc)
        }
        let mut acc = 0u128;
        for &(i, j) in &self.pairs {
            let (a, b) = (order[i], order[j]);
            let Some(s) = self.g.sign(a, b) else { continue };
            let negative = s == Sign::Negative;
            let (ra, pa) = find(&mut parent, &mut parity, i);
            let (rb, pb) = find(&mut parent, &mut parity, j);
            let bit_val = if ra != rb {
                // Choose the relative switching that makes this edge positive.
                parent[rb] = ra;
                parity[rb] = pa ^ pb ^ negative;
                false
            } else {
                negative ^ pa ^ pb
            };
            acc = (acc << 1) | bit_val as u128;
        }
        acc
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let total = self.pairs.len();
        let underlying = self.underlying_bits(&order, total);
        let better = match &self.best {
            None => true,
            Some(b) if underlying < b.underlying => true,
            Some(b) if underlying > b.underlying => false,
            Some(b) => self.signature_bits(&order) < b.signature,
        };
        if better {
            let signature = self.signature_bits(&order);
            self.best = Some(Leaf {
                underlying,
                signature,
                order,
            });
        }
    }

    fn prune(&self, cells: &Cells) -> bool {
        let Some(best) = &self.best else { return false };
        let k = cells.iter().take_while(|c| c.len() == 1).count();
        if k < 2 {
            return false;
        }
        let prefix_len = k * (k - 1) / 2;
        let order: Vec<usize> = cells[..k].iter().map(|c| c[0]).collect();
        let prefix = self.underlying_bits(&order, prefix_len);
        let total = self.pairs.len();
        let best_prefix = best.underlying >> (total - prefix_len);
        prefix > best_prefix
    }

    /// Whether transposing twins `v` and `w` maps the switching class to
    /// itself. Such a swap fixes every cell, so the two branches have images
    /// of each other as leaves and only one needs exploring.
    fn swap_is_automorphism(&self, v: usize, w: usize) -> bool {
        let g = self.g;
        let (bv, bw) = (bit(v), bit(w));
        if g.neighbors(v) & !bw != g.neighbors(w) & !bv {
            return false;
        }
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.swap(v, w);
        let Ok(swapped) = g.permute(&perm) else { return false };
        // Switching equivalent iff the edgewise sign product is balanced.
        let neg: Vec<u64> = (0..self.n)
            .map(|a| g.negative_neighbors(a) ^ swapped.negative_neighbors(a))
            .collect();
        let pos: Vec<u64> = (0..self.n).map(|a| g.neighbors(a) & !neg[a]).collect();
        SignedGraph::from_masks(self.n, pos, neg).is_balanced()
    }

    fn run(&mut self, cells: Cells) {
        if self.prune(&cells) {
            return;
        }
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order = cells.into_iter().map(|c| c[0]).collect();
            self.leaf(order);
            return;
        };
        let cell = &cells[target];
        for (idx, &v) in cell.iter().enumerate() {
            if cell[..idx].iter().any(|&w| self.swap_is_automorphism(v, w)) {
                continue;
            }
            let mut next: Cells = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..target]);
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            next.extend_from_slice(&cells[target + 1..]);
            let refined = self.refine(next);
            self.run(refined);
        }
    }
}

fn check_limit(n: usize, limits: &Limits) -> Result<()> {
    let limit = limits.canonical.min(MAX_CANONICAL);
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "canonical labelling",
            n,
            limit,
        });
    }
    Ok(())
}

/// Canonical key together with the canonical representative graph.
pub fn canonical_form(g: &SignedGraph, limits: &Limits) -> Result<(CanonicalKey, SignedGraph)> {
    let n = g.n();
    check_limit(n, limits)?;
    let mut search = Search {
        g,
        n,
        pairs: colex_pairs(n),
        best: None,
    };
    let cells = search.initial_cells();
    let cells = search.refine(cells);
    search.run(cells);
    let best = search.best.expect("search visits at least one leaf");

    let mut edges = Vec::new();
    let m = g.edge_count();
    let mut idx = 0usize;
    for &(i, j) in &search.pairs {
        if g.adjacent(best.order[i], best.order[j]) {
            let negative = (best.signature >> (m - 1 - idx)) & 1 == 1;
            edges.push((i, j, if negative { Sign::Negative } else { Sign::Positive }));
            idx += 1;
        }
    }
    let form = SignedGraph::new(n, edges)?;
    Ok((CanonicalKey::new(n, best.underlying, best.signature), form))
}

pub fn canonical_key(g: &SignedGraph, limits: &Limits) -> Result<CanonicalKey> {
    canonical_form(g, limits).map(|(k, _)| k)
}

/// Equal up to relabelling composed with a switching.
pub fn is_switching_isomorphic(a: &SignedGraph, b: &SignedGraph, limits: &Limits) -> Result<bool> {
    check_limit(a.n(), limits)?;
    check_limit(b.n(), limits)?;
    if a.n() != b.n() || a.edge_count() != b.edge_count() || a.is_balanced() != b.is_balanced() {
        return Ok(false);
    }
    Ok(canonical_key(a, limits)? == canonical_key(b, limits)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Sign::Negative as N, Sign::Positive as P, SwitchingSet};

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn triangles_by_balance() {
        let unb = SignedGraph::new(3, [(0, 1, N), (0, 2, P), (1, 2, P)]).unwrap();
        let bal = SignedGraph::new(3, [(0, 1, P), (0, 2, P), (1, 2, P)]).unwrap();
        let other = SignedGraph::new(3, [(0, 1, N), (0, 2, N), (1, 2, N)]).unwrap();
        assert!(!is_switching_isomorphic(&unb, &bal, &limits()).unwrap());
        assert!(is_switching_isomorphic(&unb, &other, &limits()).unwrap());
    }

    #[test]
    fn canonical_form_is_equivalent_to_input() {
        let g = SignedGraph::new(5, [(0, 1, N), (1, 2, P), (2, 3, N), (3, 4, P), (0, 4, P), (1, 3, P)]).unwrap();
        let (k, form) = canonical_form(&g, &limits()).unwrap();
        assert_eq!(canonical_key(&form, &limits()).unwrap(), k);
        assert_eq!(form.edge_count(), g.edge_count());
        let s = SwitchingSet::from_vertices(5, &[2, 4]).unwrap();
        let h = g.switch(&s).permute(&[4, 2, 0, 1, 3]).unwrap();
        assert_eq!(canonical_key(&h, &limits()).unwrap(), k);
    }

    #[test]
    fn limit_enforced() {
        let g = SignedGraph::empty(11).unwrap();
        assert!(matches!(canonical_key(&g, &limits()), Err(Error::LimitExceeded { .. })));
        let wide = Limits {
            canonical: 11,
            switching: 20,
        };
        assert!(canonical_key(&g, &wide).is_ok());
    }

    #[test]
    fn key_bytes_layout() {
        let g = SignedGraph::new(3, [(0, 1, N), (0, 2, P), (1, 2, P)]).unwrap();
        let k = canonical_key(&g, &limits()).unwrap();
        assert_eq!(k.as_bytes().len(), 33);
        assert_eq!(k.as_bytes()[0], 3);
        assert_eq!(k.to_hex().len(), 66);
    }
}
