//! Detection of unbalanced complete bipartite, complete, and cycle subgraphs.
//!
//! A complete bipartite sign pattern between `A` and `B` is balanced iff it
//! factors as `σ(a, b) = x_a y_b`. Fixing `a₀ ∈ A`, each `b` has a pattern
//! `a ↦ σ(a, b) σ(a₀, b)`; the pattern is balanced iff all of `B` share one
//! pattern, and two different patterns give a negative 4-cycle directly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, bits, full_mask, Sign, SignedGraph};

/// Extension steps allowed for general-length cycle search.
pub const DEFAULT_CYCLE_WORK_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ForbiddenFamily {
    UnbalancedCompleteBipartite { s: usize, t: usize },
    UnbalancedComplete { r: usize },
    UnbalancedCycle { k: usize },
}

impl ForbiddenFamily {
    pub const K33: ForbiddenFamily = ForbiddenFamily::UnbalancedCompleteBipartite { s: 3, t: 3 };

    pub fn kst(s: usize, t: usize) -> Result<Self> {
        if s < 2 || t < 2 {
            return Err(Error::PreconditionViolated(format!(
                "K_{{s,t}} needs s, t >= 2, got {s}, {t}"
            )));
        }
        Ok(ForbiddenFamily::UnbalancedCompleteBipartite { s, t })
    }

    pub fn kr(r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::PreconditionViolated(format!("K_r needs r >= 3, got {r}")));
        }
        Ok(ForbiddenFamily::UnbalancedComplete { r })
    }

    pub fn ck(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::PreconditionViolated(format!("C_k needs k >= 3, got {k}")));
        }
        Ok(ForbiddenFamily::UnbalancedCycle { k })
    }

    /// Fewest vertices a member can have.
    pub fn order(&self) -> usize {
        match *self {
            ForbiddenFamily::UnbalancedCompleteBipartite { s, t } => s + t,
            ForbiddenFamily::UnbalancedComplete { r } => r,
            ForbiddenFamily::UnbalancedCycle { k } => k,
        }
    }
}

impl fmt::Display for ForbiddenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ForbiddenFamily::UnbalancedCompleteBipartite { s: 3, t: 3 } => f.write_str("k33"),
            ForbiddenFamily::UnbalancedCompleteBipartite { s, t } => write!(f, "kst:{s},{t}"),
            ForbiddenFamily::UnbalancedComplete { r } => write!(f, "kr:{r}"),
            ForbiddenFamily::UnbalancedCycle { k } => write!(f, "ck:{k}"),
        }
    }
}

impl FromStr for ForbiddenFamily {
    type Err = Error;

    /// Accepts `k33`, `kst:S,T`, `kr:R`, `ck:K`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::PreconditionViolated(format!(
                "unknown forbidden family {s:?} (use k33, kst:S,T, kr:R or ck:K)"
            ))
        };
        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
        let lower = s.trim().to_ascii_lowercase();
        if lower == "k33" {
            return Ok(ForbiddenFamily::K33);
        }
        let (head, tail) = lower.split_once(':').ok_or_else(bad)?;
        match head {
            "kst" => {
                let (a, b) = tail.split_once(',').ok_or_else(bad)?;
                ForbiddenFamily::kst(num(a)?, num(b)?)
            }
            "kr" => ForbiddenFamily::kr(num(tail)?),
            "ck" => ForbiddenFamily::ck(num(tail)?),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for ForbiddenFamily {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ForbiddenFamily> for String {
    fn from(f: ForbiddenFamily) -> String {
        f.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// `A` then `B` for bipartite patterns; the clique or the cycle otherwise.
    pub vertices: Vec<usize>,
    /// A cycle with an odd number of negative edges inside `vertices`.
    pub certificate_cycle: Vec<usize>,
}

impl Witness {
    /// Re-checks the witness against `g` independently of how it was found.
    pub fn validate(&self, g: &SignedGraph, fam: &ForbiddenFamily) -> bool {
        let vs = &self.vertices;
        let n = g.n();
        if vs.iter().any(|&v| v >= n) {
            return false;
        }
        let mut seen = 0u64;
        for &v in vs {
            if seen & bit(v) != 0 {
                return false;
            }
            seen |= bit(v);
        }
        if self.certificate_cycle.iter().any(|&v| seen & bit(v) == 0) {
            return false;
        }
        if g.cycle_sign(&self.certificate_cycle) != Some(Sign::Negative) {
            return false;
        }
        match *fam {
            ForbiddenFamily::UnbalancedCompleteBipartite { s, t } => {
                if vs.len() != s + t {
                    return false;
                }
                let (a, b) = vs.split_at(s.min(t));
                a.iter().all(|&x| b.iter().all(|&y| g.adjacent(x, y)))
            }
            ForbiddenFamily::UnbalancedComplete { r } => {
                vs.len() == r
                    && vs
                        .iter()
                        .enumerate()
                        .all(|(i, &x)| vs[i + 1..].iter().all(|&y| g.adjacent(x, y)))
            }
            ForbiddenFamily::UnbalancedCycle { k } => vs.len() == k && self.certificate_cycle == *vs,
        }
    }
}

fn sign_bit(g: &SignedGraph, a: usize, b: usize) -> bool {
    g.negative_neighbors(a) & bit(b) != 0
}

/// First unbalanced `K_{s,t}` in lexicographic order of the smaller side.
pub fn find_unbalanced_kst(g: &SignedGraph, s: usize, t: usize) -> Option<Witness> {
    let (s, t) = (s.min(t), s.max(t));
    if s == 0 || s + t > g.n() {
        return None;
    }
    let mut chosen = Vec::with_capacity(s);
    kst_rec(g, s, t, 0, full_mask(g.n()), &mut chosen)
}

fn kst_rec(g: &SignedGraph, s: usize, t: usize, start: usize, cn: u64, chosen: &mut Vec<usize>) -> Option<Witness> {
    if chosen.len() == s {
        return kst_check(g, t, cn, chosen);
    }
    let need = s - chosen.len();
    for a in start..g.n() {
        if g.n() - a < need {
            break;
        }
        let next = cn & g.neighbors(a);
        if (next.count_ones() as usize) < t {
            continue;
        }
        chosen.push(a);
        let found = kst_rec(g, s, t, a + 1, next, chosen);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn kst_check(g: &SignedGraph, t: usize, cn: u64, a: &[usize]) -> Option<Witness> {
    let a0 = a[0];
    let pattern = |b: usize| -> u64 {
        let base = sign_bit(g, a0, b);
        a.iter()
            .enumerate()
            .fold(0u64, |acc, (i, &ai)| acc | (((sign_bit(g, ai, b) != base) as u64) << i))
    };
    let mut it = bits(cn);
    let b0 = it.next()?;
    let p0 = pattern(b0);
    let (b1, p1) = bits(cn).map(|b| (b, pattern(b))).find(|&(_, p)| p != p0)?;
    let i = (p0 ^ p1).trailing_zeros() as usize;
    let mut vertices = a.to_vec();
    vertices.push(b0);
    vertices.push(b1);
    vertices.extend(bits(cn).filter(|&b| b != b0 && b != b1).take(t - 2));
    Some(Witness {
        vertices,
        certificate_cycle: vec![a0, b0, a[i], b1],
    })
}

/// First `r`-clique (lexicographic) whose signature is unbalanced.
pub fn find_unbalanced_kr(g: &SignedGraph, r: usize) -> Option<Witness> {
    if r < 3 || r > g.n() {
        return None;
    }
    let mut chosen = Vec::with_capacity(r);
    kr_rec(g, r, 0, full_mask(g.n()), &mut chosen)
}

fn kr_rec(g: &SignedGraph, r: usize, start: usize, cand: u64, chosen: &mut Vec<usize>) -> Option<Witness> {
    if chosen.len() == r {
        let c0 = chosen[0];
        for (i, &x) in chosen.iter().enumerate().skip(1) {
            for &y in &chosen[i + 1..] {
                if sign_bit(g, c0, x) ^ sign_bit(g, c0, y) ^ sign_bit(g, x, y) {
                    return Some(Witness {
                        vertices: chosen.clone(),
                        certificate_cycle: vec![c0, x, y],
                    });
                }
            }
        }
        return None;
    }
    let need = r - chosen.len();
    for v in bits(cand & !full_mask(start)) {
        let next = cand & g.neighbors(v) & !full_mask(v + 1);
        if (next.count_ones() as usize) + 1 < need {
            continue;
        }
        chosen.push(v);
        let found = kr_rec(g, r, v + 1, next, chosen);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

pub fn find_unbalanced_ck(g: &SignedGraph, k: usize) -> Result<Option<Witness>> {
    find_unbalanced_ck_with_cap(g, k, DEFAULT_CYCLE_WORK_CAP)
}

/// First negative `k`-cycle, searched from its smallest vertex. Each path
/// extension counts against `cap`.
pub fn find_unbalanced_ck_with_cap(g: &SignedGraph, k: usize, cap: u64) -> Result<Option<Witness>> {
    let n = g.n();
    if k < 3 || k > n {
        return Ok(None);
    }
    if k == 3 {
        for a in 0..n {
            for b in bits(g.neighbors(a) & !full_mask(a + 1)) {
                for c in bits(g.neighbors(a) & g.neighbors(b) & !full_mask(b + 1)) {
                    if sign_bit(g, a, b) ^ sign_bit(g, a, c) ^ sign_bit(g, b, c) {
                        let cycle = vec![a, b, c];
                        return Ok(Some(Witness {
                            vertices: cycle.clone(),
                            certificate_cycle: cycle,
                        }));
                    }
                }
            }
        }
        return Ok(None);
    }
    let mut work = 0u64;
    let mut path = Vec::with_capacity(k);
    for s in 0..n {
        path.push(s);
        let found = ck_rec(g, k, s, bit(s), false, &mut path, &mut work, cap)?;
        path.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn ck_rec(
    g: &SignedGraph,
    k: usize,
    start: usize,
    used: u64,
    parity: bool,
    path: &mut Vec<usize>,
    work: &mut u64,
    cap: u64,
) -> Result<Option<Witness>> {
    let last = *path.last().unwrap();
    if path.len() == k {
        if g.adjacent(last, start) && parity ^ sign_bit(g, last, start) {
            // Each cycle is seen in two directions; either is a valid witness.
            return Ok(Some(Witness {
                vertices: path.clone(),
                certificate_cycle: path.clone(),
            }));
        }
        return Ok(None);
    }
    let allowed = g.neighbors(last) & !used & !full_mask(start + 1);
    for v in bits(allowed) {
        *work += 1;
        if *work > cap {
            return Err(Error::WorkCapExceeded { cap });
        }
        path.push(v);
        let found = ck_rec(
            g,
            k,
            start,
            used | bit(v),
            parity ^ sign_bit(g, last, v),
            path,
            work,
            cap,
        )?;
        path.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

pub fn find_witness(g: &SignedGraph, fam: &ForbiddenFamily) -> Result<Option<Witness>> {
    Ok(match *fam {
        ForbiddenFamily::UnbalancedCompleteBipartite { s, t } => find_unbalanced_kst(g, s, t),
        ForbiddenFamily::UnbalancedComplete { r } => find_unbalanced_kr(g, r),
        ForbiddenFamily::UnbalancedCycle { k } => find_unbalanced_ck(g, k)?,
    })
}

pub fn is_free(g: &SignedGraph, fam: &ForbiddenFamily) -> Result<bool> {
    find_witness(g, fam).map(|w| w.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, FamilyKind, FamilySpec};
    use crate::graph::{Sign::Negative as N, Sign::Positive as P, SwitchingSet};

    fn k33(neg: &[(usize, usize)]) -> SignedGraph {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                let s = if neg.contains(&(a, b)) { N } else { P };
                edges.push((a, b, s));
            }
        }
        SignedGraph::new(6, edges).unwrap()
    }

    #[test]
    fn parse_and_display() {
        for s in ["k33", "kst:2,4", "kr:4", "ck:5"] {
            assert_eq!(s.parse::<ForbiddenFamily>().unwrap().to_string(), s);
        }
        assert_eq!("kst:3,3".parse::<ForbiddenFamily>().unwrap(), ForbiddenFamily::K33);
        assert!("kst:1,3".parse::<ForbiddenFamily>().is_err());
        assert!("kr:2".parse::<ForbiddenFamily>().is_err());
        assert!("ck:x".parse::<ForbiddenFamily>().is_err());
        let json = serde_json::to_string(&ForbiddenFamily::K33).unwrap();
        assert_eq!(json, "\"k33\"");
        assert_eq!(
            serde_json::from_str::<ForbiddenFamily>(&json).unwrap(),
            ForbiddenFamily::K33
        );
    }

    #[test]
    fn k33_detection() {
        assert!(find_unbalanced_kst(&k33(&[]), 3, 3).is_none());
        let g = k33(&[(1, 4)]);
        let w = find_unbalanced_kst(&g, 3, 3).unwrap();
        assert!(w.validate(&g, &ForbiddenFamily::K33));
        assert_eq!(w.certificate_cycle.len(), 4);
        // Balanced pattern x_a y_b with negatives.
        assert!(find_unbalanced_kst(&k33(&[(0, 3), (0, 4), (0, 5)]), 3, 3).is_none());
    }

    #[test]
    fn k6_with_one_negative_edge() {
        let g = SignedGraph::complete(6).unwrap().with_edge(0, 1, N).unwrap();
        let w = find_unbalanced_kst(&g, 3, 3).unwrap();
        assert!(w.validate(&g, &ForbiddenFamily::K33));
        assert!(!is_free(&g, &ForbiddenFamily::K33).unwrap());
    }

    #[test]
    fn families_are_k33_free() {
        for n in 7..=10 {
            let g = build(&FamilySpec::gamma(n, 3)).unwrap();
            assert!(find_unbalanced_kst(&g, 3, 3).is_none(), "gamma n={n}");
        }
        assert!(is_free(
            &build(&FamilySpec::new(FamilyKind::U, 8)).unwrap(),
            &ForbiddenFamily::K33
        )
        .unwrap());
    }

    #[test]
    fn clique_detection() {
        let k4 = SignedGraph::complete(4).unwrap();
        assert!(find_unbalanced_kr(&k4, 4).is_none());
        let g = k4.with_edge(1, 2, N).unwrap();
        let w = find_unbalanced_kr(&g, 4).unwrap();
        assert!(w.validate(&g, &ForbiddenFamily::UnbalancedComplete { r: 4 }));
        let gamma = build(&FamilySpec::gamma(7, 3)).unwrap();
        assert!(find_unbalanced_kr(&gamma, 4).is_none());
        assert!(find_unbalanced_kr(&gamma, 3).is_some());
    }

    #[test]
    fn cycle_detection() {
        let gamma = build(&FamilySpec::gamma(7, 3)).unwrap();
        let w = find_unbalanced_ck(&gamma, 3).unwrap().unwrap();
        let mut vs = w.vertices.clone();
        vs.sort();
        assert_eq!(vs, vec![0, 1, 6]);
        let c5 = SignedGraph::new(5, [(0, 1, N), (1, 2, P), (2, 3, P), (3, 4, P), (0, 4, P)]).unwrap();
        let w = find_unbalanced_ck(&c5, 5).unwrap().unwrap();
        assert!(w.validate(&c5, &ForbiddenFamily::UnbalancedCycle { k: 5 }));
        assert!(find_unbalanced_ck(&c5, 4).unwrap().is_none());
        let switched = c5.switch(&SwitchingSet::from_vertices(5, &[1, 3]).unwrap());
        assert!(find_unbalanced_ck(&switched, 5).unwrap().is_some());
        assert!(find_unbalanced_ck(&SignedGraph::complete(7).unwrap(), 5)
            .unwrap()
            .is_none());
    }

    #[test]
    fn work_cap() {
        let g = SignedGraph::complete(12).unwrap();
        assert!(matches!(
            find_unbalanced_ck_with_cap(&g, 9, 1000),
            Err(Error::WorkCapExceeded { cap: 1000 })
        ));
    }
}
