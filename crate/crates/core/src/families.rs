//! Named extremal signed graphs and their equitable partitions.
//!
//! Vertex `v_i` of the usual drawings is index `i - 1`; in `Γ_{n,t}` the extra
//! vertex `u` is index `n - 1`. Every family has exactly one negative edge.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph};
use crate::spectra::poly::char_poly;
use crate::spectra::{adjacency, g_poly, largest_real_root, quotient, Polynomial, QuotientMatrix, VertexPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    GammaNT,
    U,
    Z1,
    Z2,
    W,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::GammaNT,
        FamilyKind::U,
        FamilyKind::Z1,
        FamilyKind::Z2,
        FamilyKind::W,
    ];
    pub const COMPETITORS: [FamilyKind; 4] = [FamilyKind::U, FamilyKind::Z1, FamilyKind::Z2, FamilyKind::W];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::GammaNT => "gamma",
            FamilyKind::U => "u",
            FamilyKind::Z1 => "z1",
            FamilyKind::Z2 => "z2",
            FamilyKind::W => "w",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma" | "gammant" => Ok(FamilyKind::GammaNT),
            "u" => Ok(FamilyKind::U),
            "z1" => Ok(FamilyKind::Z1),
            "z2" => Ok(FamilyKind::Z2),
            "w" => Ok(FamilyKind::W),
            _ => Err(Error::SpecInvalid(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
    /// Attachment parameter; `Some` iff `kind` is `GammaNT`.
    pub t: Option<usize>,
}

impl FamilySpec {
    pub fn gamma(n: usize, t: usize) -> Self {
        FamilySpec {
            kind: FamilyKind::GammaNT,
            n,
            t: Some(t),
        }
    }

    pub fn new(kind: FamilyKind, n: usize) -> Self {
        FamilySpec { kind, n, t: None }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n > crate::graph::MAX_VERTICES {
            return Err(Error::SpecInvalid(format!(
                "n = {n} exceeds {}",
                crate::graph::MAX_VERTICES
            )));
        }
        match (self.kind, self.t) {
            (FamilyKind::GammaNT, Some(t)) => {
                if t < 2 || t > n {
                    return Err(Error::SpecInvalid(format!(
                        "gamma needs 2 <= t <= n, got n = {n}, t = {t}"
                    )));
                }
            }
            (FamilyKind::GammaNT, None) => return Err(Error::SpecInvalid("gamma needs t".into())),
            (kind, Some(_)) => return Err(Error::SpecInvalid(format!("{kind} takes no t"))),
            (kind, None) => {
                if n < 7 {
                    return Err(Error::SpecInvalid(format!("{kind} needs n >= 7, got {n}")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.t {
            Some(t) => write!(f, "{}(n={}, t={})", self.kind, self.n, t),
            None => write!(f, "{}(n={})", self.kind, self.n),
        }
    }
}

/// Edge builder with 1-based vertex names.
struct Edges {
    list: Vec<(usize, usize, Sign)>,
}

impl Edges {
    fn new() -> Self {
        Edges { list: Vec::new() }
    }

    fn pos(&mut self, a: usize, b: usize) {
        self.list.push((a - 1, b - 1, Sign::Positive));
    }

    fn neg(&mut self, a: usize, b: usize) {
        self.list.push((a - 1, b - 1, Sign::Negative));
    }

    fn clique(&mut self, vs: &[usize]) {
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                self.pos(a, b);
            }
        }
    }

    fn join(&mut self, a: &[usize], b: &[usize]) {
        for &x in a {
            for &y in b {
                self.pos(x, y);
            }
        }
    }
}

pub fn build(spec: &FamilySpec) -> Result<SignedGraph> {
    spec.validate()?;
    let n = spec.n;
    let tail = |from: usize| (from..=n).collect::<Vec<_>>();
    let mut e = Edges::new();
    match spec.kind {
        FamilyKind::GammaNT => {
            let t = spec.t.unwrap_or_default();
            let u = n;
            e.clique(&(1..n).collect::<Vec<_>>());
            e.neg(1, u);
            for v in 2..t {
                e.pos(v, u);
            }
        }
        FamilyKind::U => {
            e.clique(&tail(3));
            e.neg(1, 2);
            e.join(&[1, 2], &[3, 4, 5]);
        }
        FamilyKind::Z1 => {
            e.neg(1, 2);
            e.join(&[1], &[3, 4, 5]);
            e.join(&[2], &[3, 4, 6]);
            e.pos(3, 4);
            e.join(&[3, 4], &[5, 6]);
            e.clique(&tail(7));
            e.join(&[3, 4, 5, 6], &tail(7));
        }
        FamilyKind::Z2 => {
            e.neg(1, 2);
            e.join(&[1], &[3, 4, 5]);
            e.join(&[2], &[3, 4, 6]);
            e.join(&[3], &[4, 5, 6]);
            e.pos(5, 6);
            e.clique(&tail(7));
            e.join(&[3, 4, 5, 6], &tail(7));
        }
        FamilyKind::W => {
            let mut k = vec![1, 3];
            k.extend(tail(5));
            e.clique(&k);
            e.neg(1, 2);
            e.join(&[2], &[3, 4]);
            e.join(&[4], &[1, 3, 5]);
        }
    }
    SignedGraph::new(n, e.list)
}

/// The equitable partition used to reduce each family to its quotient.
pub fn canonical_partition(spec: &FamilySpec) -> Result<VertexPartition> {
    spec.validate()?;
    let n = spec.n;
    let range = |a: usize, b: usize| (a - 1..b).collect::<Vec<_>>();
    let blocks: Vec<Vec<usize>> = match spec.kind {
        FamilyKind::GammaNT => {
            let t = spec.t.unwrap_or_default();
            vec![vec![n - 1], vec![0], range(2, t - 1), range(t, n - 1)]
        }
        FamilyKind::U => vec![vec![0], vec![1], range(3, 5), range(6, n)],
        FamilyKind::Z1 => vec![vec![0], vec![1], range(3, 4), vec![4], vec![5], range(7, n)],
        FamilyKind::Z2 => {
            let mut b: Vec<Vec<usize>> = (0..6).map(|v| vec![v]).collect();
            b.push(range(7, n));
            b
        }
        FamilyKind::W => {
            let mut b: Vec<Vec<usize>> = (0..5).map(|v| vec![v]).collect();
            b.push(range(6, n));
            b
        }
    };
    VertexPartition::new(n, blocks.into_iter().filter(|b| !b.is_empty()).collect())
}

pub fn family_quotient(spec: &FamilySpec) -> Result<QuotientMatrix> {
    quotient(&adjacency(&build(spec)?), &canonical_partition(spec)?)
}

/// Coefficient table for a polynomial in `λ` whose coefficients are
/// polynomials in `n`; both ascending.
pub type NPolyTable = &'static [&'static [i64]];

/// Stored factorisations of the quotient characteristic polynomials of
/// U, Z1, Z2, W: `(small factor, main factor)`.
pub fn quotient_poly_table(kind: FamilyKind) -> Option<(NPolyTable, NPolyTable)> {
    match kind {
        FamilyKind::GammaNT => None,
        FamilyKind::U => Some((&[&[-1], &[1]], &[&[-33, 5], &[1, -2], &[5, -1], &[1]])),
        FamilyKind::Z1 => Some((&[&[-1], &[-1], &[1]], &[&[-53, 7], &[-21], &[14, -4], &[7, -1], &[1]])),
        FamilyKind::Z2 => Some((
            &[&[-2], &[0], &[1]],
            &[&[18, -2], &[-36, 6], &[-21, 1], &[15, -4], &[7, -1], &[1]],
        )),
        FamilyKind::W => Some((
            &[&[1], &[1]],
            &[&[33, -5], &[-25, 7], &[-31, 5], &[1, -2], &[5, -1], &[1]],
        )),
    }
}

/// Evaluates every `n`-polynomial coefficient of a table at `n`.
pub fn eval_table(table: NPolyTable, n: i64) -> Polynomial {
    Polynomial::new(
        table
            .iter()
            .map(|c| c.iter().rev().fold(BigInt::from(0), |acc, &a| acc * n + a))
            .collect(),
    )
}

/// `(small factor, main factor)` of the stored factorisation at this `n`.
pub fn quotient_poly_factors(spec: &FamilySpec) -> Result<Option<(Polynomial, Polynomial)>> {
    spec.validate()?;
    Ok(quotient_poly_table(spec.kind).map(|(a, b)| (eval_table(a, spec.n as i64), eval_table(b, spec.n as i64))))
}

/// `det(λI - Q)` recomputed from the quotient matrix.
pub fn quotient_char_poly(spec: &FamilySpec) -> Result<Polynomial> {
    let q = family_quotient(spec)?;
    let coeffs = char_poly(&q.q);
    Polynomial::from_rationals(&coeffs)
        .ok_or_else(|| Error::InvariantViolation(format!("{spec}: quotient characteristic polynomial is not integral")))
}

/// Largest root of the family's exact characteristic data: `g_{n,t}` on
/// `[n-3, n-1]` for `Γ_{n,t}`, otherwise the quotient polynomial on `[0, n-2]`.
pub fn family_lambda1_exact(spec: &FamilySpec) -> Result<f64> {
    spec.validate()?;
    let n = spec.n as i64;
    match spec.kind {
        FamilyKind::GammaNT => {
            let t = spec.t.unwrap_or_default() as i64;
            largest_real_root(&g_poly(n, t), (n - 3) as f64, (n - 1) as f64, 1e-13)
        }
        _ => {
            let (a, b) = quotient_poly_factors(spec)?.expect("table exists for non-gamma families");
            largest_real_root(&(&a * &b), 0.0, (n - 2) as f64, 1e-13)
        }
    }
}

/// Indices of the diagonal blocks of [`canonical_partition`] that are cliques
/// by construction (so `J - I`, even when the block has one vertex).
fn clique_blocks(spec: &FamilySpec) -> Vec<usize> {
    match spec.kind {
        FamilyKind::GammaNT => {
            let t = spec.t.unwrap_or_default();
            // Block list drops empty middle/last blocks.
            let mut idx = Vec::new();
            let mut next = 2;
            if t > 2 {
                idx.push(next);
                next += 1;
            }
            if t < spec.n {
                idx.push(next);
            }
            idx
        }
        FamilyKind::U => vec![2, 3],
        FamilyKind::Z1 => vec![2, 5],
        FamilyKind::Z2 => vec![6],
        FamilyKind::W => vec![5],
    }
}

/// Constant block shifts that reduce the family matrix to its residual part:
/// `-J` on every all-ones or clique block, `+J` on the negative edge.
pub fn family_shifts(spec: &FamilySpec) -> Result<Vec<Vec<BigRational>>> {
    let m = adjacency(&build(spec)?);
    let mut shifts = crate::spectra::cancelling_shifts(&m, &canonical_partition(spec)?)?;
    for i in clique_blocks(spec) {
        shifts[i][i] = BigRational::from_integer(BigInt::from(-1));
    }
    Ok(shifts)
}
