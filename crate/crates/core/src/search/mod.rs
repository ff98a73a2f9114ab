//! Searching for unbalanced, forbidden-family-free signed graphs of maximum
//! index, with certificates that can be re-checked independently.
//!
//! Four modes:
//!
//! * `Exhaustive`: every labelled underlying graph on `n <= 6` vertices and
//!   every switching class on it, represented by the signature that is
//!   positive on the first spanning forest.
//! * `GuidedOneNegativeEdge`: every labelled underlying graph on 7 or 8
//!   vertices with every single-negative-edge signature. This is a restriction
//!   of the search space, not a full verification, and the certificate says so.
//! * `Anneal` / `HillClimb`: restarts of a local search over perturbation
//!   moves and random edits.
//!
//! Results are merged with a total order on `(λ₁ rounded to 1e-12, key)`, so
//! they do not depend on the number of worker threads.

pub mod anneal;
pub mod bounds;
pub mod enumerate;
pub mod perron;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_key, is_switching_isomorphic};
use crate::error::{Error, Result};
use crate::families::{build, FamilySpec};
use crate::forbidden::{is_free, ForbiddenFamily};
use crate::graph::{Limits, SignedGraph};
use crate::io::write_graph;
use crate::spectra::lambda1;

pub use bounds::{bound_c3free, bound_k4free_check};
pub use perron::{normalize_to_nonneg, perturb_moves, Candidate, MoveRule, PerronVector};

pub const HISTOGRAM_BUCKET: f64 = 0.01;

pub const GUIDED_RESTRICTION: &str = "proof-derived restriction: only signatures with exactly one negative edge \
are enumerated (an extremal graph may be assumed to have its negative edges in one unbalanced triangle, and then \
exactly one); this is a heuristic reduction of the search space, not an unconditional verification";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    GuidedOneNegativeEdge,
    Anneal,
    HillClimb,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::GuidedOneNegativeEdge => "guided",
            SearchMode::Anneal => "anneal",
            SearchMode::HillClimb => "hillclimb",
        })
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "guided" | "guidedonenegativeedge" => Ok(SearchMode::GuidedOneNegativeEdge),
            "anneal" => Ok(SearchMode::Anneal),
            "hillclimb" => Ok(SearchMode::HillClimb),
            _ => Err(Error::PreconditionViolated(format!(
                "unknown mode {s:?} (use exhaustive, guided, anneal or hillclimb)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub family: ForbiddenFamily,
    pub mode: SearchMode,
    pub seed: u64,
    pub restarts: usize,
    pub max_steps: usize,
    pub tol: f64,
    pub workers: usize,
    pub t0: f64,
    pub cooling: f64,
    /// Skip underlying graphs whose degree and edge-count bounds fall below
    /// `n - 2` (guided mode only).
    pub prune: bool,
    pub limits: Limits,
}

impl SearchConfig {
    pub fn new(n: usize, mode: SearchMode) -> Self {
        SearchConfig {
            n,
            family: ForbiddenFamily::K33,
            mode,
            seed: 42,
            restarts: 64,
            max_steps: 20_000,
            tol: 1e-9,
            workers: 1,
            t0: 1.0,
            cooling: 0.995,
            prune: true,
            limits: Limits::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let limit = |what, limit| Err(Error::LimitExceeded { what, n, limit });
        match self.mode {
            SearchMode::Exhaustive if n > 6 => return limit("exhaustive search", 6),
            SearchMode::GuidedOneNegativeEdge if n > 8 => return limit("guided search", 8),
            SearchMode::GuidedOneNegativeEdge if n < 7 => {
                return Err(Error::PreconditionViolated(format!(
                    "guided search needs 7 <= n <= 8, got {n}"
                )))
            }
            SearchMode::Anneal | SearchMode::HillClimb if n > crate::graph::MAX_VERTICES => {
                return limit("local search", crate::graph::MAX_VERTICES)
            }
            _ => {}
        }
        if n < 3 {
            return Err(Error::PreconditionViolated(format!(
                "unbalanced graphs need n >= 3, got {n}"
            )));
        }
        if self.workers == 0 || self.restarts == 0 {
            return Err(Error::PreconditionViolated(
                "workers and restarts must be positive".into(),
            ));
        }
        if self.tol.is_nan()
            || self.tol <= 0.0
            || self.t0.is_nan()
            || self.t0 <= 0.0
            || !(self.cooling > 0.0 && self.cooling <= 1.0)
        {
            return Err(Error::PreconditionViolated(
                "tol, t0 must be positive and cooling in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    BoundHolds,
    CounterexampleFound,
}

/// Serialises a graph as its `.sg` text.
pub mod sg_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::graph::SignedGraph;
    use crate::io::{read_graph, write_graph};

    pub fn serialize<S: Serializer>(g: &SignedGraph, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&write_graph(g))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<SignedGraph, D::Error> {
        let text = String::deserialize(d)?;
        read_graph(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Maximizer {
    #[serde(with = "sg_text")]
    pub graph: SignedGraph,
    pub lambda1: f64,
    pub canonical_key: Option<String>,
    /// Labelled graphs (and for exhaustive mode, switching classes on them)
    /// that reduce to this representative.
    pub multiplicity: u64,
    pub matches_gamma_n3: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    pub underlying_graphs: u64,
    pub pruned_graphs: u64,
    pub signatures: u64,
    pub balanced_rejected: u64,
    pub forbidden_rejected: u64,
    pub evaluated: u64,
    /// Set when the pruned run fell short of the target and was redone in full.
    pub reran_without_pruning: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveStats {
    pub proposals: u64,
    pub accepted: u64,
    pub rejected_balanced: u64,
    pub rejected_forbidden: u64,
    pub rejected_score: u64,
    pub by_rule: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub enumeration: Option<EnumerationStats>,
    pub moves: Option<MoveStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub start: String,
    pub best_lambda1: f64,
    pub accepted: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBucket {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub version: String,
    pub n: usize,
    pub family: ForbiddenFamily,
    pub mode: SearchMode,
    pub seed: u64,
    pub config: SearchConfig,
    pub restriction: Option<String>,
    #[serde(with = "sg_text")]
    pub best_graph: SignedGraph,
    pub best_lambda1: f64,
    pub bound: f64,
    pub verdict: Verdict,
    /// `None` when `n` exceeds the canonical labelling limit.
    pub matches_gamma_n3: Option<bool>,
    /// Whether every maximizer is switching isomorphic to `Γ_{n,3}`.
    pub all_maximizers_match_gamma_n3: Option<bool>,
    pub maximizers: Vec<Maximizer>,
    pub stats: SearchStats,
    pub histogram: Option<Vec<HistogramBucket>>,
    pub trace: Option<Vec<RestartSummary>>,
}

impl SearchCertificate {
    pub fn histogram_csv(&self) -> Option<String> {
        self.histogram.as_ref().map(|h| {
            let mut out = String::from("lo,hi,count\n");
            for b in h {
                out.push_str(&format!("{:.2},{:.2},{}\n", b.lo, b.hi, b.count));
            }
            out
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    /// Re-derives the headline claims from `best_graph` alone.
    pub fn revalidate(&self) -> Result<()> {
        let g = &self.best_graph;
        if g.is_balanced() {
            return Err(Error::InvariantViolation("best graph is balanced".into()));
        }
        if !is_free(g, &self.family)? {
            return Err(Error::InvariantViolation(format!(
                "best graph contains a member of {}",
                self.family
            )));
        }
        let l = lambda1(g)?;
        if (l - self.best_lambda1).abs() > self.config.tol.max(1e-9) {
            return Err(Error::InvariantViolation(format!(
                "recomputed λ₁ {l} differs from recorded {}",
                self.best_lambda1
            )));
        }
        Ok(())
    }
}

/// Tie-break key: the canonical key when available, otherwise the `.sg` text.
pub(crate) fn order_key(g: &SignedGraph, limits: &Limits) -> Vec<u8> {
    match canonical_key(g, limits) {
        Ok(k) => k.as_bytes().to_vec(),
        Err(_) => write_graph(g).into_bytes(),
    }
}

pub(crate) fn rounded(l: f64) -> i64 {
    (l / 1e-12).round() as i64
}

pub(crate) fn gamma_n3(n: usize) -> Option<SignedGraph> {
    (n >= 3).then(|| build(&FamilySpec::gamma(n, 3)).ok()).flatten()
}

pub(crate) fn matches_gamma(g: &SignedGraph, limits: &Limits) -> Option<bool> {
    let gamma = gamma_n3(g.n())?;
    is_switching_isomorphic(g, &gamma, limits).ok()
}

pub(crate) fn bucket_of(l: f64) -> i64 {
    (l / HISTOGRAM_BUCKET + 1e-7).floor() as i64
}

pub(crate) fn histogram_from(counts: &BTreeMap<i64, u64>) -> Vec<HistogramBucket> {
    counts
        .iter()
        .map(|(&b, &count)| HistogramBucket {
            lo: b as f64 * HISTOGRAM_BUCKET,
            hi: (b + 1) as f64 * HISTOGRAM_BUCKET,
            count,
        })
        .collect()
}

pub(crate) fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::PreconditionViolated(format!("cannot start worker pool: {e}")))
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchCertificate> {
    cfg.validate()?;
    match cfg.mode {
        SearchMode::Exhaustive | SearchMode::GuidedOneNegativeEdge => enumerate::run(cfg),
        SearchMode::Anneal | SearchMode::HillClimb => anneal::run(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_parsing() {
        assert_eq!(
            "guided".parse::<SearchMode>().unwrap(),
            SearchMode::GuidedOneNegativeEdge
        );
        assert_eq!("hill-climb".parse::<SearchMode>().unwrap(), SearchMode::HillClimb);
        assert!("random".parse::<SearchMode>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(7, SearchMode::Exhaustive).validate().is_err());
        assert!(SearchConfig::new(6, SearchMode::GuidedOneNegativeEdge)
            .validate()
            .is_err());
        assert!(SearchConfig::new(9, SearchMode::GuidedOneNegativeEdge)
            .validate()
            .is_err());
        assert!(SearchConfig::new(7, SearchMode::GuidedOneNegativeEdge)
            .validate()
            .is_ok());
        assert!(SearchConfig::new(2, SearchMode::Anneal).validate().is_err());
        let mut c = SearchConfig::new(9, SearchMode::Anneal);
        c.workers = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn buckets() {
        assert_eq!(bucket_of(5.0), 500);
        assert_eq!(bucket_of(4.999_999_999_999), 500);
        assert_eq!(bucket_of(3.372), 337);
        let mut m = BTreeMap::new();
        m.insert(337, 2);
        let h = histogram_from(&m);
        assert_eq!(h[0].count, 2);
        assert!((h[0].lo - 3.37).abs() < 1e-12);
    }
}
