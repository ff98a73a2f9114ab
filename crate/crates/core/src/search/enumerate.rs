//! Exhaustive and one-negative-edge enumeration over labelled graphs.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{
    bucket_of, histogram_from, matches_gamma, order_key, rounded, worker_pool, EnumerationStats, Maximizer,
    SearchCertificate, SearchConfig, SearchMode, SearchStats, Verdict, GUIDED_RESTRICTION,
};
use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::forbidden::is_free;
use crate::graph::{bit, bits, SignedGraph};
use crate::spectra::lambda1;

const CHUNK: u64 = 1 << 12;

struct Context<'a> {
    cfg: &'a SearchConfig,
    pairs: Vec<(usize, usize)>,
    prune: bool,
    target: f64,
}

#[derive(Clone)]
struct Record {
    graph: SignedGraph,
    lambda1: f64,
    multiplicity: u64,
}

#[derive(Default)]
struct Partial {
    best: Option<f64>,
    maximizers: BTreeMap<Vec<u8>, Record>,
    histogram: BTreeMap<i64, u64>,
    stats: EnumerationStats,
}

impl Partial {
    fn retain_near_best(&mut self, tol: f64) {
        if let Some(best) = self.best {
            self.maximizers.retain(|_, r| r.lambda1 >= best - tol);
        }
    }

    fn merge(mut self, other: Partial, tol: f64) -> Partial {
        self.best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        for (k, r) in other.maximizers {
            self.maximizers
                .entry(k)
                .and_modify(|e| {
                    e.multiplicity += r.multiplicity;
                    e.lambda1 = e.lambda1.max(r.lambda1);
                })
                .or_insert(r);
        }
        for (b, c) in other.histogram {
            *self.histogram.entry(b).or_default() += c;
        }
        let s = &mut self.stats;
        let o = other.stats;
        s.underlying_graphs += o.underlying_graphs;
        s.pruned_graphs += o.pruned_graphs;
        s.signatures += o.signatures;
        s.balanced_rejected += o.balanced_rejected;
        s.forbidden_rejected += o.forbidden_rejected;
        s.evaluated += o.evaluated;
        self.retain_near_best(tol);
        self
    }

    fn offer(&mut self, g: SignedGraph, ctx: &Context) -> Result<()> {
        let cfg = ctx.cfg;
        if !is_free(&g, &cfg.family)? {
            self.stats.forbidden_rejected += 1;
            return Ok(());
        }
        let l = lambda1(&g)?;
        self.stats.evaluated += 1;
        *self.histogram.entry(bucket_of(l)).or_default() += 1;
        if self.best.is_some_and(|b| l < b - cfg.tol) {
            return Ok(());
        }
        if self.best.map_or(true, |b| l > b) {
            self.best = Some(l);
            self.retain_near_best(cfg.tol);
        }
        let (key, rep) = match canonical_form(&g, &cfg.limits) {
            Ok((k, form)) => (k.as_bytes().to_vec(), form),
            Err(Error::LimitExceeded { .. }) => (order_key(&g, &cfg.limits), g),
            Err(e) => return Err(e),
        };
        self.maximizers
            .entry(key)
            .and_modify(|r| {
                r.multiplicity += 1;
                r.lambda1 = r.lambda1.max(l);
            })
            .or_insert(Record {
                graph: rep,
                lambda1: l,
                multiplicity: 1,
            });
        Ok(())
    }
}

/// `(−1 + sqrt(1 + 8m)) / 2`, an upper bound on λ₁ of any graph with `m` edges.
pub fn edge_bound(m: usize) -> f64 {
    (-1.0 + (1.0 + 8.0 * m as f64).sqrt()) / 2.0
}

fn visit(mask: u64, ctx: &Context, part: &mut Partial) -> Result<()> {
    let n = ctx.cfg.n;
    let mut adj = vec![0u64; n];
    let mut edges = Vec::new();
    for e in bits(mask) {
        let (u, v) = ctx.pairs[e];
        adj[u] |= bit(v);
        adj[v] |= bit(u);
        edges.push((u, v));
    }
    part.stats.underlying_graphs += 1;
    if ctx.prune {
        let delta = adj.iter().map(|a| a.count_ones()).max().unwrap_or(0) as f64;
        if delta.min(edge_bound(edges.len())) < ctx.target - ctx.cfg.tol {
            part.stats.pruned_graphs += 1;
            return Ok(());
        }
    }
    let underlying = SignedGraph::from_masks(n, adj.clone(), vec![0; n]);
    let signed = |neg_edges: &mut dyn Iterator<Item = (usize, usize)>| {
        let mut neg = vec![0u64; n];
        for (u, v) in neg_edges {
            neg[u] |= bit(v);
            neg[v] |= bit(u);
        }
        let pos = (0..n).map(|u| adj[u] & !neg[u]).collect();
        SignedGraph::from_masks(n, pos, neg)
    };
    match ctx.cfg.mode {
        SearchMode::Exhaustive => {
            // First spanning forest in edge order stays positive; each other
            // edge is free, giving one representative per switching class.
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], mut v: usize) -> usize {
                while p[v] != v {
                    p[v] = p[p[v]];
                    v = p[v];
                }
                v
            }
            let mut cotree = Vec::new();
            for &(u, v) in &edges {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    cotree.push((u, v));
                } else {
                    parent[b] = a;
                }
            }
            let classes = 1u64 << cotree.len();
            part.stats.signatures += classes;
            part.stats.balanced_rejected += 1;
            for sig in 1..classes {
                let g = signed(&mut bits(sig).map(|i| cotree[i]));
                part.offer(g, ctx)?;
            }
        }
        SearchMode::GuidedOneNegativeEdge => {
            for &(u, v) in &edges {
                part.stats.signatures += 1;
                if underlying.is_bridge(u, v) {
                    part.stats.balanced_rejected += 1;
                    continue;
                }
                part.offer(signed(&mut std::iter::once((u, v))), ctx)?;
            }
        }
        _ => unreachable!("enumeration modes only"),
    }
    Ok(())
}

fn enumerate(cfg: &SearchConfig, prune: bool) -> Result<Partial> {
    let n = cfg.n;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    let total = 1u64 << pairs.len();
    let ctx = Context {
        cfg,
        pairs,
        prune,
        target: (n - 2) as f64,
    };
    let chunks = total.div_ceil(CHUNK);
    let pool = worker_pool(cfg.workers)?;
    pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut part = Partial::default();
                for mask in (c * CHUNK)..((c + 1) * CHUNK).min(total) {
                    visit(mask, &ctx, &mut part)?;
                }
                Ok(part)
            })
            .try_reduce(Partial::default, |a, b| Ok(a.merge(b, cfg.tol)))
    })
}

pub(crate) fn run(cfg: &SearchConfig) -> Result<SearchCertificate> {
    let guided = cfg.mode == SearchMode::GuidedOneNegativeEdge;
    let prune = guided && cfg.prune;
    let target = (cfg.n - 2) as f64;
    let mut part = enumerate(cfg, prune)?;
    let mut reran = false;
    if prune && part.best.map_or(true, |b| b < target - cfg.tol) {
        // Pruning is only sound if something reaches the target.
        part = enumerate(cfg, false)?;
        reran = true;
    }
    part.stats.reran_without_pruning = reran;
    let best = part
        .best
        .ok_or_else(|| Error::PreconditionViolated("no unbalanced family-free graph in the search space".into()))?;

    let mut maximizers: Vec<(Vec<u8>, Record)> = part
        .maximizers
        .into_iter()
        .filter(|(_, r)| r.lambda1 >= best - cfg.tol)
        .collect();
    maximizers.sort_by(|(ka, a), (kb, b)| rounded(b.lambda1).cmp(&rounded(a.lambda1)).then(ka.cmp(kb)));
    let maximizers: Vec<Maximizer> = maximizers
        .into_iter()
        .map(|(key, r)| {
            let canonical = r.graph.n() <= cfg.limits.canonical;
            Maximizer {
                matches_gamma_n3: matches_gamma(&r.graph, &cfg.limits),
                canonical_key: canonical.then(|| key.iter().map(|b| format!("{b:02x}")).collect()),
                graph: r.graph,
                lambda1: r.lambda1,
                multiplicity: r.multiplicity,
            }
        })
        .collect();
    let top = maximizers.first().expect("best exists so a maximizer does");
    let all_match = maximizers
        .iter()
        .map(|m| m.matches_gamma_n3)
        .try_fold(true, |acc, m| m.map(|b| acc && b));

    Ok(SearchCertificate {
        version: env!("CARGO_PKG_VERSION").to_string(),
        n: cfg.n,
        family: cfg.family,
        mode: cfg.mode,
        seed: cfg.seed,
        config: cfg.clone(),
        restriction: guided.then(|| GUIDED_RESTRICTION.to_string()),
        best_graph: top.graph.clone(),
        best_lambda1: top.lambda1,
        bound: target,
        verdict: if top.lambda1 > target + cfg.tol {
            Verdict::CounterexampleFound
        } else {
            Verdict::BoundHolds
        },
        matches_gamma_n3: top.matches_gamma_n3,
        all_maximizers_match_gamma_n3: all_match,
        stats: SearchStats {
            enumeration: Some(part.stats),
            moves: None,
        },
        histogram: Some(histogram_from(&part.histogram)),
        trace: None,
        maximizers,
    })
}
