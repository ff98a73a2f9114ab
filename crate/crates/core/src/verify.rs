//! Replayable check suites over ranges of `n`, each producing a JSON report.
//!
//! * `lemma22`: the cubic `g_{n,t}` and the index of `Γ_{n,t}`.
//! * `lemma23`: quotient polynomials of U, Z1, Z2, W, their stated
//!   derivative chains at `n - 2`, and the ordering against `Γ_{n,3}`.
//! * `lemma21-reconstruction`: spectrum reconstruction from quotient plus
//!   block-shifted residual.
//! * `theorem11-small-n`: guided enumeration at `n = 7, 8`.
//! * `bounds-32-33`: sampled checks of the triangle-free and `K_4`-free
//!   spectral radius bounds.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    build, canonical_partition, eval_table, family_lambda1_exact, family_quotient, family_shifts, quotient_char_poly,
    quotient_poly_factors, FamilyKind, FamilySpec, NPolyTable,
};
use crate::forbidden::{find_unbalanced_ck, find_unbalanced_kr};
use crate::graph::{Limits, Sign, SignedGraph};
use crate::search::{
    bound_c3free, bound_k4free_check, run_search, SearchCertificate, SearchConfig, SearchMode, Verdict,
};
use crate::spectra::{
    adjacency, g_poly, lambda1, largest_real_root, multisets_match, spectrum, spectrum_via_quotient, Polynomial,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "lemma22")]
    GammaCubic,
    #[serde(rename = "lemma23")]
    CompetitorPolynomials,
    #[serde(rename = "lemma21-reconstruction")]
    QuotientReconstruction,
    #[serde(rename = "theorem11-small-n")]
    SmallNGuided,
    #[serde(rename = "bounds-32-33")]
    RadiusBounds,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::GammaCubic,
        Suite::CompetitorPolynomials,
        Suite::QuotientReconstruction,
        Suite::SmallNGuided,
        Suite::RadiusBounds,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::GammaCubic => "lemma22",
            Suite::CompetitorPolynomials => "lemma23",
            Suite::QuotientReconstruction => "lemma21-reconstruction",
            Suite::SmallNGuided => "theorem11-small-n",
            Suite::RadiusBounds => "bounds-32-33",
        }
    }

    pub fn default_range(self) -> RangeInclusive<usize> {
        match self {
            Suite::GammaCubic | Suite::CompetitorPolynomials => 7..=50,
            Suite::QuotientReconstruction => 7..=12,
            Suite::SmallNGuided => 7..=7,
            Suite::RadiusBounds => 7..=8,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.id() == s).ok_or_else(|| {
            let ids: Vec<&str> = Suite::ALL.iter().map(|x| x.id()).collect();
            Error::PreconditionViolated(format!("unknown suite {s:?} (one of {})", ids.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub tol: f64,
    pub workers: usize,
    pub samples: usize,
    pub seed: u64,
    pub limits: Limits,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: 1e-9,
            workers: 1,
            samples: 200,
            seed: 42,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub n: usize,
    pub passed: bool,
    /// Exact value, as a decimal integer or polynomial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRow {
    fn new(check: impl Into<String>, n: usize, passed: bool) -> Self {
        CheckRow {
            check: check.into(),
            n,
            passed,
            exact: None,
            expected: None,
            value: None,
            detail: None,
        }
    }

    fn exact(mut self, v: impl ToString) -> Self {
        self.exact = Some(v.to_string());
        self
    }

    fn expected(mut self, v: impl ToString) -> Self {
        self.expected = Some(v.to_string());
        self
    }

    fn value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    fn detail(mut self, v: impl Into<String>) -> Self {
        self.detail = Some(v.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub n_from: usize,
    pub n_to: usize,
    pub passed: bool,
    pub failed_checks: usize,
    pub checks: Vec<CheckRow>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub certificates: Vec<SearchCertificate>,
}

pub fn run_suite(suite: Suite, range: RangeInclusive<usize>, opts: &VerifyOptions) -> Result<VerifyReport> {
    if range.is_empty() {
        return Err(Error::PreconditionViolated("empty n range".into()));
    }
    let min_n = match suite {
        Suite::GammaCubic => 4,
        _ => 7,
    };
    if *range.start() < min_n || *range.end() > crate::graph::MAX_VERTICES {
        return Err(Error::PreconditionViolated(format!(
            "{suite} needs {min_n} <= n <= {}",
            crate::graph::MAX_VERTICES
        )));
    }
    if suite == Suite::SmallNGuided && *range.end() > 8 {
        return Err(Error::PreconditionViolated(format!("{suite} covers n = 7..8 only")));
    }
    let mut checks = Vec::new();
    let mut certificates = Vec::new();
    for n in range.clone() {
        match suite {
            Suite::GammaCubic => gamma_cubic(n, opts, &mut checks)?,
            Suite::CompetitorPolynomials => competitor_polynomials(n, opts, &mut checks)?,
            Suite::QuotientReconstruction => reconstruction(n, &mut checks)?,
            Suite::SmallNGuided => certificates.push(small_n_guided(n, opts, &mut checks)?),
            Suite::RadiusBounds => bounds(n, opts, &mut checks)?,
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(VerifyReport {
        suite,
        n_from: *range.start(),
        n_to: *range.end(),
        passed: failed == 0,
        failed_checks: failed,
        checks,
        certificates,
    })
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn gamma_cubic(n: usize, opts: &VerifyOptions, out: &mut Vec<CheckRow>) -> Result<()> {
    let ni = n as i64;
    let at_nm2 = g_poly(ni, 3).eval(&int(ni - 2));
    out.push(
        CheckRow::new("g(n,3) at n-2 is zero", n, at_nm2 == int(0))
            .exact(&at_nm2)
            .expected(0),
    );

    let mut bad = Vec::new();
    for t in 2..n as i64 {
        let g = g_poly(ni, t);
        let left = g.eval(&int(ni - 2));
        let right = g.eval(&int(ni - 1));
        let expect_left = -int((t - 3) * (t - 3));
        if left != expect_left || (t != 3 && left == int(0)) || right <= int(0) {
            bad.push(format!("t={t}: g(n-2)={left}, g(n-1)={right}"));
        }
    }
    out.push(
        CheckRow::new(
            "g(n,t) at n-2 equals -(t-3)^2 and g(n,t) at n-1 is positive, t = 2..n-1",
            n,
            bad.is_empty(),
        )
        .detail(if bad.is_empty() {
            "all t".to_string()
        } else {
            bad.join("; ")
        }),
    );

    let mut bad = Vec::new();
    for t in 2..n {
        let l = family_lambda1_exact(&FamilySpec::gamma(n, t))?;
        let lo = (n - 2) as f64;
        let ok = if t == 3 { l == lo } else { l > lo && l < (n - 1) as f64 };
        if !ok {
            bad.push(format!("t={t}: {l}"));
        }
    }
    out.push(
        CheckRow::new(
            "largest root of g(n,t) in [n-2, n-1), equal to n-2 iff t = 3",
            n,
            bad.is_empty(),
        )
        .detail(if bad.is_empty() {
            "all t".to_string()
        } else {
            bad.join("; ")
        }),
    );

    let dense = lambda1(&build(&FamilySpec::gamma(n, 3))?)?;
    let root = largest_real_root(&g_poly(ni, 3), (n - 3) as f64, (n - 1) as f64, 1e-13)?;
    let ok = (dense - (n - 2) as f64).abs() <= opts.tol && (dense - root).abs() <= opts.tol;
    out.push(
        CheckRow::new("dense index of Gamma(n,3) equals n-2 and the root of g(n,3)", n, ok)
            .value(dense)
            .expected(n - 2),
    );
    Ok(())
}

/// Stated data for one quotient factor: derivatives as polynomials in `λ`
/// with coefficients in `n`, values of `P^(k)(n-2)` as polynomials in `n`,
/// and the closed form `(a(n) + sqrt(b(n))) / c` of the largest root of the
/// highest listed derivative.
struct ChainData {
    name: &'static str,
    kind: FamilyKind,
    derivatives: &'static [NPolyTable],
    values_at_nm2: &'static [(usize, &'static [i64])],
    root_a: &'static [i64],
    root_b: &'static [i64],
    root_c: i64,
}

const CHAINS: [ChainData; 4] = [
    ChainData {
        name: "U",
        kind: FamilyKind::U,
        derivatives: &[&[&[1, -2], &[10, -2], &[3]]],
        values_at_nm2: &[(0, &[-23, -2, 1])],
        root_a: &[-5, 1],
        root_b: &[22, -4, 1],
        root_c: 3,
    },
    ChainData {
        name: "Z1",
        kind: FamilyKind::Z1,
        derivatives: &[&[&[-21], &[28, -8], &[21, -3], &[4]], &[&[28, -8], &[42, -6], &[12]]],
        values_at_nm2: &[(0, &[-9, -26, 0, 1]), (1, &[-25, -4, 1, 1])],
        root_a: &[-21, 3],
        root_b: &[105, -30, 9],
        root_c: 12,
    },
    ChainData {
        name: "Z2",
        kind: FamilyKind::Z2,
        derivatives: &[
            &[&[-36, 6], &[-42, 2], &[45, -12], &[28, -4], &[5]],
            &[&[-42, 2], &[90, -24], &[84, -12], &[20]],
            &[&[90, -24], &[168, -24], &[60]],
        ],
        values_at_nm2: &[
            (0, &[-34, 90, -37, 0, 1]),
            (1, &[84, -60, -1, 0, 1]),
            (2, &[-46, -4, -12, 8]),
        ],
        root_a: &[-14, 2],
        root_b: &[46, -16, 4],
        root_c: 10,
    },
    ChainData {
        name: "W",
        kind: FamilyKind::W,
        derivatives: &[
            &[&[-25, 7], &[-62, 10], &[3, -6], &[20, -4], &[5]],
            &[&[-62, 10], &[6, -12], &[60, -12], &[20]],
            &[&[6, -12], &[120, -24], &[60]],
        ],
        values_at_nm2: &[
            (0, &[-1, 32, -2, -6, 1]),
            (1, &[31, 1, -11, -2, 1]),
            (2, &[6, -8, -24, 8]),
        ],
        root_a: &[-10, 2],
        root_b: &[90, -20, 4],
        root_c: 10,
    },
];

fn eval_n(coeffs: &[i64], n: i64) -> BigInt {
    coeffs.iter().rev().fold(int(0), |acc, &c| acc * n + c)
}

fn show_n_poly(coeffs: &[i64]) -> String {
    let p = Polynomial::from_i64(coeffs);
    p.to_string().replace('x', "n")
}

fn competitor_polynomials(n: usize, opts: &VerifyOptions, out: &mut Vec<CheckRow>) -> Result<()> {
    let ni = n as i64;
    let x = int(ni - 2);
    for chain in &CHAINS {
        let spec = FamilySpec::new(chain.kind, n);
        let (small, main) = quotient_poly_factors(&spec)?.expect("competitor family");
        let recomputed = quotient_char_poly(&spec)?;
        out.push(
            CheckRow::new(
                format!("{}: stored factorisation equals det(λI - Q)", chain.name),
                n,
                &small * &main == recomputed,
            )
            .exact(&recomputed),
        );

        for (k, table) in chain.derivatives.iter().enumerate() {
            let stated = eval_table(table, ni);
            let actual = main.nth_derivative(k + 1);
            out.push(
                CheckRow::new(
                    format!("{}: derivative {} matches stated form", chain.name, k + 1),
                    n,
                    stated == actual,
                )
                .exact(&actual)
                .expected(&stated),
            );
        }

        for &(k, form) in chain.values_at_nm2 {
            let actual = main.nth_derivative(k).eval(&x);
            let stated = eval_n(form, ni);
            let zero = int(0);
            out.push(
                CheckRow::new(
                    format!(
                        "{}: derivative {k} at n-2 equals {} and is positive",
                        chain.name,
                        show_n_poly(form)
                    ),
                    n,
                    actual == stated && actual > zero,
                )
                .exact(&actual)
                .expected(&stated),
            );
        }

        let top = chain.derivatives.len();
        let top_poly = main.nth_derivative(top);
        let formula = {
            let a = eval_n(chain.root_a, ni);
            let b = eval_n(chain.root_b, ni);
            (num_traits::ToPrimitive::to_f64(&a).unwrap_or(f64::NAN)
                + num_traits::ToPrimitive::to_f64(&b).unwrap_or(f64::NAN).sqrt())
                / chain.root_c as f64
        };
        let root = largest_real_root(&top_poly, -((n * n) as f64), ((n * n) as f64).max(4.0), 1e-13)?;
        let ok = (root - formula).abs() < 1e-9 && formula < (n - 2) as f64;
        out.push(
            CheckRow::new(
                format!(
                    "{}: largest root of derivative {top} is the stated closed form, below n-2",
                    chain.name
                ),
                n,
                ok,
            )
            .value(root)
            .expected(format!("{formula}")),
        );

        let certified = crate::spectra::poly::chain_excludes_roots_from(&main, &BigRational::from_integer(x.clone()));
        out.push(CheckRow::new(
            format!(
                "{}: all derivatives positive at n-2, so no root at or above n-2",
                chain.name
            ),
            n,
            certified,
        ));
    }

    let gamma = family_lambda1_exact(&FamilySpec::gamma(n, 3))?;
    let mut worst = f64::NEG_INFINITY;
    let mut detail = Vec::new();
    for kind in FamilyKind::COMPETITORS {
        let spec = FamilySpec::new(kind, n);
        let exact = family_lambda1_exact(&spec)?;
        let dense = lambda1(&build(&spec)?)?;
        worst = worst.max(exact.max(dense));
        detail.push(format!("{kind}={exact:.12}"));
    }
    out.push(
        CheckRow::new(
            "index of Gamma(n,3) exceeds those of U, Z1, Z2, W",
            n,
            gamma > worst + opts.tol,
        )
        .value(gamma - worst)
        .detail(detail.join(", ")),
    );
    Ok(())
}

fn reconstruction(n: usize, out: &mut Vec<CheckRow>) -> Result<()> {
    let tol = 1e-8;
    let mut specs: Vec<FamilySpec> = FamilyKind::COMPETITORS.iter().map(|&k| FamilySpec::new(k, n)).collect();
    specs.push(FamilySpec::gamma(n, 3));
    for spec in specs {
        let m = adjacency(&build(&spec)?);
        let p = canonical_partition(&spec)?;
        let q = family_quotient(&spec)?;
        let shifts = family_shifts(&spec)?;
        let rec = spectrum_via_quotient(&m, &p, &shifts, tol);
        let (ok, dev) = match &rec {
            Ok(r) => (q.equitable, r.max_deviation),
            Err(_) => (false, f64::INFINITY),
        };
        out.push(
            CheckRow::new(
                format!("{}: spectrum of Q plus residual equals direct spectrum", spec.kind),
                n,
                ok,
            )
            .value(dev),
        );
        let Ok(rec) = rec else { continue };
        let zeros = match spec.kind {
            FamilyKind::U => 2,
            FamilyKind::Z1 => 4,
            FamilyKind::Z2 => 6,
            FamilyKind::W => 5,
            FamilyKind::GammaNT => {
                let l1 = rec.reconstructed.lambda1;
                out.push(
                    CheckRow::new(
                        "gamma: reconstructed index equals n-2",
                        n,
                        (l1 - (n - 2) as f64).abs() <= tol,
                    )
                    .value(l1),
                );
                continue;
            }
        };
        let mut expect = vec![-1.0; n - zeros];
        expect.extend(vec![0.0; zeros]);
        out.push(
            CheckRow::new(
                format!("{}: shifted spectrum is {{-1^[{}], 0^[{zeros}]}}", spec.kind, n - zeros),
                n,
                multisets_match(&rec.shifted.eigenvalues, &expect, tol),
            )
            .detail(format!("{:?}", rec.shifted.eigenvalues)),
        );
        let l1 = rec.quotient_eigenvalues[0];
        out.push(
            CheckRow::new(
                format!("{}: index equals largest quotient eigenvalue", spec.kind),
                n,
                (rec.direct.lambda1 - l1).abs() <= tol,
            )
            .value(l1),
        );
    }
    Ok(())
}

fn small_n_guided(n: usize, opts: &VerifyOptions, out: &mut Vec<CheckRow>) -> Result<SearchCertificate> {
    let mut cfg = SearchConfig::new(n, SearchMode::GuidedOneNegativeEdge);
    cfg.workers = opts.workers;
    cfg.tol = opts.tol;
    cfg.limits = opts.limits;
    let cert = run_search(&cfg)?;
    let target = (n - 2) as f64;
    out.push(
        CheckRow::new(
            "guided maximum index equals n-2",
            n,
            (cert.best_lambda1 - target).abs() <= opts.tol,
        )
        .value(cert.best_lambda1)
        .expected(n - 2),
    );
    out.push(CheckRow::new("verdict", n, cert.verdict == Verdict::BoundHolds).detail(format!("{:?}", cert.verdict)));
    out.push(
        CheckRow::new(
            "every maximizer is switching isomorphic to Gamma(n,3)",
            n,
            cert.all_maximizers_match_gamma_n3 == Some(true),
        )
        .detail(format!("{} maximizer class(es)", cert.maximizers.len())),
    );
    out.push(CheckRow::new("certificate re-validates", n, cert.revalidate().is_ok()));
    Ok(cert)
}

/// Random signed graph with edge density `p` and negative fraction `q`.
pub fn random_signed_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, q: f64) -> SignedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                let s = if rng.gen_bool(q) {
                    Sign::Negative
                } else {
                    Sign::Positive
                };
                edges.push((u, v, s));
            }
        }
    }
    SignedGraph::new(n, edges).expect("generated edges are simple")
}

fn bounds(n: usize, opts: &VerifyOptions, out: &mut Vec<CheckRow>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ n as u64);
    let attempts = opts.samples * 2000;
    let c3_bound = bound_c3free(n);
    let (mut found, mut worst, mut bad) = (0usize, f64::NEG_INFINITY, 0usize);
    for _ in 0..attempts {
        if found == opts.samples {
            break;
        }
        let p = rng.gen_range(0.2..0.8);
        let q = rng.gen_range(0.05..0.6);
        let g = random_signed_graph(&mut rng, n, p, q);
        if !g.is_connected() || g.is_balanced() || find_unbalanced_ck(&g, 3)?.is_some() {
            continue;
        }
        found += 1;
        let rho = spectrum(&adjacency(&g), 1e-10)?.rho;
        worst = worst.max(rho - c3_bound);
        if rho > c3_bound + opts.tol {
            bad += 1;
        }
    }
    out.push(
        CheckRow::new(
            "sampled unbalanced graphs without a negative triangle have rho <= (sqrt(n^2-8)+n-4)/2",
            n,
            bad == 0 && found > 0,
        )
        .value(worst)
        .detail(format!("{found} samples, bound {c3_bound}")),
    );

    let (mut found, mut bad) = (0usize, 0usize);
    for _ in 0..attempts {
        if found == opts.samples {
            break;
        }
        let p = rng.gen_range(0.3..0.95);
        let q = rng.gen_range(0.02..0.3);
        let g = random_signed_graph(&mut rng, n, p, q);
        if g.is_balanced() || find_unbalanced_kr(&g, 4).is_some() {
            continue;
        }
        found += 1;
        if !bound_k4free_check(&g, opts.tol)? {
            bad += 1;
        }
    }
    out.push(
        CheckRow::new(
            "sampled unbalanced graphs without an unbalanced K4 have rho <= n-2",
            n,
            bad == 0 && found > 0,
        )
        .detail(format!("{found} samples")),
    );

    let gamma = build(&FamilySpec::gamma(n, 3))?;
    let rho = spectrum(&adjacency(&gamma), 1e-10)?.rho;
    out.push(
        CheckRow::new(
            "Gamma(n,3) attains rho = n-2",
            n,
            (rho - (n - 2) as f64).abs() <= opts.tol && bound_k4free_check(&gamma, opts.tol)?,
        )
        .value(rho),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_ids_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.id().parse::<Suite>().unwrap(), s);
            assert_eq!(
                serde_json::to_value(s).unwrap(),
                serde_json::Value::String(s.id().into())
            );
        }
        assert!("lemma99".parse::<Suite>().is_err());
    }

    #[test]
    fn gamma_cubic_suite_passes() {
        let r = run_suite(Suite::GammaCubic, 7..=12, &VerifyOptions::default()).unwrap();
        assert!(
            r.passed,
            "{:#?}",
            r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
        );
    }

    #[test]
    fn reconstruction_passes() {
        let r = run_suite(Suite::QuotientReconstruction, 7..=9, &VerifyOptions::default()).unwrap();
        assert!(
            r.passed,
            "{:#?}",
            r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
        );
    }

    #[test]
    fn competitor_suite_only_z1_stated_value_disagrees() {
        let r = run_suite(Suite::CompetitorPolynomials, 7..=9, &VerifyOptions::default()).unwrap();
        let failed: Vec<&CheckRow> = r.checks.iter().filter(|c| !c.passed).collect();
        assert_eq!(failed.len(), 3);
        for c in failed {
            assert!(c.check.starts_with("Z1: derivative 0 at n-2"), "{c:?}");
            let n = c.n as i64;
            assert_eq!(c.exact.as_deref(), Some((n * n * n - 26 * n + 5).to_string().as_str()));
        }
    }

    #[test]
    fn bounds_pass() {
        let opts = VerifyOptions {
            samples: 20,
            ..Default::default()
        };
        let r = run_suite(Suite::RadiusBounds, 7..=7, &opts).unwrap();
        assert!(r.passed, "{:#?}", r.checks);
    }

    #[test]
    fn range_validation() {
        assert!(run_suite(Suite::CompetitorPolynomials, 6..=8, &VerifyOptions::default()).is_err());
        assert!(run_suite(Suite::SmallNGuided, 7..=9, &VerifyOptions::default()).is_err());
    }
}
