//! `sgspec`: construction, spectra, detection, verification and extremal
//! search for signed graphs.
//!
//! With `--json` each subcommand writes exactly one JSON document to stdout;
//! human-readable text always goes to stderr. Exit codes: 0 success or bound
//! holds, 1 failed verification, 2 usage error, 3 counterexample found.

mod config;

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::FileConfig;
use sgspec_core::{
    adjacency, build, canonical_form, find_witness, is_switching_isomorphic, read_graph, run_search, run_suite,
    spectrum, write_graph, FamilyKind, FamilySpec, ForbiddenFamily, Limits, SearchConfig, SearchMode, SignedGraph,
    Suite, Verdict, VerifyOptions,
};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_COUNTEREXAMPLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sgspec", version, about = "Spectral toolkit for signed graphs")]
struct Cli {
    /// Emit a single JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// TOML file with default settings; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Largest n accepted by canonical labelling.
    #[arg(long, global = true)]
    canonical_limit: Option<usize>,

    /// Largest n accepted by exhaustive switching enumeration.
    #[arg(long, global = true)]
    switching_limit: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a member of Γ_{n,t}, U, Z1, Z2 or W and write it as `.sg`.
    Construct {
        /// gamma, u, z1, z2 or w.
        family: String,
        /// Number of vertices.
        #[arg(long)]
        n: usize,
        /// Required for gamma, rejected otherwise.
        #[arg(long)]
        t: Option<usize>,
        /// Output path; the graph goes to stdout when omitted and `--json` is off.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Largest adjacency eigenvalue of a `.sg` graph.
    Lambda1 {
        graph: PathBuf,
        /// Eigenvalue tolerance (default 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Full adjacency spectrum of a `.sg` graph.
    Spectrum {
        graph: PathBuf,
        /// Eigenvalue tolerance (default 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Balance and forbidden-family membership of a `.sg` graph.
    Check {
        graph: PathBuf,
        /// k33, kst:S,T, kr:R or ck:K.
        #[arg(long)]
        family: Option<String>,
    },
    /// Canonical form under switching isomorphism.
    Canon { graph: PathBuf },
    /// Whether two `.sg` graphs are switching isomorphic.
    SwitchIso { a: PathBuf, b: PathBuf },
    /// Replay a check suite over a range of n.
    Verify {
        /// lemma22, lemma23, lemma21-reconstruction, theorem11-small-n or bounds-32-33.
        suite: String,
        /// Inclusive range `a..b` or a single n.
        #[arg(long)]
        n: Option<String>,
        /// Numeric tolerance (default 1e-9).
        #[arg(long)]
        tol: Option<f64>,
        /// Random graphs per n for sampled checks (default 200).
        #[arg(long)]
        samples: Option<usize>,
        /// RNG seed for sampled checks (default 42).
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default 1).
        #[arg(long, env = "SGSPEC_WORKERS")]
        workers: Option<usize>,
    },
    /// Search for the largest index among unbalanced forbidden-free graphs.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// exhaustive, guided, anneal or hillclimb.
    #[arg(long)]
    mode: String,
    /// k33, kst:S,T, kr:R or ck:K (default k33).
    #[arg(long)]
    family: Option<String>,
    /// RNG seed (default 42).
    #[arg(long)]
    seed: Option<u64>,
    /// Independent restarts for stochastic modes (default 64).
    #[arg(long)]
    restarts: Option<usize>,
    /// Moves per restart (default 20000).
    #[arg(long)]
    max_steps: Option<usize>,
    /// Tolerance against n-2 (default 1e-9).
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads (default 1).
    #[arg(long, env = "SGSPEC_WORKERS")]
    workers: Option<usize>,
    /// Initial annealing temperature (default 1.0).
    #[arg(long)]
    t0: Option<f64>,
    /// Geometric cooling factor per step (default 0.995).
    #[arg(long)]
    cooling: Option<f64>,
    /// Disable degree and edge-count pruning in guided mode.
    #[arg(long)]
    no_prune: bool,
    /// Certificate output path.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Histogram CSV output path (enumeration modes).
    #[arg(long)]
    histogram: Option<PathBuf>,
}

/// Failure that maps onto an exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = match error.downcast_ref::<sgspec_core::Error>() {
            Some(
                sgspec_core::Error::PreconditionViolated(_)
                | sgspec_core::Error::LimitExceeded { .. }
                | sgspec_core::Error::Parse { .. }
                | sgspec_core::Error::SpecInvalid(_)
                | sgspec_core::Error::Disconnected,
            ) => EXIT_USAGE,
            Some(_) => EXIT_FAILED,
            None => EXIT_USAGE,
        };
        Failure { code, error }
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn to_stdout(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        error: anyhow!(msg.into()),
    }
}

struct Ctx {
    json: bool,
    file: FileConfig,
    limits: Limits,
}

impl Ctx {
    fn emit(&self, doc: serde_json::Value) {
        if self.json {
            to_stdout(&format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("value serialises")
            ));
        }
    }

    fn tol(&self, flag: Option<f64>) -> Result<f64, Failure> {
        let tol = flag.or(self.file.tol).unwrap_or(sgspec_core::spectra::DEFAULT_TOL);
        if tol > 0.0 {
            Ok(tol)
        } else {
            Err(usage(format!("tolerance must be positive, got {tol}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(|e| Failure {
            code: EXIT_USAGE,
            error: e,
        })?,
        None => FileConfig::default(),
    };
    let defaults = Limits::default();
    let limits = Limits {
        canonical: cli
            .canonical_limit
            .or(file.canonical_limit)
            .unwrap_or(defaults.canonical),
        switching: cli
            .switching_limit
            .or(file.switching_limit)
            .unwrap_or(defaults.switching),
    };
    let ctx = Ctx {
        json: cli.json,
        file,
        limits,
    };
    match cli.command {
        Command::Construct { family, n, t, out } => construct(&ctx, &family, n, t, out.as_deref()),
        Command::Lambda1 { graph, tol } => lambda1_cmd(&ctx, &graph, tol),
        Command::Spectrum { graph, tol } => spectrum_cmd(&ctx, &graph, tol),
        Command::Check { graph, family } => check(&ctx, &graph, family),
        Command::Canon { graph } => canon(&ctx, &graph),
        Command::SwitchIso { a, b } => switch_iso(&ctx, &a, &b),
        Command::Verify {
            suite,
            n,
            tol,
            samples,
            seed,
            workers,
        } => verify(&ctx, &suite, n.as_deref(), tol, samples, seed, workers),
        Command::Search(args) => search(&ctx, args),
    }
}

fn load(path: &Path) -> Result<SignedGraph, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Failure {
            code: EXIT_USAGE,
            error: e,
        })?;
    read_graph(&text).map_err(|e| Failure {
        code: EXIT_USAGE,
        error: anyhow::Error::from(e).context(format!("parsing {}", path.display())),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(|e| Failure {
            code: EXIT_FAILED,
            error: e,
        })
}

/// Parses `a..b` (inclusive) or a single `n`.
fn parse_range(s: &str) -> Result<RangeInclusive<usize>, Failure> {
    let bad = || usage(format!("invalid range {s:?}; expected a..b or n"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), s.trim()),
    };
    let a: usize = a.parse().map_err(|_| bad())?;
    let b: usize = b.parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn parse_family(s: Option<&str>) -> Result<ForbiddenFamily, Failure> {
    match s {
        Some(s) => s.parse::<ForbiddenFamily>().map_err(|e| usage(e.to_string())),
        None => Ok(ForbiddenFamily::K33),
    }
}

fn construct(ctx: &Ctx, family: &str, n: usize, t: Option<usize>, out: Option<&Path>) -> Result<u8, Failure> {
    let kind: FamilyKind = family.parse().map_err(|e: sgspec_core::Error| usage(e.to_string()))?;
    let spec = FamilySpec { kind, n, t };
    let g = build(&spec)?;
    let text = write_graph(&g);
    match out {
        Some(p) => write_file(p, &text)?,
        None if !ctx.json => to_stdout(&text),
        None => {}
    }
    eprintln!(
        "{spec}: {} vertices, {} edges, {} negative",
        g.n(),
        g.edge_count(),
        g.negative_edge_count()
    );
    ctx.emit(json!({
        "family": kind.name(),
        "n": n,
        "t": t,
        "edges": g.edge_count(),
        "negative_edges": g.negative_edge_count(),
        "path": out.map(|p| p.display().to_string()),
        "graph": if out.is_none() { Some(text) } else { None },
    }));
    Ok(0)
}

fn lambda1_cmd(ctx: &Ctx, path: &Path, tol: Option<f64>) -> Result<u8, Failure> {
    let g = load(path)?;
    let tol = ctx.tol(tol)?;
    let s = spectrum(&adjacency(&g), tol)?;
    if !ctx.json {
        to_stdout(&format!("{}\n", s.lambda1));
    }
    eprintln!("λ₁ = {:.12} (n = {})", s.lambda1, g.n());
    ctx.emit(json!({ "n": g.n(), "lambda1": s.lambda1, "tol": tol }));
    Ok(0)
}

fn spectrum_cmd(ctx: &Ctx, path: &Path, tol: Option<f64>) -> Result<u8, Failure> {
    let g = load(path)?;
    let tol = ctx.tol(tol)?;
    let s = spectrum(&adjacency(&g), tol)?;
    if !ctx.json {
        to_stdout(&s.eigenvalues.iter().map(|v| format!("{v}\n")).collect::<String>());
    }
    eprintln!("λ₁ = {:.12}, ρ = {:.12}", s.lambda1, s.rho);
    ctx.emit(serde_json::to_value(&s).expect("report serialises"));
    Ok(0)
}

fn check(ctx: &Ctx, path: &Path, family: Option<String>) -> Result<u8, Failure> {
    let g = load(path)?;
    let family = parse_family(family.as_deref().or(ctx.file.family.as_deref()))?;
    let balanced = g.is_balanced();
    let witness = find_witness(&g, &family)?;
    eprintln!(
        "{}; {}",
        if balanced { "balanced" } else { "unbalanced" },
        match &witness {
            Some(w) => format!(
                "contains {family} on {:?}, negative cycle {:?}",
                w.vertices, w.certificate_cycle
            ),
            None => format!("{family}-free"),
        }
    );
    if !ctx.json {
        to_stdout(&format!("balanced={balanced} free={}\n", witness.is_none()));
    }
    ctx.emit(json!({
        "n": g.n(),
        "balanced": balanced,
        "family": family,
        "free": witness.is_none(),
        "witness": witness,
    }));
    Ok(0)
}

fn canon(ctx: &Ctx, path: &Path) -> Result<u8, Failure> {
    let g = load(path)?;
    let (key, form) = canonical_form(&g, &ctx.limits)?;
    let text = write_graph(&form);
    if !ctx.json {
        to_stdout(&format!("{}\n{text}", key.to_hex()));
    }
    eprintln!("canonical key {}", key.to_hex());
    ctx.emit(json!({ "n": g.n(), "key": key.to_hex(), "graph": text }));
    Ok(0)
}

fn switch_iso(ctx: &Ctx, a: &Path, b: &Path) -> Result<u8, Failure> {
    let (ga, gb) = (load(a)?, load(b)?);
    let iso = is_switching_isomorphic(&ga, &gb, &ctx.limits)?;
    if !ctx.json {
        to_stdout(&format!("{iso}\n"));
    }
    eprintln!(
        "{}",
        if iso {
            "switching isomorphic"
        } else {
            "not switching isomorphic"
        }
    );
    ctx.emit(json!({ "switching_isomorphic": iso }));
    Ok(0)
}

fn verify(
    ctx: &Ctx,
    suite: &str,
    n: Option<&str>,
    tol: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> Result<u8, Failure> {
    let suite: Suite = suite.parse().map_err(|e: sgspec_core::Error| usage(e.to_string()))?;
    let range = match n {
        Some(s) => parse_range(s)?,
        None => suite.default_range(),
    };
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        tol: tol.or(ctx.file.tol).unwrap_or(defaults.tol),
        workers: workers.or(ctx.file.workers).unwrap_or(defaults.workers),
        samples: samples.or(ctx.file.samples).unwrap_or(defaults.samples),
        seed: seed.or(ctx.file.seed).unwrap_or(defaults.seed),
        limits: ctx.limits,
    };
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.workers == 0 || opts.samples == 0 {
        return Err(usage("tol, workers and samples must be positive"));
    }
    let report = run_suite(suite, range, &opts)?;
    for c in &report.checks {
        eprintln!("{} n={:<3} {}", if c.passed { "PASS" } else { "FAIL" }, c.n, c.check);
        if !c.passed {
            if let (Some(e), Some(x)) = (&c.exact, &c.expected) {
                eprintln!("      got {e}, stated {x}");
            }
        }
    }
    eprintln!(
        "{suite} n={}..{}: {} checks, {} failed",
        report.n_from,
        report.n_to,
        report.checks.len(),
        report.failed_checks
    );
    ctx.emit(serde_json::to_value(&report).expect("report serialises"));
    Ok(if report.passed { 0 } else { EXIT_FAILED })
}

fn search(ctx: &Ctx, a: SearchArgs) -> Result<u8, Failure> {
    let mode: SearchMode = a.mode.parse().map_err(|e: sgspec_core::Error| usage(e.to_string()))?;
    let f = &ctx.file;
    let mut cfg = SearchConfig::new(a.n, mode);
    cfg.family = parse_family(a.family.as_deref().or(f.family.as_deref()))?;
    cfg.seed = a.seed.or(f.seed).unwrap_or(cfg.seed);
    cfg.restarts = a.restarts.or(f.restarts).unwrap_or(cfg.restarts);
    cfg.max_steps = a.max_steps.or(f.max_steps).unwrap_or(cfg.max_steps);
    cfg.tol = a.tol.or(f.tol).unwrap_or(cfg.tol);
    cfg.workers = a.workers.or(f.workers).unwrap_or(cfg.workers);
    cfg.t0 = a.t0.or(f.t0).unwrap_or(cfg.t0);
    cfg.cooling = a.cooling.or(f.cooling).unwrap_or(cfg.cooling);
    cfg.prune = if a.no_prune {
        false
    } else {
        f.prune.unwrap_or(cfg.prune)
    };
    cfg.limits = ctx.limits;
    cfg.validate()?;

    let cert = run_search(&cfg)?;
    let doc = cert.to_json();
    if let Some(p) = &a.out {
        write_file(p, &format!("{doc}\n"))?;
    }
    if let Some(p) = &a.histogram {
        match cert.histogram_csv() {
            Some(csv) => write_file(p, &csv)?,
            None => eprintln!("no histogram for {mode} mode"),
        }
    }
    eprintln!(
        "n={} mode={} best λ₁ = {:.12} (bound {}), {:?}, matches Γ(n,3): {}",
        cert.n,
        cert.mode,
        cert.best_lambda1,
        cert.bound,
        cert.verdict,
        match cert.matches_gamma_n3 {
            Some(b) => b.to_string(),
            None => "beyond canonical limit".into(),
        }
    );
    if let Some(r) = &cert.restriction {
        eprintln!("restriction: {r}");
    }
    if ctx.json {
        to_stdout(&format!("{doc}\n"));
    }
    Ok(match cert.verdict {
        Verdict::BoundHolds => 0,
        Verdict::CounterexampleFound => EXIT_COUNTEREXAMPLE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("7..50").ok(), Some(7..=50));
        assert_eq!(parse_range("7").ok(), Some(7..=7));
        assert!(parse_range("9..7").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
