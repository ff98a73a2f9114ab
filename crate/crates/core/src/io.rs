//! The `.sg` text format.
//!
//! ```text
//! # comment lines start with '#'
//! n m
//! u v s        (m lines, 0 <= u < v < n, s in {+, -, +1, -1})
//! ```
//!
//! The writer emits edges sorted by `(u, v)` and signs as `+` / `-`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedGraph};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_sign(tok: &str) -> Option<Sign> {
    match tok {
        "+" | "+1" => Some(Sign::Positive),
        "-" | "-1" => Some(Sign::Negative),
        _ => None,
    }
}

/// Parses `.sg` text. Line numbers in errors are 1-based.
pub fn read_graph(text: &str) -> Result<SignedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(hline, "header must be \"n m\""));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| parse_err(hline, format!("bad vertex count {:?}", fields[0])))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| parse_err(hline, format!("bad edge count {:?}", fields[1])))?;

    let mut g = SignedGraph::empty(n)?;
    let mut count = 0usize;
    for (lineno, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(lineno, "edge line must be \"u v s\""));
        }
        let u: usize = toks[0]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad vertex {:?}", toks[0])))?;
        let v: usize = toks[1]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad vertex {:?}", toks[1])))?;
        let s = parse_sign(toks[2]).ok_or_else(|| parse_err(lineno, format!("bad sign {:?}", toks[2])))?;
        if u == v {
            return Err(Error::InvariantViolation(format!(
                "line {lineno}: self-loop at vertex {u}"
            )));
        }
        if u > v {
            return Err(parse_err(lineno, format!("endpoints must satisfy u < v, got {u} {v}")));
        }
        if v >= n {
            return Err(Error::InvariantViolation(format!(
                "line {lineno}: vertex {v} outside 0..{n}"
            )));
        }
        if g.adjacent(u, v) {
            return Err(Error::InvariantViolation(format!(
                "line {lineno}: duplicate edge ({u}, {v})"
            )));
        }
        g = g.with_edge(u, v, s)?;
        count += 1;
    }
    if count != m {
        return Err(parse_err(hline, format!("header declares {m} edges, found {count}")));
    }
    Ok(g)
}

/// Canonical `.sg` text for `g` (LF line endings, trailing newline).
pub fn write_graph(g: &SignedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for (u, v, s) in g.edges() {
        let _ = writeln!(out, "{u} {v} {s}");
    }
    out
}
