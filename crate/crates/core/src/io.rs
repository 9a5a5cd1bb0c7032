//! Text input formats.
//!
//! A flag file starts with `dim 0`, then one line of vertex values, then
//! `dim 1` and one `src dst [weight]` line per edge:
//!
//! ```text
//! dim 0
//! 0 0 0
//! dim 1
//! 0 1 1
//! 1 2 1/2
//! ```
//!
//! An edge list starts with the line `edgelist`; each further line is either
//! `u v [weight]` or a lone vertex name. Names are numbered in order of first
//! appearance. Blank lines and lines starting with `#` are skipped in both
//! dialects. Weights are exact rationals or `inf`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::One;

use crate::digraph::{Digraph, GraphError, WeightedDigraph};
use crate::persistence::Filtration;
use crate::rational::{format_rational, parse_rational, ExtRational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn perr<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    Flag,
    EdgeList,
}

/// A parsed input graph. Edge weights are optional; vertex values default to
/// zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInput {
    pub dialect: Dialect,
    pub labels: Option<Vec<String>>,
    pub vertex_values: Vec<Rational>,
    pub edges: Vec<(usize, usize, Option<ExtRational>)>,
}

impl GraphInput {
    pub fn vertex_count(&self) -> usize {
        self.vertex_values.len()
    }

    pub fn digraph(&self) -> Result<Digraph, GraphError> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.0, e.1)).collect();
        let g = Digraph::new(self.vertex_count(), &edges)?;
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }

    /// Weighted digraph; missing weights count as 1 and `inf` is rejected.
    pub fn weighted(&self) -> Result<WeightedDigraph, GraphError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (u, v, w) in &self.edges {
            let w = match w {
                None => Rational::one(),
                Some(ExtRational::Finite(r)) => r.clone(),
                Some(ExtRational::Infinity) => {
                    return Err(GraphError::NonPositiveWeight(*u, *v, "inf".into()));
                }
            };
            edges.push((*u, *v, w));
        }
        let g = WeightedDigraph::new(self.vertex_count(), edges)?;
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }

    /// Edges enter at their weight (`inf`: never) and vertices at their
    /// values.
    pub fn filtration(&self) -> Result<Filtration, GraphError> {
        let mut f = Filtration::new(self.vertex_count());
        for (v, t) in self.vertex_values.iter().enumerate() {
            f.set_vertex_time(v, t.clone())?;
        }
        for (u, v, w) in &self.edges {
            f.set_entrance(*u, *v, w.clone().unwrap_or(ExtRational::Finite(Rational::one())))?;
        }
        Ok(f)
    }
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parse either dialect, chosen by the first content line.
pub fn parse_graph(text: &str) -> Result<GraphInput, ParseError> {
    match content_lines(text).next() {
        None => perr(1, "empty input (expected `dim 0` or `edgelist`)"),
        Some((_, l)) if l.split_whitespace().eq(["dim", "0"]) => parse_flag(text),
        Some((_, "edgelist")) => parse_edge_list(text),
        Some((n, l)) => perr(n, format!("unrecognised header `{l}` (expected `dim 0` or `edgelist`)")),
    }
}

fn parse_weight(line: usize, tok: &str) -> Result<ExtRational, ParseError> {
    let w: ExtRational = match tok.parse() {
        Ok(w) => w,
        Err(_) => return perr(line, format!("invalid weight `{tok}`")),
    };
    if let ExtRational::Finite(r) = &w {
        if r <= &Rational::from_integer(0.into()) {
            return perr(line, format!("weight `{tok}` is not positive"));
        }
    }
    Ok(w)
}

struct EdgeCheck {
    seen: std::collections::HashSet<(usize, usize)>,
}

impl EdgeCheck {
    fn add(&mut self, line: usize, u: usize, v: usize) -> Result<(), ParseError> {
        if u == v {
            return perr(line, format!("self-loop at vertex {u}"));
        }
        if !self.seen.insert((u, v)) {
            return perr(line, format!("duplicate edge {u} {v}"));
        }
        Ok(())
    }
}

pub fn parse_flag(text: &str) -> Result<GraphInput, ParseError> {
    let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut header_seen = false;
    let mut values_line: Option<(usize, &str)> = None;
    let mut in_edges = false;
    let mut edges = Vec::new();
    let mut check = EdgeCheck { seen: Default::default() };
    let mut vertex_values: Vec<Rational> = Vec::new();
    let mut last_line = 0;
    for (n, l) in lines {
        last_line = n;
        if l.starts_with('#') {
            continue;
        }
        if !header_seen {
            if l.is_empty() {
                continue;
            }
            if !l.split_whitespace().eq(["dim", "0"]) {
                return perr(n, "expected `dim 0`");
            }
            header_seen = true;
            continue;
        }
        if !in_edges {
            if l.split_whitespace().eq(["dim", "1"]) {
                in_edges = true;
                if let Some((vn, vl)) = values_line {
                    for tok in vl.split_whitespace() {
                        match parse_rational(tok) {
                            Ok(r) => vertex_values.push(r),
                            Err(_) => return perr(vn, format!("invalid vertex value `{tok}`")),
                        }
                    }
                }
                continue;
            }
            if l.is_empty() {
                continue;
            }
            if values_line.is_some() {
                return perr(n, "expected `dim 1` after the vertex values line");
            }
            values_line = Some((n, l));
            continue;
        }
        if l.is_empty() {
            continue;
        }
        if l.starts_with("dim") {
            return perr(n, "only `dim 0` and `dim 1` sections are supported");
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return perr(n, "expected `src dst [weight]`");
        }
        let idx = |tok: &str| -> Result<usize, ParseError> {
            let v: usize = tok.parse().map_err(|_| ParseError { line: n, message: format!("invalid vertex `{tok}`") })?;
            if v >= vertex_values.len() {
                return perr(n, format!("vertex {v} out of range (have {})", vertex_values.len()));
            }
            Ok(v)
        };
        let (u, v) = (idx(toks[0])?, idx(toks[1])?);
        check.add(n, u, v)?;
        let w = toks.get(2).map(|t| parse_weight(n, t)).transpose()?;
        edges.push((u, v, w));
    }
    if !header_seen {
        return perr(last_line.max(1), "missing `dim 0` header");
    }
    if !in_edges {
        return perr(last_line.max(1), "missing `dim 1` section");
    }
    Ok(GraphInput { dialect: Dialect::Flag, labels: None, vertex_values, edges })
}

pub fn parse_edge_list(text: &str) -> Result<GraphInput, ParseError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "edgelist")) => {}
        Some((n, _)) => return perr(n, "expected `edgelist` header"),
        None => return perr(1, "empty input"),
    }
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut intern = |s: &str| -> usize {
        if let Some(&i) = index.get(s) {
            return i;
        }
        names.push(s.to_string());
        index.insert(s.to_string(), names.len() - 1);
        names.len() - 1
    };
    let mut edges = Vec::new();
    let mut check = EdgeCheck { seen: Default::default() };
    for (n, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.len() {
            1 => {
                intern(toks[0]);
            }
            2 | 3 => {
                let (u, v) = (intern(toks[0]), intern(toks[1]));
                check.add(n, u, v)?;
                let w = toks.get(2).map(|t| parse_weight(n, t)).transpose()?;
                edges.push((u, v, w));
            }
            _ => return perr(n, "expected `u v [weight]` or a single vertex name"),
        }
    }
    let vertex_values = vec![Rational::from_integer(0.into()); names.len()];
    Ok(GraphInput { dialect: Dialect::EdgeList, labels: Some(names), vertex_values, edges })
}

/// Flag-file text for `input`; labels are dropped.
pub fn to_flag(input: &GraphInput) -> String {
    let mut s = String::from("dim 0\n");
    let values: Vec<String> = input.vertex_values.iter().map(format_rational).collect();
    s.push_str(&values.join(" "));
    s.push_str("\ndim 1\n");
    for (u, v, w) in &input.edges {
        match w {
            Some(w) => writeln!(s, "{u} {v} {w}").unwrap(),
            None => writeln!(s, "{u} {v}").unwrap(),
        }
    }
    s
}

/// Flag-file text for a weighted digraph with all vertex values zero.
pub fn weighted_to_flag(g: &WeightedDigraph) -> String {
    let input = GraphInput {
        dialect: Dialect::Flag,
        labels: None,
        vertex_values: vec![Rational::from_integer(0.into()); g.vertex_count()],
        edges: g.weighted_edges().map(|(u, v, w)| (u, v, Some(ExtRational::Finite(w.clone())))).collect(),
    };
    to_flag(&input)
}
