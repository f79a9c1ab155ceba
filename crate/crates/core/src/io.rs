//! Text formats: `.dhg` directed hypergraphs, DIMACS CNF, `.hg` undirected
//! hypergraphs and the `key: value` metadata sidecar.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::{DirectedHypergraph, HypergraphBuilder, HypergraphError, Side, Vertex};
use crate::oracles::{OracleError, UndirectedHypergraph};
use crate::reductions::{CnfFormula, Literal};

/// A parse failure with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("empty {0}")]
    EmptySide(Side),
    #[error("vertex {0} is both a tail and a head")]
    Disjointness(String),
    #[error("vertex {0} is not declared")]
    UnknownVertex(String),
    #[error("invalid vertex name {0:?}")]
    InvalidName(String),
    #[error("vertex {0} declared twice")]
    DuplicateVertex(String),
    #[error("clause has {0} literals, expected 3")]
    NotThreeCnf(usize),
    #[error("header declares {declared} clauses, body has {found}")]
    HeaderMismatch { declared: usize, found: usize },
    #[error("literal {0} outside the declared variables")]
    VariableOutOfRange(i64),
}

impl ParseError {
    fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col = 0;
    for (byte, ch) in text.char_indices() {
        col += 1;
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((byte, col)),
            (true, Some((b, c))) => {
                out.push((c, &text[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((b, c)) = start {
        out.push((c, &text[b..]));
    }
    out.into_iter()
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn hypergraph_kind(err: HypergraphError) -> ParseErrorKind {
    match err {
        HypergraphError::InvalidVertexName(n) => ParseErrorKind::InvalidName(n),
        HypergraphError::DuplicateVertex(n) => ParseErrorKind::DuplicateVertex(n),
        HypergraphError::UnknownVertex { name, .. } | HypergraphError::UnknownVertexName(name) => {
            ParseErrorKind::UnknownVertex(name)
        }
        HypergraphError::EmptySide { side, .. } => ParseErrorKind::EmptySide(side),
        HypergraphError::DisjointnessViolation { name, .. } => ParseErrorKind::Disjointness(name),
        other => ParseErrorKind::Syntax(other.to_string()),
    }
}

/// Parses the `.dhg` format.
///
/// `#` starts a comment, blank lines are skipped, an optional first line
/// `vertices: v1 v2 ...` fixes the vertex set and its order, and every other
/// line is `t1 t2 ... -> h1 h2 ...`. Arc ids follow file order.
pub fn parse_dhg(text: &str) -> Result<DirectedHypergraph, ParseError> {
    let mut b = HypergraphBuilder::new();
    let mut declared = false;
    let mut first = true;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let is_first = std::mem::replace(&mut first, false);
        if let Some(rest) = line.trim_start().strip_prefix("vertices:") {
            if !is_first {
                let col = line.find("vertices:").unwrap_or(0) + 1;
                return Err(ParseError::new(
                    line_no,
                    col,
                    ParseErrorKind::Syntax("vertex header must come first".into()),
                ));
            }
            let offset = line.len() - rest.len();
            for (col, tok) in tokens(rest) {
                let col = line[..offset].chars().count() + col;
                b.add_vertex(tok)
                    .map_err(|e| ParseError::new(line_no, col, hypergraph_kind(e)))?;
            }
            declared = true;
            continue;
        }
        parse_arc_line(&mut b, line, line_no, declared)?;
    }
    Ok(b.finish())
}

fn parse_arc_line(
    b: &mut HypergraphBuilder,
    line: &str,
    line_no: usize,
    declared: bool,
) -> Result<(), ParseError> {
    let Some(arrow) = line.find("->") else {
        let col = line.len() - line.trim_start().len() + 1;
        return Err(ParseError::new(line_no, col, ParseErrorKind::Syntax("missing '->'".into())));
    };
    let arrow_col = line[..arrow].chars().count() + 1;
    if let Some(second) = line[arrow + 2..].find("->") {
        let col = line[..arrow + 2 + second].chars().count() + 1;
        return Err(ParseError::new(line_no, col, ParseErrorKind::Syntax("second '->'".into())));
    }
    let head_offset = line[..arrow + 2].chars().count();
    let mut side = |part: &str, offset: usize| -> Result<Vec<Vertex>, ParseError> {
        tokens(part)
            .map(|(col, tok)| {
                let col = offset + col;
                let found = if declared {
                    b.vertex(tok).ok_or_else(|| ParseErrorKind::UnknownVertex(tok.to_owned()))
                } else {
                    b.vertex_or_add(tok).map_err(hypergraph_kind)
                };
                found.map_err(|kind| ParseError::new(line_no, col, kind))
            })
            .collect()
    };
    let tails = side(&line[..arrow], 0)?;
    let heads = side(&line[arrow + 2..], head_offset)?;
    b.add_arc(tails, heads)
        .map_err(|e| ParseError::new(line_no, arrow_col, hypergraph_kind(e)))?;
    Ok(())
}

/// Writes the `.dhg` format, always with a vertex header.
pub fn serialize_dhg(graph: &DirectedHypergraph) -> String {
    let mut out = String::from("vertices:");
    for name in graph.vertex_names() {
        out.push(' ');
        out.push_str(name.as_str());
    }
    out.push('\n');
    for arc in graph.arcs() {
        out.push_str(&join(graph.names_of(arc.tails())));
        out.push_str(" -> ");
        out.push_str(&join(graph.names_of(arc.heads())));
        out.push('\n');
    }
    out
}

fn join<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    parts.collect::<Vec<_>>().join(" ")
}

/// Parses DIMACS CNF restricted to clauses of exactly three literals.
pub fn parse_cnf(text: &str) -> Result<CnfFormula, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut last = (1, 1);
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = raw.trim_start();
        if trimmed.starts_with('c') || trimmed.starts_with('%') || trimmed.is_empty() {
            continue;
        }
        let syntax = |col, msg: &str| ParseError::new(line_no, col, ParseErrorKind::Syntax(msg.into()));
        if trimmed.starts_with('p') {
            let toks: Vec<_> = tokens(raw).collect();
            if header.is_some() {
                return Err(syntax(toks[0].0, "duplicate header"));
            }
            let parsed = match toks.as_slice() {
                [(_, "p"), (_, "cnf"), (_, n), (_, m)] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| syntax(toks[0].0, "expected 'p cnf <vars> <clauses>'"))?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(syntax(raw.len() - trimmed.len() + 1, "clause before header"));
        };
        for (col, tok) in tokens(raw) {
            last = (line_no, col);
            let value: i64 = tok.parse().map_err(|_| syntax(col, "expected an integer literal"))?;
            if value == 0 {
                if pending.len() != 3 {
                    return Err(ParseError::new(line_no, col, ParseErrorKind::NotThreeCnf(pending.len())));
                }
                clauses.push([pending[0], pending[1], pending[2]]);
                pending.clear();
                continue;
            }
            match Literal::from_dimacs(value) {
                Some(lit) if lit.var() <= n => pending.push(lit),
                _ => {
                    return Err(ParseError::new(line_no, col, ParseErrorKind::VariableOutOfRange(value)))
                }
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(ParseError::new(1, 1, ParseErrorKind::Syntax("missing 'p cnf' header".into())));
    };
    if !pending.is_empty() {
        return Err(ParseError::new(last.0, last.1, ParseErrorKind::Syntax("clause not terminated by 0".into())));
    }
    if clauses.len() != m {
        return Err(ParseError::new(
            last.0,
            last.1,
            ParseErrorKind::HeaderMismatch { declared: m, found: clauses.len() },
        ));
    }
    Ok(CnfFormula::new(n, clauses).expect("literals were range-checked"))
}

/// Writes DIMACS CNF.
pub fn serialize_cnf(formula: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars(), formula.num_clauses());
    for clause in formula.clauses() {
        for lit in clause {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// Parses the `.hg` format: one hyperedge per line, vertices inferred in
/// order of first appearance.
pub fn parse_hg(text: &str) -> Result<UndirectedHypergraph, ParseError> {
    let mut edges: Vec<Vec<&str>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let edge: Vec<&str> = tokens(line).map(|(_, t)| t).collect();
        if edge.is_empty() {
            continue;
        }
        for (col, tok) in tokens(line) {
            if !crate::hypergraph::VertexId::is_valid(tok) {
                return Err(ParseError::new(i + 1, col, ParseErrorKind::InvalidName(tok.to_owned())));
            }
        }
        edges.push(edge);
    }
    UndirectedHypergraph::from_edges(edges).map_err(|e| {
        let kind = match e {
            OracleError::Hypergraph(h) => hypergraph_kind(h),
            other => ParseErrorKind::Syntax(other.to_string()),
        };
        ParseError::new(1, 1, kind)
    })
}

/// Writes the `.hg` format.
pub fn serialize_hg(h: &UndirectedHypergraph) -> String {
    let mut out = String::new();
    for edge in h.edges() {
        out.push_str(&join(edge.iter().map(|&v| h.name(v).as_str())));
        out.push('\n');
    }
    out
}

/// Ordered `key: value` records; keys may repeat to list families.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record. Keys are single tokens without `:`.
    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        assert!(
            !key.is_empty() && !key.contains(':') && !key.contains(char::is_whitespace),
            "bad metadata key {key:?}"
        );
        let value = value.to_string();
        assert!(!value.contains('\n'), "metadata values are single lines");
        self.entries.push((key.to_owned(), value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries
            .iter()
            .filter(move |(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn parse(text: &str) -> Result<Metadata, ParseError> {
        let mut meta = Metadata::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(ParseError::new(i + 1, 1, ParseErrorKind::Syntax("expected 'key: value'".into())));
            };
            let key = key.trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(ParseError::new(i + 1, 1, ParseErrorKind::Syntax("bad key".into())));
            }
            meta.entries.push((key.to_owned(), value.trim().to_owned()));
        }
        Ok(meta)
    }
}

impl fmt::Display for Metadata {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            if v.is_empty() {
                writeln!(f, "{k}:")?;
            } else {
                writeln!(f, "{k}: {v}")?;
            }
        }
        Ok(())
    }
}
