//! Problem instances and the objective tables they induce.
//!
//! Text formats:
//!
//! * graph: optional `#` comment lines, a header line `n m`, then `m` lines
//!   `u v` with 1-indexed vertices;
//! * CNF: DIMACS `p cnf V C` with `0`-terminated clauses;
//! * custom table: JSON `{"q": .., "n": .., "values": [..]}` indexed with
//!   site 0 as the least significant digit.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{InitialState, ObjectiveTable, DEFAULT_TOL_NORM};

/// Undirected simple graph with 1-indexed vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Invalid("graph must have at least one vertex".into()));
        }
        let mut seen = HashSet::new();
        for &(u, v) in &edges {
            if u == 0 || v == 0 || u > vertex_count || v > vertex_count {
                return Err(Error::Invalid(format!("edge ({u}, {v}) has an endpoint outside 1..={vertex_count}")));
            }
            if u == v {
                return Err(Error::Invalid(format!("self-loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Invalid(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Self { vertex_count, edges })
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i, i + 1)).collect())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Invalid(format!("cycle needs at least 3 vertices, got {n}")));
        }
        Self::new(n, (1..=n).map(|i| (i, i % n + 1)).collect())
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
        Self::new(n, edges)
    }

    /// Square 1-2-3-4 with roof vertex 5 joined to 1 and 4.
    pub fn house() -> Self {
        Self::new(5, vec![(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (4, 5)]).expect("house graph is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// CNF formula with DIMACS literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    variable_count: usize,
    clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(variable_count: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        if variable_count == 0 {
            return Err(Error::Invalid("formula must have at least one variable".into()));
        }
        for (k, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::Invalid(format!("clause {} is empty", k + 1)));
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > variable_count {
                    return Err(Error::Invalid(format!(
                        "literal {lit} in clause {} references a variable outside 1..={variable_count}",
                        k + 1
                    )));
                }
            }
        }
        Ok(Self { variable_count, clauses })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }
}

fn bit(x: usize, vertex: usize) -> usize {
    (x >> (vertex - 1)) & 1
}

/// Number of cut edges, `q = 2`, one site per vertex.
pub fn maxcut_objective(graph: &Graph, limit: usize) -> Result<ObjectiveTable> {
    let n = graph.vertex_count();
    let dim = crate::spectrum::dense_dim(n, 2, limit)?;
    let values = (0..dim)
        .map(|x| graph.edges().iter().filter(|&&(u, v)| bit(x, u) != bit(x, v)).count() as f64)
        .collect();
    ObjectiveTable::new(n, 2, values)
}

/// Number of monochromatic edges under a `q`-coloring, one dit per vertex.
pub fn coloring_objective(graph: &Graph, q: usize, limit: usize) -> Result<ObjectiveTable> {
    if q < 2 {
        return Err(Error::Invalid(format!("need at least 2 colors, got {q}")));
    }
    ObjectiveTable::from_fn(graph.vertex_count(), q, limit, |colors| {
        graph.edges().iter().filter(|&&(u, v)| colors[u - 1] == colors[v - 1]).count() as f64
    })
}

/// Number of clauses falsified by each assignment.
pub fn cnf_objective(formula: &CnfFormula, limit: usize) -> Result<ObjectiveTable> {
    let n = formula.variable_count();
    let dim = crate::spectrum::dense_dim(n, 2, limit)?;
    // per clause: mask of variables, and the assignment bits that falsify every literal
    let masks: Vec<(usize, usize)> = formula
        .clauses()
        .iter()
        .map(|clause| {
            clause.iter().fold((0usize, 0usize), |(mask, falsifying), &lit| {
                let b = 1usize << (lit.unsigned_abs() - 1);
                // a negative literal is false when its variable is 1
                (mask | b, if lit < 0 { falsifying | b } else { falsifying })
            })
        })
        .collect();
    let values = (0..dim)
        .map(|x| {
            masks
                .iter()
                .zip(formula.clauses())
                .filter(|((mask, falsifying), clause)| x & mask == *falsifying && !tautology(clause))
                .count() as f64
        })
        .collect();
    ObjectiveTable::new(n, 2, values)
}

// A clause containing both x and !x can never be falsified.
fn tautology(clause: &[i64]) -> bool {
    clause.iter().any(|&l| clause.contains(&-l))
}

/// 1 where `F(x) >= t` (or `> t` when `strict`), else 0.
pub fn threshold_transform(objective: &ObjectiveTable, t: f64, strict: bool) -> ObjectiveTable {
    let values = objective
        .values()
        .iter()
        .map(|&v| if v > t || (!strict && v == t) { 1.0 } else { 0.0 })
        .collect();
    ObjectiveTable::new(objective.n(), objective.q(), values).expect("same shape as a valid table")
}

/// Tokens of a line with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

fn parse_usize(tok: &str, line: usize, col: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, col, format!("expected {what}, found `{tok}`")))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<(usize, &str)> = tokens(raw).collect();
        if toks.len() != 2 {
            let col = toks.get(2).map_or(toks.last().map_or(1, |t| t.0), |t| t.0);
            return Err(Error::parse(line_no, col, format!("expected two integers, found {} fields", toks.len())));
        }
        let a = parse_usize(toks[0].1, line_no, toks[0].0, "an integer")?;
        let b = parse_usize(toks[1].1, line_no, toks[1].0, "an integer")?;
        match header {
            None => header = Some((a, b)),
            Some((_, m)) => {
                if edges.len() == m {
                    return Err(Error::parse(line_no, toks[0].0, format!("more than the declared {m} edges")));
                }
                edges.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `n m` header"))?;
    if edges.len() != m {
        return Err(Error::parse(
            last_line.max(1),
            1,
            format!("declared {m} edges but found {}", edges.len()),
        ));
    }
    Graph::new(n, edges)
}

pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, 1, "duplicate problem line"));
            }
            let toks: Vec<(usize, &str)> = tokens(raw).collect();
            if toks.len() != 4 || toks[0].1 != "p" || toks[1].1 != "cnf" {
                return Err(Error::parse(line_no, 1, "expected `p cnf <variables> <clauses>`"));
            }
            let v = parse_usize(toks[2].1, line_no, toks[2].0, "variable count")?;
            let c = parse_usize(toks[3].1, line_no, toks[3].0, "clause count")?;
            header = Some((v, c));
            continue;
        }
        if header.is_none() {
            return Err(Error::parse(line_no, 1, "clause before `p cnf` line"));
        }
        for (col, tok) in tokens(raw) {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, col, format!("expected a literal, found `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let (v, c) = header.ok_or_else(|| Error::parse(last_line.max(1), 1, "missing `p cnf` line"))?;
    if !current.is_empty() {
        return Err(Error::parse(last_line, 1, "last clause is not terminated by 0"));
    }
    if clauses.len() != c {
        return Err(Error::parse(
            last_line.max(1),
            1,
            format!("declared {c} clauses but found {}", clauses.len()),
        ));
    }
    CnfFormula::new(v, clauses)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    q: usize,
    n: usize,
    values: Vec<f64>,
}

fn json_error(err: serde_json::Error) -> Error {
    Error::parse(err.line(), err.column(), err.to_string())
}

pub fn parse_custom_table(text: &str) -> Result<ObjectiveTable> {
    let file: TableFile = serde_json::from_str(text).map_err(json_error)?;
    ObjectiveTable::new(file.n, file.q, file.values).map_err(|e| match e {
        Error::InvalidObjective(msg) => Error::Invalid(msg),
        other => other,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateFile {
    Bare(Vec<Amplitude>),
    Wrapped { amplitudes: Vec<Amplitude> },
}

/// Initial-state JSON: an array of reals or `[re, im]` pairs, optionally
/// wrapped as `{"amplitudes": [...]}`. Must already be normalized.
pub fn parse_initial_state(text: &str) -> Result<InitialState> {
    let file: StateFile = serde_json::from_str(text).map_err(json_error)?;
    let amps = match file {
        StateFile::Bare(a) | StateFile::Wrapped { amplitudes: a } => a,
    };
    let amps = amps
        .into_iter()
        .map(|a| match a {
            Amplitude::Real(re) => Complex64::new(re, 0.0),
            Amplitude::Complex([re, im]) => Complex64::new(re, im),
        })
        .collect();
    InitialState::new(amps, DEFAULT_TOL_NORM)
}
