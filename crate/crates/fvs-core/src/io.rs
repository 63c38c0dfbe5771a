//! Text format for instances and solutions.
//!
//! An instance file holds a header line `p <n> <m>`, then exactly `m` edge
//! lines `<u> <v>` with 0-based ids below `n`. Lines starting with `#` and
//! blank lines are ignored. Optional extras: any number of `s <id>...`
//! solution lines and at most one `u <id>...` subset line. Parse errors
//! carry the 1-based line number.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedInstance {
    pub graph: Graph,
    /// One entry per `s` line, in file order.
    pub solutions: Vec<BTreeSet<VertexId>>,
    /// The `u` line, if present.
    pub subset: Option<BTreeSet<VertexId>>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_id(tok: &str, n: u32, line: usize) -> Result<VertexId> {
    let id: u32 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("expected a vertex id, got {tok:?}")))?;
    if id >= n {
        return Err(parse_err(line, format!("vertex id {id} out of range (n = {n})")));
    }
    Ok(id)
}

fn parse_id_list(toks: &[&str], n: u32, line: usize) -> Result<BTreeSet<VertexId>> {
    toks.iter().map(|t| parse_id(t, n, line)).collect()
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance> {
    let mut header: Option<(u32, usize)> = None;
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut solutions: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut subset: Option<BTreeSet<VertexId>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate header line"));
                }
                if !edges.is_empty() || !solutions.is_empty() || subset.is_some() {
                    return Err(parse_err(line, "header must come first"));
                }
                let [_, n_tok, m_tok] = toks[..] else {
                    return Err(parse_err(line, "header must be exactly `p <n> <m>`"));
                };
                let n: u32 = n_tok
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad vertex count {n_tok:?}")))?;
                let m: usize = m_tok
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad edge count {m_tok:?}")))?;
                header = Some((n, m));
            }
            "s" => {
                let (n, _) = header.ok_or_else(|| parse_err(line, "solution line before header"))?;
                solutions.push(parse_id_list(&toks[1..], n, line)?);
            }
            "u" => {
                let (n, _) = header.ok_or_else(|| parse_err(line, "subset line before header"))?;
                if subset.is_some() {
                    return Err(parse_err(line, "more than one subset line"));
                }
                subset = Some(parse_id_list(&toks[1..], n, line)?);
            }
            _ => {
                let (n, m) =
                    header.ok_or_else(|| parse_err(line, "edge line before header"))?;
                if edges.len() == m {
                    return Err(parse_err(
                        line,
                        format!("more than the declared {m} edges"),
                    ));
                }
                let [u_tok, v_tok] = toks[..] else {
                    return Err(parse_err(line, "edge line must be exactly `<u> <v>`"));
                };
                edges.push((parse_id(u_tok, n, line)?, parse_id(v_tok, n, line)?));
            }
        }
    }

    let Some((n, m)) = header else {
        return Err(parse_err(text.lines().count() + 1, "missing `p <n> <m>` header"));
    };
    if edges.len() != m {
        return Err(parse_err(
            text.lines().count() + 1,
            format!("declared {m} edges but found {}", edges.len()),
        ));
    }
    Ok(ParsedInstance { graph: Graph::build(n, &edges)?, solutions, subset })
}

/// Render an instance. The graph's vertex set must be exactly `0..n`
/// (generated instances always are); sparse id sets are refused rather than
/// silently relabeled.
pub fn write_instance(
    graph: &Graph,
    solutions: &[BTreeSet<VertexId>],
    subset: Option<&BTreeSet<VertexId>>,
) -> Result<String> {
    let n = graph.vertex_count() as u32;
    if graph.vertices().zip(0..n).any(|(v, want)| v != want) {
        return Err(Error::Degenerate(
            "vertex ids are not contiguous from 0; cannot serialize".into(),
        ));
    }
    let mut out = format!("p {} {}\n", n, graph.edge_count());
    for e in graph.edges() {
        out.push_str(&format!("{} {}\n", e.u, e.v));
    }
    for s in solutions {
        out.push_str(&render_id_line('s', s));
    }
    if let Some(u) = subset {
        out.push_str(&render_id_line('u', u));
    }
    Ok(out)
}

fn render_id_line(tag: char, ids: &BTreeSet<VertexId>) -> String {
    let mut line = tag.to_string();
    for id in ids {
        line.push_str(&format!(" {id}"));
    }
    line.push('\n');
    line
}

pub fn write_solution(ids: &BTreeSet<VertexId>) -> String {
    render_id_line('s', ids)
}

/// Read a solution set from either a bare solution file (comments plus one
/// `s` line, ids validated against `n`) or a full instance file (its first
/// `s` line is taken).
pub fn parse_solution_file(text: &str, n: u32) -> Result<BTreeSet<VertexId>> {
    let has_header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("p ") || l == "p");
    if has_header {
        let inst = parse_instance(text)?;
        return inst
            .solutions
            .first()
            .cloned()
            .ok_or_else(|| parse_err(text.lines().count() + 1, "no `s` line in instance file"));
    }
    let mut found: Option<BTreeSet<VertexId>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks[0] != "s" {
            return Err(parse_err(line, "expected an `s <id>...` line"));
        }
        if found.is_some() {
            return Err(parse_err(line, "more than one `s` line in solution file"));
        }
        found = Some(parse_id_list(&toks[1..], n, line)?);
    }
    found.ok_or_else(|| parse_err(text.lines().count() + 1, "no `s` line found"))
}
