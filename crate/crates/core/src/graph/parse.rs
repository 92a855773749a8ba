use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Counts of input lines that did not become edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostics {
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub diagnostics: ParseDiagnostics,
}

/// Parses a whitespace- or comma-separated edge list.
///
/// `#` starts a comment that runs to the end of the line, so labels cannot
/// contain it. Blank lines are skipped. Edge direction is ignored.
pub fn parse_edge_list(text: &str) -> Result<ParsedGraph, GraphError> {
    let mut diagnostics = ParseDiagnostics::default();
    let mut seen: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut edges: Vec<(&str, &str)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 2 {
            return Err(GraphError::MalformedLine {
                line: idx + 1,
                found: tokens.len(),
            });
        }
        let (a, b) = (tokens[0], tokens[1]);
        if a == b {
            diagnostics.self_loops_dropped += 1;
            continue;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if !seen.insert(key) {
            diagnostics.duplicates_collapsed += 1;
            continue;
        }
        edges.push(key);
    }

    if edges.is_empty() {
        return Err(GraphError::Empty);
    }
    Ok(ParsedGraph {
        graph: Graph::from_labeled_edges(edges),
        diagnostics,
    })
}

/// Reads and parses an edge list from any byte source.
pub fn read_edge_list<R: Read>(mut reader: R) -> Result<ParsedGraph, GraphError> {
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| GraphError::Encoding(e.to_string()))?;
    let text = String::from_utf8(bytes).map_err(|e| GraphError::Encoding(e.to_string()))?;
    parse_edge_list(&text)
}

/// Canonical edge-list form: a `#` header with counts, then one sorted
/// label pair per line.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# nodes: {} edges: {}", g.node_count(), g.edge_count());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{} {}", g.label(a), g.label(b));
    }
    out
}
