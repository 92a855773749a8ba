//! Simple undirected graphs with string labels.
//!
//! Internal node ids follow the lexicographic order of the labels, so every
//! downstream computation is independent of the order edges were supplied in.

mod components;
mod generate;
mod parse;

use std::collections::BTreeMap;

use thiserror::Error;

pub use components::{connected_components, is_connected, largest_connected_component};
pub use generate::{generate, GeneratorModel, GeneratorSpec};
pub use parse::{
    parse_edge_list, read_edge_list, serialize_edge_list, ParseDiagnostics, ParsedGraph,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: expected 2 node labels, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("edge list contains no edges")]
    Empty,
    #[error("edge list is not valid UTF-8: {0}")]
    Encoding(String),
    #[error("invalid generator configuration: {0}")]
    Config(String),
    #[error("graph invariant violated: {0}")]
    Invariant(String),
}

/// Immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from labelled edges. Self-loops and duplicate edges are
    /// ignored; use [`parse_edge_list`] to get counts of what was dropped.
    pub fn from_labeled_edges<'a, I>(edges: I) -> Graph
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let pairs: Vec<(&str, &str)> = edges.into_iter().filter(|(a, b)| a != b).collect();
        let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
        for (a, b) in &pairs {
            ids.insert(a, 0);
            ids.insert(b, 0);
        }
        for (i, v) in ids.values_mut().enumerate() {
            *v = i;
        }
        let labels: Vec<String> = ids.keys().map(|s| s.to_string()).collect();
        let edges = pairs.iter().map(|(a, b)| (ids[a], ids[b]));
        Graph::from_index_edges(labels, edges)
    }

    /// Builds a graph over `labels` (which must already be sorted and unique)
    /// from index pairs. Self-loops and duplicates are dropped.
    pub fn from_index_edges<I>(labels: Vec<String>, edges: I) -> Graph
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range for {n} nodes");
            if a == b {
                continue;
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Graph { labels, adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    pub fn degree(&self, id: usize) -> usize {
        self.adjacency[id].len()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Dense adjacency matrix, row-major.
    pub fn adjacency_matrix(&self) -> crate::linalg::Matrix {
        let n = self.node_count();
        let mut m = crate::linalg::Matrix::zeros(n, n);
        for (i, j) in self.edges() {
            m[(i, j)] = 1.0;
            m[(j, i)] = 1.0;
        }
        m
    }

    /// Subgraph induced by `nodes` (sorted ascending). Labels keep their order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut remap = vec![usize::MAX; self.node_count()];
        for (new, &old) in nodes.iter().enumerate() {
            remap[old] = new;
        }
        let labels = nodes.iter().map(|&i| self.labels[i].clone()).collect();
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(a, b)| remap[a] != usize::MAX && remap[b] != usize::MAX)
            .map(|(a, b)| (remap[a], remap[b]))
            .collect();
        Graph::from_index_edges(labels, edges)
    }

    /// Checks the structural invariants: symmetric adjacency, no self-loops,
    /// no duplicate neighbors, in-range indices, and sorted unique labels.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.node_count();
        if self.adjacency.len() != n {
            return Err(GraphError::Invariant(
                "adjacency length differs from label count".into(),
            ));
        }
        if self.labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GraphError::Invariant("labels not strictly sorted".into()));
        }
        for (i, ns) in self.adjacency.iter().enumerate() {
            if ns.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GraphError::Invariant(format!(
                    "adjacency of {i} not strictly sorted"
                )));
            }
            for &j in ns {
                if j >= n {
                    return Err(GraphError::Invariant(format!(
                        "neighbor {j} of {i} out of range"
                    )));
                }
                if j == i {
                    return Err(GraphError::Invariant(format!("self-loop at {i}")));
                }
                if self.adjacency[j].binary_search(&i).is_err() {
                    return Err(GraphError::Invariant(format!("edge {i}-{j} not symmetric")));
                }
            }
        }
        Ok(())
    }
}
