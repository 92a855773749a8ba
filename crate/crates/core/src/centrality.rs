//! Degree, eigenvector, betweenness and closeness centrality.

use std::collections::VecDeque;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{is_connected, Graph};
use crate::linalg::{self, CorrelationMatrix, LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CentralityError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("graph is disconnected; extract the largest connected component first")]
    Disconnected,
    #[error("graph has {got} nodes, need at least {needed}")]
    TooSmall { needed: usize, got: usize },
    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

/// The four metrics, in dataset column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Deg,
    Evc,
    Bwc,
    Clc,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Deg, Metric::Evc, Metric::Bwc, Metric::Clc];

    pub fn key(self) -> &'static str {
        match self {
            Metric::Deg => "deg",
            Metric::Evc => "evc",
            Metric::Bwc => "bwc",
            Metric::Clc => "clc",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key().to_uppercase())
    }
}

pub fn degree_centrality(g: &Graph) -> Vec<f64> {
    (0..g.node_count()).map(|v| g.degree(v) as f64).collect()
}

pub const DEFAULT_EVC_TOL: f64 = 1e-10;
pub const DEFAULT_EVC_MAX_ITER: usize = 1000;

/// Principal eigenvector of the adjacency matrix, unit L2 norm, entries ≥ 0.
///
/// Iterates `x ← (A + I) x / ‖(A + I) x‖` from the all-ones vector until
/// successive iterates differ by less than `tol` in max-norm. The identity
/// shift keeps the eigenvectors of `A` but removes the ±λ tie that makes the
/// plain iteration oscillate on bipartite graphs.
pub fn eigenvector_centrality(
    g: &Graph,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, CentralityError> {
    let n = g.node_count();
    if n == 0 {
        return Err(CentralityError::EmptyGraph);
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        for v in 0..n {
            next[v] = x[v] + g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>();
        }
        let len = linalg::norm(&next);
        next.iter_mut().for_each(|y| *y /= len);
        residual = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if residual < tol {
            return Ok(x);
        }
    }
    Err(CentralityError::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Raw betweenness: for each `v`, the sum over unordered pairs `{s, t}` not
/// containing `v` of the fraction of shortest s–t paths through `v`.
///
/// Brandes' algorithm: one BFS per source counting shortest paths, then
/// dependencies accumulated in reverse BFS order. Each unordered pair is seen
/// from both ends, so the totals are halved.
pub fn betweenness_centrality(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut bwc = vec![0.0; n];
    let mut sigma = vec![0.0_f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0_f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        sigma.iter_mut().for_each(|x| *x = 0.0);
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        delta.iter_mut().for_each(|x| *x = 0.0);
        preds.iter_mut().for_each(Vec::clear);
        order.clear();

        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bwc[w] += delta[w];
            }
        }
    }
    bwc.iter_mut().for_each(|x| *x *= 0.5);
    bwc
}

/// BFS hop distances from `source`; unreachable nodes get `usize::MAX`.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// `(n - 1) / Σ_u d(v, u)`.
pub fn closeness_centrality(g: &Graph) -> Result<Vec<f64>, CentralityError> {
    let n = g.node_count();
    if n == 0 {
        return Err(CentralityError::EmptyGraph);
    }
    if n < 2 {
        return Err(CentralityError::TooSmall { needed: 2, got: n });
    }
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let dist = bfs_distances(g, v);
        if dist.contains(&usize::MAX) {
            return Err(CentralityError::Disconnected);
        }
        let total: usize = dist.iter().sum();
        out.push((n - 1) as f64 / total as f64);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralityOptions {
    pub evc_tol: f64,
    pub evc_max_iter: usize,
}

impl Default for CentralityOptions {
    fn default() -> Self {
        CentralityOptions {
            evc_tol: DEFAULT_EVC_TOL,
            evc_max_iter: DEFAULT_EVC_MAX_ITER,
        }
    }
}

/// Minimum node count for a dataset; smaller graphs leave the 4x4
/// correlation matrix trivially rank-deficient.
pub const MIN_DATASET_NODES: usize = 5;

/// Per-vertex centrality values, columns (DEG, EVC, BWC, CLC).
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityDataset {
    labels: Vec<String>,
    values: Matrix,
}

impl CentralityDataset {
    pub fn compute(g: &Graph, opts: &CentralityOptions) -> Result<Self, CentralityError> {
        let n = g.node_count();
        if n == 0 {
            return Err(CentralityError::EmptyGraph);
        }
        if n < MIN_DATASET_NODES {
            return Err(CentralityError::TooSmall {
                needed: MIN_DATASET_NODES,
                got: n,
            });
        }
        if !is_connected(g) {
            return Err(CentralityError::Disconnected);
        }
        let deg = degree_centrality(g);
        let evc = eigenvector_centrality(g, opts.evc_tol, opts.evc_max_iter)?;
        let bwc = betweenness_centrality(g);
        let clc = closeness_centrality(g)?;
        Ok(CentralityDataset {
            labels: g.labels().to_vec(),
            values: Matrix::from_columns(&[deg, evc, bwc, clc]),
        })
    }

    /// Wraps precomputed values; `values` must be n×4 in metric order.
    pub fn from_parts(labels: Vec<String>, values: Matrix) -> Self {
        assert_eq!(values.cols(), 4, "dataset needs 4 columns");
        assert_eq!(values.rows(), labels.len(), "one label per row");
        CentralityDataset { labels, values }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn column(&self, metric: Metric) -> Vec<f64> {
        self.values.column(metric.index())
    }

    /// Columns for the given metrics, as an n×k matrix.
    pub fn select(&self, metrics: &[Metric]) -> Matrix {
        let cols: Vec<Vec<f64>> = metrics.iter().map(|&m| self.column(m)).collect();
        Matrix::from_columns(&cols)
    }

    /// Pearson correlation of the four metric columns.
    pub fn correlation_matrix(&self) -> Result<CorrelationMatrix, LinalgError> {
        let names: Vec<&str> = Metric::ALL.iter().map(|m| m.key()).collect();
        linalg::correlation_labeled(&self.values, &names)
    }

    pub fn summary(&self) -> Vec<ColumnSummary> {
        Metric::ALL
            .iter()
            .map(|&m| {
                let col = self.column(m);
                ColumnSummary {
                    metric: m,
                    mean: linalg::mean(&col),
                    sd: linalg::population_sd(&col),
                    min: col.iter().copied().fold(f64::INFINITY, f64::min),
                    max: col.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                }
            })
            .collect()
    }

    /// CSV with header `node,deg,evc,bwc,clc`, values to 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "deg", "evc", "bwc", "clc"])?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut rec = vec![label.clone()];
            rec.extend(self.values.row(i).iter().map(|x| format!("{x:.16e}")));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub metric: Metric,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_labeled_edges([("a", "b"), ("b", "c")])
    }

    fn complete(n: usize) -> Graph {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        Graph::from_index_edges(labels, edges.collect::<Vec<_>>())
    }

    fn star3() -> Graph {
        Graph::from_labeled_edges([("c", "x"), ("c", "y"), ("c", "z")])
    }

    fn cycle(n: usize) -> Graph {
        let labels = (0..n).map(|i| format!("{i:02}")).collect();
        Graph::from_index_edges(labels, (0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_centrality(&path3()), vec![1.0, 2.0, 1.0]);
        assert_eq!(degree_centrality(&complete(4)), vec![3.0; 4]);
        assert_eq!(degree_centrality(&star3()), vec![3.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn eigenvector_examples() {
        let evc = eigenvector_centrality(&complete(4), 1e-10, 1000).unwrap();
        close(&evc, &[0.5; 4], 1e-10);
        let evc = eigenvector_centrality(&path3(), 1e-10, 1000).unwrap();
        close(&evc, &[0.5, std::f64::consts::FRAC_1_SQRT_2, 0.5], 1e-9);
        let evc = eigenvector_centrality(&cycle(5), 1e-10, 1000).unwrap();
        close(&evc, &[1.0 / 5f64.sqrt(); 5], 1e-10);
    }

    #[test]
    fn eigenvector_errors() {
        let empty = Graph::from_index_edges(vec![], Vec::new());
        assert_eq!(
            eigenvector_centrality(&empty, 1e-10, 10),
            Err(CentralityError::EmptyGraph)
        );
        let err = eigenvector_centrality(&path3(), 1e-15, 2).unwrap_err();
        assert!(matches!(
            err,
            CentralityError::NoConvergence { iterations: 2, .. }
        ));
    }

    #[test]
    fn betweenness_examples() {
        assert_eq!(betweenness_centrality(&path3()), vec![0.0, 1.0, 0.0]);
        assert_eq!(betweenness_centrality(&star3()), vec![3.0, 0.0, 0.0, 0.0]);
        close(&betweenness_centrality(&cycle(4)), &[0.5; 4], 1e-12);
    }

    #[test]
    fn closeness_examples() {
        close(
            &closeness_centrality(&path3()).unwrap(),
            &[2.0 / 3.0, 1.0, 2.0 / 3.0],
            1e-15,
        );
        close(
            &closeness_centrality(&complete(4)).unwrap(),
            &[1.0; 4],
            1e-15,
        );
        close(
            &closeness_centrality(&star3()).unwrap(),
            &[1.0, 0.6, 0.6, 0.6],
            1e-15,
        );
    }

    #[test]
    fn closeness_needs_connected() {
        let g = Graph::from_labeled_edges([("a", "b"), ("c", "d")]);
        let err = closeness_centrality(&g).unwrap_err();
        assert_eq!(err, CentralityError::Disconnected);
        assert!(err.to_string().contains("largest connected component"));
    }

    #[test]
    fn dataset_columns() {
        let p5 = Graph::from_labeled_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")]);
        let d = CentralityDataset::compute(&p5, &CentralityOptions::default()).unwrap();
        assert_eq!(d.column(Metric::Deg), vec![1.0, 2.0, 2.0, 2.0, 1.0]);
        assert_eq!(d.column(Metric::Bwc), vec![0.0, 3.0, 4.0, 3.0, 0.0]);

        let c6 = CentralityDataset::compute(&cycle(6), &CentralityOptions::default()).unwrap();
        for m in Metric::ALL {
            let col = c6.column(m);
            assert!(
                col.iter().all(|x| (x - col[0]).abs() < 1e-12),
                "{m} not constant"
            );
        }
        assert!(matches!(
            c6.correlation_matrix(),
            Err(LinalgError::DegenerateColumn { .. })
        ));
    }

    #[test]
    fn dataset_preconditions() {
        let opts = CentralityOptions::default();
        assert_eq!(
            CentralityDataset::compute(&path3(), &opts),
            Err(CentralityError::TooSmall { needed: 5, got: 3 })
        );
        let g = Graph::from_labeled_edges([("a", "b"), ("b", "c"), ("d", "e"), ("e", "f")]);
        assert_eq!(
            CentralityDataset::compute(&g, &opts),
            Err(CentralityError::Disconnected)
        );
    }

    #[test]
    fn csv_layout() {
        let p5 = Graph::from_labeled_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")]);
        let d = CentralityDataset::compute(&p5, &CentralityOptions::default()).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("node,deg,evc,bwc,clc"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "a");
        assert_eq!(first[1], "1.0000000000000000e0");
        assert_eq!(first[1].parse::<f64>().unwrap(), 1.0);
        assert_eq!(text.lines().count(), 6);
    }
}
