use serde::{Deserialize, Serialize};

use super::{AnalysisConfig, LccPolicy, PipelineError};
use crate::cca::{self, CcaResult};
use crate::centrality::{CentralityDataset, ColumnSummary, Metric};
use crate::efa::{self, FactorModel};
use crate::graph::{connected_components, largest_connected_component, Graph, ParseDiagnostics};
use crate::linalg::{self, CorrelationMatrix, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Centrality,
    Correlation,
    Eigen,
    Cca,
    FactorModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: Stage,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
    pub input_nodes: usize,
    pub input_edges: usize,
    pub lcc_nodes_removed: usize,
    pub warnings: Vec<String>,
}

/// Everything computed for one network. Later stages are `None` when an
/// earlier one failed; the failure is listed in `errors`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkReport {
    pub name: String,
    pub source: String,
    pub nodes: usize,
    pub edges: usize,
    pub centrality: Option<Vec<ColumnSummary>>,
    pub correlation: Option<Vec<Vec<f64>>>,
    pub eigenvalues: Option<Vec<f64>>,
    pub cca: Option<CcaResult>,
    pub factor_model: Option<FactorModel>,
    pub diagnostics: Diagnostics,
    pub errors: Vec<StageError>,
}

impl NetworkReport {
    pub fn ccc(&self) -> Option<f64> {
        self.cca.as_ref().map(|c| c.ccc)
    }

    pub fn factor_count(&self) -> Option<usize> {
        self.factor_model.as_ref().map(|f| f.m)
    }
}

/// A report plus the per-vertex dataset it was computed from.
#[derive(Debug, Clone)]
pub struct NetworkAnalysis {
    pub report: NetworkReport,
    pub dataset: Option<CentralityDataset>,
}

pub fn analyze_network(
    name: &str,
    source: &str,
    graph: &Graph,
    parse: ParseDiagnostics,
    cfg: &AnalysisConfig,
) -> Result<NetworkReport, PipelineError> {
    analyze_network_detailed(name, source, graph, parse, cfg).map(|a| a.report)
}

/// Runs every stage: LCC extraction, centralities, correlation, eigenpairs,
/// CCA and the factor model. Only an empty graph or a disconnected graph
/// under [`LccPolicy::Error`] aborts; stage failures go into the report.
pub fn analyze_network_detailed(
    name: &str,
    source: &str,
    graph: &Graph,
    parse: ParseDiagnostics,
    cfg: &AnalysisConfig,
) -> Result<NetworkAnalysis, PipelineError> {
    cfg.validate()?;
    if graph.node_count() == 0 {
        return Err(PipelineError::EmptyGraph(name.to_string()));
    }
    let mut diagnostics = Diagnostics {
        self_loops_dropped: parse.self_loops_dropped,
        duplicates_collapsed: parse.duplicates_collapsed,
        input_nodes: graph.node_count(),
        input_edges: graph.edge_count(),
        ..Default::default()
    };

    let components = connected_components(graph).len();
    let lcc;
    let g = if components > 1 {
        if cfg.lcc_policy == LccPolicy::Error {
            return Err(PipelineError::Disconnected {
                name: name.to_string(),
                components,
            });
        }
        lcc = largest_connected_component(graph);
        diagnostics.lcc_nodes_removed = graph.node_count() - lcc.node_count();
        diagnostics.warnings.push(format!(
            "graph has {components} components; analyzed the largest ({} of {} nodes)",
            lcc.node_count(),
            graph.node_count()
        ));
        &lcc
    } else {
        graph
    };

    let mut report = NetworkReport {
        name: name.to_string(),
        source: source.to_string(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        centrality: None,
        correlation: None,
        eigenvalues: None,
        cca: None,
        factor_model: None,
        diagnostics,
        errors: Vec::new(),
    };
    match CentralityDataset::compute(g, &cfg.centrality_options()) {
        Ok(dataset) => {
            analyze_centralities(&mut report, &dataset, cfg);
            Ok(NetworkAnalysis {
                report,
                dataset: Some(dataset),
            })
        }
        Err(e) => {
            fail(&mut report, Stage::Centrality, &e);
            Ok(NetworkAnalysis {
                report,
                dataset: None,
            })
        }
    }
}

fn fail(report: &mut NetworkReport, stage: Stage, err: &dyn std::fmt::Display) {
    report.errors.push(StageError {
        stage,
        message: err.to_string(),
    });
}

/// Runs the stages after centrality computation (CCA, correlation,
/// eigenpairs, factor model) and fills them into `report`.
pub fn analyze_centralities(
    report: &mut NetworkReport,
    dataset: &CentralityDataset,
    cfg: &AnalysisConfig,
) {
    report.centrality = Some(dataset.summary());

    match neighborhood_vs_shortest_path(dataset, cfg.strong_threshold) {
        Ok(c) => report.cca = Some(c),
        Err(e) => fail(report, Stage::Cca, &e),
    }

    let correlation = match dataset.correlation_matrix() {
        Ok(c) => c,
        Err(e) => return fail(report, Stage::Correlation, &e),
    };
    report.correlation = Some(correlation.matrix().to_rows());

    let eigen = match linalg::jacobi_eigen(correlation.matrix(), linalg::DEFAULT_JACOBI_TOL) {
        Ok(e) => e,
        Err(e) => return fail(report, Stage::Eigen, &e),
    };
    report.eigenvalues = Some(eigen.eigenvalues.clone());

    match efa::fit_from_eigen(&eigen, &cfg.fit_options()) {
        Ok(model) => {
            report
                .diagnostics
                .warnings
                .extend(model.warnings.iter().cloned());
            report.factor_model = Some(model);
        }
        Err(e) => fail(report, Stage::FactorModel, &e),
    }
}

impl NetworkReport {
    /// An empty report for a dataset that did not come from a graph.
    pub fn for_dataset(name: &str, dataset: &CentralityDataset) -> Self {
        NetworkReport {
            name: name.to_string(),
            source: "dataset".to_string(),
            nodes: dataset.len(),
            edges: 0,
            centrality: None,
            correlation: None,
            eigenvalues: None,
            cca: None,
            factor_model: None,
            diagnostics: Diagnostics {
                input_nodes: dataset.len(),
                ..Default::default()
            },
            errors: Vec::new(),
        }
    }
}

/// CCA of (DEG, EVC) against (BWC, CLC).
pub fn neighborhood_vs_shortest_path(
    dataset: &CentralityDataset,
    strong_threshold: f64,
) -> Result<CcaResult, cca::CcaError> {
    let x = dataset.select(&[Metric::Deg, Metric::Evc]);
    let y = dataset.select(&[Metric::Bwc, Metric::Clc]);
    cca::cca_first_labeled(&x, &y, ["deg", "evc"], ["bwc", "clc"], strong_threshold)
}

/// Checks that every matrix and per-metric vector in `r` has the expected
/// dimensions.
pub(crate) fn check_shapes(r: &NetworkReport) -> Result<(), String> {
    let p = Metric::ALL.len();
    let square =
        |rows: &[Vec<f64>], n: usize| rows.len() == n && rows.iter().all(|row| row.len() == n);
    if let Some(rows) = &r.correlation {
        if !square(rows, p) {
            return Err(format!("{}: correlation matrix is not {p}x{p}", r.name));
        }
    }
    if let Some(ev) = &r.eigenvalues {
        if ev.len() != p {
            return Err(format!(
                "{}: expected {p} eigenvalues, got {}",
                r.name,
                ev.len()
            ));
        }
    }
    if let Some(c) = &r.centrality {
        if c.len() != p {
            return Err(format!(
                "{}: expected {p} centrality summaries, got {}",
                r.name,
                c.len()
            ));
        }
    }
    if let Some(f) = &r.factor_model {
        let rows_ok = f.loadings.len() == p && f.loadings.iter().all(|row| row.len() == f.m);
        if f.m == 0 || !rows_ok || f.communalities.len() != p || !square(&f.rotation, f.m) {
            return Err(format!(
                "{}: factor model dimensions inconsistent with m = {}",
                r.name, f.m
            ));
        }
    }
    Ok(())
}

/// Checks the invariants a finished report must satisfy. Returns every
/// violation found.
pub fn validate_report(r: &NetworkReport, cfg: &AnalysisConfig) -> Result<(), Vec<String>> {
    if let Err(e) = check_shapes(r) {
        return Err(vec![e]);
    }
    let mut problems = Vec::new();
    if let Some(rows) = &r.correlation {
        match CorrelationMatrix::new(Matrix::from_rows(rows)) {
            Ok(c) => {
                if let Err(e) = c.validate() {
                    problems.push(format!("correlation: {e}"));
                }
            }
            Err(e) => problems.push(format!("correlation: {e}")),
        }
    }
    if let Some(ev) = &r.eigenvalues {
        let sum: f64 = ev.iter().sum();
        if (sum - Metric::ALL.len() as f64).abs() > 1e-9 {
            problems.push(format!("eigenvalues sum to {sum}, expected 4"));
        }
        if ev.windows(2).any(|w| w[0] < w[1]) {
            problems.push("eigenvalues not sorted descending".into());
        }
    }
    if let Some(c) = &r.cca {
        if let Err(e) = c.validate(cfg.strong_threshold) {
            problems.push(format!("cca: {e}"));
        }
    }
    if let Some(f) = &r.factor_model {
        if let Err(e) = f.validate(cfg.communality_threshold) {
            problems.push(format!("factor model: {e}"));
        }
        if let Some(ev) = &r.eigenvalues {
            let explained: f64 = ev.iter().take(f.m).map(|l| l.max(0.0)).sum();
            let total: f64 = f.communalities.iter().sum();
            if (explained - total).abs() > 1e-9 {
                problems.push(format!(
                    "communalities sum {total} != leading eigenvalues {explained}"
                ));
            }
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}
