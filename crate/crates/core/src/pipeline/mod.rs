//! Per-network orchestration, corpus runs, report serialization and plots.

mod analyze;
mod config;
mod corpus;
mod emit;
mod svg;

use std::path::Path;

use thiserror::Error;

use crate::graph::GraphError;

pub use analyze::{
    analyze_centralities, analyze_network, analyze_network_detailed, neighborhood_vs_shortest_path,
    validate_report, Diagnostics, NetworkAnalysis, NetworkReport, Stage, StageError,
};
pub use config::{AnalysisConfig, LccPolicy};
pub use corpus::{
    parse_manifest, run_corpus, ContingencyRow, CorpusReport, FailedNetwork, PairTallies,
    RankedCcc, Source, CCC_SIGN_CONVENTION,
};
pub use emit::{
    corpus_json, emit_plots, emit_reports, load_corpus_json, summary_csv, Format, REPORT_JSON,
    SUMMARY_CSV,
};
pub use svg::{plot_ccc_distribution, plot_factor_loadings};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{source_name}: {error}")]
    Input {
        source_name: String,
        error: GraphError,
    },
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("{0}: graph has no nodes")]
    EmptyGraph(String),
    #[error("{name}: graph has {components} connected components and lcc_policy is 'error'")]
    Disconnected { name: String, components: usize },
    #[error("malformed report: {0}")]
    Report(String),
}

impl PipelineError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        PipelineError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
