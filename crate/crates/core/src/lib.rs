//! Centrality metrics, exploratory factor analysis and canonical correlation
//! analysis for simple undirected graphs.
//!
//! The per-network analysis computes degree (DEG), eigenvector (EVC),
//! betweenness (BWC) and closeness (CLC) centrality, correlates the four
//! metrics, fits a 1–3 factor Varimax-rotated model, and measures the first
//! canonical correlation between (DEG, EVC) and (BWC, CLC).

pub mod cca;
pub mod centrality;
pub mod efa;
pub mod graph;
pub mod linalg;
pub mod pipeline;

pub use cca::{cca_first, classify_regime, CcaError, CcaResult, Regime};
pub use centrality::{CentralityDataset, CentralityError, CentralityOptions, Metric};
pub use efa::{fit_factor_model, EfaError, FactorModel, FitOptions, LoadingMatrix};
pub use graph::{GeneratorModel, GeneratorSpec, Graph, GraphError};
pub use linalg::{CorrelationMatrix, EigenDecomposition, LinalgError, Matrix};
