use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::centrality::{CentralityOptions, DEFAULT_EVC_MAX_ITER, DEFAULT_EVC_TOL};
use crate::efa::{FitOptions, VarimaxOptions, DEFAULT_TIE_TOL};

/// What to do with a disconnected input graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LccPolicy {
    /// Analyze the largest connected component.
    #[default]
    Extract,
    /// Refuse disconnected graphs.
    Error,
}

impl std::str::FromStr for LccPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "extract" => Ok(LccPolicy::Extract),
            "error" => Ok(LccPolicy::Error),
            _ => Err(format!(
                "unknown lcc policy {s:?} (expected extract or error)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub communality_threshold: f64,
    pub variance_threshold: f64,
    pub strong_threshold: f64,
    pub kaiser_normalize: bool,
    pub tie_tol: f64,
    pub evc_tol: f64,
    pub evc_max_iter: usize,
    pub varimax_tol: f64,
    pub varimax_max_sweeps: usize,
    pub lcc_policy: LccPolicy,
    /// Seed for generator sources that do not name their own.
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            communality_threshold: 0.98,
            variance_threshold: 0.99,
            strong_threshold: crate::cca::DEFAULT_STRONG_THRESHOLD,
            kaiser_normalize: false,
            tie_tol: DEFAULT_TIE_TOL,
            evc_tol: DEFAULT_EVC_TOL,
            evc_max_iter: DEFAULT_EVC_MAX_ITER,
            varimax_tol: 1e-10,
            varimax_max_sweeps: 500,
            lcc_policy: LccPolicy::Extract,
            seed: 0,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |msg: String| Err(PipelineError::Config(msg));
        for (name, v) in [
            ("communality_threshold", self.communality_threshold),
            ("variance_threshold", self.variance_threshold),
            ("strong_threshold", self.strong_threshold),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return bad(format!("{name} = {v} must lie in (0, 1]"));
            }
        }
        for (name, v) in [
            ("tie_tol", self.tie_tol),
            ("evc_tol", self.evc_tol),
            ("varimax_tol", self.varimax_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} = {v} must be positive"));
            }
        }
        if self.evc_max_iter == 0 || self.varimax_max_sweeps == 0 {
            return bad("iteration limits must be at least 1".into());
        }
        Ok(())
    }

    /// Parses a TOML document; absent keys keep their defaults.
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let cfg: AnalysisConfig =
            toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_file(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn centrality_options(&self) -> CentralityOptions {
        CentralityOptions {
            evc_tol: self.evc_tol,
            evc_max_iter: self.evc_max_iter,
        }
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions {
            communality_threshold: self.communality_threshold,
            variance_threshold: self.variance_threshold,
            max_factors: 3,
            tie_tol: self.tie_tol,
            varimax: VarimaxOptions {
                tol: self.varimax_tol,
                max_sweeps: self.varimax_max_sweeps,
                kaiser_normalize: self.kaiser_normalize,
            },
        }
    }
}
