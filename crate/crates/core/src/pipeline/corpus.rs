use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{analyze_network, AnalysisConfig, NetworkReport, PipelineError};
use crate::cca::Regime;
use crate::centrality::Metric;
use crate::graph::{generate, read_edge_list, GeneratorSpec, ParseDiagnostics, ParsedGraph};

/// One network to analyze.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    EdgeList(PathBuf),
    Generated(GeneratorSpec),
}

impl Source {
    pub fn name(&self) -> String {
        match self {
            Source::EdgeList(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            Source::Generated(spec) => spec.to_string(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Source::EdgeList(p) => p.display().to_string(),
            Source::Generated(spec) => format!("gen:{spec}"),
        }
    }

    pub fn load(&self) -> Result<ParsedGraph, PipelineError> {
        match self {
            Source::EdgeList(p) => {
                let file = std::fs::File::open(p).map_err(|e| PipelineError::io(p, e))?;
                read_edge_list(std::io::BufReader::new(file)).map_err(|e| PipelineError::Input {
                    source_name: p.display().to_string(),
                    error: e,
                })
            }
            Source::Generated(spec) => generate(spec)
                .map(|graph| ParsedGraph {
                    graph,
                    diagnostics: ParseDiagnostics::default(),
                })
                .map_err(|e| PipelineError::Input {
                    source_name: self.describe(),
                    error: e,
                }),
        }
    }
}

/// Parses a corpus manifest: one source per line, either an edge-list path
/// (relative paths resolve against `base_dir`) or
/// `gen:<model>:<params>[:<seed>]`. A generator line without a seed gets
/// `default_seed + line_index`. Blank lines and `#` comments are skipped.
pub fn parse_manifest(
    text: &str,
    base_dir: &Path,
    default_seed: u64,
) -> Result<Vec<Source>, PipelineError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| PipelineError::Manifest {
            line: idx + 1,
            message: msg,
        };
        if let Some(rest) = line.strip_prefix("gen:") {
            let full = if rest.matches(':').count() == 1 {
                format!("{rest}:{}", default_seed.wrapping_add(idx as u64))
            } else {
                rest.to_string()
            };
            let spec: GeneratorSpec = full
                .parse()
                .map_err(|e: crate::graph::GraphError| bad(e.to_string()))?;
            out.push(Source::Generated(spec));
        } else {
            let p = Path::new(line);
            out.push(Source::EdgeList(if p.is_absolute() {
                p.to_path_buf()
            } else {
                base_dir.join(p)
            }));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedNetwork {
    pub name: String,
    pub source: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCcc {
    pub name: String,
    pub ccc: f64,
}

/// Regime × factor-count counts. `unavailable` collects networks without a
/// CCA result; `unmodeled` networks without a factor model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContingencyRow {
    pub regime: String,
    pub m1: usize,
    pub m2: usize,
    pub m3: usize,
    pub unmodeled: usize,
}

impl ContingencyRow {
    pub fn total(&self) -> usize {
        self.m1 + self.m2 + self.m3 + self.unmodeled
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PairTallies {
    /// Networks with a factor model.
    pub modeled: usize,
    pub deg_evc_same_factor: usize,
    pub bwc_clc_same_factor: usize,
}

pub const CCC_SIGN_CONVENTION: &str =
    "signed CCC with the first weight of each set oriented nonnegative; negative values depend on this convention";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub config: AnalysisConfig,
    pub ccc_convention: String,
    pub networks: Vec<NetworkReport>,
    pub failures: Vec<FailedNetwork>,
    /// Descending by CCC; ties keep manifest order.
    pub ccc_ranking: Vec<RankedCcc>,
    pub contingency: Vec<ContingencyRow>,
    /// Per metric, how many modeled networks map it to each factor set
    /// (e.g. "1", "2", "1;2").
    pub dominant_tallies: BTreeMap<Metric, BTreeMap<String, usize>>,
    pub pair_tallies: PairTallies,
}

impl CorpusReport {
    /// Aggregates reports in the given order.
    pub fn from_reports(
        networks: Vec<NetworkReport>,
        failures: Vec<FailedNetwork>,
        cfg: &AnalysisConfig,
    ) -> Self {
        let mut ccc_ranking: Vec<RankedCcc> = networks
            .iter()
            .filter_map(|r| {
                r.ccc().map(|ccc| RankedCcc {
                    name: r.name.clone(),
                    ccc,
                })
            })
            .collect();
        ccc_ranking.sort_by(|a, b| b.ccc.total_cmp(&a.ccc));

        let mut contingency: Vec<ContingencyRow> = Regime::ALL
            .iter()
            .map(|r| r.to_string())
            .chain(std::iter::once("Unavailable".to_string()))
            .map(|regime| ContingencyRow {
                regime,
                m1: 0,
                m2: 0,
                m3: 0,
                unmodeled: 0,
            })
            .collect();
        let mut dominant_tallies: BTreeMap<Metric, BTreeMap<String, usize>> =
            Metric::ALL.iter().map(|&m| (m, BTreeMap::new())).collect();
        let mut pair_tallies = PairTallies::default();

        for r in &networks {
            let row = match &r.cca {
                Some(c) => Regime::ALL.iter().position(|&g| g == c.regime).unwrap(),
                None => Regime::ALL.len(),
            };
            let cell = &mut contingency[row];
            match r.factor_count() {
                Some(1) => cell.m1 += 1,
                Some(2) => cell.m2 += 1,
                Some(3) => cell.m3 += 1,
                _ => cell.unmodeled += 1,
            }
            if let Some(model) = &r.factor_model {
                pair_tallies.modeled += 1;
                if model.share_factor(Metric::Deg, Metric::Evc) {
                    pair_tallies.deg_evc_same_factor += 1;
                }
                if model.share_factor(Metric::Bwc, Metric::Clc) {
                    pair_tallies.bwc_clc_same_factor += 1;
                }
                for (metric, factors) in &model.dominant {
                    let key = factors
                        .iter()
                        .map(|f| f.to_string())
                        .collect::<Vec<_>>()
                        .join(";");
                    *dominant_tallies
                        .entry(*metric)
                        .or_default()
                        .entry(key)
                        .or_default() += 1;
                }
            }
        }

        CorpusReport {
            config: cfg.clone(),
            ccc_convention: CCC_SIGN_CONVENTION.to_string(),
            networks,
            failures,
            ccc_ranking,
            contingency,
            dominant_tallies,
            pair_tallies,
        }
    }

    /// Indices into `networks` in plotting order: descending CCC, then
    /// networks without a CCC in manifest order.
    pub fn plot_order(&self) -> Vec<usize> {
        let mut with: Vec<usize> = (0..self.networks.len())
            .filter(|&i| self.networks[i].cca.is_some())
            .collect();
        with.sort_by(|&a, &b| {
            let (x, y) = (
                self.networks[a].ccc().unwrap(),
                self.networks[b].ccc().unwrap(),
            );
            y.total_cmp(&x).then(a.cmp(&b))
        });
        with.extend((0..self.networks.len()).filter(|&i| self.networks[i].cca.is_none()));
        with
    }

    pub fn modeled_count(&self) -> usize {
        self.pair_tallies.modeled
    }
}

/// Loads and analyzes every source, `workers` at a time (0 = one per core),
/// and aggregates in source order.
pub fn run_corpus(
    sources: &[Source],
    cfg: &AnalysisConfig,
    workers: usize,
) -> Result<CorpusReport, PipelineError> {
    cfg.validate()?;
    if sources.is_empty() {
        return Err(PipelineError::Config(
            "corpus needs at least one source".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| PipelineError::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<NetworkReport, FailedNetwork>> = pool.install(|| {
        sources
            .par_iter()
            .map(|src| {
                let name = src.name();
                let source = src.describe();
                src.load()
                    .and_then(|p| analyze_network(&name, &source, &p.graph, p.diagnostics, cfg))
                    .map_err(|e| FailedNetwork {
                        name: name.clone(),
                        source: source.clone(),
                        error: e.to_string(),
                    })
            })
            .collect()
    });

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => reports.push(r),
            Err(f) => failures.push(f),
        }
    }
    Ok(CorpusReport::from_reports(reports, failures, cfg))
}
