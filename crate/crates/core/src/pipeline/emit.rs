use std::path::{Path, PathBuf};

use super::{plot_ccc_distribution, plot_factor_loadings, CorpusReport, PipelineError};
use crate::centrality::Metric;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub const REPORT_JSON: &str = "report.json";
pub const SUMMARY_CSV: &str = "summary.csv";

pub fn corpus_json(r: &CorpusReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

/// Parses a `report.json` and checks that every matrix has the right shape.
pub fn load_corpus_json(text: &str) -> Result<CorpusReport, PipelineError> {
    let report: CorpusReport =
        serde_json::from_str(text).map_err(|e| PipelineError::Report(e.to_string()))?;
    for net in &report.networks {
        super::analyze::check_shapes(net).map_err(PipelineError::Report)?;
    }
    Ok(report)
}

/// One row per analyzed network.
pub fn summary_csv(r: &CorpusReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["name", "n", "m_edges", "ccc", "regime", "factor_count"];
    header.extend(Metric::ALL.iter().map(|m| m.key()));
    header.push("min_communality");
    w.write_record(&header).expect("in-memory write");
    for net in &r.networks {
        let mut rec = vec![
            net.name.clone(),
            net.nodes.to_string(),
            net.edges.to_string(),
            net.cca
                .as_ref()
                .map(|c| c.ccc.to_string())
                .unwrap_or_default(),
            net.cca
                .as_ref()
                .map(|c| c.regime.to_string())
                .unwrap_or_default(),
            net.factor_count()
                .map(|m| m.to_string())
                .unwrap_or_default(),
        ];
        for metric in Metric::ALL {
            rec.push(
                net.factor_model
                    .as_ref()
                    .and_then(|f| f.dominant.get(&metric))
                    .map(|fs| {
                        fs.iter()
                            .map(|f| f.to_string())
                            .collect::<Vec<_>>()
                            .join(";")
                    })
                    .unwrap_or_default(),
            );
        }
        rec.push(
            net.factor_model
                .as_ref()
                .map(|f| f.min_communality().to_string())
                .unwrap_or_default(),
        );
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf, PipelineError> {
    std::fs::write(&path, contents).map_err(|e| PipelineError::io(&path, e))?;
    Ok(path)
}

/// Writes `report.json` and/or `summary.csv` into `out_dir`.
pub fn emit_reports(
    r: &CorpusReport,
    out_dir: &Path,
    formats: &[Format],
) -> Result<Vec<PathBuf>, PipelineError> {
    std::fs::create_dir_all(out_dir).map_err(|e| PipelineError::io(out_dir, e))?;
    let mut written = Vec::new();
    for f in formats {
        match f {
            Format::Json => written.push(write(out_dir.join(REPORT_JSON), &corpus_json(r))?),
            Format::Csv => written.push(write(out_dir.join(SUMMARY_CSV), &summary_csv(r))?),
        }
    }
    Ok(written)
}

/// Writes `ccc_distribution.svg` and `loadings_<metric>.svg`.
pub fn emit_plots(r: &CorpusReport, out_dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    std::fs::create_dir_all(out_dir).map_err(|e| PipelineError::io(out_dir, e))?;
    let mut written = vec![write(
        out_dir.join("ccc_distribution.svg"),
        &plot_ccc_distribution(r),
    )?];
    for (metric, svg) in plot_factor_loadings(r) {
        written.push(write(
            out_dir.join(format!("loadings_{}.svg", metric.key())),
            &svg,
        )?);
    }
    Ok(written)
}
