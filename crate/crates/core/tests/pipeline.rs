mod common;

use std::path::Path;

use centrafactor::cca::{CcaResult, Regime};
use centrafactor::centrality::{CentralityDataset, Metric};
use centrafactor::graph::{parse_edge_list, GeneratorSpec, Graph, ParseDiagnostics};
use centrafactor::linalg::{correlation_matrix, jacobi_eigen, standardize_columns, Matrix};
use centrafactor::pipeline::{
    analyze_centralities, analyze_network, corpus_json, emit_plots, emit_reports, load_corpus_json,
    parse_manifest, plot_ccc_distribution, plot_factor_loadings, run_corpus, summary_csv,
    validate_report, AnalysisConfig, CorpusReport, Format, LccPolicy, NetworkReport, PipelineError,
    Source, Stage,
};
use common::*;

fn cycle(n: usize) -> Graph {
    Graph::from_index_edges(
        (0..n).map(|i| format!("{i:02}")).collect(),
        (0..n).map(|i| (i, (i + 1) % n)),
    )
}

fn analyze(g: &Graph) -> NetworkReport {
    analyze_network(
        "net",
        "test",
        g,
        ParseDiagnostics::default(),
        &AnalysisConfig::default(),
    )
    .unwrap()
}

fn cholesky(a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum();
            l[(i, j)] = if i == j {
                (a[(i, i)] - s).sqrt()
            } else {
                (a[(i, j)] - s) / l[(j, j)]
            };
        }
    }
    l
}

fn solve_upper_right(b: &Matrix, l: &Matrix) -> Matrix {
    // Returns b · L⁻ᵀ for lower-triangular L.
    let mut out = Matrix::zeros(b.rows(), b.cols());
    for r in 0..b.rows() {
        for i in 0..l.rows() {
            let s: f64 = (0..i).map(|k| l[(i, k)] * out[(r, k)]).sum();
            out[(r, i)] = (b[(r, i)] - s) / l[(i, i)];
        }
    }
    out
}

/// Data whose sample correlation is exactly `target`.
fn data_with_correlation(target: &Matrix, rows: usize, seed: u64) -> Matrix {
    let mut rng = rng(seed);
    let z = standardize_columns(&normal_matrix(&mut rng, rows, target.rows())).unwrap();
    let white = solve_upper_right(&z, &cholesky(correlation_matrix(&z).unwrap().matrix()));
    white.matmul(&cholesky(target).transpose())
}

/// Two-factor correlation structure built from the toy eigenpairs (with the
/// BWC sign of the second vector flipped so the vectors are orthogonal):
/// C = L Lᵀ + diag(1 − h²).
fn toy_correlation() -> Matrix {
    let v = [
        [0.5256, -0.0411],
        [0.4706, -0.7328],
        [0.4793, 0.6741],
        [0.5220, 0.0831],
    ];
    let s = [3.5950f64.sqrt(), 0.3784f64.sqrt()];
    let l = Matrix::from_rows(&v.map(|r| [r[0] * s[0], r[1] * s[1]]));
    let mut c = l.matmul(&l.transpose());
    for i in 0..4 {
        c[(i, i)] = 1.0;
    }
    c
}

#[test]
fn cycle_has_degenerate_columns_and_no_model() {
    let r = analyze(&cycle(10));
    assert!(r.factor_model.is_none() && r.cca.is_none() && r.correlation.is_none());
    let stages: Vec<Stage> = r.errors.iter().map(|e| e.stage).collect();
    assert_eq!(stages, vec![Stage::Cca, Stage::Correlation]);
    assert!(
        r.errors[1].message.contains("deg"),
        "{}",
        r.errors[1].message
    );
    let summary = r.centrality.as_ref().unwrap();
    assert!(
        summary.iter().all(|c| c.sd < 1e-12 * c.max.abs().max(1.0)),
        "{summary:?}"
    );
    validate_report(&r, &AnalysisConfig::default()).unwrap();
}

#[test]
fn toy_structure_fits_two_factors() {
    let target = toy_correlation();
    let data = data_with_correlation(&target, 200, 1);
    let got = correlation_matrix(&data).unwrap();
    assert!(got.matrix().max_abs_diff(&target) < 1e-10);

    let e = jacobi_eigen(&target, 1e-12).unwrap();
    assert!((e.eigenvalues[0] + e.eigenvalues[1]) / 4.0 > 0.99);

    let dataset =
        CentralityDataset::from_parts((0..200).map(|i| format!("{i:03}")).collect(), data);
    let cfg = AnalysisConfig::default();
    let mut report = NetworkReport::for_dataset("toy", &dataset);
    analyze_centralities(&mut report, &dataset, &cfg);
    assert!(report.errors.is_empty(), "{:?}", report.errors);
    let model = report.factor_model.as_ref().unwrap();
    assert_eq!(model.m, 2);
    assert_eq!(model.variance_retention_m, 2);
    assert!(model.min_communality() >= 0.98);
    assert!(model.share_factor(Metric::Deg, Metric::Bwc));
    assert!(model.share_factor(Metric::Deg, Metric::Clc));
    assert!(!model.share_factor(Metric::Deg, Metric::Evc));
    assert!(report.cca.is_some());
    validate_report(&report, &cfg).unwrap();
}

#[test]
fn scale_free_network_is_fully_reported() {
    let spec: GeneratorSpec = "scale-free:n=200,m=2:7".parse().unwrap();
    let g = centrafactor::graph::generate(&spec).unwrap();
    let r = analyze(&g);
    assert!(r.errors.is_empty(), "{:?}", r.errors);
    assert_eq!(r.nodes, 200);
    assert_eq!(r.eigenvalues.as_ref().unwrap().len(), 4);
    validate_report(&r, &AnalysisConfig::default()).unwrap();
}

#[test]
fn lcc_policy() {
    let text = "a b\nb c\nc d\nd e\ne a\na c\nx y\n";
    let g = parse_edge_list(text).unwrap().graph;
    let r = analyze(&g);
    assert_eq!(r.nodes, 5);
    assert_eq!(r.diagnostics.lcc_nodes_removed, 2);
    assert_eq!(r.diagnostics.warnings.len(), 1);

    let cfg = AnalysisConfig {
        lcc_policy: LccPolicy::Error,
        ..Default::default()
    };
    let err = analyze_network("net", "test", &g, ParseDiagnostics::default(), &cfg).unwrap_err();
    assert!(matches!(
        err,
        PipelineError::Disconnected { components: 2, .. }
    ));
}

#[test]
fn small_graph_embeds_centrality_error() {
    let g = parse_edge_list("a b\nb c\n").unwrap().graph;
    let r = analyze(&g);
    assert_eq!(r.errors.len(), 1);
    assert_eq!(r.errors[0].stage, Stage::Centrality);
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn corpus_mixes_files_generators_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "wheel.txt",
        "h a\nh b\nh c\nh d\nh e\na b\nb c\nc d\nd e\ne a\na x\n",
    );
    write(dir.path(), "bad.txt", "a b c\n");
    let manifest = "# corpus\nwheel.txt\nbad.txt\nmissing.txt\ngen:random:n=60,p=0.1\ngen:scale-free:n=80,m=2:3\n";
    let sources = parse_manifest(manifest, dir.path(), 100).unwrap();
    assert_eq!(sources.len(), 5);
    match &sources[3] {
        Source::Generated(spec) => assert_eq!(spec.seed, 104),
        other => panic!("{other:?}"),
    }
    let report = run_corpus(&sources, &AnalysisConfig::default(), 2).unwrap();
    let names: Vec<&str> = report.networks.iter().map(|n| n.name.as_str()).collect();
    assert_eq!(
        names,
        vec!["wheel", "random:n=60,p=0.1:104", "scale-free:n=80,m=2:3"]
    );
    let failed: Vec<&str> = report.failures.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(failed, vec!["bad", "missing"]);
    let total: usize = report.contingency.iter().map(|r| r.total()).sum();
    assert_eq!(total, 3);
}

#[test]
fn manifest_errors_carry_line_numbers() {
    match parse_manifest("ok.txt\n\ngen:ring:n=5\n", Path::new("."), 0) {
        Err(PipelineError::Manifest { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

fn corpus() -> CorpusReport {
    let sources: Vec<Source> = [
        "random:n=60,p=0.12:1",
        "scale-free:n=70,m=2:2",
        "small-world:n=60,k=4,beta=0.2:3",
    ]
    .iter()
    .map(|s| Source::Generated(s.parse().unwrap()))
    .collect();
    run_corpus(&sources, &AnalysisConfig::default(), 1).unwrap()
}

#[test]
fn json_round_trip_and_csv_rows() {
    let report = corpus();
    let json = corpus_json(&report);
    assert_eq!(load_corpus_json(&json).unwrap(), report);
    let csv = summary_csv(&report);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[0],
        "name,n,m_edges,ccc,regime,factor_count,deg,evc,bwc,clc,min_communality"
    );

    let dir = tempfile::tempdir().unwrap();
    let files = emit_reports(&report, dir.path(), &[Format::Json, Format::Csv]).unwrap();
    assert_eq!(files.len(), 2);
    assert!(load_corpus_json("{}").is_err());
}

#[test]
fn empty_report_outputs() {
    let empty = CorpusReport::from_reports(Vec::new(), Vec::new(), &AnalysisConfig::default());
    assert_eq!(summary_csv(&empty).lines().count(), 1);
    let svg = plot_ccc_distribution(&empty);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(
        doc.descendants()
            .filter(|n| n.has_tag_name("circle"))
            .count(),
        0
    );
    for (_, svg) in plot_factor_loadings(&empty) {
        roxmltree::Document::parse(&svg).unwrap();
    }
}

fn with_ccc(name: &str, ccc: f64) -> NetworkReport {
    let dataset = CentralityDataset::from_parts(vec!["a".into()], Matrix::zeros(1, 4));
    let mut r = NetworkReport::for_dataset(name, &dataset);
    r.cca = Some(CcaResult {
        ccc,
        weights_x: [1.0, 0.0],
        weights_y: [1.0, 0.0],
        regime: Regime::WeakModerate,
    });
    r
}

fn marker_titles(svg: &str, group: &str) -> Vec<String> {
    let doc = roxmltree::Document::parse(svg).unwrap();
    let g = doc
        .descendants()
        .find(|n| n.attribute("class") == Some(group))
        .unwrap();
    g.descendants()
        .filter(|n| n.has_tag_name("title"))
        .map(|n| n.text().unwrap().to_string())
        .collect()
}

#[test]
fn ccc_markers_sorted_descending() {
    let networks = vec![with_ccc("a", 0.9), with_ccc("b", -0.9), with_ccc("c", 0.3)];
    let report = CorpusReport::from_reports(networks, Vec::new(), &AnalysisConfig::default());
    let titles = marker_titles(&plot_ccc_distribution(&report), "ccc-markers");
    assert_eq!(titles, vec!["a: 0.9000", "c: 0.3000", "b: -0.9000"]);
}

#[test]
fn loading_markers_use_final_loadings() {
    let mut r = corpus().networks.remove(1);
    let model = r.factor_model.as_mut().expect("scale-free network modeled");
    model.loadings[Metric::Deg.index()] = vec![0.73, 0.679, 0.0][..model.m].to_vec();
    let report = CorpusReport::from_reports(vec![r], Vec::new(), &AnalysisConfig::default());
    let deg = &plot_factor_loadings(&report)[0];
    assert_eq!(deg.0, Metric::Deg);
    let f1 = marker_titles(&deg.1, "factor-1");
    let f2 = marker_titles(&deg.1, "factor-2");
    assert!(f1[0].ends_with("Factor-1 = 0.7300"), "{f1:?}");
    assert!(f2[0].ends_with("Factor-2 = 0.6790"), "{f2:?}");
}

#[test]
fn plots_share_network_order() {
    let report = corpus();
    let dir = tempfile::tempdir().unwrap();
    let files = emit_plots(&report, dir.path()).unwrap();
    assert_eq!(files.len(), 5);
    let order: Vec<String> = marker_titles(&plot_ccc_distribution(&report), "ccc-markers")
        .iter()
        .map(|t| t.split(": ").next().unwrap().to_string())
        .collect();
    for (_, svg) in plot_factor_loadings(&report) {
        let names: Vec<String> = marker_titles(&svg, "factor-1")
            .iter()
            .map(|t| t.split(": ").next().unwrap().to_string())
            .collect();
        let modeled: Vec<&String> = order.iter().filter(|n| names.contains(n)).collect();
        assert_eq!(names.iter().collect::<Vec<_>>(), modeled);
    }
}

#[test]
fn config_from_toml() {
    let cfg = AnalysisConfig::from_toml("communality_threshold = 0.95\nlcc_policy = \"error\"\n")
        .unwrap();
    assert_eq!(cfg.communality_threshold, 0.95);
    assert_eq!(cfg.lcc_policy, LccPolicy::Error);
    assert_eq!(cfg.strong_threshold, 0.79);
    assert!(AnalysisConfig::from_toml("bogus = 1\n").is_err());
    assert!(AnalysisConfig::from_toml("communality_threshold = 1.5\n").is_err());
}

#[test]
fn load_rejects_misshapen_matrices() {
    let report = corpus();
    let mut value: serde_json::Value = serde_json::from_str(&corpus_json(&report)).unwrap();
    value["networks"][0]["correlation"][1]
        .as_array_mut()
        .unwrap()
        .pop();
    let err = load_corpus_json(&value.to_string()).unwrap_err();
    assert!(matches!(err, PipelineError::Report(_)), "{err}");
}
