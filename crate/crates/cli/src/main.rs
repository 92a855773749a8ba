use std::path::{Path, PathBuf};
use std::process::ExitCode;

use centrafactor::graph::{self, GeneratorModel, GeneratorSpec};
use centrafactor::pipeline::{
    self, AnalysisConfig, CorpusReport, Format, LccPolicy, PipelineError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Centrality metrics, factor analysis and canonical correlation for networks.
///
/// Every analysis setting can come from a TOML file (--config), an
/// environment variable (CENTRAFACTOR_<FLAG>), or a flag; flags and
/// environment override the file, which overrides the defaults.
#[derive(Parser, Debug)]
#[command(name = "centrafactor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze one edge-list file.
    Analyze {
        edgelist: PathBuf,
        /// Write the network report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the per-vertex centralities as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write CCC and loading plots into this directory.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Analyze every source listed in a manifest.
    Corpus {
        manifest: PathBuf,
        /// Output directory for report.json, summary.csv and plots.
        #[arg(long, short, default_value = "centrafactor-out")]
        out: PathBuf,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0, env = "CENTRAFACTOR_WORKERS")]
        workers: usize,
        /// Skip SVG output.
        #[arg(long)]
        no_svg: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Generate a synthetic network as a canonical edge list.
    Generate {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        /// Edge probability (random).
        #[arg(long)]
        p: Option<f64>,
        /// Edges per new node (scale-free).
        #[arg(long)]
        m: Option<usize>,
        /// Ring degree (small-world).
        #[arg(long)]
        k: Option<usize>,
        /// Rewiring probability (small-world).
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, env = "CENTRAFACTOR_SEED")]
        seed: Option<u64>,
        /// Output file (stdout when omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModelArg {
    Random,
    ScaleFree,
    SmallWorld,
}

#[derive(Args, Debug, Default)]
struct ConfigArgs {
    /// TOML file with analysis settings.
    #[arg(long, env = "CENTRAFACTOR_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, env = "CENTRAFACTOR_COMMUNALITY_THRESHOLD")]
    communality_threshold: Option<f64>,
    #[arg(long, env = "CENTRAFACTOR_VARIANCE_THRESHOLD")]
    variance_threshold: Option<f64>,
    #[arg(long, env = "CENTRAFACTOR_STRONG_THRESHOLD")]
    strong_threshold: Option<f64>,
    #[arg(long, env = "CENTRAFACTOR_KAISER_NORMALIZE")]
    kaiser_normalize: Option<bool>,
    #[arg(long, env = "CENTRAFACTOR_TIE_TOL")]
    tie_tol: Option<f64>,
    #[arg(long, env = "CENTRAFACTOR_EVC_TOL")]
    evc_tol: Option<f64>,
    #[arg(long, env = "CENTRAFACTOR_EVC_MAX_ITER")]
    evc_max_iter: Option<usize>,
    #[arg(long, env = "CENTRAFACTOR_VARIMAX_TOL")]
    varimax_tol: Option<f64>,
    #[arg(long, env = "CENTRAFACTOR_VARIMAX_MAX_SWEEPS")]
    varimax_max_sweeps: Option<usize>,
    /// extract | error
    #[arg(long, env = "CENTRAFACTOR_LCC_POLICY")]
    lcc_policy: Option<LccPolicy>,
    #[arg(long, env = "CENTRAFACTOR_SEED")]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<AnalysisConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => AnalysisConfig::from_toml_file(path)?,
            None => AnalysisConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    cfg.$field = v;
                }
            )*};
        }
        set!(
            communality_threshold,
            variance_threshold,
            strong_threshold,
            kaiser_normalize,
            tie_tol,
            evc_tol,
            evc_max_iter,
            varimax_tol,
            varimax_max_sweeps,
            lcc_policy,
            seed
        );
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    const NO_REPORTS: u8 = 1;
    const IO: u8 = 2;
    const CONFIG: u8 = 3;

    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            PipelineError::Config(_) | PipelineError::Manifest { .. } => CliError::CONFIG,
            PipelineError::Io { .. } => CliError::IO,
            _ => CliError::NO_REPORTS,
        };
        CliError::new(code, e.to_string())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::new(CliError::IO, format!("{}: {e}", path.display())))
}

fn print_report(r: &pipeline::NetworkReport) {
    println!("{}: {} nodes, {} edges", r.name, r.nodes, r.edges);
    if let Some(c) = &r.cca {
        println!(
            "  CCC (DEG, EVC) vs (BWC, CLC): {:.4} [{}]",
            c.ccc, c.regime
        );
    }
    if let Some(ev) = &r.eigenvalues {
        let s: Vec<String> = ev.iter().map(|l| format!("{l:.4}")).collect();
        println!("  eigenvalues: {}", s.join(", "));
    }
    if let Some(f) = &r.factor_model {
        println!(
            "  factors: {} (99% variance rule: {}), min communality {:.4}",
            f.m,
            f.variance_retention_m,
            f.min_communality()
        );
        for (metric, factors) in &f.dominant {
            let names: Vec<String> = factors.iter().map(|j| format!("Factor-{j}")).collect();
            println!("    {metric}: {}", names.join(", "));
        }
    }
    for w in &r.diagnostics.warnings {
        println!("  warning: {w}");
    }
    for e in &r.errors {
        println!("  {:?} failed: {}", e.stage, e.message);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze {
            edgelist,
            json,
            csv,
            svg,
            config,
        } => {
            let cfg = config.resolve()?;
            let source = pipeline::Source::EdgeList(edgelist);
            let parsed = source.load()?;
            let analysis = pipeline::analyze_network_detailed(
                &source.name(),
                &source.describe(),
                &parsed.graph,
                parsed.diagnostics,
                &cfg,
            )?;
            print_report(&analysis.report);
            if let Some(path) = json {
                let mut s =
                    serde_json::to_string_pretty(&analysis.report).expect("report serializes");
                s.push('\n');
                write_file(&path, &s)?;
            }
            if let (Some(path), Some(dataset)) = (csv, &analysis.dataset) {
                let file = std::fs::File::create(&path)
                    .map_err(|e| CliError::new(CliError::IO, format!("{}: {e}", path.display())))?;
                dataset
                    .write_csv(file)
                    .map_err(|e| CliError::new(CliError::IO, format!("{}: {e}", path.display())))?;
            }
            let usable = analysis.report.cca.is_some() || analysis.report.factor_model.is_some();
            if let Some(dir) = svg {
                let corpus = CorpusReport::from_reports(vec![analysis.report], Vec::new(), &cfg);
                pipeline::emit_plots(&corpus, &dir)?;
            }
            if !usable {
                return Err(CliError::new(
                    CliError::NO_REPORTS,
                    "analysis produced no usable results",
                ));
            }
            Ok(())
        }
        Command::Corpus {
            manifest,
            out,
            workers,
            no_svg,
            config,
        } => {
            let cfg = config.resolve()?;
            let text = std::fs::read_to_string(&manifest)
                .map_err(|e| CliError::new(CliError::IO, format!("{}: {e}", manifest.display())))?;
            let base = manifest.parent().unwrap_or(Path::new("."));
            let sources = pipeline::parse_manifest(&text, base, cfg.seed)?;
            let report = pipeline::run_corpus(&sources, &cfg, workers)?;
            pipeline::emit_reports(&report, &out, &[Format::Json, Format::Csv])?;
            if !no_svg {
                pipeline::emit_plots(&report, &out)?;
            }
            for f in &report.failures {
                eprintln!("failed: {}: {}", f.source, f.error);
            }
            println!(
                "{} networks analyzed, {} modeled, {} failed; output in {}",
                report.networks.len(),
                report.modeled_count(),
                report.failures.len(),
                out.display()
            );
            if report.networks.is_empty() {
                return Err(CliError::new(
                    CliError::NO_REPORTS,
                    "no network could be analyzed",
                ));
            }
            Ok(())
        }
        Command::Generate {
            model,
            n,
            p,
            m,
            k,
            beta,
            seed,
            out,
        } => {
            let missing = |name: &str| {
                CliError::new(
                    CliError::CONFIG,
                    format!("--{name} is required for this model"),
                )
            };
            let model = match model {
                ModelArg::Random => GeneratorModel::Random {
                    n,
                    p: p.ok_or_else(|| missing("p"))?,
                },
                ModelArg::ScaleFree => GeneratorModel::ScaleFree {
                    n,
                    m: m.ok_or_else(|| missing("m"))?,
                },
                ModelArg::SmallWorld => GeneratorModel::SmallWorld {
                    n,
                    k: k.ok_or_else(|| missing("k"))?,
                    beta: beta.ok_or_else(|| missing("beta"))?,
                },
            };
            let spec = GeneratorSpec::new(model, seed.unwrap_or(0));
            let g = graph::generate(&spec)
                .map_err(|e| CliError::new(CliError::CONFIG, e.to_string()))?;
            let text = graph::serialize_edge_list(&g);
            match out {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(CliError::CONFIG);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
