//! `isnad`: command-line toolkit for narrator-network analysis.
//!
//! Subcommands compose over a persisted graph snapshot: `ingest` parses and
//! validates the corpus once and writes the snapshot; every analysis
//! subcommand is then a pure function of (snapshot, flags) with byte-stable
//! output. Exit codes: 0 success, 1 failed validation or analysis error,
//! 2 usage error.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use isnad_core::centrality::{
    betweenness, degree_scores, pagerank, BetweennessConfig, DegreeKind, PageRankConfig, ScoreTable,
};
use isnad_core::community::{louvain, LouvainConfig};
use isnad_core::era::era_city_table;
use isnad_core::export::{export_dot, export_edgelist, export_gexf};
use isnad_core::graph::{build_graph, corpus_summary, BuildConfig, PairDedup};
use isnad_core::ingest::{parse_hadith_records, parse_narrators, quarantine, ChainOrder};
use isnad_core::layout::{fr_layout, LayoutConfig};
use isnad_core::snapshot::{load_snapshot, save_snapshot, summary_from_snapshot, Snapshot};
use isnad_core::topology::{
    avg_path_length, degree_distribution, degree_sequence, fit_power_law, global_clustering,
    DegreeDirection,
};

use render::TableFormat;

#[derive(Parser)]
#[command(
    name = "isnad",
    version,
    about = "Narrator-network analysis over chain-of-narration corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate the corpus, build the graph, write a snapshot.
    Ingest(IngestArgs),
    /// Corpus summary statistics with validation warnings.
    Stats(StatsArgs),
    /// Score narrators by a centrality measure.
    Centrality(CentralityArgs),
    /// Louvain community detection.
    Communities(CommunitiesArgs),
    /// Era-by-city narrator counts.
    EraTable(EraTableArgs),
    /// Degree distribution histogram.
    DegreeDist(DegreeDistArgs),
    /// Clustering coefficient and average path length.
    Smallworld(SnapshotArgs),
    /// Power-law fit of the degree distribution.
    Powerlaw(PowerlawArgs),
    /// Force-directed node positions.
    Layout(LayoutArgs),
    /// Export the graph for external tools.
    Export(ExportArgs),
    /// Combined summary document.
    Report(SnapshotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainOrderArg {
    SourceFirst,
    CompilerFirst,
}

impl From<ChainOrderArg> for ChainOrder {
    fn from(value: ChainOrderArg) -> Self {
        match value {
            ChainOrderArg::SourceFirst => ChainOrder::SourceFirst,
            ChainOrderArg::CompilerFirst => ChainOrder::CompilerFirst,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PairDedupArg {
    Record,
    Chain,
}

impl From<PairDedupArg> for PairDedup {
    fn from(value: PairDedupArg) -> Self {
        match value {
            PairDedupArg::Record => PairDedup::Record,
            PairDedupArg::Chain => PairDedup::Chain,
        }
    }
}

#[derive(Args)]
struct CorpusArgs {
    /// Narrator CSV (id,name,generation,city).
    #[arg(long, value_name = "PATH")]
    narrators: PathBuf,
    /// Hadith file, one JSON record per line.
    #[arg(long, value_name = "PATH")]
    hadith: PathBuf,
    /// Order chains are listed in within the hadith file.
    #[arg(long, value_enum, default_value = "compiler-first")]
    chain_order: ChainOrderArg,
    /// Count a pair shared by chains of one record once, or per chain.
    #[arg(long, value_enum, default_value = "record")]
    pair_dedup: PairDedupArg,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Fail (exit 1) when the corpus has validation defects.
    #[arg(long)]
    strict: bool,
    /// Snapshot output path.
    #[arg(short, long, value_name = "PATH")]
    output: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Write output here instead of stdout.
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SnapshotArgs {
    /// Snapshot written by `ingest`.
    #[arg(long, value_name = "PATH")]
    snapshot: PathBuf,
    /// Write output here instead of stdout.
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Pagerank,
    Betweenness,
    Indegree,
    Outdegree,
    WeightedIndegree,
    WeightedOutdegree,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormatArg {
    Csv,
    Tsv,
    Md,
}

impl From<TableFormatArg> for TableFormat {
    fn from(value: TableFormatArg) -> Self {
        match value {
            TableFormatArg::Csv => TableFormat::Csv,
            TableFormatArg::Tsv => TableFormat::Tsv,
            TableFormatArg::Md => TableFormat::Markdown,
        }
    }
}

#[derive(Args)]
struct CentralityArgs {
    #[command(flatten)]
    common: SnapshotArgs,
    #[arg(long, value_enum)]
    measure: MeasureArg,
    /// PageRank damping factor.
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    /// PageRank L1 convergence tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// PageRank iteration cap.
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Spread PageRank uniformly over out-edges instead of by edge weight.
    #[arg(long)]
    unweighted: bool,
    /// Normalize betweenness by (N-1)(N-2).
    #[arg(long)]
    normalized: bool,
    /// Keep only the k best-ranked narrators.
    #[arg(long, value_name = "K")]
    top: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormatArg,
}

/// Formats for subcommands that only emit CSV.
#[derive(Clone, Copy, ValueEnum)]
enum CsvFormatArg {
    Csv,
}

#[derive(Args)]
struct CommunitiesArgs {
    #[command(flatten)]
    common: SnapshotArgs,
    /// Modularity resolution.
    #[arg(long, default_value_t = 1.0)]
    resolution: f64,
    /// Seed for the node-visit shuffle.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Minimum modularity gain for a node move.
    #[arg(long, default_value_t = 1e-7)]
    min_gain: f64,
    #[arg(long, value_enum, default_value = "csv")]
    #[allow(dead_code)]
    format: CsvFormatArg,
}

#[derive(Args)]
struct EraTableArgs {
    #[command(flatten)]
    common: SnapshotArgs,
    /// Fold city rows with fewer narrators than this into "other".
    #[arg(long, default_value_t = 5)]
    min_total: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    In,
    Out,
    Total,
}

impl From<DirectionArg> for DegreeDirection {
    fn from(value: DirectionArg) -> Self {
        match value {
            DirectionArg::In => DegreeDirection::In,
            DirectionArg::Out => DegreeDirection::Out,
            DirectionArg::Total => DegreeDirection::Total,
        }
    }
}

#[derive(Args)]
struct DegreeDistArgs {
    #[command(flatten)]
    common: SnapshotArgs,
    #[arg(long, value_enum, default_value = "total")]
    direction: DirectionArg,
    /// Append base-10 log columns for log-log plotting.
    #[arg(long)]
    loglog: bool,
    #[arg(long, value_enum, default_value = "csv")]
    #[allow(dead_code)]
    format: CsvFormatArg,
}

#[derive(Args)]
struct PowerlawArgs {
    #[command(flatten)]
    common: SnapshotArgs,
    /// Lower cutoff of the fitted tail.
    #[arg(long, default_value_t = 1)]
    xmin: u64,
    #[arg(long, value_enum, default_value = "total")]
    direction: DirectionArg,
}

#[derive(Args)]
struct LayoutArgs {
    #[command(flatten)]
    common: SnapshotArgs,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormatArg {
    Gexf,
    Dot,
    Edgelist,
}

#[derive(Args)]
struct ExportArgs {
    /// Snapshot written by `ingest`.
    #[arg(long, value_name = "PATH")]
    snapshot: PathBuf,
    #[arg(long, value_enum)]
    format: ExportFormatArg,
    /// Attach force-directed positions (GEXF only).
    #[arg(long)]
    with_layout: bool,
    /// Attach Louvain communities (GEXF only).
    #[arg(long)]
    with_communities: bool,
    /// Comma-separated measures to attach as node attributes (GEXF only),
    /// e.g. "pagerank,betweenness".
    #[arg(long, value_name = "MEASURES", value_delimiter = ',')]
    with_centrality: Vec<MeasureArg>,
    /// Output path.
    #[arg(short, long, value_name = "PATH")]
    output: PathBuf,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Centrality(args) => cmd_centrality(args),
        Command::Communities(args) => cmd_communities(args),
        Command::EraTable(args) => cmd_era_table(args),
        Command::DegreeDist(args) => cmd_degree_dist(args),
        Command::Smallworld(args) => cmd_smallworld(args),
        Command::Powerlaw(args) => cmd_powerlaw(args),
        Command::Layout(args) => cmd_layout(args),
        Command::Export(args) => cmd_export(args),
        Command::Report(args) => cmd_report(args),
    }
}

/// Parses, validates and builds from the corpus files; returns the snapshot
/// plus the validation report.
fn load_corpus(args: &CorpusArgs) -> Result<(Snapshot, isnad_core::ingest::ValidationReport)> {
    let table = parse_narrators(&args.narrators)
        .with_context(|| format!("reading {}", args.narrators.display()))?;
    let records = parse_hadith_records(&args.hadith, args.chain_order.into())
        .with_context(|| format!("reading {}", args.hadith.display()))?;
    let (included, report) = quarantine(records, &table);
    let config = BuildConfig {
        pair_dedup: args.pair_dedup.into(),
    };
    let graph = build_graph(&included, &table, &config)?;
    let multi_chain = included.iter().filter(|r| r.is_multi_chain()).count();
    let snapshot = Snapshot::new(graph, &table, included.len(), multi_chain)?;
    Ok((snapshot, report))
}

fn cmd_ingest(args: IngestArgs) -> Result<ExitCode> {
    let (snapshot, report) = load_corpus(&args.corpus)?;
    if !report.is_clean() {
        if args.strict {
            eprint!("{report}");
            eprintln!("ingest --strict: corpus rejected");
            return Ok(ExitCode::FAILURE);
        }
        for line in report.to_string().lines().skip(1) {
            eprintln!("warning: {line}");
        }
    }
    save_snapshot(&snapshot, &args.output)?;
    println!(
        "wrote {}: {} nodes, {} edges, {} hadith",
        args.output.display(),
        snapshot.graph.node_count(),
        snapshot.graph.edge_count(),
        snapshot.hadith_count
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(args: StatsArgs) -> Result<ExitCode> {
    let table = parse_narrators(&args.corpus.narrators)?;
    let records = parse_hadith_records(&args.corpus.hadith, args.corpus.chain_order.into())?;
    let (included, report) = quarantine(records, &table);
    let config = BuildConfig {
        pair_dedup: args.corpus.pair_dedup.into(),
    };
    let graph = build_graph(&included, &table, &config)?;
    let stats = corpus_summary(&graph, &included, &table)?;

    let mut out = String::new();
    for line in report.to_string().lines().skip(1) {
        out.push_str(&format!("# warning: {line}\n"));
    }
    out.push_str(&render::summary(&stats));
    emit(args.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

/// Computes one measure's score table from a snapshot.
fn measure_scores(
    snapshot: &Snapshot,
    measure: MeasureArg,
    args: &CentralityArgs,
) -> Result<ScoreTable> {
    let graph = &snapshot.graph;
    Ok(match measure {
        MeasureArg::Pagerank => {
            let config = PageRankConfig {
                damping: args.damping,
                tolerance: args.tolerance,
                max_iterations: args.max_iter,
                use_edge_weights: !args.unweighted,
            };
            let result = pagerank(graph, &config)?;
            if !result.converged {
                eprintln!(
                    "warning: pagerank did not converge within {} iterations",
                    result.iterations
                );
            }
            result.scores
        }
        MeasureArg::Betweenness => betweenness(
            graph,
            &BetweennessConfig {
                normalized: args.normalized,
            },
        )?,
        MeasureArg::Indegree => degree_scores(graph, DegreeKind::In),
        MeasureArg::Outdegree => degree_scores(graph, DegreeKind::Out),
        MeasureArg::WeightedIndegree => degree_scores(graph, DegreeKind::WeightedIn),
        MeasureArg::WeightedOutdegree => degree_scores(graph, DegreeKind::WeightedOut),
    })
}

fn cmd_centrality(args: CentralityArgs) -> Result<ExitCode> {
    let snapshot = load_snapshot(&args.common.snapshot)?;
    let scores = measure_scores(&snapshot, args.measure, &args)?;
    let k = args.top.unwrap_or(scores.len());
    let out = render::scores(&snapshot, &scores, k, args.format.into());
    emit(args.common.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_communities(args: CommunitiesArgs) -> Result<ExitCode> {
    let snapshot = load_snapshot(&args.common.snapshot)?;
    let config = LouvainConfig {
        resolution: args.resolution,
        seed: args.seed,
        min_gain: args.min_gain,
    };
    let partition = louvain(&snapshot.graph, &config)?;
    let out = render::communities(&snapshot, &partition);
    emit(args.common.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_era_table(args: EraTableArgs) -> Result<ExitCode> {
    let snapshot = load_snapshot(&args.common.snapshot)?;
    let table = era_city_table(&snapshot.table, args.min_total);
    let out = render::era_table(&table, args.format.into());
    emit(args.common.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_degree_dist(args: DegreeDistArgs) -> Result<ExitCode> {
    let snapshot = load_snapshot(&args.common.snapshot)?;
    let hist = degree_distribution(&snapshot.graph, args.direction.into());
    let out = render::degree_dist(&hist, args.loglog);
    emit(args.common.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_smallworld(args: SnapshotArgs) -> Result<ExitCode> {
    let snapshot = load_snapshot(&args.snapshot)?;
    let clustering = global_clustering(&snapshot.graph);
    let path_length = avg_path_length(&snapshot.graph)?;
    let out = render::smallworld(clustering, path_length);
    emit(args.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_powerlaw(args: PowerlawArgs) -> Result<ExitCode> {
    let snapshot = load_snapshot(&args.common.snapshot)?;
    let direction: DegreeDirection = args.direction.into();
    let degrees = degree_sequence(&snapshot.graph, direction);
    let fit = fit_power_law(&degrees, args.xmin)?;
    let out = render::powerlaw(&fit, direction.as_str());
    emit(args.common.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_layout(args: LayoutArgs) -> Result<ExitCode> {
    let snapshot = load_snapshot(&args.common.snapshot)?;
    let config = LayoutConfig {
        iterations: args.iterations,
        seed: args.seed,
        ..LayoutConfig::default()
    };
    let positions = fr_layout(&snapshot.graph, &config);
    let out = render::positions(&positions);
    emit(args.common.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(args: ExportArgs) -> Result<ExitCode> {
    if !matches!(args.format, ExportFormatArg::Gexf)
        && (args.with_layout || args.with_communities || !args.with_centrality.is_empty())
    {
        bail!("annotation flags require --format gexf");
    }
    let snapshot = load_snapshot(&args.snapshot)?;
    let graph = &snapshot.graph;
    let content = match args.format {
        ExportFormatArg::Dot => export_dot(graph),
        ExportFormatArg::Edgelist => export_edgelist(graph),
        ExportFormatArg::Gexf => {
            let mut scores = Vec::new();
            for &measure in &args.with_centrality {
                scores.push(match measure {
                    MeasureArg::Pagerank => pagerank(graph, &PageRankConfig::default())?.scores,
                    MeasureArg::Betweenness => betweenness(graph, &BetweennessConfig::default())?,
                    MeasureArg::Indegree => degree_scores(graph, DegreeKind::In),
                    MeasureArg::Outdegree => degree_scores(graph, DegreeKind::Out),
                    MeasureArg::WeightedIndegree => degree_scores(graph, DegreeKind::WeightedIn),
                    MeasureArg::WeightedOutdegree => degree_scores(graph, DegreeKind::WeightedOut),
                });
            }
            let partition = if args.with_communities {
                Some(louvain(graph, &LouvainConfig::default())?)
            } else {
                None
            };
            let positions = if args.with_layout {
                Some(fr_layout(graph, &LayoutConfig::default()))
            } else {
                None
            };
            export_gexf(
                graph,
                &snapshot.table,
                &scores,
                partition.as_ref(),
                positions.as_ref(),
            )?
        }
    };
    std::fs::write(&args.output, content)
        .with_context(|| format!("writing {}", args.output.display()))?;
    println!("wrote {}", args.output.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(args: SnapshotArgs) -> Result<ExitCode> {
    let snapshot = load_snapshot(&args.snapshot)?;
    let graph = &snapshot.graph;

    let mut out = String::new();
    out.push_str(&render::section("summary"));
    out.push_str(&render::summary(&summary_from_snapshot(&snapshot)?));

    let measures: [(&str, ScoreTable); 6] = [
        ("outdegree", degree_scores(graph, DegreeKind::Out)),
        ("indegree", degree_scores(graph, DegreeKind::In)),
        (
            "weighted-outdegree",
            degree_scores(graph, DegreeKind::WeightedOut),
        ),
        (
            "weighted-indegree",
            degree_scores(graph, DegreeKind::WeightedIn),
        ),
        (
            "pagerank",
            pagerank(graph, &PageRankConfig::default())?.scores,
        ),
        (
            "betweenness",
            betweenness(graph, &BetweennessConfig::default())?,
        ),
    ];
    for (name, table) in &measures {
        out.push_str(&render::section(&format!("top-10 {name}")));
        out.push_str(&render::scores(&snapshot, table, 10, TableFormat::Csv));
    }

    out.push_str(&render::section("communities"));
    let partition = louvain(graph, &LouvainConfig::default())?;
    out.push_str(&render::community_summary(&partition));

    out.push_str(&render::section("era table"));
    out.push_str(&render::era_table(
        &era_city_table(&snapshot.table, 5),
        TableFormat::Csv,
    ));

    emit(args.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn emit(path: Option<&std::path::Path>, content: &str) -> Result<()> {
    match path {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}
