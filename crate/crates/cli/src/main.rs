use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use distsketch::codec::{CodecError, SketchSet};
use distsketch::gd::{build_gd_sketches, level_params};
use distsketch::generate::{generate, GraphKind, WeightSpec};
use distsketch::graph::GraphError;
use distsketch::oracle::{sssp_exact, DistanceMatrix, GraphFacts};
use distsketch::query::{stretch_report, PairPolicy, QueryError, StretchReport};
use distsketch::sim::{PhaseMetrics, RunMetrics};
use distsketch::slack::{build_cdg_sketches_in, build_density_net_in, build_slack3_sketches};
use distsketch::tz::build_tz_sketches;
use distsketch::{load_edge_list, BuildError, Dist, Eps, Mode, RngStream, WeightedGraph};

const METRICS_SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "distsketch", version, about = "Distributed distance sketches on a simulated CONGEST network")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic graph in edge-list format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, default_value_t = 0, global = true)]
        seed: u64,
        /// `unit` or an inclusive range such as `1..16`.
        #[arg(long, default_value = "unit", global = true)]
        weights: String,
        /// Output file; standard output if omitted.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Build sketches for every node of a graph.
    Build(BuildArgs),
    /// Estimate the distance between two nodes from a sketch file.
    Query {
        #[arg(long)]
        sketches: PathBuf,
        u: usize,
        v: usize,
    },
    /// Check a sketch file against exact distances and its stretch ceilings.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GenKind {
    Path { n: usize },
    Grid { rows: usize, cols: usize },
    Er { n: usize, p: f64 },
    RandomWeighted { n: usize, avg_degree: f64, max_weight: Dist },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Scheme {
    Tz,
    Slack3,
    Cdg,
    Gd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(name = "fixed_S", alias = "fixed-s")]
    FixedS,
    Detect,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    scheme: Scheme,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    eps: Option<Eps>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "fixed_S")]
    mode: ModeArg,
    /// Binary sketch file.
    #[arg(long)]
    out: PathBuf,
    /// Metrics JSON; defaults to `<out>.metrics.json`.
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Also write the JSON mirror of the sketches here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    sketches: PathBuf,
    /// Slack levels to check (slack3 and cdg); comma-separated.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<Eps>,
    /// `all` or `sample:<count>`.
    #[arg(long, default_value = "all")]
    pairs: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stretch report JSON; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-pair CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Graph(_) => 4,
            CliError::Build(_) => 5,
            CliError::Codec(_) => 6,
            CliError::Query(_) => 7,
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_graph(path: &Path) -> Result<WeightedGraph, CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(load_edge_list(&text)?)
}

fn parse_weights(s: &str) -> Result<WeightSpec, CliError> {
    if s == "unit" {
        return Ok(WeightSpec::Unit);
    }
    let bad = || CliError::Usage(format!("bad --weights `{s}`: expected `unit` or `lo..hi`"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    Ok(WeightSpec::Uniform { lo: lo.parse().map_err(|_| bad())?, hi: hi.parse().map_err(|_| bad())? })
}

fn cmd_gen(kind: GenKind, seed: u64, weights: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    let weights = parse_weights(weights)?;
    let kind = match kind {
        GenKind::Path { n } => GraphKind::Path { n, weights },
        GenKind::Grid { rows, cols } => GraphKind::Grid { rows, cols, weights },
        GenKind::Er { n, p } => GraphKind::ErdosRenyi { n, p, weights },
        GenKind::RandomWeighted { n, avg_degree, max_weight } => {
            GraphKind::RandomWeighted { n, avg_degree, max_weight }
        }
    };
    let text = generate(&kind, RngStream::new(seed))?.canonicalize().to_edge_list();
    match out {
        Some(path) => write(&path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SketchWords {
    max: usize,
    mean: f64,
}

#[derive(Serialize)]
struct MetricsFile<'a> {
    schema_version: u32,
    n: usize,
    m: usize,
    #[serde(rename = "S")]
    spd: usize,
    #[serde(rename = "D")]
    hop_diameter: usize,
    scheme: Scheme,
    k: Option<usize>,
    eps: Option<Eps>,
    seed: u64,
    mode: &'static str,
    rounds: u64,
    data_msgs: u64,
    control_msgs: u64,
    max_nonempty_queues: usize,
    per_phase: &'a [PhaseMetrics],
    sketch_words: SketchWords,
}

fn cmd_build(args: BuildArgs) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let facts = GraphFacts::compute(&g);
    let mode = match args.mode {
        ModeArg::FixedS => Mode::FixedS { spd: facts.spd },
        ModeArg::Detect => Mode::Detect,
    };
    let rng = RngStream::new(args.seed);
    let need_k = || args.k.ok_or_else(|| CliError::Usage(format!("--k is required for --scheme {}", name(args.scheme))));
    let need_eps =
        || args.eps.ok_or_else(|| CliError::Usage(format!("--eps is required for --scheme {}", name(args.scheme))));
    let (sketches, metrics, k, eps): (SketchSet, RunMetrics, _, _) = match args.scheme {
        Scheme::Tz => {
            let k = need_k()?;
            let b = build_tz_sketches(&g, k, rng, mode)?;
            (SketchSet::Tz(b.labels), b.metrics, Some(k), None)
        }
        Scheme::Slack3 => {
            let eps = need_eps()?;
            let net = build_density_net_in(&facts.metric, eps, rng.substream(0))?;
            let (s, m) = build_slack3_sketches(&g, &net, mode)?;
            (SketchSet::Slack3(s), m, None, Some(eps))
        }
        Scheme::Cdg => {
            let (k, eps) = (need_k()?, need_eps()?);
            let b = build_cdg_sketches_in(&g, &facts.metric, eps, k, rng, mode)?;
            (SketchSet::Cdg(b.sketches), b.metrics, Some(k), Some(eps))
        }
        Scheme::Gd => {
            let b = build_gd_sketches(&g, rng, mode)?;
            (SketchSet::Gd(b.sketches), b.metrics, None, None)
        }
    };
    let words: Vec<usize> = (0..sketches.len()).map(|u| sketches.words(u)).collect();
    let file = MetricsFile {
        schema_version: METRICS_SCHEMA_VERSION,
        n: g.node_count(),
        m: g.edge_count(),
        spd: facts.spd,
        hop_diameter: facts.hop_diameter,
        scheme: args.scheme,
        k,
        eps,
        seed: args.seed,
        mode: mode.name(),
        rounds: metrics.rounds,
        data_msgs: metrics.data_msgs,
        control_msgs: metrics.control_msgs,
        max_nonempty_queues: metrics.max_nonempty_queues,
        per_phase: &metrics.per_phase,
        sketch_words: SketchWords {
            max: words.iter().copied().max().unwrap_or(0),
            mean: words.iter().sum::<usize>() as f64 / words.len().max(1) as f64,
        },
    };
    write(&args.out, sketches.encode())?;
    if let Some(path) = &args.json {
        write(path, sketches.to_json())?;
    }
    let metrics_path = args.metrics.unwrap_or_else(|| {
        let mut p = args.out.clone().into_os_string();
        p.push(".metrics.json");
        p.into()
    });
    write(&metrics_path, serde_json::to_string_pretty(&file).expect("metrics serialize") + "\n")
}

fn name(s: Scheme) -> &'static str {
    match s {
        Scheme::Tz => "tz",
        Scheme::Slack3 => "slack3",
        Scheme::Cdg => "cdg",
        Scheme::Gd => "gd",
    }
}

fn load_sketches(path: &Path) -> Result<SketchSet, CliError> {
    Ok(SketchSet::decode(&read(path)?)?)
}

fn cmd_query(path: &Path, u: usize, v: usize) -> Result<(), CliError> {
    let s = load_sketches(path)?;
    if u >= s.len() || v >= s.len() {
        return Err(CliError::Usage(format!("nodes must be below {}", s.len())));
    }
    println!("{}", s.estimate(u, v)?);
    Ok(())
}

/// Every distance a sketch stores must be the exact graph distance.
fn check_stored_distances(s: &SketchSet, metric: &DistanceMatrix) -> Result<(), String> {
    use distsketch::label::TzLabel;
    let label_ok = |l: &TzLabel| -> Result<(), String> {
        let u = l.owner;
        for p in &l.pivots {
            if metric.get(u, p.node) != p.dist {
                return Err(format!("pivot {} of node {u} stored at distance {}", p.node, p.dist));
            }
        }
        for e in &l.bunch {
            if metric.get(u, e.node) != e.dist {
                return Err(format!("bunch entry {} of node {u} stored at distance {}", e.node, e.dist));
            }
        }
        Ok(())
    };
    let cdg_ok = |c: &distsketch::slack::CdgSketch| -> Result<(), String> {
        if metric.get(c.owner, c.nearest) != c.nearest_dist {
            return Err(format!("nearest member of node {} stored at distance {}", c.owner, c.nearest_dist));
        }
        label_ok(&c.net_label)
    };
    match s {
        SketchSet::Tz(ls) => ls.iter().try_for_each(label_ok),
        SketchSet::Slack3(ss) => ss.iter().try_for_each(|x| {
            x.table.iter().try_for_each(|&(w, d)| {
                if metric.get(x.owner, w) == d {
                    Ok(())
                } else {
                    Err(format!("net member {w} of node {} stored at distance {d}", x.owner))
                }
            })
        }),
        SketchSet::Cdg(cs) => cs.iter().try_for_each(cdg_ok),
        SketchSet::Gd(gs) => gs.iter().flat_map(|g| &g.levels).try_for_each(|l| cdg_ok(&l.sketch)),
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    scheme: &'static str,
    /// Ceiling that applies to every pair, if any.
    ceiling: Option<u64>,
    pass: bool,
    failures: &'a [String],
    #[serde(flatten)]
    report: &'a StretchReport,
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let sketches = load_sketches(&args.sketches)?;
    let n = g.node_count();
    if sketches.len() != n {
        return Err(CliError::Invariant(format!("{} sketches for {n} nodes", sketches.len())));
    }
    sketches.check().map_err(CliError::Invariant)?;
    let metric = DistanceMatrix::from_rows((0..n).map(|s| sssp_exact(&g, s).dist).collect());
    check_stored_distances(&sketches, &metric).map_err(CliError::Invariant)?;

    let policy = match args.pairs.as_str() {
        "all" => PairPolicy::All,
        s => match s.strip_prefix("sample:").and_then(|c| c.parse().ok()) {
            Some(count) => PairPolicy::Sample { count, seed: args.seed },
            None => return Err(CliError::Usage(format!("bad --pairs `{s}`: expected `all` or `sample:<count>`"))),
        },
    };
    let (ceiling, slack): (Option<u64>, Vec<(Eps, u64)>) = match &sketches {
        SketchSet::Tz(ls) => (Some(2 * ls[0].k as u64 - 1), Vec::new()),
        SketchSet::Slack3(_) => (None, need_eps(&args.eps, "slack3")?.iter().map(|&e| (e, 3)).collect()),
        SketchSet::Cdg(cs) => {
            let c = 8 * cs[0].net_label.k as u64 - 1;
            (None, need_eps(&args.eps, "cdg")?.iter().map(|&e| (e, c)).collect())
        }
        SketchSet::Gd(_) => {
            let params = level_params(n);
            let k_max = params.iter().map(|p| p.1).max().unwrap_or(1) as u64;
            (Some(8 * k_max - 1), params.iter().map(|&(e, k)| (e, 8 * k as u64 - 1)).collect())
        }
    };
    let report = stretch_report(&metric, |u, v| sketches.estimate(u, v), policy, &slack)?;
    let mut failures = Vec::new();
    if report.underestimates > 0 {
        failures.push(format!("{} pairs underestimated", report.underestimates));
    }
    if let Some(c) = ceiling {
        let bad = report.violations(c);
        if bad > 0 {
            failures.push(format!("{bad} pairs exceed stretch {c}"));
        }
    }
    for (eps, s) in &report.slack_view {
        if s.violations > 0 {
            failures.push(format!("{} {eps}-far pairs exceed stretch {}", s.violations, s.ceiling));
        }
    }
    // The per-pair list goes to the CSV, not the JSON summary.
    let summary = StretchReport { per_pair: Vec::new(), ..report.clone() };
    let out = VerifyOutput { scheme: sketches.scheme(), ceiling, pass: failures.is_empty(), failures: &failures, report: &summary };
    let json = serde_json::to_string_pretty(&out).expect("report serializes") + "\n";
    match &args.out {
        Some(path) => write(path, &json)?,
        None => print!("{json}"),
    }
    if let Some(path) = &args.csv {
        let mut buf = Vec::new();
        report.write_csv(&mut buf).map_err(|e| CliError::Usage(e.to_string()))?;
        write(path, buf)?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(failures.join("; ")))
    }
}

fn need_eps<'a>(eps: &'a [Eps], scheme: &str) -> Result<&'a [Eps], CliError> {
    if eps.is_empty() {
        Err(CliError::Usage(format!("--eps is required to verify {scheme} sketches")))
    } else {
        Ok(eps)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Command::Gen { kind, seed, weights, out } => cmd_gen(kind, seed, &weights, out),
        Command::Build(args) => cmd_build(args),
        Command::Query { sketches, u, v } => cmd_query(&sketches, u, v),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
