//! `tmotif` — temporal-motif analysis over dynamic graphs.
//!
//! One binary covering dataset generation, exact motif queries, parameter
//! sweeps, ego sampling, LLM benchmark runs (direct and agent), feature
//! extraction, difficulty-classifier training, routed execution, and a
//! local tool service.
//!
//! Every randomized command takes an explicit `--seed`; nothing is seeded
//! from the clock. Endpoint credentials are named by environment variable
//! and are read per request — they never appear in any output file.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use agent_runtime::{call_tool, run_agent_benchmark, tool_names, EndpointModel, DEFAULT_MAX_STEPS};
use bench_gen::{
    ego_sample, gen_classification_instance, gen_construction_instance, gen_dataset,
    gen_detection_instance, parameter_sweep, parse_snapshot, settings, sweep_csv, GenParams,
    TaskInstance, TaskKind, ALL_TASKS, ALL_VIOLATIONS,
};
use dispatcher::{
    build_label_dataset, extract_features, read_labels_csv, route_summary, run_routed_benchmark,
    train_classifier, write_labels_csv, AgentSolver, DifficultyModel, DirectSolver, Route,
    RoutePolicy, TrainParams, FEATURE_NAMES,
};
use dygraph_core::{format_events, parse_events, read_jsonl, write_jsonl, DynamicGraph, EdgeEvent};
use eval_harness::{
    run_benchmark, write_summary_csv, EndpointConfig, ResultRecord, RunReport, Strategy, Templates,
};
use motif_engine::{
    catalog_names, catalog_pattern, classify_exact, construct_completion, count_instances, detect,
    first_occurrence, MotifPattern,
};

#[derive(Parser)]
#[command(
    name = "tmotif",
    version,
    about = "Temporal-motif analysis toolkit for dynamic graphs",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate benchmark instances as JSONL.
    Generate(GenerateArgs),
    /// Does the graph contain the motif? Prints Yes or No.
    Detect(QueryArgs),
    /// Count motif instances in the graph.
    Count(QueryArgs),
    /// Earliest completion time of the motif, or None.
    FirstOccurrence(QueryArgs),
    /// Find a single edge insertion that completes the motif.
    Construct(QueryArgs),
    /// Is the graph exactly one instance of the motif? Prints Yes or No.
    Classify(QueryArgs),
    /// Mean motif counts over a (n, t_span, window) grid, as CSV.
    Sweep(SweepArgs),
    /// Sample an ego network from an edge-stream snapshot.
    EgoSample(EgoArgs),
    /// Run LLM benchmarks against a chat-completions endpoint.
    Bench {
        #[command(subcommand)]
        command: BenchCommand,
    },
    /// Run the tool-calling agent over benchmark instances.
    Agent {
        #[command(subcommand)]
        command: AgentCommand,
    },
    /// Extract structure features from instances.
    Features {
        #[command(subcommand)]
        command: FeaturesCommand,
    },
    /// Difficulty labels, classifier training, and routed execution.
    Dispatcher {
        #[command(subcommand)]
        command: DispatcherCommand,
    },
    /// Serve the motif tools over HTTP.
    Tools {
        #[command(subcommand)]
        command: ToolsCommand,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Prompt the endpoint once per instance and score the answers.
    Run(BenchRunArgs),
}

#[derive(Subcommand)]
enum AgentCommand {
    /// Drive the ReAct tool loop once per instance and score the answers.
    Run(AgentRunArgs),
}

#[derive(Subcommand)]
enum FeaturesCommand {
    /// Write one feature row per instance as CSV.
    Extract(FeaturesExtractArgs),
}

#[derive(Subcommand)]
enum DispatcherCommand {
    /// Join instances with direct-run records into a labeled CSV.
    BuildLabels(BuildLabelsArgs),
    /// Train the boosted-tree difficulty classifier.
    Train(TrainArgs),
    /// Route each instance to the direct or agent path and solve it.
    Route(RouteArgs),
}

#[derive(Subcommand)]
enum ToolsCommand {
    /// Expose POST /tools/<name> on a local address.
    Serve(ServeArgs),
}

// ---------------------------------------------------------------------
// Argument groups
// ---------------------------------------------------------------------

#[derive(Args)]
struct GenerateArgs {
    /// Task kind (classification, detection, construction, multi_detect,
    /// occurrence, multi_count, level0_sort_edge, level0_when_link_dislink,
    /// level0_what_edges, level0_reverse_graph).
    #[arg(long)]
    task: String,
    /// Motif name; required for the single-motif tasks.
    #[arg(long)]
    motif: Option<String>,
    /// Number of instances (seeds seed..seed+count).
    #[arg(long)]
    count: usize,
    /// Base seed.
    #[arg(long)]
    seed: u64,
    /// Override the node count from the settings table.
    #[arg(long)]
    n: Option<u64>,
    /// Override the time span from the settings table.
    #[arg(long)]
    t: Option<u64>,
    /// Override the motif time window from the settings table.
    #[arg(long)]
    w: Option<u64>,
    /// Override the edge probability.
    #[arg(long)]
    p: Option<f64>,
    /// Override the delete rate.
    #[arg(long)]
    q: Option<f64>,
    /// Output JSONL path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    /// Graph file: JSONL events ([u,v,t,"a"] per line) or tuple text.
    #[arg(long)]
    graph: PathBuf,
    /// Motif name from the catalog.
    #[arg(long)]
    motif: String,
    /// Motif time window δ.
    #[arg(long)]
    delta: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// Motif name from the catalog.
    #[arg(long)]
    motif: String,
    /// Node counts, e.g. 10,15,20 or 10-20.
    #[arg(long)]
    ns: String,
    /// Time spans, same list syntax.
    #[arg(long)]
    t_spans: String,
    /// Motif windows, same list syntax.
    #[arg(long)]
    windows: String,
    /// Seeds averaged per cell, same list syntax.
    #[arg(long)]
    seeds: String,
    /// Edge probability.
    #[arg(long, default_value_t = settings::EDGE_PROB)]
    p: f64,
    /// Delete rate.
    #[arg(long, default_value_t = settings::DEL_PROB)]
    q: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EgoArgs {
    /// Snapshot file with one "u v t" line per edge.
    #[arg(long)]
    snapshot: PathBuf,
    /// Center node; drawn uniformly (seeded) when omitted.
    #[arg(long)]
    center: Option<u64>,
    /// BFS hops to keep.
    #[arg(long, default_value_t = 2)]
    hops: u32,
    /// Maximum nodes kept.
    #[arg(long, default_value_t = 30)]
    cap: usize,
    /// Seed for center sampling.
    #[arg(long)]
    seed: u64,
    /// Output JSONL path for the sampled events.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct EndpointArgs {
    /// Chat-completions API root, e.g. http://127.0.0.1:8080/v1.
    #[arg(long)]
    base_url: String,
    /// Model name sent in the request body.
    #[arg(long)]
    model: String,
    /// NAME of the environment variable holding the API key.
    #[arg(long)]
    key_env: Option<String>,
    /// Sampling temperature.
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
    /// Retries per request on transport errors.
    #[arg(long, default_value_t = 2)]
    max_retries: u32,
    /// Per-request timeout in seconds.
    #[arg(long, default_value_t = 120)]
    timeout_secs: u64,
}

impl EndpointArgs {
    fn config(&self) -> EndpointConfig {
        EndpointConfig {
            base_url: self.base_url.clone(),
            model: self.model.clone(),
            api_key_env: self.key_env.clone(),
            temperature: self.temperature,
            max_retries: self.max_retries,
            timeout_secs: self.timeout_secs,
        }
    }
}

#[derive(Args)]
struct BenchRunArgs {
    /// Instances JSONL produced by `generate`.
    #[arg(long)]
    instances: PathBuf,
    /// Prompting strategy: zero_shot, one_shot, zero_shot_cot, one_shot_cot.
    #[arg(long, default_value = "zero_shot")]
    strategy: String,
    #[command(flatten)]
    endpoint: EndpointArgs,
    /// Parallel workers.
    #[arg(long, default_value_t = 4)]
    concurrency: usize,
    /// Directory of template overrides (<name>.txt).
    #[arg(long)]
    templates: Option<PathBuf>,
    /// Results JSONL (appended to; existing answers are not re-queried).
    #[arg(long)]
    out: PathBuf,
    /// Optional summary CSV path.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct AgentRunArgs {
    /// Instances JSONL produced by `generate`.
    #[arg(long)]
    instances: PathBuf,
    #[command(flatten)]
    endpoint: EndpointArgs,
    /// Step budget per episode.
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
    /// Parallel workers.
    #[arg(long, default_value_t = 4)]
    concurrency: usize,
    /// Directory of template overrides (<name>.txt).
    #[arg(long)]
    templates: Option<PathBuf>,
    /// Results JSONL (appended to; existing answers are not re-queried).
    #[arg(long)]
    out: PathBuf,
    /// Optional summary CSV path.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct FeaturesExtractArgs {
    /// Instances JSONL.
    #[arg(long)]
    instances: PathBuf,
    /// Output CSV path (id plus the five features).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BuildLabelsArgs {
    /// Instances JSONL the records refer to.
    #[arg(long)]
    instances: PathBuf,
    /// Direct-run results JSONL from `bench run`.
    #[arg(long)]
    records: PathBuf,
    /// Output labels CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// Labels CSV from `dispatcher build-labels`.
    #[arg(long)]
    labels: PathBuf,
    /// Output model JSON path.
    #[arg(long)]
    out: PathBuf,
    /// Boosting rounds.
    #[arg(long, default_value_t = 60)]
    trees: usize,
    /// Maximum tree depth.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 0.2)]
    learning_rate: f64,
    /// L2 regularization on leaf values.
    #[arg(long, default_value_t = 1.0)]
    l2: f64,
    /// Minimum samples on each side of a split.
    #[arg(long, default_value_t = 2)]
    min_leaf: usize,
    /// Fraction held out for the accuracy report.
    #[arg(long, default_value_t = 0.2)]
    holdout: f64,
    /// Seed for the holdout split.
    #[arg(long)]
    seed: u64,
    /// Routing threshold θ stored in the model.
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
}

#[derive(Args)]
struct RouteArgs {
    /// Instances JSONL.
    #[arg(long)]
    instances: PathBuf,
    /// Trained model JSON (model policy).
    #[arg(long, group = "policy")]
    model: Option<PathBuf>,
    /// Random baseline: probability of the agent path.
    #[arg(long, group = "policy")]
    random_p: Option<f64>,
    /// Seed for the random policy.
    #[arg(long)]
    seed: Option<u64>,
    /// Send everything down one path: direct or agent.
    #[arg(long, group = "policy")]
    fixed: Option<String>,
    /// Direct-path endpoint API root.
    #[arg(long)]
    direct_base_url: String,
    /// Direct-path model name.
    #[arg(long)]
    direct_model: String,
    /// Env-var NAME holding the direct-path key.
    #[arg(long)]
    direct_key_env: Option<String>,
    /// Prompting strategy for the direct path.
    #[arg(long, default_value = "zero_shot")]
    strategy: String,
    /// Agent-path endpoint API root.
    #[arg(long)]
    agent_base_url: String,
    /// Agent-path model name.
    #[arg(long)]
    agent_model: String,
    /// Env-var NAME holding the agent-path key.
    #[arg(long)]
    agent_key_env: Option<String>,
    /// Agent step budget per episode.
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
    /// Sampling temperature for both endpoints.
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
    /// Parallel workers.
    #[arg(long, default_value_t = 4)]
    concurrency: usize,
    /// Directory of template overrides (<name>.txt).
    #[arg(long)]
    templates: Option<PathBuf>,
    /// Route records JSONL (appended to across resumes).
    #[arg(long)]
    out: PathBuf,
    /// Optional summary CSV path.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct ServeArgs {
    /// Listen address.
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
}

// ---------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Generate(args) => generate(args),
        Command::Detect(args) => {
            let (g, pattern) = load_query(&args)?;
            println!("{}", yes_no(detect(&g, &pattern)));
            Ok(())
        }
        Command::Count(args) => {
            let (g, pattern) = load_query(&args)?;
            println!("{}", count_instances(&g, &pattern));
            Ok(())
        }
        Command::FirstOccurrence(args) => {
            let (g, pattern) = load_query(&args)?;
            match first_occurrence(&g, &pattern) {
                Some(t) => println!("{t}"),
                None => println!("None"),
            }
            Ok(())
        }
        Command::Construct(args) => {
            let (g, pattern) = load_query(&args)?;
            match construct_completion(&g, &pattern) {
                Some(e) => println!("{}", format_events(&[e])),
                None => println!("No valid single-edge completion exists."),
            }
            Ok(())
        }
        Command::Classify(args) => {
            let (g, pattern) = load_query(&args)?;
            println!("{}", yes_no(classify_exact(&g, &pattern)));
            Ok(())
        }
        Command::Sweep(args) => sweep(args),
        Command::EgoSample(args) => ego(args),
        Command::Bench { command: BenchCommand::Run(args) } => bench_run(args),
        Command::Agent { command: AgentCommand::Run(args) } => agent_run(args),
        Command::Features { command: FeaturesCommand::Extract(args) } => features_extract(args),
        Command::Dispatcher { command } => match command {
            DispatcherCommand::BuildLabels(args) => build_labels(args),
            DispatcherCommand::Train(args) => train(args),
            DispatcherCommand::Route(args) => route(args),
        },
        Command::Tools { command: ToolsCommand::Serve(args) } => serve(args),
    }
}

// ---------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------

fn yes_no(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

fn parse_task(name: &str) -> Result<TaskKind> {
    TaskKind::from_str(name).ok_or_else(|| {
        let known: Vec<&str> = ALL_TASKS.iter().map(|t| t.as_str()).collect();
        anyhow!("unknown task {name:?}; known tasks: {}", known.join(", "))
    })
}

fn parse_strategy(name: &str) -> Result<Strategy> {
    let all = [
        Strategy::ZeroShot,
        Strategy::OneShot,
        Strategy::ZeroShotCot,
        Strategy::OneShotCot,
    ];
    all.into_iter().find(|s| s.as_str() == name).ok_or_else(|| {
        let known: Vec<&str> = all.iter().map(|s| s.as_str()).collect();
        anyhow!("unknown strategy {name:?}; known strategies: {}", known.join(", "))
    })
}

fn lookup_pattern(motif: &str, delta: u64) -> Result<MotifPattern> {
    catalog_pattern(motif, delta)
        .ok_or_else(|| anyhow!("unknown motif {motif:?}; known motifs: {}", catalog_names().join(", ")))
}

/// Events from either JSONL (one `[u,v,t,"a"]` array per line) or the
/// bracketed tuple text format `[(u, v, t, a), ...]`.
fn read_graph(path: &Path) -> Result<DynamicGraph> {
    if let Ok(events) = read_jsonl::<EdgeEvent>(path) {
        return Ok(DynamicGraph::new(events));
    }
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let events = parse_events(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(DynamicGraph::new(events))
}

fn load_query(args: &QueryArgs) -> Result<(DynamicGraph, MotifPattern)> {
    Ok((read_graph(&args.graph)?, lookup_pattern(&args.motif, args.delta)?))
}

fn read_instances(path: &Path) -> Result<Vec<TaskInstance>> {
    let instances: Vec<TaskInstance> = read_jsonl(path)?;
    if instances.is_empty() {
        bail!("{} contains no instances", path.display());
    }
    Ok(instances)
}

fn load_templates(dir: &Option<PathBuf>) -> Result<Templates> {
    Ok(match dir {
        Some(d) => Templates::with_overrides(d)?,
        None => Templates::default(),
    })
}

/// `1,2,5` and `1-4` (inclusive), in any mix.
fn parse_u64_list(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        match item.split_once('-') {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().with_context(|| format!("bad number {a:?}"))?;
                let b: u64 = b.trim().parse().with_context(|| format!("bad number {b:?}"))?;
                if a > b {
                    bail!("empty range {item:?}");
                }
                out.extend(a..=b);
            }
            None => out.push(item.parse().with_context(|| format!("bad number {item:?}"))?),
        }
    }
    if out.is_empty() {
        bail!("empty list {text:?}");
    }
    Ok(out)
}

fn print_report(report: &RunReport, summary_path: &Option<PathBuf>) -> Result<()> {
    for row in &report.summary {
        let tokens = row
            .avg_tokens
            .map_or_else(|| "-".to_owned(), |t| format!("{t:.1}"));
        println!(
            "{:<22} {:<18} accuracy {:.4}  avg_tokens {}",
            row.task, row.motif, row.accuracy, tokens
        );
    }
    println!(
        "{} records, {} instances attempted this run",
        report.records.len(),
        report.calls_made
    );
    if let Some(path) = summary_path {
        write_summary_csv(&report.summary, path)?;
        println!("summary written to {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------

fn generate(args: GenerateArgs) -> Result<()> {
    let task = parse_task(&args.task)?;
    let has_override =
        args.n.is_some() || args.t.is_some() || args.w.is_some() || args.p.is_some() || args.q.is_some();

    let instances = if !has_override {
        gen_dataset(task, args.motif.as_deref(), args.count, args.seed)?
    } else {
        let motif = args
            .motif
            .as_deref()
            .ok_or_else(|| anyhow!("--n/--t/--w/--p/--q need a single-motif task with --motif"))?;
        let base_params = |seed: u64| -> Result<GenParams> {
            let mut p = match task {
                TaskKind::Classification => settings::classification_params(motif, seed)?,
                TaskKind::Detection => settings::detection_params(motif, seed)?,
                TaskKind::Construction => settings::construction_params(motif, seed)?,
                _ => bail!("--n/--t/--w/--p/--q apply only to classification, detection, construction"),
            };
            if let Some(n) = args.n {
                p.n = n;
            }
            if let Some(t) = args.t {
                p.t_span = t;
            }
            if let Some(w) = args.w {
                p.window = Some(w);
            }
            if let Some(prob) = args.p {
                p.p = prob;
            }
            if let Some(q) = args.q {
                p.del_prob = q;
            }
            Ok(p)
        };
        let mut out = Vec::with_capacity(args.count);
        for i in 0..args.count {
            let params = base_params(args.seed + i as u64)?;
            let inst = match task {
                TaskKind::Classification => {
                    let positive = i % 2 == 0;
                    let violation = (!positive).then(|| ALL_VIOLATIONS[(i / 2) % 3]);
                    gen_classification_instance(motif, &params, positive, violation)?
                }
                TaskKind::Detection => gen_detection_instance(motif, &params)?,
                TaskKind::Construction => gen_construction_instance(motif, &params)?,
                _ => unreachable!("filtered above"),
            };
            out.push(inst);
        }
        out
    };

    write_jsonl(&args.out, &instances)?;
    println!("wrote {} instances to {}", instances.len(), args.out.display());
    Ok(())
}

// ---------------------------------------------------------------------
// sweep / ego-sample
// ---------------------------------------------------------------------

fn sweep(args: SweepArgs) -> Result<()> {
    let rows = parameter_sweep(
        &args.motif,
        &parse_u64_list(&args.ns).context("--ns")?,
        &parse_u64_list(&args.t_spans).context("--t-spans")?,
        &parse_u64_list(&args.windows).context("--windows")?,
        &parse_u64_list(&args.seeds).context("--seeds")?,
        args.p,
        args.q,
    )?;
    if let Some(dir) = args.out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&args.out, sweep_csv(&rows))
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!("wrote {} sweep rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn ego(args: EgoArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.snapshot)
        .with_context(|| format!("reading {}", args.snapshot.display()))?;
    let events = parse_snapshot(&text)?;
    let sample = ego_sample(&events, args.center, args.hops, args.cap, args.seed)?;
    write_jsonl(&args.out, &sample)?;
    println!(
        "kept {} of {} events; sample written to {}",
        sample.len(),
        events.len(),
        args.out.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------
// bench run / agent run
// ---------------------------------------------------------------------

fn bench_run(args: BenchRunArgs) -> Result<()> {
    let instances = read_instances(&args.instances)?;
    let strategy = parse_strategy(&args.strategy)?;
    let templates = load_templates(&args.templates)?;
    let report = run_benchmark(
        &instances,
        strategy,
        &templates,
        &args.endpoint.config(),
        args.concurrency,
        &args.out,
    )?;
    print_report(&report, &args.summary)
}

fn agent_run(args: AgentRunArgs) -> Result<()> {
    let instances = read_instances(&args.instances)?;
    let templates = load_templates(&args.templates)?;
    let model = EndpointModel(args.endpoint.config());
    let report = run_agent_benchmark(
        &instances,
        &model,
        &templates,
        args.max_steps,
        args.concurrency,
        &args.out,
    )?;
    print_report(&report, &args.summary)
}

// ---------------------------------------------------------------------
// features / dispatcher
// ---------------------------------------------------------------------

fn features_extract(args: FeaturesExtractArgs) -> Result<()> {
    let instances = read_instances(&args.instances)?;
    if let Some(dir) = args.out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut w = csv::Writer::from_path(&args.out)?;
    let mut header = vec!["id"];
    header.extend_from_slice(&FEATURE_NAMES);
    w.write_record(&header)?;
    for instance in &instances {
        let f = extract_features(&instance.dynamic_graph());
        let mut record = vec![instance.id.clone()];
        record.extend(f.to_array().iter().map(|x| format!("{x}")));
        w.write_record(&record)?;
    }
    w.flush()?;
    println!("wrote {} feature rows to {}", instances.len(), args.out.display());
    Ok(())
}

fn build_labels(args: BuildLabelsArgs) -> Result<()> {
    let instances = read_instances(&args.instances)?;
    let records: Vec<ResultRecord> = read_jsonl(&args.records)?;
    let dataset = build_label_dataset(&instances, &records);
    if dataset.skipped > 0 {
        eprintln!(
            "warning: skipped {} instances without an answered record",
            dataset.skipped
        );
    }
    write_labels_csv(&dataset.rows, &args.out)?;
    let hard: usize = dataset.rows.iter().map(|r| r.label as usize).sum();
    println!(
        "wrote {} labeled rows ({} hard) to {}",
        dataset.rows.len(),
        hard,
        args.out.display()
    );
    Ok(())
}

fn train(args: TrainArgs) -> Result<()> {
    let rows = read_labels_csv(&args.labels)?;
    let features: Vec<Vec<f64>> = rows.iter().map(|r| r.features.to_vec()).collect();
    let labels: Vec<u8> = rows.iter().map(|r| r.label).collect();
    let params = TrainParams {
        n_trees: args.trees,
        max_depth: args.depth,
        learning_rate: args.learning_rate,
        lambda: args.l2,
        min_leaf: args.min_leaf,
        holdout_frac: args.holdout,
        seed: args.seed,
        theta: args.theta,
    };
    let report = train_classifier(&features, &labels, &params, Vec::new())?;
    report.model.save(&args.out)?;
    let holdout = report
        .holdout_accuracy
        .map_or_else(|| "-".to_owned(), |a| format!("{a:.4}"));
    println!(
        "trained on {} rows; holdout accuracy {holdout} over {} rows; model written to {}",
        rows.len(),
        report.holdout_size,
        args.out.display()
    );
    Ok(())
}

fn route(args: RouteArgs) -> Result<()> {
    let instances = read_instances(&args.instances)?;
    let templates = load_templates(&args.templates)?;

    let loaded_model = args
        .model
        .as_deref()
        .map(DifficultyModel::load)
        .transpose()?;
    let policy = match (&loaded_model, args.random_p, args.fixed.as_deref()) {
        (Some(m), None, None) => RoutePolicy::Model(m),
        (None, Some(p), None) => {
            let seed = args
                .seed
                .ok_or_else(|| anyhow!("--random-p requires an explicit --seed"))?;
            RoutePolicy::Random { p_agent: p, seed }
        }
        (None, None, Some("direct")) => RoutePolicy::Fixed(Route::Direct),
        (None, None, Some("agent")) => RoutePolicy::Fixed(Route::Agent),
        (None, None, Some(other)) => bail!("--fixed must be direct or agent, not {other:?}"),
        _ => bail!("pick exactly one policy: --model, --random-p, or --fixed"),
    };

    let direct = DirectSolver {
        endpoint: EndpointConfig {
            base_url: args.direct_base_url.clone(),
            model: args.direct_model.clone(),
            api_key_env: args.direct_key_env.clone(),
            temperature: args.temperature,
            max_retries: 2,
            timeout_secs: 120,
        },
        strategy: parse_strategy(&args.strategy)?,
        templates: templates.clone(),
    };
    let agent = AgentSolver {
        model: EndpointModel(EndpointConfig {
            base_url: args.agent_base_url.clone(),
            model: args.agent_model.clone(),
            api_key_env: args.agent_key_env.clone(),
            temperature: args.temperature,
            max_retries: 2,
            timeout_secs: 120,
        }),
        templates,
        max_steps: args.max_steps,
    };

    let records =
        run_routed_benchmark(&instances, &policy, &direct, &agent, args.concurrency, &args.out)?;
    let summary = route_summary(&records);
    for row in &summary {
        let tokens = row
            .avg_tokens
            .map_or_else(|| "-".to_owned(), |t| format!("{t:.1}"));
        println!(
            "{:<8} count {:<5} accuracy {:.4}  avg_tokens {}",
            row.route, row.count, row.accuracy, tokens
        );
    }
    if let Some(path) = &args.summary {
        write_route_summary_csv(&summary, path)?;
        println!("summary written to {}", path.display());
    }
    Ok(())
}

fn write_route_summary_csv(
    rows: &[dispatcher::RouteSummaryRow],
    path: &Path,
) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["route", "count", "accuracy", "avg_tokens"])?;
    for row in rows {
        w.write_record([
            row.route.clone(),
            row.count.to_string(),
            format!("{:.4}", row.accuracy),
            row.avg_tokens.map_or_else(String::new, |t| format!("{t:.1}")),
        ])?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------
// tools serve
// ---------------------------------------------------------------------

fn serve(args: ServeArgs) -> Result<()> {
    use axum::extract::Path as UrlPath;
    use axum::routing::post;
    use axum::Json;

    async fn handle(
        UrlPath(name): UrlPath<String>,
        Json(input): Json<serde_json::Value>,
    ) -> Json<serde_json::Value> {
        let observation = call_tool(&name, &input);
        Json(serde_json::json!({ "observation": observation }))
    }

    let app = axum::Router::new().route("/tools/{name}", post(handle));
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .context("starting async runtime")?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(args.addr)
            .await
            .with_context(|| format!("binding {}", args.addr))?;
        println!("serving tools [{}] on http://{}/tools/<name>", tool_names(), args.addr);
        axum::serve(listener, app).await.context("serving")
    })
}
