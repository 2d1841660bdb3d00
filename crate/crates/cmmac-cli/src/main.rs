//! Batch front-end for the co-membership anomaly-ranking pipeline.
//!
//! Exit codes: 0 success, 1 runtime or data error, 2 usage error.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use cmmac::baselines::BaselineMethod;
use cmmac::classifier::ClassifierKind;
use cmmac::eval::{
    run_experiment, run_sweep, write_cells_csv, write_plot_json, write_results_csv,
    write_scorecards_csv, DatasetRecipe, ExperimentConfig, PolarityMode, SweepSpec,
};
use cmmac::graph::{LabeledDataset, Network, PartitionMap};
use cmmac::metafeatures::MetaFeature;
use cmmac::netgen::{self, GeneratorKind, GeneratorSpec, GroupParams, SizeMode};

#[derive(Parser)]
#[command(name = "cmmac", version, about = "Co-membership based anomalous community ranking")]
struct Cli {
    /// Worker threads for sweep parallelism (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a fully-simulated labeled dataset directory
    Generate(GenerateArgs),
    /// Attach generated anomalous communities to an existing network
    Infuse(InfuseArgs),
    /// Score and rank the communities of a network (no labels needed)
    Rank(RankArgs),
    /// Run the labeled train/test protocol and report per-method precision
    Evaluate(EvaluateArgs),
    /// Run a parameter-grid sweep of generated datasets
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator spec JSON (normal/anomalous groups and seed)
    #[arg(long, conflicts_with = "preset")]
    spec: Option<PathBuf>,
    /// Built-in recipe: simulated-small | simulated-paper
    #[arg(long)]
    preset: Option<String>,
    /// Seed override (mandatory when using --preset)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "dataset")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct InfuseArgs {
    /// Base network edge list
    #[arg(long)]
    edges: PathBuf,
    /// Base partition map JSON
    #[arg(long)]
    partitions: PathBuf,
    /// Anomalous community algorithm: er | ba
    #[arg(long, default_value = "er")]
    alg: String,
    /// ER edge probability or BA m
    #[arg(long)]
    args: f64,
    /// Fraction of anomalous vertices interconnected to base communities
    #[arg(long)]
    inter_p: f64,
    /// Anomalous community count
    #[arg(long, default_value_t = 10)]
    n_anom: usize,
    /// Size mode over the base community-size distribution: q0, q0.25, ..., random
    #[arg(long, default_value = "q0")]
    size_mode: String,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "dataset")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    edges: PathBuf,
    /// Communities to score
    #[arg(long)]
    partitions: PathBuf,
    /// Separate training partition map; defaults to training on --partitions
    #[arg(long)]
    train_partitions: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Bottom-k summary size
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// gbdt | logistic
    #[arg(long, default_value = "gbdt")]
    classifier: String,
    /// Comma-separated method filter (meta-feature and baseline names,
    /// plus the aliases cmmac and baselines)
    #[arg(long)]
    methods: Option<String>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Dataset directory holding edges.txt, partitions.json, labels.json
    #[arg(long, conflicts_with_all = ["edges", "partitions", "labels"])]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    partitions: Option<PathBuf>,
    /// Ground-truth JSON: {"anomalous": [...]}
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    n_train: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// gbdt | logistic
    #[arg(long, default_value = "gbdt")]
    classifier: String,
    /// Baseline polarity table: evaluation | literature
    #[arg(long, default_value = "evaluation")]
    polarity: String,
    #[arg(long)]
    methods: Option<String>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Built-in grid: desk | paper
    #[arg(long, conflicts_with = "grid")]
    preset: Option<String>,
    /// SweepSpec JSON
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Override seeds per cell
    #[arg(long)]
    seeds: Option<u64>,
    /// Override the sweep base seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "sweep")]
    out_dir: PathBuf,
}

fn parse_methods(raw: &Option<String>) -> anyhow::Result<Option<BTreeSet<String>>> {
    let Some(raw) = raw else { return Ok(None) };
    let mut out = BTreeSet::new();
    for tok in raw.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok {
            "cmmac" => out.extend(MetaFeature::ALL.iter().map(|m| m.name().to_string())),
            "baselines" => out.extend(BaselineMethod::ALL.iter().map(|m| m.name().to_string())),
            name => {
                let known = MetaFeature::ALL.iter().any(|m| m.name() == name)
                    || BaselineMethod::ALL.iter().any(|m| m.name() == name);
                if !known {
                    bail!("unknown method {name:?}");
                }
                out.insert(name.to_string());
            }
        }
    }
    Ok(Some(out))
}

fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Heavy-tailed surrogate for a real community-size distribution
/// (Pareto-like, mean around 520, capped at 10k).
fn paper_scale_sizes(n: usize, seed: u64) -> Vec<usize> {
    use rand::Rng;
    let mut rng = seeded_rng(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(1e-6..1.0);
            ((85.0 * u.powf(-1.0 / 1.2)) as usize).clamp(30, 10_000)
        })
        .collect()
}

fn preset_spec(preset: &str, seed: u64) -> anyhow::Result<GeneratorSpec> {
    match preset {
        "simulated-small" => {
            let recipe = DatasetRecipe::desk();
            Ok(recipe.spec(0.05, 0.2, SizeMode::Quantile(0.0), seed)?)
        }
        "simulated-paper" => {
            let sizes = paper_scale_sizes(110, seed);
            let mut rng = seeded_rng(seed ^ 0xA5);
            let anom_sizes = netgen::sample_sizes(&sizes, SizeMode::Quantile(0.0), 10, &mut rng)?;
            Ok(GeneratorSpec {
                normal: GroupParams {
                    alg: GeneratorKind::BarabasiAlbert,
                    comm_sizes: sizes,
                    args: 1.0,
                    inter_p: 0.075,
                },
                anomalous: GroupParams {
                    alg: GeneratorKind::ErdosRenyi,
                    comm_sizes: anom_sizes,
                    args: 0.04,
                    inter_p: 0.2,
                },
                seed,
            })
        }
        other => bail!("unknown preset {other:?} (expected simulated-small or simulated-paper)"),
    }
}

fn cmd_generate(args: &GenerateArgs) -> anyhow::Result<()> {
    let spec = match (&args.spec, &args.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading spec {}", path.display()))?;
            let mut spec: GeneratorSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            if let Some(seed) = args.seed {
                spec.seed = seed;
            }
            spec
        }
        (None, Some(preset)) => {
            let seed = args.seed.context("--preset needs --seed to pin the dataset")?;
            preset_spec(preset, seed)?
        }
        _ => bail!("exactly one of --spec or --preset is required"),
    };
    let ds = netgen::generate(&spec)?;
    ds.save_dir(&args.out_dir)?;
    println!(
        "wrote {} ({} vertices, {} edges, {} communities, {} anomalous)",
        args.out_dir.display(),
        ds.network.vertex_count(),
        ds.network.edge_count(),
        ds.partitions.len(),
        ds.anomalous_ids.len()
    );
    Ok(())
}

fn cmd_infuse(args: &InfuseArgs) -> anyhow::Result<()> {
    let base = Network::load_edge_list_full(&args.edges)?;
    let partitions = PartitionMap::load_json(&args.partitions)?;
    let alg = match args.alg.as_str() {
        "er" => GeneratorKind::ErdosRenyi,
        "ba" => GeneratorKind::BarabasiAlbert,
        other => bail!("unknown algorithm {other:?} (expected er or ba)"),
    };
    let mode: SizeMode = args.size_mode.parse()?;
    let dist: Vec<usize> = partitions.iter().map(|(_, m)| m.len()).collect();
    let mut rng = seeded_rng(args.seed ^ 0x517E);
    let comm_sizes = netgen::sample_sizes(&dist, mode, args.n_anom, &mut rng)?;
    let group = GroupParams {
        alg,
        comm_sizes,
        args: args.args,
        inter_p: args.inter_p,
    };
    let ds = netgen::infuse(&base, &partitions, &group, args.seed)?;
    ds.save_dir(&args.out_dir)?;
    println!(
        "wrote {} ({} vertices, {} edges, {} communities incl. {} infused)",
        args.out_dir.display(),
        ds.network.vertex_count(),
        ds.network.edge_count(),
        ds.partitions.len(),
        ds.anomalous_ids.len()
    );
    Ok(())
}

fn cmd_rank(args: &RankArgs) -> anyhow::Result<()> {
    use cmmac::bipartite::BipartiteView;
    use cmmac::classifier::{build_training_set, train_with, DEFAULT_CLASS_CAP};
    use cmmac::features::{feature_row_with_mode, FeatureMode};
    use cmmac::metafeatures::{bottom_k, rank_communities, score_community};

    let network = Network::load_edge_list_full(&args.edges)?;
    let partitions = PartitionMap::load_json(&args.partitions)?;
    partitions.validate_against(&network)?;
    let train_partitions = match &args.train_partitions {
        Some(p) => PartitionMap::load_json(p)?,
        None => partitions.clone(),
    };
    train_partitions.validate_against(&network)?;

    let classifier: ClassifierKind = args.classifier.parse()?;
    let methods = parse_methods(&args.methods)?;
    let enabled = |name: &str| methods.as_ref().is_none_or(|m| m.contains(name));

    let train_bpg = BipartiteView::build(&network, &train_partitions)?;
    let score_bpg = BipartiteView::build(&network, &partitions)?;
    let mut rng = seeded_rng(args.seed);
    let ts = build_training_set(&train_bpg, &mut rng, FeatureMode::MaskTargetEdge, DEFAULT_CLASS_CAP)?;
    let predictor = train_with(&ts, classifier, Default::default(), args.seed)?;

    let mut scorecards = Vec::new();
    for (id, members) in partitions.iter() {
        let pairs = score_bpg.candidate_edges(std::slice::from_ref(id))?;
        let rows = pairs
            .iter()
            .map(|(v, c)| {
                feature_row_with_mode(&score_bpg, *v, c, None, FeatureMode::MaskTargetEdge)
            })
            .collect::<cmmac::Result<Vec<_>>>()?;
        let probs = predictor.predict_proba(&rows)?;
        scorecards.push(score_community(id.clone(), &probs, args.threshold, members.len())?);
    }

    let mut baseline_scores = std::collections::BTreeMap::new();
    let mut orderings: Vec<(String, Vec<String>)> = Vec::new();
    for meta in MetaFeature::ALL {
        if enabled(meta.name()) {
            orderings.push((meta.name().to_string(), rank_communities(&scorecards, meta)?));
        }
    }
    for method in BaselineMethod::ALL {
        if !enabled(method.name()) {
            continue;
        }
        for (id, members) in partitions.iter() {
            let score = cmmac::baselines::score_by_baseline(&network, members, method)?;
            baseline_scores
                .entry(id.clone())
                .or_insert_with(std::collections::BTreeMap::new)
                .insert(method.name().to_string(), score);
        }
        orderings.push((
            method.name().to_string(),
            cmmac::baselines::rank_by_baseline(
                &network,
                &partitions,
                method,
                method.default_polarity(),
            )?,
        ));
    }
    for (method, ordering) in &orderings {
        for (pos, id) in ordering.iter().enumerate() {
            if let Some(card) = scorecards.iter_mut().find(|c| &c.community == id) {
                card.ranks.insert(method.clone(), pos + 1);
            }
        }
    }

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let out = cmmac::eval::ExperimentOutput {
        scorecards,
        baseline_scores,
        ranked: Vec::new(),
        aps: Default::default(),
        train_auc: predictor.meta.train_auc,
        anomalous: BTreeSet::new(),
    };
    let card_path = args.out_dir.join("scorecards.csv");
    write_scorecards_csv(&out, &card_path)?;
    println!("scorecards: {}", card_path.display());
    let k = args.k.min(partitions.len());
    for (method, ordering) in &orderings {
        let bottom = bottom_k(ordering, k)?;
        println!("{method}: {}", bottom.join(", "));
    }
    Ok(())
}

fn load_eval_dataset(args: &EvaluateArgs) -> anyhow::Result<LabeledDataset> {
    if let Some(dir) = &args.data_dir {
        return Ok(LabeledDataset::load_dir(dir)?);
    }
    let (Some(edges), Some(partitions), Some(labels)) =
        (&args.edges, &args.partitions, &args.labels)
    else {
        bail!("evaluate needs --data-dir or all of --edges/--partitions/--labels");
    };
    let network = Network::load_edge_list_full(edges)?;
    let partitions = PartitionMap::load_json(partitions)?;
    let text = std::fs::read_to_string(labels)
        .with_context(|| format!("reading labels {}", labels.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", labels.display()))?;
    let anomalous: BTreeSet<String> = value
        .get("anomalous")
        .and_then(|a| a.as_array())
        .context("labels file needs an \"anomalous\" array")?
        .iter()
        .filter_map(|v| v.as_str().map(str::to_string))
        .collect();
    let ds = LabeledDataset {
        network,
        partitions,
        anomalous_ids: anomalous,
        params: serde_json::Value::Null,
    };
    ds.validate()?;
    Ok(ds)
}

fn cmd_evaluate(args: &EvaluateArgs) -> anyhow::Result<()> {
    let ds = load_eval_dataset(args)?;
    let classifier: ClassifierKind = args.classifier.parse()?;
    let polarity: PolarityMode = args.polarity.parse()?;
    let cfg = ExperimentConfig {
        n_train: args.n_train,
        threshold: args.threshold,
        split_seed: args.seed,
        model_seed: args.seed ^ 0x30DE1,
        classifier,
        polarity,
        methods: parse_methods(&args.methods)?,
        ..ExperimentConfig::default()
    };
    let out = run_experiment(&ds, &cfg)?;
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    write_scorecards_csv(&out, args.out_dir.join("scorecards.csv"))?;
    let mut ap_csv = String::from("method,ap\n");
    println!("train AUC: {:.4}", out.train_auc);
    println!("{:<28} {:>8}", "method", "AP");
    for (method, ap) in &out.aps {
        println!("{method:<28} {ap:>8.4}");
        ap_csv.push_str(&format!("{method},{ap}\n"));
    }
    std::fs::write(args.out_dir.join("aps.csv"), ap_csv).context("writing aps.csv")?;
    println!("outputs in {}", args.out_dir.display());
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> anyhow::Result<()> {
    let mut spec = match (&args.preset, &args.grid) {
        (Some(p), None) => match p.as_str() {
            "desk" => SweepSpec::desk(),
            "paper" => SweepSpec::paper_grid(),
            other => bail!("unknown sweep preset {other:?} (expected desk or paper)"),
        },
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading grid {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        _ => bail!("exactly one of --preset or --grid is required"),
    };
    if let Some(seeds) = args.seeds {
        spec.seeds_per_cell = seeds;
    }
    if let Some(seed) = args.seed {
        spec.base_seed = seed;
    }
    let out = run_sweep(&spec)?;
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    write_results_csv(&out.rows, args.out_dir.join("results.csv"))?;
    write_cells_csv(&out.cells, args.out_dir.join("cells.csv"))?;
    write_plot_json(&spec, &out, args.out_dir.join("plot.json"))?;
    println!(
        "swept {} cells x {} seeds ({} rows) into {}",
        out.cells.len() / 10,
        spec.seeds_per_cell,
        out.rows.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Infuse(args) => cmd_infuse(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
