//! Train/test protocol, average precision, and the parameter-grid sweep
//! runner. A sweep cell is one (anomaly density, interconnect fraction,
//! size mode) combination; cells run independently under per-seed RNG
//! streams, so results are byte-stable regardless of thread count.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{rank_by_baseline, BaselineMethod, Polarity};
use crate::bipartite::BipartiteView;
use crate::classifier::{
    build_training_set, train_with, ClassifierKind, Hyperparameters, DEFAULT_CLASS_CAP,
};
use crate::error::{Error, Result};
use crate::features::{feature_row_with_mode, FeatureMode};
use crate::graph::{CommunityId, LabeledDataset};
use crate::metafeatures::{rank_communities, score_community, CommunityScoreCard, MetaFeature};
use crate::netgen::{self, sample_sizes, GeneratorKind, GeneratorSpec, GroupParams, SizeMode};

/// One method's anomaly-first ordering over the test communities, paired
/// with the ground truth it is judged against.
#[derive(Debug, Clone)]
pub struct RankedResult {
    pub method: String,
    pub ordering: Vec<CommunityId>,
    pub anomalous: BTreeSet<CommunityId>,
}

/// Average precision of an anomaly-first ordering: precision accumulated at
/// each true anomaly's rank, averaged over the anomaly count.
pub fn average_precision(r: &RankedResult) -> Result<f64> {
    if r.anomalous.is_empty() {
        return Err(Error::Degenerate("no anomalous communities in ground truth".into()));
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (k, id) in r.ordering.iter().enumerate() {
        if r.anomalous.contains(id) {
            hits += 1;
            sum += hits as f64 / (k + 1) as f64;
        }
    }
    if hits == 0 {
        return Err(Error::Degenerate(
            "ordering contains none of the anomalous communities".into(),
        ));
    }
    Ok(sum / r.anomalous.len() as f64)
}

pub fn mean_average_precision(results: &[RankedResult]) -> Result<f64> {
    if results.is_empty() {
        return Err(Error::Degenerate("no results to average".into()));
    }
    let mut total = 0.0;
    for r in results {
        total += average_precision(r)?;
    }
    Ok(total / results.len() as f64)
}

/// Which polarity table the baselines run under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarityMode {
    /// Directions that reproduce the comparative evaluation (default).
    #[default]
    Evaluation,
    /// The separation-violating directions from the community-quality
    /// literature.
    Literature,
}

impl PolarityMode {
    pub fn polarity_for(&self, method: BaselineMethod) -> Polarity {
        match self {
            PolarityMode::Evaluation => method.default_polarity(),
            PolarityMode::Literature => method.literature_polarity(),
        }
    }
}

impl std::str::FromStr for PolarityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "evaluation" => Ok(PolarityMode::Evaluation),
            "literature" => Ok(PolarityMode::Literature),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n_train: usize,
    pub threshold: f64,
    pub split_seed: u64,
    pub model_seed: u64,
    pub classifier: ClassifierKind,
    pub hyper: Hyperparameters,
    pub feature_mode: FeatureMode,
    pub polarity: PolarityMode,
    pub per_class_cap: usize,
    /// Restrict output to these method names; None keeps all ten.
    pub methods: Option<BTreeSet<String>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_train: 6,
            threshold: 0.5,
            split_seed: 1,
            model_seed: 2,
            classifier: ClassifierKind::GradientBoosting,
            hyper: Hyperparameters::default(),
            feature_mode: FeatureMode::MaskTargetEdge,
            polarity: PolarityMode::Evaluation,
            per_class_cap: DEFAULT_CLASS_CAP,
            methods: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub scorecards: Vec<CommunityScoreCard>,
    /// community -> baseline name -> raw score
    pub baseline_scores: BTreeMap<CommunityId, BTreeMap<String, f64>>,
    pub ranked: Vec<RankedResult>,
    /// method name -> average precision
    pub aps: BTreeMap<String, f64>,
    pub train_auc: f64,
    /// communities labeled anomalous in the ground truth
    pub anomalous: BTreeSet<CommunityId>,
}

fn method_enabled(cfg: &ExperimentConfig, name: &str) -> bool {
    cfg.methods.as_ref().is_none_or(|m| m.contains(name))
}

/// Full pipeline on one labeled dataset: split, build the train and test
/// views, train the link predictor, aggregate per-community meta-features,
/// rank by every enabled method, and compute average precision per method.
pub fn run_experiment(ds: &LabeledDataset, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    ds.validate()?;
    if ds.anomalous_ids.is_empty() {
        return Err(Error::Degenerate("dataset has no anomaly labels".into()));
    }
    let (train_parts, test_parts) = ds.partitions.split(cfg.n_train, &ds.anomalous_ids, cfg.split_seed)?;
    let train_bpg = BipartiteView::build(&ds.network, &train_parts)?;
    let test_bpg = BipartiteView::build(&ds.network, &test_parts)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.model_seed);
    let ts = build_training_set(&train_bpg, &mut rng, cfg.feature_mode, cfg.per_class_cap)?;
    let predictor = train_with(&ts, cfg.classifier, cfg.hyper, cfg.model_seed)?;

    let mut scorecards = Vec::with_capacity(test_parts.len());
    for (id, members) in test_parts.iter() {
        let pairs = test_bpg.candidate_edges(std::slice::from_ref(id))?;
        let rows = pairs
            .iter()
            .map(|(v, c)| feature_row_with_mode(&test_bpg, *v, c, None, cfg.feature_mode))
            .collect::<Result<Vec<_>>>()?;
        let probs = predictor.predict_proba(&rows)?;
        scorecards.push(score_community(id.clone(), &probs, cfg.threshold, members.len())?);
    }

    let mut ranked = Vec::new();
    for meta in MetaFeature::ALL {
        if method_enabled(cfg, meta.name()) {
            ranked.push(RankedResult {
                method: meta.name().to_string(),
                ordering: rank_communities(&scorecards, meta)?,
                anomalous: ds.anomalous_ids.clone(),
            });
        }
    }

    let mut baseline_scores: BTreeMap<CommunityId, BTreeMap<String, f64>> = BTreeMap::new();
    for method in BaselineMethod::ALL {
        if !method_enabled(cfg, method.name()) {
            continue;
        }
        for (id, members) in test_parts.iter() {
            let score = crate::baselines::score_by_baseline(&ds.network, members, method)?;
            baseline_scores
                .entry(id.clone())
                .or_default()
                .insert(method.name().to_string(), score);
        }
        ranked.push(RankedResult {
            method: method.name().to_string(),
            ordering: rank_by_baseline(
                &ds.network,
                &test_parts,
                method,
                cfg.polarity.polarity_for(method),
            )?,
            anomalous: ds.anomalous_ids.clone(),
        });
    }

    let mut aps = BTreeMap::new();
    for r in &ranked {
        aps.insert(r.method.clone(), average_precision(r)?);
    }
    for r in &ranked {
        for (pos, id) in r.ordering.iter().enumerate() {
            if let Some(card) = scorecards.iter_mut().find(|c| &c.community == id) {
                card.ranks.insert(r.method.clone(), pos + 1);
            }
        }
    }

    Ok(ExperimentOutput {
        scorecards,
        baseline_scores,
        ranked,
        aps,
        train_auc: predictor.meta.train_auc,
        anomalous: ds.anomalous_ids.clone(),
    })
}

/// Desk-scale dataset recipe: BA(m) normal communities with sizes uniform in
/// a range, ER anomalous communities sized from the realized normal sizes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetRecipe {
    pub n_normal: usize,
    pub size_lo: usize,
    pub size_hi: usize,
    pub ba_m: usize,
    pub inter_p_norm: f64,
    pub n_anom: usize,
}

impl DatasetRecipe {
    pub fn desk() -> Self {
        DatasetRecipe {
            n_normal: 20,
            size_lo: 30,
            size_hi: 100,
            ba_m: 1,
            inter_p_norm: 0.075,
            n_anom: 3,
        }
    }

    /// Builds the generator spec for one sweep point. The normal part
    /// depends only on `seed`, so cells sharing a seed share their normal
    /// communities and differ purely in the anomaly parameters.
    pub fn spec(
        &self,
        args_anom: f64,
        inter_p_anom: f64,
        size_mode: SizeMode,
        seed: u64,
    ) -> Result<GeneratorSpec> {
        let mut size_rng = ChaCha8Rng::seed_from_u64(mix(seed, 0xA11CE));
        let normal_sizes: Vec<usize> = (0..self.n_normal)
            .map(|_| {
                use rand::Rng;
                size_rng.gen_range(self.size_lo..=self.size_hi)
            })
            .collect();
        let mut anom_rng = ChaCha8Rng::seed_from_u64(mix(seed, 0xB0B));
        let anom_sizes = sample_sizes(&normal_sizes, size_mode, self.n_anom, &mut anom_rng)?;
        Ok(GeneratorSpec {
            normal: GroupParams {
                alg: GeneratorKind::BarabasiAlbert,
                comm_sizes: normal_sizes,
                args: self.ba_m as f64,
                inter_p: self.inter_p_norm,
            },
            anomalous: GroupParams {
                alg: GeneratorKind::ErdosRenyi,
                comm_sizes: anom_sizes,
                args: args_anom,
                inter_p: inter_p_anom,
            },
            seed,
        })
    }
}

/// splitmix64; stretches one seed into independent streams.
pub fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E3779B97F4A7C15);
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub args_anom: Vec<f64>,
    pub inter_p_anom: Vec<f64>,
    pub size_modes: Vec<SizeMode>,
    pub seeds_per_cell: u64,
    pub base_seed: u64,
    pub recipe: DatasetRecipe,
    pub n_train: usize,
    pub threshold: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.args_anom.is_empty() || self.inter_p_anom.is_empty() || self.size_modes.is_empty() {
            return Err(Error::InvalidParams("empty sweep grid".into()));
        }
        if self.seeds_per_cell == 0 {
            return Err(Error::InvalidParams("seeds_per_cell must be positive".into()));
        }
        Ok(())
    }

    /// Desk-scale reduction of the published fully-simulated grid.
    pub fn desk() -> Self {
        SweepSpec {
            args_anom: vec![0.05, 0.8],
            inter_p_anom: vec![0.05, 0.2, 0.4],
            size_modes: vec![SizeMode::Quantile(0.0), SizeMode::Random],
            seeds_per_cell: 25,
            base_seed: 20220101,
            recipe: DatasetRecipe::desk(),
            n_train: 6,
            threshold: 0.5,
        }
    }

    /// The full published fully-simulated grid (3,200 runs per seed batch);
    /// sizes follow the desk recipe unless overridden.
    pub fn paper_grid() -> Self {
        SweepSpec {
            args_anom: vec![0.01, 0.02, 0.04, 0.08, 0.16],
            inter_p_anom: vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4],
            size_modes: vec![
                SizeMode::Quantile(0.0),
                SizeMode::Quantile(0.1),
                SizeMode::Quantile(0.25),
                SizeMode::Quantile(0.5),
                SizeMode::Random,
            ],
            seeds_per_cell: 5,
            base_seed: 20220101,
            recipe: DatasetRecipe::desk(),
            n_train: 6,
            threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub cell_id: String,
    pub args_anom: f64,
    pub inter_p_anom: f64,
    pub size_mode: String,
    pub seed: u64,
    pub method: String,
    pub ap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub cell_id: String,
    pub args_anom: f64,
    pub inter_p_anom: f64,
    pub size_mode: String,
    pub method: String,
    pub mean_ap: f64,
    pub stderr_ap: f64,
    pub seeds: u64,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub cells: Vec<CellSummary>,
}

impl SweepOutput {
    pub fn cell_mean(&self, args: f64, ip: f64, mode: &str, method: &str) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| {
                c.args_anom == args && c.inter_p_anom == ip && c.size_mode == mode && c.method == method
            })
            .map(|c| c.mean_ap)
    }
}

fn cell_id(args: f64, ip: f64, mode: &SizeMode) -> String {
    format!("args{args}_ip{ip}_{mode}")
}

/// Runs the grid; each (cell, seed) job generates its dataset and executes
/// the full experiment. Jobs are independent and run on the rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput> {
    spec.validate()?;
    let mut jobs = Vec::new();
    for &args in &spec.args_anom {
        for &ip in &spec.inter_p_anom {
            for mode in &spec.size_modes {
                for seed_idx in 0..spec.seeds_per_cell {
                    jobs.push((args, ip, *mode, seed_idx));
                }
            }
        }
    }
    let results: Vec<Result<Vec<SweepRow>>> = jobs
        .par_iter()
        .map(|&(args, ip, mode, seed_idx)| {
            let dataset_seed = mix(spec.base_seed, seed_idx);
            let gen_spec = spec.recipe.spec(args, ip, mode, dataset_seed)?;
            let ds = netgen::generate(&gen_spec)?;
            let cfg = ExperimentConfig {
                n_train: spec.n_train,
                threshold: spec.threshold,
                split_seed: mix(spec.base_seed, seed_idx ^ 0x5EED),
                model_seed: mix(spec.base_seed, seed_idx ^ 0x30DE1),
                ..ExperimentConfig::default()
            };
            let out = run_experiment(&ds, &cfg)?;
            Ok(out
                .aps
                .iter()
                .map(|(method, &ap)| SweepRow {
                    cell_id: cell_id(args, ip, &mode),
                    args_anom: args,
                    inter_p_anom: ip,
                    size_mode: mode.to_string(),
                    seed: seed_idx,
                    method: method.clone(),
                    ap,
                })
                .collect())
        })
        .collect();

    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    rows.sort_by(|a, b| {
        (a.cell_id.as_str(), a.seed, a.method.as_str())
            .cmp(&(b.cell_id.as_str(), b.seed, b.method.as_str()))
    });

    let mut grouped: BTreeMap<(String, String), Vec<&SweepRow>> = BTreeMap::new();
    for row in &rows {
        grouped
            .entry((row.cell_id.clone(), row.method.clone()))
            .or_default()
            .push(row);
    }
    let mut cells = Vec::new();
    for ((cid, method), group) in grouped {
        let n = group.len() as f64;
        let mean = group.iter().map(|r| r.ap).sum::<f64>() / n;
        let var = group.iter().map(|r| (r.ap - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        let first = group[0];
        cells.push(CellSummary {
            cell_id: cid,
            args_anom: first.args_anom,
            inter_p_anom: first.inter_p_anom,
            size_mode: first.size_mode.clone(),
            method,
            mean_ap: mean,
            stderr_ap: (var / n).sqrt(),
            seeds: group.len() as u64,
        });
    }
    Ok(SweepOutput { rows, cells })
}

/// `cell_id,args_anom,inter_p_anom,size_mode,seed,method,ap`
pub fn write_results_csv(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from("cell_id,args_anom,inter_p_anom,size_mode,seed,method,ap\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.cell_id, r.args_anom, r.inter_p_anom, r.size_mode, r.seed, r.method, r.ap
        ));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn write_cells_csv(cells: &[CellSummary], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from("cell_id,args_anom,inter_p_anom,size_mode,method,mean_ap,stderr_ap,seeds\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            c.cell_id, c.args_anom, c.inter_p_anom, c.size_mode, c.method, c.mean_ap, c.stderr_ap, c.seeds
        ));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Plot-ready JSON mirroring the subplot-grid layout: one row per anomaly
/// density, one column per size mode, interconnect fraction on the x axis.
pub fn write_plot_json(spec: &SweepSpec, out: &SweepOutput, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut cells = serde_json::Map::new();
    for c in &out.cells {
        cells
            .entry(c.cell_id.clone())
            .or_insert_with(|| serde_json::json!({}))
            .as_object_mut()
            .expect("object")
            .insert(
                c.method.clone(),
                serde_json::json!({"mean_ap": c.mean_ap, "stderr_ap": c.stderr_ap, "seeds": c.seeds}),
            );
    }
    let doc = serde_json::json!({
        "rows_args_anom": spec.args_anom,
        "cols_size_mode": spec.size_modes.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "x_inter_p_anom": spec.inter_p_anom,
        "cells": cells,
    });
    std::fs::write(path, serde_json::to_string_pretty(&doc).expect("serializable") + "\n")
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Scorecard CSV: per test community, the four meta-features, the six
/// baseline scores, every rank, and the ground-truth label when known.
pub fn write_scorecards_csv(out: &ExperimentOutput, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let meta_names: Vec<&str> = MetaFeature::ALL.iter().map(|m| m.name()).collect();
    let base_names: Vec<&str> = BaselineMethod::ALL.iter().map(|m| m.name()).collect();
    let mut header = String::from("community,member_count");
    for m in &meta_names {
        header.push_str(&format!(",{m}"));
    }
    for b in &base_names {
        header.push_str(&format!(",{b}"));
    }
    for m in meta_names.iter().chain(base_names.iter()) {
        header.push_str(&format!(",rank_{m}"));
    }
    header.push_str(",label\n");
    let mut text = header;
    for card in &out.scorecards {
        let mut line = format!("{},{}", card.community, card.member_count);
        for m in MetaFeature::ALL {
            line.push_str(&format!(",{}", card.meta(m)));
        }
        for b in &base_names {
            let v = out
                .baseline_scores
                .get(&card.community)
                .and_then(|m| m.get(*b))
                .copied();
            match v {
                Some(v) => line.push_str(&format!(",{v}")),
                None => line.push(','),
            }
        }
        for m in meta_names.iter().chain(base_names.iter()) {
            match card.ranks.get(*m) {
                Some(r) => line.push_str(&format!(",{r}")),
                None => line.push(','),
            }
        }
        if out.anomalous.is_empty() {
            line.push_str(",\n"); // unlabeled run
        } else {
            let label = u8::from(out.anomalous.contains(&card.community));
            line.push_str(&format!(",{label}\n"));
        }
        text.push_str(&line);
    }
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}
