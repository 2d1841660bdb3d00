//! Link-prediction classifier: balanced training-set construction from a
//! bipartite view, a gradient-boosted default learner with a logistic
//! fallback, and a versioned serialized form that refuses mismatched
//! feature schemas.

mod gbdt;
mod logistic;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bipartite::BipartiteView;
use crate::error::{Error, Result};
use crate::features::{feature_row_with_mode, EdgeFeatureRow, FeatureMode, FEATURE_NAMES};

use gbdt::GbdtModel;
use logistic::LogisticModel;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Uniform subsampling kicks in above this many positives per class.
pub const DEFAULT_CLASS_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub n_trees: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub l2: f64,
    pub min_samples_leaf: usize,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            n_trees: 200,
            max_depth: 3,
            learning_rate: 0.1,
            l2: 1.0,
            min_samples_leaf: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    #[default]
    GradientBoosting,
    Logistic,
}

impl std::str::FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gbdt" | "gradient_boosting" => Ok(ClassifierKind::GradientBoosting),
            "logistic" => Ok(ClassifierKind::Logistic),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// Balanced labeled rows: as many positives (existing membership edges) as
/// sampled negatives, no duplicate pairs within a class.
#[derive(Debug, Clone)]
pub struct TrainingSet {
    pub rows: Vec<EdgeFeatureRow>,
}

impl TrainingSet {
    pub fn positive_count(&self) -> usize {
        self.rows.iter().filter(|r| r.label == Some(1)).count()
    }

    pub fn negative_count(&self) -> usize {
        self.rows.iter().filter(|r| r.label == Some(0)).count()
    }
}

/// Samples all (or a capped subset of) membership edges as positives and an
/// equal number of absent pairs as negatives, and computes their features.
/// Negatives only pair communities with regular vertices that hold at least
/// one membership; a view without such non-edges is degenerate.
pub fn build_training_set(
    bpg: &BipartiteView,
    rng: &mut impl Rng,
    mode: FeatureMode,
    per_class_cap: usize,
) -> Result<TrainingSet> {
    let all_ids: Vec<_> = bpg.community_ids().cloned().collect();
    let mut positives = bpg.candidate_edges(&all_ids)?;
    if positives.is_empty() {
        return Err(Error::Degenerate("bipartite view has no membership edges".into()));
    }
    if positives.len() > per_class_cap {
        positives.shuffle(rng);
        positives.truncate(per_class_cap);
        positives.sort();
    }
    let negatives = {
        let want = positives.len();
        let g = &bpg.graph;
        let eligible = |v| g.degree(v).is_ok_and(|d| d >= 1);
        match bpg.sample_negative_edges_filtered(want, rng, eligible) {
            Ok(n) => n,
            Err(Error::NotEnough { available, .. }) => {
                if available == 0 {
                    return Err(Error::Degenerate(
                        "no negative pairs available in the bipartite view".into(),
                    ));
                }
                positives.shuffle(rng);
                positives.truncate(available);
                positives.sort();
                bpg.sample_negative_edges_filtered(available, rng, eligible)?
            }
            Err(e) => return Err(e),
        }
    };
    let mut rows = Vec::with_capacity(positives.len() + negatives.len());
    for (v, c) in &positives {
        rows.push(feature_row_with_mode(bpg, *v, c, Some(1), mode)?);
    }
    for (v, c) in &negatives {
        rows.push(feature_row_with_mode(bpg, *v, c, Some(0), mode)?);
    }
    Ok(TrainingSet { rows })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    pub hyperparameters: Hyperparameters,
    pub train_auc: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
enum ModelKind {
    Gbdt(GbdtModel),
    Logistic(LogisticModel),
}

/// A fitted link predictor with its feature order pinned. Predictions are
/// probabilities in [0,1] and depend only on (training set, seed,
/// hyperparameters).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkPredictor {
    format_version: u32,
    model: ModelKind,
    pub feature_order: Vec<String>,
    pub meta: TrainingMeta,
}

fn feature_matrix(rows: &[EdgeFeatureRow]) -> Result<(Vec<Vec<f64>>, Vec<u8>)> {
    let mut x = Vec::with_capacity(rows.len());
    let mut y = Vec::with_capacity(rows.len());
    for r in rows {
        let features = r.features();
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature {
                vertex: r.regular,
                community: r.community.clone(),
            });
        }
        x.push(features.to_vec());
        y.push(r.label.unwrap_or(0));
    }
    Ok((x, y))
}

/// Rank-based AUC with tie correction.
pub fn roc_auc(labels: &[u8], scores: &[f64]) -> f64 {
    let n_pos = labels.iter().filter(|&&l| l == 1).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return 0.5;
    }
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            if labels[k] == 1 {
                rank_sum += avg_rank;
            }
        }
        i = j + 1;
    }
    (rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0) / (n_pos * n_neg) as f64
}

/// Fits the default gradient-boosting learner.
pub fn train(ts: &TrainingSet, hyper: Hyperparameters, seed: u64) -> Result<LinkPredictor> {
    train_with(ts, ClassifierKind::GradientBoosting, hyper, seed)
}

pub fn train_with(
    ts: &TrainingSet,
    kind: ClassifierKind,
    hyper: Hyperparameters,
    seed: u64,
) -> Result<LinkPredictor> {
    if ts.rows.is_empty() {
        return Err(Error::Degenerate("empty training set".into()));
    }
    let (x, y) = feature_matrix(&ts.rows)?;
    let model = match kind {
        ClassifierKind::GradientBoosting => ModelKind::Gbdt(GbdtModel::fit(&x, &y, &hyper)),
        ClassifierKind::Logistic => ModelKind::Logistic(LogisticModel::fit(&x, &y)),
    };
    let predictor = LinkPredictor {
        format_version: MODEL_FORMAT_VERSION,
        model,
        feature_order: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        meta: TrainingMeta {
            seed,
            hyperparameters: hyper,
            train_auc: 0.0,
        },
    };
    let scores = predictor.predict_proba(&ts.rows)?;
    let mut predictor = predictor;
    predictor.meta.train_auc = roc_auc(&y, &scores);
    Ok(predictor)
}

impl LinkPredictor {
    /// One probability per row, in row order.
    pub fn predict_proba(&self, rows: &[EdgeFeatureRow]) -> Result<Vec<f64>> {
        if self.feature_order != FEATURE_NAMES {
            return Err(Error::SchemaMismatch(format!(
                "model feature order {:?} does not match {:?}",
                self.feature_order, FEATURE_NAMES
            )));
        }
        rows.iter()
            .map(|r| {
                let features = r.features();
                if features.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFiniteFeature {
                        vertex: r.regular,
                        community: r.community.clone(),
                    });
                }
                let p = match &self.model {
                    ModelKind::Gbdt(m) => m.predict_proba(&features),
                    ModelKind::Logistic(m) => m.predict_proba(&features),
                };
                Ok(p)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: LinkPredictor = serde_json::from_str(text).map_err(|e| Error::Json {
            path: "<model>".into(),
            message: e.to_string(),
        })?;
        if p.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::SchemaMismatch(format!(
                "unsupported model format version {}",
                p.format_version
            )));
        }
        if p.feature_order != FEATURE_NAMES {
            return Err(Error::SchemaMismatch(format!(
                "model feature order {:?} does not match {:?}",
                p.feature_order, FEATURE_NAMES
            )));
        }
        Ok(p)
    }
}
