//! Aggregates per-edge existence probabilities into four per-community
//! meta-features and ranks communities, lowest value first (most anomalous).
//!
//! The STDV variants are reported as 1 - population sigma so that every
//! meta-feature shares the "low means anomalous" orientation. Population
//! rather than sample deviation keeps single-edge communities defined.

use std::collections::BTreeMap;

use crate::baselines::{rank_scored, Polarity};
use crate::error::{Error, Result};
use crate::graph::CommunityId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetaFeature {
    EdgesNormalityMean,
    EdgesNormalityStdv,
    PredictedEdgeLabelsMean,
    PredictedEdgeLabelsStdv,
}

impl MetaFeature {
    pub const ALL: [MetaFeature; 4] = [
        MetaFeature::EdgesNormalityMean,
        MetaFeature::EdgesNormalityStdv,
        MetaFeature::PredictedEdgeLabelsMean,
        MetaFeature::PredictedEdgeLabelsStdv,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MetaFeature::EdgesNormalityMean => "edges_normality_mean",
            MetaFeature::EdgesNormalityStdv => "edges_normality_stdv",
            MetaFeature::PredictedEdgeLabelsMean => "predicted_edge_labels_mean",
            MetaFeature::PredictedEdgeLabelsStdv => "predicted_edge_labels_stdv",
        }
    }
}

impl std::str::FromStr for MetaFeature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetaFeature::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Per-community values of the four meta-features plus rank positions
/// filled in by the evaluation harness.
#[derive(Debug, Clone)]
pub struct CommunityScoreCard {
    pub community: CommunityId,
    pub edges_normality_mean: f64,
    pub edges_normality_stdv: f64,
    pub predicted_edge_labels_mean: f64,
    pub predicted_edge_labels_stdv: f64,
    pub member_count: usize,
    /// method name -> 1-based rank, anomaly-first
    pub ranks: BTreeMap<String, usize>,
}

impl CommunityScoreCard {
    pub fn meta(&self, m: MetaFeature) -> f64 {
        match m {
            MetaFeature::EdgesNormalityMean => self.edges_normality_mean,
            MetaFeature::EdgesNormalityStdv => self.edges_normality_stdv,
            MetaFeature::PredictedEdgeLabelsMean => self.predicted_edge_labels_mean,
            MetaFeature::PredictedEdgeLabelsStdv => self.predicted_edge_labels_stdv,
        }
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn population_std(xs: &[f64]) -> f64 {
    // constant vectors must yield exactly zero despite mean round-off
    if xs.iter().all(|&x| x == xs[0]) {
        return 0.0;
    }
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// 1 where p >= threshold, else 0.
pub fn edge_labels(probs: &[f64], threshold: f64) -> Result<Vec<u8>> {
    if probs.is_empty() {
        return Err(Error::Degenerate("no edge probabilities".into()));
    }
    Ok(probs.iter().map(|&p| u8::from(p >= threshold)).collect())
}

/// Builds a scorecard from the existence probabilities of one community's
/// membership edges.
pub fn score_community(
    community: impl Into<CommunityId>,
    probs: &[f64],
    threshold: f64,
    member_count: usize,
) -> Result<CommunityScoreCard> {
    let labels: Vec<f64> = edge_labels(probs, threshold)?
        .into_iter()
        .map(f64::from)
        .collect();
    Ok(CommunityScoreCard {
        community: community.into(),
        edges_normality_mean: mean(probs),
        edges_normality_stdv: 1.0 - population_std(probs),
        predicted_edge_labels_mean: mean(&labels),
        predicted_edge_labels_stdv: 1.0 - population_std(&labels),
        member_count,
        ranks: BTreeMap::new(),
    })
}

/// Ascending order of the chosen meta-feature, ties broken by community id;
/// the head of the list is the most anomalous candidate.
pub fn rank_communities(cards: &[CommunityScoreCard], meta: MetaFeature) -> Result<Vec<CommunityId>> {
    if cards.is_empty() {
        return Err(Error::Degenerate("no communities to rank".into()));
    }
    let mut scored: Vec<(f64, &CommunityId)> =
        cards.iter().map(|c| (c.meta(meta), &c.community)).collect();
    rank_scored(&mut scored, Polarity::LowIsAnomalous);
    Ok(scored.into_iter().map(|(_, id)| id.clone()).collect())
}

/// First `k` of an anomaly-first ordering.
pub fn bottom_k(ranked: &[CommunityId], k: usize) -> Result<Vec<CommunityId>> {
    if k > ranked.len() {
        return Err(Error::NotEnough {
            what: "ranked communities".into(),
            requested: k,
            available: ranked.len(),
        });
    }
    Ok(ranked[..k].to_vec())
}
