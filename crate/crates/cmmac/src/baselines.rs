//! The six comparison scores, computed on the original network with respect
//! to a community's member set, plus anomaly-first ranking with per-method
//! polarity.
//!
//! Default polarities flag the direction that deviates from sparse,
//! boundary-heavy normal communities: unusually high density (average
//! degree, normality score) or unusually low boundary presence (cut ratio,
//! conductance, ODF measures). Each is configurable; `Polarity::literature`
//! flips to the separation-violating directions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{CommunityId, Network, PartitionMap, VertexId};

/// Internal/boundary structure of one community within the full graph.
#[derive(Debug, Clone)]
pub struct CommunityContext {
    pub internal_edges: usize,
    pub cut_edges: usize,
    pub member_degrees: Vec<usize>,
    pub boundary_vertices: BTreeSet<VertexId>,
}

pub fn community_context(g: &Network, members: &BTreeSet<VertexId>) -> Result<CommunityContext> {
    if members.is_empty() {
        return Err(Error::Degenerate("empty community".into()));
    }
    let mut internal = 0usize;
    let mut cut = 0usize;
    let mut degrees = Vec::with_capacity(members.len());
    let mut boundary = BTreeSet::new();
    for &v in members {
        let nbrs = g.neighborhood(v)?;
        degrees.push(nbrs.len());
        for &w in nbrs {
            if members.contains(&w) {
                if v < w {
                    internal += 1;
                }
            } else {
                cut += 1;
                boundary.insert(w);
            }
        }
    }
    Ok(CommunityContext {
        internal_edges: internal,
        cut_edges: cut,
        member_degrees: degrees,
        boundary_vertices: boundary,
    })
}

/// Mean full-graph degree over the members.
pub fn average_degree(g: &Network, members: &BTreeSet<VertexId>) -> Result<f64> {
    let ctx = community_context(g, members)?;
    let total: usize = ctx.member_degrees.iter().sum();
    Ok(total as f64 / members.len() as f64)
}

/// Existing cut edges over all possible cut edges; 0 when the community
/// spans the whole graph.
pub fn cut_ratio(g: &Network, members: &BTreeSet<VertexId>, n_total: usize) -> Result<f64> {
    let ctx = community_context(g, members)?;
    let denom = members.len() * (n_total - members.len());
    if denom == 0 {
        return Ok(0.0);
    }
    Ok(ctx.cut_edges as f64 / denom as f64)
}

/// Cut volume over total edge volume; 0 for a zero-volume community.
pub fn conductance(g: &Network, members: &BTreeSet<VertexId>) -> Result<f64> {
    let ctx = community_context(g, members)?;
    let volume = 2 * ctx.internal_edges + ctx.cut_edges;
    if volume == 0 {
        return Ok(0.0);
    }
    Ok(ctx.cut_edges as f64 / volume as f64)
}

/// Fraction of members with strictly more edges outside than inside.
pub fn flake_odf(g: &Network, members: &BTreeSet<VertexId>) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::Degenerate("empty community".into()));
    }
    let mut violating = 0usize;
    for &v in members {
        let nbrs = g.neighborhood(v)?;
        let internal = nbrs.iter().filter(|w| members.contains(w)).count();
        let external = nbrs.len() - internal;
        if external > internal {
            violating += 1;
        }
    }
    Ok(violating as f64 / members.len() as f64)
}

/// Mean member fraction of edges pointing outside; degree-0 members count 0.
pub fn average_odf(g: &Network, members: &BTreeSet<VertexId>) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::Degenerate("empty community".into()));
    }
    let mut total = 0.0;
    for &v in members {
        let nbrs = g.neighborhood(v)?;
        if nbrs.is_empty() {
            continue;
        }
        let external = nbrs.iter().filter(|w| !members.contains(w)).count();
        total += external as f64 / nbrs.len() as f64;
    }
    Ok(total / members.len() as f64)
}

/// Topology-only normality score: for ordered member pairs, observed
/// adjacency minus the degree-product null, with a penalty per existing
/// boundary edge. Degrees are full-graph degrees.
pub fn unattributed_amen(g: &Network, members: &BTreeSet<VertexId>) -> Result<f64> {
    let ctx = community_context(g, members)?;
    let two_e = 2.0 * g.edge_count() as f64;
    if g.edge_count() == 0 {
        if ctx.internal_edges == 0 && ctx.cut_edges == 0 {
            return Ok(0.0);
        }
        return Err(Error::Degenerate("normality score needs |E| > 0".into()));
    }
    let sum_k: f64 = ctx.member_degrees.iter().map(|&d| d as f64).sum();
    let sum_k2: f64 = ctx.member_degrees.iter().map(|&d| (d * d) as f64).sum();
    let mut n = 2.0 * ctx.internal_edges as f64 - (sum_k * sum_k - sum_k2) / two_e;
    for &v in members {
        let kv = g.degree(v)? as f64;
        for &b in g.neighborhood(v)? {
            if !members.contains(&b) {
                let kb = g.degree(b)? as f64;
                n -= 1.0 - (kv * kb / two_e).min(1.0);
            }
        }
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineMethod {
    AverageDegree,
    CutRatio,
    Conductance,
    FlakeOdf,
    AverageOdf,
    UnattributedAmen,
}

impl BaselineMethod {
    pub const ALL: [BaselineMethod; 6] = [
        BaselineMethod::AverageDegree,
        BaselineMethod::CutRatio,
        BaselineMethod::Conductance,
        BaselineMethod::FlakeOdf,
        BaselineMethod::AverageOdf,
        BaselineMethod::UnattributedAmen,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BaselineMethod::AverageDegree => "average_degree",
            BaselineMethod::CutRatio => "cut_ratio",
            BaselineMethod::Conductance => "conductance",
            BaselineMethod::FlakeOdf => "flake_odf",
            BaselineMethod::AverageOdf => "average_odf",
            BaselineMethod::UnattributedAmen => "unattributed_amen",
        }
    }

    /// Directions that reproduce the comparative evaluation: density-style
    /// scores flag high values, boundary-style scores flag low values.
    pub fn default_polarity(&self) -> Polarity {
        match self {
            BaselineMethod::AverageDegree | BaselineMethod::UnattributedAmen => {
                Polarity::HighIsAnomalous
            }
            _ => Polarity::LowIsAnomalous,
        }
    }

    /// The separation-violating directions from the community-quality
    /// literature: low density and high boundary presence look anomalous.
    pub fn literature_polarity(&self) -> Polarity {
        match self.default_polarity() {
            Polarity::HighIsAnomalous => Polarity::LowIsAnomalous,
            Polarity::LowIsAnomalous => Polarity::HighIsAnomalous,
        }
    }
}

impl std::str::FromStr for BaselineMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaselineMethod::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    LowIsAnomalous,
    HighIsAnomalous,
}

pub fn score_by_baseline(
    g: &Network,
    members: &BTreeSet<VertexId>,
    method: BaselineMethod,
) -> Result<f64> {
    match method {
        BaselineMethod::AverageDegree => average_degree(g, members),
        BaselineMethod::CutRatio => cut_ratio(g, members, g.vertex_count()),
        BaselineMethod::Conductance => conductance(g, members),
        BaselineMethod::FlakeOdf => flake_odf(g, members),
        BaselineMethod::AverageOdf => average_odf(g, members),
        BaselineMethod::UnattributedAmen => unattributed_amen(g, members),
    }
}

/// Anomaly-first community order for one baseline. Ties break on the
/// community id.
pub fn rank_by_baseline(
    g: &Network,
    partitions: &PartitionMap,
    method: BaselineMethod,
    polarity: Polarity,
) -> Result<Vec<CommunityId>> {
    let mut scored: Vec<(f64, &CommunityId)> = Vec::with_capacity(partitions.len());
    for (id, members) in partitions.iter() {
        scored.push((score_by_baseline(g, members, method)?, id));
    }
    rank_scored(&mut scored, polarity);
    Ok(scored.into_iter().map(|(_, id)| id.clone()).collect())
}

pub(crate) fn rank_scored(scored: &mut [(f64, &CommunityId)], polarity: Polarity) {
    match polarity {
        Polarity::LowIsAnomalous => {
            scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)))
        }
        Polarity::HighIsAnomalous => {
            scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)))
        }
    }
}
