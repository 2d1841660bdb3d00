//! Co-membership bipartite view: one side holds the regular vertices of the
//! original network, the other one synthetic vertex per community, and an
//! edge means "this vertex belongs to that community". The original
//! network's own edges are deliberately not carried over.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{CommunityId, Network, PartitionMap, VertexId};

#[derive(Debug, Clone)]
pub struct BipartiteView {
    pub graph: Network,
    community_vertices: BTreeMap<CommunityId, VertexId>,
    regular_vertices: BTreeSet<VertexId>,
}

impl BipartiteView {
    /// Builds the view from a network and a partition map. Every vertex of
    /// `g` appears on the regular side, membership-free ones as isolated
    /// vertices. Community-representing ids are allocated above the largest
    /// regular id, in sorted community order, so rebuilding is deterministic.
    pub fn build(g: &Network, partitions: &PartitionMap) -> Result<Self> {
        partitions.validate_against(g)?;
        let mut graph = Network::new();
        let mut regular_vertices = BTreeSet::new();
        for v in g.vertices() {
            graph.add_vertex(v);
            regular_vertices.insert(v);
        }
        let base = g.max_vertex_id().map_or(0, |m| m + 1);
        let mut community_vertices = BTreeMap::new();
        for (offset, (id, members)) in partitions.iter().enumerate() {
            let cv = base + offset as VertexId;
            community_vertices.insert(id.clone(), cv);
            graph.add_vertex(cv);
            for &v in members {
                graph.add_edge(v, cv)?;
            }
        }
        Ok(Self {
            graph,
            community_vertices,
            regular_vertices,
        })
    }

    pub fn community_vertex(&self, id: &str) -> Result<VertexId> {
        self.community_vertices
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownCommunity(id.to_string()))
    }

    pub fn community_ids(&self) -> impl Iterator<Item = &CommunityId> {
        self.community_vertices.keys()
    }

    pub fn community_count(&self) -> usize {
        self.community_vertices.len()
    }

    pub fn is_regular(&self, v: VertexId) -> bool {
        self.regular_vertices.contains(&v)
    }

    pub fn regular_vertices(&self) -> &BTreeSet<VertexId> {
        &self.regular_vertices
    }

    /// The existing membership edges incident to the listed communities,
    /// as (regular vertex, community id) pairs in deterministic order.
    pub fn candidate_edges(&self, communities: &[CommunityId]) -> Result<Vec<(VertexId, CommunityId)>> {
        let mut out = Vec::new();
        for id in communities {
            let cv = self.community_vertex(id)?;
            for &v in self.graph.neighborhood(cv)? {
                out.push((v, id.clone()));
            }
        }
        Ok(out)
    }

    /// All (regular, community) pairs with no membership edge, restricted to
    /// regular vertices accepted by `eligible`.
    fn absent_pairs(&self, eligible: impl Fn(VertexId) -> bool) -> Vec<(VertexId, CommunityId)> {
        let mut out = Vec::new();
        for &v in &self.regular_vertices {
            if !eligible(v) {
                continue;
            }
            for (id, &cv) in &self.community_vertices {
                if !self.graph.has_edge(v, cv) {
                    out.push((v, id.clone()));
                }
            }
        }
        out
    }

    /// Uniformly samples `k` distinct non-edges crossing the bipartition.
    pub fn sample_negative_edges(
        &self,
        k: usize,
        rng: &mut impl Rng,
    ) -> Result<Vec<(VertexId, CommunityId)>> {
        self.sample_negative_edges_filtered(k, rng, |_| true)
    }

    /// Same, but only pairs whose regular vertex passes `eligible` are
    /// considered. The classifier uses this to skip membership-free vertices.
    pub fn sample_negative_edges_filtered(
        &self,
        k: usize,
        rng: &mut impl Rng,
        eligible: impl Fn(VertexId) -> bool,
    ) -> Result<Vec<(VertexId, CommunityId)>> {
        let mut pool = self.absent_pairs(eligible);
        if k > pool.len() {
            return Err(Error::NotEnough {
                what: "absent bipartite pairs".into(),
                requested: k,
                available: pool.len(),
            });
        }
        pool.shuffle(rng);
        pool.truncate(k);
        pool.sort();
        Ok(pool)
    }

    /// Debug dump: membership edges as `u c::id` lines.
    pub fn write_debug_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f =
            fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        for (id, &cv) in &self.community_vertices {
            for &v in self.graph.neighborhood(cv)? {
                writeln!(f, "{v} c::{id}").map_err(|e| Error::io(path.display().to_string(), e))?;
            }
        }
        Ok(())
    }
}
