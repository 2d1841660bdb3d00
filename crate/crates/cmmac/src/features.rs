//! Topological features of (regular vertex, community-representing vertex)
//! pairs in a bipartite co-membership view.
//!
//! Two modes exist. `Observed` evaluates the definitions on the view as
//! built, so an existing membership edge contributes to its own features
//! (SP = 1, TF and FM include the edge). `MaskTargetEdge` removes the scored
//! edge from the view before measuring, which is what the link-prediction
//! pipeline uses for training positives and test candidates alike; without
//! it the existing edge separates the classes by itself and the classifier
//! collapses to a constant on test rows.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fs;
use std::path::Path;

use crate::bipartite::BipartiteView;
use crate::error::{Error, Result};
use crate::graph::{CommunityId, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeatureMode {
    /// Evaluate on the view as-is.
    #[default]
    Observed,
    /// Remove the scored (v, c) edge from the view first.
    MaskTargetEdge,
}

/// Per-pair numeric feature vector plus optional binary label.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFeatureRow {
    pub regular: VertexId,
    pub community: CommunityId,
    pub d_v: u64,
    pub d_c: u64,
    pub total_friends: u64,
    pub pref_attachment: u64,
    pub friends_measure: u64,
    /// -1 when no path exists; otherwise odd and positive (bipartite parity).
    pub shortest_path: i64,
    pub label: Option<u8>,
}

pub const FEATURE_NAMES: [&str; 6] = ["d_v", "d_c", "tf", "pa", "fm", "sp"];

impl EdgeFeatureRow {
    pub fn features(&self) -> [f64; 6] {
        [
            self.d_v as f64,
            self.d_c as f64,
            self.total_friends as f64,
            self.pref_attachment as f64,
            self.friends_measure as f64,
            self.shortest_path as f64,
        ]
    }
}

struct PairContext<'a> {
    bpg: &'a BipartiteView,
    v: VertexId,
    cv: VertexId,
    /// neighbors of v, minus cv when masking
    gamma_v: Vec<VertexId>,
    /// neighbors of cv, minus v when masking
    gamma_c: Vec<VertexId>,
    masked: bool,
}

impl<'a> PairContext<'a> {
    fn new(bpg: &'a BipartiteView, v: VertexId, c: &str, mode: FeatureMode) -> Result<Self> {
        let cv = bpg.community_vertex(c)?;
        if !bpg.graph.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let masked = mode == FeatureMode::MaskTargetEdge && bpg.graph.has_edge(v, cv);
        let gamma_v = bpg
            .graph
            .neighborhood(v)?
            .iter()
            .copied()
            .filter(|&x| !(masked && x == cv))
            .collect();
        let gamma_c = bpg
            .graph
            .neighborhood(cv)?
            .iter()
            .copied()
            .filter(|&y| !(masked && y == v))
            .collect();
        Ok(Self {
            bpg,
            v,
            cv,
            gamma_v,
            gamma_c,
            masked,
        })
    }

    fn friends_measure(&self) -> u64 {
        // x runs over communities adjacent to v, y over members of c; x = y
        // never fires across the bipartition, so each pair counts iff y is a
        // member of x. Counting memberships of y inside gamma_v is the same
        // sum with the loops exchanged.
        let gv: BTreeSet<VertexId> = self.gamma_v.iter().copied().collect();
        let mut fm = 0u64;
        for &y in &self.gamma_c {
            for &x in self.bpg.graph.neighborhood(y).expect("member exists") {
                // the masked (v, cv) edge is never of the form (x, y) here
                // because y != v, but y's own edge back to cv must not count
                // it as a co-membership with itself
                if x != self.cv && gv.contains(&x) {
                    fm += 1;
                }
            }
        }
        // memberships of y in cv itself are not co-memberships; gv never
        // contains cv in masked mode, and in observed mode pairs (cv, y) are
        // legitimate per the definition, so re-add them there
        if !self.masked && gv.contains(&self.cv) {
            fm += self.gamma_c.len() as u64;
        }
        fm
    }

    fn shortest_path(&self) -> i64 {
        if self.v == self.cv {
            return 0;
        }
        let mut dist: HashMap<VertexId, i64> = HashMap::new();
        dist.insert(self.v, 0);
        let mut queue = VecDeque::from([self.v]);
        while let Some(a) = queue.pop_front() {
            let da = dist[&a];
            for &b in self.bpg.graph.neighborhood(a).expect("bfs vertex exists") {
                if self.masked && ((a == self.v && b == self.cv) || (a == self.cv && b == self.v)) {
                    continue;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(b) {
                    if b == self.cv {
                        return da + 1;
                    }
                    e.insert(da + 1);
                    queue.push_back(b);
                }
            }
        }
        -1
    }
}

pub fn total_friends(bpg: &BipartiteView, v: VertexId, c: &str) -> Result<u64> {
    total_friends_with_mode(bpg, v, c, FeatureMode::Observed)
}

pub fn total_friends_with_mode(
    bpg: &BipartiteView,
    v: VertexId,
    c: &str,
    mode: FeatureMode,
) -> Result<u64> {
    let ctx = PairContext::new(bpg, v, c, mode)?;
    // the two neighborhoods live on opposite sides, so the union is disjoint
    Ok((ctx.gamma_v.len() + ctx.gamma_c.len()) as u64)
}

pub fn preferential_attachment(bpg: &BipartiteView, v: VertexId, c: &str) -> Result<u64> {
    preferential_attachment_with_mode(bpg, v, c, FeatureMode::Observed)
}

pub fn preferential_attachment_with_mode(
    bpg: &BipartiteView,
    v: VertexId,
    c: &str,
    mode: FeatureMode,
) -> Result<u64> {
    let ctx = PairContext::new(bpg, v, c, mode)?;
    Ok(ctx.gamma_v.len() as u64 * ctx.gamma_c.len() as u64)
}

pub fn friends_measure(bpg: &BipartiteView, v: VertexId, c: &str) -> Result<u64> {
    friends_measure_with_mode(bpg, v, c, FeatureMode::Observed)
}

pub fn friends_measure_with_mode(
    bpg: &BipartiteView,
    v: VertexId,
    c: &str,
    mode: FeatureMode,
) -> Result<u64> {
    Ok(PairContext::new(bpg, v, c, mode)?.friends_measure())
}

pub fn shortest_path(bpg: &BipartiteView, v: VertexId, c: &str) -> Result<i64> {
    shortest_path_with_mode(bpg, v, c, FeatureMode::Observed)
}

pub fn shortest_path_with_mode(
    bpg: &BipartiteView,
    v: VertexId,
    c: &str,
    mode: FeatureMode,
) -> Result<i64> {
    Ok(PairContext::new(bpg, v, c, mode)?.shortest_path())
}

pub fn feature_row(
    bpg: &BipartiteView,
    v: VertexId,
    c: &str,
    label: Option<u8>,
) -> Result<EdgeFeatureRow> {
    feature_row_with_mode(bpg, v, c, label, FeatureMode::Observed)
}

pub fn feature_row_with_mode(
    bpg: &BipartiteView,
    v: VertexId,
    c: &str,
    label: Option<u8>,
    mode: FeatureMode,
) -> Result<EdgeFeatureRow> {
    let ctx = PairContext::new(bpg, v, c, mode)?;
    let d_v = ctx.gamma_v.len() as u64;
    let d_c = ctx.gamma_c.len() as u64;
    Ok(EdgeFeatureRow {
        regular: v,
        community: c.to_string(),
        d_v,
        d_c,
        total_friends: d_v + d_c,
        pref_attachment: d_v * d_c,
        friends_measure: ctx.friends_measure(),
        shortest_path: ctx.shortest_path(),
        label,
    })
}

/// Feature matrix export with header `v,c,d_v,d_c,tf,pa,fm,sp,label`.
pub fn write_feature_csv(rows: &[EdgeFeatureRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from("v,c,d_v,d_c,tf,pa,fm,sp,label\n");
    for r in rows {
        let label = r.label.map_or(String::new(), |l| l.to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.regular,
            r.community,
            r.d_v,
            r.d_c,
            r.total_friends,
            r.pref_attachment,
            r.friends_measure,
            r.shortest_path,
            label
        ));
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}
