//! Undirected simple graph and overlapping partition map, plus the file
//! formats shared by every other module.
//!
//! Vertices are opaque non-negative integers, community ids are strings.
//! Both structures are immutable after construction as far as the rest of
//! the crate is concerned; construction itself is single-threaded.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u64;
pub type CommunityId = String;

/// Undirected simple graph over integer vertex ids.
///
/// No self-loops, no parallel edges; every edge endpoint is a known vertex.
/// Adjacency is kept in ordered maps so that iteration order, and therefore
/// every artifact derived from it, is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Network {
    adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
    edge_count: usize,
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adjacency.entry(v).or_default();
    }

    /// Inserts an undirected edge, creating endpoints as needed.
    /// Returns true if the edge was new. Self-loops are rejected.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        if u == v {
            return Err(Error::SelfLoop {
                path: "<memory>".into(),
                line: 0,
                vertex: u,
            });
        }
        self.add_vertex(u);
        self.add_vertex(v);
        let new = self.adjacency.get_mut(&u).unwrap().insert(v);
        if new {
            self.adjacency.get_mut(&v).unwrap().insert(u);
            self.edge_count += 1;
        }
        Ok(new)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.adjacency.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency.keys().copied()
    }

    /// Each undirected edge once, as (min, max), in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(&u, nbrs)| nbrs.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.adjacency
            .get(&v)
            .map(|n| n.len())
            .ok_or(Error::UnknownVertex(v))
    }

    pub fn neighborhood(&self, v: VertexId) -> Result<&BTreeSet<VertexId>> {
        self.adjacency.get(&v).ok_or(Error::UnknownVertex(v))
    }

    pub fn max_vertex_id(&self) -> Option<VertexId> {
        self.adjacency.keys().next_back().copied()
    }

    /// Parses a whitespace-separated edge list. Lines starting with `#` and
    /// blank lines are skipped; parallel edges collapse silently; self-loops
    /// are errors carrying the offending line number.
    pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse_edge_list(&text, &path.display().to_string())
    }

    pub fn parse_edge_list(text: &str, path: &str) -> Result<Self> {
        let mut g = Network::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        path: path.into(),
                        line: line_no,
                        message: format!("expected two integers, got {line:?}"),
                    })
                }
            };
            let parse = |s: &str| {
                s.parse::<VertexId>().map_err(|_| Error::Parse {
                    path: path.into(),
                    line: line_no,
                    message: format!("invalid vertex id {s:?}"),
                })
            };
            let (u, v) = (parse(a)?, parse(b)?);
            if u == v {
                return Err(Error::SelfLoop {
                    path: path.into(),
                    line: line_no,
                    vertex: u,
                });
            }
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Writes `u v` lines in sorted order; loading the result reproduces
    /// this network exactly.
    pub fn save_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        // isolated vertices survive the round trip via a comment header
        let isolated: Vec<VertexId> = self
            .adjacency
            .iter()
            .filter(|(_, n)| n.is_empty())
            .map(|(&v, _)| v)
            .collect();
        let mut text = String::new();
        if !isolated.is_empty() {
            text.push_str("# isolated:");
            for v in &isolated {
                text.push_str(&format!(" {v}"));
            }
            text.push('\n');
        }
        text.push_str(&out);
        let mut f =
            fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        f.write_all(text.as_bytes())
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Ok(())
    }

    fn load_isolated_comment(text: &str, g: &mut Network) {
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("# isolated:") {
                for tok in rest.split_whitespace() {
                    if let Ok(v) = tok.parse::<VertexId>() {
                        g.add_vertex(v);
                    }
                }
            }
        }
    }

    /// Load companion that restores isolated vertices recorded by
    /// [`Network::save_edge_list`].
    pub fn load_edge_list_full(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut g = Self::parse_edge_list(&text, &path.display().to_string())?;
        Self::load_isolated_comment(&text, &mut g);
        Ok(g)
    }
}

/// community id -> member vertex set; overlap allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionMap {
    entries: BTreeMap<CommunityId, BTreeSet<VertexId>>,
}

impl PartitionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<CommunityId>, members: BTreeSet<VertexId>) -> Result<()> {
        let id = id.into();
        if members.is_empty() {
            return Err(Error::EmptyCommunity(id));
        }
        self.entries.insert(id, members);
        Ok(())
    }

    pub fn add_member(&mut self, id: &str, v: VertexId) {
        self.entries.entry(id.to_string()).or_default().insert(v);
    }

    pub fn members(&self, id: &str) -> Result<&BTreeSet<VertexId>> {
        self.entries
            .get(id)
            .ok_or_else(|| Error::UnknownCommunity(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &CommunityId> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CommunityId, &BTreeSet<VertexId>)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total membership count, i.e. the number of (community, member) pairs.
    pub fn membership_count(&self) -> usize {
        self.entries.values().map(|m| m.len()).sum()
    }

    /// Every listed vertex must exist in `g`.
    pub fn validate_against(&self, g: &Network) -> Result<()> {
        for (id, members) in &self.entries {
            if members.is_empty() {
                return Err(Error::EmptyCommunity(id.clone()));
            }
            for &v in members {
                if !g.contains_vertex(v) {
                    return Err(Error::UnknownVertex(v));
                }
            }
        }
        Ok(())
    }

    /// Parses a JSON object of id -> integer array. Empty member lists are
    /// rejected.
    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::parse_json(&text, &path.display().to_string())
    }

    pub fn parse_json(text: &str, path: &str) -> Result<Self> {
        let raw: BTreeMap<String, Vec<VertexId>> =
            serde_json::from_str(text).map_err(|e| Error::Json {
                path: path.into(),
                message: e.to_string(),
            })?;
        let mut p = PartitionMap::new();
        for (id, members) in raw {
            p.insert(id, members.into_iter().collect())?;
        }
        Ok(p)
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let raw: BTreeMap<&String, Vec<VertexId>> = self
            .entries
            .iter()
            .map(|(id, m)| (id, m.iter().copied().collect()))
            .collect();
        let text = serde_json::to_string_pretty(&raw).expect("serializable");
        fs::write(path, text + "\n").map_err(|e| Error::io(path.display().to_string(), e))
    }

    /// Splits community ids into a train set of `n_train` non-anomalous
    /// communities and a test set holding everything else. Deterministic for
    /// a given seed; every anomalous community always lands in the test set.
    pub fn split(
        &self,
        n_train: usize,
        anomalous: &BTreeSet<CommunityId>,
        seed: u64,
    ) -> Result<(PartitionMap, PartitionMap)> {
        if n_train >= self.len() {
            return Err(Error::NotEnough {
                what: "communities for the requested train size".into(),
                requested: n_train,
                available: self.len(),
            });
        }
        let mut normal: Vec<&CommunityId> =
            self.entries.keys().filter(|id| !anomalous.contains(*id)).collect();
        if normal.len() < n_train {
            return Err(Error::NotEnough {
                what: "normal communities".into(),
                requested: n_train,
                available: normal.len(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        normal.shuffle(&mut rng);
        let train_ids: BTreeSet<&CommunityId> = normal.into_iter().take(n_train).collect();
        let mut train = PartitionMap::new();
        let mut test = PartitionMap::new();
        for (id, members) in &self.entries {
            let target = if train_ids.contains(id) { &mut train } else { &mut test };
            target.entries.insert(id.clone(), members.clone());
        }
        Ok((train, test))
    }
}

/// Ground-truth labels file layout: `{"anomalous": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct LabelsFile {
    anomalous: Vec<CommunityId>,
}

/// A network plus its partition map, anomaly labels and the parameter record
/// that generated it.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub network: Network,
    pub partitions: PartitionMap,
    pub anomalous_ids: BTreeSet<CommunityId>,
    pub params: serde_json::Value,
}

impl LabeledDataset {
    pub fn validate(&self) -> Result<()> {
        self.partitions.validate_against(&self.network)?;
        for id in &self.anomalous_ids {
            if !self.partitions.contains(id) {
                return Err(Error::UnknownCommunity(id.clone()));
            }
        }
        Ok(())
    }

    /// Writes `edges.txt`, `partitions.json`, `labels.json`, `params.json`.
    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        self.network.save_edge_list(dir.join("edges.txt"))?;
        self.partitions.save_json(dir.join("partitions.json"))?;
        let labels = LabelsFile {
            anomalous: self.anomalous_ids.iter().cloned().collect(),
        };
        let lpath = dir.join("labels.json");
        fs::write(
            &lpath,
            serde_json::to_string_pretty(&labels).expect("serializable") + "\n",
        )
        .map_err(|e| Error::io(lpath.display().to_string(), e))?;
        let ppath = dir.join("params.json");
        fs::write(
            &ppath,
            serde_json::to_string_pretty(&self.params).expect("serializable") + "\n",
        )
        .map_err(|e| Error::io(ppath.display().to_string(), e))?;
        Ok(())
    }

    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let network = Network::load_edge_list_full(dir.join("edges.txt"))?;
        let partitions = PartitionMap::load_json(dir.join("partitions.json"))?;
        let lpath = dir.join("labels.json");
        let ltext =
            fs::read_to_string(&lpath).map_err(|e| Error::io(lpath.display().to_string(), e))?;
        let labels: LabelsFile = serde_json::from_str(&ltext).map_err(|e| Error::Json {
            path: lpath.display().to_string(),
            message: e.to_string(),
        })?;
        let ppath = dir.join("params.json");
        let params = match fs::read_to_string(&ppath) {
            Ok(t) => serde_json::from_str(&t).map_err(|e| Error::Json {
                path: ppath.display().to_string(),
                message: e.to_string(),
            })?,
            Err(_) => serde_json::Value::Null,
        };
        let ds = LabeledDataset {
            network,
            partitions,
            anomalous_ids: labels.anomalous.into_iter().collect(),
            params,
        };
        ds.validate()?;
        Ok(ds)
    }
}
