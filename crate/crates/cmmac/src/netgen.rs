//! Community-structured random network generation with dual-preferential
//! interconnection, in fully-simulated mode and in infusion mode (attach
//! generated anomalous communities to an existing network).
//!
//! All random choices run on integer weights drawn from a single seeded
//! ChaCha stream, so a (spec, seed) pair reproduces the dataset byte for
//! byte on any platform.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CommunityId, LabeledDataset, Network, PartitionMap, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    BarabasiAlbert,
    ErdosRenyi,
}

/// Parameters for one community group (normal or anomalous).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupParams {
    pub alg: GeneratorKind,
    pub comm_sizes: Vec<usize>,
    /// m for Barabasi-Albert, edge probability for Erdos-Renyi.
    pub args: f64,
    pub inter_p: f64,
}

impl GroupParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.inter_p) {
            return Err(Error::InvalidParams(format!(
                "inter_p must be in [0,1], got {}",
                self.inter_p
            )));
        }
        match self.alg {
            GeneratorKind::BarabasiAlbert => {
                if self.args < 1.0 || self.args.fract() != 0.0 {
                    return Err(Error::InvalidParams(format!(
                        "Barabasi-Albert args must be an integer >= 1, got {}",
                        self.args
                    )));
                }
                let m = self.args as usize;
                if let Some(&s) = self.comm_sizes.iter().find(|&&s| s <= m) {
                    return Err(Error::InvalidParams(format!(
                        "Barabasi-Albert community size {s} must exceed m = {m}"
                    )));
                }
            }
            GeneratorKind::ErdosRenyi => {
                if !(0.0..=1.0).contains(&self.args) {
                    return Err(Error::InvalidParams(format!(
                        "Erdos-Renyi edge probability must be in [0,1], got {}",
                        self.args
                    )));
                }
            }
        }
        Ok(())
    }

    /// Empty group: generates nothing, used for infusion-style runs.
    pub fn none() -> Self {
        GroupParams {
            alg: GeneratorKind::ErdosRenyi,
            comm_sizes: Vec::new(),
            args: 0.0,
            inter_p: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub normal: GroupParams,
    pub anomalous: GroupParams,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        self.normal.validate()?;
        self.anomalous.validate()?;
        if self.normal.comm_sizes.is_empty() {
            return Err(Error::InvalidParams(
                "fully-simulated mode needs at least one normal community".into(),
            ));
        }
        Ok(())
    }
}

/// Echoed into `params.json` next to the generated dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub mode: String,
    pub spec: GeneratorSpec,
    pub skipped_duplicate_edges: usize,
}

/// How anomalous community sizes are drawn from the normal-size distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SizeMode {
    Quantile(f64),
    Random,
}

impl std::str::FromStr for SizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "random" {
            return Ok(SizeMode::Random);
        }
        if let Some(q) = s.strip_prefix('q') {
            let q: f64 = q
                .parse()
                .map_err(|_| Error::InvalidParams(format!("bad quantile {s:?}")))?;
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidParams(format!("quantile {q} out of [0,1]")));
            }
            return Ok(SizeMode::Quantile(q));
        }
        Err(Error::InvalidParams(format!(
            "size mode must be qX or random, got {s:?}"
        )))
    }
}

impl std::fmt::Display for SizeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SizeMode::Quantile(q) => write!(f, "q{q}"),
            SizeMode::Random => write!(f, "random"),
        }
    }
}

/// k sizes drawn from an empirical distribution: nearest-rank (lower)
/// quantile, repeated k times, or k uniform draws.
pub fn sample_sizes(
    distribution: &[usize],
    mode: SizeMode,
    k: usize,
    rng: &mut impl Rng,
) -> Result<Vec<usize>> {
    if distribution.is_empty() {
        return Err(Error::InvalidParams("empty size distribution".into()));
    }
    match mode {
        SizeMode::Quantile(q) => {
            let mut sorted = distribution.to_vec();
            sorted.sort_unstable();
            let idx = (q * (sorted.len() - 1) as f64).floor() as usize;
            Ok(vec![sorted[idx]; k])
        }
        SizeMode::Random => Ok((0..k)
            .map(|_| distribution[rng.gen_range(0..distribution.len())])
            .collect()),
    }
}

/// Index into `weights` with probability proportional to weight.
/// Panics if all weights are zero; callers fall back to uniform beforehand.
pub fn weighted_index(weights: &[u64], rng: &mut impl Rng) -> usize {
    let total: u64 = weights.iter().sum();
    assert!(total > 0, "weighted_index needs a positive total weight");
    let mut ticket = rng.gen_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if ticket < w {
            return i;
        }
        ticket -= w;
    }
    unreachable!("ticket exhausted the weight mass");
}

/// Preferential-attachment community on local ids `0..size`, relabeled by
/// `offset`. Growth follows the repeated-endpoints scheme: the seed is m
/// isolated vertices, the first newcomer links to all of them, later ones
/// pick m distinct targets with probability proportional to degree.
/// Always yields exactly (size - m) * m edges; m = 1 gives a tree.
pub fn generate_ba_community(size: usize, m: usize, rng: &mut impl Rng) -> Result<Network> {
    if m < 1 || size <= m {
        return Err(Error::InvalidParams(format!(
            "Barabasi-Albert needs size > m >= 1, got size={size}, m={m}"
        )));
    }
    let mut g = Network::new();
    for v in 0..size as VertexId {
        g.add_vertex(v);
    }
    let mut repeated: Vec<VertexId> = Vec::with_capacity(2 * size * m);
    let mut targets: Vec<VertexId> = (0..m as VertexId).collect();
    for v in m as VertexId..size as VertexId {
        for &t in &targets {
            g.add_edge(v, t)?;
        }
        repeated.extend_from_slice(&targets);
        repeated.extend(std::iter::repeat_n(v, m));
        let mut distinct = BTreeSet::new();
        while distinct.len() < m {
            distinct.insert(repeated[rng.gen_range(0..repeated.len())]);
        }
        targets = distinct.into_iter().collect();
    }
    Ok(g)
}

/// Erdos-Renyi community on local ids `0..size`; isolated vertices retained.
pub fn generate_er_community(size: usize, p: f64, rng: &mut impl Rng) -> Result<Network> {
    if size < 1 || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!(
            "Erdos-Renyi needs size >= 1 and p in [0,1], got size={size}, p={p}"
        )));
    }
    let mut g = Network::new();
    for v in 0..size as VertexId {
        g.add_vertex(v);
    }
    for i in 0..size as VertexId {
        for j in (i + 1)..size as VertexId {
            if rng.gen::<f64>() < p {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

fn relabel_into(
    src: &Network,
    offset: VertexId,
    network: &mut Network,
) -> Result<Vec<VertexId>> {
    let mut members = Vec::with_capacity(src.vertex_count());
    for v in src.vertices() {
        network.add_vertex(v + offset);
        members.push(v + offset);
    }
    for (u, v) in src.edges() {
        network.add_edge(u + offset, v + offset)?;
    }
    Ok(members)
}

struct InterConnector<'a> {
    network: &'a mut Network,
    partitions: &'a mut PartitionMap,
    /// target pool: normal community ids with their original member lists
    normal_ids: Vec<CommunityId>,
    normal_members: BTreeMap<CommunityId, Vec<VertexId>>,
    normal_sizes: Vec<u64>,
    skipped: usize,
}

impl<'a> InterConnector<'a> {
    /// One InterConnect pass for `source`: floor(|Vc| * inter_p) iterations,
    /// each picking a uniform source vertex, a size-weighted target community
    /// (never the source itself), and a degree-weighted target vertex. The
    /// source vertex joins the target community's partition entry. A duplicate
    /// edge redraws the target vertex up to 10 times, then skips.
    fn run(&mut self, source: &CommunityId, members: &[VertexId], inter_p: f64, rng: &mut impl Rng) {
        let n_edges = (members.len() as f64 * inter_p).floor() as usize;
        if n_edges == 0 {
            return;
        }
        let candidates: Vec<usize> = (0..self.normal_ids.len())
            .filter(|&i| &self.normal_ids[i] != source)
            .collect();
        if candidates.is_empty() {
            return;
        }
        let weights: Vec<u64> = candidates.iter().map(|&i| self.normal_sizes[i]).collect();
        for _ in 0..n_edges {
            let u = members[rng.gen_range(0..members.len())];
            let target_idx = candidates[weighted_index(&weights, rng)];
            let target_id = self.normal_ids[target_idx].clone();
            let pool = &self.normal_members[&target_id];
            let degs: Vec<u64> = pool
                .iter()
                .map(|&v| self.network.degree(v).unwrap_or(0) as u64)
                .collect();
            let mut connected = false;
            for _attempt in 0..10 {
                let v = if degs.iter().all(|&d| d == 0) {
                    pool[rng.gen_range(0..pool.len())]
                } else {
                    pool[weighted_index(&degs, rng)]
                };
                if v == u || self.network.has_edge(u, v) {
                    continue;
                }
                self.network.add_edge(u, v).expect("not a self-loop");
                self.partitions.add_member(&target_id, u);
                connected = true;
                break;
            }
            if !connected {
                self.skipped += 1;
            }
        }
    }
}

/// Fully-simulated generation per the two-group recipe: create every normal
/// and anomalous community, then interconnect normals against normals and
/// anomalies against normals.
pub fn generate(spec: &GeneratorSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut network = Network::new();
    let mut partitions = PartitionMap::new();
    let mut members_of: BTreeMap<CommunityId, Vec<VertexId>> = BTreeMap::new();
    let mut offset: VertexId = 0;
    let mut norm_ids = Vec::new();
    let mut anom_ids = Vec::new();

    let create = |group: &GroupParams,
                      ids: &mut Vec<CommunityId>,
                      first_index: usize,
                      network: &mut Network,
                      partitions: &mut PartitionMap,
                      members_of: &mut BTreeMap<CommunityId, Vec<VertexId>>,
                      offset: &mut VertexId,
                      rng: &mut ChaCha8Rng|
     -> Result<()> {
        for (i, &size) in group.comm_sizes.iter().enumerate() {
            let id = format!("comm{:04}", first_index + i);
            let local = match group.alg {
                GeneratorKind::BarabasiAlbert => {
                    generate_ba_community(size, group.args as usize, rng)?
                }
                GeneratorKind::ErdosRenyi => generate_er_community(size, group.args, rng)?,
            };
            let members = relabel_into(&local, *offset, network)?;
            *offset += size as VertexId;
            partitions.insert(id.clone(), members.iter().copied().collect())?;
            members_of.insert(id.clone(), members);
            ids.push(id);
        }
        Ok(())
    };

    create(
        &spec.normal,
        &mut norm_ids,
        1,
        &mut network,
        &mut partitions,
        &mut members_of,
        &mut offset,
        &mut rng,
    )?;
    create(
        &spec.anomalous,
        &mut anom_ids,
        1 + norm_ids.len(),
        &mut network,
        &mut partitions,
        &mut members_of,
        &mut offset,
        &mut rng,
    )?;

    let normal_sizes: Vec<u64> = norm_ids
        .iter()
        .map(|id| members_of[id].len() as u64)
        .collect();
    let mut ic = InterConnector {
        network: &mut network,
        partitions: &mut partitions,
        normal_ids: norm_ids.clone(),
        normal_members: norm_ids
            .iter()
            .map(|id| (id.clone(), members_of[id].clone()))
            .collect(),
        normal_sizes,
        skipped: 0,
    };
    for id in &norm_ids {
        ic.run(id, &members_of[id], spec.normal.inter_p, &mut rng);
    }
    for id in &anom_ids {
        ic.run(id, &members_of[id], spec.anomalous.inter_p, &mut rng);
    }
    let skipped = ic.skipped;

    let record = GenerationRecord {
        mode: "fully_simulated".into(),
        spec: spec.clone(),
        skipped_duplicate_edges: skipped,
    };
    Ok(LabeledDataset {
        network,
        partitions,
        anomalous_ids: anom_ids.into_iter().collect(),
        params: serde_json::to_value(&record).expect("serializable"),
    })
}

/// Infusion mode: generate anomalous communities, relabel them above the
/// base network's ids, merge, and interconnect each toward the base
/// communities (size-weighted community, degree-weighted vertex).
pub fn infuse(
    base: &Network,
    base_partitions: &PartitionMap,
    anomalous: &GroupParams,
    seed: u64,
) -> Result<LabeledDataset> {
    anomalous.validate()?;
    if base_partitions.is_empty() {
        return Err(Error::InvalidParams(
            "infusion needs a non-empty base partition map".into(),
        ));
    }
    base_partitions.validate_against(base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut network = base.clone();
    let mut partitions = base_partitions.clone();
    let mut offset = base.max_vertex_id().map_or(0, |m| m + 1);

    let mut anom_ids = Vec::new();
    let mut members_of: BTreeMap<CommunityId, Vec<VertexId>> = BTreeMap::new();
    for (i, &size) in anomalous.comm_sizes.iter().enumerate() {
        let mut id = format!("anom{:04}", i + 1);
        while partitions.contains(&id) {
            id.push('_');
        }
        let local = match anomalous.alg {
            GeneratorKind::BarabasiAlbert => {
                generate_ba_community(size, anomalous.args as usize, &mut rng)?
            }
            GeneratorKind::ErdosRenyi => generate_er_community(size, anomalous.args, &mut rng)?,
        };
        let members = relabel_into(&local, offset, &mut network)?;
        offset += size as VertexId;
        partitions.insert(id.clone(), members.iter().copied().collect())?;
        members_of.insert(id.clone(), members);
        anom_ids.push(id);
    }

    let base_ids: Vec<CommunityId> = base_partitions.ids().cloned().collect();
    let base_members: BTreeMap<CommunityId, Vec<VertexId>> = base_partitions
        .iter()
        .map(|(id, m)| (id.clone(), m.iter().copied().collect()))
        .collect();
    let base_sizes: Vec<u64> = base_ids
        .iter()
        .map(|id| base_members[id].len() as u64)
        .collect();
    let mut ic = InterConnector {
        network: &mut network,
        partitions: &mut partitions,
        normal_ids: base_ids,
        normal_members: base_members,
        normal_sizes: base_sizes,
        skipped: 0,
    };
    for id in &anom_ids {
        ic.run(id, &members_of[id], anomalous.inter_p, &mut rng);
    }
    let skipped = ic.skipped;

    let record = GenerationRecord {
        mode: "infusion".into(),
        spec: GeneratorSpec {
            normal: GroupParams::none(),
            anomalous: anomalous.clone(),
            seed,
        },
        skipped_duplicate_edges: skipped,
    };
    Ok(LabeledDataset {
        network,
        partitions,
        anomalous_ids: anom_ids.into_iter().collect(),
        params: serde_json::to_value(&record).expect("serializable"),
    })
}
