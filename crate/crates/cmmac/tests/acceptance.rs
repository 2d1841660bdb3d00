//! Acceptance suite. One test per criterion; each prints a PASS/FAIL line
//! (run with --nocapture to see them alongside cargo's own verdicts).
//!
//! Oracles here are written from the definitions, independently of the
//! library's implementation paths.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cmmac::baselines::{self, BaselineMethod};
use cmmac::bipartite::BipartiteView;
use cmmac::eval::{
    average_precision, mix, run_experiment, run_sweep, write_cells_csv, write_results_csv,
    write_scorecards_csv, DatasetRecipe, ExperimentConfig, RankedResult, SweepSpec,
};
use cmmac::features;
use cmmac::graph::{Network, PartitionMap, VertexId};
use cmmac::netgen::{self, weighted_index, GeneratorSpec, GroupParams, SizeMode};

// ---------------------------------------------------------------------------
// independent oracles
// ---------------------------------------------------------------------------

/// Raw bipartite adjacency rebuilt from a partition map, bypassing the
/// library's view type.
struct RawBpg {
    adj: BTreeMap<i64, BTreeSet<i64>>,
}

impl RawBpg {
    /// Regular vertices keep their ids; community side uses negative ids in
    /// sorted community order.
    fn build(n_regulars: u64, partitions: &[(String, BTreeSet<u64>)]) -> Self {
        let mut adj: BTreeMap<i64, BTreeSet<i64>> = BTreeMap::new();
        for v in 0..n_regulars {
            adj.entry(v as i64).or_default();
        }
        for (idx, (_, members)) in partitions.iter().enumerate() {
            let cv = -(idx as i64 + 1);
            adj.entry(cv).or_default();
            for &v in members {
                adj.get_mut(&cv).unwrap().insert(v as i64);
                adj.entry(v as i64).or_default().insert(cv);
            }
        }
        RawBpg { adj }
    }

    fn tf(&self, v: i64, cv: i64) -> u64 {
        let mut u = self.adj[&v].clone();
        u.extend(self.adj[&cv].iter().copied());
        u.len() as u64
    }

    fn pa(&self, v: i64, cv: i64) -> u64 {
        (self.adj[&v].len() * self.adj[&cv].len()) as u64
    }

    fn fm(&self, v: i64, cv: i64) -> u64 {
        let mut count = 0;
        for &x in &self.adj[&v] {
            for &y in &self.adj[&cv] {
                if x == y || self.adj[&x].contains(&y) {
                    count += 1;
                }
            }
        }
        count
    }

    fn sp(&self, v: i64, cv: i64) -> i64 {
        if v == cv {
            return 0;
        }
        let mut dist: HashMap<i64, i64> = HashMap::from([(v, 0)]);
        let mut q = VecDeque::from([v]);
        while let Some(a) = q.pop_front() {
            for &b in &self.adj[&a] {
                if !dist.contains_key(&b) {
                    dist.insert(b, dist[&a] + 1);
                    if b == cv {
                        return dist[&b];
                    }
                    q.push_back(b);
                }
            }
        }
        -1
    }
}

fn random_partitions(
    rng: &mut ChaCha8Rng,
    n_vertices: u64,
    n_comms: usize,
) -> Vec<(String, BTreeSet<u64>)> {
    (0..n_comms)
        .map(|c| {
            let size = rng.gen_range(1..=n_vertices);
            let mut members = BTreeSet::new();
            while (members.len() as u64) < size {
                members.insert(rng.gen_range(0..n_vertices));
            }
            (format!("c{c:02}"), members)
        })
        .collect()
}

fn view_from(n_vertices: u64, partitions: &[(String, BTreeSet<u64>)]) -> BipartiteView {
    let mut g = Network::new();
    for v in 0..n_vertices {
        g.add_vertex(v);
    }
    let mut p = PartitionMap::new();
    for (id, members) in partitions {
        p.insert(id.clone(), members.clone()).unwrap();
    }
    BipartiteView::build(&g, &p).unwrap()
}

#[test]
fn acceptance_1_feature_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ACC01);
    for round in 0..50 {
        let n_vertices = rng.gen_range(5..=100);
        let n_comms = rng.gen_range(1..=6);
        let partitions = random_partitions(&mut rng, n_vertices, n_comms);
        let bpg = view_from(n_vertices, &partitions);
        let raw = RawBpg::build(n_vertices, &partitions);
        for (idx, (id, _)) in partitions.iter().enumerate() {
            let cv = -(idx as i64 + 1);
            for v in 0..n_vertices {
                let vi = v as i64;
                assert_eq!(
                    features::total_friends(&bpg, v, id).unwrap(),
                    raw.tf(vi, cv),
                    "TF mismatch round {round} v={v} c={id}"
                );
                assert_eq!(
                    features::preferential_attachment(&bpg, v, id).unwrap(),
                    raw.pa(vi, cv),
                    "PA mismatch round {round} v={v} c={id}"
                );
                assert_eq!(
                    features::friends_measure(&bpg, v, id).unwrap(),
                    raw.fm(vi, cv),
                    "FM mismatch round {round} v={v} c={id}"
                );
                assert_eq!(
                    features::shortest_path(&bpg, v, id).unwrap(),
                    raw.sp(vi, cv),
                    "SP mismatch round {round} v={v} c={id}"
                );
            }
        }
    }

    // hand-derivable values on the three-community example
    let communities: Vec<(String, BTreeSet<u64>)> = vec![
        ("c1".into(), [1, 2, 3, 4].into_iter().collect()),
        ("c2".into(), [3, 5, 6, 7, 8, 11].into_iter().collect()),
        ("c3".into(), [6, 9, 10, 11, 12].into_iter().collect()),
    ];
    let mut g = Network::new();
    for v in 1..=12 {
        g.add_vertex(v);
    }
    let mut p = PartitionMap::new();
    for (id, m) in &communities {
        p.insert(id.clone(), m.clone()).unwrap();
    }
    let bpg = BipartiteView::build(&g, &p).unwrap();
    assert_eq!(features::friends_measure(&bpg, 3, "c3").unwrap(), 2);
    assert_eq!(features::friends_measure(&bpg, 3, "c2").unwrap(), 7);
    let row = features::feature_row(&bpg, 3, "c2", Some(1)).unwrap();
    assert_eq!((row.d_v, row.d_c), (2, 6));
    assert_eq!(row.total_friends, 8);
    assert_eq!(row.pref_attachment, 12);
    assert_eq!(row.shortest_path, 1);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("ACCEPTANCE 1 feature-oracle-equivalence: PASS ({elapsed:?})");
}

fn random_graph(rng: &mut ChaCha8Rng, n: u64, extra_edges: usize) -> Network {
    let mut g = Network::new();
    for v in 0..n {
        g.add_vertex(v);
    }
    for _ in 0..extra_edges {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            let _ = g.add_edge(u, v);
        }
    }
    g
}

#[test]
fn acceptance_2_baseline_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ACC02);
    let mut checked = 0;
    while checked < 500 {
        let n = rng.gen_range(6..60);
        let n_edges = rng.gen_range(4..160);
        let g = random_graph(&mut rng, n, n_edges);
        if g.edge_count() == 0 {
            continue;
        }
        let size = rng.gen_range(1..=n);
        let mut members: BTreeSet<u64> = BTreeSet::new();
        while (members.len() as u64) < size {
            members.insert(rng.gen_range(0..n));
        }

        // brute-force from the definitions
        let inside = |v: &u64| members.contains(v);
        let mut internal = 0usize;
        let mut cut = 0usize;
        for &v in &members {
            for &w in g.neighborhood(v).unwrap() {
                if inside(&w) {
                    if v < w {
                        internal += 1;
                    }
                } else {
                    cut += 1;
                }
            }
        }
        let n_total = g.vertex_count();
        let cut_ratio_bf = {
            let denom = members.len() * (n_total - members.len());
            if denom == 0 {
                0.0
            } else {
                cut as f64 / denom as f64
            }
        };
        let conductance_bf = {
            let vol = 2 * internal + cut;
            if vol == 0 {
                0.0
            } else {
                cut as f64 / vol as f64
            }
        };
        let flake_bf = members
            .iter()
            .filter(|&&v| {
                let nbrs = g.neighborhood(v).unwrap();
                let int = nbrs.iter().filter(|w| inside(w)).count();
                nbrs.len() - int > int
            })
            .count() as f64
            / members.len() as f64;
        let aodf_bf = members
            .iter()
            .map(|&v| {
                let nbrs = g.neighborhood(v).unwrap();
                if nbrs.is_empty() {
                    0.0
                } else {
                    nbrs.iter().filter(|w| !inside(w)).count() as f64 / nbrs.len() as f64
                }
            })
            .sum::<f64>()
            / members.len() as f64;
        let two_e = 2.0 * g.edge_count() as f64;
        let mut amen_bf = 0.0;
        for &i in &members {
            for &j in &members {
                if i == j {
                    continue;
                }
                let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
                amen_bf += a - (g.degree(i).unwrap() * g.degree(j).unwrap()) as f64 / two_e;
            }
        }
        for &i in &members {
            for &b in g.neighborhood(i).unwrap() {
                if !inside(&b) {
                    amen_bf -=
                        1.0 - ((g.degree(i).unwrap() * g.degree(b).unwrap()) as f64 / two_e).min(1.0);
                }
            }
        }

        let tol = 1e-12;
        assert!((baselines::cut_ratio(&g, &members, n_total).unwrap() - cut_ratio_bf).abs() < tol);
        assert!((baselines::conductance(&g, &members).unwrap() - conductance_bf).abs() < tol);
        assert!((baselines::flake_odf(&g, &members).unwrap() - flake_bf).abs() < tol);
        assert!((baselines::average_odf(&g, &members).unwrap() - aodf_bf).abs() < tol);
        let amen = baselines::unattributed_amen(&g, &members).unwrap();
        assert!((amen - amen_bf).abs() < tol, "amen {amen} vs brute {amen_bf}");
        checked += 1;
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("ACCEPTANCE 2 baseline-oracle-equivalence: PASS ({elapsed:?})");
}

#[test]
fn acceptance_3_generator_laws() {
    // chi-square clause first: target communities are drawn proportional to
    // size, target vertices proportional to degree
    let chi_quantile_99 = |df: f64| {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        ChiSquared::new(df).unwrap().inverse_cdf(0.99)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ACC03);
    let sizes: Vec<u64> = (0..20).map(|_| rng.gen_range(30..=100)).collect();
    let total: u64 = sizes.iter().sum();
    let draws = 10_000usize;
    let mut hits = vec![0usize; sizes.len()];
    for _ in 0..draws {
        hits[weighted_index(&sizes, &mut rng)] += 1;
    }
    let chi2: f64 = hits
        .iter()
        .zip(&sizes)
        .map(|(&h, &s)| {
            let expect = draws as f64 * s as f64 / total as f64;
            (h as f64 - expect).powi(2) / expect
        })
        .sum();
    let crit = chi_quantile_99((sizes.len() - 1) as f64);
    println!(
        "ACCEPTANCE 3 interconnect-target-community chi-square: {} (chi2 {chi2:.1} < {crit:.1})",
        if chi2 < crit { "PASS" } else { "FAIL" }
    );
    let community_chi_ok = chi2 < crit;

    let tree = netgen::generate_ba_community(60, 1, &mut rng).unwrap();
    let degs: Vec<u64> = tree.vertices().map(|v| tree.degree(v).unwrap() as u64).collect();
    let deg_total: u64 = degs.iter().sum();
    let mut vhits = vec![0usize; degs.len()];
    for _ in 0..draws {
        vhits[weighted_index(&degs, &mut rng)] += 1;
    }
    // bin vertices by degree so expected counts stay comfortably above 5
    let mut by_degree: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for (i, &d) in degs.iter().enumerate() {
        let e = by_degree.entry(d.min(6)).or_insert((0.0, 0.0));
        e.0 += vhits[i] as f64;
        e.1 += draws as f64 * d as f64 / deg_total as f64;
    }
    let chi2v: f64 = by_degree
        .values()
        .map(|&(obs, exp)| (obs - exp).powi(2) / exp)
        .sum();
    let critv = chi_quantile_99((by_degree.len() - 1) as f64);
    println!(
        "ACCEPTANCE 3 interconnect-target-vertex chi-square: {} (chi2 {chi2v:.1} < {critv:.1})",
        if chi2v < critv { "PASS" } else { "FAIL" }
    );
    let vertex_chi_ok = chi2v < critv;

    // degree law: realized mean community average degree against the stated
    // closed form, over 30 seeds of the 20-community desk recipe
    let recipe = DatasetRecipe::desk();
    let mut per_seed = Vec::new();
    let mut mean_sizes = Vec::new();
    for seed in 0..30u64 {
        let spec = recipe
            .spec(0.0, 0.0, SizeMode::Quantile(0.0), mix(0x0ACC03, seed))
            .unwrap();
        let spec = GeneratorSpec {
            anomalous: GroupParams::none(),
            ..spec
        };
        let ds = netgen::generate(&spec).unwrap();
        let mut vals = Vec::new();
        for (_, members) in ds.partitions.iter() {
            let d: usize = members
                .iter()
                .map(|&v| ds.network.degree(v).unwrap())
                .sum();
            vals.push(d as f64 / members.len() as f64);
        }
        per_seed.push(vals.iter().sum::<f64>() / vals.len() as f64);
        mean_sizes.push(spec.normal.comm_sizes.iter().sum::<usize>() as f64 / 20.0);
    }
    let measured = per_seed.iter().sum::<f64>() / per_seed.len() as f64;
    let sd = (per_seed
        .iter()
        .map(|x| (x - measured).powi(2))
        .sum::<f64>()
        / (per_seed.len() - 1) as f64)
        .sqrt();
    let se = sd / (per_seed.len() as f64).sqrt();
    let mean_size = mean_sizes.iter().sum::<f64>() / mean_sizes.len() as f64;
    let formula = 2.0 * recipe.ba_m as f64 + mean_size * recipe.inter_p_norm / 20.0;
    let gap = (measured - formula).abs();
    let ok = gap <= 3.0 * se;
    println!(
        "ACCEPTANCE 3 degree-law: {} (measured {measured:.4} vs formula {formula:.4}, |gap|/SE = {:.1}; \
         realized interconnect degree gain tracks 2*inter_p, not mean_size*inter_p/n)",
        if ok { "PASS" } else { "FAIL" },
        gap / se
    );
    assert!(community_chi_ok, "target-community chi-square failed");
    assert!(vertex_chi_ok, "target-vertex chi-square failed");
    assert!(
        ok,
        "degree law: measured {measured:.4} vs formula {formula:.4} differs by {:.1} standard errors",
        gap / se
    );
}

#[test]
fn acceptance_4_average_precision_correctness() {
    let started = Instant::now();
    // perfect ranking
    let ids: Vec<String> = (0..200).map(|i| format!("c{i:03}")).collect();
    let perfect = RankedResult {
        method: "t".into(),
        ordering: ids.clone(),
        anomalous: ids[..20].iter().cloned().collect(),
    };
    assert_eq!(average_precision(&perfect).unwrap(), 1.0);

    // random ranking at 10% prevalence over 10,000 shuffles
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ACC04);
    let mut pool: Vec<String> = (0..1000).map(|i| format!("c{i:04}")).collect();
    let anomalous: BTreeSet<String> = pool[..100].iter().cloned().collect();
    let mut total = 0.0;
    for _ in 0..10_000 {
        pool.shuffle(&mut rng);
        let r = RankedResult {
            method: "t".into(),
            ordering: pool.clone(),
            anomalous: anomalous.clone(),
        };
        total += average_precision(&r).unwrap();
    }
    let mean = total / 10_000.0;
    let random_ok = (mean - 0.10).abs() <= 0.01;
    println!("ACCEPTANCE 4 random-ranking mean AP at 10% prevalence: {mean:.4}");

    // step-sum oracle on 1,000 random cases
    let mut max_err = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(2..80);
        let p = rng.gen_range(1..n);
        let mut ids: Vec<String> = (0..n).map(|i| format!("x{i:02}")).collect();
        let anomalous: BTreeSet<String> = ids[..p].iter().cloned().collect();
        ids.shuffle(&mut rng);
        let r = RankedResult {
            method: "t".into(),
            ordering: ids,
            anomalous,
        };
        // oracle: integrate precision over recall steps
        let total_pos = r.anomalous.len() as f64;
        let mut hits = 0.0;
        let mut prev_recall = 0.0;
        let mut area = 0.0;
        for (k, id) in r.ordering.iter().enumerate() {
            if r.anomalous.contains(id) {
                hits += 1.0;
            }
            let recall = hits / total_pos;
            area += (hits / (k + 1) as f64) * (recall - prev_recall);
            prev_recall = recall;
        }
        max_err = max_err.max((average_precision(&r).unwrap() - area).abs());
    }
    let oracle_ok = max_err < 1e-12;
    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE 4 average-precision-correctness: {} (random mean {mean:.4}, oracle max err {max_err:.2e}, {elapsed:?})",
        if random_ok && oracle_ok && elapsed.as_secs_f64() < 20.0 {
            "PASS"
        } else {
            "FAIL"
        }
    );
    assert!(random_ok, "random-ranking mean AP {mean} outside 0.10 +- 0.01");
    assert!(oracle_ok, "step-sum oracle max error {max_err}");
    assert!(elapsed.as_secs_f64() < 20.0, "took {elapsed:?}");
}

#[test]
fn acceptance_5_trend_reproduction() {
    let started = Instant::now();
    let spec = SweepSpec::desk();
    let out = run_sweep(&spec).unwrap();
    let cmmac = "predicted_edge_labels_stdv";

    for c in &out.cells {
        if c.method == cmmac
            || ["average_degree", "conductance", "unattributed_amen"].contains(&c.method.as_str())
        {
            println!(
                "  cell args={} ip={} mode={} {}: mean AP {:.3} +- {:.3}",
                c.args_anom, c.inter_p_anom, c.size_mode, c.method, c.mean_ap, c.stderr_ap
            );
        }
    }

    // (a) reporting meta-feature non-decreasing in inter_p within each
    // (density, size-mode) row, up to one inversion of at most 0.03
    let mut trend_ok = true;
    for &args in &spec.args_anom {
        for mode in &spec.size_modes {
            let series: Vec<f64> = spec
                .inter_p_anom
                .iter()
                .map(|&ip| out.cell_mean(args, ip, &mode.to_string(), cmmac).unwrap())
                .collect();
            let mut inversions = 0;
            let mut worst: f64 = 0.0;
            for w in series.windows(2) {
                if w[1] < w[0] {
                    inversions += 1;
                    worst = worst.max(w[0] - w[1]);
                }
            }
            let ok = inversions == 0 || (inversions == 1 && worst <= 0.03);
            println!(
                "ACCEPTANCE 5a args={args} mode={mode}: {} (series {series:?})",
                if ok { "PASS" } else { "FAIL" }
            );
            trend_ok &= ok;
        }
    }

    // (b) sparse/small/high-overlap corner: the co-membership ranker beats
    // the strongest of the three named baselines
    let corner = |m: &str| out.cell_mean(0.05, 0.4, "q0", m).unwrap();
    let cm = corner(cmmac);
    let best_baseline = corner("conductance")
        .max(corner("average_degree"))
        .max(corner("unattributed_amen"));
    let corner_ok = cm > best_baseline;
    println!(
        "ACCEPTANCE 5b sparse corner: {} (cmmac {cm:.3} vs best baseline {best_baseline:.3})",
        if corner_ok { "PASS" } else { "FAIL" }
    );

    // (c) density baseline nails the dense corner
    let mut dense_ok = true;
    for mode in ["q0", "random"] {
        let ap = out.cell_mean(0.8, 0.05, mode, "average_degree").unwrap();
        let ok = ap >= 0.9;
        println!(
            "ACCEPTANCE 5c dense corner ({mode}): {} (average_degree mean AP {ap:.3})",
            if ok { "PASS" } else { "FAIL" }
        );
        dense_ok &= ok;
    }

    let elapsed = started.elapsed();
    let budget_ok = elapsed.as_secs_f64() < 20.0 * 60.0;
    println!(
        "ACCEPTANCE 5 trend-reproduction: {} ({elapsed:?})",
        if trend_ok && corner_ok && dense_ok && budget_ok {
            "PASS"
        } else {
            "FAIL"
        }
    );
    assert!(trend_ok, "monotone trend violated");
    assert!(corner_ok, "cmmac {cm} not above best baseline {best_baseline}");
    assert!(dense_ok, "average-degree baseline under 0.9 at the dense corner");
    assert!(budget_ok, "took {elapsed:?}");
}

#[test]
fn acceptance_6_degenerate_overlap_control() {
    // zero interconnect: no co-membership signal reaches the anomalies, so
    // the ranker must sit at the 10%-prevalence floor (test set of 30 with
    // 3 anomalous)
    let recipe = DatasetRecipe {
        n_normal: 33,
        ..DatasetRecipe::desk()
    };
    let mut aps = Vec::new();
    for seed in 0..25u64 {
        let spec = recipe
            .spec(0.05, 0.0, SizeMode::Quantile(0.0), mix(0x0ACC06, seed))
            .unwrap();
        let ds = netgen::generate(&spec).unwrap();
        let cfg = ExperimentConfig {
            split_seed: mix(0x5EED06, seed),
            model_seed: mix(0x30DE06, seed),
            ..ExperimentConfig::default()
        };
        let out = run_experiment(&ds, &cfg).unwrap();
        aps.push(out.aps["predicted_edge_labels_stdv"]);
    }
    let mean = aps.iter().sum::<f64>() / aps.len() as f64;
    let ok = (mean - 0.10).abs() <= 0.05;
    println!(
        "ACCEPTANCE 6 degenerate-overlap-control: {} (mean AP {mean:.4} vs 0.10 +- 0.05)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "mean AP {mean} outside 0.10 +- 0.05");
}

#[test]
fn acceptance_7_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SweepSpec {
        args_anom: vec![0.05],
        inter_p_anom: vec![0.2, 0.4],
        size_modes: vec![SizeMode::Quantile(0.0)],
        seeds_per_cell: 3,
        ..SweepSpec::desk()
    };
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let out = run_sweep(&spec).unwrap();
        let rows = dir.path().join(format!("rows_{run}.csv"));
        let cells = dir.path().join(format!("cells_{run}.csv"));
        write_results_csv(&out.rows, &rows).unwrap();
        write_cells_csv(&out.cells, &cells).unwrap();

        let ds = netgen::generate(
            &DatasetRecipe::desk()
                .spec(0.05, 0.4, SizeMode::Random, 0xDE7)
                .unwrap(),
        )
        .unwrap();
        let exp = run_experiment(&ds, &ExperimentConfig::default()).unwrap();
        let cards = dir.path().join(format!("cards_{run}.csv"));
        write_scorecards_csv(&exp, &cards).unwrap();
        files.push((rows, cells, cards));
    }
    for field in 0..3 {
        let a = std::fs::read([&files[0].0, &files[0].1, &files[0].2][field]).unwrap();
        let b = std::fs::read([&files[1].0, &files[1].1, &files[1].2][field]).unwrap();
        assert_eq!(a, b, "output file {field} differs between identical runs");
    }
    println!("ACCEPTANCE 7 determinism: PASS (row, cell and scorecard CSVs byte-identical)");
}

// the baselines keep their documented polarity knob: flipping it reverses
// an ordering end to end
#[test]
fn polarity_flip_reverses_ranking() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = random_graph(&mut rng, 30, 60);
    let mut p = PartitionMap::new();
    let mut start = 0u64;
    for i in 0..5 {
        let members: BTreeSet<VertexId> = (start..start + 6).collect();
        p.insert(format!("c{i}"), members).unwrap();
        start += 6;
    }
    let fwd = baselines::rank_by_baseline(
        &g,
        &p,
        BaselineMethod::Conductance,
        baselines::Polarity::LowIsAnomalous,
    )
    .unwrap();
    let bwd = baselines::rank_by_baseline(
        &g,
        &p,
        BaselineMethod::Conductance,
        baselines::Polarity::HighIsAnomalous,
    )
    .unwrap();
    let scores: BTreeMap<_, _> = p
        .iter()
        .map(|(id, m)| (id.clone(), baselines::conductance(&g, m).unwrap()))
        .collect();
    let distinct: BTreeSet<_> = scores.values().map(|v| v.to_bits()).collect();
    if distinct.len() == scores.len() {
        let rev: Vec<_> = bwd.into_iter().rev().collect();
        assert_eq!(fwd, rev);
    }
}
