//! Stochastic processes on graphs: a discrete-time SIR information-spread
//! simulation and Louvain community detection.
//!
//! Both are deterministic given their RNG stream. Batch variants draw one
//! sub-seed per run up front, so runs can execute in parallel without
//! changing results.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::Graph;
use crate::metrics::{BinDomain, MetricSample};
use crate::rng;

/// SIR simulation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SirConfig {
    /// Number of initially infected nodes.
    pub n_seeds: usize,
    /// Per-iteration probability that an infected node infects each
    /// susceptible neighbor.
    pub infect_prob: f64,
    /// Iterations a node stays infected before recovering.
    pub infectious_period: u32,
    /// Hard iteration cap.
    pub max_iterations: u32,
    /// Runs per graph when building histograms.
    pub n_runs: usize,
}

impl Default for SirConfig {
    fn default() -> Self {
        SirConfig {
            n_seeds: 2,
            infect_prob: 0.04,
            infectious_period: 5,
            max_iterations: 100,
            n_runs: 20,
        }
    }
}

impl SirConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_seeds < 1 {
            return Err(Error::InvalidParameter("n_seeds must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.infect_prob) {
            return Err(Error::InvalidParameter(
                "infect_prob must lie in [0, 1]".into(),
            ));
        }
        if self.infectious_period < 1 {
            return Err(Error::InvalidParameter(
                "infectious_period must be >= 1".into(),
            ));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidParameter(
                "max_iterations must be >= 1".into(),
            ));
        }
        if self.n_runs < 1 {
            return Err(Error::InvalidParameter("n_runs must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outcome of one SIR run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SirResult {
    /// Iterations executed before the infected set emptied (or the cap hit).
    pub steps: u32,
    /// Fraction of nodes recovered at termination.
    pub saturation: f64,
}

#[derive(Clone, Copy, PartialEq)]
enum SirState {
    Susceptible,
    Infected { since: u32 },
    Recovered,
}

/// Run one SIR simulation.
///
/// Seeds are drawn uniformly without replacement. Each iteration applies
/// infection synchronously against the state at the iteration start, then
/// recovers every node that has been infected for the full infectious
/// period. Recovered nodes cannot be reinfected. The run terminates when no
/// node is infected or after `max_iterations`.
pub fn sir_run(g: &Graph, cfg: &SirConfig, rng: &mut impl Rng) -> Result<SirResult> {
    cfg.validate()?;
    let n = g.n_nodes();
    if n < cfg.n_seeds {
        return Err(Error::TooSmallGraph {
            n_nodes: n,
            required: cfg.n_seeds,
        });
    }

    let mut state = vec![SirState::Susceptible; n];
    let mut infected: Vec<usize> = rand::seq::index::sample(rng, n, cfg.n_seeds).into_vec();
    infected.sort_unstable();
    for &v in &infected {
        state[v] = SirState::Infected { since: 0 };
    }

    let mut steps = 0;
    for t in 1..=cfg.max_iterations {
        steps = t;
        // Infection phase: every node infected at the start of the iteration
        // draws once per susceptible-at-start neighbor, in node-id order.
        let mut newly: Vec<usize> = Vec::new();
        let mut claimed = vec![false; n];
        for &u in &infected {
            for &w in g.neighbors(u) {
                let w = w as usize;
                if state[w] == SirState::Susceptible
                    && rng.random::<f64>() < cfg.infect_prob
                    && !claimed[w]
                {
                    claimed[w] = true;
                    newly.push(w);
                }
            }
        }
        newly.sort_unstable();
        // Recovery phase: a node infected at iteration `since` recovers at
        // the end of iteration `since + infectious_period`.
        infected.retain(|&v| {
            let SirState::Infected { since } = state[v] else {
                unreachable!()
            };
            if t - since >= cfg.infectious_period {
                state[v] = SirState::Recovered;
                false
            } else {
                true
            }
        });
        for &w in &newly {
            state[w] = SirState::Infected { since: t };
        }
        merge_sorted(&mut infected, &newly);
        if infected.is_empty() {
            break;
        }
    }

    let recovered = state.iter().filter(|&&s| s == SirState::Recovered).count();
    Ok(SirResult {
        steps,
        saturation: recovered as f64 / n as f64,
    })
}

fn merge_sorted(base: &mut Vec<usize>, extra: &[usize]) {
    base.extend_from_slice(extra);
    base.sort_unstable();
}

/// Run `cfg.n_runs` SIR simulations and histogram the outcomes: steps over
/// integer bins `0..=max_iterations`, saturation over `[0, 1]` in
/// `saturation_bins` cells (the suite default is 20).
pub fn sir_sample(
    g: &Graph,
    cfg: &SirConfig,
    saturation_bins: usize,
    rng: &mut impl Rng,
) -> Result<(MetricSample, MetricSample)> {
    let results = sir_runs(g, cfg, rng)?;
    let steps_domain = BinDomain::integers(0, cfg.max_iterations as usize);
    let steps = MetricSample::histogram_from_values(
        results.iter().map(|r| r.steps as f64),
        steps_domain,
        "sir_steps",
    )?;
    let saturation = MetricSample::histogram_from_values(
        results.iter().map(|r| r.saturation),
        BinDomain::unit(saturation_bins),
        "sir_saturation",
    )?;
    Ok((steps, saturation))
}

/// The raw per-run results behind [`sir_sample`]; runs execute in parallel
/// on sub-seeds drawn up front from `rng`.
pub fn sir_runs(g: &Graph, cfg: &SirConfig, rng: &mut impl Rng) -> Result<Vec<SirResult>> {
    cfg.validate()?;
    let sub_seeds: Vec<u64> = (0..cfg.n_runs).map(|_| rng.random()).collect();
    exec::map_slice(&sub_seeds, |_, &seed| {
        sir_run(g, cfg, &mut rng::stream(seed, &[]))
    })
    .into_iter()
    .collect()
}

/// A partition of the node set into contiguous community ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    assignments: Vec<usize>,
    n_communities: usize,
}

impl Partition {
    /// Relabel arbitrary community labels to `0..k` by first occurrence.
    pub fn new(raw_labels: &[usize]) -> Partition {
        let mut remap: Vec<Option<usize>> = Vec::new();
        let mut assignments = Vec::with_capacity(raw_labels.len());
        let mut next = 0usize;
        let max_label = raw_labels.iter().copied().max().unwrap_or(0);
        remap.resize(max_label + 1, None);
        for &label in raw_labels {
            let id = *remap[label].get_or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            assignments.push(id);
        }
        Partition {
            assignments,
            n_communities: next,
        }
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn assignment(&self, v: usize) -> usize {
        self.assignments[v]
    }

    pub fn n_communities(&self) -> usize {
        self.n_communities
    }
}

/// Newman modularity `Q = sum_c [ e_c/m - resolution * (d_c / 2m)^2 ]`.
pub fn modularity(g: &Graph, p: &Partition, resolution: f64) -> Result<f64> {
    let m = g.n_edges();
    if m == 0 {
        return Err(Error::UndefinedModularity);
    }
    if p.assignments.len() != g.n_nodes() {
        return Err(Error::MalformedInput(format!(
            "partition covers {} nodes but the graph has {}",
            p.assignments.len(),
            g.n_nodes()
        )));
    }
    let k = p.n_communities();
    let mut internal = vec![0usize; k];
    let mut total_degree = vec![0usize; k];
    for (u, v) in g.edges() {
        if p.assignment(u) == p.assignment(v) {
            internal[p.assignment(u)] += 1;
        }
    }
    for v in 0..g.n_nodes() {
        total_degree[p.assignment(v)] += g.degree(v);
    }
    let m = m as f64;
    let q = (0..k)
        .map(|c| {
            let frac = internal[c] as f64 / m;
            let deg = total_degree[c] as f64 / (2.0 * m);
            frac - resolution * deg * deg
        })
        .sum();
    Ok(q)
}

/// Edge-weighted view used across Louvain aggregation levels. `m` is the
/// total edge weight including self-loops; `strength[v]` counts self-loops
/// twice, matching the weighted-degree convention of the gain formula.
struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    strength: Vec<f64>,
    total_weight: f64,
}

impl WeightedGraph {
    fn from_graph(g: &Graph) -> WeightedGraph {
        let n = g.n_nodes();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in g.edges() {
            adj[u].push((v, 1.0));
            adj[v].push((u, 1.0));
        }
        let strength: Vec<f64> = adj.iter().map(|nbrs| nbrs.len() as f64).collect();
        WeightedGraph {
            adj,
            self_loops: vec![0.0; n],
            strength,
            total_weight: g.n_edges() as f64,
        }
    }

    fn n_nodes(&self) -> usize {
        self.adj.len()
    }

    /// Collapse communities into supernodes; `labels` must be contiguous.
    fn aggregate(&self, labels: &[usize], n_communities: usize) -> WeightedGraph {
        let mut self_loops = vec![0.0f64; n_communities];
        let mut weights: Vec<std::collections::BTreeMap<usize, f64>> =
            vec![std::collections::BTreeMap::new(); n_communities];
        for v in 0..self.n_nodes() {
            let cv = labels[v];
            self_loops[cv] += self.self_loops[v];
            for &(w, weight) in &self.adj[v] {
                let cw = labels[w];
                if cv == cw {
                    if v < w {
                        self_loops[cv] += weight;
                    }
                } else {
                    *weights[cv].entry(cw).or_insert(0.0) += weight;
                }
            }
        }
        let adj: Vec<Vec<(usize, f64)>> = weights
            .into_iter()
            .map(|map| map.into_iter().collect())
            .collect();
        let strength: Vec<f64> = adj
            .iter()
            .zip(&self_loops)
            .map(|(nbrs, &sl)| nbrs.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * sl)
            .collect();
        WeightedGraph {
            adj,
            self_loops,
            strength,
            total_weight: self.total_weight,
        }
    }
}

/// One Louvain local-move phase. Returns `(labels, n_communities, moved)`
/// with contiguous labels.
fn louvain_level(
    wg: &WeightedGraph,
    resolution: f64,
    rng: &mut impl Rng,
) -> (Vec<usize>, usize, bool) {
    let n = wg.n_nodes();
    let m = wg.total_weight;
    let mut community: Vec<usize> = (0..n).collect();
    let mut community_strength: Vec<f64> = wg.strength.clone();
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved_any = false;

    loop {
        let mut moved_this_sweep = false;
        order.shuffle(rng);
        for &v in &order {
            let current = community[v];
            let k_v = wg.strength[v];
            // Σ of edge weights from v into each adjacent community.
            let mut link_weight: std::collections::BTreeMap<usize, f64> =
                std::collections::BTreeMap::new();
            link_weight.insert(current, 0.0);
            for &(w, weight) in &wg.adj[v] {
                *link_weight.entry(community[w]).or_insert(0.0) += weight;
            }
            community_strength[current] -= k_v;
            let gain = |c: usize, links: f64| {
                links / m - resolution * community_strength[c] * k_v / (2.0 * m * m)
            };
            let stay_gain = gain(current, link_weight[&current]);
            let mut best = current;
            let mut best_gain = stay_gain;
            for (&c, &links) in &link_weight {
                if c == current {
                    continue;
                }
                let g = gain(c, links);
                // strictly better, or equal to a previous improvement with a
                // lower community id (BTreeMap order makes this the first hit)
                if g > best_gain + 1e-12 {
                    best = c;
                    best_gain = g;
                }
            }
            community[v] = best;
            community_strength[best] += k_v;
            if best != current {
                moved_this_sweep = true;
                moved_any = true;
            }
        }
        if !moved_this_sweep {
            break;
        }
    }

    let partition = Partition::new(&community);
    (
        partition.assignments().to_vec(),
        partition.n_communities(),
        moved_any,
    )
}

/// Louvain community detection: local moves with random visitation order and
/// lowest-id tie-breaking, then community aggregation, repeated until a pass
/// makes no move.
pub fn louvain(g: &Graph, resolution: f64, rng: &mut impl Rng) -> Result<Partition> {
    if g.n_edges() == 0 {
        return Err(Error::UndefinedModularity);
    }
    if resolution <= 0.0 {
        return Err(Error::InvalidParameter("resolution must be > 0".into()));
    }
    let mut wg = WeightedGraph::from_graph(g);
    let mut node_to_community: Vec<usize> = (0..g.n_nodes()).collect();
    loop {
        let (labels, n_communities, moved) = louvain_level(&wg, resolution, rng);
        if !moved {
            break;
        }
        for slot in node_to_community.iter_mut() {
            *slot = labels[*slot];
        }
        if n_communities == wg.n_nodes() {
            break;
        }
        wg = wg.aggregate(&labels, n_communities);
    }
    Ok(Partition::new(&node_to_community))
}

/// Community counts over `n_runs` independent Louvain runs; runs execute in
/// parallel on sub-seeds drawn up front from `rng`.
pub fn louvain_counts(
    g: &Graph,
    resolution: f64,
    n_runs: usize,
    rng: &mut impl Rng,
) -> Result<Vec<usize>> {
    if n_runs < 1 {
        return Err(Error::InvalidParameter("n_runs must be >= 1".into()));
    }
    let sub_seeds: Vec<u64> = (0..n_runs).map(|_| rng.random()).collect();
    exec::map_slice(&sub_seeds, |_, &seed| {
        louvain(g, resolution, &mut rng::stream(seed, &[])).map(|p| p.n_communities())
    })
    .into_iter()
    .collect()
}

/// Histogram of Louvain community counts over `n_runs` runs (integer bins up
/// to the largest observed count).
pub fn louvain_sample(
    g: &Graph,
    resolution: f64,
    n_runs: usize,
    rng: &mut impl Rng,
) -> Result<MetricSample> {
    let counts = louvain_counts(g, resolution, n_runs, rng)?;
    let max = counts.iter().copied().max().unwrap_or(1);
    MetricSample::histogram_from_values(
        counts.into_iter().map(|c| c as f64),
        BinDomain::integers(0, max),
        "louvain",
    )
}
