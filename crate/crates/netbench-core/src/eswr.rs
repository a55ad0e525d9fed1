//! Exploration Sampling With Replacement: build a dataset of sub-networks
//! from one large network with a Metropolis-Hastings random walk.
//!
//! Each sample draws a size from a normal distribution, walks the source's
//! largest connected component until that many distinct nodes have been
//! visited, and takes the induced subgraph. The source is never mutated, so
//! samples may overlap freely. Every sample runs on its own derived RNG
//! stream: samples are independent, parallelizable, and extending
//! `n_networks` leaves earlier samples unchanged.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{Dataset, FailureRecord, GraphEntry, Provenance};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::Graph;
use crate::rng::{self, tag};

/// Steps allowed per requested node before a walk is declared stalled.
pub const DEFAULT_STEP_FACTOR: usize = 1000;

/// ESWR parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub n_networks: usize,
    /// Mean of the normal sample-size distribution.
    pub size_mean: f64,
    /// Standard deviation of the sample-size distribution.
    pub size_stddev: f64,
    /// Floor on drawn sizes; keeps extreme draws from degenerating.
    pub min_size: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(n_networks: usize, size_mean: f64, size_stddev: f64, seed: u64) -> SamplerConfig {
        SamplerConfig {
            n_networks,
            size_mean,
            size_stddev,
            min_size: 2,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_networks < 1 {
            return Err(Error::InvalidParameter("n_networks must be >= 1".into()));
        }
        if !self.size_mean.is_finite() || self.size_mean <= 0.0 {
            return Err(Error::InvalidParameter("size mean must be > 0".into()));
        }
        if self.size_stddev < 0.0 || !self.size_stddev.is_finite() {
            return Err(Error::InvalidParameter(
                "size stddev must be finite and >= 0".into(),
            ));
        }
        if self.min_size < 2 {
            return Err(Error::InvalidParameter("min_size must be >= 2".into()));
        }
        Ok(())
    }
}

/// Draw a sample size: normal, rounded, clamped to
/// `[min_size, source_nodes]`.
pub fn sample_size(cfg: &SamplerConfig, source_nodes: usize, rng: &mut impl Rng) -> usize {
    let normal = Normal::new(cfg.size_mean, cfg.size_stddev)
        .expect("validated config has finite non-negative stddev");
    let draw = normal.sample(rng).round();
    let floor = cfg.min_size;
    let ceil = source_nodes.max(floor);
    if !draw.is_finite() || draw < floor as f64 {
        floor
    } else if draw > ceil as f64 {
        ceil
    } else {
        draw as usize
    }
}

/// Collect `target_n` distinct nodes by Metropolis-Hastings random walk.
///
/// The walk starts at a uniformly random node of the largest connected
/// component. At node `v` it proposes a uniform neighbor `w` and accepts
/// with probability `min(1, degree(v) / degree(w))`; rejected proposals stay
/// (and add no new node) but still consume a step of the budget
/// (`1000 * target_n`).
pub fn mhrw_sample(g: &Graph, target_n: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    let component = g.largest_component_nodes();
    mhrw_sample_in(g, &component, target_n, rng)
}

/// As [`mhrw_sample`] but with the component precomputed; used when many
/// samples share one source.
pub(crate) fn mhrw_sample_in(
    g: &Graph,
    component: &[usize],
    target_n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<usize>> {
    if component.len() < target_n {
        return Err(Error::InsufficientSource {
            available: component.len(),
            requested: target_n,
        });
    }
    let mut current = component[rng.random_range(0..component.len())];
    let mut visited = vec![false; g.n_nodes()];
    visited[current] = true;
    let mut collected = 1usize;
    let budget = DEFAULT_STEP_FACTOR * target_n;
    let mut steps = 0usize;
    while collected < target_n {
        if steps >= budget {
            return Err(Error::WalkStalled {
                steps,
                collected,
                target: target_n,
            });
        }
        steps += 1;
        if let Some(next) = mhrw_step(g, current, rng) {
            current = next;
            if !visited[current] {
                visited[current] = true;
                collected += 1;
            }
        }
    }
    Ok((0..g.n_nodes()).filter(|&v| visited[v]).collect())
}

/// One proposal: `Some(w)` on acceptance, `None` on rejection (stay).
pub(crate) fn mhrw_step(g: &Graph, current: usize, rng: &mut impl Rng) -> Option<usize> {
    let neighbors = g.neighbors(current);
    if neighbors.is_empty() {
        return None;
    }
    let proposal = neighbors[rng.random_range(0..neighbors.len())] as usize;
    let ratio = g.degree(current) as f64 / g.degree(proposal) as f64;
    (rng.random::<f64>() < ratio).then_some(proposal)
}

/// Build a dataset of `cfg.n_networks` induced sub-networks.
///
/// Samples that fail (component smaller than the drawn size, stalled walk)
/// become failure records; the remaining samples still complete. Entries are
/// `sample_<k>` in sample order with provenance `sampled` and their
/// sample-to-source size ratio.
pub fn eswr(g: &Graph, cfg: &SamplerConfig) -> Result<Dataset> {
    cfg.validate()?;
    if g.n_nodes() == 0 {
        return Err(Error::EmptyDataset);
    }
    let component = g.largest_component_nodes();
    let source_nodes = g.n_nodes();

    let outcomes = exec::map_range(cfg.n_networks, |k| {
        let mut rng = rng::stream(cfg.seed, &[tag::ESWR_SAMPLE, k as u64]);
        let size = sample_size(cfg, source_nodes, &mut rng);
        let sampled = mhrw_sample_in(g, &component, size, &mut rng)
            .and_then(|nodes| g.induced_subgraph(&nodes));
        (size, sampled)
    });

    let mut dataset = Dataset::new("sampled".to_string(), Some(cfg.seed));
    for (k, (size, outcome)) in outcomes.into_iter().enumerate() {
        let id = format!("sample_{k}");
        match outcome {
            Ok(graph) => dataset.add_graph(GraphEntry {
                id,
                graph,
                provenance: Provenance::Sampled,
                rmat_params: None,
                source_ratio: Some(size as f64 / source_nodes as f64),
            })?,
            Err(err) => dataset.add_failure(FailureRecord {
                id,
                reason: err.to_string(),
            })?,
        }
    }
    Ok(dataset)
}
