//! R-MAT fitting and generation.
//!
//! Fitting reads the four top-level quadrant proportions off a graph's
//! (symmetric) adjacency matrix, padded conceptually to `2^scale`; an empty
//! quadrant is a fitting failure. Generation places edges by recursive
//! quadrant descent and then deletes random nodes down to the target count.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, FailureRecord, GraphEntry, Provenance};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::Graph;
use crate::rng::{self, tag};

const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Quadrant probabilities plus sizing for one generator run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RmatParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Edges per node; the full-grid edge budget is
    /// `round(edge_factor * 2^scale)`.
    pub edge_factor: f64,
    /// Adjacency-matrix exponent: the grid is `2^scale x 2^scale`.
    pub scale: u32,
    /// Node count after reduction; `2^(scale-1) < target_nodes <= 2^scale`.
    pub target_nodes: usize,
}

impl RmatParams {
    pub fn new(
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        edge_factor: f64,
        scale: u32,
        target_nodes: usize,
    ) -> Result<RmatParams> {
        let params = RmatParams {
            a,
            b,
            c,
            d,
            edge_factor,
            scale,
            target_nodes,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "quadrant probability {name} = {p} lies outside [0, 1]"
                )));
            }
        }
        let sum = self.a + self.b + self.c + self.d;
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "quadrant probabilities sum to {sum}, expected 1"
            )));
        }
        if self.scale == 0 || self.scale >= usize::BITS {
            return Err(Error::InvalidParameter(format!(
                "scale {} is out of range",
                self.scale
            )));
        }
        let full = 1usize << self.scale;
        if self.target_nodes > full || self.target_nodes * 2 <= full {
            return Err(Error::InvalidParameter(format!(
                "target_nodes {} does not satisfy 2^(scale-1) < n <= 2^scale for scale {}",
                self.target_nodes, self.scale
            )));
        }
        if !self.edge_factor.is_finite() || self.edge_factor <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "edge_factor {} must be positive and finite",
                self.edge_factor
            )));
        }
        Ok(())
    }
}

/// Fit quadrant proportions, edge factor, and sizing to a graph.
///
/// Both directions of every edge are counted against the four top-level
/// quadrants of the padded `2^scale` adjacency matrix. Any empty quadrant is
/// an error; the caller records it as a fitting failure.
pub fn fit_rmat(g: &Graph) -> Result<RmatParams> {
    let n = g.n_nodes();
    if n < 2 {
        return Err(Error::TooSmallGraph {
            n_nodes: n,
            required: 2,
        });
    }
    if g.n_edges() == 0 {
        return Err(Error::EmptyGraph);
    }
    let scale = scale_for(n);
    let half = 1usize << (scale - 1);
    let mut counts = [0usize; 4];
    for (u, v) in g.edges() {
        counts[quadrant(u, v, half)] += 1;
        counts[quadrant(v, u, half)] += 1;
    }
    for (idx, &count) in counts.iter().enumerate() {
        if count == 0 {
            return Err(Error::EmptyQuadrant {
                quadrant: ['a', 'b', 'c', 'd'][idx],
            });
        }
    }
    let total = (2 * g.n_edges()) as f64;
    RmatParams::new(
        counts[0] as f64 / total,
        counts[1] as f64 / total,
        counts[2] as f64 / total,
        counts[3] as f64 / total,
        g.n_edges() as f64 / n as f64,
        scale,
        n,
    )
}

fn scale_for(n: usize) -> u32 {
    n.next_power_of_two().trailing_zeros().max(1)
}

fn quadrant(row: usize, col: usize, half: usize) -> usize {
    (if row >= half { 2 } else { 0 }) + usize::from(col >= half)
}

/// Extra rejected draws tolerated per requested edge before generation is
/// declared saturated.
pub const DEFAULT_RETRY_FACTOR: usize = 100;

/// Generate a graph by recursive quadrant descent.
///
/// Draws `round(edge_factor * 2^scale)` edge placements, resampling any draw
/// that lands on the diagonal or duplicates an existing unordered pair, then
/// deletes `2^scale - target_nodes` uniformly random nodes and re-indexes.
/// The output is simple, has exactly `target_nodes` nodes, and may be
/// disconnected.
pub fn generate_rmat(params: &RmatParams, rng: &mut impl Rng) -> Result<Graph> {
    params.validate()?;
    let full = 1usize << params.scale;
    let requested = (params.edge_factor * full as f64).round() as usize;
    let capacity = full * (full - 1) / 2;
    if requested > capacity {
        return Err(Error::InvalidParameter(format!(
            "edge budget {requested} exceeds the {capacity}-edge capacity of a simple graph on {full} nodes"
        )));
    }
    let budget = DEFAULT_RETRY_FACTOR * requested;
    let mut rejected = 0usize;
    let mut placed: HashSet<(u32, u32)> = HashSet::with_capacity(requested);
    let cumulative = [
        params.a,
        params.a + params.b,
        params.a + params.b + params.c,
    ];
    while placed.len() < requested {
        let (row, col) = descend(params.scale, &cumulative, rng);
        let pair = (row.min(col) as u32, row.max(col) as u32);
        if row == col || !placed.insert(pair) {
            rejected += 1;
            if rejected > budget {
                return Err(Error::PlacementSaturated {
                    attempts: rejected,
                    requested,
                });
            }
        }
    }

    let remove = full - params.target_nodes;
    let kept: Vec<usize> = if remove == 0 {
        (0..full).collect()
    } else {
        let removed: HashSet<usize> = rand::seq::index::sample(rng, full, remove)
            .into_iter()
            .collect();
        (0..full).filter(|v| !removed.contains(v)).collect()
    };

    let grid = Graph::from_edges(
        placed.iter().map(|&(u, v)| (u as usize, v as usize)),
        Some(full),
    )?;
    grid.induced_subgraph(&kept)
}

fn descend(scale: u32, cumulative: &[f64; 3], rng: &mut impl Rng) -> (usize, usize) {
    let mut row = 0usize;
    let mut col = 0usize;
    for _ in 0..scale {
        let draw: f64 = rng.random();
        let quadrant = match draw {
            d if d < cumulative[0] => 0,
            d if d < cumulative[1] => 1,
            d if d < cumulative[2] => 2,
            _ => 3,
        };
        row = (row << 1) | (quadrant >> 1);
        col = (col << 1) | (quadrant & 1);
    }
    (row, col)
}

/// Fit and generate one R-MAT mirror per reference graph.
///
/// Failures (empty quadrant at fit time, saturation at generation time) are
/// recorded and skipped; the operation itself never aborts. Mirrors keep
/// their reference's node count and carry id `rmat_<reference id>`.
pub fn mirror_dataset(reference: &Dataset, seed: u64) -> Result<Dataset> {
    if reference.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let outcomes = exec::map_slice(reference.graphs(), |index, entry| {
        let id = format!("rmat_{}", entry.id);
        let mirrored = fit_rmat(&entry.graph).and_then(|params| {
            let graph = generate_rmat(
                &params,
                &mut rng::stream(seed, &[tag::RMAT_GENERATE, index as u64]),
            )?;
            Ok((params, graph))
        });
        (id, mirrored)
    });

    let mut dataset = Dataset::new(format!("{}_rmat", reference.name()), Some(seed));
    for (id, outcome) in outcomes {
        match outcome {
            Ok((params, graph)) => {
                dataset.add_graph(GraphEntry {
                    id,
                    graph,
                    provenance: Provenance::Rmat,
                    rmat_params: Some(params),
                    source_ratio: None,
                })?;
            }
            Err(err) => dataset.add_failure(FailureRecord {
                id,
                reason: err.to_string(),
            })?,
        }
    }
    Ok(dataset)
}
