//! Structural per-graph statistics: degree and clustering distributions, the
//! normalized-Laplacian spectrum, and all-pairs shortest-path lengths.
//!
//! Each statistic comes in two layers: a raw extractor returning the per-node
//! (or per-pair) values, and a `*_sample` wrapper binning those values into a
//! normalized histogram [`MetricSample`]. Raw extractors let the evaluation
//! suite compute shared bin domains across two datasets before binning.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Half-open binning domain `[lo, hi)` split into `bins` equal cells; values
/// outside the domain clamp into the boundary cells so no mass is lost.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinDomain {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl BinDomain {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<BinDomain> {
        if bins == 0 {
            return Err(Error::InvalidParameter("bin count must be >= 1".into()));
        }
        if !lo.is_finite() || !hi.is_finite() || hi <= lo {
            return Err(Error::InvalidParameter(format!(
                "bin domain [{lo}, {hi}) is empty"
            )));
        }
        Ok(BinDomain { lo, hi, bins })
    }

    /// Unit-width bins covering the integers `lo..=max`.
    pub fn integers(lo: usize, max: usize) -> BinDomain {
        let max = max.max(lo);
        BinDomain {
            lo: lo as f64,
            hi: (max + 1) as f64,
            bins: max + 1 - lo,
        }
    }

    /// `[0, 1]` split into `bins` cells.
    pub fn unit(bins: usize) -> BinDomain {
        BinDomain {
            lo: 0.0,
            hi: 1.0,
            bins,
        }
    }

    fn index_of(&self, x: f64) -> usize {
        let width = (self.hi - self.lo) / self.bins as f64;
        let raw = ((x - self.lo) / width).floor();
        if raw < 0.0 {
            0
        } else {
            (raw as usize).min(self.bins - 1)
        }
    }
}

/// Default clustering-coefficient domain: `[0, 1]` in 100 bins.
pub fn default_clustering_domain() -> BinDomain {
    BinDomain::unit(100)
}

/// Default spectral domain: `[0, 2]` in 200 bins.
pub fn default_spectral_domain() -> BinDomain {
    BinDomain {
        lo: 0.0,
        hi: 2.0,
        bins: 200,
    }
}

/// A per-graph statistic in one of the two shapes MMD kernels consume.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricSample {
    Scalar(f64),
    Histogram {
        weights: Vec<f64>,
        domain: BinDomain,
    },
}

impl MetricSample {
    /// Normalized histogram of `values` over `domain`.
    ///
    /// Errors with [`Error::EmptyMetric`] when there is nothing to bin, since
    /// an all-zero histogram cannot carry unit mass.
    pub fn histogram_from_values<I>(
        values: I,
        domain: BinDomain,
        metric: &'static str,
    ) -> Result<MetricSample>
    where
        I: IntoIterator<Item = f64>,
    {
        let mut weights = vec![0.0f64; domain.bins];
        let mut count = 0u64;
        for x in values {
            weights[domain.index_of(x)] += 1.0;
            count += 1;
        }
        if count == 0 {
            return Err(Error::EmptyMetric { metric });
        }
        for w in &mut weights {
            *w /= count as f64;
        }
        Ok(MetricSample::Histogram { weights, domain })
    }

    /// Histogram built from pre-aggregated `counts[i]` occurrences of value `i`.
    pub fn histogram_from_counts(
        counts: &[u64],
        domain: BinDomain,
        metric: &'static str,
    ) -> Result<MetricSample> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyMetric { metric });
        }
        let mut weights = vec![0.0f64; domain.bins];
        for (value, &count) in counts.iter().enumerate() {
            if count > 0 {
                weights[domain.index_of(value as f64)] += count as f64 / total as f64;
            }
        }
        Ok(MetricSample::Histogram { weights, domain })
    }
}

/// Node degrees in index order.
pub fn node_degrees(g: &Graph) -> Vec<usize> {
    g.degree_sequence()
}

/// Normalized histogram of node degrees.
pub fn degree_sample(g: &Graph, domain: BinDomain) -> Result<MetricSample> {
    MetricSample::histogram_from_values(
        node_degrees(g).into_iter().map(|d| d as f64),
        domain,
        "degree",
    )
}

/// Per-node clustering coefficients `c_v = 2 T(v) / (d(v) (d(v) - 1))`.
///
/// Nodes of degree 0 or 1 have no possible triangles and are assigned 0.
pub fn clustering_coefficients(g: &Graph) -> Vec<f64> {
    (0..g.n_nodes())
        .map(|v| {
            let neighbors = g.neighbors(v);
            let d = neighbors.len();
            if d < 2 {
                return 0.0;
            }
            let mut triangles = 0usize;
            for (i, &u) in neighbors.iter().enumerate() {
                for &w in &neighbors[i + 1..] {
                    if g.has_edge(u as usize, w as usize) {
                        triangles += 1;
                    }
                }
            }
            2.0 * triangles as f64 / (d as f64 * (d as f64 - 1.0))
        })
        .collect()
}

/// Normalized histogram of clustering coefficients.
pub fn clustering_sample(g: &Graph, domain: BinDomain) -> Result<MetricSample> {
    MetricSample::histogram_from_values(clustering_coefficients(g), domain, "clustering")
}

/// Eigenvalues of the symmetric normalized Laplacian, ascending.
///
/// `N = D^{-1/2} (D - A) D^{-1/2}` with rows and columns of degree-0 nodes
/// set to zero, so each isolated node contributes eigenvalue 0.
pub fn laplacian_eigenvalues(g: &Graph) -> Vec<f64> {
    let n = g.n_nodes();
    if n == 0 {
        return Vec::new();
    }
    let degrees = g.degree_sequence();
    let inv_sqrt: Vec<f64> = degrees
        .iter()
        .map(|&d| if d > 0 { 1.0 / (d as f64).sqrt() } else { 0.0 })
        .collect();
    let mut matrix = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        if degrees[v] > 0 {
            matrix[(v, v)] = 1.0;
        }
        for &w in g.neighbors(v) {
            let w = w as usize;
            matrix[(v, w)] = -inv_sqrt[v] * inv_sqrt[w];
        }
    }
    let mut eigenvalues: Vec<f64> = matrix.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_unstable_by(|a, b| a.total_cmp(b));
    eigenvalues
}

/// Normalized histogram of normalized-Laplacian eigenvalues.
pub fn spectral_sample(g: &Graph, domain: BinDomain) -> Result<MetricSample> {
    MetricSample::histogram_from_values(laplacian_eigenvalues(g), domain, "spectral")
}

/// Counts of ordered reachable pairs by shortest-path length; index is the
/// length, entry 0 is always zero. BFS from every node; unreachable pairs
/// contribute nothing.
pub fn path_length_counts(g: &Graph) -> Vec<u64> {
    let n = g.n_nodes();
    let mut counts: Vec<u64> = Vec::new();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for source in 0..n {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let next = dist[v] + 1;
            for &w in g.neighbors(v) {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = next;
                    if counts.len() <= next as usize {
                        counts.resize(next as usize + 1, 0);
                    }
                    counts[next as usize] += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    counts
}

/// Normalized histogram of all-pairs shortest-path lengths.
///
/// Requires at least two nodes; errors when no pair is reachable.
pub fn paths_sample(g: &Graph, domain: BinDomain) -> Result<MetricSample> {
    if g.n_nodes() < 2 {
        return Err(Error::TooSmallGraph {
            n_nodes: g.n_nodes(),
            required: 2,
        });
    }
    MetricSample::histogram_from_counts(&path_length_counts(g), domain, "paths")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(edges.iter().copied(), None).unwrap()
    }

    fn weights(sample: &MetricSample) -> &[f64] {
        match sample {
            MetricSample::Histogram { weights, .. } => weights,
            MetricSample::Scalar(_) => panic!("expected histogram"),
        }
    }

    #[test]
    fn degree_histograms() {
        let k3 = graph(&[(0, 1), (1, 2), (2, 0)]);
        let s = degree_sample(&k3, BinDomain::integers(0, 2)).unwrap();
        assert_eq!(weights(&s), &[0.0, 0.0, 1.0]);

        let star = graph(&[(0, 1), (0, 2), (0, 3)]);
        let s = degree_sample(&star, BinDomain::integers(0, 3)).unwrap();
        assert_eq!(weights(&s), &[0.0, 0.75, 0.0, 0.25]);

        let p4 = graph(&[(0, 1), (1, 2), (2, 3)]);
        let s = degree_sample(&p4, BinDomain::integers(0, 2)).unwrap();
        assert_eq!(weights(&s), &[0.0, 0.5, 0.5]);
    }

    #[test]
    fn clustering_coefficient_values() {
        let k3 = graph(&[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(clustering_coefficients(&k3), vec![1.0, 1.0, 1.0]);

        let star = graph(&[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(clustering_coefficients(&star), vec![0.0; 4]);

        // K4 minus the (2,3) edge: nodes 0 and 1 have degree 3 and sit on
        // both remaining triangles, so c = 2*2/(3*2) = 2/3.
        let k4_minus = graph(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        let c = clustering_coefficients(&k4_minus);
        assert!((c[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((c[1] - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(c[2], 1.0);
        assert_eq!(c[3], 1.0);
    }

    #[test]
    fn spectra_of_small_graphs() {
        let close = |got: &[f64], want: &[f64]| {
            assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() < 1e-6, "{got:?} vs {want:?}");
            }
        };
        close(&laplacian_eigenvalues(&graph(&[(0, 1)])), &[0.0, 2.0]);
        close(
            &laplacian_eigenvalues(&graph(&[(0, 1), (1, 2), (2, 0)])),
            &[0.0, 1.5, 1.5],
        );
        close(
            &laplacian_eigenvalues(&graph(&[(0, 1), (1, 2)])),
            &[0.0, 1.0, 2.0],
        );
    }

    #[test]
    fn isolated_nodes_contribute_zero_eigenvalues() {
        let g = Graph::from_edges([(0, 1)], Some(4)).unwrap();
        let eig = laplacian_eigenvalues(&g);
        assert!((eig[0]).abs() < 1e-9);
        assert!((eig[1]).abs() < 1e-9);
        assert!((eig[2]).abs() < 1e-9);
        assert!((eig[3] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn path_histograms() {
        let k3 = graph(&[(0, 1), (1, 2), (2, 0)]);
        let s = paths_sample(&k3, BinDomain::integers(1, 1)).unwrap();
        assert_eq!(weights(&s), &[1.0]);

        let p3 = graph(&[(0, 1), (1, 2)]);
        let s = paths_sample(&p3, BinDomain::integers(1, 2)).unwrap();
        let w = weights(&s);
        assert!((w[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((w[1] - 1.0 / 3.0).abs() < 1e-12);

        // cross-component pairs are excluded
        let two_k2 = graph(&[(0, 1), (2, 3)]);
        let s = paths_sample(&two_k2, BinDomain::integers(1, 2)).unwrap();
        assert_eq!(weights(&s), &[1.0, 0.0]);
    }

    #[test]
    fn paths_need_two_nodes_and_a_reachable_pair() {
        let single = Graph::from_edges(std::iter::empty(), Some(1)).unwrap();
        assert!(matches!(
            paths_sample(&single, BinDomain::integers(1, 1)),
            Err(Error::TooSmallGraph { .. })
        ));
        let edgeless = Graph::from_edges(std::iter::empty(), Some(3)).unwrap();
        assert!(matches!(
            paths_sample(&edgeless, BinDomain::integers(1, 1)),
            Err(Error::EmptyMetric { .. })
        ));
    }

    #[test]
    fn out_of_domain_values_clamp_into_boundary_bins() {
        let domain = BinDomain::unit(10);
        let s = MetricSample::histogram_from_values([-0.5, 0.5, 2.0], domain, "test").unwrap();
        let w = weights(&s);
        assert!((w[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((w[5] - 1.0 / 3.0).abs() < 1e-12);
        assert!((w[9] - 1.0 / 3.0).abs() < 1e-12);
    }

    prop_compose! {
        fn arb_graph()(n in 1..20usize)(
            n in Just(n),
            edges in proptest::collection::vec((0..n, 0..n), 0..64),
        ) -> Graph {
            Graph::from_edges(edges, Some(n)).unwrap()
        }
    }

    proptest! {
        #[test]
        fn histogram_mass_is_one(g in arb_graph()) {
            let s = degree_sample(&g, BinDomain::integers(0, g.n_nodes())).unwrap();
            let total: f64 = weights(&s).iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            let s = clustering_sample(&g, default_clustering_domain()).unwrap();
            let total: f64 = weights(&s).iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
        }

        #[test]
        fn eigenvalues_lie_in_zero_two(g in arb_graph()) {
            let eig = laplacian_eigenvalues(&g);
            for v in &eig {
                prop_assert!(*v > -1e-6 && *v < 2.0 + 1e-6);
            }
            let non_isolated = g.degree_sequence().iter().filter(|&&d| d > 0).count();
            let sum: f64 = eig.iter().sum();
            prop_assert!((sum - non_isolated as f64).abs() < 1e-6);
        }

        #[test]
        fn clustering_in_unit_interval(g in arb_graph()) {
            for c in clustering_coefficients(&g) {
                prop_assert!((0.0..=1.0).contains(&c));
            }
        }
    }
}
