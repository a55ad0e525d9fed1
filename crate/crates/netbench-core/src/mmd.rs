//! Maximum Mean Discrepancy between sets of metric samples, and the
//! eight-metric evaluation suite comparing a candidate dataset against a
//! reference.
//!
//! Scores are the biased V-statistic estimator of squared MMD, which is
//! non-negative and exactly zero for identical sample sets. Histogram
//! metrics share one bin domain across both datasets so kernel distances
//! are well-defined; stochastic metrics draw their stream from the master
//! seed and the graph's dataset index, so a dataset compared against itself
//! scores zero on every column.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::dynamics::{self, SirConfig};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::Graph;
use crate::metrics::{self, BinDomain, MetricSample};
use crate::rng::{self, tag};

/// Kernel families used by the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Gaussian,
    GaussianTv,
}

/// Kernel bandwidth: explicit, or the median pairwise distance over the
/// pooled sample sets (falling back to 1.0 when that median is zero).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bandwidth {
    Fixed(f64),
    MedianHeuristic,
}

impl Serialize for Bandwidth {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bandwidth::Fixed(value) => serializer.serialize_f64(*value),
            Bandwidth::MedianHeuristic => serializer.serialize_str("median-heuristic"),
        }
    }
}

impl<'de> Deserialize<'de> for Bandwidth {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Value(f64),
            Name(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Value(v) => Ok(Bandwidth::Fixed(v)),
            Repr::Name(name) if name == "median-heuristic" => Ok(Bandwidth::MedianHeuristic),
            Repr::Name(name) => Err(serde::de::Error::custom(format!(
                "unknown bandwidth '{name}' (expected a number or \"median-heuristic\")"
            ))),
        }
    }
}

/// A kernel choice plus bandwidth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub kind: KernelKind,
    pub bandwidth: Bandwidth,
}

impl KernelConfig {
    pub fn gaussian(bandwidth: Bandwidth) -> KernelConfig {
        KernelConfig {
            kind: KernelKind::Gaussian,
            bandwidth,
        }
    }

    pub fn gaussian_tv(bandwidth: Bandwidth) -> KernelConfig {
        KernelConfig {
            kind: KernelKind::GaussianTv,
            bandwidth,
        }
    }
}

fn sample_distance(x: &MetricSample, y: &MetricSample, kind: KernelKind) -> Result<f64> {
    match (x, y) {
        (MetricSample::Scalar(a), MetricSample::Scalar(b)) => Ok((a - b).abs()),
        (
            MetricSample::Histogram {
                weights: wx,
                domain: dx,
            },
            MetricSample::Histogram {
                weights: wy,
                domain: dy,
            },
        ) => {
            if dx != dy {
                return Err(Error::IncompatibleSamples(format!(
                    "histogram domains differ: {dx:?} vs {dy:?}"
                )));
            }
            Ok(match kind {
                KernelKind::Gaussian => wx
                    .iter()
                    .zip(wy)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt(),
                KernelKind::GaussianTv => {
                    0.5 * wx.iter().zip(wy).map(|(a, b)| (a - b).abs()).sum::<f64>()
                }
            })
        }
        _ => Err(Error::IncompatibleSamples(
            "cannot mix scalar and histogram samples".into(),
        )),
    }
}

/// `exp(-dist^2 / (2 sigma^2))` with the kernel's distance. Requires an
/// explicit bandwidth; [`mmd_squared`] resolves the median heuristic first.
pub fn kernel_value(x: &MetricSample, y: &MetricSample, config: &KernelConfig) -> Result<f64> {
    let Bandwidth::Fixed(sigma) = config.bandwidth else {
        return Err(Error::InvalidParameter(
            "kernel evaluation needs a resolved bandwidth".into(),
        ));
    };
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "bandwidth {sigma} must be > 0"
        )));
    }
    let dist = sample_distance(x, y, config.kind)?;
    Ok((-dist * dist / (2.0 * sigma * sigma)).exp())
}

fn resolve_bandwidth(a: &[MetricSample], b: &[MetricSample], config: &KernelConfig) -> Result<f64> {
    match config.bandwidth {
        Bandwidth::Fixed(sigma) => {
            if sigma.is_nan() || sigma <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "bandwidth {sigma} must be > 0"
                )));
            }
            Ok(sigma)
        }
        Bandwidth::MedianHeuristic => {
            let pooled: Vec<&MetricSample> = a.iter().chain(b.iter()).collect();
            let mut distances = Vec::new();
            for i in 0..pooled.len() {
                for j in i + 1..pooled.len() {
                    distances.push(sample_distance(pooled[i], pooled[j], config.kind)?);
                }
            }
            distances.sort_unstable_by(|x, y| x.total_cmp(y));
            let median = if distances.is_empty() {
                0.0
            } else if distances.len() % 2 == 1 {
                distances[distances.len() / 2]
            } else {
                0.5 * (distances[distances.len() / 2 - 1] + distances[distances.len() / 2])
            };
            Ok(if median > 0.0 { median } else { 1.0 })
        }
    }
}

/// Squared MMD between two sample sets under the biased V-statistic:
/// `mean k(A,A) + mean k(B,B) - 2 mean k(A,B)`, clamped at zero.
pub fn mmd_squared(a: &[MetricSample], b: &[MetricSample], config: &KernelConfig) -> Result<f64> {
    mmd_squared_resolved(a, b, config).map(|(score, _)| score)
}

/// As [`mmd_squared`], also returning the bandwidth actually used.
pub fn mmd_squared_resolved(
    a: &[MetricSample],
    b: &[MetricSample],
    config: &KernelConfig,
) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sigma = resolve_bandwidth(a, b, config)?;
    let resolved = KernelConfig {
        kind: config.kind,
        bandwidth: Bandwidth::Fixed(sigma),
    };
    let mean_aa = mean_kernel(a, a, &resolved)?;
    let mean_bb = mean_kernel(b, b, &resolved)?;
    let mean_ab = mean_kernel(a, b, &resolved)?;
    Ok(((mean_aa + mean_bb - 2.0 * mean_ab).max(0.0), sigma))
}

/// Mean kernel value over the full cross product, including matched indices.
/// Rows compute in parallel but reduce in index order, so the result does
/// not depend on thread count.
fn mean_kernel(a: &[MetricSample], b: &[MetricSample], config: &KernelConfig) -> Result<f64> {
    let rows = exec::map_slice(a, |_, x| -> Result<f64> {
        let mut row = 0.0;
        for y in b {
            row += kernel_value(x, y, config)?;
        }
        Ok(row)
    });
    let mut total = 0.0;
    for row in rows {
        total += row?;
    }
    Ok(total / (a.len() as f64 * b.len() as f64))
}

/// Per-metric kernel assignments. Defaults follow the suite convention:
/// Gaussian everywhere except a Gaussian-TV kernel for the spectral metric,
/// with the median heuristic for the scalar node-count kernel and a fixed
/// bandwidth of 1 for histogram kernels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricKernels {
    pub nodes: KernelConfig,
    pub degree: KernelConfig,
    pub clustering: KernelConfig,
    pub spectral: KernelConfig,
    pub steps: KernelConfig,
    pub saturation: KernelConfig,
    pub paths: KernelConfig,
    pub louvain: KernelConfig,
}

impl Default for MetricKernels {
    fn default() -> Self {
        let unit = KernelConfig::gaussian(Bandwidth::Fixed(1.0));
        MetricKernels {
            nodes: KernelConfig::gaussian(Bandwidth::MedianHeuristic),
            degree: unit,
            clustering: unit,
            spectral: KernelConfig::gaussian_tv(Bandwidth::Fixed(1.0)),
            steps: unit,
            saturation: unit,
            paths: unit,
            louvain: unit,
        }
    }
}

/// Full evaluation-suite configuration; serializable as the config file the
/// CLI accepts, with every field optional.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub master_seed: u64,
    pub kernels: MetricKernels,
    pub clustering_bins: usize,
    pub spectral_bins: usize,
    pub saturation_bins: usize,
    pub sir: SirConfig,
    pub louvain_resolution: f64,
    pub louvain_runs: usize,
    /// Measure candidate graphs on their largest connected component.
    pub extract_largest_component: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            master_seed: 0,
            kernels: MetricKernels::default(),
            clustering_bins: 100,
            spectral_bins: 200,
            saturation_bins: 20,
            sir: SirConfig::default(),
            louvain_resolution: 1.0,
            louvain_runs: 5,
            extract_largest_component: true,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        self.sir.validate()?;
        if self.clustering_bins == 0 || self.spectral_bins == 0 || self.saturation_bins == 0 {
            return Err(Error::InvalidParameter("bin counts must be >= 1".into()));
        }
        if self.louvain_runs < 1 {
            return Err(Error::InvalidParameter("louvain_runs must be >= 1".into()));
        }
        if self.louvain_resolution.is_nan() || self.louvain_resolution <= 0.0 {
            return Err(Error::InvalidParameter(
                "louvain_resolution must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// The eight suite scores (squared MMD, one per measurement).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MmdScores {
    pub mmd_nodes: f64,
    pub mmd_degree: f64,
    pub mmd_clustering: f64,
    pub mmd_spectral: f64,
    pub mmd_steps: f64,
    pub mmd_saturation: f64,
    pub mmd_paths: f64,
    pub mmd_louvain: f64,
}

impl MmdScores {
    pub fn as_array(&self) -> [(&'static str, f64); 8] {
        [
            ("mmd_nodes", self.mmd_nodes),
            ("mmd_degree", self.mmd_degree),
            ("mmd_clustering", self.mmd_clustering),
            ("mmd_spectral", self.mmd_spectral),
            ("mmd_steps", self.mmd_steps),
            ("mmd_saturation", self.mmd_saturation),
            ("mmd_paths", self.mmd_paths),
            ("mmd_louvain", self.mmd_louvain),
        ]
    }
}

/// Bandwidths after heuristic resolution, echoed for replay.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedBandwidths {
    pub nodes: f64,
    pub degree: f64,
    pub clustering: f64,
    pub spectral: f64,
    pub steps: f64,
    pub saturation: f64,
    pub paths: f64,
    pub louvain: f64,
}

/// Shared bin domains used for the histogram metrics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedDomains {
    pub degree: BinDomain,
    pub clustering: BinDomain,
    pub spectral: BinDomain,
    pub steps: BinDomain,
    pub saturation: BinDomain,
    pub paths: BinDomain,
    pub louvain: BinDomain,
}

/// A graph skipped for one metric, with the reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricExclusion {
    pub dataset: String,
    pub graph_id: String,
    pub metric: String,
    pub reason: String,
}

/// Suite output: the eight scores plus enough configuration echo to replay
/// the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MmdReport {
    pub dataset: String,
    pub model: String,
    pub scores: MmdScores,
    pub config: SuiteConfig,
    pub resolved_bandwidths: ResolvedBandwidths,
    pub resolved_domains: ResolvedDomains,
    pub reference_size: usize,
    pub candidate_size: usize,
    pub reference_failures: usize,
    pub candidate_failures: usize,
    pub exclusions: Vec<MetricExclusion>,
}

/// CSV column order, mirroring the score table layout.
pub const CSV_HEADER: &str =
    "dataset,model,mmd_nodes,mmd_degree,mmd_clustering,mmd_spectral,mmd_steps,mmd_saturation,mmd_paths,mmd_louvain";

impl MmdReport {
    /// Render the one-row CSV form (header + data row).
    pub fn to_csv(&self) -> String {
        let mut row = format!("{},{}", self.dataset, self.model);
        for (_, value) in self.scores.as_array() {
            row.push_str(&format!(",{value}"));
        }
        format!("{CSV_HEADER}\n{row}\n")
    }
}

/// Everything extracted from one measured graph; `None` marks a metric the
/// graph was excluded from.
struct RawMetrics {
    n_nodes: usize,
    degrees: Vec<usize>,
    clustering: Vec<f64>,
    eigenvalues: Vec<f64>,
    path_counts: Option<Vec<u64>>,
    sir_steps: Option<Vec<u32>>,
    sir_saturations: Option<Vec<f64>>,
    louvain_counts: Option<Vec<usize>>,
}

fn extract_raw(g: &Graph, cfg: &SuiteConfig, index: usize) -> Result<RawMetrics> {
    let path_counts = {
        let counts = metrics::path_length_counts(g);
        let reachable: u64 = counts.iter().sum();
        (g.n_nodes() >= 2 && reachable > 0).then_some(counts)
    };
    let sir = if g.n_nodes() >= cfg.sir.n_seeds {
        let mut rng = rng::stream(cfg.master_seed, &[tag::SUITE_SIR, index as u64]);
        Some(dynamics::sir_runs(g, &cfg.sir, &mut rng)?)
    } else {
        None
    };
    let louvain_counts = if g.n_edges() > 0 {
        let mut rng = rng::stream(cfg.master_seed, &[tag::SUITE_LOUVAIN, index as u64]);
        Some(dynamics::louvain_counts(
            g,
            cfg.louvain_resolution,
            cfg.louvain_runs,
            &mut rng,
        )?)
    } else {
        None
    };
    Ok(RawMetrics {
        n_nodes: g.n_nodes(),
        degrees: metrics::node_degrees(g),
        clustering: metrics::clustering_coefficients(g),
        eigenvalues: metrics::laplacian_eigenvalues(g),
        path_counts,
        sir_steps: sir
            .as_ref()
            .map(|runs| runs.iter().map(|r| r.steps).collect()),
        sir_saturations: sir.map(|runs| runs.iter().map(|r| r.saturation).collect()),
        louvain_counts,
    })
}

/// Run the eight-metric comparison.
///
/// Candidate graphs are reduced to their largest connected component first
/// when `extract_largest_component` is set; reference graphs are measured
/// as-is. Histogram metrics bin over domains shared by both datasets.
/// Graphs that cannot support a metric (an edgeless graph for Louvain, a
/// single-node component for paths) are excluded from that metric only and
/// listed in the report.
pub fn evaluate_suite(
    reference: &Dataset,
    candidate: &Dataset,
    cfg: &SuiteConfig,
) -> Result<MmdReport> {
    cfg.validate()?;
    if reference.is_empty() || candidate.is_empty() {
        return Err(Error::EmptyInput);
    }

    let measure = |ds: &Dataset, reduce: bool| -> Result<Vec<(String, RawMetrics)>> {
        let measured: Vec<(String, Graph)> = exec::map_slice(ds.graphs(), |_, entry| {
            let graph = if reduce {
                entry.graph.largest_component()
            } else {
                entry.graph.clone()
            };
            (entry.id.clone(), graph)
        });
        exec::map_slice(&measured, |index, (id, graph)| {
            extract_raw(graph, cfg, index).map(|raw| (id.clone(), raw))
        })
        .into_iter()
        .collect()
    };
    let reference_raw = measure(reference, false)?;
    let candidate_raw = measure(candidate, cfg.extract_largest_component)?;

    let all = || reference_raw.iter().chain(candidate_raw.iter());
    let max_degree = all()
        .flat_map(|(_, raw)| raw.degrees.iter().copied())
        .max()
        .unwrap_or(0);
    let max_path = all()
        .filter_map(|(_, raw)| raw.path_counts.as_ref().map(|c| c.len().saturating_sub(1)))
        .max()
        .unwrap_or(1);
    let max_louvain = all()
        .flat_map(|(_, raw)| {
            raw.louvain_counts
                .as_deref()
                .unwrap_or_default()
                .iter()
                .copied()
        })
        .max()
        .unwrap_or(1);

    let domains = ResolvedDomains {
        degree: BinDomain::integers(0, max_degree),
        clustering: BinDomain::unit(cfg.clustering_bins),
        spectral: BinDomain {
            lo: 0.0,
            hi: 2.0,
            bins: cfg.spectral_bins,
        },
        steps: BinDomain::integers(0, cfg.sir.max_iterations as usize),
        saturation: BinDomain::unit(cfg.saturation_bins),
        paths: BinDomain::integers(1, max_path.max(1)),
        louvain: BinDomain::integers(0, max_louvain),
    };

    let mut exclusions: Vec<MetricExclusion> = Vec::new();
    let mut samples =
        |raws: &[(String, RawMetrics)], role: &str| -> Result<[Vec<MetricSample>; 8]> {
            let mut out: [Vec<MetricSample>; 8] = Default::default();
            for (id, raw) in raws {
                out[0].push(MetricSample::Scalar(raw.n_nodes as f64));
                out[1].push(MetricSample::histogram_from_values(
                    raw.degrees.iter().map(|&d| d as f64),
                    domains.degree,
                    "degree",
                )?);
                out[2].push(MetricSample::histogram_from_values(
                    raw.clustering.iter().copied(),
                    domains.clustering,
                    "clustering",
                )?);
                out[3].push(MetricSample::histogram_from_values(
                    raw.eigenvalues.iter().copied(),
                    domains.spectral,
                    "spectral",
                )?);
                let mut exclude = |metric: &str, reason: &str| {
                    exclusions.push(MetricExclusion {
                        dataset: role.to_string(),
                        graph_id: id.clone(),
                        metric: metric.to_string(),
                        reason: reason.to_string(),
                    });
                };
                match &raw.sir_steps {
                    Some(steps) => out[4].push(MetricSample::histogram_from_values(
                        steps.iter().map(|&s| s as f64),
                        domains.steps,
                        "sir_steps",
                    )?),
                    None => exclude("mmd_steps", "graph is smaller than the SIR seed count"),
                }
                match &raw.sir_saturations {
                    Some(sats) => out[5].push(MetricSample::histogram_from_values(
                        sats.iter().copied(),
                        domains.saturation,
                        "sir_saturation",
                    )?),
                    None => exclude("mmd_saturation", "graph is smaller than the SIR seed count"),
                }
                match &raw.path_counts {
                    Some(counts) => out[6].push(MetricSample::histogram_from_counts(
                        counts,
                        domains.paths,
                        "paths",
                    )?),
                    None => exclude("mmd_paths", "no reachable node pair"),
                }
                match &raw.louvain_counts {
                    Some(counts) => out[7].push(MetricSample::histogram_from_values(
                        counts.iter().map(|&c| c as f64),
                        domains.louvain,
                        "louvain",
                    )?),
                    None => exclude("mmd_louvain", "graph has no edges"),
                }
            }
            Ok(out)
        };
    let reference_samples = samples(&reference_raw, "reference")?;
    let candidate_samples = samples(&candidate_raw, "candidate")?;

    let kernel_order = [
        cfg.kernels.nodes,
        cfg.kernels.degree,
        cfg.kernels.clustering,
        cfg.kernels.spectral,
        cfg.kernels.steps,
        cfg.kernels.saturation,
        cfg.kernels.paths,
        cfg.kernels.louvain,
    ];
    let mut scores = [0.0f64; 8];
    let mut sigmas = [0.0f64; 8];
    for (i, kernel) in kernel_order.iter().enumerate() {
        let (score, sigma) =
            mmd_squared_resolved(&reference_samples[i], &candidate_samples[i], kernel)?;
        scores[i] = score;
        sigmas[i] = sigma;
    }

    Ok(MmdReport {
        dataset: reference.name().to_string(),
        model: candidate.name().to_string(),
        scores: MmdScores {
            mmd_nodes: scores[0],
            mmd_degree: scores[1],
            mmd_clustering: scores[2],
            mmd_spectral: scores[3],
            mmd_steps: scores[4],
            mmd_saturation: scores[5],
            mmd_paths: scores[6],
            mmd_louvain: scores[7],
        },
        config: *cfg,
        resolved_bandwidths: ResolvedBandwidths {
            nodes: sigmas[0],
            degree: sigmas[1],
            clustering: sigmas[2],
            spectral: sigmas[3],
            steps: sigmas[4],
            saturation: sigmas[5],
            paths: sigmas[6],
            louvain: sigmas[7],
        },
        resolved_domains: domains,
        reference_size: reference.len(),
        candidate_size: candidate.len(),
        reference_failures: reference.failures().len(),
        candidate_failures: candidate.failures().len(),
        exclusions,
    })
}
