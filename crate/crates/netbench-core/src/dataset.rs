//! Datasets of graphs: edgelist and manifest file formats, ingestion, and
//! Table-style summaries.
//!
//! On disk a dataset is a directory holding one `<id>.edges` file per graph
//! plus `manifest.json` recording ids, sizes, provenance, failures, and the
//! master seed. Edgelists are UTF-8 text with one `u v` pair per line, `#`
//! comments, and LF endings. Node ids are always the contiguous re-indexed
//! ids, never a source network's.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics;
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::Graph;
use crate::rmat::RmatParams;
use crate::rng::{self, tag};

/// How a graph entered a dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Sampled,
    Rmat,
    Ingested,
}

/// One graph with its identity and provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphEntry {
    pub id: String,
    pub graph: Graph,
    pub provenance: Provenance,
    /// Fitted generator parameters, for `rmat` provenance.
    pub rmat_params: Option<RmatParams>,
    /// Sample-to-source node ratio, for `sampled` provenance.
    pub source_ratio: Option<f64>,
}

impl GraphEntry {
    pub fn ingested(id: String, graph: Graph) -> GraphEntry {
        GraphEntry {
            id,
            graph,
            provenance: Provenance::Ingested,
            rmat_params: None,
            source_ratio: None,
        }
    }
}

/// A graph that could not be produced, and why.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub id: String,
    pub reason: String,
}

/// An ordered collection of graphs with unique ids and failure records.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    name: String,
    master_seed: Option<u64>,
    entries: Vec<GraphEntry>,
    failures: Vec<FailureRecord>,
}

impl Dataset {
    pub fn new(name: String, master_seed: Option<u64>) -> Dataset {
        Dataset {
            name,
            master_seed,
            entries: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: String) {
        self.name = name;
    }

    pub fn master_seed(&self) -> Option<u64> {
        self.master_seed
    }

    pub fn graphs(&self) -> &[GraphEntry] {
        &self.entries
    }

    pub fn failures(&self) -> &[FailureRecord] {
        &self.failures
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_graph(&mut self, entry: GraphEntry) -> Result<()> {
        validate_id(&entry.id)?;
        if entry.graph.n_nodes() == 0 {
            return Err(Error::MalformedInput(format!(
                "graph '{}' has no nodes",
                entry.id
            )));
        }
        if self.id_taken(&entry.id) {
            return Err(Error::MalformedInput(format!(
                "duplicate graph id '{}'",
                entry.id
            )));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn add_failure(&mut self, failure: FailureRecord) -> Result<()> {
        validate_id(&failure.id)?;
        if self.id_taken(&failure.id) {
            return Err(Error::MalformedInput(format!(
                "duplicate failure id '{}'",
                failure.id
            )));
        }
        self.failures.push(failure);
        Ok(())
    }

    fn id_taken(&self, id: &str) -> bool {
        self.entries.iter().any(|e| e.id == id) || self.failures.iter().any(|f| f.id == id)
    }
}

/// Ids double as file stems, so keep them to a safe alphabet.
fn validate_id(id: &str) -> Result<()> {
    if id.is_empty()
        || !id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
    {
        return Err(Error::MalformedInput(format!(
            "id '{id}' is empty or contains characters outside [A-Za-z0-9_.-]"
        )));
    }
    Ok(())
}

/// Parse edgelist text: one `u v` pair per line, `#` comments, blank lines
/// ignored. Errors carry the offending line number; text without any edge is
/// rejected.
pub fn parse_edgelist(text: &str) -> Result<Graph> {
    parse_edgelist_declared(text, None)
}

fn parse_edgelist_declared(text: &str, declared_node_count: Option<usize>) -> Result<Graph> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(u), Some(v), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: index + 1,
                message: format!("expected two whitespace-separated node ids, got '{line}'"),
            });
        };
        let parse = |token: &str| {
            token.parse::<usize>().map_err(|_| Error::Parse {
                line: index + 1,
                message: format!("'{token}' is not a non-negative integer"),
            })
        };
        pairs.push((parse(u)?, parse(v)?));
    }
    if pairs.is_empty() && declared_node_count.is_none() {
        return Err(Error::EmptyGraph);
    }
    Graph::from_edges(pairs, declared_node_count)
}

/// Read a single edgelist file into a graph.
pub fn read_edgelist(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edgelist(&text)
}

/// Render a graph in the edgelist format (LF endings, ascending pairs).
pub fn edgelist_string(graph: &Graph) -> String {
    let mut out = String::new();
    for (u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    name: String,
    master_seed: Option<u64>,
    graphs: Vec<ManifestGraph>,
    #[serde(default)]
    failures: Vec<FailureRecord>,
}

#[derive(Serialize, Deserialize)]
struct ManifestGraph {
    id: String,
    n_nodes: usize,
    n_edges: usize,
    provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rmat_params: Option<RmatParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source_ratio: Option<f64>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Write one `<id>.edges` file per graph plus `manifest.json`; returns the
/// manifest path. Round-trips through [`read_dataset`] including id order.
pub fn write_dataset(dataset: &Dataset, destination: &Path) -> Result<PathBuf> {
    fs::create_dir_all(destination).map_err(|e| Error::io(destination, e))?;
    for entry in dataset.graphs() {
        let path = destination.join(format!("{}.edges", entry.id));
        fs::write(&path, edgelist_string(&entry.graph)).map_err(|e| Error::io(&path, e))?;
    }
    let manifest = Manifest {
        name: dataset.name().to_string(),
        master_seed: dataset.master_seed(),
        graphs: dataset
            .graphs()
            .iter()
            .map(|entry| ManifestGraph {
                id: entry.id.clone(),
                n_nodes: entry.graph.n_nodes(),
                n_edges: entry.graph.n_edges(),
                provenance: entry.provenance,
                rmat_params: entry.rmat_params,
                source_ratio: entry.source_ratio,
            })
            .collect(),
        failures: dataset.failures().to_vec(),
    };
    let path = destination.join(MANIFEST_FILE);
    let json =
        serde_json::to_string_pretty(&manifest).map_err(|e| Error::Manifest(e.to_string()))?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Load a dataset directory via its manifest.
///
/// A manifest entry without its `.edges` file, or whose file disagrees with
/// the recorded node/edge counts, is an integrity error. Files not listed in
/// the manifest are ignored with a warning.
pub fn read_dataset(source: &Path) -> Result<Dataset> {
    let manifest_path = source.join(MANIFEST_FILE);
    let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| Error::Manifest(e.to_string()))?;

    let listed: HashSet<String> = manifest
        .graphs
        .iter()
        .map(|g| format!("{}.edges", g.id))
        .collect();
    if let Ok(dir) = fs::read_dir(source) {
        for file in dir.flatten() {
            let name = file.file_name().to_string_lossy().to_string();
            if name.ends_with(".edges") && !listed.contains(&name) {
                log::warn!("ignoring orphan file {name} not listed in the manifest");
            }
        }
    }

    let loaded = exec::map_slice(&manifest.graphs, |_, record| -> Result<GraphEntry> {
        let path = source.join(format!("{}.edges", record.id));
        let text = fs::read_to_string(&path).map_err(|_| {
            Error::Integrity(format!(
                "manifest references '{}' but {} is missing or unreadable",
                record.id,
                path.display()
            ))
        })?;
        let graph = parse_edgelist_declared(&text, Some(record.n_nodes))?;
        if graph.n_edges() != record.n_edges {
            return Err(Error::Integrity(format!(
                "graph '{}' has {} edges on disk but the manifest records {}",
                record.id,
                graph.n_edges(),
                record.n_edges
            )));
        }
        Ok(GraphEntry {
            id: record.id.clone(),
            graph,
            provenance: record.provenance,
            rmat_params: record.rmat_params,
            source_ratio: record.source_ratio,
        })
    });

    let mut dataset = Dataset::new(manifest.name, manifest.master_seed);
    for entry in loaded {
        dataset.add_graph(entry?)?;
    }
    for failure in manifest.failures {
        dataset.add_failure(failure)?;
    }
    Ok(dataset)
}

/// Load a dataset directory, falling back to bare-edgelist ingestion.
///
/// Without a manifest, every `*.edges` file in the directory (sorted by
/// name) becomes an `ingested` graph keyed by its file stem — the ingest
/// path for externally generated networks.
pub fn read_dataset_or_ingest(source: &Path) -> Result<Dataset> {
    if source.join(MANIFEST_FILE).exists() {
        return read_dataset(source);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(source)
        .map_err(|e| Error::io(source, e))?
        .flatten()
        .map(|entry| entry.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "edges"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let name = source
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_else(|| "ingested".to_string());
    let mut dataset = Dataset::new(name, None);
    for path in files {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_default();
        dataset.add_graph(GraphEntry::ingested(id, read_edgelist(&path)?))?;
    }
    Ok(dataset)
}

/// Dataset extrema in the shape of the summary tables: node counts,
/// densities, and Louvain community counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub n_networks: usize,
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub min_density: f64,
    pub max_density: f64,
    pub min_communities: usize,
    pub max_communities: usize,
}

/// Summarize a dataset. Community extrema pool the counts of
/// `community_runs` seeded Louvain runs per graph at resolution 1.
pub fn summarize_dataset(ds: &Dataset, community_runs: usize, seed: u64) -> Result<DatasetSummary> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let per_graph = exec::map_slice(ds.graphs(), |index, entry| -> Result<_> {
        let density = entry.graph.density()?;
        let counts = dynamics::louvain_counts(
            &entry.graph,
            1.0,
            community_runs,
            &mut rng::stream(seed, &[tag::SUMMARY_LOUVAIN, index as u64]),
        )?;
        Ok((entry.graph.n_nodes(), density, counts))
    });

    let mut summary: Option<DatasetSummary> = None;
    for result in per_graph {
        let (nodes, density, counts) = result?;
        let s = summary.get_or_insert(DatasetSummary {
            n_networks: 0,
            min_nodes: usize::MAX,
            max_nodes: 0,
            min_density: f64::INFINITY,
            max_density: f64::NEG_INFINITY,
            min_communities: usize::MAX,
            max_communities: 0,
        });
        s.n_networks += 1;
        s.min_nodes = s.min_nodes.min(nodes);
        s.max_nodes = s.max_nodes.max(nodes);
        s.min_density = s.min_density.min(density);
        s.max_density = s.max_density.max(density);
        for count in counts {
            s.min_communities = s.min_communities.min(count);
            s.max_communities = s.max_communities.max(count);
        }
    }
    Ok(summary.expect("dataset is non-empty"))
}
