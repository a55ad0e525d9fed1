//! Immutable undirected simple graphs with contiguous node indices.
//!
//! The representation is a CSR-style adjacency: per-node sorted neighbor
//! slices over a flat array. Graphs are canonical (no self-loops, no
//! duplicate edges, each unordered pair stored once per direction), so
//! structural equality is plain `==`.

use crate::error::{Error, Result};

/// An immutable undirected simple graph on nodes `0..n_nodes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n_nodes: usize,
    /// CSR offsets, length `n_nodes + 1`.
    offsets: Vec<usize>,
    /// Sorted neighbor lists; every edge appears in both directions.
    neighbors: Vec<u32>,
}

/// Connected-component labels plus per-component sizes.
///
/// Labels are assigned in ascending order of each component's smallest node
/// id, so the labeling is deterministic for a given graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub labels: Vec<usize>,
    pub component_sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn n_components(&self) -> usize {
        self.component_sizes.len()
    }
}

impl Graph {
    /// Build a graph from raw edge pairs.
    ///
    /// Self-loops are dropped and duplicate or reversed pairs collapse to a
    /// single undirected edge. Without `declared_node_count` the node count
    /// is `max id + 1`; declaring a larger count permits isolated nodes.
    pub fn from_edges<I>(pairs: I, declared_node_count: Option<usize>) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut max_id: Option<usize> = None;
        for (u, v) in pairs {
            if let Some(declared) = declared_node_count {
                if u >= declared || v >= declared {
                    return Err(Error::MalformedInput(format!(
                        "edge ({u}, {v}) references a node outside the declared count {declared}"
                    )));
                }
            }
            max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
            if u == v {
                continue;
            }
            if u.max(v) >= u32::MAX as usize {
                return Err(Error::MalformedInput(format!(
                    "node id {} exceeds the supported maximum",
                    u.max(v)
                )));
            }
            let (lo, hi) = if u < v { (u, v) } else { (v, u) };
            edges.push((lo as u32, hi as u32));
        }

        let n_nodes = declared_node_count.unwrap_or(match max_id {
            Some(m) => m + 1,
            None => 0,
        });
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_canonical_edges(n_nodes, &edges))
    }

    /// `edges` must be deduplicated pairs with `lo < hi < n_nodes`.
    fn from_canonical_edges(n_nodes: usize, edges: &[(u32, u32)]) -> Graph {
        let mut degrees = vec![0usize; n_nodes];
        for &(u, v) in edges {
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n_nodes + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for &d in &degrees {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; acc];
        for &(u, v) in edges {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for v in 0..n_nodes {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            n_nodes,
            offsets,
            neighbors,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n_nodes && v < self.n_nodes && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_nodes).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// `2|E| / (n(n-1))`. Undefined below two nodes.
    pub fn density(&self) -> Result<f64> {
        if self.n_nodes < 2 {
            return Err(Error::UndefinedDensity {
                n_nodes: self.n_nodes,
            });
        }
        let n = self.n_nodes as f64;
        Ok(2.0 * self.n_edges() as f64 / (n * (n - 1.0)))
    }

    /// Label connected components via BFS in ascending node-id order.
    pub fn connected_components(&self) -> ComponentLabeling {
        let mut labels = vec![usize::MAX; self.n_nodes];
        let mut component_sizes = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        for start in 0..self.n_nodes {
            if labels[start] != usize::MAX {
                continue;
            }
            let component = component_sizes.len();
            let mut size = 0usize;
            labels[start] = component;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &w in self.neighbors(v) {
                    let w = w as usize;
                    if labels[w] == usize::MAX {
                        labels[w] = component;
                        queue.push_back(w);
                    }
                }
            }
            component_sizes.push(size);
        }
        ComponentLabeling {
            labels,
            component_sizes,
        }
    }

    /// Node ids of the largest component; ties break toward the component
    /// containing the smallest node id (the lowest label).
    pub fn largest_component_nodes(&self) -> Vec<usize> {
        let labeling = self.connected_components();
        let best = labeling
            .component_sizes
            .iter()
            .enumerate()
            .max_by(|(la, sa), (lb, sb)| sa.cmp(sb).then(lb.cmp(la)))
            .map(|(label, _)| label);
        match best {
            Some(label) => (0..self.n_nodes)
                .filter(|&v| labeling.labels[v] == label)
                .collect(),
            None => Vec::new(),
        }
    }

    /// Induced subgraph on the largest connected component, re-indexed.
    pub fn largest_component(&self) -> Graph {
        let nodes = self.largest_component_nodes();
        self.induced_subgraph(&nodes)
            .expect("component nodes are in range")
    }

    /// Induced subgraph on `nodes`, re-indexed by ascending original id.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Graph> {
        let mut kept: Vec<usize> = nodes.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if let Some(&out) = kept.iter().find(|&&v| v >= self.n_nodes) {
            return Err(Error::MalformedInput(format!(
                "node id {out} is out of range for a graph with {} nodes",
                self.n_nodes
            )));
        }
        let mut new_id = vec![u32::MAX; self.n_nodes];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = i as u32;
        }
        let mut edges = Vec::new();
        for &v in &kept {
            for &w in self.neighbors(v) {
                let w = w as usize;
                if w > v && new_id[w] != u32::MAX {
                    edges.push((new_id[v], new_id[w]));
                }
            }
        }
        edges.sort_unstable();
        Ok(Graph::from_canonical_edges(kept.len(), &edges))
    }

    /// Degrees of all nodes in index order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.n_nodes).map(|v| self.degree(v)).collect()
    }
}
