//! Shared test support: seeded graph generators and independent brute-force
//! oracles. The oracles deliberately avoid the library's implementation
//! paths (dense adjacency matrices, Floyd-Warshall, Jacobi rotations, the
//! pair-sum modularity definition) so they can vouch for them.

// not every test target uses every oracle; index loops read naturally in
// the matrix kernels
#![allow(dead_code, clippy::needless_range_loop)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netbench_core::graph::Graph;

pub fn test_stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seeded Erdos-Renyi-style graph on `n` nodes with edge probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(edges, Some(n)).unwrap()
}

/// Dense adjacency matrix, built straight from the edge iterator.
pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n_nodes();
    let mut a = vec![vec![0.0; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    a
}

/// O(n^3) triangle-counting clustering oracle.
pub fn clustering_brute(g: &Graph) -> Vec<f64> {
    let n = g.n_nodes();
    let a = adjacency_matrix(g);
    (0..n)
        .map(|v| {
            let degree: f64 = a[v].iter().sum();
            if degree < 2.0 {
                return 0.0;
            }
            let mut triangles = 0.0;
            for u in 0..n {
                for w in u + 1..n {
                    if a[v][u] > 0.0 && a[v][w] > 0.0 && a[u][w] > 0.0 {
                        triangles += 1.0;
                    }
                }
            }
            2.0 * triangles / (degree * (degree - 1.0))
        })
        .collect()
}

/// Floyd-Warshall all-pairs shortest paths; `None` marks unreachable pairs.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u64>>> {
    let n = g.n_nodes();
    let mut dist: Vec<Vec<Option<u64>>> = vec![vec![None; n]; n];
    for v in 0..n {
        dist[v][v] = Some(0);
    }
    for (u, v) in g.edges() {
        dist[u][v] = Some(1);
        dist[v][u] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i][k] else { continue };
            for j in 0..n {
                let Some(kj) = dist[k][j] else { continue };
                let through = ik + kj;
                if dist[i][j].is_none_or(|d| through < d) {
                    dist[i][j] = Some(through);
                }
            }
        }
    }
    dist
}

/// Ordered-pair path-length counts from the Floyd-Warshall oracle.
pub fn path_counts_brute(g: &Graph) -> Vec<u64> {
    let dist = floyd_warshall(g);
    let mut counts = Vec::new();
    for (i, row) in dist.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(d) = entry {
                let d = *d as usize;
                if counts.len() <= d {
                    counts.resize(d + 1, 0);
                }
                counts[d] += 1;
            }
        }
    }
    counts
}

/// Symmetric normalized Laplacian as a dense matrix.
pub fn normalized_laplacian(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n_nodes();
    let a = adjacency_matrix(g);
    let degrees: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let mut lap = vec![vec![0.0; n]; n];
    for i in 0..n {
        if degrees[i] > 0.0 {
            lap[i][i] = 1.0;
        }
        for j in 0..n {
            if a[i][j] > 0.0 {
                lap[i][j] = -1.0 / (degrees[i] * degrees[j]).sqrt();
            }
        }
    }
    lap
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(matrix: &[Vec<f64>]) -> Vec<f64> {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    for _sweep in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-15 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigenvalues.sort_unstable_by(|x, y| x.total_cmp(y));
    eigenvalues
}

/// Modularity from the node-pair definition
/// `Q = (1/2m) sum_ij [A_ij - r k_i k_j / (2m)] delta(c_i, c_j)`.
pub fn modularity_brute(g: &Graph, labels: &[usize], resolution: f64) -> f64 {
    let a = adjacency_matrix(g);
    let n = g.n_nodes();
    let degrees: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = degrees.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - resolution * degrees[i] * degrees[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Visit every set partition of `0..n` (restricted-growth strings).
pub fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    fn recurse(
        labels: &mut Vec<usize>,
        next_free: usize,
        n: usize,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if labels.len() == n {
            visit(labels);
            return;
        }
        for label in 0..=next_free {
            labels.push(label);
            recurse(labels, next_free.max(label + 1), n, visit);
            labels.pop();
        }
    }
    let mut labels = Vec::with_capacity(n);
    recurse(&mut labels, 0, n, &mut visit);
}

/// Exhaustive modularity maximization; returns (community count, Q) of the
/// best partition.
pub fn best_partition_brute(g: &Graph, resolution: f64) -> (usize, f64) {
    let mut best_q = f64::NEG_INFINITY;
    let mut best_count = 0;
    for_each_partition(g.n_nodes(), |labels| {
        let q = modularity_brute(g, labels, resolution);
        if q > best_q + 1e-12 {
            best_q = q;
            best_count = labels.iter().copied().max().unwrap_or(0) + 1;
        }
    });
    (best_count, best_q)
}
