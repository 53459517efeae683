//! Whole-graph statistics.

use std::collections::VecDeque;

use serde::Serialize;

use super::ConstraintGraph;

/// Pairs of variables sharing at least two clauses.
pub fn repeated_pair_count(graph: &ConstraintGraph) -> usize {
    graph.pairs().filter(|&(_, count)| count >= 2).count()
}

/// Triangles through each vertex, indexed by `var - 1`.
fn triangles_per_vertex(graph: &ConstraintGraph) -> Vec<u64> {
    (1..=graph.n())
        .map(|v| {
            let nbrs = graph.neighbors(v);
            let mut count = 0u64;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if graph.is_edge(a, b) {
                        count += 1;
                    }
                }
            }
            count
        })
        .collect()
}

pub fn triangle_count(graph: &ConstraintGraph) -> u64 {
    triangles_per_vertex(graph).iter().sum::<u64>() / 3
}

/// Vertex triples with exactly two of their three pairs adjacent.
pub fn incomplete_triangle_count(graph: &ConstraintGraph) -> u64 {
    // Every path of length two is centred on one vertex; a triangle contains
    // three such paths.
    let wedges: u64 = (1..=graph.n())
        .map(|v| {
            let d = graph.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    wedges - 3 * triangle_count(graph)
}

/// Cluster coefficient of the constraint graph: the fraction of connected
/// triples (paths of length two) that are closed into triangles,
/// `3 * triangles / wedges`. Returns 0 for a graph without wedges.
pub fn cluster_coefficient(graph: &ConstraintGraph) -> f64 {
    let triangles = triangle_count(graph);
    let wedges = 3 * triangles + incomplete_triangle_count(graph);
    if wedges == 0 {
        0.0
    } else {
        (3 * triangles) as f64 / wedges as f64
    }
}

/// Watts–Strogatz average of the local clustering coefficients over all `n`
/// vertices; vertices of degree below two contribute 0.
pub fn average_local_clustering(graph: &ConstraintGraph) -> f64 {
    if graph.n() == 0 {
        return 0.0;
    }
    let sum: f64 = triangles_per_vertex(graph)
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let d = graph.degree(i as u32 + 1) as u64;
            if d < 2 {
                0.0
            } else {
                t as f64 / (d * (d - 1) / 2) as f64
            }
        })
        .sum();
    sum / f64::from(graph.n())
}

/// Mean shortest-path length over unordered pairs in the same connected
/// component. Returns 0 when no two vertices are connected.
pub fn average_distance(graph: &ConstraintGraph) -> f64 {
    let n = graph.n() as usize;
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut total = 0u64;
    let mut pairs = 0u64;
    for source in 1..=graph.n() {
        dist.fill(u32::MAX);
        dist[source as usize - 1] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize - 1];
            if u > source {
                total += u64::from(du);
                pairs += 1;
            }
            for &w in graph.neighbors(u) {
                let slot = &mut dist[w as usize - 1];
                if *slot == u32::MAX {
                    *slot = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    if pairs == 0 {
        0.0
    } else {
        total as f64 / pairs as f64
    }
}

/// All per-instance statistics reported for a constraint graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub vertices: u32,
    pub edges: usize,
    pub repeated_pairs: usize,
    pub triangles: u64,
    pub incomplete_triangles: u64,
    pub cluster_coefficient: f64,
    pub average_local_clustering: f64,
    pub average_distance: f64,
}

impl GraphStats {
    pub fn compute(graph: &ConstraintGraph) -> GraphStats {
        let triangles = triangle_count(graph);
        GraphStats {
            vertices: graph.n(),
            edges: graph.edge_count(),
            repeated_pairs: repeated_pair_count(graph),
            triangles,
            incomplete_triangles: incomplete_triangle_count(graph),
            cluster_coefficient: cluster_coefficient(graph),
            average_local_clustering: average_local_clustering(graph),
            average_distance: average_distance(graph),
        }
    }
}
