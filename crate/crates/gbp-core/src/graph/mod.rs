//! Immutable undirected graphs in compressed adjacency form, with the
//! distance and neighborhood queries every formulation is built on.
//!
//! Vertices are dense 0-based indices internally; loaded files keep their
//! original labels in a side table and all user-facing output goes through
//! them. Distances between connected components are infinite, so a
//! radius-bounded neighborhood never crosses components.

mod gen;
mod io;

pub use gen::GeneratorSpec;
pub use io::GraphFormat;

use crate::cover::BitSet;
use crate::error::Error;
use crate::Result;
use std::collections::HashMap;
use std::collections::VecDeque;

/// Undirected simple graph. Neighbor lists are strictly ascending and
/// symmetric; the structure is immutable after construction.
#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    edge_count: usize,
    labels: Option<Labels>,
}

#[derive(Clone, Debug)]
struct Labels {
    of_vertex: Vec<u64>,
    to_vertex: HashMap<u64, u32>,
}

impl Graph {
    /// Builds a graph from an edge list over `n` vertices. Self-loops and
    /// duplicate edges (in either direction) are dropped.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut pairs = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            assert!((u as usize) < n && (v as usize) < n, "vertex out of range");
            if u == v {
                continue;
            }
            pairs.push((u, v));
            pairs.push((v, u));
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 1..=n {
            offsets[i] += offsets[i - 1];
        }
        let targets = pairs.iter().map(|&(_, v)| v).collect::<Vec<_>>();
        let edge_count = targets.len() / 2;
        Ok(Graph {
            offsets,
            targets,
            edge_count,
            labels: None,
        })
    }

    pub(crate) fn with_labels(mut self, labels: Vec<u64>) -> Self {
        let to_vertex = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as u32))
            .collect();
        self.labels = Some(Labels {
            of_vertex: labels,
            to_vertex,
        });
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    /// Original label of a vertex; the index itself when the graph was
    /// generated rather than loaded.
    pub fn label_of(&self, v: u32) -> u64 {
        match &self.labels {
            Some(l) => l.of_vertex[v as usize],
            None => v as u64,
        }
    }

    pub fn vertex_of_label(&self, label: u64) -> Option<u32> {
        match &self.labels {
            Some(l) => l.to_vertex.get(&label).copied(),
            None => {
                if (label as usize) < self.vertex_count() {
                    Some(label as u32)
                } else {
                    None
                }
            }
        }
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count() as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Bounded breadth-first search from `src`. On return, `dist[v]` holds
    /// the distance of every vertex within `max_depth` (untouched entries are
    /// `u32::MAX`), and `visited` lists the reached vertices in BFS order,
    /// non-decreasing in distance. No vertex beyond depth `max_depth` is
    /// explored. The buffers are reused across calls; entries are only valid
    /// until the next call with the same buffers.
    pub fn bfs_bounded(&self, src: u32, max_depth: u32, dist: &mut Vec<u32>, visited: &mut Vec<u32>) {
        let n = self.vertex_count();
        if dist.len() != n {
            dist.clear();
            dist.resize(n, u32::MAX);
        } else {
            for &v in visited.iter() {
                dist[v as usize] = u32::MAX;
            }
        }
        visited.clear();
        dist[src as usize] = 0;
        visited.push(src);
        let mut head = 0;
        while head < visited.len() {
            let u = visited[head];
            head += 1;
            let du = dist[u as usize];
            if du == max_depth {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    visited.push(w);
                }
            }
        }
    }

    /// Closed neighborhood `N_r[v]`: all vertices at distance at most `r`,
    /// sorted ascending.
    pub fn neighborhood(&self, v: u32, r: u32) -> Vec<u32> {
        assert!((v as usize) < self.vertex_count(), "vertex out of range");
        let mut dist = Vec::new();
        let mut visited = Vec::new();
        self.bfs_bounded(v, r, &mut dist, &mut visited);
        visited.sort_unstable();
        visited
    }

    /// All closed neighborhoods at radius `r` at once. `budget_entries`
    /// bounds the total table size; exceeding it is a capacity error
    /// suggesting on-demand queries instead.
    pub fn all_pairs_within(&self, r: u32, budget_entries: usize) -> Result<NeighborhoodTable> {
        let n = self.vertex_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut entries: Vec<u32> = Vec::new();
        offsets.push(0);
        let mut dist = Vec::new();
        let mut visited = Vec::new();
        for v in 0..n as u32 {
            self.bfs_bounded(v, r, &mut dist, &mut visited);
            if entries.len() + visited.len() > budget_entries {
                return Err(Error::Capacity(format!(
                    "neighborhood table exceeds {budget_entries} entries; query vertices on demand"
                )));
            }
            visited.sort_unstable();
            entries.extend_from_slice(&visited);
            offsets.push(entries.len());
        }
        Ok(NeighborhoodTable { offsets, entries })
    }

    /// Component id per vertex (ids in first-visit order) and component count.
    pub fn connected_components(&self) -> (Vec<u32>, usize) {
        let n = self.vertex_count();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for s in 0..n as u32 {
            if comp[s as usize] != u32::MAX {
                continue;
            }
            comp[s as usize] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count as usize)
    }

    /// Farthest-first vertex ordering of length `min(k, n)` starting at
    /// `start`. Each subsequent vertex maximizes its minimum distance to the
    /// vertices already picked; unreachable vertices count as infinitely far
    /// and are picked before reachable ones. Ties break on the lowest index.
    pub fn greedy_permutation(&self, start: u32, k: usize) -> Vec<u32> {
        let n = self.vertex_count();
        assert!((start as usize) < n, "start vertex out of range");
        assert!(k >= 1, "permutation length must be at least 1");
        let len = k.min(n);
        let mut order = Vec::with_capacity(len);
        let mut dist_to_set = vec![u32::MAX; n];
        let mut picked = vec![false; n];
        let mut bfs_dist = Vec::new();
        let mut visited = Vec::new();

        let mut current = start;
        for _ in 0..len {
            order.push(current);
            picked[current as usize] = true;
            self.bfs_bounded(current, u32::MAX, &mut bfs_dist, &mut visited);
            for &u in &visited {
                let d = bfs_dist[u as usize];
                if d < dist_to_set[u as usize] {
                    dist_to_set[u as usize] = d;
                }
            }
            if order.len() == len {
                break;
            }
            let mut best: Option<(u32, u32)> = None; // (distance, vertex)
            for v in 0..n as u32 {
                if picked[v as usize] {
                    continue;
                }
                let d = dist_to_set[v as usize];
                match best {
                    Some((bd, _)) if d <= bd => {}
                    _ => best = Some((d, v)),
                }
            }
            current = best.expect("len < n leaves an unpicked vertex").1;
        }
        order
    }

    /// All-pairs distances as a flat `n * n` table of `u16` (`u16::MAX` for
    /// unreachable pairs). Intended for small graphs; guarded by `max_n`.
    pub fn distance_matrix(&self, max_n: usize) -> Result<Vec<u16>> {
        let n = self.vertex_count();
        if n > max_n {
            return Err(Error::Capacity(format!(
                "distance matrix requested for n={n} > limit {max_n}"
            )));
        }
        let mut table = vec![u16::MAX; n * n];
        let mut dist = Vec::new();
        let mut visited = Vec::new();
        for v in 0..n as u32 {
            self.bfs_bounded(v, u32::MAX, &mut dist, &mut visited);
            for &u in &visited {
                table[v as usize * n + u as usize] = dist[u as usize].min(u16::MAX as u32) as u16;
            }
        }
        Ok(table)
    }

    /// Vertex set as a bit set, for cover searches over all vertices.
    pub fn full_vertex_set(&self) -> BitSet {
        BitSet::full(self.vertex_count())
    }
}

/// Batch neighborhood table: `entries[offsets[v]..offsets[v+1]]` is `N_r[v]`.
#[derive(Clone, Debug)]
pub struct NeighborhoodTable {
    offsets: Vec<usize>,
    entries: Vec<u32>,
}

impl NeighborhoodTable {
    pub fn of(&self, v: u32) -> &[u32] {
        &self.entries[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn total_entries(&self) -> usize {
        self.entries.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_shape() {
        let g = Graph::generate_path(5).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.neighbors(2), &[1, 3]);
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::from_edges(2, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn self_loops_dropped() {
        let g = Graph::from_edges(3, &[(0, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn neighborhood_on_paths() {
        let g = Graph::generate_path(5).unwrap();
        assert_eq!(g.neighborhood(2, 1), vec![1, 2, 3]);
        assert_eq!(g.neighborhood(0, 0), vec![0]);
        let g9 = Graph::generate_path(9).unwrap();
        assert_eq!(g9.neighborhood(6, 1), vec![5, 6, 7]);
    }

    #[test]
    fn neighborhood_never_crosses_components() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.neighborhood(0, 10), vec![0, 1]);
    }

    #[test]
    fn all_pairs_radius_one_on_p4() {
        let g = Graph::generate_path(4).unwrap();
        let t = g.all_pairs_within(1, 1 << 20).unwrap();
        assert_eq!(t.of(0), &[0, 1]);
        assert_eq!(t.of(1), &[0, 1, 2]);
        assert_eq!(t.of(2), &[1, 2, 3]);
        assert_eq!(t.of(3), &[2, 3]);
    }

    #[test]
    fn all_pairs_radius_zero_is_singletons() {
        let g = Graph::generate_cycle(6).unwrap();
        let t = g.all_pairs_within(0, 1 << 20).unwrap();
        for v in 0..6 {
            assert_eq!(t.of(v), &[v]);
        }
    }

    #[test]
    fn all_pairs_complete_graph_radius_one() {
        let g = Graph::generate_complete(5).unwrap();
        let t = g.all_pairs_within(1, 1 << 20).unwrap();
        for v in 0..5 {
            assert_eq!(t.of(v), &[0, 1, 2, 3, 4]);
        }
    }

    #[test]
    fn all_pairs_budget_errors() {
        let g = Graph::generate_complete(10).unwrap();
        match g.all_pairs_within(1, 5) {
            Err(Error::Capacity(_)) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn components_counts() {
        let p5 = Graph::generate_path(5).unwrap();
        assert_eq!(p5.connected_components().1, 1);
        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(two_triangles.connected_components().1, 2);
        let isolated = Graph::from_edges(4, &[]).unwrap();
        assert_eq!(isolated.connected_components().1, 4);
    }

    #[test]
    fn greedy_permutation_on_paths() {
        let g = Graph::generate_path(9).unwrap();
        assert_eq!(g.greedy_permutation(0, 2), vec![0, 8]);
        let g5 = Graph::generate_path(5).unwrap();
        // Vertices 0 and 4 tie at distance 2 from vertex 2; 0 wins.
        assert_eq!(g5.greedy_permutation(2, 3), vec![2, 0, 4]);
    }

    #[test]
    fn greedy_permutation_prefers_unreachable() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let p = g.greedy_permutation(0, 2);
        assert_eq!(p[1], 3);
    }

    #[test]
    fn greedy_permutation_covers_connected_graphs() {
        let g = Graph::generate_cycle(7).unwrap();
        let p = g.greedy_permutation(3, 7);
        let mut sorted = p.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..7).collect::<Vec<u32>>());
    }

    #[test]
    fn greedy_permutation_truncates_at_n() {
        let g = Graph::generate_path(3).unwrap();
        assert_eq!(g.greedy_permutation(0, 10).len(), 3);
    }
}
