//! Burning-sequence semantics.
//!
//! A burning sequence `(u_1, ..., u_g)` is valid when
//! `N_{g-1}[u_1] ∪ N_{g-2}[u_2] ∪ ... ∪ N_0[u_g]` equals the vertex set:
//! every vertex lies within distance `g - i` of some source `u_i`. The
//! burning number `b(G)` is the minimum such `g`. This module provides
//! validation, the step-by-step propagation view, per-vertex fire-source
//! counts, a deterministic greedy upper bound and a brute-force oracle.

use crate::cover::CoverInstance;
use crate::error::Error;
use crate::graph::Graph;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Ordered fire sources; repeated vertices are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurningSequence {
    vertices: Vec<u32>,
}

impl BurningSequence {
    pub fn new(vertices: Vec<u32>) -> Self {
        BurningSequence { vertices }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Original labels in sequence order, the external serialization form.
    pub fn labels(&self, graph: &Graph) -> Vec<u64> {
        self.vertices.iter().map(|&v| graph.label_of(v)).collect()
    }

    /// Builds a sequence from original labels, failing on unknown ones.
    pub fn from_labels(graph: &Graph, labels: &[u64]) -> Result<Self> {
        let vertices = labels
            .iter()
            .map(|&l| {
                graph
                    .vertex_of_label(l)
                    .ok_or_else(|| Error::Data(format!("unknown vertex label {l}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(BurningSequence::new(vertices))
    }

    fn check_range(&self, graph: &Graph) {
        for &u in &self.vertices {
            assert!(
                (u as usize) < graph.vertex_count(),
                "sequence vertex {u} out of range"
            );
        }
    }
}

/// Cumulative burned set per propagation step.
#[derive(Clone, Debug)]
pub struct PropagationTrace {
    pub rounds: Vec<Vec<u32>>,
}

impl PropagationTrace {
    pub fn final_round(&self) -> &[u32] {
        self.rounds.last().map(|r| r.as_slice()).unwrap_or(&[])
    }
}

/// Per-vertex count of sequence positions whose ball covers the vertex.
#[derive(Clone, Debug)]
pub struct FireSourceCounts {
    pub counts: Vec<u32>,
    pub sequence: BurningSequence,
}

impl FireSourceCounts {
    pub fn min_count(&self) -> u32 {
        self.counts.iter().copied().min().unwrap_or(0)
    }
}

/// Burn time per vertex under the staged propagation of `s`:
/// `tau[v] = min_j (j + d(v, u_j))`, computed by one multi-source BFS with
/// sources injected at their step. `u32::MAX` marks never-burned vertices.
fn burn_times(graph: &Graph, s: &BurningSequence) -> Vec<u32> {
    let n = graph.vertex_count();
    let g = s.len();
    let mut tau = vec![u32::MAX; n];
    let mut frontier: Vec<u32> = Vec::new();
    let mut next: Vec<u32> = Vec::new();

    for step in 1..=g {
        let u = s.vertices()[step - 1];
        // Spread from everything burned before this step, then inject u.
        for &v in &frontier {
            for &w in graph.neighbors(v) {
                if tau[w as usize] == u32::MAX {
                    tau[w as usize] = step as u32;
                    next.push(w);
                }
            }
        }
        if tau[u as usize] == u32::MAX {
            tau[u as usize] = step as u32;
            next.push(u);
        }
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    tau
}

/// True iff `s` burns every vertex of `graph`.
pub fn validate(graph: &Graph, s: &BurningSequence) -> bool {
    s.check_range(graph);
    if graph.vertex_count() == 0 {
        return true;
    }
    if s.is_empty() {
        return false;
    }
    burn_times(graph, s).iter().all(|&t| t != u32::MAX)
}

/// Vertices left unburned by `s`, ascending. Empty iff the sequence is
/// valid; used by row generation to find violated coverage rows.
pub fn uncovered_vertices(graph: &Graph, s: &BurningSequence) -> Vec<u32> {
    s.check_range(graph);
    if s.is_empty() {
        return (0..graph.vertex_count() as u32).collect();
    }
    burn_times(graph, s)
        .iter()
        .enumerate()
        .filter(|(_, &t)| t == u32::MAX)
        .map(|(v, _)| v as u32)
        .collect()
}

/// Step-by-step propagation: round `j` is round `j-1`, its neighborhood and
/// the j-th source.
pub fn simulate(graph: &Graph, s: &BurningSequence) -> PropagationTrace {
    s.check_range(graph);
    let tau = burn_times(graph, s);
    let rounds = (1..=s.len() as u32)
        .map(|step| {
            (0..graph.vertex_count() as u32)
                .filter(|&v| tau[v as usize] <= step)
                .collect()
        })
        .collect();
    PropagationTrace { rounds }
}

/// Coverage count per vertex: how many positions `j` satisfy
/// `d(v, u_j) <= g - j`.
pub fn fire_sources(graph: &Graph, s: &BurningSequence) -> FireSourceCounts {
    s.check_range(graph);
    let n = graph.vertex_count();
    let g = s.len() as u32;
    let mut counts = vec![0u32; n];
    let mut dist = Vec::new();
    let mut visited = Vec::new();
    for (idx, &u) in s.vertices().iter().enumerate() {
        let radius = g - (idx as u32 + 1);
        graph.bfs_bounded(u, radius, &mut dist, &mut visited);
        for &v in &visited {
            counts[v as usize] += 1;
        }
    }
    FireSourceCounts {
        counts,
        sequence: s.clone(),
    }
}

/// Deterministic greedy upper-bound heuristic. For trial lengths
/// `g = 1, 2, ...` it assigns radii `g-1` down to `0`, at each radius picking
/// the vertex covering the most still-uncovered vertices (lowest index on
/// ties), and returns the first full cover found. The result is always a
/// valid sequence, hence an upper bound on the burning number.
pub fn greedy_heuristic(graph: &Graph) -> BurningSequence {
    let n = graph.vertex_count();
    assert!(n >= 1, "greedy heuristic needs a non-empty graph");
    let mut dist = Vec::new();
    let mut visited = Vec::new();
    for g in 1..=n as u32 {
        let mut covered = vec![false; n];
        let mut uncovered = n;
        let mut sequence = Vec::with_capacity(g as usize);
        for radius in (0..g).rev() {
            // Ascending scan with strict improvement keeps the lowest index
            // among ties.
            let mut best_vertex = 0u32;
            let mut best_gain = 0usize;
            let mut found = false;
            for v in 0..n as u32 {
                graph.bfs_bounded(v, radius, &mut dist, &mut visited);
                let gain = visited.iter().filter(|&&u| !covered[u as usize]).count();
                if !found || gain > best_gain {
                    found = true;
                    best_vertex = v;
                    best_gain = gain;
                }
            }
            sequence.push(best_vertex);
            graph.bfs_bounded(best_vertex, radius, &mut dist, &mut visited);
            for &u in &visited {
                if !covered[u as usize] {
                    covered[u as usize] = true;
                    uncovered -= 1;
                }
            }
        }
        if uncovered == 0 {
            return BurningSequence::new(sequence);
        }
    }
    // g = n always succeeds: every vertex gets its own radius >= 0 ball.
    unreachable!("a sequence of length n burns any graph")
}

/// Closed-form upper bound for connected graphs:
/// `ceil((sqrt(12 n + 64) + 8) / 3)`.
pub fn closed_form_bound(n: usize) -> u32 {
    let v = ((12.0 * n as f64 + 64.0).sqrt() + 8.0) / 3.0;
    v.ceil() as u32
}

/// Upper bound on the burning number: the greedy witness length, tightened
/// by the closed-form bound when the graph is connected.
pub fn upper_bound(graph: &Graph) -> u32 {
    let greedy_len = greedy_heuristic(graph).len() as u32;
    let (_, components) = graph.connected_components();
    if components == 1 {
        greedy_len.min(closed_form_bound(graph.vertex_count()))
    } else {
        greedy_len
    }
}

/// Exact burning number with a lexicographically smallest witness, by
/// enumerating one vertex per radius for growing `g` with coverage pruning.
/// Guarded by `oracle_limit` on the vertex count (`None` for the default 16).
pub fn brute_force_burning_number(
    graph: &Graph,
    oracle_limit: Option<usize>,
) -> Result<(u32, BurningSequence)> {
    let n = graph.vertex_count();
    let limit = oracle_limit.unwrap_or(DEFAULT_ORACLE_LIMIT);
    if n > limit {
        return Err(Error::Capacity(format!(
            "oracle limited to {limit} vertices (graph has {n}); override the limit to force it"
        )));
    }
    if n == 0 {
        return Ok((0, BurningSequence::new(Vec::new())));
    }
    for g in 1..=n as u32 {
        let radii: Vec<u32> = (0..g).rev().collect();
        let inst = CoverInstance::from_graph(graph, &radii, None);
        let out = inst.maximize(ORACLE_NODE_BUDGET, n)?;
        if out.covered == n {
            let selection = inst
                .lex_selection(n, ORACLE_NODE_BUDGET)?
                .expect("feasible g admits a witness");
            return Ok((g, BurningSequence::new(selection)));
        }
    }
    unreachable!("g = n always burns the graph")
}

pub const DEFAULT_ORACLE_LIMIT: usize = 16;
const ORACLE_NODE_BUDGET: u64 = 100_000_000;
