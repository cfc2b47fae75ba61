//! Exact minimization of the unbalanced QUBO over its feasible column
//! structure.
//!
//! With penalties satisfying `P > n lambda_1^2 / (4 min lambda_2)`, any
//! assignment violating a one-per-column block pays at least `P` while the
//! coverage terms can repay at most `P - 1`, so the true optimum picks
//! exactly one vertex per column whenever a valid burning sequence of the
//! probed length exists, and a violating optimum can only occur when the
//! probe would fail anyway. Enumerating one pick per column is therefore an
//! exact surrogate for the probe's success test on models too large to
//! sweep; the energy of the returned assignment is still evaluated on the
//! exact model.
//!
//! The search scales the per-vertex penalty table `f_i(1 - c)` to integers
//! by the common denominator and walks columns largest radius first. Its
//! lower bound budgets the coverage units the remaining columns can still
//! hand out (each column at most its largest ball): since every `f_i` is
//! convex in the source count, granting the most negative marginals
//! unit-by-unit solves that relaxation exactly. Runs of identical columns
//! (saturated radii) are forced into non-decreasing picks, which removes
//! the permutation symmetry sparse graphs otherwise explode on.

use crate::burning::BurningSequence;
use crate::error::Error;
use crate::graph::Graph;
use crate::qubo::PenaltyConfig;
use crate::{Rat, Result};
use num_integer::Integer;

/// Returns the minimizing assignment bits (dimension `g * n`) and the exact
/// minimum energy over one-per-column assignments.
pub fn minimize_uqubo_structured(
    graph: &Graph,
    g: u32,
    pc: &PenaltyConfig<Rat>,
    seed: Option<&BurningSequence>,
    node_budget: u64,
) -> Result<(Vec<bool>, Rat)> {
    let n = graph.vertex_count();
    if g < 1 {
        return Err(Error::Parameter("structured search needs g >= 1".into()));
    }
    if g > u8::MAX as u32 {
        return Err(Error::Capacity(format!(
            "structured search holds per-vertex counts in a byte; g = {g} is out of range"
        )));
    }
    if !pc.is_sound(n) {
        return Err(Error::Parameter(
            "penalty configuration violates its invariants".into(),
        ));
    }

    // Scale everything to i64: f_i(h) = lambda_1 h + lambda_{2,i} h^2.
    let mut scale: i64 = *pc.lambda1.denom();
    for l in &pc.lambda2 {
        scale = scale.lcm(l.denom());
    }
    let scaled = |r: &Rat| -> i64 { r.numer() * (scale / r.denom()) };
    // f_table[i][c]: penalty of vertex i at coverage count c in 0..=g.
    let f_table: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..=g as i64)
                .map(|c| {
                    let h = Rat::from_integer(1 - c);
                    scaled(&(pc.lambda1 * h + pc.lambda2[i] * h * h))
                })
                .collect()
        })
        .collect();

    // Balls per column, largest radius first; one bounded BFS per vertex.
    // Vertices with identical balls are interchangeable within a column, so
    // only the lowest-index representative stays.
    let mut balls_by_column: Vec<Vec<(u32, Vec<u32>)>> = vec![Vec::new(); g as usize];
    let mut dist = Vec::new();
    let mut visited = Vec::new();
    let mut raw: Vec<Vec<Vec<u32>>> = vec![Vec::with_capacity(n); g as usize];
    for v in 0..n as u32 {
        graph.bfs_bounded(v, g - 1, &mut dist, &mut visited);
        for (pos, radius) in (0..g).rev().enumerate() {
            let mut ball: Vec<u32> = visited
                .iter()
                .copied()
                .filter(|&u| dist[u as usize] <= radius)
                .collect();
            ball.sort_unstable();
            raw[pos].push(ball);
        }
    }
    for (pos, col) in raw.into_iter().enumerate() {
        let mut seen = std::collections::HashSet::new();
        for (v, ball) in col.into_iter().enumerate() {
            if seen.insert(ball.clone()) {
                balls_by_column[pos].push((v as u32, ball));
            }
        }
    }
    // Saturated radii make whole columns identical; forcing non-decreasing
    // picks across a run of identical columns removes the permutation
    // symmetry without losing any assignment up to equivalence.
    let same_as_prev: Vec<bool> = (0..g as usize)
        .map(|pos| pos > 0 && balls_by_column[pos] == balls_by_column[pos - 1])
        .collect();
    // unit_budget[col]: most coverage units columns col.. can still grant.
    let mut unit_budget = vec![0usize; g as usize + 1];
    for pos in (0..g as usize).rev() {
        let widest = balls_by_column[pos]
            .iter()
            .map(|(_, b)| b.len())
            .max()
            .unwrap_or(0);
        unit_budget[pos] = unit_budget[pos + 1] + widest;
    }

    struct Dfs<'a> {
        balls_by_column: &'a [Vec<(u32, Vec<u32>)>],
        same_as_prev: &'a [bool],
        unit_budget: &'a [usize],
        f_table: &'a [Vec<i64>],
        n: usize,
        g: usize,
        nodes: u64,
        budget: u64,
        best_value: i64,
        best_picks: Vec<u32>,
        picks: Vec<u32>,
        marginals: Vec<i64>,
    }

    impl Dfs<'_> {
        fn leaf_value(&self, counts: &[u8]) -> i64 {
            (0..self.n).map(|i| self.f_table[i][counts[i] as usize]).sum()
        }

        /// Exact minimum of the budgeted relaxation: start from the current
        /// penalties and hand out at most `unit_budget[col]` extra sources
        /// (at most `rem` per vertex), greedily taking the most negative
        /// marginals; exact because each `f_i` is convex in the count.
        fn bound(&mut self, counts: &[u8], col: usize) -> i64 {
            let rem = self.g - col;
            let base = self.leaf_value(counts);
            if rem == 0 {
                return base;
            }
            self.marginals.clear();
            for (i, &count) in counts.iter().enumerate().take(self.n) {
                let mut c = count as usize;
                let top = (c + rem).min(self.g);
                while c < top {
                    let m = self.f_table[i][c + 1] - self.f_table[i][c];
                    if m >= 0 {
                        break; // convex: later marginals only grow
                    }
                    self.marginals.push(m);
                    c += 1;
                }
            }
            self.marginals.sort_unstable();
            base + self
                .marginals
                .iter()
                .take(self.unit_budget[col])
                .sum::<i64>()
        }

        fn descend(&mut self, counts: &[u8], col: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Capacity(format!(
                    "structured search exceeded {} nodes",
                    self.budget
                )));
            }
            if col == self.g {
                let value = self.leaf_value(counts);
                if value < self.best_value {
                    self.best_value = value;
                    self.best_picks = self.picks.clone();
                }
                return Ok(());
            }
            if self.bound(counts, col) >= self.best_value {
                return Ok(());
            }
            let min_vertex = if self.same_as_prev[col] {
                self.picks[col - 1]
            } else {
                0
            };
            // Most promising child first: immediate marginal improvement of
            // the candidate's ball, vertex index on ties.
            let mut order: Vec<(i64, u32, usize)> = self.balls_by_column[col]
                .iter()
                .enumerate()
                .filter(|(_, (v, _))| *v >= min_vertex)
                .map(|(ci, (v, ball))| {
                    let delta: i64 = ball
                        .iter()
                        .map(|&u| {
                            let c = counts[u as usize] as usize;
                            self.f_table[u as usize][c + 1] - self.f_table[u as usize][c]
                        })
                        .sum();
                    (delta, *v, ci)
                })
                .collect();
            order.sort_unstable();
            for (_, v, ci) in order {
                let mut child = counts.to_vec();
                for &u in &self.balls_by_column[col][ci].1 {
                    child[u as usize] += 1;
                }
                self.picks.push(v);
                self.descend(&child, col + 1)?;
                self.picks.pop();
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        balls_by_column: &balls_by_column,
        same_as_prev: &same_as_prev,
        unit_budget: &unit_budget,
        f_table: &f_table,
        n,
        g: g as usize,
        nodes: 0,
        budget: node_budget,
        best_value: i64::MAX,
        best_picks: Vec::new(),
        picks: Vec::new(),
        marginals: Vec::new(),
    };

    // Seed the incumbent from a known valid sequence when one fits: its
    // sources go to the largest radii, the leftover columns pick vertex 0.
    if let Some(seq) = seed {
        if !seq.is_empty() && seq.len() <= g as usize {
            let pad = g as usize - seq.len();
            let mut picks: Vec<u32> = seq.vertices().to_vec();
            picks.extend(std::iter::repeat_n(0, pad));
            let mut counts = vec![0u8; n];
            for (col, &v) in picks.iter().enumerate() {
                let radius = g - 1 - col as u32;
                graph.bfs_bounded(v, radius, &mut dist, &mut visited);
                for &u in &visited {
                    counts[u as usize] += 1;
                }
            }
            dfs.best_value = dfs.leaf_value(&counts);
            dfs.best_picks = picks;
        }
    }

    let counts = vec![0u8; n];
    dfs.descend(&counts, 0)?;

    // Columns were walked radius-descending: position col holds column
    // j = g - col.
    let mut bits = vec![false; (g as usize) * n];
    for (col, &v) in dfs.best_picks.iter().enumerate() {
        let j = g - col as u32;
        bits[((j - 1) as usize) * n + v as usize] = true;
    }
    let energy = Rat::new(dfs.best_value, scale);
    Ok((bits, energy))
}
