//! Clustered maximum-coverage search.
//!
//! A cover instance has one column per coverage radius; each column offers
//! one candidate per vertex, whose mask is the set of target vertices its
//! ball covers. Exactly one candidate must be picked per column, maximizing
//! the union of the picked masks. Burning feasibility for a guess `g` is the
//! question "does a selection cover every target?", which is what the binary
//! search and the brute-force oracle repeatedly ask.
//!
//! The search is a depth-first enumeration with an admissible bound: a branch
//! is abandoned when the covered count plus the sum, over remaining columns,
//! of the largest per-column gain against the current cover cannot beat the
//! incumbent. Value search orders candidates best-gain-first; a second pass
//! in vertex order recovers the lexicographically smallest optimal selection.

use crate::error::Error;
use crate::graph::Graph;
use crate::Result;
use std::collections::HashSet;

/// Fixed-capacity bit set over `len` bits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    /// Number of bits in `self` not present in `covered`.
    pub fn gain_over(&self, covered: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&covered.words)
            .map(|(w, c)| (w & !c).count_ones() as usize)
            .sum()
    }

    /// Words of `self & !covered`, used to recognize equivalent candidates.
    fn gain_words(&self, covered: &BitSet) -> Vec<u64> {
        self.words
            .iter()
            .zip(&covered.words)
            .map(|(w, c)| w & !c)
            .collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }
}

/// One selectable ball: the vertex it is centered on and the targets it covers.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub vertex: u32,
    pub mask: BitSet,
    pub size: usize,
}

/// A column of candidates; one candidate must be chosen from each column.
#[derive(Clone, Debug)]
pub struct CoverColumn {
    /// Candidates in ascending vertex order (deduplicated by mask).
    pub candidates: Vec<Candidate>,
    /// Indices into `candidates`, sorted by static mask size descending.
    by_size: Vec<u32>,
}

impl CoverColumn {
    fn new(mut candidates: Vec<Candidate>) -> Self {
        candidates.sort_by_key(|c| c.vertex);
        // Identical masks are interchangeable; keep the lowest vertex so the
        // lexicographic pass stays exact.
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        candidates.retain(|c| seen.insert(c.mask.words.clone()));
        let mut by_size: Vec<u32> = (0..candidates.len() as u32).collect();
        by_size.sort_by(|&a, &b| {
            candidates[b as usize]
                .size
                .cmp(&candidates[a as usize].size)
                .then(candidates[a as usize].vertex.cmp(&candidates[b as usize].vertex))
        });
        CoverColumn { candidates, by_size }
    }

    /// Largest gain over `covered`, scanning big static masks first so the
    /// scan can stop as soon as static sizes fall below the best found gain.
    fn max_gain(&self, covered: &BitSet) -> usize {
        let mut best = 0;
        for &ci in &self.by_size {
            let c = &self.candidates[ci as usize];
            if c.size <= best {
                break;
            }
            let g = c.mask.gain_over(covered);
            if g > best {
                best = g;
            }
        }
        best
    }
}

#[derive(Clone, Debug)]
pub struct CoverInstance {
    pub columns: Vec<CoverColumn>,
    pub target_count: usize,
    n_bits: usize,
    /// `true` at `c` when column `c` offers exactly the candidates of
    /// `c - 1`. Within such a run picks are forced non-decreasing: any
    /// selection has an equal-coverage sorted twin, and the twin is the
    /// lexicographically smaller of the two, so both search phases stay
    /// exact while the permutation symmetry disappears. Saturated radii on
    /// disconnected graphs otherwise make these runs explode.
    same_as_prev: Vec<bool>,
}

/// Result of a cover search: how many targets the best selection covers and
/// the chosen vertex per column, in column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverOutcome {
    pub covered: usize,
    pub selection: Vec<u32>,
}

struct SearchState<'a> {
    inst: &'a CoverInstance,
    covered: BitSet,
    chosen: Vec<u32>,
    best: Option<CoverOutcome>,
    nodes: u64,
    budget: u64,
    stop_at: usize,
}

impl CoverInstance {
    /// Builds the instance for `radii` columns over `graph`, restricted to
    /// `targets` (all vertices when `None`). `radii[c]` is the coverage
    /// radius of column `c`; for a burning guess `g` pass `[g-1, ..., 1, 0]`
    /// so selections read in sequence order.
    pub fn from_graph(graph: &Graph, radii: &[u32], targets: Option<&BitSet>) -> Self {
        let n = graph.vertex_count();
        let max_radius = radii.iter().copied().max().unwrap_or(0);
        let target_mask = match targets {
            Some(t) => t.clone(),
            None => BitSet::full(n),
        };
        let target_count = target_mask.count();

        // One bounded BFS per vertex serves every radius.
        let mut per_radius_masks: Vec<Vec<BitSet>> = Vec::with_capacity(n);
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        for v in 0..n as u32 {
            graph.bfs_bounded(v, max_radius, &mut dist, &mut queue);
            let mut masks: Vec<BitSet> = (0..=max_radius).map(|_| BitSet::new(n)).collect();
            for &u in queue.iter() {
                let d = dist[u as usize];
                if target_mask.contains(u as usize) {
                    for m in masks.iter_mut().skip(d as usize) {
                        m.insert(u as usize);
                    }
                }
            }
            per_radius_masks.push(masks);
        }

        let columns: Vec<CoverColumn> = radii
            .iter()
            .map(|&r| {
                let candidates = (0..n as u32)
                    .map(|v| {
                        let mask = per_radius_masks[v as usize][r as usize].clone();
                        let size = mask.count();
                        Candidate { vertex: v, mask, size }
                    })
                    .collect();
                CoverColumn::new(candidates)
            })
            .collect();

        let same_as_prev = mark_equal_runs(&columns);
        CoverInstance {
            columns,
            target_count,
            n_bits: n,
            same_as_prev,
        }
    }

    /// Builds an instance directly from per-column candidate balls, used when
    /// structure is extracted from a linear model rather than a graph.
    pub fn from_columns(columns: Vec<Vec<Candidate>>, target_count: usize, n_bits: usize) -> Self {
        let columns: Vec<CoverColumn> = columns.into_iter().map(CoverColumn::new).collect();
        let same_as_prev = mark_equal_runs(&columns);
        CoverInstance {
            columns,
            target_count,
            n_bits,
            same_as_prev,
        }
    }

    /// Best-gain-first value search. Stops early once `stop_at` targets are
    /// covered (pass `target_count` for feasibility checks).
    pub fn maximize(&self, budget: u64, stop_at: usize) -> Result<CoverOutcome> {
        let mut st = SearchState {
            inst: self,
            covered: BitSet::new(self.n_bits),
            chosen: Vec::with_capacity(self.columns.len()),
            best: None,
            nodes: 0,
            budget,
            stop_at: stop_at.min(self.target_count),
        };
        st.descend_value(0)?;
        Ok(st.best.expect("search visits at least one leaf"))
    }

    /// Lexicographically smallest selection covering exactly `value` targets.
    /// `value` must be the optimal value reported by [`maximize`].
    pub fn lex_selection(&self, value: usize, budget: u64) -> Result<Option<Vec<u32>>> {
        let mut st = SearchState {
            inst: self,
            covered: BitSet::new(self.n_bits),
            chosen: Vec::with_capacity(self.columns.len()),
            best: None,
            nodes: 0,
            budget,
            stop_at: value,
        };
        st.descend_lex(0)?;
        Ok(st.best.map(|o| o.selection))
    }

    /// Value search followed by the lexicographic pass.
    pub fn solve_lex(&self, budget: u64) -> Result<CoverOutcome> {
        let opt = self.maximize(budget, self.target_count)?;
        let selection = self
            .lex_selection(opt.covered, budget)?
            .expect("optimal value is achievable");
        Ok(CoverOutcome {
            covered: opt.covered,
            selection,
        })
    }
}

/// Marks columns equal to their predecessor (same candidate vertices and
/// masks after deduplication).
fn mark_equal_runs(columns: &[CoverColumn]) -> Vec<bool> {
    (0..columns.len())
        .map(|c| {
            c > 0 && {
                let (a, b) = (&columns[c].candidates, &columns[c - 1].candidates);
                a.len() == b.len()
                    && a.iter()
                        .zip(b)
                        .all(|(x, y)| x.vertex == y.vertex && x.mask == y.mask)
            }
        })
        .collect()
}

impl SearchState<'_> {
    /// Smallest vertex this column may pick under the non-decreasing rule.
    fn run_floor(&self, col: usize) -> u32 {
        if self.inst.same_as_prev[col] {
            self.chosen[col - 1]
        } else {
            0
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Capacity(format!(
                "cover search exceeded {} nodes; raise the budget or use row generation",
                self.budget
            )));
        }
        Ok(())
    }

    fn best_value(&self) -> Option<usize> {
        self.best.as_ref().map(|b| b.covered)
    }

    fn suffix_bound(&self, col: usize) -> usize {
        self.inst.columns[col..]
            .iter()
            .map(|c| c.max_gain(&self.covered))
            .sum()
    }

    fn descend_value(&mut self, col: usize) -> Result<()> {
        self.tick()?;
        if self.best_value() == Some(self.stop_at) {
            return Ok(());
        }
        let covered_now = self.covered.count();
        if col == self.inst.columns.len() {
            if self.best_value().is_none_or(|b| covered_now > b) {
                self.best = Some(CoverOutcome {
                    covered: covered_now,
                    selection: self.chosen.clone(),
                });
            }
            return Ok(());
        }
        if let Some(b) = self.best_value() {
            if covered_now + self.suffix_bound(col) <= b {
                return Ok(());
            }
        }

        // Rank this column's candidates by gain, dropping duplicates that
        // cover the same new targets and honoring the non-decreasing rule
        // within runs of identical columns.
        let column = &self.inst.columns[col];
        let min_vertex = self.run_floor(col);
        let mut ranked: Vec<(usize, u32)> = Vec::with_capacity(column.candidates.len());
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for (ci, c) in column.candidates.iter().enumerate() {
            if c.vertex < min_vertex {
                continue;
            }
            let gw = c.mask.gain_words(&self.covered);
            if seen.insert(gw.clone()) {
                let gain = gw.iter().map(|w| w.count_ones() as usize).sum();
                ranked.push((gain, ci as u32));
            }
        }
        ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        for (_, ci) in ranked {
            let cand = &column.candidates[ci as usize];
            let saved = self.covered.clone();
            self.covered.union_with(&cand.mask);
            self.chosen.push(cand.vertex);
            self.descend_value(col + 1)?;
            self.chosen.pop();
            self.covered = saved;
            if self.best_value() == Some(self.stop_at) {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Vertex-order pass; `stop_at` holds the known optimal value and the
    /// first leaf reaching it is the lexicographically smallest selection.
    fn descend_lex(&mut self, col: usize) -> Result<()> {
        self.tick()?;
        if self.best.is_some() {
            return Ok(());
        }
        let covered_now = self.covered.count();
        if col == self.inst.columns.len() {
            if covered_now == self.stop_at {
                self.best = Some(CoverOutcome {
                    covered: covered_now,
                    selection: self.chosen.clone(),
                });
            }
            return Ok(());
        }
        if covered_now + self.suffix_bound(col) < self.stop_at {
            return Ok(());
        }

        let column = &self.inst.columns[col];
        let min_vertex = self.run_floor(col);
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for ci in 0..column.candidates.len() {
            let cand = &column.candidates[ci];
            if cand.vertex < min_vertex {
                continue;
            }
            if !seen.insert(cand.mask.gain_words(&self.covered)) {
                continue;
            }
            let saved = self.covered.clone();
            self.covered.union_with(&cand.mask);
            self.chosen.push(cand.vertex);
            self.descend_lex(col + 1)?;
            self.chosen.pop();
            self.covered = saved;
            if self.best.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn path(n: usize) -> Graph {
        Graph::generate_path(n).unwrap()
    }

    #[test]
    fn bitset_basics() {
        let mut s = BitSet::new(70);
        s.insert(0);
        s.insert(69);
        assert!(s.contains(0) && s.contains(69) && !s.contains(33));
        assert_eq!(s.count(), 2);
        let mut t = BitSet::new(70);
        t.insert(33);
        assert_eq!(t.gain_over(&s), 1);
        t.union_with(&s);
        assert_eq!(t.count(), 3);
    }

    #[test]
    fn p4_two_radii_cover_everything() {
        let g = path(4);
        let inst = CoverInstance::from_graph(&g, &[1, 0], None);
        let out = inst.solve_lex(1 << 20).unwrap();
        assert_eq!(out.covered, 4);
        // Radius-1 ball of vertex 1 covers {0,1,2}; vertex 3 covers itself.
        assert_eq!(out.selection, vec![1, 3]);
    }

    #[test]
    fn p5_two_radii_fall_short() {
        let g = path(5);
        let inst = CoverInstance::from_graph(&g, &[1, 0], None);
        let out = inst.maximize(1 << 20, 5).unwrap();
        assert_eq!(out.covered, 4);
    }

    #[test]
    fn lex_pass_matches_value_pass() {
        let g = path(9);
        let inst = CoverInstance::from_graph(&g, &[2, 1, 0], None);
        let out = inst.solve_lex(1 << 20).unwrap();
        assert_eq!(out.covered, 9);
        // Lex-smallest full cover starts from the lowest workable vertex.
        let check = inst
            .lex_selection(9, 1 << 20)
            .unwrap()
            .expect("cover exists");
        assert_eq!(out.selection, check);
    }

    #[test]
    fn subset_targets_only_count_targets() {
        let g = path(9);
        let mut targets = BitSet::new(9);
        targets.insert(0);
        targets.insert(8);
        let inst = CoverInstance::from_graph(&g, &[0, 0], Some(&targets));
        let out = inst.maximize(1 << 20, 2).unwrap();
        assert_eq!(out.covered, 2);
    }

    #[test]
    fn budget_violation_is_reported() {
        let g = path(12);
        let inst = CoverInstance::from_graph(&g, &[2, 1, 0], None);
        match inst.maximize(3, 12) {
            Err(Error::Capacity(_)) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }
}
