//! QUBO encodings of the coverage formulation.
//!
//! Both encodings use binary `x(i, j)` meaning "vertex i picked for column
//! j" (coverage radius `j - 1`). Exactly-one-per-column is enforced through
//! the expanded square `(1 - sum_i x_{i,j})^2`, which is 0 at one pick and
//! positive otherwise.
//!
//! * Slack encoding: the coverage inequality `cov_i >= 1` becomes the exact
//!   square `(1 - cov_i + sum_l 2^{l-1} s_{i,l})^2` with `ceil(log2 g)`
//!   slack bits per vertex; the minimum is 0 iff a length-`g` burning
//!   sequence exists.
//! * Unbalanced penalization: no slack bits; each vertex contributes
//!   `lambda_1 h + lambda_{2,i} h^2` with `h = 1 - cov_i`, negative when the
//!   vertex has between 1 and `g` fire sources, under penalties tuned so the
//!   one-per-column blocks always hold at the optimum. The optimum is not
//!   guaranteed to decode to a valid sequence; that is the price of the
//!   smaller search space.
//!
//! All coefficients are exact rationals in the default instantiation; the
//! zero-vs-positive minimum distinction is what binary searches consume.

mod file;
mod sweep;

pub use file::{write_qubo, write_qubo_file};
pub use sweep::{exhaustive_minimum, SweepOutcome};

use crate::burning::{validate, BurningSequence, FireSourceCounts};
use crate::error::Error;
use crate::graph::Graph;
use crate::scalar::Scalar;
use crate::Result;
use std::collections::BTreeMap;

/// Structured identity of a QUBO variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum QuboVar {
    /// `x_i_j`: vertex i (1-based) picked for column j.
    X { i: u32, j: u32 },
    /// `s_i_l`: slack bit l (weight `2^{l-1}`) of vertex i.
    Slack { i: u32, l: u32 },
}

impl QuboVar {
    pub fn name(&self) -> String {
        match *self {
            QuboVar::X { i, j } => format!("x_{i}_{j}"),
            QuboVar::Slack { i, l } => format!("s_{i}_{l}"),
        }
    }
}

/// Which encoding a model carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuboKind {
    Slack { n: u32, g: u32, slack_bits: u32 },
    Unbalanced { n: u32, g: u32 },
}

/// Upper-triangular quadratic form plus constant offset: the objective is
/// `offset + sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j`.
#[derive(Clone, Debug)]
pub struct QuboModel<S> {
    pub dim: usize,
    pub q: BTreeMap<(u32, u32), S>,
    pub offset: S,
    pub vars: Vec<QuboVar>,
    pub kind: QuboKind,
}

impl<S: Scalar> QuboModel<S> {
    pub fn n(&self) -> u32 {
        match self.kind {
            QuboKind::Slack { n, .. } | QuboKind::Unbalanced { n, .. } => n,
        }
    }

    pub fn columns(&self) -> u32 {
        match self.kind {
            QuboKind::Slack { g, .. } | QuboKind::Unbalanced { g, .. } => g,
        }
    }

    pub fn x_id(&self, i: u32, j: u32) -> usize {
        let n = self.n();
        ((j - 1) * n + (i - 1)) as usize
    }

    /// Float view of the model for the annealing hot loop; candidate
    /// energies are re-checked against the exact model afterwards.
    pub fn to_f64(&self) -> QuboModel<f64> {
        QuboModel {
            dim: self.dim,
            q: self.q.iter().map(|(&k, v)| (k, v.to_f64())).collect(),
            offset: self.offset.to_f64(),
            vars: self.vars.clone(),
            kind: self.kind,
        }
    }
}

/// Exact objective value of a binary assignment.
pub fn energy<S: Scalar>(model: &QuboModel<S>, bits: &[bool]) -> Result<S> {
    if bits.len() != model.dim {
        return Err(Error::Parameter(format!(
            "assignment has {} bits for dimension {}",
            bits.len(),
            model.dim
        )));
    }
    let mut e = model.offset.clone();
    for (&(a, b), c) in &model.q {
        if bits[a as usize] && bits[b as usize] {
            e += c.clone();
        }
    }
    Ok(e)
}

/// Accumulates quadratic expressions into upper-triangular form, folding
/// `x^2 = x` for binaries.
struct QuadAccum<S> {
    q: BTreeMap<(u32, u32), S>,
    offset: S,
}

impl<S: Scalar> QuadAccum<S> {
    fn new() -> Self {
        QuadAccum {
            q: BTreeMap::new(),
            offset: S::zero(),
        }
    }

    fn add_const(&mut self, c: S) {
        self.offset += c;
    }

    fn add_linear(&mut self, v: u32, c: S) {
        let entry = self.q.entry((v, v)).or_insert_with(S::zero);
        *entry += c;
    }

    fn add_product(&mut self, a: u32, b: u32, c: S) {
        if a == b {
            self.add_linear(a, c);
            return;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        let entry = self.q.entry(key).or_insert_with(S::zero);
        *entry += c;
    }

    /// Adds `scale * (c0 + sum_k a_k x_k)^2`.
    fn add_scaled_square(&mut self, scale: &S, c0: &S, terms: &[(u32, S)]) {
        self.add_const(scale.clone() * c0.clone() * c0.clone());
        let two = S::from_int(2);
        for (v, a) in terms {
            // 2 c0 a x + a^2 x^2 = (2 c0 a + a^2) x
            let lin = scale.clone() * (two.clone() * c0.clone() * a.clone() + a.clone() * a.clone());
            self.add_linear(*v, lin);
        }
        for (p, (va, a)) in terms.iter().enumerate() {
            for (vb, b) in terms.iter().skip(p + 1) {
                self.add_product(
                    *va,
                    *vb,
                    scale.clone() * two.clone() * a.clone() * b.clone(),
                );
            }
        }
    }

    fn finish(mut self, dim: usize, vars: Vec<QuboVar>, kind: QuboKind) -> QuboModel<S> {
        self.q.retain(|_, v| !v.is_zero());
        QuboModel {
            dim,
            q: self.q,
            offset: self.offset,
            vars,
            kind,
        }
    }
}

fn x_layout(n: u32, g: u32) -> Vec<QuboVar> {
    let mut vars = Vec::with_capacity((g * n) as usize);
    for j in 1..=g {
        for i in 1..=n {
            vars.push(QuboVar::X { i, j });
        }
    }
    vars
}

/// Per-vertex coverage terms: flat ids of every `x(k, j)` whose ball covers
/// vertex `i`, coefficient -1 each (the `1 - cov_i` shape).
fn coverage_terms<S: Scalar>(
    graph: &Graph,
    i: u32,
    g: u32,
    dist: &mut Vec<u32>,
    visited: &mut Vec<u32>,
) -> Vec<(u32, S)> {
    let n = graph.vertex_count() as u32;
    graph.bfs_bounded(i - 1, g - 1, dist, visited);
    let mut terms = Vec::new();
    for j in 1..=g {
        let radius = j - 1;
        let mut ball: Vec<u32> = visited
            .iter()
            .copied()
            .filter(|&u| dist[u as usize] <= radius)
            .collect();
        ball.sort_unstable();
        for k in ball {
            terms.push(((j - 1) * n + k, -S::one()));
        }
    }
    terms
}

pub fn slack_bit_count(g: u32) -> u32 {
    32 - (g.max(1) - 1).leading_zeros()
}

/// Slack-encoded QUBO for guess `g`; minimum 0 iff `g >=` the burning number.
pub fn build_squbo<S: Scalar>(graph: &Graph, g: u32) -> Result<QuboModel<S>> {
    if g < 1 {
        return Err(Error::Parameter("sQUBO needs g >= 1".into()));
    }
    let n = graph.vertex_count() as u32;
    let slack_bits = slack_bit_count(g);
    let mut vars = x_layout(n, g);
    for i in 1..=n {
        for l in 1..=slack_bits {
            vars.push(QuboVar::Slack { i, l });
        }
    }
    let dim = vars.len();

    let mut acc = QuadAccum::new();
    // One pick per column.
    for j in 1..=g {
        let terms: Vec<(u32, S)> = (0..n).map(|k| ((j - 1) * n + k, -S::one())).collect();
        acc.add_scaled_square(&S::one(), &S::one(), &terms);
    }
    // Coverage with binary-expanded slack: (1 - cov_i + sum 2^{l-1} s_il)^2.
    let mut dist = Vec::new();
    let mut visited = Vec::new();
    for i in 1..=n {
        let mut terms = coverage_terms::<S>(graph, i, g, &mut dist, &mut visited);
        for l in 1..=slack_bits {
            let id = g * n + (i - 1) * slack_bits + (l - 1);
            terms.push((id, S::from_int(1 << (l - 1))));
        }
        acc.add_scaled_square(&S::one(), &S::one(), &terms);
    }
    Ok(acc.finish(dim, vars, QuboKind::Slack { n, g, slack_bits }))
}

/// Penalty derivation mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PenaltyMode {
    /// `lambda_{2,i} = lambda_1 / (g - 1)` for every vertex.
    Uniform,
    /// `lambda_{2,i}` tuned from a feasible sequence's fire-source counts.
    Guided,
}

/// The penalty triple for the unbalanced encoding.
#[derive(Clone, Debug)]
pub struct PenaltyConfig<S> {
    pub p: S,
    pub lambda1: S,
    pub lambda2: Vec<S>,
    pub mode: PenaltyMode,
}

impl<S: Scalar> PenaltyConfig<S> {
    pub fn min_lambda2(&self) -> S {
        self.lambda2
            .iter()
            .cloned()
            .reduce(|a, b| if b < a { b } else { a })
            .expect("lambda2 is non-empty")
    }

    /// Invariant check: positive lambda2 everywhere and
    /// `P > n lambda_1^2 / (4 min lambda_2)`.
    pub fn is_sound(&self, n: usize) -> bool {
        if self.lambda2.len() != n || self.lambda2.iter().any(|l| *l <= S::zero()) {
            return false;
        }
        let bound = S::from_int(n as i64) * self.lambda1.clone() * self.lambda1.clone()
            / (S::from_int(4) * self.min_lambda2());
        self.p > bound
    }
}

/// Default penalties with `lambda_1 = 1`.
///
/// Uniform mode solves `f(1 - g) = lambda_1 (1-g) + lambda_2 (1-g)^2 = 0`,
/// giving `lambda_2 = lambda_1 / (g - 1)`, so 1 to `g` fire sources
/// contribute non-positive values. Guided mode aims each vertex at the
/// fire-source count of a known feasible sequence. In both modes
/// `P = n lambda_1^2 / (4 min lambda_2) + 1`, one more than the largest
/// total the coverage terms can reach below zero.
pub fn default_penalties<S: Scalar>(
    graph: &Graph,
    g: u32,
    guide: Option<&FireSourceCounts>,
) -> Result<PenaltyConfig<S>> {
    let n = graph.vertex_count();
    let lambda1 = S::one();
    let (mode, lambda2) = match guide {
        None => {
            if g < 2 {
                return Err(Error::Parameter(
                    "uniform penalties need g >= 2 (one-step burns are the single-vertex case)"
                        .into(),
                ));
            }
            (PenaltyMode::Uniform, vec![S::ratio(1, g as i64 - 1); n])
        }
        Some(fs) => {
            if fs.counts.len() != n {
                return Err(Error::Parameter(
                    "guide counts do not match the vertex count".into(),
                ));
            }
            if fs.min_count() < 1 {
                return Err(Error::Parameter(
                    "guide sequence does not burn every vertex".into(),
                ));
            }
            let l2 = fs
                .counts
                .iter()
                .map(|&l| {
                    if l >= 2 {
                        S::ratio(1, l as i64 - 1)
                    } else {
                        S::one()
                    }
                })
                .collect();
            (PenaltyMode::Guided, l2)
        }
    };
    let config = PenaltyConfig {
        p: S::zero(),
        lambda1,
        lambda2,
        mode,
    };
    let p = S::from_int(n as i64) * config.lambda1.clone() * config.lambda1.clone()
        / (S::from_int(4) * config.min_lambda2())
        + S::one();
    let config = PenaltyConfig { p, ..config };
    debug_assert!(config.is_sound(n));
    Ok(config)
}

/// Unbalanced-penalty QUBO for guess `g` under `pc`; dimension `g * n`.
pub fn build_uqubo<S: Scalar>(graph: &Graph, g: u32, pc: &PenaltyConfig<S>) -> Result<QuboModel<S>> {
    if g < 1 {
        return Err(Error::Parameter("uQUBO needs g >= 1".into()));
    }
    let n = graph.vertex_count() as u32;
    if !pc.is_sound(n as usize) {
        return Err(Error::Parameter(
            "penalty configuration violates its invariants".into(),
        ));
    }
    let vars = x_layout(n, g);
    let dim = vars.len();

    let mut acc = QuadAccum::new();
    for j in 1..=g {
        let terms: Vec<(u32, S)> = (0..n).map(|k| ((j - 1) * n + k, -S::one())).collect();
        acc.add_scaled_square(&pc.p, &S::one(), &terms);
    }
    let mut dist = Vec::new();
    let mut visited = Vec::new();
    for i in 1..=n {
        let terms = coverage_terms::<S>(graph, i, g, &mut dist, &mut visited);
        // lambda_1 * (1 - cov_i)
        acc.add_const(pc.lambda1.clone());
        for (v, c) in &terms {
            acc.add_linear(*v, pc.lambda1.clone() * c.clone());
        }
        // lambda_{2,i} * (1 - cov_i)^2
        acc.add_scaled_square(&pc.lambda2[i as usize - 1], &S::one(), &terms);
    }
    Ok(acc.finish(dim, vars, QuboKind::Unbalanced { n, g }))
}

/// Outcome of reading a QUBO assignment back as a burning sequence.
#[derive(Clone, Debug)]
pub struct QuboDecode {
    /// Picks per column when every column picks exactly one vertex.
    pub sequence: Option<BurningSequence>,
    /// Columns whose pick count differs from one, with their counts.
    pub column_violations: Vec<(u32, u32)>,
    /// Validation verdict when a sequence was extracted.
    pub valid: Option<bool>,
}

/// Extracts the `x` bits column by column; slack bits are ignored. A column
/// picking zero or several vertices yields no sequence and a violation
/// report; otherwise the sequence is returned along with its validation
/// outcome on `graph`.
pub fn decode_qubo<S: Scalar>(graph: &Graph, model: &QuboModel<S>, bits: &[bool]) -> Result<QuboDecode> {
    if bits.len() != model.dim {
        return Err(Error::Parameter(format!(
            "assignment has {} bits for dimension {}",
            bits.len(),
            model.dim
        )));
    }
    let n = model.n();
    let g = model.columns();
    let mut picks: Vec<Option<u32>> = Vec::with_capacity(g as usize);
    let mut violations = Vec::new();
    for j in 1..=g {
        let mut count = 0u32;
        let mut pick = None;
        for i in 1..=n {
            if bits[model.x_id(i, j)] {
                count += 1;
                pick = Some(i - 1);
            }
        }
        if count != 1 {
            violations.push((j, count));
            picks.push(None);
        } else {
            picks.push(pick);
        }
    }
    if !violations.is_empty() {
        return Ok(QuboDecode {
            sequence: None,
            column_violations: violations,
            valid: None,
        });
    }
    // Column j has radius j - 1, hence position g - j + 1.
    let mut seq: Vec<u32> = picks.into_iter().map(|p| p.unwrap()).collect();
    seq.reverse();
    let sequence = BurningSequence::new(seq);
    let valid = validate(graph, &sequence);
    Ok(QuboDecode {
        sequence: Some(sequence),
        column_violations: Vec::new(),
        valid: Some(valid),
    })
}

/// Assignment bits encoding `sequence` in a slack QUBO, with each vertex's
/// slack set to its fire-source count minus one. For a valid sequence of
/// the model's length this reaches energy zero.
pub fn squbo_assignment_for<S: Scalar>(
    graph: &Graph,
    model: &QuboModel<S>,
    sequence: &BurningSequence,
) -> Result<Vec<bool>> {
    let (n, g, slack_bits) = match model.kind {
        QuboKind::Slack { n, g, slack_bits } => (n, g, slack_bits),
        _ => return Err(Error::Parameter("not a slack model".into())),
    };
    if sequence.len() != g as usize {
        return Err(Error::Parameter(format!(
            "sequence length {} does not match g = {g}",
            sequence.len()
        )));
    }
    let mut bits = vec![false; model.dim];
    for (pos, &v) in sequence.vertices().iter().enumerate() {
        let j = g - pos as u32; // position pos+1 carries radius g - (pos+1)
        bits[model.x_id(v + 1, j)] = true;
    }
    let fs = crate::burning::fire_sources(graph, sequence);
    for i in 1..=n {
        let mut slack = fs.counts[i as usize - 1].saturating_sub(1);
        for l in 1..=slack_bits {
            if slack & 1 == 1 {
                bits[(g * n + (i - 1) * slack_bits + (l - 1)) as usize] = true;
            }
            slack >>= 1;
        }
    }
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::Rat;

    fn path(n: usize) -> Graph {
        Graph::generate_path(n).unwrap()
    }

    #[test]
    fn squbo_dimensions() {
        let m: QuboModel<Rat> = build_squbo(&path(9), 3).unwrap();
        assert_eq!(m.dim, 27 + 9 * 2);
        let m1: QuboModel<Rat> = build_squbo(&path(5), 1).unwrap();
        assert_eq!(m1.dim, 5); // ceil(log2 1) = 0 slack bits
    }

    #[test]
    fn uqubo_dimensions() {
        let pc = default_penalties::<Rat>(&path(9), 3, None).unwrap();
        let m = build_uqubo(&path(9), 3, &pc).unwrap();
        assert_eq!(m.dim, 27);
    }

    #[test]
    fn q_is_upper_triangular() {
        let m: QuboModel<Rat> = build_squbo(&path(5), 2).unwrap();
        assert!(m.q.keys().all(|&(a, b)| a <= b));
    }

    #[test]
    fn squbo_known_zero_energy_state() {
        // P9 optimal sources (1-based v3, v7, v9) with coverage slacks.
        let g = path(9);
        let m: QuboModel<Rat> = build_squbo(&g, 3).unwrap();
        let seq = BurningSequence::new(vec![2, 6, 8]);
        let bits = squbo_assignment_for(&g, &m, &seq).unwrap();
        assert_eq!(energy(&m, &bits).unwrap(), Rat::from_int(0));
    }

    #[test]
    fn energy_trivial_cases() {
        let m: QuboModel<Rat> = build_squbo(&path(3), 2).unwrap();
        let zero = vec![false; m.dim];
        assert_eq!(energy(&m, &zero).unwrap(), m.offset);
    }

    #[test]
    fn uniform_penalties_match_closed_form() {
        let g = path(9);
        let pc = default_penalties::<Rat>(&g, 3, None).unwrap();
        assert_eq!(pc.lambda1, Rat::from_int(1));
        assert!(pc.lambda2.iter().all(|l| *l == Rat::new(1, 2)));
        // P = 0.5 n + 1 at g = 3.
        assert_eq!(pc.p, Rat::new(9, 2) + Rat::from_int(1));
        // f(1 - g) = lambda1 (1-g) + lambda2 (1-g)^2 = 0 exactly.
        let h = Rat::from_int(1 - 3);
        assert_eq!(pc.lambda1 * h + pc.lambda2[0] * h * h, Rat::from_int(0));
    }

    #[test]
    fn guided_penalties_handle_single_source() {
        let g = path(5);
        let seq = BurningSequence::new(vec![2, 0, 4]);
        let fs = crate::burning::fire_sources(&g, &seq);
        let pc = default_penalties::<Rat>(&g, 3, Some(&fs)).unwrap();
        for (i, &l) in fs.counts.iter().enumerate() {
            if l == 1 {
                assert_eq!(pc.lambda2[i], Rat::from_int(1));
            } else {
                assert_eq!(pc.lambda2[i], Rat::new(1, l as i64 - 1));
            }
        }
    }

    #[test]
    fn uniform_mode_rejects_g1() {
        assert!(matches!(
            default_penalties::<Rat>(&path(3), 1, None),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn uqubo_all_zero_energy() {
        let g = path(9);
        let pc = default_penalties::<Rat>(&g, 3, None).unwrap();
        let m = build_uqubo(&g, 3, &pc).unwrap();
        let zero = vec![false; m.dim];
        let expect =
            pc.p * Rat::from_int(3) + pc.lambda2.iter().fold(Rat::from_int(0), |a, l| a + l) + Rat::from_int(9);
        assert_eq!(energy(&m, &zero).unwrap(), expect);
    }

    #[test]
    fn decode_reports_column_multiplicity() {
        let g = path(4);
        let m: QuboModel<Rat> = build_squbo(&g, 2).unwrap();
        let mut bits = vec![false; m.dim];
        bits[m.x_id(1, 1)] = true;
        bits[m.x_id(2, 1)] = true;
        bits[m.x_id(3, 2)] = true;
        let d = decode_qubo(&g, &m, &bits).unwrap();
        assert!(d.sequence.is_none());
        assert_eq!(d.column_violations, vec![(1, 2)]);
    }

    #[test]
    fn decode_reports_invalid_sequences() {
        let g = path(5);
        let m: QuboModel<Rat> = build_squbo(&g, 2).unwrap();
        let mut bits = vec![false; m.dim];
        bits[m.x_id(1, 1)] = true;
        bits[m.x_id(1, 2)] = true;
        let d = decode_qubo(&g, &m, &bits).unwrap();
        assert_eq!(d.valid, Some(false));
        assert_eq!(d.sequence.unwrap().vertices(), &[0, 0]);
    }
}
