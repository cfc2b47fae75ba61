//! Solver-agnostic linear models for the four formulations and their
//! decoding back to burning sequences.
//!
//! * `PROP-MILP`: binary `s_{i,j}` (sequence) and `b_{i,j}` (burned) over
//!   steps `1..=U` plus a continuous `z`; minimizes the largest per-vertex
//!   count of unburned steps, so the burning number is `z + 1`.
//! * `COV-CSP`: binary `x_{i,j}` where column `j` carries coverage radius
//!   `j-1`; pure satisfaction, feasible iff a length-`g` sequence exists.
//! * `COV-ILP`: like the CSP but column 1 counts covered vertices and the
//!   objective maximizes it; always feasible.
//! * `GBP-ILP`: columns `1..=U`, non-increasing column sums capped at one,
//!   full coverage required; the optimal objective is the burning number.
//!
//! Variable names follow the `s_i_j` / `b_i_j` / `x_i_j` / `z` convention
//! with 1-based indices.

mod build;
mod lp;

pub use build::{
    add_coverage_rows, build_cov_csp, build_cov_ilp, build_gbp_ilp, build_gbp_ilp_partial,
    build_prop_milp,
};
pub use lp::{write_lp, write_lp_file};

use crate::burning::BurningSequence;
use crate::error::Error;
use crate::scalar::Scalar;
use crate::Result;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Clone, Debug)]
pub struct Variable<S> {
    pub name: String,
    pub kind: VarKind,
    pub lower: Option<S>,
    pub upper: Option<S>,
}

/// Structured identity of a variable: role plus 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarRole {
    /// `s_i_j`: vertex i is the j-th fire source.
    Sequence { i: u32, j: u32 },
    /// `b_i_j`: vertex i is burned after step j.
    Burn { i: u32, j: u32 },
    /// `x_i_j`: vertex i picked for column j (coverage radius j-1).
    Cover { i: u32, j: u32 },
    /// `z`: bound on unburned steps per vertex.
    Z,
}

impl VarRole {
    pub fn name(&self) -> String {
        match *self {
            VarRole::Sequence { i, j } => format!("s_{i}_{j}"),
            VarRole::Burn { i, j } => format!("b_{i}_{j}"),
            VarRole::Cover { i, j } => format!("x_{i}_{j}"),
            VarRole::Z => "z".into(),
        }
    }
}

/// Bijection between structured variable identities and flat ids.
#[derive(Clone, Debug, Default)]
pub struct VarMap {
    keys: Vec<VarRole>,
    lookup: BTreeMap<VarRole, usize>,
}

impl VarMap {
    pub fn push(&mut self, role: VarRole) -> usize {
        let id = self.keys.len();
        let prev = self.lookup.insert(role, id);
        debug_assert!(prev.is_none(), "duplicate variable {role:?}");
        self.keys.push(role);
        id
    }

    pub fn role_of(&self, id: usize) -> VarRole {
        self.keys[id]
    }

    pub fn id_of(&self, role: VarRole) -> Option<usize> {
        self.lookup.get(&role).copied()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
    /// Pure satisfaction; the LP writer emits an empty objective.
    Satisfy,
}

#[derive(Clone, Debug)]
pub struct Objective<S> {
    pub sense: Sense,
    pub terms: Vec<(usize, S)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// Structured identity of a constraint row, used by the internal solver to
/// recover the column/coverage structure without the originating graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintRole {
    /// Propagation link for vertex i at step j.
    Propagation { i: u32, j: u32 },
    /// Exactly one pick in column j.
    OnePerColumn { j: u32 },
    /// Unburned-step deadline for vertex i.
    Deadline { i: u32 },
    /// At most one pick in column j.
    ColumnCap { j: u32 },
    /// Column j's sum does not exceed column j-1's.
    ColumnChain { j: u32 },
    /// Vertex i must be covered by some picked ball.
    Coverage { i: u32 },
    /// Vertex i's counter is capped by its coverage.
    Counted { i: u32 },
    Other,
}

#[derive(Clone, Debug)]
pub struct Constraint<S> {
    pub name: String,
    pub role: ConstraintRole,
    pub terms: Vec<(usize, S)>,
    pub relation: Relation,
    pub rhs: S,
}

/// Which formulation a model encodes, with its shape parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    PropMilp { n: u32, u: u32 },
    CovCsp { n: u32, g: u32 },
    CovIlp { n: u32, g: u32 },
    GbpIlp { n: u32, u: u32 },
    General,
}

impl ModelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::PropMilp { .. } => "prop-milp",
            ModelKind::CovCsp { .. } => "cov-csp",
            ModelKind::CovIlp { .. } => "cov-ilp",
            ModelKind::GbpIlp { .. } => "gbp-ilp",
            ModelKind::General => "general",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinearModel<S> {
    pub name: String,
    pub kind: ModelKind,
    pub variables: Vec<Variable<S>>,
    pub objective: Objective<S>,
    pub constraints: Vec<Constraint<S>>,
    pub var_map: VarMap,
}

impl<S: Scalar> LinearModel<S> {
    pub fn binary_count(&self) -> usize {
        self.variables
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count()
    }

    pub fn continuous_count(&self) -> usize {
        self.variables
            .iter()
            .filter(|v| v.kind == VarKind::Continuous)
            .count()
    }

    /// Checks that every constraint references declared variables only and
    /// that the var map is a bijection over the variables.
    pub fn check_consistency(&self) -> bool {
        let n = self.variables.len();
        self.var_map.len() == n
            && self
                .constraints
                .iter()
                .flat_map(|c| c.terms.iter())
                .all(|&(id, _)| id < n)
            && self.objective.terms.iter().all(|&(id, _)| id < n)
    }

    /// Objective value of an assignment under this model's objective row.
    pub fn objective_value(&self, values: &[S]) -> S {
        self.objective
            .terms
            .iter()
            .fold(S::zero(), |acc, (id, c)| acc + c.clone() * values[*id].clone())
    }

    /// True when `values` satisfies every constraint exactly (used by tests
    /// and by the internal solver's cross-checks).
    pub fn is_feasible(&self, values: &[S]) -> bool {
        self.constraints.iter().all(|c| {
            let lhs = c
                .terms
                .iter()
                .fold(S::zero(), |acc, (id, coeff)| acc + coeff.clone() * values[*id].clone());
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }
}

/// Variable values plus the objective they achieve.
#[derive(Clone, Debug)]
pub struct Assignment<S> {
    pub values: Vec<S>,
    pub objective_value: S,
}

/// Integrality tolerance for decoding external-solver assignments.
fn binary_value<S: Scalar>(v: &S) -> Result<bool> {
    let tol = S::ratio(1, 1_000_000);
    if (v.clone() - S::zero()).abs() <= tol {
        Ok(false)
    } else if (v.clone() - S::one()).abs() <= tol {
        Ok(true)
    } else {
        Err(Error::Decode(format!("fractional binary value {v}")))
    }
}

/// Decodes a feasible assignment of any formulation into a burning sequence.
///
/// COV-ILP assignments with objective below `n - 1` carry no burning
/// sequence and decode to [`Error::NoBurningSequence`], which is what drives
/// the binary search upward.
pub fn decode<S: Scalar>(model: &LinearModel<S>, a: &Assignment<S>) -> Result<BurningSequence> {
    if a.values.len() != model.variables.len() {
        return Err(Error::Decode(format!(
            "assignment has {} values for {} variables",
            a.values.len(),
            model.variables.len()
        )));
    }
    match model.kind {
        ModelKind::PropMilp { n, u } => decode_prop(model, a, n, u),
        ModelKind::CovCsp { n, g } => decode_columns(model, a, n, g, 1).map(|cols| {
            let mut seq = cols;
            seq.reverse();
            BurningSequence::new(seq)
        }),
        ModelKind::CovIlp { n, g } => decode_cov_ilp(model, a, n, g),
        ModelKind::GbpIlp { n, u } => decode_gbp(model, a, n, u),
        ModelKind::General => Err(Error::Decode(
            "general models carry no burning-sequence encoding".into(),
        )),
    }
}

/// Reads the picked vertex of each column `first_col..=g`, 0-based vertices,
/// in column order.
fn decode_columns<S: Scalar>(
    model: &LinearModel<S>,
    a: &Assignment<S>,
    n: u32,
    g: u32,
    first_col: u32,
) -> Result<Vec<u32>> {
    let mut picks = Vec::with_capacity((g + 1 - first_col) as usize);
    for j in first_col..=g {
        let mut pick = None;
        for i in 1..=n {
            let id = model
                .var_map
                .id_of(VarRole::Cover { i, j })
                .ok_or_else(|| Error::Decode(format!("missing variable x_{i}_{j}")))?;
            if binary_value(&a.values[id])? {
                if pick.is_some() {
                    return Err(Error::Decode(format!("column {j} picks more than one vertex")));
                }
                pick = Some(i - 1);
            }
        }
        picks.push(pick.ok_or_else(|| Error::Decode(format!("column {j} picks no vertex")))?);
    }
    Ok(picks)
}

fn decode_prop<S: Scalar>(
    model: &LinearModel<S>,
    a: &Assignment<S>,
    n: u32,
    u: u32,
) -> Result<BurningSequence> {
    let z_id = model
        .var_map
        .id_of(VarRole::Z)
        .ok_or_else(|| Error::Decode("missing z".into()))?;
    let z = a.values[z_id].round_to_i64();
    if z < 0 || z as u32 >= u {
        return Err(Error::Decode(format!("z = {z} outside [0, U)")));
    }
    let len = z as u32 + 1;
    let mut seq = Vec::with_capacity(len as usize);
    for j in 1..=len {
        let mut pick = None;
        for i in 1..=n {
            let id = model
                .var_map
                .id_of(VarRole::Sequence { i, j })
                .ok_or_else(|| Error::Decode(format!("missing variable s_{i}_{j}")))?;
            if binary_value(&a.values[id])? {
                if pick.is_some() {
                    return Err(Error::Decode(format!("step {j} picks more than one vertex")));
                }
                pick = Some(i - 1);
            }
        }
        seq.push(pick.ok_or_else(|| Error::Decode(format!("step {j} picks no vertex")))?);
    }
    Ok(BurningSequence::new(seq))
}

fn decode_cov_ilp<S: Scalar>(
    model: &LinearModel<S>,
    a: &Assignment<S>,
    n: u32,
    g: u32,
) -> Result<BurningSequence> {
    let mut covered = 0u32;
    let mut uncounted = None;
    for i in 1..=n {
        let id = model
            .var_map
            .id_of(VarRole::Cover { i, j: 1 })
            .ok_or_else(|| Error::Decode(format!("missing variable x_{i}_1")))?;
        if binary_value(&a.values[id])? {
            covered += 1;
        } else {
            uncounted = Some(i - 1);
        }
    }
    let last = if covered == n {
        0u32
    } else if covered + 1 == n {
        uncounted.expect("one counter is zero")
    } else {
        return Err(Error::NoBurningSequence);
    };
    let mut seq = if g >= 2 {
        let mut picks = decode_columns(model, a, n, g, 2)?;
        picks.reverse();
        picks
    } else {
        Vec::new()
    };
    seq.push(last);
    Ok(BurningSequence::new(seq))
}

fn decode_gbp<S: Scalar>(
    model: &LinearModel<S>,
    a: &Assignment<S>,
    n: u32,
    u: u32,
) -> Result<BurningSequence> {
    let mut picks: Vec<Option<u32>> = vec![None; u as usize];
    for j in 1..=u {
        for i in 1..=n {
            let id = model
                .var_map
                .id_of(VarRole::Cover { i, j })
                .ok_or_else(|| Error::Decode(format!("missing variable x_{i}_{j}")))?;
            if binary_value(&a.values[id])? {
                if picks[j as usize - 1].is_some() {
                    return Err(Error::Decode(format!("column {j} picks more than one vertex")));
                }
                picks[j as usize - 1] = Some(i - 1);
            }
        }
    }
    let used = picks.iter().take_while(|p| p.is_some()).count();
    if picks.iter().skip(used).any(|p| p.is_some()) {
        return Err(Error::Decode("used columns do not form a prefix".into()));
    }
    if used == 0 {
        return Err(Error::Decode("no column is used".into()));
    }
    let mut seq: Vec<u32> = picks[..used].iter().map(|p| p.unwrap()).collect();
    seq.reverse();
    Ok(BurningSequence::new(seq))
}
