//! Built-in exact solver for the formulation-shaped models.
//!
//! Structure is recovered from the model itself (variable roles and
//! constraint roles), never from the originating graph, so partially
//! materialized models (the row-generation relaxations) are solved exactly
//! as written. Coverage-shaped models reduce to the one-pick-per-column
//! search; the propagation MILP enumerates source choices per step and
//! closes the burn variables upward; anything else falls back to a bounded
//! depth-first branch-and-bound over binaries.

use super::DEFAULT_NODE_BUDGET;
use crate::cover::{Candidate, BitSet, CoverInstance};
use crate::error::Error;
use crate::formulations::{
    Assignment, ConstraintRole, LinearModel, ModelKind, Relation, Sense, VarRole,
};
use crate::scalar::Scalar;
use crate::Result;

/// Binary-variable cap for the generic branch-and-bound path.
pub const GENERIC_BINARY_LIMIT: usize = 40;

/// Solves the model to proven optimality. Satisfaction models return any
/// feasible assignment or [`Error::Infeasible`].
pub fn internal_ilp_solve<S: Scalar>(
    model: &LinearModel<S>,
    node_budget: u64,
) -> Result<Assignment<S>> {
    let budget = if node_budget == 0 { DEFAULT_NODE_BUDGET } else { node_budget };
    match model.kind {
        ModelKind::CovCsp { n, g } => solve_cov_csp(model, n, g, budget),
        ModelKind::CovIlp { n, g } => solve_cov_ilp(model, n, g, budget),
        ModelKind::GbpIlp { n, u } => solve_gbp_ilp(model, n, u, budget),
        ModelKind::PropMilp { n, u } => solve_prop_milp(model, n, u, budget),
        ModelKind::General => solve_generic(model, budget),
    }
}

/// Column candidates from coverage-style rows: `rows[t]` is the t-th
/// coverage row; the ball of `x(k, j)` is every row whose body mentions it
/// with the expected sign.
fn extract_columns<S: Scalar>(
    model: &LinearModel<S>,
    n: u32,
    columns: &[u32],
    row_filter: impl Fn(&ConstraintRole) -> bool,
    term_sign_negative: bool,
) -> (Vec<Vec<Candidate>>, usize, Vec<u32>) {
    let rows: Vec<usize> = model
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| row_filter(&c.role))
        .map(|(idx, _)| idx)
        .collect();
    let target_count = rows.len();
    let row_vertices: Vec<u32> = rows
        .iter()
        .map(|&idx| match model.constraints[idx].role {
            ConstraintRole::Coverage { i } | ConstraintRole::Counted { i } => i - 1,
            _ => unreachable!("filtered to coverage-style rows"),
        })
        .collect();

    // masks[col][vertex] over the row indices.
    let col_pos = |j: u32| columns.iter().position(|&c| c == j);
    let mut masks: Vec<Vec<BitSet>> = columns
        .iter()
        .map(|_| (0..n).map(|_| BitSet::new(target_count)).collect())
        .collect();
    for (t, &idx) in rows.iter().enumerate() {
        for (var, coeff) in &model.constraints[idx].terms {
            let negative = *coeff < S::zero();
            if negative != term_sign_negative {
                continue;
            }
            if let VarRole::Cover { i, j } = model.var_map.role_of(*var) {
                if let Some(p) = col_pos(j) {
                    masks[p][i as usize - 1].insert(t);
                }
            }
        }
    }

    let cols = masks
        .into_iter()
        .map(|col| {
            col.into_iter()
                .enumerate()
                .map(|(v, mask)| {
                    let size = mask.count();
                    Candidate {
                        vertex: v as u32,
                        mask,
                        size,
                    }
                })
                .collect()
        })
        .collect();
    (cols, target_count, row_vertices)
}

fn zero_values<S: Scalar>(model: &LinearModel<S>) -> Vec<S> {
    vec![S::zero(); model.variables.len()]
}

fn set_cover_picks<S: Scalar>(
    model: &LinearModel<S>,
    values: &mut [S],
    columns: &[u32],
    selection: &[u32],
) {
    for (pos, &j) in columns.iter().enumerate() {
        let i = selection[pos] + 1;
        let id = model.var_map.id_of(VarRole::Cover { i, j }).expect("declared");
        values[id] = S::one();
    }
}

fn solve_cov_csp<S: Scalar>(
    model: &LinearModel<S>,
    n: u32,
    g: u32,
    budget: u64,
) -> Result<Assignment<S>> {
    // Columns big radius first: j = g down to 1.
    let columns: Vec<u32> = (1..=g).rev().collect();
    let (cols, targets, _) = extract_columns(
        model,
        n,
        &columns,
        |r| matches!(r, ConstraintRole::Coverage { .. }),
        false,
    );
    let inst = CoverInstance::from_columns(cols, targets, targets);
    let out = inst.maximize(budget, targets)?;
    if out.covered < targets {
        return Err(Error::Infeasible);
    }
    let selection = inst.lex_selection(targets, budget)?.expect("feasible");
    let mut values = zero_values(model);
    set_cover_picks(model, &mut values, &columns, &selection);
    Ok(Assignment {
        objective_value: model.objective_value(&values),
        values,
    })
}

fn solve_cov_ilp<S: Scalar>(
    model: &LinearModel<S>,
    n: u32,
    g: u32,
    budget: u64,
) -> Result<Assignment<S>> {
    // Columns 2..=g hold radii 1..=g-1; column 1 only counts coverage.
    let columns: Vec<u32> = (2..=g).rev().collect();
    let (cols, targets, row_vertices) = extract_columns(
        model,
        n,
        &columns,
        |r| matches!(r, ConstraintRole::Counted { .. }),
        true,
    );
    let inst = CoverInstance::from_columns(cols, targets, targets);
    let out = inst.solve_lex(budget)?;
    let mut values = zero_values(model);
    set_cover_picks(model, &mut values, &columns, &out.selection);
    // Counters follow the cover: x_{i,1} = 1 exactly on covered rows.
    let mut covered = BitSet::new(targets);
    for (pos, _) in columns.iter().enumerate() {
        let cand = inst.columns[pos]
            .candidates
            .iter()
            .find(|c| c.vertex == out.selection[pos])
            .expect("selection vertices come from the candidate list");
        covered.union_with(&cand.mask);
    }
    for t in covered.iter_ones() {
        let i = row_vertices[t] + 1;
        let id = model.var_map.id_of(VarRole::Cover { i, j: 1 }).expect("declared");
        values[id] = S::one();
    }
    Ok(Assignment {
        objective_value: model.objective_value(&values),
        values,
    })
}

fn solve_gbp_ilp<S: Scalar>(
    model: &LinearModel<S>,
    n: u32,
    u: u32,
    budget: u64,
) -> Result<Assignment<S>> {
    for t in 1..=u {
        // Prefix of length t uses columns t..1, radius descending.
        let columns: Vec<u32> = (1..=t).rev().collect();
        let (cols, targets, _) = extract_columns(
            model,
            n,
            &columns,
            |r| matches!(r, ConstraintRole::Coverage { .. }),
            false,
        );
        let inst = CoverInstance::from_columns(cols, targets, targets);
        let out = inst.maximize(budget, targets)?;
        if out.covered == targets {
            let selection = inst.lex_selection(targets, budget)?.expect("feasible");
            let mut values = zero_values(model);
            set_cover_picks(model, &mut values, &columns, &selection);
            return Ok(Assignment {
                objective_value: model.objective_value(&values),
                values,
            });
        }
    }
    Err(Error::Infeasible)
}

/// Closed neighborhoods recovered from the propagation rows at step 2.
fn extract_closed_neighborhoods<S: Scalar>(model: &LinearModel<S>, n: u32) -> Vec<Vec<u32>> {
    let mut closed: Vec<Vec<u32>> = (0..n).map(|_| Vec::new()).collect();
    for c in &model.constraints {
        if let ConstraintRole::Propagation { i, j: 2 } = c.role {
            for (var, _) in &c.terms {
                if let VarRole::Burn { i: k, j: 1 } = model.var_map.role_of(*var) {
                    closed[i as usize - 1].push(k - 1);
                }
            }
        }
    }
    for l in &mut closed {
        l.sort_unstable();
    }
    closed
}

fn solve_prop_milp<S: Scalar>(
    model: &LinearModel<S>,
    n: u32,
    u: u32,
    budget: u64,
) -> Result<Assignment<S>> {
    let closed = if u >= 2 {
        extract_closed_neighborhoods(model, n)
    } else {
        (0..n).map(|_| Vec::new()).collect()
    };

    struct Dfs<'a> {
        closed: &'a [Vec<u32>],
        n: u32,
        u: u32,
        nodes: u64,
        budget: u64,
        best_z: u32,
        best_seq: Vec<u32>,
        seq: Vec<u32>,
    }

    impl Dfs<'_> {
        /// `burned[v]` holds the step at which v burned (0 = unburned).
        fn descend(&mut self, burned: &[u32], burn_step: &mut Vec<u32>) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Capacity(format!(
                    "propagation search exceeded {} nodes",
                    self.budget
                )));
            }
            let step = self.seq.len() as u32 + 1;
            // Unburned vertices accrue one miss per elapsed step; the final
            // z cannot undercut the misses already fixed.
            let lower = if burned.iter().all(|&b| b != 0) {
                let z = burned
                    .iter()
                    .map(|&b| b - 1)
                    .max()
                    .unwrap_or(0);
                if z < self.best_z {
                    self.best_z = z;
                    self.best_seq = self.seq.clone();
                }
                return Ok(());
            } else {
                step - 1
            };
            if step > self.u || lower >= self.best_z {
                return Ok(());
            }

            for v in 0..self.n {
                // Spread one round, then inject v.
                burn_step.clear();
                burn_step.extend_from_slice(burned);
                for (w, &b) in burned.iter().enumerate() {
                    if b != 0 {
                        for &x in &self.closed[w] {
                            if burn_step[x as usize] == 0 {
                                burn_step[x as usize] = step;
                            }
                        }
                    }
                }
                if burn_step[v as usize] == 0 {
                    burn_step[v as usize] = step;
                }
                self.seq.push(v);
                let snapshot = burn_step.clone();
                self.descend(&snapshot, burn_step)?;
                self.seq.pop();
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        closed: &closed,
        n,
        u,
        nodes: 0,
        budget,
        best_z: u,
        best_seq: Vec::new(),
        seq: Vec::new(),
    };
    let burned = vec![0u32; n as usize];
    let mut scratch = Vec::new();
    dfs.descend(&burned, &mut scratch)?;

    if dfs.best_seq.is_empty() && n > 1 {
        // No full burn within U steps: the tightest z is U (every step
        // missed by some vertex); pad with vertex 0 picks.
        dfs.best_seq = Vec::new();
    }

    // Reconstruct the full assignment: sources, maximal burn closure, z.
    let mut values = zero_values(model);
    let mut burned = vec![0u32; n as usize];
    let mut z_val = 0u32;
    for j in 1..=u {
        let pick = dfs.best_seq.get(j as usize - 1).copied().unwrap_or(0);
        let id = model
            .var_map
            .id_of(VarRole::Sequence { i: pick + 1, j })
            .expect("declared");
        values[id] = S::one();
        let prev = burned.clone();
        for (w, &b) in prev.iter().enumerate() {
            if b != 0 {
                for &x in &closed[w] {
                    if burned[x as usize] == 0 {
                        burned[x as usize] = j;
                    }
                }
            }
        }
        if burned[pick as usize] == 0 {
            burned[pick as usize] = j;
        }
        for (w, &b) in burned.iter().enumerate() {
            if b != 0 {
                let id = model
                    .var_map
                    .id_of(VarRole::Burn { i: w as u32 + 1, j })
                    .expect("declared");
                values[id] = S::one();
            }
        }
    }
    for &b in &burned {
        let misses = if b == 0 { u } else { b - 1 };
        z_val = z_val.max(misses);
    }
    let z_id = model.var_map.id_of(VarRole::Z).expect("declared");
    values[z_id] = S::from_int(z_val as i64);
    Ok(Assignment {
        objective_value: model.objective_value(&values),
        values,
    })
}

/// Depth-first branch-and-bound over pure binary models with bound
/// propagation per constraint and an objective bound from the unset
/// variables' one-sided sums.
fn solve_generic<S: Scalar>(model: &LinearModel<S>, budget: u64) -> Result<Assignment<S>> {
    let n = model.variables.len();
    if model
        .variables
        .iter()
        .any(|v| v.kind != crate::formulations::VarKind::Binary)
    {
        return Err(Error::Parameter(
            "the generic path handles pure binary models only".into(),
        ));
    }
    if n > GENERIC_BINARY_LIMIT {
        return Err(Error::Capacity(format!(
            "generic branch-and-bound limited to {GENERIC_BINARY_LIMIT} binaries (model has {n})"
        )));
    }

    struct Bb<'a, S> {
        model: &'a LinearModel<S>,
        assignment: Vec<bool>,
        best: Option<(S, Vec<bool>)>,
        nodes: u64,
        budget: u64,
    }

    impl<S: Scalar> Bb<'_, S> {
        fn feasible_bounds(&self, fixed: usize) -> bool {
            for c in &self.model.constraints {
                let mut lo = S::zero();
                let mut hi = S::zero();
                for (var, coeff) in &c.terms {
                    if *var < fixed {
                        if self.assignment[*var] {
                            lo += coeff.clone();
                            hi += coeff.clone();
                        }
                    } else if *coeff > S::zero() {
                        hi += coeff.clone();
                    } else {
                        lo += coeff.clone();
                    }
                }
                let ok = match c.relation {
                    Relation::Le => lo <= c.rhs,
                    Relation::Ge => hi >= c.rhs,
                    Relation::Eq => lo <= c.rhs && hi >= c.rhs,
                };
                if !ok {
                    return false;
                }
            }
            true
        }

        fn objective_bound(&self, fixed: usize) -> S {
            let minimizing = self.model.objective.sense != Sense::Maximize;
            let mut bound = S::zero();
            for (var, coeff) in &self.model.objective.terms {
                if *var < fixed {
                    if self.assignment[*var] {
                        bound += coeff.clone();
                    }
                } else if minimizing {
                    if *coeff < S::zero() {
                        bound += coeff.clone();
                    }
                } else if *coeff > S::zero() {
                    bound += coeff.clone();
                }
            }
            bound
        }

        fn improves(&self, value: &S) -> bool {
            match (&self.best, self.model.objective.sense) {
                (None, _) => true,
                (Some((b, _)), Sense::Maximize) => value > b,
                (Some((b, _)), _) => value < b,
            }
        }

        fn descend(&mut self, fixed: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Capacity(format!(
                    "branch-and-bound exceeded {} nodes",
                    self.budget
                )));
            }
            if !self.feasible_bounds(fixed) {
                return Ok(());
            }
            let bound = self.objective_bound(fixed);
            if self.best.is_some() && !self.improves(&bound) {
                return Ok(());
            }
            if fixed == self.assignment.len() {
                let vals: Vec<S> = self
                    .assignment
                    .iter()
                    .map(|&b| if b { S::one() } else { S::zero() })
                    .collect();
                let value = self.model.objective_value(&vals);
                if self.improves(&value) {
                    self.best = Some((value, self.assignment.clone()));
                }
                return Ok(());
            }
            for b in [false, true] {
                self.assignment[fixed] = b;
                self.descend(fixed + 1)?;
            }
            self.assignment[fixed] = false;
            Ok(())
        }
    }

    let mut bb = Bb {
        model,
        assignment: vec![false; n],
        best: None,
        nodes: 0,
        budget,
    };
    bb.descend(0)?;
    match bb.best {
        None => Err(Error::Infeasible),
        Some((value, bits)) => Ok(Assignment {
            objective_value: value,
            values: bits
                .into_iter()
                .map(|b| if b { S::one() } else { S::zero() })
                .collect(),
        }),
    }
}
