//! Builders for the four linear formulations.
//!
//! Builders are pure: the same graph and parameter always produce the same
//! model, including variable and constraint ordering. Coverage rows are
//! assembled from one bounded BFS per vertex (balls at radius `r` are
//! prefixes of the BFS visit order).

use super::{
    Constraint, ConstraintRole, LinearModel, ModelKind, Objective, Relation, Sense, VarKind,
    VarMap, VarRole, Variable,
};
use crate::error::Error;
use crate::graph::Graph;
use crate::scalar::Scalar;
use crate::Result;
use std::collections::BTreeSet;

fn binary_var<S: Scalar>(role: VarRole, map: &mut VarMap, vars: &mut Vec<Variable<S>>) -> usize {
    let id = map.push(role);
    vars.push(Variable {
        name: role.name(),
        kind: VarKind::Binary,
        lower: None,
        upper: None,
    });
    id
}

/// Coverage row body for vertex `i` (1-based): one term per `(k, j)` with
/// `d(v_k, v_i) <= j - 1`, for `j` in `col_range`, coefficient one. Terms
/// come out ascending in flat id.
fn coverage_terms<S: Scalar>(
    graph: &Graph,
    map: &VarMap,
    i: u32,
    cols: std::ops::RangeInclusive<u32>,
    dist: &mut Vec<u32>,
    visited: &mut Vec<u32>,
) -> Vec<(usize, S)> {
    let max_radius = *cols.end() - 1;
    graph.bfs_bounded(i - 1, max_radius, dist, visited);
    let mut terms = Vec::new();
    for j in cols {
        let radius = j - 1;
        let mut ball: Vec<u32> = visited
            .iter()
            .copied()
            .filter(|&u| dist[u as usize] <= radius)
            .collect();
        ball.sort_unstable();
        for k in ball {
            let id = map.id_of(VarRole::Cover { i: k + 1, j }).expect("declared");
            terms.push((id, S::one()));
        }
    }
    terms
}

/// PROP-MILP over steps `1..=U`: minimize the continuous bound `z` on each
/// vertex's count of unburned steps.
pub fn build_prop_milp<S: Scalar>(graph: &Graph, u: u32) -> Result<LinearModel<S>> {
    if u < 1 {
        return Err(Error::Parameter("PROP-MILP needs U >= 1".into()));
    }
    let n = graph.vertex_count() as u32;
    let mut map = VarMap::default();
    let mut vars: Vec<Variable<S>> = Vec::with_capacity((2 * u * n + 1) as usize);
    for j in 1..=u {
        for i in 1..=n {
            binary_var(VarRole::Sequence { i, j }, &mut map, &mut vars);
        }
    }
    for j in 1..=u {
        for i in 1..=n {
            binary_var(VarRole::Burn { i, j }, &mut map, &mut vars);
        }
    }
    let z_id = map.push(VarRole::Z);
    vars.push(Variable {
        name: "z".into(),
        kind: VarKind::Continuous,
        lower: Some(S::zero()),
        upper: None,
    });

    let mut constraints = Vec::with_capacity((u * n + u + n) as usize);
    // Burn only with a source or a previously burned closed neighbor;
    // b_{i,0} = 0 folds the j = 1 case down to b <= s.
    for j in 1..=u {
        for i in 1..=n {
            let mut terms: Vec<(usize, S)> = Vec::new();
            terms.push((
                map.id_of(VarRole::Sequence { i, j }).unwrap(),
                -S::one(),
            ));
            if j > 1 {
                let mut closed: Vec<u32> = graph.neighbors(i - 1).to_vec();
                closed.push(i - 1);
                closed.sort_unstable();
                for k in closed {
                    terms.push((
                        map.id_of(VarRole::Burn { i: k + 1, j: j - 1 }).unwrap(),
                        -S::one(),
                    ));
                }
            }
            terms.push((map.id_of(VarRole::Burn { i, j }).unwrap(), S::one()));
            terms.sort_by_key(|t| t.0);
            constraints.push(Constraint {
                name: format!("prop_{i}_{j}"),
                role: ConstraintRole::Propagation { i, j },
                terms,
                relation: Relation::Le,
                rhs: S::zero(),
            });
        }
    }
    // One fire source per step.
    for j in 1..=u {
        let terms = (1..=n)
            .map(|i| (map.id_of(VarRole::Sequence { i, j }).unwrap(), S::one()))
            .collect();
        constraints.push(Constraint {
            name: format!("pick_{j}"),
            role: ConstraintRole::OnePerColumn { j },
            terms,
            relation: Relation::Eq,
            rhs: S::one(),
        });
    }
    // Unburned steps bounded by z: sum_j (1 - b_{i,j}) <= z.
    for i in 1..=n {
        let mut terms: Vec<(usize, S)> = (1..=u)
            .map(|j| (map.id_of(VarRole::Burn { i, j }).unwrap(), -S::one()))
            .collect();
        terms.push((z_id, -S::one()));
        constraints.push(Constraint {
            name: format!("deadline_{i}"),
            role: ConstraintRole::Deadline { i },
            terms,
            relation: Relation::Le,
            rhs: -S::from_int(u as i64),
        });
    }

    Ok(LinearModel {
        name: format!("prop-milp n={n} U={u}"),
        kind: ModelKind::PropMilp { n, u },
        variables: vars,
        objective: Objective {
            sense: Sense::Minimize,
            terms: vec![(z_id, S::one())],
        },
        constraints,
        var_map: map,
    })
}

/// COV-CSP: satisfaction model, feasible iff a burning sequence of length
/// `g` exists.
pub fn build_cov_csp<S: Scalar>(graph: &Graph, g: u32) -> Result<LinearModel<S>> {
    if g < 1 {
        return Err(Error::Parameter("COV-CSP needs g >= 1".into()));
    }
    let n = graph.vertex_count() as u32;
    let mut map = VarMap::default();
    let mut vars = Vec::with_capacity((g * n) as usize);
    for j in 1..=g {
        for i in 1..=n {
            binary_var::<S>(VarRole::Cover { i, j }, &mut map, &mut vars);
        }
    }

    let mut constraints = Vec::with_capacity((g + n) as usize);
    for j in 1..=g {
        let terms = (1..=n)
            .map(|i| (map.id_of(VarRole::Cover { i, j }).unwrap(), S::one()))
            .collect();
        constraints.push(Constraint {
            name: format!("onecol_{j}"),
            role: ConstraintRole::OnePerColumn { j },
            terms,
            relation: Relation::Eq,
            rhs: S::one(),
        });
    }
    let mut dist = Vec::new();
    let mut visited = Vec::new();
    for i in 1..=n {
        let terms = coverage_terms(graph, &map, i, 1..=g, &mut dist, &mut visited);
        constraints.push(Constraint {
            name: format!("cover_{i}"),
            role: ConstraintRole::Coverage { i },
            terms,
            relation: Relation::Ge,
            rhs: S::one(),
        });
    }

    Ok(LinearModel {
        name: format!("cov-csp n={n} g={g}"),
        kind: ModelKind::CovCsp { n, g },
        variables: vars,
        objective: Objective {
            sense: Sense::Satisfy,
            terms: Vec::new(),
        },
        constraints,
        var_map: map,
    })
}

/// COV-ILP: maximize the number of covered vertices counted by column 1;
/// always feasible.
pub fn build_cov_ilp<S: Scalar>(graph: &Graph, g: u32) -> Result<LinearModel<S>> {
    if g < 1 {
        return Err(Error::Parameter("COV-ILP needs g >= 1".into()));
    }
    let n = graph.vertex_count() as u32;
    let mut map = VarMap::default();
    let mut vars = Vec::with_capacity((g * n) as usize);
    for j in 1..=g {
        for i in 1..=n {
            binary_var::<S>(VarRole::Cover { i, j }, &mut map, &mut vars);
        }
    }

    let mut constraints = Vec::with_capacity((g + n - 1) as usize);
    for j in 2..=g {
        let terms = (1..=n)
            .map(|i| (map.id_of(VarRole::Cover { i, j }).unwrap(), S::one()))
            .collect();
        constraints.push(Constraint {
            name: format!("onecol_{j}"),
            role: ConstraintRole::OnePerColumn { j },
            terms,
            relation: Relation::Eq,
            rhs: S::one(),
        });
    }
    let mut dist = Vec::new();
    let mut visited = Vec::new();
    for i in 1..=n {
        let mut terms: Vec<(usize, S)> =
            vec![(map.id_of(VarRole::Cover { i, j: 1 }).unwrap(), S::one())];
        if g >= 2 {
            for (id, c) in coverage_terms::<S>(graph, &map, i, 2..=g, &mut dist, &mut visited) {
                terms.push((id, -c));
            }
        }
        constraints.push(Constraint {
            name: format!("counted_{i}"),
            role: ConstraintRole::Counted { i },
            terms,
            relation: Relation::Le,
            rhs: S::zero(),
        });
    }

    let objective_terms = (1..=n)
        .map(|i| (map.id_of(VarRole::Cover { i, j: 1 }).unwrap(), S::one()))
        .collect();
    Ok(LinearModel {
        name: format!("cov-ilp n={n} g={g}"),
        kind: ModelKind::CovIlp { n, g },
        variables: vars,
        objective: Objective {
            sense: Sense::Maximize,
            terms: objective_terms,
        },
        constraints,
        var_map: map,
    })
}

/// GBP-ILP with coverage rows for every vertex.
pub fn build_gbp_ilp<S: Scalar>(graph: &Graph, u: u32) -> Result<LinearModel<S>> {
    let rows: Vec<u32> = (0..graph.vertex_count() as u32).collect();
    build_gbp_ilp_partial(graph, u, &rows)
}

/// GBP-ILP with coverage rows only for `cover_rows` (0-based vertices), the
/// shape grown by the row-generation driver.
pub fn build_gbp_ilp_partial<S: Scalar>(
    graph: &Graph,
    u: u32,
    cover_rows: &[u32],
) -> Result<LinearModel<S>> {
    if u < 1 {
        return Err(Error::Parameter("GBP-ILP needs U >= 1".into()));
    }
    let n = graph.vertex_count() as u32;
    let mut map = VarMap::default();
    let mut vars = Vec::with_capacity((u * n) as usize);
    for j in 1..=u {
        for i in 1..=n {
            binary_var::<S>(VarRole::Cover { i, j }, &mut map, &mut vars);
        }
    }

    let mut constraints = Vec::new();
    // Column sums capped at one and non-increasing along j: used columns
    // form a prefix whose length is the objective.
    for j in 1..=u {
        let terms = (1..=n)
            .map(|i| (map.id_of(VarRole::Cover { i, j }).unwrap(), S::one()))
            .collect();
        constraints.push(Constraint {
            name: format!("cap_{j}"),
            role: ConstraintRole::ColumnCap { j },
            terms,
            relation: Relation::Le,
            rhs: S::one(),
        });
    }
    for j in 2..=u {
        let mut terms: Vec<(usize, S)> = Vec::with_capacity(2 * n as usize);
        for i in 1..=n {
            terms.push((map.id_of(VarRole::Cover { i, j: j - 1 }).unwrap(), -S::one()));
        }
        for i in 1..=n {
            terms.push((map.id_of(VarRole::Cover { i, j }).unwrap(), S::one()));
        }
        constraints.push(Constraint {
            name: format!("chain_{j}"),
            role: ConstraintRole::ColumnChain { j },
            terms,
            relation: Relation::Le,
            rhs: S::zero(),
        });
    }
    let mut dist = Vec::new();
    let mut visited = Vec::new();
    let mut ordered: Vec<u32> = cover_rows.to_vec();
    ordered.sort_unstable();
    ordered.dedup();
    for v in ordered {
        let i = v + 1;
        let terms = coverage_terms(graph, &map, i, 1..=u, &mut dist, &mut visited);
        constraints.push(Constraint {
            name: format!("cover_{i}"),
            role: ConstraintRole::Coverage { i },
            terms,
            relation: Relation::Ge,
            rhs: S::one(),
        });
    }

    let objective_terms = (0..map.len()).map(|id| (id, S::one())).collect();
    Ok(LinearModel {
        name: format!("gbp-ilp n={n} U={u}"),
        kind: ModelKind::GbpIlp { n, u },
        variables: vars,
        objective: Objective {
            sense: Sense::Minimize,
            terms: objective_terms,
        },
        constraints,
        var_map: map,
    })
}

/// Appends coverage rows for `vertices` (0-based) to a GBP-ILP model,
/// skipping rows already present. Returns how many rows were added.
pub fn add_coverage_rows<S: Scalar>(
    model: &mut LinearModel<S>,
    graph: &Graph,
    vertices: &[u32],
) -> usize {
    let u = match model.kind {
        ModelKind::GbpIlp { u, .. } => u,
        _ => panic!("coverage rows can only be grown on GBP-ILP models"),
    };
    let present: BTreeSet<u32> = model
        .constraints
        .iter()
        .filter_map(|c| match c.role {
            ConstraintRole::Coverage { i } => Some(i - 1),
            _ => None,
        })
        .collect();
    let mut fresh: Vec<u32> = vertices
        .iter()
        .copied()
        .filter(|v| !present.contains(v))
        .collect();
    fresh.sort_unstable();
    fresh.dedup();
    let mut dist = Vec::new();
    let mut visited = Vec::new();
    let added = fresh.len();
    for v in fresh {
        let i = v + 1;
        let terms = coverage_terms(graph, &model.var_map, i, 1..=u, &mut dist, &mut visited);
        model.constraints.push(Constraint {
            name: format!("cover_{i}"),
            role: ConstraintRole::Coverage { i },
            terms,
            relation: Relation::Ge,
            rhs: S::one(),
        });
    }
    added
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    #[test]
    fn prop_milp_counts() {
        let g = Graph::generate_path(9).unwrap();
        let m: LinearModel<Rat> = build_prop_milp(&g, 5).unwrap();
        assert_eq!(m.binary_count(), 90);
        assert_eq!(m.continuous_count(), 1);
        assert_eq!(m.constraints.len(), 45 + 5 + 9);
        assert!(m.check_consistency());
    }

    #[test]
    fn cov_csp_counts() {
        let g = Graph::generate_path(9).unwrap();
        let m: LinearModel<Rat> = build_cov_csp(&g, 3).unwrap();
        assert_eq!(m.variables.len(), 27);
        assert_eq!(m.constraints.len(), 12);
    }

    #[test]
    fn cov_ilp_counts() {
        let g = Graph::generate_path(9).unwrap();
        let m: LinearModel<Rat> = build_cov_ilp(&g, 3).unwrap();
        assert_eq!(m.variables.len(), 27);
        assert_eq!(m.constraints.len(), 11);
    }

    #[test]
    fn gbp_ilp_counts() {
        let g = Graph::generate_path(9).unwrap();
        let m: LinearModel<Rat> = build_gbp_ilp(&g, 5).unwrap();
        assert_eq!(m.variables.len(), 45);
        assert_eq!(m.constraints.len(), 2 * 5 + 9 - 1);
    }

    #[test]
    fn builders_reject_zero_parameters() {
        let g = Graph::generate_path(3).unwrap();
        assert!(build_prop_milp::<Rat>(&g, 0).is_err());
        assert!(build_cov_csp::<Rat>(&g, 0).is_err());
        assert!(build_cov_ilp::<Rat>(&g, 0).is_err());
        assert!(build_gbp_ilp::<Rat>(&g, 0).is_err());
    }

    #[test]
    fn builders_are_pure() {
        let g = Graph::generate_cycle(7).unwrap();
        let a: LinearModel<Rat> = build_cov_csp(&g, 3).unwrap();
        let b: LinearModel<Rat> = build_cov_csp(&g, 3).unwrap();
        assert_eq!(a.constraints.len(), b.constraints.len());
        for (ca, cb) in a.constraints.iter().zip(&b.constraints) {
            assert_eq!(ca.name, cb.name);
            assert_eq!(ca.terms, cb.terms);
        }
    }

    #[test]
    fn grown_coverage_rows_deduplicate() {
        let g = Graph::generate_path(6).unwrap();
        let mut m: LinearModel<Rat> = build_gbp_ilp_partial(&g, 3, &[0, 2]).unwrap();
        assert_eq!(m.constraints.len(), 3 + 2 + 2);
        let added = add_coverage_rows(&mut m, &g, &[2, 4, 4]);
        assert_eq!(added, 1);
        assert_eq!(m.constraints.len(), 3 + 2 + 3);
    }
}
