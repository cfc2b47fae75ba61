//! Native solving paths and orchestration.
//!
//! The binary search drives any embedding of the length-`g` feasibility
//! question: the raw clustered-coverage search, the coverage CSP/ILP models
//! through the internal or an external solver, and the two QUBO encodings
//! through exact minimization or simulated annealing. Exact backends certify
//! optimality; annealing and the unbalanced QUBO only certify the witness
//! they found, so those searches report an upper-bound-only status.

mod external;
mod internal;
mod rowgen;
mod sa;
mod uqubo_exact;

pub use external::{external_solve, substitute_template, ExternalSolver};
pub use internal::internal_ilp_solve;
pub use rowgen::row_generation_solve;
pub use sa::simulated_annealing;
pub use uqubo_exact::minimize_uqubo_structured;

use crate::burning::{
    self, fire_sources, greedy_heuristic, validate, BurningSequence, FireSourceCounts,
};
use crate::cover::CoverInstance;
use crate::error::Error;
use crate::formulations::{build_cov_csp, build_cov_ilp, decode, LinearModel};
use crate::graph::Graph;
use crate::qubo::{
    build_squbo, build_uqubo, decode_qubo, default_penalties, energy, exhaustive_minimum,
    squbo_assignment_for, PenaltyMode, QuboModel,
};
use crate::{Rat, Result};
use serde::Serialize;
use std::time::Instant;

/// Default node budget for exhaustive searches.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Largest QUBO dimension solved by exhaustive sweep inside probes; larger
/// models take the structure-exploiting exact path.
pub const PROBE_SWEEP_DIM: usize = 20;

/// Solving backend for a probe or a model.
#[derive(Clone, Debug)]
pub enum Backend {
    /// Built-in exact search.
    Internal { node_budget: u64 },
    /// Simulated annealing (QUBO embeddings only).
    Sa(SaParams),
    /// External command solving LP files (linear embeddings only).
    External(ExternalSolver),
}

impl Backend {
    pub fn internal() -> Self {
        Backend::Internal {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Backend::Internal { .. } => "internal",
            Backend::Sa(_) => "simulated-annealing",
            Backend::External(_) => "external",
        }
    }
}

/// Simulated-annealing schedule: geometric cooling from
/// `initial_temperature` by `cooling` per level down to a fixed 1e-4
/// fraction, `steps_per_temperature` single-bit moves per level, restarted
/// `restarts` times with sub-seeds derived from `seed`.
#[derive(Clone, Debug, Serialize)]
pub struct SaParams {
    pub initial_temperature: f64,
    pub cooling: f64,
    pub steps_per_temperature: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams {
            initial_temperature: 10.0,
            cooling: 0.95,
            steps_per_temperature: 2000,
            restarts: 8,
            seed: 1,
        }
    }
}

impl SaParams {
    pub fn check(&self) -> Result<()> {
        if self.initial_temperature <= 0.0
            || !(0.0..1.0).contains(&self.cooling)
            || self.cooling <= 0.0
            || self.steps_per_temperature == 0
            || self.restarts == 0
        {
            return Err(Error::Parameter(
                "annealing schedule values must be positive with cooling in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Which feasibility embedding the binary search probes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedding {
    Cmcp,
    CovCsp,
    CovIlp,
    SQubo,
    UQubo(PenaltyMode),
}

impl Embedding {
    pub fn label(&self) -> &'static str {
        match self {
            Embedding::Cmcp => "cmcp",
            Embedding::CovCsp => "cov-csp",
            Embedding::CovIlp => "cov-ilp",
            Embedding::SQubo => "squbo",
            Embedding::UQubo(PenaltyMode::Uniform) => "uqubo-uniform",
            Embedding::UQubo(PenaltyMode::Guided) => "uqubo-guided",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "cmcp" => Embedding::Cmcp,
            "cov-csp" => Embedding::CovCsp,
            "cov-ilp" => Embedding::CovIlp,
            "squbo" => Embedding::SQubo,
            "uqubo" | "uqubo-guided" => Embedding::UQubo(PenaltyMode::Guided),
            "uqubo-uniform" => Embedding::UQubo(PenaltyMode::Uniform),
            other => return Err(Error::Parameter(format!("unknown embedding '{other}'"))),
        })
    }
}

/// Starting upper bound of the search range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InitialBound {
    /// Greedy witness length (tightened by the closed-form bound when
    /// connected); the witness seeds the incumbent.
    #[default]
    Greedy,
    /// The literal vertex count.
    VertexCount,
}

/// Certification level of a solve result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// The reported burning number is exact.
    Optimal,
    /// The witness is valid but no minimality certificate exists.
    UpperBoundOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationRecord {
    pub label: String,
    pub backend: String,
    pub wall_ms: f64,
    pub model_vars: usize,
    pub model_rows: usize,
    pub outcome: String,
}

/// Where a report's witness came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessSource {
    /// Produced by the method itself (an embedding probe or a model solve).
    Probe,
    /// No probe succeeded; the greedy heuristic's sequence stands in.
    GreedyFallback,
    /// No probe succeeded; every vertex as its own source stands in.
    TrivialFallback,
}

/// Outcome of a solve: the burning number found, its witness (always a
/// validated sequence), and the per-iteration trace.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub method: String,
    pub status: Status,
    pub burning_number: u32,
    pub witness_labels: Vec<u64>,
    pub witness_source: WitnessSource,
    #[serde(skip)]
    pub witness: BurningSequence,
    pub iterations: Vec<IterationRecord>,
    pub total_ms: f64,
    /// Coverage rows loaded at termination (row generation only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_rows: Option<usize>,
    /// Extra per-method facts (energies, objectives), exact renderings.
    #[serde(skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    pub details: std::collections::BTreeMap<String, String>,
}

/// Exhaustive clustered-coverage solution for a guess `g`: one vertex per
/// radius `g-1..=0`, maximizing covered vertices, lexicographically smallest
/// among optimal selections. The selection reads in sequence order.
pub fn solve_cmcp_exhaustive(
    graph: &Graph,
    g: u32,
    node_budget: u64,
) -> Result<(usize, BurningSequence)> {
    if g < 1 {
        return Err(Error::Parameter("CMCP needs g >= 1".into()));
    }
    let radii: Vec<u32> = (0..g).rev().collect();
    let inst = CoverInstance::from_graph(graph, &radii, None);
    let out = inst.solve_lex(node_budget)?;
    Ok((out.covered, BurningSequence::new(out.selection)))
}

struct ProbeOutcome {
    success: bool,
    witness: Option<BurningSequence>,
    model_vars: usize,
    model_rows: usize,
    note: String,
}

pub(crate) fn solve_linear_backend(
    model: &LinearModel<Rat>,
    backend: &Backend,
    scratch: &std::path::Path,
) -> Result<crate::Assignment> {
    match backend {
        Backend::Internal { node_budget } => internal_ilp_solve(model, *node_budget),
        Backend::External(solver) => external_solve(model, solver, scratch),
        Backend::Sa(_) => Err(Error::Parameter(
            "linear embeddings need the internal or an external backend".into(),
        )),
    }
}

/// Binary search for the burning number over the chosen embedding.
///
/// `l, u = 1, u0`; probe the midpoint `g`, shrink `u` on success and grow
/// `l` on failure; exact embeddings terminate with `l` equal to the burning
/// number. Iteration count is at most `ceil(log2 u0) + 1`.
pub fn binary_search_burning(
    graph: &Graph,
    embedding: Embedding,
    backend: &Backend,
    initial_bound: InitialBound,
    scratch: &std::path::Path,
) -> Result<SolveReport> {
    let start = Instant::now();
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }

    // Guide for the penalty tuner and incumbent fallback.
    let greedy = greedy_heuristic(graph);
    let guide: Option<FireSourceCounts> = match embedding {
        Embedding::UQubo(PenaltyMode::Guided) => Some(fire_sources(graph, &greedy)),
        _ => None,
    };

    // The incumbent only ever holds probe-produced witnesses; fallbacks are
    // attached at the end so success accounting stays honest.
    let mut incumbent: Option<BurningSequence> = None;
    let u0 = match initial_bound {
        InitialBound::Greedy => burning::upper_bound(graph),
        InitialBound::VertexCount => n as u32,
    };

    let exact = matches!(
        (embedding, backend),
        (
            Embedding::Cmcp | Embedding::CovCsp | Embedding::CovIlp | Embedding::SQubo,
            Backend::Internal { .. } | Backend::External(_)
        )
    );

    let mut iterations = Vec::new();
    let (mut l, mut u) = (1u32, u0);
    while l <= u {
        let g = (l + u) / 2;
        let it_start = Instant::now();
        let probe =
            probe_embedding(graph, embedding, backend, g, guide.as_ref(), &greedy, scratch)?;
        iterations.push(IterationRecord {
            label: format!("g={g}"),
            backend: backend.label().into(),
            wall_ms: it_start.elapsed().as_secs_f64() * 1e3,
            model_vars: probe.model_vars,
            model_rows: probe.model_rows,
            outcome: format!(
                "{} ({})",
                if probe.success { "success" } else { "fail" },
                probe.note
            ),
        });
        if probe.success {
            if let Some(w) = probe.witness {
                debug_assert!(validate(graph, &w));
                if incumbent.as_ref().is_none_or(|b| w.len() < b.len()) {
                    incumbent = Some(w);
                }
            }
            u = g - 1;
        } else {
            l = g + 1;
        }
    }

    let (witness, witness_source) = match incumbent {
        Some(w) => (w, WitnessSource::Probe),
        None => match initial_bound {
            InitialBound::Greedy => (greedy, WitnessSource::GreedyFallback),
            InitialBound::VertexCount => (
                // Every vertex as its own source is always valid.
                BurningSequence::new((0..n as u32).collect()),
                WitnessSource::TrivialFallback,
            ),
        },
    };
    debug_assert!(validate(graph, &witness));
    if exact {
        debug_assert_eq!(witness_source, WitnessSource::Probe);
        debug_assert_eq!(witness.len() as u32, l);
    }
    Ok(SolveReport {
        method: format!("binary-search:{}", embedding.label()),
        status: if exact {
            Status::Optimal
        } else {
            Status::UpperBoundOnly
        },
        burning_number: witness.len() as u32,
        witness_labels: witness.labels(graph),
        witness_source,
        witness,
        iterations,
        total_ms: start.elapsed().as_secs_f64() * 1e3,
        coverage_rows: None,
        details: Default::default(),
    })
}

fn probe_embedding(
    graph: &Graph,
    embedding: Embedding,
    backend: &Backend,
    g: u32,
    guide: Option<&FireSourceCounts>,
    incumbent_seed: &BurningSequence,
    scratch: &std::path::Path,
) -> Result<ProbeOutcome> {
    let n = graph.vertex_count();
    match embedding {
        Embedding::Cmcp => {
            let budget = match backend {
                Backend::Internal { node_budget } => *node_budget,
                _ => {
                    return Err(Error::Parameter(
                        "the cmcp embedding runs on the internal backend only".into(),
                    ))
                }
            };
            let radii: Vec<u32> = (0..g).rev().collect();
            let inst = CoverInstance::from_graph(graph, &radii, None);
            let out = inst.maximize(budget, n)?;
            let witness = if out.covered == n {
                let sel = inst.lex_selection(n, budget)?.expect("feasible");
                Some(BurningSequence::new(sel))
            } else {
                None
            };
            Ok(ProbeOutcome {
                success: out.covered == n,
                witness,
                model_vars: g as usize * n,
                model_rows: n,
                note: format!("covered {}/{}", out.covered, n),
            })
        }
        Embedding::CovCsp => {
            let model = build_cov_csp::<Rat>(graph, g)?;
            let (vars, rows) = (model.variables.len(), model.constraints.len());
            match solve_linear_backend(&model, backend, scratch) {
                Ok(a) => {
                    let w = decode(&model, &a)?;
                    let ok = validate(graph, &w);
                    Ok(ProbeOutcome {
                        success: ok,
                        witness: ok.then_some(w),
                        model_vars: vars,
                        model_rows: rows,
                        note: "feasible".into(),
                    })
                }
                Err(Error::Infeasible) => Ok(ProbeOutcome {
                    success: false,
                    witness: None,
                    model_vars: vars,
                    model_rows: rows,
                    note: "infeasible".into(),
                }),
                Err(e) => Err(e),
            }
        }
        Embedding::CovIlp => {
            let model = build_cov_ilp::<Rat>(graph, g)?;
            let (vars, rows) = (model.variables.len(), model.constraints.len());
            let a = solve_linear_backend(&model, backend, scratch)?;
            let objective = a.objective_value;
            match decode(&model, &a) {
                Ok(w) => {
                    let ok = validate(graph, &w);
                    Ok(ProbeOutcome {
                        success: ok,
                        witness: ok.then_some(w),
                        model_vars: vars,
                        model_rows: rows,
                        note: format!("objective {objective}"),
                    })
                }
                Err(Error::NoBurningSequence) => Ok(ProbeOutcome {
                    success: false,
                    witness: None,
                    model_vars: vars,
                    model_rows: rows,
                    note: format!("objective {objective}"),
                }),
                Err(e) => Err(e),
            }
        }
        Embedding::SQubo => {
            let model = build_squbo::<Rat>(graph, g)?;
            match backend {
                Backend::Sa(params) => {
                    let (bits, e) = simulated_annealing(&model, params)?;
                    let success = e == Rat::from_integer(0);
                    let witness = if success {
                        decode_qubo(graph, &model, &bits)?.sequence
                    } else {
                        None
                    };
                    Ok(ProbeOutcome {
                        success,
                        witness,
                        model_vars: model.dim,
                        model_rows: 0,
                        note: format!("sa energy {e}"),
                    })
                }
                Backend::Internal { node_budget } => {
                    if model.dim <= PROBE_SWEEP_DIM {
                        let out = exhaustive_minimum(&model, PROBE_SWEEP_DIM)?;
                        let success = out.min_energy == Rat::from_integer(0);
                        let witness = if success {
                            decode_qubo(graph, &model, &out.assignment)?.sequence
                        } else {
                            None
                        };
                        Ok(ProbeOutcome {
                            success,
                            witness,
                            model_vars: model.dim,
                            model_rows: 0,
                            note: format!("sweep min {}", out.min_energy),
                        })
                    } else {
                        // The minimum is zero iff the coverage search
                        // succeeds; the witness's slack completion then
                        // certifies energy zero.
                        let radii: Vec<u32> = (0..g).rev().collect();
                        let inst = CoverInstance::from_graph(graph, &radii, None);
                        let out = inst.maximize(*node_budget, n)?;
                        if out.covered == n {
                            let sel = inst.lex_selection(n, *node_budget)?.expect("feasible");
                            let w = BurningSequence::new(sel);
                            let bits = squbo_assignment_for(graph, &model, &w)?;
                            let e = energy(&model, &bits)?;
                            debug_assert_eq!(e, Rat::from_integer(0));
                            Ok(ProbeOutcome {
                                success: true,
                                witness: Some(w),
                                model_vars: model.dim,
                                model_rows: 0,
                                note: format!("structured min {e}"),
                            })
                        } else {
                            Ok(ProbeOutcome {
                                success: false,
                                witness: None,
                                model_vars: model.dim,
                                model_rows: 0,
                                note: "structured min positive".into(),
                            })
                        }
                    }
                }
                Backend::External(_) => Err(Error::Parameter(
                    "QUBO embeddings need the internal backend or simulated annealing".into(),
                )),
            }
        }
        Embedding::UQubo(mode) => {
            // One-step burns are the single-vertex case; the uniform rule is
            // undefined at g = 1.
            if g == 1 {
                let success = n == 1;
                return Ok(ProbeOutcome {
                    success,
                    witness: success.then(|| BurningSequence::new(vec![0])),
                    model_vars: n,
                    model_rows: 0,
                    note: "trivial g=1 check".into(),
                });
            }
            let pc = match mode {
                PenaltyMode::Uniform => default_penalties::<Rat>(graph, g, None)?,
                PenaltyMode::Guided => default_penalties::<Rat>(graph, g, guide)?,
            };
            let model = build_uqubo(graph, g, &pc)?;
            // The incumbent seed only bounds the search; penalties decide
            // the optimum, so it is sound in either mode.
            let (bits, note) = uqubo_bits(graph, &model, backend, &pc, Some(incumbent_seed), g)?;
            let e = energy(&model, &bits)?;
            let d = decode_qubo(graph, &model, &bits)?;
            let success = d.valid == Some(true);
            Ok(ProbeOutcome {
                success,
                witness: if success { d.sequence } else { None },
                model_vars: model.dim,
                model_rows: 0,
                note: format!("{note} energy {e}"),
            })
        }
    }
}

fn uqubo_bits(
    graph: &Graph,
    model: &QuboModel<Rat>,
    backend: &Backend,
    pc: &crate::PenaltyConfig,
    seed: Option<&BurningSequence>,
    g: u32,
) -> Result<(Vec<bool>, &'static str)> {
    match backend {
        Backend::Sa(params) => {
            let (bits, _) = simulated_annealing(model, params)?;
            Ok((bits, "sa"))
        }
        Backend::Internal { node_budget } => {
            if model.dim <= PROBE_SWEEP_DIM {
                Ok((exhaustive_minimum(model, PROBE_SWEEP_DIM)?.assignment, "sweep"))
            } else {
                let (bits, _) = minimize_uqubo_structured(graph, g, pc, seed, *node_budget)?;
                Ok((bits, "structured"))
            }
        }
        Backend::External(_) => Err(Error::Parameter(
            "QUBO embeddings need the internal backend or simulated annealing".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::generate_path(n).unwrap()
    }

    fn scratch() -> std::path::PathBuf {
        std::env::temp_dir()
    }

    #[test]
    fn cmcp_exhaustive_examples() {
        let (cov, sel) = solve_cmcp_exhaustive(&path(4), 2, 1 << 20).unwrap();
        assert_eq!(cov, 4);
        assert_eq!(sel.vertices(), &[1, 3]);
        let (cov9, _) = solve_cmcp_exhaustive(&path(9), 3, 1 << 20).unwrap();
        assert_eq!(cov9, 9);
        let (cov9b, _) = solve_cmcp_exhaustive(&path(9), 2, 1 << 20).unwrap();
        assert!(cov9b < 9);
    }

    #[test]
    fn binary_search_cmcp_on_paths() {
        let r = binary_search_burning(
            &path(25),
            Embedding::Cmcp,
            &Backend::internal(),
            InitialBound::Greedy,
            &scratch(),
        )
        .unwrap();
        assert_eq!(r.burning_number, 5);
        assert_eq!(r.status, Status::Optimal);
        assert!(validate(&path(25), &r.witness));
    }

    #[test]
    fn binary_search_complete_graph() {
        let k10 = Graph::generate_complete(10).unwrap();
        for emb in [Embedding::Cmcp, Embedding::CovCsp, Embedding::CovIlp] {
            let r = binary_search_burning(
                &k10,
                emb,
                &Backend::internal(),
                InitialBound::Greedy,
                &scratch(),
            )
            .unwrap();
            assert_eq!(r.burning_number, 2, "embedding {:?}", emb);
        }
    }

    #[test]
    fn binary_search_iteration_bound() {
        let g = path(30);
        let r = binary_search_burning(
            &g,
            Embedding::Cmcp,
            &Backend::internal(),
            InitialBound::VertexCount,
            &scratch(),
        )
        .unwrap();
        let bound = (30f64).log2().ceil() as usize + 1;
        assert!(r.iterations.len() <= bound);
        assert_eq!(r.burning_number, 6);
    }

    #[test]
    fn cov_csp_probe_matches_known_infeasible_point() {
        let r = binary_search_burning(
            &path(5),
            Embedding::CovCsp,
            &Backend::internal(),
            InitialBound::Greedy,
            &scratch(),
        )
        .unwrap();
        assert_eq!(r.burning_number, 3);
        let probed: Vec<&str> = r.iterations.iter().map(|i| i.label.as_str()).collect();
        assert!(probed.contains(&"g=2"));
    }

    #[test]
    fn incompatible_backend_is_rejected() {
        let r = binary_search_burning(
            &path(5),
            Embedding::Cmcp,
            &Backend::Sa(SaParams::default()),
            InitialBound::Greedy,
            &scratch(),
        );
        assert!(matches!(r, Err(Error::Parameter(_))));
    }
}
