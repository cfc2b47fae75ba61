//! Subcommand implementations.

use gbp_core::bench::{run_bench, BenchFamily, BenchMethod, BenchParam, BenchSpec};
use gbp_core::burning::{
    self, brute_force_burning_number, fire_sources, greedy_heuristic, uncovered_vertices,
    BurningSequence,
};
use gbp_core::formulations::{
    build_cov_csp, build_cov_ilp, build_gbp_ilp, build_prop_milp, decode, write_lp_file,
};
use gbp_core::graph::{GeneratorSpec, Graph, GraphFormat};
use gbp_core::qubo::{
    build_squbo, build_uqubo, decode_qubo, default_penalties, energy, exhaustive_minimum,
    write_qubo_file, PenaltyMode, QuboKind,
};
use gbp_core::scalar::emit_value;
use gbp_core::solvers::{
    binary_search_burning, external_solve, internal_ilp_solve, minimize_uqubo_structured,
    row_generation_solve, simulated_annealing, Backend, Embedding, ExternalSolver, InitialBound,
    SaParams, SolveReport, Status, PROBE_SWEEP_DIM,
};
use gbp_core::{Error, Rat, Result};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

fn usage(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

fn json_pretty<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Format(format!("json encoding: {e}")))
}

fn json_value<T: serde::Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| Error::Format(format!("json encoding: {e}")))
}

fn load_source(graph: Option<&Path>, gen_spec: Option<&str>, format: &str) -> Result<Graph> {
    match (graph, gen_spec) {
        (Some(path), None) => match format {
            "auto" => Graph::load_auto(path),
            "edge-list" => Graph::load(path, GraphFormat::EdgeList),
            "mtx" | "matrix-market" => Graph::load(path, GraphFormat::MatrixMarket),
            other => Err(usage(format!(
                "format must be auto, edge-list or matrix-market, got '{other}'"
            ))),
        },
        (None, Some(spec)) => GeneratorSpec::parse(spec)?.build(),
        _ => Err(usage("exactly one of --graph or --gen is required")),
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
        }
        None => {
            println!("{text}");
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn run_gen(
    family: &str,
    n: Option<usize>,
    p: Option<f64>,
    r: Option<f64>,
    rows: Option<usize>,
    cols: Option<usize>,
    seed: u64,
    out: &Path,
) -> Result<u8> {
    let need_n = || n.ok_or_else(|| usage("--n is required for this family"));
    let graph = match family {
        "er" => {
            let p = p.ok_or_else(|| usage("--p is required for er"))?;
            Graph::generate_erdos_renyi(need_n()?, p, seed)?
        }
        "geo" => {
            let r = r.ok_or_else(|| usage("--r is required for geo"))?;
            Graph::generate_geometric(need_n()?, r, seed)?
        }
        "path" => Graph::generate_path(need_n()?)?,
        "cycle" => Graph::generate_cycle(need_n()?)?,
        "complete" => Graph::generate_complete(need_n()?)?,
        "star" => Graph::generate_star(need_n()?)?,
        "grid" => {
            let rows = rows.ok_or_else(|| usage("--rows is required for grid"))?;
            let cols = cols.ok_or_else(|| usage("--cols is required for grid"))?;
            Graph::generate_grid(rows, cols)?
        }
        other => return Err(usage(format!("unknown family '{other}'"))),
    };
    graph.save_edge_list(out)?;
    let (_, components) = graph.connected_components();
    let sidecar = json!({
        "family": family,
        "n": graph.vertex_count(),
        "m": graph.edge_count(),
        "components": components,
        "seed": seed,
        "p": p,
        "r": r,
        "rows": rows,
        "cols": cols,
    });
    let sidecar_path = sidecar_path(out);
    std::fs::write(&sidecar_path, json_pretty(&sidecar)? + "\n")?;
    eprintln!(
        "wrote {} ({} vertices, {} edges) and {}",
        out.display(),
        graph.vertex_count(),
        graph.edge_count(),
        sidecar_path.display()
    );
    Ok(0)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".json");
    PathBuf::from(s)
}

fn resolve_upper(upper: Option<&str>, graph: &Graph) -> Result<Option<u32>> {
    match upper {
        None => Ok(None),
        Some("auto") => Ok(Some(burning::upper_bound(graph))),
        Some(text) => text
            .parse::<u32>()
            .map(Some)
            .map_err(|_| usage(format!("--U must be an integer or 'auto', got '{text}'"))),
    }
}

fn parse_penalty_mode(s: &str) -> Result<PenaltyMode> {
    match s {
        "uniform" => Ok(PenaltyMode::Uniform),
        "guided" => Ok(PenaltyMode::Guided),
        other => Err(usage(format!("penalty must be uniform or guided, got '{other}'"))),
    }
}

fn penalties_for(graph: &Graph, g: u32, mode: PenaltyMode) -> Result<gbp_core::PenaltyConfig> {
    match mode {
        PenaltyMode::Uniform => default_penalties(graph, g, None),
        PenaltyMode::Guided => {
            let guide = fire_sources(graph, &greedy_heuristic(graph));
            default_penalties(graph, g, Some(&guide))
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run_emit(
    formulation: &str,
    graph: Option<&Path>,
    gen_spec: Option<&str>,
    format: &str,
    g: Option<u32>,
    upper: Option<&str>,
    penalty: &str,
    out: &Path,
) -> Result<u8> {
    let graph = load_source(graph, gen_spec, format)?;
    let n = graph.vertex_count();
    let need_g = || g.ok_or_else(|| usage(format!("--g is required for {formulation}")));
    let need_u = || {
        resolve_upper(upper, &graph)?
            .ok_or_else(|| usage(format!("--U is required for {formulation}")))
    };

    let manifest = match formulation {
        "prop-milp" | "cov-csp" | "cov-ilp" | "gbp-ilp" => {
            let model = match formulation {
                "prop-milp" => build_prop_milp::<Rat>(&graph, need_u()?)?,
                "cov-csp" => build_cov_csp::<Rat>(&graph, need_g()?)?,
                "cov-ilp" => build_cov_ilp::<Rat>(&graph, need_g()?)?,
                _ => build_gbp_ilp::<Rat>(&graph, need_u()?)?,
            };
            write_lp_file(&model, out)?;
            json!({
                "formulation": formulation,
                "n": n,
                "g": g,
                "U": resolve_upper(upper, &graph)?,
                "variables": model.variables.len(),
                "binary_variables": model.binary_count(),
                "continuous_variables": model.continuous_count(),
                "constraints": model.constraints.len(),
                "file": out.display().to_string(),
            })
        }
        "squbo" | "uqubo" => {
            let g = need_g()?;
            let (model, penalty_info) = if formulation == "squbo" {
                (build_squbo::<Rat>(&graph, g)?, None)
            } else {
                let mode = parse_penalty_mode(penalty)?;
                let pc = penalties_for(&graph, g, mode)?;
                let info = json!({
                    "mode": penalty,
                    "P": emit_value(&pc.p),
                    "lambda1": emit_value(&pc.lambda1),
                    "min_lambda2": emit_value(&pc.min_lambda2()),
                });
                (build_uqubo(&graph, g, &pc)?, Some(info))
            };
            write_qubo_file(&model, out)?;
            let slack_bits = match model.kind {
                QuboKind::Slack { slack_bits, .. } => Some(slack_bits),
                QuboKind::Unbalanced { .. } => None,
            };
            json!({
                "formulation": formulation,
                "n": n,
                "g": g,
                "dim": model.dim,
                "slack_bits_per_vertex": slack_bits,
                "nonzeros": model.q.len(),
                "offset": emit_value(&model.offset),
                "penalties": penalty_info,
                "file": out.display().to_string(),
            })
        }
        other => return Err(usage(format!("unknown formulation '{other}'"))),
    };
    let manifest_path = {
        let mut s = out.as_os_str().to_os_string();
        s.push(".manifest.json");
        PathBuf::from(s)
    };
    std::fs::write(&manifest_path, json_pretty(&manifest)? + "\n")?;
    eprintln!("wrote {} and {}", out.display(), manifest_path.display());
    Ok(0)
}

pub struct SolveArgs<'a> {
    pub graph: Option<&'a Path>,
    pub gen_spec: Option<&'a str>,
    pub format: String,
    pub method: String,
    pub backend: String,
    pub solver_cmd: Option<String>,
    pub infeasible_marker: Option<String>,
    pub upper: Option<String>,
    pub g: Option<u32>,
    pub penalty: String,
    pub initial_bound: String,
    pub node_budget: u64,
    pub oracle_limit: Option<usize>,
    pub sa_temp: f64,
    pub sa_cooling: f64,
    pub sa_steps: usize,
    pub sa_restarts: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

fn build_backend(args: &SolveArgs) -> Result<Backend> {
    Ok(match args.backend.as_str() {
        "internal" => Backend::Internal {
            node_budget: args.node_budget,
        },
        "sa" => Backend::Sa(SaParams {
            initial_temperature: args.sa_temp,
            cooling: args.sa_cooling,
            steps_per_temperature: args.sa_steps,
            restarts: args.sa_restarts,
            seed: args.seed,
        }),
        "external" => Backend::External(ExternalSolver {
            command_template: args
                .solver_cmd
                .clone()
                .ok_or_else(|| usage("--solver-cmd is required with the external backend"))?,
            infeasible_marker: args.infeasible_marker.clone(),
        }),
        other => return Err(usage(format!("unknown backend '{other}'"))),
    })
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gbp-{}", std::process::id()));
    dir
}

fn report_exit(report: &SolveReport) -> u8 {
    match report.status {
        Status::Optimal => 0,
        Status::UpperBoundOnly => 1,
    }
}

pub fn run_solve(args: SolveArgs) -> Result<u8> {
    let graph = load_source(args.graph, args.gen_spec, &args.format)?;
    let backend = build_backend(&args)?;
    let initial_bound = match args.initial_bound.as_str() {
        "greedy" => InitialBound::Greedy,
        "n" => InitialBound::VertexCount,
        other => return Err(usage(format!("initial bound must be greedy or n, got '{other}'"))),
    };
    let scratch = scratch_dir();

    let (report, code) = if args.method == "oracle" {
        let start = Instant::now();
        let (b, witness) = brute_force_burning_number(&graph, args.oracle_limit)?;
        let report = SolveReport {
            method: "oracle".into(),
            status: Status::Optimal,
            burning_number: b,
            witness_labels: witness.labels(&graph),
            witness_source: gbp_core::solvers::WitnessSource::Probe,
            witness,
            iterations: Vec::new(),
            total_ms: start.elapsed().as_secs_f64() * 1e3,
            coverage_rows: None,
            details: Default::default(),
        };
        let code = report_exit(&report);
        (json_value(&report)?, code)
    } else if let Some(embedding) = args.method.strip_prefix("binary-search:") {
        let embedding = Embedding::parse(embedding)?;
        let report = binary_search_burning(&graph, embedding, &backend, initial_bound, &scratch)?;
        let code = report_exit(&report);
        (json_value(&report)?, code)
    } else if args.method == "row-generation" {
        let u = resolve_upper(args.upper.as_deref(), &graph)?
            .ok_or_else(|| usage("row generation needs --U (or --U auto)"))?;
        let report = row_generation_solve(&graph, u, &backend, &scratch)?;
        let code = report_exit(&report);
        (json_value(&report)?, code)
    } else if let Some(formulation) = args.method.strip_prefix("direct:") {
        direct_solve(&graph, formulation, &args, &backend, &scratch)?
    } else {
        return Err(usage(format!(
            "unknown method '{}'; expected oracle, binary-search:<embedding>, row-generation or direct:<formulation>",
            args.method
        )));
    };

    let text = json_pretty(&report)?;
    write_or_print(args.out.as_deref(), &text)?;
    Ok(code)
}

/// Solves one materialized model at the given parameter and reports what it
/// found. Exit code 0 needs a valid decoded sequence from an exact path.
fn direct_solve(
    graph: &Graph,
    formulation: &str,
    args: &SolveArgs,
    backend: &Backend,
    scratch: &Path,
) -> Result<(serde_json::Value, u8)> {
    let start = Instant::now();
    let need_g = || {
        args.g
            .ok_or_else(|| usage(format!("--g is required for direct:{formulation}")))
    };
    match formulation {
        "prop-milp" | "cov-csp" | "cov-ilp" | "gbp-ilp" => {
            let model = match formulation {
                "prop-milp" => {
                    let u = resolve_upper(args.upper.as_deref(), graph)?
                        .ok_or_else(|| usage("direct:prop-milp needs --U"))?;
                    build_prop_milp::<Rat>(graph, u)?
                }
                "cov-csp" => build_cov_csp::<Rat>(graph, need_g()?)?,
                "cov-ilp" => build_cov_ilp::<Rat>(graph, need_g()?)?,
                _ => {
                    let u = resolve_upper(args.upper.as_deref(), graph)?
                        .ok_or_else(|| usage("direct:gbp-ilp needs --U"))?;
                    build_gbp_ilp::<Rat>(graph, u)?
                }
            };
            let solved = match backend {
                Backend::Internal { node_budget } => internal_ilp_solve(&model, *node_budget),
                Backend::External(solver) => external_solve(&model, solver, scratch),
                Backend::Sa(_) => Err(usage("direct linear solves need internal or external")),
            };
            match solved {
                Ok(assignment) => {
                    let objective = assignment.objective_value;
                    match decode(&model, &assignment) {
                        Ok(witness) => {
                            let valid = burning::validate(graph, &witness);
                            let value = json!({
                                "method": format!("direct:{formulation}"),
                                "status": if valid { "optimal" } else { "decode-invalid" },
                                "objective": emit_value(&objective),
                                "burning_number": witness.len(),
                                "witness_labels": witness.labels(graph),
                                "valid": valid,
                                "total_ms": start.elapsed().as_secs_f64() * 1e3,
                            });
                            Ok((value, if valid { 0 } else { 1 }))
                        }
                        Err(Error::NoBurningSequence) => {
                            let value = json!({
                                "method": format!("direct:{formulation}"),
                                "status": "no-burning-sequence",
                                "objective": emit_value(&objective),
                                "total_ms": start.elapsed().as_secs_f64() * 1e3,
                            });
                            Ok((value, 1))
                        }
                        Err(e) => Err(e),
                    }
                }
                Err(Error::Infeasible) => {
                    let value = json!({
                        "method": format!("direct:{formulation}"),
                        "status": "infeasible",
                        "total_ms": start.elapsed().as_secs_f64() * 1e3,
                    });
                    Ok((value, 1))
                }
                Err(e) => Err(e),
            }
        }
        "squbo" | "uqubo" => {
            let g = need_g()?;
            let (model, pc) = if formulation == "squbo" {
                (build_squbo::<Rat>(graph, g)?, None)
            } else {
                let mode = parse_penalty_mode(&args.penalty)?;
                let pc = penalties_for(graph, g, mode)?;
                (build_uqubo(graph, g, &pc)?, Some(pc))
            };
            let (bits, certified) = match backend {
                Backend::Sa(params) => (simulated_annealing(&model, params)?.0, false),
                Backend::Internal { node_budget } => {
                    if model.dim <= PROBE_SWEEP_DIM {
                        (exhaustive_minimum(&model, PROBE_SWEEP_DIM)?.assignment, true)
                    } else if let Some(pc) = &pc {
                        let guide = greedy_heuristic(graph);
                        (
                            minimize_uqubo_structured(graph, g, pc, Some(&guide), *node_budget)?.0,
                            true,
                        )
                    } else {
                        return Err(Error::Capacity(format!(
                            "direct squbo minimization sweeps up to {PROBE_SWEEP_DIM} bits \
                             (model has {}); use binary-search:squbo instead",
                            model.dim
                        )));
                    }
                }
                Backend::External(_) => {
                    return Err(usage("QUBO models solve with internal or sa backends"))
                }
            };
            let e = energy(&model, &bits)?;
            let d = decode_qubo(graph, &model, &bits)?;
            let valid = d.valid == Some(true);
            let value = json!({
                "method": format!("direct:{formulation}"),
                "status": if !certified { "upper-bound-only" }
                          else if valid { "optimal" } else { "minimum-not-a-sequence" },
                "energy": emit_value(&e),
                "witness_labels": d.sequence.as_ref().map(|s| s.labels(graph)),
                "valid": d.valid,
                "column_violations": d.column_violations,
                "total_ms": start.elapsed().as_secs_f64() * 1e3,
            });
            Ok((value, if certified && valid { 0 } else { 1 }))
        }
        other => Err(usage(format!("unknown formulation '{other}'"))),
    }
}

pub fn run_validate(
    graph: Option<&Path>,
    gen_spec: Option<&str>,
    format: &str,
    sequence: &Path,
) -> Result<u8> {
    let graph = load_source(graph, gen_spec, format)?;
    let text = std::fs::read_to_string(sequence)?;
    let labels: Vec<u64> = serde_json::from_str(&text)
        .map_err(|e| Error::Data(format!("sequence file is not a JSON label array: {e}")))?;
    let seq = BurningSequence::from_labels(&graph, &labels)?;
    if seq.is_empty() {
        println!("invalid: empty sequence on a non-empty graph");
        return Ok(1);
    }
    let valid = burning::validate(&graph, &seq);
    if valid {
        let fs = fire_sources(&graph, &seq);
        println!("valid: {} sources burn all {} vertices", seq.len(), graph.vertex_count());
        let counts: Vec<String> = (0..graph.vertex_count() as u32)
            .map(|v| format!("{}:{}", graph.label_of(v), fs.counts[v as usize]))
            .collect();
        println!("fire sources per vertex: {}", counts.join(" "));
        Ok(0)
    } else {
        let uncovered = uncovered_vertices(&graph, &seq);
        let labels: Vec<String> = uncovered
            .iter()
            .map(|&v| graph.label_of(v).to_string())
            .collect();
        println!(
            "invalid: {} of {} vertices stay unburned",
            uncovered.len(),
            graph.vertex_count()
        );
        println!("unburned: {}", labels.join(" "));
        Ok(1)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run_bench_cmd(
    family: &str,
    n: usize,
    params: &str,
    reps: usize,
    methods: &str,
    root_seed: u64,
    oracle_limit: Option<usize>,
    out: Option<&Path>,
    json_out: Option<&Path>,
) -> Result<u8> {
    let family = match family {
        "er" => BenchFamily::ErdosRenyi,
        "geo" => BenchFamily::Geometric,
        other => return Err(usage(format!("bench family must be er or geo, got '{other}'"))),
    };
    let params = params
        .split(',')
        .map(|s| BenchParam::parse(s.trim(), n))
        .collect::<Result<Vec<_>>>()?;
    let methods = methods
        .split(',')
        .map(|s| BenchMethod::parse(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    if params.is_empty() || methods.is_empty() {
        return Err(usage("bench needs at least one parameter and one method"));
    }
    let spec = BenchSpec {
        family,
        n,
        params,
        reps,
        methods,
        root_seed,
        oracle_limit,
    };
    let table = run_bench(&spec)?;
    let tsv = table.to_tsv();
    match out {
        Some(path) => std::fs::write(path, &tsv)?,
        None => {
            let mut stdout = std::io::stdout();
            stdout.write_all(tsv.as_bytes())?;
        }
    }
    if let Some(path) = json_out {
        std::fs::write(path, json_pretty(&table)? + "\n")?;
    }
    Ok(0)
}
