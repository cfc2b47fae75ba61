//! Stochastic benchmark harness over random-graph families.
//!
//! A bench cell is one parameter value of one family (edge probability for
//! Erdős–Rényi, radius for geometric graphs). Each cell runs `reps`
//! instances; per instance the exact burning number comes from the
//! brute-force oracle and every requested method counts a success when its
//! witness is valid and matches the oracle. Instance seeds derive from the
//! root seed by the documented splitting rule, so a root seed replays the
//! whole table bit-for-bit.

use crate::burning::brute_force_burning_number;
use crate::derive_seed;
use crate::error::Error;
use crate::graph::Graph;
use crate::qubo::PenaltyMode;
use crate::solvers::{binary_search_burning, Backend, Embedding, InitialBound, WitnessSource};
use crate::Result;
use serde::Serialize;

/// Parameter of a bench cell: the fraction-of-n label (`1/2n`, `5/n`, `0.45`)
/// and its resolved numeric value.
#[derive(Clone, Debug, Serialize)]
pub struct BenchParam {
    pub label: String,
    pub value: f64,
}

impl BenchParam {
    /// Parses `a/bn` (meaning `a / (b n)`), `a/n`, or a plain float.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let bad = || Error::Parameter(format!("bad bench parameter '{s}'"));
        let value = if let Some((num, den)) = s.split_once('/') {
            let a: f64 = num.trim().parse().map_err(|_| bad())?;
            let den = den.trim();
            let rest = den.strip_suffix('n').ok_or_else(bad)?;
            let b: f64 = if rest.is_empty() {
                1.0
            } else {
                rest.parse().map_err(|_| bad())?
            };
            a / (b * n as f64)
        } else {
            s.parse().map_err(|_| bad())?
        };
        Ok(BenchParam {
            label: s.to_string(),
            value,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMethod {
    UquboUniform,
    UquboGuided,
    Cmcp,
}

impl BenchMethod {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "uqubo-uniform" => BenchMethod::UquboUniform,
            "uqubo-guided" => BenchMethod::UquboGuided,
            "cmcp" => BenchMethod::Cmcp,
            other => return Err(Error::Parameter(format!("unknown bench method '{other}'"))),
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            BenchMethod::UquboUniform => "uqubo-uniform",
            BenchMethod::UquboGuided => "uqubo-guided",
            BenchMethod::Cmcp => "cmcp",
        }
    }

    fn embedding(&self) -> Embedding {
        match self {
            BenchMethod::UquboUniform => Embedding::UQubo(PenaltyMode::Uniform),
            BenchMethod::UquboGuided => Embedding::UQubo(PenaltyMode::Guided),
            BenchMethod::Cmcp => Embedding::Cmcp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchFamily {
    ErdosRenyi,
    Geometric,
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub family: BenchFamily,
    pub n: usize,
    pub params: Vec<BenchParam>,
    pub reps: usize,
    pub methods: Vec<BenchMethod>,
    pub root_seed: u64,
    pub oracle_limit: Option<usize>,
}

/// One method's outcome on one instance; `note` carries the accepted
/// probe's record (including the solution's QUBO energy for the unbalanced
/// embeddings).
#[derive(Clone, Debug, Serialize)]
pub struct MethodOutcome {
    pub method: String,
    pub found: u32,
    pub success: bool,
    pub note: String,
}

/// One instance's outcomes.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub rep: usize,
    pub seed: u64,
    pub edges: usize,
    pub components: usize,
    pub oracle: u32,
    pub found: Vec<MethodOutcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchCell {
    pub param: String,
    /// Success percentage per method, in method order.
    pub success_percent: Vec<(String, f64)>,
    pub avg_components: f64,
    pub records: Vec<BenchRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchTable {
    pub family: BenchFamily,
    pub n: usize,
    pub reps: usize,
    pub root_seed: u64,
    pub cells: Vec<BenchCell>,
}

impl BenchTable {
    /// Tab-separated view: one row per parameter, one success column per
    /// method, mean component count last.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("param");
        if let Some(first) = self.cells.first() {
            for (m, _) in &first.success_percent {
                out.push('\t');
                out.push_str(m);
            }
        }
        out.push_str("\t<c>\n");
        for cell in &self.cells {
            out.push_str(&cell.param);
            for (_, pct) in &cell.success_percent {
                out.push_str(&format!("\t{pct:.1}%"));
            }
            out.push_str(&format!("\t{:.2}\n", cell.avg_components));
        }
        out
    }
}

/// Runs the whole table. Replayable: identical spec and root seed give
/// identical graphs and verdicts.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchTable> {
    if spec.reps < 1 {
        return Err(Error::Parameter("bench needs at least one replication".into()));
    }
    let scratch = std::env::temp_dir();
    let mut cells = Vec::with_capacity(spec.params.len());
    for (cell_idx, param) in spec.params.iter().enumerate() {
        let mut records = Vec::with_capacity(spec.reps);
        let mut successes = vec![0usize; spec.methods.len()];
        let mut component_sum = 0usize;
        for rep in 0..spec.reps {
            let seed = derive_seed(spec.root_seed, (cell_idx as u64) << 32 | rep as u64);
            let graph = match spec.family {
                BenchFamily::ErdosRenyi => Graph::generate_erdos_renyi(spec.n, param.value, seed)?,
                BenchFamily::Geometric => Graph::generate_geometric(spec.n, param.value, seed)?,
            };
            let (_, components) = graph.connected_components();
            component_sum += components;
            let (oracle, _) = brute_force_burning_number(&graph, spec.oracle_limit)?;
            let mut found = Vec::with_capacity(spec.methods.len());
            for (m_idx, method) in spec.methods.iter().enumerate() {
                let report = binary_search_burning(
                    &graph,
                    method.embedding(),
                    &Backend::internal(),
                    InitialBound::Greedy,
                    &scratch,
                )?;
                // A success is a sequence the embedding itself produced, of
                // optimal length; fallback witnesses never count.
                let success = report.witness_source == WitnessSource::Probe
                    && report.burning_number == oracle;
                if success {
                    successes[m_idx] += 1;
                }
                let accepted = format!("g={}", report.burning_number);
                let note = if report.witness_source == WitnessSource::Probe {
                    report
                        .iterations
                        .iter()
                        .find(|it| it.label == accepted)
                        .map(|it| it.outcome.clone())
                        .unwrap_or_default()
                } else {
                    "no probe succeeded".into()
                };
                found.push(MethodOutcome {
                    method: method.label().to_string(),
                    found: report.burning_number,
                    success,
                    note,
                });
            }
            records.push(BenchRecord {
                rep,
                seed,
                edges: graph.edge_count(),
                components,
                oracle,
                found,
            });
        }
        cells.push(BenchCell {
            param: param.label.clone(),
            success_percent: spec
                .methods
                .iter()
                .zip(&successes)
                .map(|(m, &s)| (m.label().to_string(), 100.0 * s as f64 / spec.reps as f64))
                .collect(),
            avg_components: component_sum as f64 / spec.reps as f64,
            records,
        });
    }
    Ok(BenchTable {
        family: spec.family,
        n: spec.n,
        reps: spec.reps,
        root_seed: spec.root_seed,
        cells,
    })
}
