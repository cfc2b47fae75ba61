//! `gbp`: the graph-burning toolkit command line.
//!
//! Subcommands: `gen` (graph generation with a JSON sidecar), `emit` (LP and
//! QUBO files with a count manifest), `solve` (oracle, binary search over
//! any embedding, row generation, or a single direct model solve),
//! `validate` (burning-sequence check with diagnostics) and `bench`
//! (replayable success-rate tables over random-graph families).
//!
//! Exit codes: 0 optimal/valid, 1 invalid or upper-bound-only, 2 usage or
//! data errors, 3 capacity, 4 backend failures.

mod commands;

use clap::{Parser, Subcommand};
use gbp_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gbp", version, about = "Graph burning numbers via mathematical programming")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file plus a JSON sidecar with its vital statistics.
    Gen {
        /// Family: er, geo, path, cycle, complete, star, grid.
        family: String,
        /// Vertex count (er, geo, path, cycle, complete) or leaf count (star).
        #[arg(long)]
        n: Option<usize>,
        /// Edge probability (er).
        #[arg(long)]
        p: Option<f64>,
        /// Connection radius (geo).
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge-list output path; the sidecar lands at <out>.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a formulation and write it as an .lp or .qubo file plus a
    /// manifest with its variable/constraint counts.
    Emit {
        /// prop-milp, cov-csp, cov-ilp, gbp-ilp, squbo, uqubo.
        formulation: String,
        #[arg(long, conflicts_with = "gen_spec")]
        graph: Option<PathBuf>,
        /// Inline generator spec, e.g. path:9, grid:10x10, er:n=9,p=0.3,seed=1.
        #[arg(long = "gen", value_name = "SPEC")]
        gen_spec: Option<String>,
        /// Input format: auto (by extension), edge-list, matrix-market.
        #[arg(long, default_value = "auto")]
        format: String,
        /// Column count for cov-csp, cov-ilp, squbo, uqubo.
        #[arg(long)]
        g: Option<u32>,
        /// Step bound for prop-milp and gbp-ilp; "auto" uses the greedy bound.
        #[arg(long = "U", value_name = "U")]
        upper: Option<String>,
        /// Penalty rule for uqubo: uniform or guided.
        #[arg(long, default_value = "guided")]
        penalty: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve for the burning number (or a single model) and print a JSON
    /// report.
    Solve {
        #[arg(long, conflicts_with = "gen_spec")]
        graph: Option<PathBuf>,
        #[arg(long = "gen", value_name = "SPEC")]
        gen_spec: Option<String>,
        /// Input format: auto (by extension), edge-list, matrix-market.
        #[arg(long, default_value = "auto")]
        format: String,
        /// oracle | binary-search:<embedding> | row-generation |
        /// direct:<formulation>; embeddings: cmcp, cov-csp, cov-ilp, squbo,
        /// uqubo-uniform, uqubo-guided.
        #[arg(long)]
        method: String,
        /// internal | sa | external.
        #[arg(long, default_value = "internal")]
        backend: String,
        /// External solver command with {in} and {out} placeholders.
        #[arg(long)]
        solver_cmd: Option<String>,
        /// Line marker an external solver prints on infeasible models.
        #[arg(long)]
        infeasible_marker: Option<String>,
        /// Step bound for row-generation and direct U-models; "auto" uses
        /// the greedy bound.
        #[arg(long = "U", value_name = "U")]
        upper: Option<String>,
        /// Column count for direct g-models.
        #[arg(long)]
        g: Option<u32>,
        /// Penalty rule for direct uqubo solves.
        #[arg(long, default_value = "guided")]
        penalty: String,
        /// Initial upper bound of the binary search: greedy | n.
        #[arg(long, default_value = "greedy")]
        initial_bound: String,
        #[arg(long, default_value_t = 100_000_000)]
        node_budget: u64,
        /// Vertex cap for the oracle method.
        #[arg(long)]
        oracle_limit: Option<usize>,
        #[arg(long, default_value_t = 10.0)]
        sa_temp: f64,
        #[arg(long, default_value_t = 0.95)]
        sa_cooling: f64,
        #[arg(long, default_value_t = 2000)]
        sa_steps: usize,
        #[arg(long, default_value_t = 8)]
        sa_restarts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Report destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a burning sequence against a graph.
    Validate {
        #[arg(long, conflicts_with = "gen_spec")]
        graph: Option<PathBuf>,
        #[arg(long = "gen", value_name = "SPEC")]
        gen_spec: Option<String>,
        /// Input format: auto (by extension), edge-list, matrix-market.
        #[arg(long, default_value = "auto")]
        format: String,
        /// JSON array of vertex labels in sequence order.
        #[arg(long)]
        sequence: PathBuf,
    },
    /// Success-rate table over a random-graph family, replayable by seed.
    Bench {
        /// er or geo.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated parameters: fractions of n like 1/2n, 5/n, or
        /// plain numbers.
        #[arg(long)]
        params: String,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        /// Comma-separated: uqubo-uniform, uqubo-guided, cmcp.
        #[arg(long)]
        methods: String,
        #[arg(long, default_value_t = 1)]
        root_seed: u64,
        #[arg(long)]
        oracle_limit: Option<usize>,
        /// TSV destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional per-instance JSON record dump.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::EmptyGraph
        | Error::Parameter(_)
        | Error::Data(_)
        | Error::Decode(_) => 2,
        Error::Capacity(_) => 3,
        Error::Backend { .. } | Error::Format(_) | Error::Io(_) => 4,
        // As command outcomes these are reported, not raised.
        Error::Infeasible | Error::NoBurningSequence => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen {
            family,
            n,
            p,
            r,
            rows,
            cols,
            seed,
            out,
        } => commands::run_gen(&family, n, p, r, rows, cols, seed, &out),
        Command::Emit {
            formulation,
            graph,
            gen_spec,
            format,
            g,
            upper,
            penalty,
            out,
        } => commands::run_emit(
            &formulation,
            graph.as_deref(),
            gen_spec.as_deref(),
            &format,
            g,
            upper.as_deref(),
            &penalty,
            &out,
        ),
        Command::Solve {
            graph,
            gen_spec,
            format,
            method,
            backend,
            solver_cmd,
            infeasible_marker,
            upper,
            g,
            penalty,
            initial_bound,
            node_budget,
            oracle_limit,
            sa_temp,
            sa_cooling,
            sa_steps,
            sa_restarts,
            seed,
            out,
        } => commands::run_solve(commands::SolveArgs {
            graph: graph.as_deref(),
            gen_spec: gen_spec.as_deref(),
            format,
            method,
            backend,
            solver_cmd,
            infeasible_marker,
            upper,
            g,
            penalty,
            initial_bound,
            node_budget,
            oracle_limit,
            sa_temp,
            sa_cooling,
            sa_steps,
            sa_restarts,
            seed,
            out,
        }),
        Command::Validate {
            graph,
            gen_spec,
            format,
            sequence,
        } => commands::run_validate(graph.as_deref(), gen_spec.as_deref(), &format, &sequence),
        Command::Bench {
            family,
            n,
            params,
            reps,
            methods,
            root_seed,
            oracle_limit,
            out,
            json,
        } => commands::run_bench_cmd(
            &family,
            n,
            &params,
            reps,
            &methods,
            root_seed,
            oracle_limit,
            out.as_deref(),
            json.as_deref(),
        ),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
