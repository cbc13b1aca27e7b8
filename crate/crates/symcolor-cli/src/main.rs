//! Command-line front end: reduce, color, estimate, verify and compare
//! graphs given as DIMACS `.col` files. Every command prints one UTF-8 JSON
//! document on stdout with the fields `tool_version`, `command`, `input`,
//! `result` and `diagnostics`; identical flags and seed produce byte-identical
//! output. Exit codes: 0 success, 1 usage or parse error, 2 failed
//! precondition (disconnected input, state cap, enumeration budget),
//! 3 no valid coloring, 4 verification mismatch.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use symcolor::error::{Error, Result};
use symcolor::estimate;
use symcolor::graph::{is_valid_coloring, parse_dimacs, Graph};
use symcolor::oracle;
use symcolor::pipeline::{self, SolveOptions};
use symcolor::reduce::{reduce_recursive, ReducePolicy, ReductionTree, SolveMode, TreeNode};
use symcolor::sim::{self, ColoringState, SimConfig};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "symcolor", version, about = "Symmetry-aware reduction and simulated quantum search for graph K-coloring")]
struct Cli {
    /// Seed for the simulated measurements.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Smallest daughter a cut may leave behind; smaller cuts are skipped.
    #[arg(long, global = true, default_value_t = 3)]
    min_size: usize,

    /// Maximum reduction depth (unlimited when omitted).
    #[arg(long, global = true)]
    max_depth: Option<usize>,

    /// Largest simulated state size (K^N amplitudes) accepted.
    #[arg(long, global = true, default_value_t = 1u128 << 24)]
    state_cap: u128,

    /// Pretty-print the JSON document (same data, indented).
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the reduction tree: symmetry axes, cut vertices and bridges.
    Reduce {
        /// Graph in DIMACS .col format.
        file: PathBuf,
    },
    /// Reduce, solve the leaves with the simulated search, and reassemble a
    /// full coloring.
    Color {
        /// Graph in DIMACS .col format.
        file: PathBuf,
        /// Color budget K.
        #[arg(long)]
        colors: u32,
    },
    /// Qubit, gate and iteration costs before and after reduction.
    Estimate {
        /// Graph in DIMACS .col format.
        file: PathBuf,
        /// Color budget K (defaults to the worst case K = N).
        #[arg(long)]
        colors: Option<u32>,
    },
    /// Cross-check the simulator against exhaustive enumeration and the
    /// closed-form cost identities on one instance.
    Verify {
        /// Graph in DIMACS .col format.
        file: PathBuf,
        /// Color budget K.
        #[arg(long)]
        colors: u32,
    },
    /// Compare the node-axis and edge-axis techniques for an N-node graph
    /// with m fixed nodes.
    Compare {
        /// Node count N (even, at least 4).
        #[arg(long)]
        nodes: u32,
        /// Fixed-node count m (2 <= m < N).
        #[arg(long)]
        fixed: u32,
    },
}

/// Top-level JSON document; field order is part of the output contract.
#[derive(Serialize)]
struct Envelope<'a> {
    tool_version: &'a str,
    command: &'a str,
    input: &'a str,
    result: Value,
    diagnostics: Value,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DimacsParse(_) | Error::Graph(_) | Error::InvalidArgument(_) => 1,
        Error::Unsolvable { .. } => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<()> {
    let policy = ReducePolicy { min_size: cli.min_size, max_depth: cli.max_depth };
    match &cli.command {
        Command::Reduce { file } => cmd_reduce(cli, file, policy),
        Command::Color { file, colors } => cmd_color(cli, file, *colors, policy),
        Command::Estimate { file, colors } => cmd_estimate(cli, file, *colors, policy),
        Command::Verify { file, colors } => cmd_verify(cli, file, *colors, policy),
        Command::Compare { nodes, fixed } => cmd_compare(cli, *nodes, *fixed),
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::DimacsParse(format!("cannot read {}: {e}", path.display())))?;
    parse_dimacs(&text)
}

fn emit(cli: &Cli, command: &str, input: &str, result: Value, diagnostics: Value) {
    let envelope =
        Envelope { tool_version: TOOL_VERSION, command, input, result, diagnostics };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&envelope)
    } else {
        serde_json::to_string(&envelope)
    }
    .expect("report serialization");
    println!("{text}");
}

/// Flags echoed into every diagnostics block so a document is reproducible
/// from its own contents.
fn flag_diagnostics(cli: &Cli) -> Value {
    json!({
        "seed": cli.seed,
        "min_size": cli.min_size,
        "max_depth": cli.max_depth,
        "state_cap": cli.state_cap.to_string(),
    })
}

fn graph_diagnostics(cli: &Cli, g: &Graph) -> Value {
    let mut d = flag_diagnostics(cli);
    d["nodes"] = json!(g.node_count());
    d["edges"] = json!(g.edge_count());
    d
}

/// One summary object per reduction step, in depth-first order.
fn step_summaries(tree: &ReductionTree, depth: usize, out: &mut Vec<Value>) {
    if let TreeNode::Step(step) = &tree.node {
        out.push(json!({
            "depth": depth,
            "kind": step.axis.kind,
            "parent_nodes": tree.graph.node_count(),
            "fixed_nodes": step.axis.fixed_nodes,
            "crossed_edges": step.axis.crossed_edges,
            "daughter1_nodes": step.daughter1.map,
            "daughter2_nodes": step.daughter2.map,
            "solve_mode": step.solve_mode,
            "solve_first": step.solve_first,
            "constraints": step.constraints,
            "savings": step.savings,
        }));
        for d in [&step.daughter1, &step.daughter2] {
            if let Some(sub) = &d.subtree {
                step_summaries(sub, depth + 1, out);
            }
        }
    }
}

fn cmd_reduce(cli: &Cli, file: &Path, policy: ReducePolicy) -> Result<()> {
    let g = load_graph(file)?;
    let tree = reduce_recursive(&g, &policy)?;
    let mut steps = Vec::new();
    step_summaries(&tree, 0, &mut steps);
    let leaf_sizes: Vec<u32> =
        tree.solved_leaves().iter().map(|leaf| leaf.node_count()).collect();
    let result = json!({
        "step_count": tree.step_count(),
        "steps": steps,
        "solved_leaf_sizes": leaf_sizes,
        "tree": tree,
    });
    emit(cli, "reduce", &file.display().to_string(), result, graph_diagnostics(cli, &g));
    Ok(())
}

fn cmd_color(cli: &Cli, file: &Path, colors: u32, policy: ReducePolicy) -> Result<()> {
    if colors == 0 {
        return Err(Error::InvalidArgument("--colors must be at least 1".into()));
    }
    let g = load_graph(file)?;
    let options = SolveOptions {
        colors,
        seed: cli.seed,
        policy,
        sim: SimConfig { state_cap: cli.state_cap, ..SimConfig::default() },
    };
    let outcome = pipeline::solve(&g, &options)?;
    let valid = is_valid_coloring(&g, &outcome.coloring)?;
    let bitstrings: Vec<&str> =
        outcome.leaf_reports.iter().map(|r| r.bitstring.as_str()).collect();
    let result = json!({
        "coloring": outcome.coloring,
        "valid": valid,
        "step_count": outcome.tree.step_count(),
        "leaf_bitstrings": bitstrings,
        "leaf_reports": outcome.leaf_reports,
    });
    emit(cli, "color", &file.display().to_string(), result, graph_diagnostics(cli, &g));
    Ok(())
}

fn cmd_estimate(cli: &Cli, file: &Path, colors: Option<u32>, policy: ReducePolicy) -> Result<()> {
    let g = load_graph(file)?;
    let tree = reduce_recursive(&g, &policy)?;
    let pair = estimate::report(&g, &tree, colors)?;
    let result = serde_json::to_value(&pair).expect("report serialization");
    let mut diagnostics = graph_diagnostics(cli, &g);
    diagnostics["colors"] = json!(colors.unwrap_or(g.node_count()));
    emit(cli, "estimate", &file.display().to_string(), result, diagnostics);
    Ok(())
}

fn cmd_compare(cli: &Cli, nodes: u32, fixed: u32) -> Result<()> {
    let choice = estimate::compare_techniques(nodes, fixed)?;
    let result = json!({
        "nodes": nodes,
        "fixed": fixed,
        "technique": choice.technique,
        "rule": choice.rule,
        "delta": choice.delta,
    });
    emit(cli, "compare", &format!("nodes={nodes},fixed={fixed}"), result, json!({}));
    Ok(())
}

/*────────── verify: simulator vs enumeration vs closed forms ──────────*/

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: String) -> Check {
        Check { name, pass, detail }
    }
}

fn cmd_verify(cli: &Cli, file: &Path, colors: u32, policy: ReducePolicy) -> Result<()> {
    if colors == 0 {
        return Err(Error::InvalidArgument("--colors must be at least 1".into()));
    }
    let g = load_graph(file)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.node_count();
    let k = colors;

    // Ground truth by exhaustive enumeration (budget-limited).
    let enumerated = oracle::enumerate_valid(&g, k)?;

    // The simulator's marked set over the same space.
    let mut state = ColoringState::uniform(n, k, cli.state_cap)?;
    state.mark_valid(&g, &[])?;
    let total = state.state_size() as u128;
    let marked = state.marked_indices().len() as u128;

    let mut checks = Vec::new();

    let decoded: Vec<Vec<u32>> =
        state.marked_indices().iter().map(|&i| state.decode(i)).collect();
    let listed: Vec<Vec<u32>> = enumerated.iter().map(|s| s.colors().to_vec()).collect();
    checks.push(Check::new(
        "marked-set-matches-enumeration",
        decoded == listed,
        format!("{} marked states, {} enumerated colorings", decoded.len(), listed.len()),
    ));

    let counted = oracle::count_valid(&g, k)?;
    checks.push(Check::new(
        "valid-count-agrees",
        counted == marked as u64,
        format!("count {counted} vs {marked} marked"),
    ));

    if marked > 0 {
        let t = sim::optimal_iterations(total, marked)?;
        state.amplify(t)?;
        let simulated = state.marked_probability();
        let closed = sim::grover_success_probability(total, marked, t);
        let floor = 1.0 - marked as f64 / total as f64;
        checks.push(Check::new(
            "amplified-probability-matches-closed-form",
            (simulated - closed).abs() <= 1e-9 && simulated >= floor - 1e-9,
            format!("{t} rounds: simulated {simulated}, closed form {closed}"),
        ));
    } else {
        checks.push(Check::new(
            "amplified-probability-matches-closed-form",
            true,
            "skipped: nothing to amplify".into(),
        ));
    }

    let options = SolveOptions {
        colors,
        seed: cli.seed,
        policy,
        sim: SimConfig { state_cap: cli.state_cap, ..SimConfig::default() },
    };
    match pipeline::solve(&g, &options) {
        Ok(outcome) => {
            let member = enumerated.iter().any(|s| s.same_assignment(&outcome.coloring));
            let valid = is_valid_coloring(&g, &outcome.coloring)?;
            checks.push(Check::new(
                "search-returns-valid-member",
                valid && member,
                format!(
                    "reconstructed coloring valid: {valid}, within enumerated set: {member}"
                ),
            ));
        }
        Err(Error::Unsolvable { .. }) => {
            checks.push(Check::new(
                "search-returns-valid-member",
                enumerated.is_empty(),
                "search reports unsolvable; enumeration must agree".into(),
            ));
        }
        Err(other) => return Err(other),
    }

    let tree = reduce_recursive(&g, &policy)?;
    let mut mismatches = Vec::new();
    savings_identity(&tree, &mut mismatches);
    checks.push(Check::new(
        "step-savings-match-complexity-differences",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{} steps checked", tree.step_count())
        } else {
            mismatches.join("; ")
        },
    ));

    let pair = estimate::report(&g, &tree, Some(k))?;
    let qubit_identity =
        pair.before.qubits_exact == n as u64 * k as u64 + g.edge_count() as u64 + 1;
    let gate_identity = pair.before.gates.total
        == pair.before.gates.init + pair.before.gates.mark + pair.before.gates.amplify;
    let leaf_gates: u64 =
        tree.solved_leaves().iter().map(|l| estimate::gate_counts(l.node_count()).total).sum();
    let totals_identity = pair.after.gates_total == leaf_gates;
    checks.push(Check::new(
        "qubit-and-gate-identities",
        qubit_identity && gate_identity && totals_identity,
        format!(
            "qubits {} gates {} leaf-totals {}",
            qubit_identity, gate_identity, totals_identity
        ),
    ));

    let pass = checks.iter().all(|c| c.pass);
    let rendered: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
        .collect();
    let result = json!({ "pass": pass, "checks": rendered });
    let mut diagnostics = graph_diagnostics(cli, &g);
    diagnostics["colors"] = json!(k);
    diagnostics["state_size"] = json!(total.to_string());
    emit(cli, "verify", &file.display().to_string(), result, diagnostics);
    if !pass {
        std::process::exit(4);
    }
    Ok(())
}

/// Asserts, for every step, that the recorded saving equals the direct
/// qubit-complexity difference between the parent and its solved daughters.
fn savings_identity(tree: &ReductionTree, mismatches: &mut Vec<String>) {
    if let TreeNode::Step(step) = &tree.node {
        let parent = estimate::qubit_complexity(tree.graph.node_count());
        let d1 = estimate::qubit_complexity(step.daughter1.graph.node_count());
        let d2 = estimate::qubit_complexity(step.daughter2.graph.node_count());
        let expected = match step.solve_mode {
            SolveMode::MirrorOne => parent - d1,
            _ => parent - d1 - d2,
        };
        if expected != step.savings {
            mismatches.push(format!(
                "{} step on {} nodes: recorded {}, direct difference {}",
                step.axis.kind,
                tree.graph.node_count(),
                step.savings,
                expected
            ));
        }
        for d in [&step.daughter1, &step.daughter2] {
            if let Some(sub) = &d.subtree {
                savings_identity(sub, mismatches);
            }
        }
    }
}
