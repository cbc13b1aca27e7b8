//! Closed-form resource accounting: qubit counts, qubit-complexity savings
//! per cut type, gate counts, iteration bounds and the technique-selection
//! rule for choosing between a node axis and an edge axis.
//!
//! Every polynomial here is evaluated in exact integer arithmetic (the
//! divisions all come out exact under the stated preconditions; division
//! exactness is asserted). Floating point only enters at the final square
//! root of the iteration bound and in reported decimal values.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reduce::{ReductionTree, TreeNode};
use crate::symmetry::AxisKind;

/// Comparison base for the classical runtime this procedure is measured
/// against; the overall cost scales like `base^N`.
pub const RUNTIME_BASE: f64 = 1.9575;

fn exact_div(num: i128, den: i128) -> u64 {
    debug_assert_eq!(num % den, 0, "non-exact division {num}/{den}");
    u64::try_from(num / den).expect("negative or oversized count")
}

/// Total qubits for an N-node instance with K colors and A edge ancillas:
/// one-hot node registers, one ancilla per edge, one overall marker.
pub fn exact_qubit_count(n: u32, k: u32, a: u32) -> Result<u64> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and k >= 1".into()));
    }
    let max_edges = n as u64 * (n as u64 - 1) / 2;
    if a as u64 > max_edges {
        return Err(Error::InvalidArgument(format!(
            "{a} ancillas but an {n}-node simple graph has at most {max_edges} edges"
        )));
    }
    Ok(n as u64 * k as u64 + a as u64 + 1)
}

/// Worst-case qubit complexity of an N-node instance (K = N, complete-graph
/// ancilla count): `(3N^2 - N + 2) / 2`.
pub fn qubit_complexity(n: u32) -> u64 {
    let n = n as i128;
    exact_div(3 * n * n - n + 2, 2)
}

/// Qubit-complexity saving for a node-axis (1.a) cut: the parent is replaced
/// by one mirrored daughter of `(n + m) / 2` nodes.
pub fn savings_type_1a(n: u32, m: u32) -> Result<u64> {
    if n < 3 || m == 0 || m >= n || (n - m) % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "type 1.a needs n >= 3, 1 <= m < n, m ≡ n (mod 2); got n={n} m={m}"
        )));
    }
    let (n, m) = (n as i128, m as i128);
    Ok(exact_div(9 * n * n - 3 * m * m - 6 * n * m - 2 * n + 2 * m, 8))
}

/// Saving for an edge-axis (2.a) cut: two daughters of `n / 2` nodes each,
/// both solved.
pub fn savings_type_2a(n: u32) -> Result<u64> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("type 2.a needs even n >= 2, got {n}")));
    }
    let half = (n / 2) as i128;
    Ok(exact_div(3 * half * half - 1, 1))
}

/// Saving for a mixed-axis (3.a) cut; same size law and saving as 1.a.
pub fn savings_type_3a(n: u32, m: u32) -> Result<u64> {
    savings_type_1a(n, m)
}

/// Saving for a cut-vertex (1.b) cut into daughters of n1 and n2 nodes
/// sharing one node (`n1 + n2 = N + 1`).
pub fn savings_type_1b(n1: u32, n2: u32) -> Result<u64> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidArgument(format!(
            "type 1.b daughters each need >= 2 nodes, got {n1} and {n2}"
        )));
    }
    let (n1, n2) = (n1 as i128, n2 as i128);
    Ok(exact_div(3 * (n1 - 1) * (n2 - 1) - 2, 1))
}

/// Saving for a bridge (2.b) cut into disjoint daughters of n1 and n2 nodes
/// (`n1 + n2 = N`).
pub fn savings_type_2b(n1: u32, n2: u32) -> Result<u64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument("type 2.b daughters must be non-empty".into()));
    }
    Ok(exact_div(3 * n1 as i128 * n2 as i128 - 1, 1))
}

/// Size of the coloring state space: `k^n`.
pub fn coloring_matrices(n: u32, k: u32) -> BigUint {
    BigUint::from(k).pow(n)
}

/// Gate counts for one solve of an N-node instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub init: u64,
    pub mark: u64,
    pub amplify: u64,
    pub total: u64,
}

pub fn gate_counts(n: u32) -> GateCounts {
    let n = n as i128;
    let init = exact_div(4 * n * n - 3 * n, 1);
    let mark = exact_div(n * n * n - n * n, 2);
    let amplify = exact_div(n * n * n + 11 * n * n - 8 * n + 9, 1);
    let total = init + mark + amplify;
    debug_assert_eq!(total, exact_div(3 * n * n * n + 29 * n * n - 22 * n + 18, 2));
    GateCounts { init, mark, amplify, total }
}

/// Iteration estimate `ceil(pi/4 * sqrt(p / k))` for `p` states of which `k`
/// are marked. The ratio is reduced with big-integer division before any
/// floating point.
pub fn iteration_bound_general(p: &BigUint, k: &BigUint) -> Result<u64> {
    use num_traits::Zero;
    if p.is_zero() || k.is_zero() {
        return Err(Error::InvalidArgument("need p >= 1 and k >= 1 marked".into()));
    }
    if k > p {
        return Err(Error::InvalidArgument("marked count k exceeds state count p".into()));
    }
    let (q, r) = (p / k, p % k);
    let ratio = match (q.to_f64(), r.to_f64(), k.to_f64()) {
        (Some(q), Some(r), Some(k)) => q + r / k,
        _ => return Err(Error::Budget("iteration ratio exceeds f64 range".into())),
    };
    let t = (std::f64::consts::FRAC_PI_4 * ratio.sqrt()).ceil();
    if !t.is_finite() || t > u64::MAX as f64 {
        return Err(Error::Budget("iteration bound exceeds u64".into()));
    }
    Ok(t as u64)
}

/// Worst-case iteration estimate for an N-node instance: `p = N^N` states,
/// `k = N!` marked (all colorings valid on the edgeless worst case).
pub fn iteration_bound(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("need n >= 1".into()));
    }
    let p = BigUint::from(n).pow(n);
    let k = (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
    iteration_bound_general(&p, &k)
}

/// Runtime comparison exponent: the procedure competes with a classical
/// `1.9575^N` algorithm, so reducing N transforms the exponent directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuntimeExponent {
    pub base: f64,
    pub exponent: u32,
    pub log10: f64,
}

pub fn runtime_exponent(n: u32) -> RuntimeExponent {
    RuntimeExponent { base: RUNTIME_BASE, exponent: n, log10: n as f64 * RUNTIME_BASE.log10() }
}

/*────────── technique selection (node axis vs edge axis) ──────────*/

/// Which cut to prefer when a graph admits both a 1.a and a 2.a axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Technique {
    #[serde(rename = "prefer-1a")]
    Prefer1a,
    #[serde(rename = "prefer-2a")]
    Prefer2a,
}

/// How the decision was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecisionRule {
    #[serde(rename = "threshold-2a")]
    Threshold2a,
    #[serde(rename = "threshold-1a")]
    Threshold1a,
    #[serde(rename = "band-evaluation")]
    BandEvaluation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TechniqueChoice {
    pub technique: Technique,
    pub rule: DecisionRule,
    /// Saving difference 1.a minus 2.a; positive favors the node axis.
    pub delta: f64,
}

/// `8 * (savings_1a(n, m) - savings_2a(n))`, exact.
fn technique_delta_8(n: u32, m: u32) -> i64 {
    let (n, m) = (n as i64, m as i64);
    3 * n * n - 3 * m * m - 6 * n * m - 2 * n + 2 * m + 8
}

/// Exact value of `savings_1a(n, m) - savings_2a(n)` (a multiple of 1/8, so
/// the f64 is exact).
pub fn technique_delta(n: u32, m: u32) -> f64 {
    technique_delta_8(n, m) as f64 / 8.0
}

/// Decides 1.a vs 2.a for an even-order graph that admits both: a coarse
/// threshold each way, and the exact saving difference inside the band
/// between them. The band is empty below N = 50, so small graphs always
/// resolve by threshold.
pub fn compare_techniques(n: u32, m: u32) -> Result<TechniqueChoice> {
    if n < 4 || n % 2 != 0 || m < 2 || m >= n {
        return Err(Error::InvalidArgument(format!(
            "technique comparison needs even n >= 4 and 2 <= m < n; got n={n} m={m}"
        )));
    }
    let delta = technique_delta(n, m);
    // m >= 3n/7 favors the edge axis.
    if 7 * m as u64 >= 3 * n as u64 {
        return Ok(TechniqueChoice { technique: Technique::Prefer2a, rule: DecisionRule::Threshold2a, delta });
    }
    // m < n / 2.4446303 favors the node axis (threshold constant from the
    // saving polynomial's root; compared exactly as integers).
    if 24_446_303 * (m as u64) < 10_000_000 * (n as u64) {
        return Ok(TechniqueChoice { technique: Technique::Prefer1a, rule: DecisionRule::Threshold1a, delta });
    }
    let technique = if technique_delta_8(n, m) > 0 { Technique::Prefer1a } else { Technique::Prefer2a };
    Ok(TechniqueChoice { technique, rule: DecisionRule::BandEvaluation, delta })
}

/*────────── per-instance reports ──────────*/

/// Resource picture for solving a graph in one shot.
#[derive(Debug, Clone, Serialize)]
pub struct ResourceReport {
    pub nodes: u32,
    pub edges: u32,
    pub color_budget: u32,
    pub qubits_exact: u64,
    pub qubits_worst_case: u64,
    pub qubit_complexity: u64,
    pub coloring_matrix: String,
    pub gates: GateCounts,
    pub iteration_bound: Option<u64>,
    pub runtime: RuntimeExponent,
}

/// Resource profile of solving `g` directly with a budget of `k` colors.
pub fn single_report(g: &Graph, k: u32) -> Result<ResourceReport> {
    let n = g.node_count();
    Ok(ResourceReport {
        nodes: n,
        edges: g.edge_count(),
        color_budget: k,
        qubits_exact: exact_qubit_count(n, k, g.edge_count())?,
        qubits_worst_case: exact_qubit_count(n, n, n * (n - 1) / 2)?,
        qubit_complexity: qubit_complexity(n),
        coloring_matrix: coloring_matrices(n, k).to_string(),
        gates: gate_counts(n),
        iteration_bound: iteration_bound(n).ok(),
        runtime: runtime_exponent(n),
    })
}

/// Saving attributed to one applied reduction step.
#[derive(Debug, Clone, Serialize)]
pub struct StepSavings {
    pub kind: AxisKind,
    pub parent_nodes: u32,
    pub daughter_nodes: (u32, u32),
    pub fixed_nodes: u32,
    pub crossed_edges: u32,
    pub saving: u64,
}

/// Resource picture after a reduction tree is applied: per-leaf costs over
/// the leaves that are actually solved, plus per-step savings.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedReport {
    pub solved_leaves: Vec<ResourceReport>,
    pub qubit_complexity_total: u64,
    pub gates_total: u64,
    pub iteration_bound_total: Option<u64>,
    pub savings_per_step: Vec<StepSavings>,
    /// Coloring-matrix sizes per tree depth along the solved chains,
    /// starting with the root.
    pub matrices_by_order: Vec<String>,
    pub recommendation: String,
}

/// Before/after resource comparison for a reduction tree.
#[derive(Debug, Clone, Serialize)]
pub struct ReportPair {
    pub before: ResourceReport,
    pub after: ReducedReport,
}

/// Builds the before/after report for `tree` over its root graph. `colors`
/// defaults to the worst case K = N.
pub fn report(g: &Graph, tree: &ReductionTree, colors: Option<u32>) -> Result<ReportPair> {
    let k = colors.unwrap_or(g.node_count());
    let before = single_report(g, k)?;

    let mut solved_leaves = Vec::new();
    let mut savings_per_step = Vec::new();
    let mut matrices: Vec<BigUint> = Vec::new();
    walk(tree, k, 0, &mut solved_leaves, &mut savings_per_step, &mut matrices)?;

    let recommendation = match &tree.node {
        TreeNode::Leaf => "no profitable axis; solve the graph directly".to_string(),
        TreeNode::Step(step) => format!(
            "cut along the {} axis first (saves {} qubit-complexity units)",
            step.axis.kind, step.savings
        ),
    };

    let after = ReducedReport {
        qubit_complexity_total: solved_leaves.iter().map(|l| l.qubit_complexity).sum(),
        gates_total: solved_leaves.iter().map(|l| l.gates.total).sum(),
        iteration_bound_total: solved_leaves
            .iter()
            .map(|l| l.iteration_bound)
            .try_fold(0u64, |acc, it| it.map(|x| acc + x)),
        savings_per_step,
        matrices_by_order: matrices.iter().map(|m| m.to_string()).collect(),
        recommendation,
        solved_leaves,
    };
    Ok(ReportPair { before, after })
}

fn walk(
    tree: &ReductionTree,
    k: u32,
    depth: usize,
    leaves: &mut Vec<ResourceReport>,
    steps: &mut Vec<StepSavings>,
    matrices: &mut Vec<BigUint>,
) -> Result<()> {
    use num_traits::Zero;
    if matrices.len() == depth {
        matrices.push(BigUint::zero());
    }
    matrices[depth] += coloring_matrices(tree.graph.node_count(), k);
    match &tree.node {
        TreeNode::Leaf => leaves.push(single_report(&tree.graph, k)?),
        TreeNode::Step(step) => {
            steps.push(StepSavings {
                kind: step.axis.kind,
                parent_nodes: tree.graph.node_count(),
                daughter_nodes: (
                    step.daughter1.graph.node_count(),
                    step.daughter2.graph.node_count(),
                ),
                fixed_nodes: step.axis.fixed_nodes.len() as u32,
                crossed_edges: step.axis.crossed_edges.len() as u32,
                saving: step.savings,
            });
            for daughter in [&step.daughter1, &step.daughter2] {
                if let Some(sub) = &daughter.subtree {
                    walk(sub, k, depth + 1, leaves, steps, matrices)?;
                }
            }
        }
    }
    Ok(())
}
