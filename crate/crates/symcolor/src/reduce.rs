//! Cutting a graph along a selected axis and recursing on the daughters.
//!
//! Each cut produces two daughter graphs plus the bookkeeping needed to put
//! solutions back together: node maps from daughter-local ids to parent ids,
//! cross-daughter constraints in parent ids, and the solve mode that says
//! whether the second daughter is solved or mirrored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeMap};
use crate::symmetry::{self, Axis, AxisKind};

/// Knobs for the recursive reducer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducePolicy {
    /// A cut is admissible only if every daughter keeps at least this many
    /// nodes.
    pub min_size: usize,
    /// Stop cutting below this depth; `None` reduces until no admissible
    /// axis is left.
    pub max_depth: Option<usize>,
}

impl Default for ReducePolicy {
    fn default() -> Self {
        ReducePolicy { min_size: 3, max_depth: None }
    }
}

/// How the two daughters of a step are solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMode {
    /// Solve daughter 1, obtain daughter 2 by mirroring through the
    /// involution (1.a and 3.a, where the two sides are isomorphic halves).
    #[serde(rename = "solve-one-and-mirror")]
    MirrorOne,
    /// Solve both daughters, then enforce the critical-pair inequalities
    /// (2.a and 2.b).
    #[serde(rename = "solve-both-constrained")]
    BothConstrained,
    /// Solve both daughters, which overlap in one shared node that must keep
    /// one color (1.b).
    #[serde(rename = "solve-both-shared-node")]
    BothSharedNode,
}

/// A coupling between the daughters, stated over parent node ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    /// Nodes `a` and `b` must end up with the same color.
    Equal,
    /// Nodes `a` and `b` must end up with different colors.
    Differ,
}

/// One coupling constraint; `a` lies on side 1, `b` on side 2 (they coincide
/// for a fixed or shared node).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepConstraint {
    pub kind: ConstraintKind,
    pub a: u32,
    pub b: u32,
}

/// Which daughter a solver should color first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WhichDaughter {
    #[serde(rename = "daughter1")]
    One,
    #[serde(rename = "daughter2")]
    Two,
}

/// A daughter graph with its embedding into the parent. `subtree` is filled
/// by the recursive reducer for daughters that are actually solved; the
/// mirrored side of a 1.a or 3.a step keeps `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Daughter {
    pub graph: Graph,
    pub map: NodeMap,
    pub subtree: Option<ReductionTree>,
}

/// One applied cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub axis: Axis,
    pub solve_mode: SolveMode,
    pub daughter1: Daughter,
    pub daughter2: Daughter,
    /// The smaller daughter goes first so an unsolvable half fails fast.
    pub solve_first: WhichDaughter,
    pub constraints: Vec<StepConstraint>,
    /// Qubit-complexity units saved by this step.
    pub savings: u64,
}

/// A graph together with the cut applied to it, if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionTree {
    pub graph: Graph,
    pub node: TreeNode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    /// No admissible axis (or the depth limit): solve this graph directly.
    Leaf,
    Step(Box<ReductionStep>),
}

impl ReductionTree {
    pub fn is_leaf(&self) -> bool {
        matches!(self.node, TreeNode::Leaf)
    }

    /// Graphs that a solver must actually color, left to right.
    pub fn solved_leaves(&self) -> Vec<&Graph> {
        let mut out = Vec::new();
        collect_leaves(self, &mut out);
        out
    }

    /// Number of cut steps along all solved chains.
    pub fn step_count(&self) -> usize {
        match &self.node {
            TreeNode::Leaf => 0,
            TreeNode::Step(step) => {
                1 + [&step.daughter1, &step.daughter2]
                    .iter()
                    .filter_map(|d| d.subtree.as_ref())
                    .map(|t| t.step_count())
                    .sum::<usize>()
            }
        }
    }
}

fn collect_leaves<'a>(tree: &'a ReductionTree, out: &mut Vec<&'a Graph>) {
    match &tree.node {
        TreeNode::Leaf => out.push(&tree.graph),
        TreeNode::Step(step) => {
            for daughter in [&step.daughter1, &step.daughter2] {
                if let Some(sub) = &daughter.subtree {
                    collect_leaves(sub, out);
                }
            }
        }
    }
}

fn expect_kind(axis: &Axis, expected: AxisKind) -> Result<()> {
    if axis.kind != expected {
        return Err(Error::AxisKind {
            expected: expected.to_string(),
            got: axis.kind.to_string(),
        });
    }
    Ok(())
}

fn daughters(g: &Graph, axis: &Axis) -> Result<(Daughter, Daughter)> {
    let (g1, m1) = g.induced_subgraph(&axis.side1)?;
    let (g2, m2) = g.induced_subgraph(&axis.side2)?;
    Ok((
        Daughter { graph: g1, map: m1, subtree: None },
        Daughter { graph: g2, map: m2, subtree: None },
    ))
}

fn smaller_first(d1: &Daughter, d2: &Daughter) -> WhichDaughter {
    if d2.graph.node_count() < d1.graph.node_count() {
        WhichDaughter::Two
    } else {
        WhichDaughter::One
    }
}

/// Cuts along a node axis (1.a): two mirror halves sharing the fixed nodes,
/// which must agree in color.
pub fn cut_type_1a(g: &Graph, axis: &Axis) -> Result<ReductionStep> {
    expect_kind(axis, AxisKind::OneA)?;
    let (d1, d2) = daughters(g, axis)?;
    let constraints = equal_on(&axis.fixed_nodes);
    Ok(ReductionStep {
        axis: axis.clone(),
        solve_mode: SolveMode::MirrorOne,
        solve_first: WhichDaughter::One,
        constraints,
        savings: symmetry::axis_savings(g.node_count(), axis)?,
        daughter1: d1,
        daughter2: d2,
    })
}

/// Cuts along an edge axis (2.a): disjoint halves, crossed-edge endpoints
/// must differ.
pub fn cut_type_2a(g: &Graph, axis: &Axis) -> Result<ReductionStep> {
    expect_kind(axis, AxisKind::TwoA)?;
    let (d1, d2) = daughters(g, axis)?;
    let constraints = differ_on(&axis.critical_pairs);
    Ok(ReductionStep {
        axis: axis.clone(),
        solve_mode: SolveMode::BothConstrained,
        solve_first: WhichDaughter::One,
        constraints,
        savings: symmetry::axis_savings(g.node_count(), axis)?,
        daughter1: d1,
        daughter2: d2,
    })
}

/// Cuts along a mixed axis (3.a): mirror halves that share the fixed nodes
/// and are joined by crossed edges.
pub fn cut_type_3a(g: &Graph, axis: &Axis) -> Result<ReductionStep> {
    expect_kind(axis, AxisKind::ThreeA)?;
    let (d1, d2) = daughters(g, axis)?;
    let mut constraints = equal_on(&axis.fixed_nodes);
    constraints.extend(differ_on(&axis.critical_pairs));
    Ok(ReductionStep {
        axis: axis.clone(),
        solve_mode: SolveMode::MirrorOne,
        solve_first: WhichDaughter::One,
        constraints,
        savings: symmetry::axis_savings(g.node_count(), axis)?,
        daughter1: d1,
        daughter2: d2,
    })
}

/// Cuts at a cut vertex (1.b): both daughters contain the vertex and must
/// give it the same color.
pub fn cut_type_1b(g: &Graph, axis: &Axis) -> Result<ReductionStep> {
    expect_kind(axis, AxisKind::OneB)?;
    let (d1, d2) = daughters(g, axis)?;
    let constraints = equal_on(&axis.fixed_nodes);
    let solve_first = smaller_first(&d1, &d2);
    Ok(ReductionStep {
        axis: axis.clone(),
        solve_mode: SolveMode::BothSharedNode,
        solve_first,
        constraints,
        savings: symmetry::axis_savings(g.node_count(), axis)?,
        daughter1: d1,
        daughter2: d2,
    })
}

/// Cuts at a bridge (2.b): disjoint daughters whose bridge endpoints must
/// differ.
pub fn cut_type_2b(g: &Graph, axis: &Axis) -> Result<ReductionStep> {
    expect_kind(axis, AxisKind::TwoB)?;
    let (d1, d2) = daughters(g, axis)?;
    let constraints = differ_on(&axis.critical_pairs);
    let solve_first = smaller_first(&d1, &d2);
    Ok(ReductionStep {
        axis: axis.clone(),
        solve_mode: SolveMode::BothConstrained,
        solve_first,
        constraints,
        savings: symmetry::axis_savings(g.node_count(), axis)?,
        daughter1: d1,
        daughter2: d2,
    })
}

fn equal_on(nodes: &[u32]) -> Vec<StepConstraint> {
    nodes
        .iter()
        .map(|&v| StepConstraint { kind: ConstraintKind::Equal, a: v, b: v })
        .collect()
}

fn differ_on(pairs: &[(u32, u32)]) -> Vec<StepConstraint> {
    pairs
        .iter()
        .map(|&(a, b)| StepConstraint { kind: ConstraintKind::Differ, a, b })
        .collect()
}

/// Applies the cut that matches the axis kind.
pub fn cut_along(g: &Graph, axis: &Axis) -> Result<ReductionStep> {
    match axis.kind {
        AxisKind::OneA => cut_type_1a(g, axis),
        AxisKind::TwoA => cut_type_2a(g, axis),
        AxisKind::ThreeA => cut_type_3a(g, axis),
        AxisKind::OneB => cut_type_1b(g, axis),
        AxisKind::TwoB => cut_type_2b(g, axis),
    }
}

/// Reduces `g` as far as the policy allows: at each level the best
/// admissible axis is cut, and the reducer recurses into every daughter a
/// solver would color (both of them, except the mirrored side of a 1.a or
/// 3.a step).
pub fn reduce_recursive(g: &Graph, policy: &ReducePolicy) -> Result<ReductionTree> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    recurse(g, policy, 0)
}

fn recurse(g: &Graph, policy: &ReducePolicy, depth: usize) -> Result<ReductionTree> {
    if policy.max_depth.is_some_and(|limit| depth >= limit) {
        return Ok(ReductionTree { graph: g.clone(), node: TreeNode::Leaf });
    }
    let axes = symmetry::enumerate_axes(g)?;
    let Some(axis) = symmetry::select_axis(g, &axes, policy)? else {
        return Ok(ReductionTree { graph: g.clone(), node: TreeNode::Leaf });
    };
    let mut step = cut_along(g, &axis)?;
    step.daughter1.subtree = Some(recurse(&step.daughter1.graph, policy, depth + 1)?);
    if step.solve_mode != SolveMode::MirrorOne {
        step.daughter2.subtree = Some(recurse(&step.daughter2.graph, policy, depth + 1)?);
    }
    Ok(ReductionTree { graph: g.clone(), node: TreeNode::Step(Box::new(step)) })
}
