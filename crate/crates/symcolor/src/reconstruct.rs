//! Putting daughter colorings back together into a coloring of the parent.
//!
//! The operators work on coloring sequences in parent node ids: mirror a
//! solved half through the involution, pop nodes both daughters share,
//! concatenate disjoint halves, and recolor crossed-pair clashes. On top of
//! them, `reconstruct_tree` replays a whole reduction tree from the
//! colorings of its solved leaves.

use crate::error::{Error, Result};
use crate::graph::{is_valid_coloring, ColoringSequence, Graph};
use crate::reduce::{ConstraintKind, ReductionStep, ReductionTree, SolveMode, StepConstraint, TreeNode};
use crate::symmetry::Involution;

/// The solved half reflected to the other side: every node is replaced by
/// its image, colors ride along, order is kept.
pub fn mirror_sequence(s: &ColoringSequence, inv: &Involution) -> ColoringSequence {
    let nodes: Vec<u32> = s.nodes().iter().map(|&v| inv.image(v)).collect();
    ColoringSequence::new(nodes, s.colors().to_vec(), s.k())
        .expect("mirroring keeps nodes distinct and colors in range")
}

/// Removes one node (the copy a daughter shares with its sibling) from the
/// sequence.
pub fn pop_common(s: &ColoringSequence, node: u32) -> Result<ColoringSequence> {
    let Some(at) = s.nodes().iter().position(|&v| v == node) else {
        return Err(Error::Sequence(format!("node {node} not in the sequence to pop")));
    };
    let mut nodes = s.nodes().to_vec();
    let mut colors = s.colors().to_vec();
    nodes.remove(at);
    colors.remove(at);
    ColoringSequence::new(nodes, colors, s.k())
}

/// Joins two disjoint sequences, first then second.
pub fn concatenate(s1: &ColoringSequence, s2: &ColoringSequence) -> Result<ColoringSequence> {
    if s1.k() != s2.k() {
        return Err(Error::Sequence(format!(
            "color budgets differ: {} vs {}",
            s1.k(),
            s2.k()
        )));
    }
    if let Some(&v) = s2.nodes().iter().find(|&&v| s1.contains(v)) {
        return Err(Error::Sequence(format!("node {v} appears on both sides")));
    }
    let mut nodes = s1.nodes().to_vec();
    nodes.extend_from_slice(s2.nodes());
    let mut colors = s1.colors().to_vec();
    colors.extend_from_slice(s2.colors());
    ColoringSequence::new(nodes, colors, s1.k())
}

/// Repairs crossed-edge clashes after a mirror: wherever a critical pair
/// came out monochrome, the side-2 member is moved to the smallest color not
/// used by any of its neighbors in `g`. The crossed edge itself makes the
/// repaired pair differ.
pub fn recolor_critical(
    s: &ColoringSequence,
    g: &Graph,
    pairs: &[(u32, u32)],
) -> Result<ColoringSequence> {
    let k = s.k();
    let nodes = s.nodes().to_vec();
    let mut colors = s.colors().to_vec();
    let pos = |v: u32| nodes.iter().position(|&n| n == v);
    for &(a, b) in pairs {
        let ia = pos(a)
            .ok_or_else(|| Error::Sequence(format!("critical node {a} not colored")))?;
        let ib = pos(b)
            .ok_or_else(|| Error::Sequence(format!("critical node {b} not colored")))?;
        if colors[ia] != colors[ib] {
            continue;
        }
        let mut used = vec![false; k as usize + 1];
        for &w in g.neighbors(b) {
            if let Some(iw) = pos(w) {
                used[colors[iw] as usize] = true;
            }
        }
        let Some(fresh) = (1..=k).find(|&c| !used[c as usize]) else {
            return Err(Error::NoFeasibleColor { node: b, k });
        };
        colors[ib] = fresh;
    }
    ColoringSequence::new(nodes, colors, k)
}

/// Checks every step constraint against a full merged sequence.
fn check_merged(
    s: &ColoringSequence,
    constraints: &[StepConstraint],
    step: &str,
) -> Result<()> {
    for c in constraints {
        let (ca, cb) = (s.color_of(c.a), s.color_of(c.b));
        let (Some(ca), Some(cb)) = (ca, cb) else {
            return Err(Error::ConstraintViolation {
                step: step.to_string(),
                reason: format!("nodes {} or {} missing from the merge", c.a, c.b),
            });
        };
        let ok = match c.kind {
            ConstraintKind::Equal => ca == cb,
            ConstraintKind::Differ => ca != cb,
        };
        if !ok {
            return Err(Error::ConstraintViolation {
                step: step.to_string(),
                reason: format!(
                    "nodes {} and {} have colors {ca} and {cb}, which must {}",
                    c.a,
                    c.b,
                    match c.kind {
                        ConstraintKind::Equal => "agree",
                        ConstraintKind::Differ => "differ",
                    }
                ),
            });
        }
    }
    Ok(())
}

/// Checks step constraints across the two (possibly overlapping) sides
/// before the shared nodes are popped.
pub(crate) fn check_across(
    s1: &ColoringSequence,
    s2: &ColoringSequence,
    constraints: &[StepConstraint],
    step: &str,
) -> Result<()> {
    for c in constraints {
        let (ca, cb) = (s1.color_of(c.a), s2.color_of(c.b));
        let (Some(ca), Some(cb)) = (ca, cb) else {
            return Err(Error::ConstraintViolation {
                step: step.to_string(),
                reason: format!("node {} or {} missing from its side", c.a, c.b),
            });
        };
        let ok = match c.kind {
            ConstraintKind::Equal => ca == cb,
            ConstraintKind::Differ => ca != cb,
        };
        if !ok {
            return Err(Error::ConstraintViolation {
                step: step.to_string(),
                reason: format!(
                    "node {} on side 1 has color {ca}, node {} on side 2 has color {cb}; they must {}",
                    c.a,
                    c.b,
                    match c.kind {
                        ConstraintKind::Equal => "agree",
                        ConstraintKind::Differ => "differ",
                    }
                ),
            });
        }
    }
    Ok(())
}

/// Merges one step given both sides already lifted to this tree's node ids
/// (`s2` is the mirrored half for mirror steps). Verifies the step's
/// constraints and returns the combined sequence sorted by node.
pub(crate) fn merge_step(
    graph: &Graph,
    step: &ReductionStep,
    s1: &ColoringSequence,
    s2: &ColoringSequence,
    path: &str,
) -> Result<ColoringSequence> {
    let label = format!("{path} ({} cut)", step.axis.kind);
    match step.solve_mode {
        SolveMode::MirrorOne => {
            let mut half2 = s2.clone();
            for &f in &step.axis.fixed_nodes {
                half2 = pop_common(&half2, f)?;
            }
            let mut merged = concatenate(s1, &half2)?;
            if !step.axis.critical_pairs.is_empty() {
                merged = recolor_critical(&merged, graph, &step.axis.critical_pairs)?;
            }
            check_merged(&merged, &step.constraints, &label)?;
            Ok(merged.sorted_by_node())
        }
        SolveMode::BothConstrained | SolveMode::BothSharedNode => {
            check_across(s1, s2, &step.constraints, &label)?;
            let mut half2 = s2.clone();
            for &f in &step.axis.fixed_nodes {
                half2 = pop_common(&half2, f)?;
            }
            let merged = concatenate(s1, &half2)?;
            Ok(merged.sorted_by_node())
        }
    }
}

/// Pure replay of a reduction tree: consumes one coloring per solved leaf
/// (in the order `ReductionTree::solved_leaves` lists them, each in
/// leaf-local node ids) and merges upward. No solving happens here; any
/// clash the merge cannot repair is an error naming the step.
pub fn reconstruct_tree(
    tree: &ReductionTree,
    leaf_colorings: &[ColoringSequence],
) -> Result<ColoringSequence> {
    let mut iter = leaf_colorings.iter();
    let merged = merge_tree(tree, &mut iter, "root")?;
    if iter.next().is_some() {
        return Err(Error::Sequence(
            "more leaf colorings than solved leaves in the tree".into(),
        ));
    }
    Ok(merged)
}

fn merge_tree(
    tree: &ReductionTree,
    leaves: &mut std::slice::Iter<'_, ColoringSequence>,
    path: &str,
) -> Result<ColoringSequence> {
    match &tree.node {
        TreeNode::Leaf => {
            let s = leaves.next().ok_or_else(|| {
                Error::Sequence("fewer leaf colorings than solved leaves in the tree".into())
            })?;
            let n = tree.graph.node_count();
            if s.len() != n as usize || (0..n).any(|v| !s.contains(v)) {
                return Err(Error::Sequence(format!(
                    "leaf coloring at {path} does not cover local nodes 0..{n}"
                )));
            }
            if !is_valid_coloring(&tree.graph, s)? {
                return Err(Error::ConstraintViolation {
                    step: path.to_string(),
                    reason: "leaf coloring is not a proper coloring".into(),
                });
            }
            Ok(s.clone())
        }
        TreeNode::Step(step) => {
            let sub1 = step.daughter1.subtree.as_ref().ok_or_else(|| {
                Error::InvalidArgument(format!("step at {path} has an unsolved first daughter"))
            })?;
            let s1 = merge_tree(sub1, leaves, &format!("{path}/1"))?
                .lift(&step.daughter1.map);
            let s2 = match step.solve_mode {
                SolveMode::MirrorOne => {
                    let inv = step.axis.involution.as_ref().ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "mirror step at {path} carries no involution"
                        ))
                    })?;
                    mirror_sequence(&s1, inv)
                }
                _ => {
                    let sub2 = step.daughter2.subtree.as_ref().ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "step at {path} has an unsolved second daughter"
                        ))
                    })?;
                    merge_tree(sub2, leaves, &format!("{path}/2"))?
                        .lift(&step.daughter2.map)
                }
            };
            merge_step(&tree.graph, step, &s1, &s2, path)
        }
    }
}
