//! The end-to-end driver: reduce, solve the leaves with the simulated
//! search, and merge back up.
//!
//! Solving a step can fail for reasons that are just bad luck — the sampled
//! half pins the other half into a corner. Each step therefore retries with
//! fresh deterministic sub-seeds, a 3.a clash falls back to a constrained
//! re-solve of the second half, and as a last resort the whole subgraph is
//! solved directly (state cap permitting). All randomness derives from the
//! one caller-provided seed, so identical inputs give identical outputs.

use crate::error::{Error, Result};
use crate::graph::{is_valid_coloring, ColoringSequence, Graph};
use crate::reconstruct::{self, mirror_sequence};
use crate::reduce::{
    self, ConstraintKind, Daughter, ReducePolicy, ReductionStep, ReductionTree, SolveMode,
    TreeNode, WhichDaughter,
};
use crate::sim::{self, CrossConstraint, CrossConstraintKind, LeafReport, SimConfig};

/// Re-samples allowed per step before the direct fallback.
pub const STEP_RETRIES: u64 = 16;

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub colors: u32,
    pub seed: u64,
    pub policy: ReducePolicy,
    pub sim: SimConfig,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Coloring of the input graph, nodes ascending.
    pub coloring: ColoringSequence,
    /// The reduction that was applied.
    pub tree: ReductionTree,
    /// One record per direct search, in solve order.
    pub leaf_reports: Vec<LeafReport>,
}

/// Reduces `g`, solves the leaves, and reconstructs a coloring with at most
/// `opts.colors` colors.
pub fn solve(g: &Graph, opts: &SolveOptions) -> Result<SolveOutcome> {
    let tree = reduce::reduce_recursive(g, &opts.policy)?;
    let (coloring, leaf_reports) = solve_tree(&tree, opts)?;
    Ok(SolveOutcome { coloring, tree, leaf_reports })
}

/// Solves an already-built reduction tree. The returned sequence is over the
/// tree's own (root-local) node ids, ascending.
pub fn solve_tree(
    tree: &ReductionTree,
    opts: &SolveOptions,
) -> Result<(ColoringSequence, Vec<LeafReport>)> {
    let mut reports = Vec::new();
    let coloring = solve_inner(tree, &[], 1, 0, opts, &mut reports)?;
    debug_assert!(is_valid_coloring(&tree.graph, &coloring).unwrap_or(false));
    Ok((coloring, reports))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Deterministic per-leaf seed from the global seed, the position in the
/// tree, and the retry counter.
fn leaf_seed(seed: u64, path: u64, salt: u64) -> u64 {
    splitmix64(seed ^ splitmix64(path ^ splitmix64(salt)))
}

fn solve_inner(
    tree: &ReductionTree,
    external: &[CrossConstraint],
    path: u64,
    salt: u64,
    opts: &SolveOptions,
    reports: &mut Vec<LeafReport>,
) -> Result<ColoringSequence> {
    let step = match &tree.node {
        TreeNode::Leaf => {
            let (s, report) = sim::solve(
                &tree.graph,
                opts.colors,
                external,
                leaf_seed(opts.seed, path, salt),
                &opts.sim,
            )?;
            reports.push(report);
            return Ok(s);
        }
        TreeNode::Step(step) => step,
    };

    let mut last_err: Option<Error> = None;
    for attempt in 0..STEP_RETRIES {
        let salt = splitmix64(salt ^ (attempt + 1));
        let mut tried = Vec::new();
        match attempt_step(tree, step, external, path, salt, opts, &mut tried) {
            Ok(merged) => {
                reports.extend(tried);
                return Ok(merged);
            }
            Err(e @ (Error::StateCap { .. } | Error::InvalidArgument(_))) => return Err(e),
            Err(e) => last_err = Some(e),
        }
    }

    // Last resort: solve this whole subgraph in one direct search.
    match sim::solve(
        &tree.graph,
        opts.colors,
        external,
        leaf_seed(opts.seed, path, STEP_RETRIES + 1),
        &opts.sim,
    ) {
        Ok((s, report)) => {
            reports.push(report);
            Ok(s)
        }
        // If the subgraph is too big to brute-force, the step-level failure
        // is the more informative error.
        Err(Error::StateCap { .. }) => {
            Err(last_err.expect("retries ran, so a step error exists"))
        }
        Err(e) => Err(e),
    }
}

fn attempt_step(
    tree: &ReductionTree,
    step: &ReductionStep,
    external: &[CrossConstraint],
    path: u64,
    salt: u64,
    opts: &SolveOptions,
    reports: &mut Vec<LeafReport>,
) -> Result<ColoringSequence> {
    let merged = match step.solve_mode {
        SolveMode::MirrorOne => solve_mirror(tree, step, external, path, salt, opts, reports)?,
        SolveMode::BothConstrained | SolveMode::BothSharedNode => {
            solve_both(tree, step, external, path, salt, opts, reports)?
        }
    };
    if !externals_hold(&merged, external) {
        return Err(Error::ConstraintViolation {
            step: format!("{} cut of {} nodes", step.axis.kind, tree.graph.node_count()),
            reason: "merge broke a color pinned from an enclosing cut".into(),
        });
    }
    if !is_valid_coloring(&tree.graph, &merged)? {
        return Err(Error::ConstraintViolation {
            step: format!("{} cut of {} nodes", step.axis.kind, tree.graph.node_count()),
            reason: "merged coloring is not proper".into(),
        });
    }
    Ok(merged)
}

/// 1.a and 3.a: solve side 1 (with pins reflected onto it), mirror, and for
/// 3.a repair crossed pairs — or re-solve side 2 under explicit constraints
/// when the repair cannot work.
fn solve_mirror(
    tree: &ReductionTree,
    step: &ReductionStep,
    external: &[CrossConstraint],
    path: u64,
    salt: u64,
    opts: &SolveOptions,
    reports: &mut Vec<LeafReport>,
) -> Result<ColoringSequence> {
    let inv = step.axis.involution.as_ref().ok_or_else(|| {
        Error::InvalidArgument("mirror step carries no involution".into())
    })?;
    // Every external pin lands on side 1: directly if the node is there,
    // else via its mirror twin (which by construction gets the same color).
    let mut pins = Vec::with_capacity(external.len());
    for c in external {
        let local = step
            .daughter1
            .map
            .to_local(c.node)
            .or_else(|| step.daughter1.map.to_local(inv.image(c.node)))
            .ok_or_else(|| {
                Error::InvalidArgument(format!("pinned node {} is on neither side", c.node))
            })?;
        pins.push(CrossConstraint { node: local, ..*c });
    }
    let sub = step.daughter1.subtree.as_ref().ok_or_else(|| {
        Error::InvalidArgument("mirror step has an unsolved first daughter".into())
    })?;
    let s1 = solve_inner(sub, &pins, path * 2 + 1, salt, opts, reports)?
        .lift(&step.daughter1.map);
    let s2 = mirror_sequence(&s1, inv);

    match reconstruct::merge_step(&tree.graph, step, &s1, &s2, "solve") {
        Err(Error::NoFeasibleColor { .. }) => {
            resolve_second_side(step, &s1, external, path, salt, opts, reports)
        }
        other => other,
    }
}

/// The 3.a fallback: color side 2 by direct search under the fixed-node
/// equalities, the crossed-pair inequalities against side 1, and any
/// external pins that live there.
fn resolve_second_side(
    step: &ReductionStep,
    s1: &ColoringSequence,
    external: &[CrossConstraint],
    path: u64,
    salt: u64,
    opts: &SolveOptions,
    reports: &mut Vec<LeafReport>,
) -> Result<ColoringSequence> {
    let map2 = &step.daughter2.map;
    let mut pins = Vec::new();
    for &f in &step.axis.fixed_nodes {
        pins.push(CrossConstraint {
            kind: CrossConstraintKind::MustEqual,
            node: local_in(map2, f)?,
            color: color_in(s1, f)?,
        });
    }
    for &(a, b) in &step.axis.critical_pairs {
        pins.push(CrossConstraint {
            kind: CrossConstraintKind::MustDiffer,
            node: local_in(map2, b)?,
            color: color_in(s1, a)?,
        });
    }
    for c in external {
        if let Some(local) = map2.to_local(c.node) {
            pins.push(CrossConstraint { node: local, ..*c });
        }
    }
    let (s2_local, report) = sim::solve(
        &step.daughter2.graph,
        opts.colors,
        &pins,
        leaf_seed(opts.seed, path * 2 + 2, salt),
        &opts.sim,
    )?;
    reports.push(report);
    let s2 = s2_local.lift(map2);

    let label = format!("{} cut (re-solved side 2)", step.axis.kind);
    reconstruct::check_across(s1, &s2, &step.constraints, &label)?;
    let mut half2 = s2;
    for &f in &step.axis.fixed_nodes {
        half2 = reconstruct::pop_common(&half2, f)?;
    }
    Ok(reconstruct::concatenate(s1, &half2)?.sorted_by_node())
}

/// 2.a, 2.b and 1.b: solve the first daughter, pin the coupling onto the
/// second, solve it, and merge.
fn solve_both(
    tree: &ReductionTree,
    step: &ReductionStep,
    external: &[CrossConstraint],
    path: u64,
    salt: u64,
    opts: &SolveOptions,
    reports: &mut Vec<LeafReport>,
) -> Result<ColoringSequence> {
    let first_is_one = step.solve_first == WhichDaughter::One;
    let (first, second, first_path, second_path) = if first_is_one {
        (&step.daughter1, &step.daughter2, path * 2 + 1, path * 2 + 2)
    } else {
        (&step.daughter2, &step.daughter1, path * 2 + 2, path * 2 + 1)
    };
    let sub_first = first.subtree.as_ref().ok_or_else(|| {
        Error::InvalidArgument("solve-both step has an unsolved daughter".into())
    })?;
    let ext_first = externals_for(external, first)?;
    let s_first =
        solve_inner(sub_first, &ext_first, first_path, salt, opts, reports)?.lift(&first.map);

    // Pin the couplings: the constraint endpoint on the yet-unsolved side
    // must equal/differ from the color just chosen on the solved side.
    let mut pins = externals_for(external, second)?;
    for c in &step.constraints {
        let (solved_node, pending_node) = if first_is_one { (c.a, c.b) } else { (c.b, c.a) };
        let kind = match c.kind {
            ConstraintKind::Equal => CrossConstraintKind::MustEqual,
            ConstraintKind::Differ => CrossConstraintKind::MustDiffer,
        };
        pins.push(CrossConstraint {
            kind,
            node: local_in(&second.map, pending_node)?,
            color: color_in(&s_first, solved_node)?,
        });
    }
    let sub_second = second.subtree.as_ref().ok_or_else(|| {
        Error::InvalidArgument("solve-both step has an unsolved daughter".into())
    })?;
    let s_second =
        solve_inner(sub_second, &pins, second_path, salt, opts, reports)?.lift(&second.map);

    let (s1, s2) = if first_is_one { (s_first, s_second) } else { (s_second, s_first) };
    reconstruct::merge_step(&tree.graph, step, &s1, &s2, "solve")
}

/// Restates the externals that touch a daughter in its local ids.
fn externals_for(external: &[CrossConstraint], d: &Daughter) -> Result<Vec<CrossConstraint>> {
    Ok(external
        .iter()
        .filter_map(|c| {
            d.map
                .to_local(c.node)
                .map(|local| CrossConstraint { node: local, ..*c })
        })
        .collect())
}

fn local_in(map: &crate::graph::NodeMap, parent: u32) -> Result<u32> {
    map.to_local(parent).ok_or_else(|| {
        Error::InvalidArgument(format!("node {parent} missing from a daughter map"))
    })
}

fn color_in(s: &ColoringSequence, node: u32) -> Result<u32> {
    s.color_of(node)
        .ok_or_else(|| Error::Sequence(format!("node {node} missing from a solved side")))
}

fn externals_hold(s: &ColoringSequence, external: &[CrossConstraint]) -> bool {
    external.iter().all(|c| match s.color_of(c.node) {
        Some(color) => match c.kind {
            CrossConstraintKind::MustEqual => color == c.color,
            CrossConstraintKind::MustDiffer => color != c.color,
        },
        None => false,
    })
}
