//! Classical reference solver: exhaustive enumeration, counting and the
//! chromatic number for desk-scale graphs.
//!
//! This is the ground truth the quantum-procedure simulator is checked
//! against, so it deliberately shares no state-indexing code with the
//! simulator: colorings are produced by backtracking over nodes (highest
//! degree first) and then reported in mixed-radix index order, node 0 least
//! significant.

use crate::error::{Error, Result};
use crate::graph::{ColoringSequence, Graph};

/// Enumeration is refused above this many candidate states.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// Largest graph `chromatic_number` accepts.
pub const CHROMATIC_NODE_LIMIT: u32 = 16;

fn check_budget(g: &Graph, k: u32) -> Result<()> {
    let states = (k as u128).checked_pow(g.node_count()).unwrap_or(u128::MAX);
    if states > ENUMERATION_BUDGET {
        return Err(Error::Budget(format!(
            "{k}^{} states exceed the {ENUMERATION_BUDGET} enumeration budget",
            g.node_count()
        )));
    }
    Ok(())
}

/// Node visit order for the backtracking search: descending degree, id as
/// tie-break. Purely a search heuristic; output order never depends on it.
fn search_order(g: &Graph) -> Vec<u32> {
    let mut order: Vec<u32> = (0..g.node_count()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

fn backtrack<F: FnMut(&[u32]) -> bool>(
    g: &Graph,
    k: u32,
    order: &[u32],
    colors: &mut Vec<u32>,
    depth: usize,
    emit: &mut F,
) -> bool {
    if depth == order.len() {
        return emit(colors);
    }
    let v = order[depth];
    'candidate: for c in 1..=k {
        for &w in g.neighbors(v) {
            if colors[w as usize] == c {
                continue 'candidate;
            }
        }
        colors[v as usize] = c;
        if backtrack(g, k, order, colors, depth + 1, emit) {
            colors[v as usize] = 0;
            return true;
        }
        colors[v as usize] = 0;
    }
    false
}

pub(crate) fn mixed_radix_index(colors: &[u32], k: u32) -> u128 {
    let mut idx = 0u128;
    for &c in colors.iter().rev() {
        idx = idx * k as u128 + (c - 1) as u128;
    }
    idx
}

/// All valid k-colorings, sorted by mixed-radix state index.
pub fn enumerate_valid(g: &Graph, k: u32) -> Result<Vec<ColoringSequence>> {
    if k == 0 {
        return Err(Error::InvalidArgument("color budget k must be at least 1".into()));
    }
    check_budget(g, k)?;
    let order = search_order(g);
    let mut colors = vec![0u32; g.node_count() as usize];
    let mut found: Vec<(u128, Vec<u32>)> = Vec::new();
    backtrack(g, k, &order, &mut colors, 0, &mut |assignment| {
        found.push((mixed_radix_index(assignment, k), assignment.to_vec()));
        false
    });
    found.sort_unstable_by_key(|&(idx, _)| idx);
    let nodes: Vec<u32> = (0..g.node_count()).collect();
    found
        .into_iter()
        .map(|(_, colors)| ColoringSequence::new(nodes.clone(), colors, k))
        .collect()
}

/// Number of valid k-colorings.
pub fn count_valid(g: &Graph, k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidArgument("color budget k must be at least 1".into()));
    }
    check_budget(g, k)?;
    let order = search_order(g);
    let mut colors = vec![0u32; g.node_count() as usize];
    let mut count = 0u64;
    backtrack(g, k, &order, &mut colors, 0, &mut |_| {
        count += 1;
        false
    });
    Ok(count)
}

/// True iff at least one valid k-coloring exists (early-exit backtracking,
/// no enumeration budget needed).
pub fn exists_valid(g: &Graph, k: u32) -> bool {
    if k == 0 {
        return false;
    }
    let order = search_order(g);
    let mut colors = vec![0u32; g.node_count() as usize];
    backtrack(g, k, &order, &mut colors, 0, &mut |_| true)
}

/// Greedy maximal clique, largest-degree seed: a cheap chromatic lower bound.
fn clique_lower_bound(g: &Graph) -> u32 {
    let mut best = 1u32;
    for seed in search_order(g) {
        let mut clique = vec![seed];
        for &v in g.neighbors(seed) {
            if clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len() as u32);
    }
    best
}

/// Exact chromatic number by upward search from a clique lower bound.
pub fn chromatic_number(g: &Graph) -> Result<u32> {
    if g.node_count() > CHROMATIC_NODE_LIMIT {
        return Err(Error::Budget(format!(
            "chromatic number is limited to {CHROMATIC_NODE_LIMIT} nodes, got {}",
            g.node_count()
        )));
    }
    let mut k = clique_lower_bound(g);
    while !exists_valid(g, k) {
        k += 1;
    }
    Ok(k)
}
