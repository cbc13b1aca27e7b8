//! Detection of the separating structures a special graph can be cut along:
//! involutive symmetries whose axis passes through nodes (1.a), edges (2.a)
//! or both (3.a), cut vertices (1.b) and bridges (2.b).
//!
//! All detectors require a connected input; reducing a disconnected graph is
//! the caller's job, one component at a time.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate;
use crate::graph::Graph;
use crate::reduce::ReducePolicy;

/// A non-identity graph automorphism that is its own inverse. Fixed nodes of
/// the map are exactly the nodes the symmetry axis passes through.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Involution {
    sigma: Vec<u32>,
}

impl Involution {
    /// Validates that `sigma` is an involutive automorphism of `g` and is not
    /// the identity.
    pub fn new(g: &Graph, sigma: Vec<u32>) -> Result<Involution> {
        let n = g.node_count() as usize;
        if sigma.len() != n {
            return Err(Error::InvalidArgument(format!(
                "permutation over {} nodes for a {n}-node graph",
                sigma.len()
            )));
        }
        let mut seen = vec![false; n];
        for &img in &sigma {
            if img as usize >= n || seen[img as usize] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[img as usize] = true;
        }
        for v in 0..n {
            let image = sigma[v] as usize;
            if sigma[image] as usize != v {
                return Err(Error::InvalidArgument(format!(
                    "sigma(sigma({v})) = {} is not an involution",
                    sigma[image]
                )));
            }
        }
        if sigma.iter().enumerate().all(|(v, &img)| v as u32 == img) {
            return Err(Error::InvalidArgument("identity map is not a symmetry axis".into()));
        }
        for &(u, v) in g.edges() {
            if !g.has_edge(sigma[u as usize], sigma[v as usize]) {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) maps to a non-edge; not an automorphism"
                )));
            }
        }
        Ok(Involution { sigma })
    }

    pub fn image(&self, v: u32) -> u32 {
        self.sigma[v as usize]
    }

    pub fn sigma(&self) -> &[u32] {
        &self.sigma
    }

    pub fn fixed_nodes(&self) -> Vec<u32> {
        (0..self.sigma.len() as u32).filter(|&v| self.image(v) == v).collect()
    }
}

/// The five cut families. The tag order is the deterministic tie-break order
/// used by `select_axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxisKind {
    #[serde(rename = "1.a")]
    OneA,
    #[serde(rename = "1.b")]
    OneB,
    #[serde(rename = "2.a")]
    TwoA,
    #[serde(rename = "2.b")]
    TwoB,
    #[serde(rename = "3.a")]
    ThreeA,
}

impl fmt::Display for AxisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            AxisKind::OneA => "1.a",
            AxisKind::OneB => "1.b",
            AxisKind::TwoA => "2.a",
            AxisKind::TwoB => "2.b",
            AxisKind::ThreeA => "3.a",
        };
        f.write_str(tag)
    }
}

/// A separating structure, ready to cut along.
///
/// Invariants (enforced by the constructors in this module):
/// - `fixed_nodes`, `crossed_edges`, `side1`, `side2` are sorted;
/// - removing `fixed_nodes` and `crossed_edges` disconnects `side1 \ fixed`
///   from `side2 \ fixed`;
/// - for symmetric kinds the involution exchanges the two sides, so
///   `|side1| = |side2| = (N + m) / 2` and `N - m` is even;
/// - both sides of a node cut (1.a, 3.a, 1.b) contain the fixed/shared nodes;
/// - `critical_pairs` lists one `(side1 node, side2 node)` pair per crossed
///   edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    pub kind: AxisKind,
    pub involution: Option<Involution>,
    pub fixed_nodes: Vec<u32>,
    pub crossed_edges: Vec<(u32, u32)>,
    pub side1: Vec<u32>,
    pub side2: Vec<u32>,
    pub critical_pairs: Vec<(u32, u32)>,
}

impl Axis {
    /// Number of nodes the axis passes through.
    pub fn m(&self) -> u32 {
        self.fixed_nodes.len() as u32
    }

    /// Number of edges the axis crosses.
    pub fn p(&self) -> u32 {
        self.crossed_edges.len() as u32
    }

    /// Daughter sizes implied by the cut.
    pub fn daughter_sizes(&self) -> (u32, u32) {
        (self.side1.len() as u32, self.side2.len() as u32)
    }
}

fn require_connected(g: &Graph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/*────────── involution search ──────────*/

/// Degree and sorted neighbor-degree profile; nodes can only map to nodes
/// with an identical profile.
fn node_profiles(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    (0..g.node_count())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect()
}

/// All involutive automorphisms, in lexicographic order of their image
/// vectors. Backtracking over node pairings with degree-profile pruning.
pub fn find_involutions(g: &Graph) -> Result<Vec<Involution>> {
    require_connected(g)?;
    let n = g.node_count() as usize;
    let profiles = node_profiles(g);
    let mut sigma: Vec<Option<u32>> = vec![None; n];
    let mut found = Vec::new();

    fn consistent(g: &Graph, sigma: &[Option<u32>], v: u32, u: u32) -> bool {
        // Adding the pair (v <-> u) keeps sigma edge-preserving on the
        // assigned set.
        for (w, img) in sigma.iter().enumerate() {
            let Some(iw) = *img else { continue };
            let w = w as u32;
            if g.has_edge(v, w) != g.has_edge(u, iw) {
                return false;
            }
            if u != v && g.has_edge(u, w) != g.has_edge(v, iw) {
                return false;
            }
        }
        true
    }

    fn recurse(
        g: &Graph,
        profiles: &[(usize, Vec<usize>)],
        sigma: &mut Vec<Option<u32>>,
        found: &mut Vec<Involution>,
    ) {
        let Some(v) = sigma.iter().position(|s| s.is_none()) else {
            let image: Vec<u32> = sigma.iter().map(|s| s.unwrap()).collect();
            if image.iter().enumerate().any(|(i, &img)| i as u32 != img) {
                // Constructor re-validates; cheap at these sizes.
                if let Ok(inv) = Involution::new(g, image) {
                    found.push(inv);
                }
            }
            return;
        };
        let v = v as u32;
        for u in v..g.node_count() {
            if sigma[u as usize].is_some() && u != v {
                continue;
            }
            if profiles[u as usize] != profiles[v as usize] {
                continue;
            }
            if !consistent(g, sigma, v, u) {
                continue;
            }
            sigma[v as usize] = Some(u);
            sigma[u as usize] = Some(v);
            recurse(g, profiles, sigma, found);
            sigma[v as usize] = None;
            if u != v {
                sigma[u as usize] = None;
            }
        }
    }

    recurse(g, &profiles, &mut sigma, &mut found);
    found.sort_by(|a, b| a.sigma.cmp(&b.sigma));
    Ok(found)
}

/*────────── axis classification ──────────*/

/// Tries to read a separating axis out of an involution: the fixed nodes and
/// crossed edges are removed, and the remainder must fall apart into
/// components that sigma exchanges in pairs. Returns `None` when the two
/// sides stay connected to each other (the symmetry exists but does not
/// separate the graph).
pub fn classify_axis(g: &Graph, inv: &Involution) -> Option<Axis> {
    let n = g.node_count();
    if inv.sigma().len() != n as usize {
        return None;
    }
    let fixed = inv.fixed_nodes();
    let crossed: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| inv.image(u) == v)
        .collect();
    if fixed.is_empty() && crossed.is_empty() {
        return None; // nothing removed, a connected graph cannot split
    }

    // Components of the graph minus fixed nodes and crossed edges.
    let keep: Vec<u32> = (0..n).filter(|v| !fixed.contains(v)).collect();
    if keep.is_empty() {
        return None;
    }
    let pruned_edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .copied()
        .filter(|e| !crossed.contains(e))
        .filter(|&(u, v)| !fixed.contains(&u) && !fixed.contains(&v))
        .collect();
    let local: BTreeMap<u32, u32> =
        keep.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let pruned = Graph::new(
        keep.len() as u32,
        &pruned_edges.iter().map(|&(u, v)| (local[&u], local[&v])).collect::<Vec<_>>(),
    )
    .ok()?;
    let components: Vec<Vec<u32>> = pruned
        .connected_components()
        .into_iter()
        .map(|c| c.into_iter().map(|v| keep[v as usize]).collect())
        .collect();

    // Pair every component with its image; a self-paired component means the
    // sides cannot be separated.
    let index: BTreeMap<&[u32], usize> =
        components.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let mut side1: Vec<u32> = Vec::new();
    let mut side2: Vec<u32> = Vec::new();
    let mut paired = vec![false; components.len()];
    for (i, comp) in components.iter().enumerate() {
        if paired[i] {
            continue;
        }
        let mut image: Vec<u32> = comp.iter().map(|&v| inv.image(v)).collect();
        image.sort_unstable();
        let &j = index.get(image.as_slice())?;
        if i == j {
            return None;
        }
        paired[i] = true;
        paired[j] = true;
        let (first, second) =
            if components[i][0] < components[j][0] { (i, j) } else { (j, i) };
        side1.extend(&components[first]);
        side2.extend(&components[second]);
    }
    side1.extend(&fixed);
    side2.extend(&fixed);
    side1.sort_unstable();
    side2.sort_unstable();

    let critical_pairs: Vec<(u32, u32)> = crossed
        .iter()
        .map(|&(a, b)| if side1.binary_search(&a).is_ok() { (a, b) } else { (b, a) })
        .collect();
    let kind = match (fixed.is_empty(), crossed.is_empty()) {
        (false, true) => AxisKind::OneA,
        (true, false) => AxisKind::TwoA,
        (false, false) => AxisKind::ThreeA,
        (true, true) => unreachable!("handled above"),
    };
    Some(Axis {
        kind,
        involution: Some(inv.clone()),
        fixed_nodes: fixed,
        crossed_edges: crossed,
        side1,
        side2,
        critical_pairs,
    })
}

/*────────── cut vertices and bridges (low-link) ──────────*/

struct LowLink<'a> {
    g: &'a Graph,
    disc: Vec<usize>,
    low: Vec<usize>,
    timer: usize,
    cut_vertices: Vec<u32>,
    bridges: Vec<(u32, u32)>,
}

impl<'a> LowLink<'a> {
    fn run(g: &'a Graph) -> LowLink<'a> {
        let n = g.node_count() as usize;
        let mut ll = LowLink {
            g,
            disc: vec![usize::MAX; n],
            low: vec![usize::MAX; n],
            timer: 0,
            cut_vertices: Vec::new(),
            bridges: Vec::new(),
        };
        for v in 0..n as u32 {
            if ll.disc[v as usize] == usize::MAX {
                ll.dfs(v, u32::MAX);
            }
        }
        ll.cut_vertices.sort_unstable();
        ll.bridges.sort_unstable();
        ll
    }

    fn dfs(&mut self, v: u32, parent: u32) {
        self.disc[v as usize] = self.timer;
        self.low[v as usize] = self.timer;
        self.timer += 1;
        let mut children = 0;
        let mut is_cut = false;
        let mut skipped_parent = false;
        for &w in self.g.neighbors(v) {
            if w == parent && !skipped_parent {
                skipped_parent = true; // parallel edges cannot occur, skip once
                continue;
            }
            if self.disc[w as usize] != usize::MAX {
                self.low[v as usize] = self.low[v as usize].min(self.disc[w as usize]);
                continue;
            }
            children += 1;
            self.dfs(w, v);
            self.low[v as usize] = self.low[v as usize].min(self.low[w as usize]);
            if self.low[w as usize] > self.disc[v as usize] {
                self.bridges.push((v.min(w), v.max(w)));
            }
            if parent != u32::MAX && self.low[w as usize] >= self.disc[v as usize] {
                is_cut = true;
            }
        }
        if parent == u32::MAX && children >= 2 {
            is_cut = true;
        }
        if is_cut {
            self.cut_vertices.push(v);
        }
    }
}

/// Articulation points, ascending.
pub fn find_cut_vertices(g: &Graph) -> Result<Vec<u32>> {
    require_connected(g)?;
    Ok(LowLink::run(g).cut_vertices)
}

/// Bridge edges in canonical order.
pub fn find_bridges(g: &Graph) -> Result<Vec<(u32, u32)>> {
    require_connected(g)?;
    Ok(LowLink::run(g).bridges)
}

/// Builds the 1.b axis for a cut vertex: one component plus the vertex on one
/// side, everything else plus the vertex on the other. Both daughters share
/// the vertex.
pub fn axis_from_cut_vertex(g: &Graph, v: u32) -> Result<Axis> {
    require_connected(g)?;
    if v >= g.node_count() {
        return Err(Error::InvalidArgument(format!("node {v} outside graph")));
    }
    let keep: Vec<u32> = (0..g.node_count()).filter(|&w| w != v).collect();
    let (rest, map) = g.induced_subgraph(&keep)?;
    let comps: Vec<Vec<u32>> = rest
        .connected_components()
        .into_iter()
        .map(|c| c.into_iter().map(|w| map.to_parent(w)).collect())
        .collect();
    if comps.len() < 2 {
        return Err(Error::InvalidArgument(format!("node {v} is not a cut vertex")));
    }
    let mut side1 = comps[0].clone();
    side1.push(v);
    side1.sort_unstable();
    let mut side2: Vec<u32> = comps[1..].iter().flatten().copied().collect();
    side2.push(v);
    side2.sort_unstable();
    Ok(Axis {
        kind: AxisKind::OneB,
        involution: None,
        fixed_nodes: vec![v],
        crossed_edges: Vec::new(),
        side1,
        side2,
        critical_pairs: Vec::new(),
    })
}

/// Builds the 2.b axis for a bridge: the two components left by removing the
/// edge, with the bridge endpoints as the critical pair.
pub fn axis_from_bridge(g: &Graph, bridge: (u32, u32)) -> Result<Axis> {
    require_connected(g)?;
    let (u, v) = (bridge.0.min(bridge.1), bridge.0.max(bridge.1));
    if !g.has_edge(u, v) {
        return Err(Error::InvalidArgument(format!("({u}, {v}) is not an edge")));
    }
    let remaining: Vec<(u32, u32)> =
        g.edges().iter().copied().filter(|&e| e != (u, v)).collect();
    let cut = Graph::new(g.node_count(), &remaining)?;
    let comps = cut.connected_components();
    if comps.len() != 2 {
        return Err(Error::InvalidArgument(format!("({u}, {v}) is not a bridge")));
    }
    let (side1, side2) = (comps[0].clone(), comps[1].clone());
    let pair = if side1.binary_search(&u).is_ok() { (u, v) } else { (v, u) };
    Ok(Axis {
        kind: AxisKind::TwoB,
        involution: None,
        fixed_nodes: Vec::new(),
        crossed_edges: vec![(u, v)],
        side1,
        side2,
        critical_pairs: vec![pair],
    })
}

/*────────── enumeration and selection ──────────*/

/// Every axis the graph admits: classified involutions, cut vertices and
/// bridges, in deterministic order.
pub fn enumerate_axes(g: &Graph) -> Result<Vec<Axis>> {
    require_connected(g)?;
    let mut axes = Vec::new();
    for inv in find_involutions(g)? {
        if let Some(axis) = classify_axis(g, &inv) {
            axes.push(axis);
        }
    }
    for v in find_cut_vertices(g)? {
        axes.push(axis_from_cut_vertex(g, v)?);
    }
    for bridge in find_bridges(g)? {
        axes.push(axis_from_bridge(g, bridge)?);
    }
    axes.sort_by(|a, b| {
        (a.kind, &a.fixed_nodes, &a.crossed_edges, &a.side1, sigma_key(a)).cmp(&(
            b.kind,
            &b.fixed_nodes,
            &b.crossed_edges,
            &b.side1,
            sigma_key(b),
        ))
    });
    Ok(axes)
}

fn sigma_key(a: &Axis) -> Vec<u32> {
    a.involution.as_ref().map(|i| i.sigma().to_vec()).unwrap_or_default()
}

/// Qubit-complexity saving of cutting an `n`-node graph along `axis`.
pub fn axis_savings(n: u32, axis: &Axis) -> Result<u64> {
    let (d1, d2) = axis.daughter_sizes();
    match axis.kind {
        AxisKind::OneA => estimate::savings_type_1a(n, axis.m()),
        AxisKind::TwoA => estimate::savings_type_2a(n),
        AxisKind::ThreeA => estimate::savings_type_3a(n, axis.m()),
        AxisKind::OneB => estimate::savings_type_1b(d1, d2),
        AxisKind::TwoB => estimate::savings_type_2b(d1, d2),
    }
}

/// Picks the axis to cut along: the admissible axis (every daughter at least
/// `policy.min_size` nodes) with the largest saving. A saving tie between a
/// node axis and an edge axis resolves to the edge axis — that is the
/// boundary case of the threshold rule in `estimate::compare_techniques`,
/// with which this selection always agrees — and remaining ties break by
/// smallest (kind tag, fixed nodes, crossed edges).
pub fn select_axis(g: &Graph, axes: &[Axis], policy: &ReducePolicy) -> Result<Option<Axis>> {
    let n = g.node_count();
    let mut candidates: Vec<(u64, &Axis)> = Vec::new();
    for axis in axes {
        let (d1, d2) = axis.daughter_sizes();
        if (d1.min(d2) as usize) < policy.min_size {
            continue;
        }
        let saving = axis_savings(n, axis)?;
        if saving > 0 {
            candidates.push((saving, axis));
        }
    }
    let Some(&(best, _)) = candidates.iter().max_by_key(|&&(s, _)| s) else {
        return Ok(None);
    };
    let mut top: Vec<&Axis> = candidates
        .into_iter()
        .filter(|&(s, _)| s == best)
        .map(|(_, a)| a)
        .collect();
    let has_1a = top.iter().any(|a| a.kind == AxisKind::OneA);
    let has_2a = top.iter().any(|a| a.kind == AxisKind::TwoA);
    if has_1a && has_2a {
        top.retain(|a| a.kind != AxisKind::OneA);
    }
    top.sort_by(|a, b| {
        (a.kind, &a.fixed_nodes, &a.crossed_edges, &a.side1).cmp(&(
            b.kind,
            &b.fixed_nodes,
            &b.crossed_edges,
            &b.side1,
        ))
    });
    Ok(Some(top[0].clone()))
}
