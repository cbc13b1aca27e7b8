//! Undirected simple graphs with dense integer node ids, plus the coloring
//! sequence type shared by the solver, oracle and reconstruction layers.
//!
//! Nodes are `0..node_count`. Edges are stored canonically as `(min, max)`
//! pairs in sorted order; the position of an edge in that order is its ancilla
//! index in the one-hot bit encoding, so the order is part of the contract.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    node_count: u32,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
    labels: Option<Vec<String>>,
}

/// Serialized form: just the defining data, adjacency is rebuilt on load.
#[derive(Serialize, Deserialize)]
struct GraphRepr {
    node_count: u32,
    edges: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Graph> {
        let mut g = Graph::new(r.node_count, &r.edges)?;
        if let Some(labels) = r.labels {
            g = g.with_labels(labels)?;
        }
        Ok(g)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> GraphRepr {
        GraphRepr { node_count: g.node_count, edges: g.edges, labels: g.labels }
    }
}

impl Graph {
    /// Builds a graph from a node count and edge list. Edges are normalized
    /// to `(min, max)` and deduplicated silently; self-loops and endpoints
    /// outside `0..node_count` are errors.
    pub fn new(node_count: u32, edges: &[(u32, u32)]) -> Result<Graph> {
        if node_count == 0 {
            return Err(Error::Graph("graph must have at least one node".into()));
        }
        let mut canon: BTreeSet<(u32, u32)> = BTreeSet::new();
        for &(u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::Graph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{node_count}"
                )));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop at node {u}")));
            }
            canon.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(u32, u32)> = canon.into_iter().collect();
        let mut adj = vec![Vec::new(); node_count as usize];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { node_count, edges, adj, labels: None })
    }

    /// Attaches display labels, one per node.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.node_count as usize {
            return Err(Error::Graph(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.node_count
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Attaches the default A, B, C, ... labels used by small worked examples.
    pub fn with_letter_labels(self) -> Result<Graph> {
        let labels = (0..self.node_count)
            .map(|i| {
                if i < 26 {
                    char::from(b'A' + i as u8).to_string()
                } else {
                    format!("N{i}")
                }
            })
            .collect();
        self.with_labels(labels)
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn edge_count(&self) -> u32 {
        self.edges.len() as u32
    }

    /// Canonical `(min, max)` edges in sorted order. Index in this slice is
    /// the edge's ancilla position in the one-hot encoding.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name for a node: its label if present, else the id.
    pub fn label(&self, v: u32) -> String {
        match &self.labels {
            Some(l) => l[v as usize].clone(),
            None => v.to_string(),
        }
    }

    /// Induced subgraph on `keep`, renumbered to `0..keep.len()` in ascending
    /// parent-id order. Returns the subgraph and the local -> parent map.
    pub fn induced_subgraph(&self, keep: &[u32]) -> Result<(Graph, NodeMap)> {
        if keep.is_empty() {
            return Err(Error::Graph("induced subgraph on an empty node set".into()));
        }
        let mut sorted: Vec<u32> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() {
            return Err(Error::Graph("duplicate node in induced subgraph set".into()));
        }
        if let Some(&bad) = sorted.iter().find(|&&v| v >= self.node_count) {
            return Err(Error::Graph(format!("node {bad} outside 0..{}", self.node_count)));
        }
        let map = NodeMap::new(sorted.clone());
        let mut edges = Vec::new();
        for (li, &u) in sorted.iter().enumerate() {
            for (lj, &v) in sorted.iter().enumerate().skip(li + 1) {
                if self.has_edge(u, v) {
                    edges.push((li as u32, lj as u32));
                }
            }
        }
        let mut sub = Graph::new(sorted.len() as u32, &edges)?;
        if let Some(labels) = &self.labels {
            let kept = sorted.iter().map(|&v| labels[v as usize].clone()).collect();
            sub = sub.with_labels(kept)?;
        }
        Ok((sub, map))
    }

    /// Connected components as sorted node lists, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<u32>> {
        let n = self.node_count as usize;
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start as u32]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }
}

/// Bijective map from daughter-local node ids to parent ids. Built by
/// `induced_subgraph`, so it is always ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeMap(Vec<u32>);

impl NodeMap {
    pub fn new(local_to_parent: Vec<u32>) -> NodeMap {
        NodeMap(local_to_parent)
    }

    pub fn to_parent(&self, local: u32) -> u32 {
        self.0[local as usize]
    }

    /// Parent -> local lookup; `None` when the parent node is not in the
    /// daughter.
    pub fn to_local(&self, parent: u32) -> Option<u32> {
        self.0.binary_search(&parent).ok().map(|i| i as u32)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parents(&self) -> &[u32] {
        &self.0
    }
}

/// A (partial or total) coloring: node ids paired with colors `1..=k`.
/// The node order is meaningful — mirroring and concatenation preserve it —
/// so this is a sequence, not a map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringSequence {
    nodes: Vec<u32>,
    colors: Vec<u32>,
    k: u32,
}

impl ColoringSequence {
    pub fn new(nodes: Vec<u32>, colors: Vec<u32>, k: u32) -> Result<ColoringSequence> {
        if nodes.len() != colors.len() {
            return Err(Error::Sequence(format!(
                "{} nodes but {} colors",
                nodes.len(),
                colors.len()
            )));
        }
        if k == 0 {
            return Err(Error::Sequence("color budget k must be at least 1".into()));
        }
        let mut sorted = nodes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != nodes.len() {
            return Err(Error::Sequence("duplicate node in coloring sequence".into()));
        }
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::Sequence(format!("color {c} outside 1..={k}")));
        }
        Ok(ColoringSequence { nodes, colors, k })
    }

    pub fn nodes(&self) -> &[u32] {
        &self.nodes
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn color_of(&self, node: u32) -> Option<u32> {
        self.nodes.iter().position(|&n| n == node).map(|i| self.colors[i])
    }

    pub fn contains(&self, node: u32) -> bool {
        self.nodes.contains(&node)
    }

    /// Same sequence with nodes sorted ascending.
    pub fn sorted_by_node(&self) -> ColoringSequence {
        let mut idx: Vec<usize> = (0..self.nodes.len()).collect();
        idx.sort_unstable_by_key(|&i| self.nodes[i]);
        ColoringSequence {
            nodes: idx.iter().map(|&i| self.nodes[i]).collect(),
            colors: idx.iter().map(|&i| self.colors[i]).collect(),
            k: self.k,
        }
    }

    /// Renumbers the sequence through a node map (local ids -> parent ids).
    pub fn lift(&self, map: &NodeMap) -> ColoringSequence {
        ColoringSequence {
            nodes: self.nodes.iter().map(|&v| map.to_parent(v)).collect(),
            colors: self.colors.clone(),
            k: self.k,
        }
    }

    /// Checks both sequences assign identical colors wherever they overlap
    /// and are identical as node -> color maps when they cover the same set.
    pub fn same_assignment(&self, other: &ColoringSequence) -> bool {
        if self.nodes.len() != other.nodes.len() {
            return false;
        }
        self.nodes
            .iter()
            .zip(&self.colors)
            .all(|(&n, &c)| other.color_of(n) == Some(c))
    }
}

/// True iff `s` colors every node of `g`, every color is within `s.k()`, and
/// every edge has distinct endpoint colors.
pub fn is_valid_coloring(g: &Graph, s: &ColoringSequence) -> Result<bool> {
    if s.len() != g.node_count() as usize {
        return Err(Error::Sequence(format!(
            "coloring covers {} nodes, graph has {}",
            s.len(),
            g.node_count()
        )));
    }
    let mut color = vec![0u32; g.node_count() as usize];
    for (&n, &c) in s.nodes.iter().zip(&s.colors) {
        if n >= g.node_count() {
            return Err(Error::Sequence(format!("node {n} outside graph")));
        }
        color[n as usize] = c;
    }
    if color.iter().any(|&c| c == 0 || c > s.k()) {
        return Ok(false);
    }
    Ok(g.edges().iter().all(|&(u, v)| color[u as usize] != color[v as usize]))
}

/*────────── DIMACS .col ──────────*/

/// Parses the DIMACS `.col` format: `c` comment lines, one `p edge N M`
/// header, then `e u v` lines with 1-based endpoints. Duplicate edges are
/// deduplicated; the header's edge count is not enforced (real files lie).
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut node_count: Option<u32> = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| Error::DimacsParse(format!("line {}: {msg}", lineno + 1));
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if node_count.is_some() {
                    return Err(err("duplicate problem header".into()));
                }
                if fields.len() != 4 || fields[1] != "edge" {
                    return Err(err(format!("malformed header {line:?}")));
                }
                let n: u32 = fields[2]
                    .parse()
                    .map_err(|_| err(format!("bad node count {:?}", fields[2])))?;
                let _m: u64 = fields[3]
                    .parse()
                    .map_err(|_| err(format!("bad edge count {:?}", fields[3])))?;
                if n == 0 {
                    return Err(err("node count must be positive".into()));
                }
                node_count = Some(n);
            }
            "e" => {
                let n = node_count.ok_or_else(|| err("edge line before header".into()))?;
                if fields.len() != 3 {
                    return Err(err(format!("malformed edge line {line:?}")));
                }
                let u: u32 =
                    fields[1].parse().map_err(|_| err(format!("bad endpoint {:?}", fields[1])))?;
                let v: u32 =
                    fields[2].parse().map_err(|_| err(format!("bad endpoint {:?}", fields[2])))?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(err(format!("endpoint outside 1..={n}")));
                }
                edges.push((u - 1, v - 1));
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    let n = node_count.ok_or_else(|| Error::DimacsParse("missing problem header".into()))?;
    Graph::new(n, &edges).map_err(|e| Error::DimacsParse(e.to_string()))
}

/// Writes the canonical DIMACS form: header, then edges ascending, 1-based.
pub fn serialize_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.node_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}
