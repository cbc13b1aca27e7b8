//! Symmetry-aware reduction and simulated quantum search for graph
//! K-coloring.
//!
//! Special graphs can be folded before they are colored: an involutive
//! symmetry whose axis runs through nodes or edges, a cut vertex, or a
//! bridge splits the graph into two daughters that are colored separately
//! and merged back. Because the search cost of the amplitude-amplified
//! coloring procedure grows steeply with node count, each cut pays for
//! itself; the [`estimate`] module quantifies the saving in qubits, gates
//! and iterations.
//!
//! The crate is organized as a pipeline:
//!
//! - [`graph`]: graphs, DIMACS parsing, coloring sequences and node maps;
//! - [`symmetry`]: finding involutions, cut vertices and bridges, and
//!   turning them into cut axes;
//! - [`reduce`]: cutting along an axis and recursing into the daughters;
//! - [`sim`]: the classical simulation of the amplified search over the
//!   K^N coloring space;
//! - [`oracle`]: exhaustive-enumeration ground truth for small instances;
//! - [`reconstruct`]: merging daughter colorings into a parent coloring;
//! - [`pipeline`]: the end-to-end reduce/solve/reconstruct driver;
//! - [`estimate`]: qubit, gate, iteration and runtime accounting.

pub mod error;
pub mod estimate;
pub mod graph;
pub mod oracle;
pub mod pipeline;
pub mod reconstruct;
pub mod reduce;
pub mod sim;
pub mod symmetry;

pub use error::{Error, Result};
pub use estimate::{
    compare_techniques, gate_counts, iteration_bound, qubit_complexity, report, single_report,
};
pub use graph::{is_valid_coloring, parse_dimacs, serialize_dimacs, ColoringSequence, Graph, NodeMap};
pub use pipeline::{solve, solve_tree, SolveOptions, SolveOutcome};
pub use reconstruct::reconstruct_tree;
pub use reduce::{reduce_recursive, ReducePolicy, ReductionTree};
pub use sim::{onehot_bitstring, optimal_iterations, SimConfig};
pub use symmetry::{enumerate_axes, find_involutions, select_axis, Axis, AxisKind};
