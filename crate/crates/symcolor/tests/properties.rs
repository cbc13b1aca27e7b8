//! Randomized properties over the whole stack: parsing, subgraphs, symmetry
//! detection, reduction size laws, the amplitude simulation, and the cost
//! formulas.

use proptest::prelude::*;
use symcolor::estimate::{
    gate_counts, iteration_bound_general, qubit_complexity, savings_type_1a, savings_type_1b,
    savings_type_2a, savings_type_2b,
};
use symcolor::graph::{is_valid_coloring, parse_dimacs, serialize_dimacs, Graph};
use symcolor::oracle;
use symcolor::pipeline::{self, SolveOptions};
use symcolor::reduce::{reduce_recursive, ReducePolicy, ReductionTree, SolveMode, TreeNode};
use symcolor::sim::{self, ColoringState, SimConfig};
use symcolor::symmetry::{find_involutions, AxisKind};

/// A graph on `2..=max_n` nodes with an arbitrary edge subset.
fn arb_graph(max_n: u32) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .zip(&mask)
                .filter_map(|(&e, &keep)| keep.then_some(e))
                .collect();
            Graph::new(n, &edges).expect("valid graph")
        })
    })
}

/// Like [`arb_graph`], but a path through all nodes keeps it connected.
fn arb_connected_graph(max_n: u32) -> impl Strategy<Value = Graph> {
    arb_graph(max_n).prop_map(|g| {
        let n = g.node_count();
        let mut edges = g.edges().to_vec();
        edges.extend((1..n).map(|i| (i - 1, i)));
        Graph::new(n, &edges).expect("valid graph")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimacs_round_trips(g in arb_graph(12)) {
        let text = serialize_dimacs(&g);
        let back = parse_dimacs(&text).expect("own output parses");
        prop_assert_eq!(back.node_count(), g.node_count());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn induced_subgraphs_keep_exactly_the_inner_edges(
        g in arb_graph(10),
        picks in proptest::collection::vec(any::<bool>(), 10),
    ) {
        let keep: Vec<u32> =
            (0..g.node_count()).filter(|&v| picks[v as usize]).collect();
        prop_assume!(!keep.is_empty());
        let (sub, map) = g.induced_subgraph(&keep).expect("valid subset");
        prop_assert_eq!(sub.node_count() as usize, keep.len());
        // Every local edge lifts to a parent edge.
        for &(a, b) in sub.edges() {
            let (pa, pb) = (map.to_parent(a), map.to_parent(b));
            prop_assert!(g.edges().contains(&(pa.min(pb), pa.max(pb))));
        }
        // Every parent edge inside the kept set appears locally.
        let inner = g
            .edges()
            .iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .count();
        prop_assert_eq!(sub.edge_count() as usize, inner);
    }

    #[test]
    fn enumeration_yields_exactly_the_valid_colorings(g in arb_graph(5), k in 1u32..=3) {
        let listed = oracle::enumerate_valid(&g, k).expect("within budget");
        for s in &listed {
            prop_assert_eq!(is_valid_coloring(&g, s).expect("covers the graph"), true);
        }
        // Sorted ascending by mixed-radix index, with node 0 least significant.
        let index = |s: &symcolor::ColoringSequence| -> u128 {
            s.colors()
                .iter()
                .rev()
                .fold(0u128, |acc, &c| acc * k as u128 + (c as u128 - 1))
        };
        let indices: Vec<u128> = listed.iter().map(index).collect();
        prop_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(listed.len() as u64, oracle::count_valid(&g, k).expect("within budget"));
    }

    #[test]
    fn marking_agrees_with_enumeration(g in arb_graph(5), k in 1u32..=3) {
        let mut state = ColoringState::uniform(g.node_count(), k, 1 << 24).expect("small");
        state.mark_valid(&g, &[]).expect("same node count");
        let listed = oracle::enumerate_valid(&g, k).expect("within budget");
        let decoded: Vec<Vec<u32>> =
            state.marked_indices().iter().map(|&i| state.decode(i)).collect();
        let expected: Vec<Vec<u32>> = listed.iter().map(|s| s.colors().to_vec()).collect();
        prop_assert_eq!(decoded, expected);
    }

    #[test]
    fn involutions_match_a_brute_force_scan(g in arb_connected_graph(6)) {
        use itertools::Itertools;
        let n = g.node_count();
        let found: Vec<Vec<u32>> = find_involutions(&g)
            .expect("connected")
            .iter()
            .map(|inv| inv.sigma().to_vec())
            .collect();
        let mut expected = Vec::new();
        for perm in (0..n).permutations(n as usize) {
            let identity = perm.iter().enumerate().all(|(i, &p)| p == i as u32);
            let involutive = perm.iter().enumerate().all(|(i, &p)| perm[p as usize] == i as u32);
            let automorphism = g.edges().iter().all(|&(a, b)| {
                let (x, y) = (perm[a as usize], perm[b as usize]);
                g.edges().contains(&(x.min(y), x.max(y)))
            });
            if !identity && involutive && automorphism {
                expected.push(perm);
            }
        }
        expected.sort();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn reduction_trees_obey_the_size_laws(g in arb_connected_graph(10)) {
        let tree = reduce_recursive(&g, &ReducePolicy::default()).expect("connected");
        check_size_laws(&tree)?;
    }

    #[test]
    fn amplification_matches_the_closed_form(
        logp in 1u32..=12,
        picks in proptest::collection::vec(any::<bool>(), 64),
        t in 0u64..=40,
    ) {
        let p = 1u128 << logp;
        // A one-node state over k colors spans exactly k basis states.
        let mut state = ColoringState::uniform(1, p as u32, 1 << 24).expect("small");
        let marked: Vec<usize> =
            (0..p as usize).filter(|&i| picks[i % picks.len()]).collect();
        prop_assume!(!marked.is_empty());
        state.mark_indices(&marked).expect("in range");
        state.amplify(t).expect("marked");
        let closed = sim::grover_success_probability(p, marked.len() as u128, t);
        prop_assert!((state.marked_probability() - closed).abs() < 1e-9);
    }

    #[test]
    fn optimal_iterations_never_exceed_the_ceiling_bound(
        logp in 1u32..=40,
        marked in 1u128..=100,
    ) {
        let p = 1u128 << logp;
        prop_assume!(marked <= p);
        let t = sim::optimal_iterations(p, marked).expect("valid");
        let bound = iteration_bound_general(&p.into(), &marked.into()).expect("valid");
        prop_assert!(t <= bound, "t {t} > bound {bound} for p={p} marked={marked}");
    }

    #[test]
    fn savings_formulas_equal_direct_complexity_differences(n in 3u32..=300, m in 1u32..=299) {
        if m < n && (n - m) % 2 == 0 {
            let direct = qubit_complexity(n) - qubit_complexity((n + m) / 2);
            prop_assert_eq!(savings_type_1a(n, m).expect("valid"), direct);
        }
        if n % 2 == 0 {
            let direct = qubit_complexity(n) - 2 * qubit_complexity(n / 2);
            prop_assert_eq!(savings_type_2a(n).expect("valid"), direct);
        }
        // 1.b daughters share a node; 2.b daughters partition the graph.
        let (n1, n2) = (n.max(2), m.max(2));
        let direct = qubit_complexity(n1 + n2 - 1) - qubit_complexity(n1) - qubit_complexity(n2);
        prop_assert_eq!(savings_type_1b(n1, n2).expect("valid"), direct);
        let direct = qubit_complexity(n1 + n2) - qubit_complexity(n1) - qubit_complexity(n2);
        prop_assert_eq!(savings_type_2b(n1, n2).expect("valid"), direct);
    }

    #[test]
    fn gate_totals_are_the_sum_of_their_stages(n in 1u32..=10_000) {
        let g = gate_counts(n);
        prop_assert_eq!(g.total, g.init + g.mark + g.amplify);
    }

    #[test]
    fn pipeline_agrees_with_enumeration_about_solvability(
        g in arb_connected_graph(6),
        k in 1u32..=3,
        seed in 0u64..1000,
    ) {
        let options = SolveOptions {
            colors: k,
            seed,
            policy: ReducePolicy::default(),
            sim: SimConfig::default(),
        };
        let solvable = oracle::exists_valid(&g, k);
        match pipeline::solve(&g, &options) {
            Ok(outcome) => {
                prop_assert!(solvable, "pipeline colored an uncolorable graph");
                prop_assert_eq!(is_valid_coloring(&g, &outcome.coloring).expect("covers"), true);
            }
            Err(symcolor::Error::Unsolvable { .. }) => prop_assert!(!solvable),
            Err(other) => prop_assert!(false, "unexpected error: {other}"),
        }
    }
}

/// Size laws per cut kind, applied recursively.
fn check_size_laws(tree: &ReductionTree) -> Result<(), TestCaseError> {
    if let TreeNode::Step(step) = &tree.node {
        let n = tree.graph.node_count();
        let m = step.axis.fixed_nodes.len() as u32;
        let (n1, n2) =
            (step.daughter1.graph.node_count(), step.daughter2.graph.node_count());
        match step.axis.kind {
            AxisKind::OneA | AxisKind::ThreeA => {
                prop_assert_eq!(n1, (n + m) / 2);
                prop_assert_eq!(n1, n2);
                prop_assert_eq!((n - m) % 2, 0);
                prop_assert_eq!(step.solve_mode, SolveMode::MirrorOne);
            }
            AxisKind::TwoA => {
                prop_assert_eq!(m, 0);
                prop_assert_eq!(n1, n / 2);
                prop_assert_eq!(n2, n / 2);
            }
            AxisKind::OneB => prop_assert_eq!(n1 + n2, n + 1),
            AxisKind::TwoB => prop_assert_eq!(n1 + n2, n),
        }
        for d in [&step.daughter1, &step.daughter2] {
            if let Some(sub) = &d.subtree {
                check_size_laws(sub)?;
            }
        }
    }
    Ok(())
}
