//! The seven acceptance gates for this artifact. Each test checks one gate at
//! its stated tolerance and time budget and prints a single pass line.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symcolor::estimate::{
    coloring_matrices, compare_techniques, gate_counts, iteration_bound, qubit_complexity,
    report, runtime_exponent, savings_type_1a, savings_type_1b, savings_type_2a,
    savings_type_2b, Technique,
};
use symcolor::graph::{is_valid_coloring, ColoringSequence, Graph};
use symcolor::oracle;
use symcolor::pipeline::{self, SolveOptions};
use symcolor::reconstruct::reconstruct_tree;
use symcolor::reduce::{
    cut_type_1a, reduce_recursive, ReducePolicy, ReductionTree, TreeNode,
};
use symcolor::sim::{self, onehot_bitstring, optimal_iterations, ColoringState, SimConfig};
use symcolor::symmetry::{classify_axis, enumerate_axes, AxisKind, Involution};
use symcolor::Error;

fn square() -> Graph {
    Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
}

fn cycle(n: u32) -> Graph {
    let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).unwrap()
}

fn leaf(g: Graph) -> ReductionTree {
    ReductionTree { graph: g, node: TreeNode::Leaf }
}

/// The square folded across the axis through its two opposite corners B and
/// D (nodes 1 and 3), then the surviving 3-node path folded across its own
/// midpoint: solves shrink 4 → 3 → 2 nodes.
fn two_level_square_tree() -> ReductionTree {
    let g = square();
    let inv = Involution::new(&g, vec![2, 1, 0, 3]).unwrap();
    let axis = classify_axis(&g, &inv).expect("corner-to-corner mirror");
    let mut step = cut_type_1a(&g, &axis).unwrap();

    let d1 = step.daughter1.graph.clone();
    let inv2 = Involution::new(&d1, vec![0, 2, 1]).unwrap();
    let axis2 = classify_axis(&d1, &inv2).expect("endpoint-swap mirror");
    let mut step2 = cut_type_1a(&d1, &axis2).unwrap();
    step2.daughter1.subtree = Some(leaf(step2.daughter1.graph.clone()));
    step.daughter1.subtree =
        Some(ReductionTree { graph: d1, node: TreeNode::Step(Box::new(step2)) });

    ReductionTree { graph: g, node: TreeNode::Step(Box::new(step)) }
}

#[test]
fn acceptance_1_formula_reproduction() {
    let t0 = Instant::now();

    assert_eq!(qubit_complexity(4), 23);
    assert_eq!(qubit_complexity(14), 288);
    assert_eq!(qubit_complexity(3), 13);
    assert_eq!(qubit_complexity(8), 93);

    // An edge-axis cut leaves two daughters of n nodes each, both solved.
    assert_eq!(2 * qubit_complexity(2), 12);
    assert_eq!(2 * qubit_complexity(7), 142);

    assert_eq!(savings_type_1b(4, 4).unwrap(), 25);
    assert_eq!(savings_type_2b(4, 3).unwrap(), 35);

    assert_eq!(gate_counts(10).total, 2849);
    assert_eq!(gate_counts(6).total, 789);

    assert_eq!(iteration_bound(20).unwrap(), 5157);
    assert_eq!(iteration_bound(11).unwrap(), 67);

    // State-space cascade of the two-level square reduction at K = 2.
    assert_eq!(coloring_matrices(4, 2).to_string(), "16");
    assert_eq!(coloring_matrices(3, 2).to_string(), "8");
    assert_eq!(coloring_matrices(2, 2).to_string(), "4");
    let pair = report(&square(), &two_level_square_tree(), Some(2)).unwrap();
    assert_eq!(pair.after.matrices_by_order, ["16", "8", "4"]);

    assert!(t0.elapsed() < Duration::from_secs(1), "budget exceeded");
    println!("ACCEPTANCE 1: PASS");
}

#[test]
fn acceptance_2_worked_example() {
    let t0 = Instant::now();

    // Square A-B-C-D folded across the axis through B and D.
    let g = square();
    let inv = Involution::new(&g, vec![2, 1, 0, 3]).unwrap();
    let axis = classify_axis(&g, &inv).expect("corner-to-corner mirror");
    assert_eq!(axis.kind, AxisKind::OneA);
    assert_eq!(axis.fixed_nodes, vec![1, 3]);
    let mut step = cut_type_1a(&g, &axis).unwrap();
    step.daughter1.subtree = Some(leaf(step.daughter1.graph.clone()));
    assert_eq!(step.daughter2.map.parents(), &[1, 2, 3]);

    // The B-C-D daughter is a 3-node path; at K = 2 the simulator marks
    // exactly its two proper colorings.
    let p3 = step.daughter2.graph.clone();
    let mut state = ColoringState::uniform(3, 2, 1 << 24).unwrap();
    state.mark_valid(&p3, &[]).unwrap();
    let marked: Vec<Vec<u32>> =
        state.marked_indices().iter().map(|&i| state.decode(i)).collect();
    assert_eq!(marked, vec![vec![1, 2, 1], vec![2, 1, 2]]);

    let mut strings: Vec<String> = marked
        .iter()
        .map(|colors| {
            let s = ColoringSequence::new(vec![0, 1, 2], colors.clone(), 2).unwrap();
            onehot_bitstring(&p3, &s).unwrap()
        })
        .collect();
    strings.sort();
    assert_eq!(strings, ["111011001", "111100110"]);

    // Reconstruction through the mirror returns the full alternation.
    let tree = ReductionTree { graph: g.clone(), node: TreeNode::Step(Box::new(step)) };
    let options = SolveOptions {
        colors: 2,
        seed: 0,
        policy: ReducePolicy::default(),
        sim: SimConfig::default(),
    };
    let (coloring, _) = pipeline::solve_tree(&tree, &options).unwrap();
    let colors = coloring.colors();
    assert!(colors == [1, 2, 1, 2] || colors == [2, 1, 2, 1], "got {colors:?}");
    assert!(is_valid_coloring(&g, &coloring).unwrap());

    assert!(t0.elapsed() < Duration::from_secs(1), "budget exceeded");
    println!("ACCEPTANCE 2: PASS");
}

#[test]
fn acceptance_3_grover_closed_form() {
    let t0 = Instant::now();

    for logp in 1..=12u32 {
        let p: u128 = 1 << logp;
        for k in 1..=p.min(64) as usize {
            let mut state = ColoringState::uniform(1, p as u32, 1 << 24).unwrap();
            state.mark_indices(&(0..k).collect::<Vec<_>>()).unwrap();
            let t_star = optimal_iterations(p, k as u128).unwrap();
            let theta = ((k as f64) / (p as f64)).sqrt().asin();
            for t in 0..=3 * t_star {
                if t > 0 {
                    state.amplify(1).unwrap();
                }
                let closed = ((2 * t + 1) as f64 * theta).sin().powi(2);
                let simulated = state.marked_probability();
                assert!(
                    (simulated - closed).abs() < 1e-9,
                    "P={p} k={k} t={t}: simulated {simulated}, closed {closed}"
                );
            }
        }
    }

    // Eight states, two marked: one round reaches certainty, exactly.
    let mut state = ColoringState::uniform(1, 8, 1 << 24).unwrap();
    state.mark_indices(&[0, 1]).unwrap();
    assert_eq!(optimal_iterations(8, 2).unwrap(), 1);
    state.amplify(1).unwrap();
    assert_eq!(state.marked_probability(), 1.0);

    assert!(t0.elapsed() < Duration::from_secs(10), "budget exceeded");
    println!("ACCEPTANCE 3: PASS");
}

#[test]
fn acceptance_4_oracle_equivalence() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut done = 0;
    while done < 500 {
        let n = rng.gen_range(2..=6u32);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.45) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::new(n, &edges).unwrap();
        if !g.is_connected() {
            continue;
        }
        let k = rng.gen_range(1..=3u32);

        let mut state = ColoringState::uniform(n, k, 1 << 24).unwrap();
        state.mark_valid(&g, &[]).unwrap();
        let decoded: Vec<Vec<u32>> =
            state.marked_indices().iter().map(|&i| state.decode(i)).collect();
        let listed = oracle::enumerate_valid(&g, k).unwrap();
        let expected: Vec<Vec<u32>> = listed.iter().map(|s| s.colors().to_vec()).collect();
        assert_eq!(decoded, expected, "marking differs from enumeration");

        if !listed.is_empty() {
            let (solved, _) =
                sim::solve(&g, k, &[], rng.gen(), &SimConfig::default()).unwrap();
            assert!(
                listed.iter().any(|s| s.same_assignment(&solved)),
                "solve returned a non-member"
            );
        }
        done += 1;
    }
    assert!(t0.elapsed() < Duration::from_secs(60), "budget exceeded");
    println!("ACCEPTANCE 4: PASS");
}

/// A graph built around a known mirror: two copies of a random half, `m`
/// shared fixed nodes, and optional crossed edges.
fn planted_involution_graph(rng: &mut ChaCha8Rng) -> (Graph, Vec<u32>) {
    let s = rng.gen_range(2..=4u32);
    let m = rng.gen_range(0..=(10 - 2 * s).min(4));
    let n = 2 * s + m;
    let sigma: Vec<u32> = (0..n)
        .map(|v| {
            if v < s {
                v + s
            } else if v < 2 * s {
                v - s
            } else {
                v
            }
        })
        .collect();

    let mut edges = Vec::new();
    for i in 0..s - 1 {
        edges.push((i, i + 1));
        edges.push((i + s, i + s + 1));
    }
    for i in 0..s {
        for j in i + 1..s {
            if rng.gen_bool(0.3) {
                edges.push((i, j));
                edges.push((i + s, j + s));
            }
        }
    }
    for f in 0..m {
        edges.push((0, 2 * s + f));
        edges.push((s, 2 * s + f));
        for i in 1..s {
            if rng.gen_bool(0.25) {
                edges.push((i, 2 * s + f));
                edges.push((i + s, 2 * s + f));
            }
        }
    }
    for f1 in 0..m {
        for f2 in f1 + 1..m {
            if rng.gen_bool(0.3) {
                edges.push((2 * s + f1, 2 * s + f2));
            }
        }
    }
    if m == 0 {
        edges.push((0, s));
    }
    for i in 0..s {
        if rng.gen_bool(0.2) {
            edges.push((i, i + s));
        }
    }
    (Graph::new(n, &edges).unwrap(), sigma)
}

#[test]
fn acceptance_5_reduction_soundness() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let (g, sigma) = planted_involution_graph(&mut rng);
        let n = g.node_count();

        // The planted mirror is a real involutive automorphism.
        let planted = Involution::new(&g, sigma).expect("planted mirror is an automorphism");
        assert!(classify_axis(&g, &planted).is_some(), "planted mirror classifies");

        // Every classified symmetric axis obeys the size laws.
        for axis in enumerate_axes(&g).unwrap() {
            let (d1, d2) = axis.daughter_sizes();
            match axis.kind {
                AxisKind::OneA | AxisKind::ThreeA => {
                    assert_eq!((n - axis.m()) % 2, 0, "m and N must share parity");
                    assert_eq!(d1, (n + axis.m()) / 2);
                    assert_eq!(d2, d1);
                }
                AxisKind::TwoA => {
                    assert_eq!(axis.m(), 0);
                    assert_eq!(n % 2, 0);
                    assert_eq!((d1, d2), (n / 2, n / 2));
                }
                AxisKind::OneB => assert_eq!(d1 + d2, n + 1),
                AxisKind::TwoB => assert_eq!(d1 + d2, n),
            }
        }

        // End to end: whenever the leaf solves succeed, the reconstructed
        // coloring is proper.
        let options = SolveOptions {
            colors: 3,
            seed: rng.gen(),
            policy: ReducePolicy::default(),
            sim: SimConfig::default(),
        };
        match pipeline::solve(&g, &options) {
            Ok(outcome) => assert!(is_valid_coloring(&g, &outcome.coloring).unwrap()),
            Err(Error::Unsolvable { .. }) => {}
            Err(other) => panic!("unexpected pipeline error: {other}"),
        }

        // For node-axis cuts specifically, a solved daughter always yields a
        // solved parent.
        let shallow = ReducePolicy { min_size: 3, max_depth: Some(1) };
        let tree = reduce_recursive(&g, &shallow).unwrap();
        if let TreeNode::Step(step) = &tree.node {
            if step.axis.kind == AxisKind::OneA {
                match sim::solve(&step.daughter1.graph, 3, &[], rng.gen(), &SimConfig::default())
                {
                    Ok((leaf, _)) => {
                        let full = reconstruct_tree(&tree, std::slice::from_ref(&leaf))
                            .expect("mirror merge succeeds whenever the leaf solve does");
                        assert!(is_valid_coloring(&g, &full).unwrap());
                    }
                    Err(Error::Unsolvable { .. }) => {}
                    Err(other) => panic!("unexpected leaf error: {other}"),
                }
            }
        }
    }
    assert!(t0.elapsed() < Duration::from_secs(120), "budget exceeded");
    println!("ACCEPTANCE 5: PASS");
}

#[test]
fn acceptance_6_identity_sweep() {
    let t0 = Instant::now();

    for n in 3..=200u32 {
        let first_m = if n % 2 == 0 { 2 } else { 1 };
        for m in (first_m..n).step_by(2) {
            let direct = qubit_complexity(n) - qubit_complexity((n + m) / 2);
            assert_eq!(savings_type_1a(n, m).unwrap(), direct);
        }
    }
    for n in (2..=200u32).step_by(2) {
        let direct = qubit_complexity(n) - 2 * qubit_complexity(n / 2);
        assert_eq!(savings_type_2a(n).unwrap(), direct);
    }
    for n1 in 2..=199u32 {
        for n2 in 2..=(201 - n1) {
            let direct =
                qubit_complexity(n1 + n2 - 1) - qubit_complexity(n1) - qubit_complexity(n2);
            assert_eq!(savings_type_1b(n1, n2).unwrap(), direct);
        }
    }
    for n1 in 1..=199u32 {
        for n2 in 1..=(200 - n1) {
            let direct =
                qubit_complexity(n1 + n2) - qubit_complexity(n1) - qubit_complexity(n2);
            assert_eq!(savings_type_2b(n1, n2).unwrap(), direct);
        }
    }

    // The technique choice always agrees with the sign of the saving gap
    // 8·(node-axis − edge-axis) = 3N² − 3m² − 6Nm − 2N + 2m + 8.
    for n in (4..=500u32).step_by(2) {
        for m in 2..n {
            let (ni, mi) = (n as i128, m as i128);
            let gap = 3 * ni * ni - 3 * mi * mi - 6 * ni * mi - 2 * ni + 2 * mi + 8;
            let expected = if gap > 0 { Technique::Prefer1a } else { Technique::Prefer2a };
            let choice = compare_techniques(n, m).unwrap();
            assert_eq!(choice.technique, expected, "N={n} m={m} gap={gap}");
        }
    }

    assert!(t0.elapsed() < Duration::from_secs(5), "budget exceeded");
    println!("ACCEPTANCE 6: PASS");
}

#[test]
fn acceptance_7_runtime_exponent_transformations() {
    let base = runtime_exponent(1).base;
    assert_eq!(base, 1.9575);

    // Node-axis folds: N → (N + m)/2 at every level of the worked square.
    let pair = report(&square(), &two_level_square_tree(), Some(2)).unwrap();
    assert_eq!(pair.before.runtime.exponent, 4);
    assert_eq!(pair.after.solved_leaves.len(), 1);
    assert_eq!(pair.after.solved_leaves[0].runtime.exponent, 2);

    // The same transformation on the gate- and iteration-benchmark cycles.
    let shallow = ReducePolicy { min_size: 3, max_depth: Some(1) };
    for (n, folded) in [(10u32, 6u32), (20, 11)] {
        let g = cycle(n);
        let tree = reduce_recursive(&g, &shallow).unwrap();
        let pair = report(&g, &tree, None).unwrap();
        assert_eq!(pair.before.runtime.exponent, n);
        let leaves = &pair.after.solved_leaves;
        assert_eq!(leaves.len(), 1, "a mirror fold solves one daughter");
        assert_eq!(leaves[0].runtime.exponent, folded);
        assert_eq!(folded, (n + 2) / 2);
        let expected_log10 = folded as f64 * base.log10();
        assert!((leaves[0].runtime.log10 - expected_log10).abs() < 1e-12);
    }

    // Edge-axis cut: N → N/2, twice (both daughters are solved).
    let permissive = ReducePolicy { min_size: 2, max_depth: Some(1) };
    let tree = reduce_recursive(&square(), &permissive).unwrap();
    let pair = report(&square(), &tree, Some(2)).unwrap();
    let exponents: Vec<u32> =
        pair.after.solved_leaves.iter().map(|l| l.runtime.exponent).collect();
    assert_eq!(exponents, [2, 2]);

    println!("ACCEPTANCE 7: PASS");
}
