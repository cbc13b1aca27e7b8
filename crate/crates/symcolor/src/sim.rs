//! Classical simulation of the amplitude-amplification search for valid
//! colorings.
//!
//! The state lives in the K^N coloring space: index i encodes one assignment
//! in mixed radix, node 0 in the least significant digit, digit c-1 for
//! color c. Amplitudes are real throughout — the initial state is uniform
//! and both the phase flip and the inversion about the mean keep it real.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ColoringSequence, Graph};
use crate::oracle;

/// Simulator limits.
#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    /// Largest K^N state space the simulator will materialize.
    pub state_cap: u128,
    /// Redraws allowed before sampling gives up (each draw lands on a marked
    /// state with the amplified probability, so failures compound away).
    pub sample_retries: u32,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { state_cap: 1 << 24, sample_retries: 64 }
    }
}

/// A color requirement imposed on one node from outside the graph being
/// solved — the already-colored partner on the other side of a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossConstraint {
    pub kind: CrossConstraintKind,
    /// Node id local to the graph under solve.
    pub node: u32,
    /// Color in 1..=K.
    pub color: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrossConstraintKind {
    MustEqual,
    MustDiffer,
}

impl CrossConstraint {
    pub fn equal(node: u32, color: u32) -> CrossConstraint {
        CrossConstraint { kind: CrossConstraintKind::MustEqual, node, color }
    }

    pub fn differ(node: u32, color: u32) -> CrossConstraint {
        CrossConstraint { kind: CrossConstraintKind::MustDiffer, node, color }
    }
}

/// The simulated register over all K^N assignments.
#[derive(Debug, Clone)]
pub struct ColoringState {
    n: u32,
    k: u32,
    amplitudes: Vec<f64>,
    marked: Vec<usize>,
}

impl ColoringState {
    /// Uniform superposition over all assignments of `k` colors to `n`
    /// nodes. Fails when K^N exceeds `state_cap`.
    pub fn uniform(n: u32, k: u32, state_cap: u128) -> Result<ColoringState> {
        if n == 0 {
            return Err(Error::InvalidArgument("state needs at least one node".into()));
        }
        let size = (k as u128)
            .checked_pow(n)
            .ok_or(Error::StateCap { size: u128::MAX, cap: state_cap })?;
        if size > state_cap {
            return Err(Error::StateCap { size, cap: state_cap });
        }
        let amp = if size == 0 { 0.0 } else { 1.0 / (size as f64).sqrt() };
        Ok(ColoringState {
            n,
            k,
            amplitudes: vec![amp; size as usize],
            marked: Vec::new(),
        })
    }

    pub fn state_size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn colors(&self) -> u32 {
        self.k
    }

    pub fn marked_indices(&self) -> &[usize] {
        &self.marked
    }

    /// Marks every assignment that properly colors `g` and satisfies the
    /// cross constraints.
    pub fn mark_valid(&mut self, g: &Graph, constraints: &[CrossConstraint]) -> Result<()> {
        if g.node_count() != self.n {
            return Err(Error::InvalidArgument(format!(
                "state over {} nodes, graph has {}",
                self.n,
                g.node_count()
            )));
        }
        for c in constraints {
            if c.node >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "constraint node {} outside graph",
                    c.node
                )));
            }
            if c.color < 1 || c.color > self.k {
                return Err(Error::InvalidArgument(format!(
                    "constraint color {} outside 1..={}",
                    c.color, self.k
                )));
            }
        }
        self.marked.clear();
        // Walk the state space with an odometer over the digit vector
        // instead of decoding every index from scratch.
        let mut digits = vec![0u32; self.n as usize];
        for index in 0..self.amplitudes.len() {
            if index > 0 {
                for d in digits.iter_mut() {
                    *d += 1;
                    if *d < self.k {
                        break;
                    }
                    *d = 0;
                }
            }
            let proper = g
                .edges()
                .iter()
                .all(|&(u, v)| digits[u as usize] != digits[v as usize]);
            let compatible = constraints.iter().all(|c| {
                let color = digits[c.node as usize] + 1;
                match c.kind {
                    CrossConstraintKind::MustEqual => color == c.color,
                    CrossConstraintKind::MustDiffer => color != c.color,
                }
            });
            if proper && compatible {
                self.marked.push(index);
            }
        }
        Ok(())
    }

    /// Marks an explicit index set (deduplicated, kept sorted).
    pub fn mark_indices(&mut self, indices: &[usize]) -> Result<()> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&last) = sorted.last() {
            if last >= self.amplitudes.len() {
                return Err(Error::InvalidArgument(format!(
                    "marked index {last} outside state of size {}",
                    self.amplitudes.len()
                )));
            }
        }
        self.marked = sorted;
        Ok(())
    }

    /// Runs `t` amplification rounds: flip the sign of every marked
    /// amplitude, then invert all amplitudes about their mean.
    pub fn amplify(&mut self, t: u64) -> Result<()> {
        if self.marked.is_empty() {
            return Err(Error::InvalidArgument(
                "nothing is marked; amplification has no target".into(),
            ));
        }
        let size = self.amplitudes.len() as f64;
        for _ in 0..t {
            for &i in &self.marked {
                self.amplitudes[i] = -self.amplitudes[i];
            }
            let mean = self.amplitudes.iter().sum::<f64>() / size;
            for a in self.amplitudes.iter_mut() {
                *a = 2.0 * mean - *a;
            }
        }
        Ok(())
    }

    /// Probability mass sitting on the marked states, as the ratio of
    /// squared amplitude sums (insensitive to rounding of the norm).
    pub fn marked_probability(&self) -> f64 {
        let total: f64 = self.amplitudes.iter().map(|a| a * a).sum();
        if total == 0.0 {
            return 0.0;
        }
        let marked: f64 = self.marked.iter().map(|&i| self.amplitudes[i].powi(2)).sum();
        marked / total
    }

    /// Squared-norm of the state; stays within rounding of 1.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    /// Draws one index from the squared-amplitude distribution.
    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let total: f64 = self.amplitudes.iter().map(|a| a * a).sum();
        let target = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            acc += a * a;
            if target < acc {
                return i;
            }
        }
        self.amplitudes.len() - 1
    }

    /// Decodes a state index into per-node colors (1-based).
    pub fn decode(&self, index: usize) -> Vec<u32> {
        let mut colors = Vec::with_capacity(self.n as usize);
        let mut rest = index;
        for _ in 0..self.n {
            colors.push((rest % self.k as usize) as u32 + 1);
            rest /= self.k as usize;
        }
        colors
    }
}

/// The iteration count that maximizes success probability for `marked`
/// targets among `total` states: the nearest integer to pi/(4 asin(sqrt(
/// marked/total))) - 1/2.
pub fn optimal_iterations(total: u128, marked: u128) -> Result<u64> {
    if marked == 0 {
        return Err(Error::InvalidArgument("no marked states".into()));
    }
    if marked > total {
        return Err(Error::InvalidArgument(format!(
            "{marked} marked states in a space of {total}"
        )));
    }
    if marked == total {
        return Ok(0);
    }
    let theta = (marked as f64 / total as f64).sqrt().asin();
    Ok((std::f64::consts::PI / (4.0 * theta) - 0.5).round() as u64)
}

/// Closed-form success probability after `t` rounds.
pub fn grover_success_probability(total: u128, marked: u128, t: u64) -> f64 {
    let theta = (marked as f64 / total as f64).sqrt().asin();
    ((2 * t + 1) as f64 * theta).sin().powi(2)
}

/// Per-solve diagnostics, one record per directly-solved graph.
#[derive(Debug, Clone, Serialize)]
pub struct LeafReport {
    pub nodes: u32,
    pub colors: u32,
    pub state_size: u128,
    pub marked: u64,
    pub iterations: u64,
    pub success_probability: f64,
    pub samples_drawn: u32,
    pub seed: u64,
    /// The coloring this solve produced, in the solved graph's local ids.
    pub coloring: ColoringSequence,
    /// Measurement-register rendering of that coloring.
    pub bitstring: String,
}

/// Full search on one graph: uniform state, oracle marking, the optimal
/// number of amplification rounds, then sampling (redrawn on the off chance
/// an unmarked state comes up).
pub fn solve(
    g: &Graph,
    k: u32,
    constraints: &[CrossConstraint],
    seed: u64,
    config: &SimConfig,
) -> Result<(ColoringSequence, LeafReport)> {
    let mut state = ColoringState::uniform(g.node_count(), k, config.state_cap)?;
    if k > 0 {
        state.mark_valid(g, constraints)?;
    }
    if state.marked.is_empty() {
        let chromatic = if constraints.is_empty() {
            oracle::chromatic_number(g).ok()
        } else {
            None
        };
        return Err(Error::Unsolvable { chromatic });
    }
    let total = state.state_size() as u128;
    let marked = state.marked.len() as u128;
    let t = optimal_iterations(total, marked)?;
    state.amplify(t)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=config.sample_retries {
        let index = state.sample(&mut rng);
        if state.marked.binary_search(&index).is_ok() {
            let colors = state.decode(index);
            let nodes: Vec<u32> = (0..g.node_count()).collect();
            let sequence = ColoringSequence::new(nodes, colors, k)?;
            let bitstring = onehot_bitstring(g, &sequence)?;
            let report = LeafReport {
                nodes: g.node_count(),
                colors: k,
                state_size: total,
                marked: marked as u64,
                iterations: t,
                success_probability: state.marked_probability(),
                samples_drawn: attempt,
                seed,
                coloring: sequence.clone(),
                bitstring,
            };
            return Ok((sequence, report));
        }
    }
    Err(Error::Budget(format!(
        "no marked state sampled in {} draws",
        config.sample_retries
    )))
}

/// Measurement-register rendering of a coloring: per node a one-hot block of
/// K bits (color c sets bit K-c of the block, so color 1 is the block's
/// lowest-order bit), one ancilla per edge set when the endpoints differ,
/// and a final qubit set when every ancilla is. The string is written most
/// significant qubit first.
pub fn onehot_bitstring(g: &Graph, s: &ColoringSequence) -> Result<String> {
    let n = g.node_count();
    let k = s.k();
    if s.len() != n as usize {
        return Err(Error::Sequence(format!(
            "sequence colors {} of {n} nodes",
            s.len()
        )));
    }
    let total_bits = (n * k + g.edge_count() + 1) as usize;
    let mut bits = vec![0u8; total_bits];
    for v in 0..n {
        let color = s
            .color_of(v)
            .ok_or_else(|| Error::Sequence(format!("node {v} missing from sequence")))?;
        if color < 1 || color > k {
            return Err(Error::Sequence(format!(
                "color {color} for node {v} outside 1..={k}"
            )));
        }
        bits[(v * k + (k - color)) as usize] = 1;
    }
    let mut all_ok = true;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let differ = s.color_of(u) != s.color_of(v);
        all_ok &= differ;
        bits[(n * k) as usize + e] = differ as u8;
    }
    bits[total_bits - 1] = all_ok as u8;
    Ok(bits.iter().rev().map(|b| char::from(b'0' + b)).collect())
}
