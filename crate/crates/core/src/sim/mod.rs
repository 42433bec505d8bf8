//! Attack simulation: connectivity and controllability robustness curves.
//!
//! A curve has one value per removal step `i = 0..N-1`:
//!
//! ```text
//! connectivity     r(i) = N_L(i) / (N - i)    N_L: largest weak component
//! controllability  r(i) = N_D(i) / (N - i)    N_D: driver-node count
//! ```
//!
//! Driver nodes follow the minimum inputs theorem, `max(1, n - |matching|)`,
//! for directed graphs, or the exact controllability theorem,
//! `max(1, n - rank(A))`, for either kind.

pub mod matching;
pub mod rank;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DisjointSet, Graph, NodeId};

pub use matching::DirectedMatching;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Connectivity,
    Controllability,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Connectivity => "connectivity",
            Measure::Controllability => "controllability",
        })
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "connectivity" => Ok(Measure::Connectivity),
            "controllability" => Ok(Measure::Controllability),
            other => Err(Error::InvalidConfig(format!("unknown measure `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttackKind {
    /// Highest residual total degree first, recomputed after every removal.
    #[serde(rename = "degree")]
    MaxDegree,
    /// Highest degree in the intact graph first.
    #[serde(rename = "initial-degree")]
    InitialDegree,
    #[serde(rename = "random")]
    Random,
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackKind::MaxDegree => "degree",
            AttackKind::InitialDegree => "initial-degree",
            AttackKind::Random => "random",
        })
    }
}

impl FromStr for AttackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degree" | "max-degree" => Ok(AttackKind::MaxDegree),
            "initial-degree" => Ok(AttackKind::InitialDegree),
            "random" => Ok(AttackKind::Random),
            other => Err(Error::InvalidConfig(format!("unknown attack `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttackStrategy {
    pub kind: AttackKind,
    pub seed: u64,
}

impl AttackStrategy {
    pub fn new(kind: AttackKind, seed: u64) -> Self {
        Self { kind, seed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Mit,
    Ect,
}

impl Theorem {
    /// MIT for directed graphs, ECT for undirected ones.
    pub fn default_for(g: &Graph) -> Self {
        if g.is_directed() {
            Theorem::Mit
        } else {
            Theorem::Ect
        }
    }
}

/// Theorem selection where `Auto` defers to [`Theorem::default_for`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremChoice {
    #[default]
    Auto,
    Mit,
    Ect,
}

impl TheoremChoice {
    pub fn resolve(self, g: &Graph) -> Theorem {
        match self {
            TheoremChoice::Auto => Theorem::default_for(g),
            TheoremChoice::Mit => Theorem::Mit,
            TheoremChoice::Ect => Theorem::Ect,
        }
    }
}

impl fmt::Display for TheoremChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremChoice::Auto => "auto",
            TheoremChoice::Mit => "mit",
            TheoremChoice::Ect => "ect",
        })
    }
}

impl FromStr for TheoremChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(TheoremChoice::Auto),
            "mit" => Ok(TheoremChoice::Mit),
            "ect" => Ok(TheoremChoice::Ect),
            other => Err(Error::InvalidConfig(format!("unknown theorem `{other}`"))),
        }
    }
}

/// Per-step functionality densities of one attack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessCurve {
    values: Vec<f64>,
    measure: Measure,
}

/// Mean of a robustness curve, in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RobustnessScalar(pub f64);

impl RobustnessCurve {
    /// Validates that the curve is nonempty with every value in `(0, 1]`.
    pub fn new(values: Vec<f64>, measure: Measure) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidCurve("empty curve".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v > 0.0 && v <= 1.0))
        {
            return Err(Error::InvalidCurve(format!("r({i}) = {v} is outside (0, 1]")));
        }
        Ok(Self { values, measure })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    /// Original node count `N`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scalar(&self) -> RobustnessScalar {
        robustness_scalar(self)
    }

    /// The sum of curve values without the `1/N` normalization.
    pub fn unnormalized_sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

pub fn robustness_scalar(curve: &RobustnessCurve) -> RobustnessScalar {
    RobustnessScalar(curve.unnormalized_sum() / curve.len() as f64)
}

/// Removal order over all live nodes of `g`.
pub fn attack_sequence(g: &Graph, strategy: AttackStrategy) -> Vec<NodeId> {
    let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed);
    let mut nodes: Vec<NodeId> = g.live_nodes().collect();
    match strategy.kind {
        AttackKind::Random => {
            nodes.shuffle(&mut rng);
            nodes
        }
        AttackKind::InitialDegree => {
            nodes.shuffle(&mut rng);
            nodes.sort_by_key(|&v| std::cmp::Reverse(g.total_degree_unchecked(v)));
            nodes
        }
        AttackKind::MaxDegree => adaptive_degree_order(g, nodes, &mut rng),
    }
}

fn adaptive_degree_order<R: Rng>(g: &Graph, mut live: Vec<NodeId>, rng: &mut R) -> Vec<NodeId> {
    let n = g.n_initial();
    let mut degree = vec![0usize; n];
    for &v in &live {
        degree[v] = g.total_degree_unchecked(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(live.len());
    let mut ties = Vec::new();
    while !live.is_empty() {
        let best = live.iter().map(|&v| degree[v]).max().unwrap_or(0);
        ties.clear();
        ties.extend(
            live.iter()
                .enumerate()
                .filter(|(_, &v)| degree[v] == best)
                .map(|(i, _)| i),
        );
        let pick = ties[rng.random_range(0..ties.len())];
        let v = live.swap_remove(pick);
        removed[v] = true;
        for w in g.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
        order.push(v);
    }
    order
}

fn check_sequence(g: &Graph, seq: &[NodeId]) -> Result<()> {
    if seq.len() != g.n_alive() {
        return Err(Error::InvalidSequence);
    }
    let mut seen = vec![false; g.n_initial()];
    for &v in seq {
        if !g.is_alive(v) || seen[v] {
            return Err(Error::InvalidSequence);
        }
        seen[v] = true;
    }
    Ok(())
}

/// Connectivity curve of the attack `seq` (a permutation of the live nodes).
///
/// Computed by re-inserting nodes in reverse removal order into a union-find,
/// so the largest component after `i` removals is a running maximum.
pub fn connectivity_curve(g: &Graph, seq: &[NodeId]) -> Result<RobustnessCurve> {
    check_sequence(g, seq)?;
    let total = seq.len();
    let mut dsu = DisjointSet::new(g.n_initial());
    let mut active = vec![false; g.n_initial()];
    let mut largest = 0;
    let mut values = vec![0.0; total];
    for i in (0..total).rev() {
        let v = seq[i];
        active[v] = true;
        largest = largest.max(1);
        for w in g.neighbors(v) {
            if active[w] {
                largest = largest.max(dsu.union(v, w));
            }
        }
        values[i] = largest as f64 / (total - i) as f64;
    }
    RobustnessCurve::new(values, Measure::Connectivity)
}

/// Driver nodes by the minimum inputs theorem.
pub fn driver_count_mit(g: &Graph) -> Result<usize> {
    if !g.is_directed() {
        return Err(Error::RequiresDirected);
    }
    if g.n_alive() == 0 {
        return Err(Error::EmptyGraph);
    }
    let m = DirectedMatching::maximum(g);
    Ok(drivers(g.n_alive(), m.size()))
}

/// Driver nodes by the exact controllability theorem.
pub fn driver_count_ect(g: &Graph) -> Result<usize> {
    let a = g.adjacency_matrix()?;
    Ok(drivers(g.n_alive(), rank::rank(&a)))
}

fn drivers(n: usize, covered: usize) -> usize {
    n.saturating_sub(covered).max(1)
}

pub fn controllability_curve(
    g: &Graph,
    seq: &[NodeId],
    theorem: Theorem,
) -> Result<RobustnessCurve> {
    check_sequence(g, seq)?;
    if theorem == Theorem::Mit && !g.is_directed() {
        return Err(Error::RequiresDirected);
    }
    let total = seq.len();
    let mut residual = g.clone();
    let mut values = Vec::with_capacity(total);
    match theorem {
        Theorem::Mit => {
            let mut matching = DirectedMatching::maximum(&residual);
            for i in 0..total {
                if i > 0 {
                    residual.remove_node(seq[i - 1])?;
                    matching.node_removed(&residual, seq[i - 1]);
                }
                let alive = total - i;
                values.push(drivers(alive, matching.size()) as f64 / alive as f64);
            }
        }
        Theorem::Ect => {
            for i in 0..total {
                if i > 0 {
                    residual.remove_node(seq[i - 1])?;
                }
                let alive = total - i;
                values.push(driver_count_ect(&residual)? as f64 / alive as f64);
            }
        }
    }
    RobustnessCurve::new(values, Measure::Controllability)
}

/// What to simulate for ground-truth labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Simulation {
    pub measure: Measure,
    pub attack: AttackKind,
    #[serde(default)]
    pub theorem: TheoremChoice,
}

impl Simulation {
    pub fn new(measure: Measure, attack: AttackKind) -> Self {
        Self {
            measure,
            attack,
            theorem: TheoremChoice::Auto,
        }
    }

    /// Single curve for one attack seed.
    pub fn curve(&self, g: &Graph, seed: u64) -> Result<RobustnessCurve> {
        let seq = attack_sequence(g, AttackStrategy::new(self.attack, seed));
        match self.measure {
            Measure::Connectivity => connectivity_curve(g, &seq),
            Measure::Controllability => controllability_curve(g, &seq, self.theorem.resolve(g)),
        }
    }
}

/// Element-wise mean of `reps` curves from independent attack seeds drawn
/// from `rng`.
pub fn ground_truth<R: Rng + ?Sized>(
    g: &Graph,
    sim: &Simulation,
    reps: usize,
    rng: &mut R,
) -> Result<RobustnessCurve> {
    if reps == 0 {
        return Err(Error::InvalidConfig("repetitions must be at least 1".into()));
    }
    let mut acc = vec![0.0; g.n_alive()];
    for _ in 0..reps {
        let curve = sim.curve(g, rng.random())?;
        for (a, v) in acc.iter_mut().zip(curve.values()) {
            *a += v;
        }
    }
    for a in &mut acc {
        *a /= reps as f64;
    }
    RobustnessCurve::new(acc, sim.measure)
}
