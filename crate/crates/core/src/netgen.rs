//! Synthetic network generators.
//!
//! Nine families are supported. BA, EH, ER, RH, RT and SF are built
//! undirected and receive uniformly random edge orientations when a directed
//! instance is requested; QS and the two small-world models are built
//! directed and lose their directions for undirected instances.
//!
//! Average degree `k_avg` is `2E/n` for undirected graphs and `E/n` (arcs per
//! node) for directed graphs, so both conventions target the same number of
//! stored edges for the doubled undirected ranges.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NetworkModel {
    #[serde(rename = "BA")]
    Ba,
    #[serde(rename = "EH")]
    Eh,
    #[serde(rename = "ER")]
    Er,
    #[serde(rename = "QS")]
    Qs,
    #[serde(rename = "RH")]
    Rh,
    #[serde(rename = "RT")]
    Rt,
    #[serde(rename = "SF")]
    Sf,
    #[serde(rename = "SW-NW")]
    SwNw,
    #[serde(rename = "SW-WS")]
    SwWs,
}

impl NetworkModel {
    pub const ALL: [NetworkModel; 9] = [
        NetworkModel::Ba,
        NetworkModel::Eh,
        NetworkModel::Er,
        NetworkModel::Qs,
        NetworkModel::Rh,
        NetworkModel::Rt,
        NetworkModel::Sf,
        NetworkModel::SwNw,
        NetworkModel::SwWs,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            NetworkModel::Ba => "BA",
            NetworkModel::Eh => "EH",
            NetworkModel::Er => "ER",
            NetworkModel::Qs => "QS",
            NetworkModel::Rh => "RH",
            NetworkModel::Rt => "RT",
            NetworkModel::Sf => "SF",
            NetworkModel::SwNw => "SW-NW",
            NetworkModel::SwWs => "SW-WS",
        }
    }

    /// Average-degree sampling range `[lo, hi]` for this family.
    pub fn degree_range(self, directed: bool) -> (f64, f64) {
        let (lo, hi) = match self {
            NetworkModel::SwNw | NetworkModel::SwWs => (2.5, 5.0),
            NetworkModel::Rh => (2.0, 4.0),
            NetworkModel::Rt => (1.5, 3.0),
            _ => (3.0, 6.0),
        };
        if directed {
            (lo, hi)
        } else {
            (2.0 * lo, 2.0 * hi)
        }
    }

    fn min_nodes(self, params: &ModelParams) -> usize {
        match self {
            NetworkModel::SwNw | NetworkModel::SwWs => 2 * params.lattice_k() + 1,
            NetworkModel::Rh => 6,
            NetworkModel::Rt => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for NetworkModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for NetworkModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('_', "-");
        NetworkModel::ALL
            .into_iter()
            .find(|m| m.tag() == norm)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

/// The model sets used for training/test splits.
pub mod sets {
    use super::NetworkModel::{self, *};

    pub const S1: [NetworkModel; 9] = NetworkModel::ALL;
    pub const S2: [NetworkModel; 4] = [Er, Qs, Sf, SwNw];
    pub const S3: [NetworkModel; 5] = [Ba, Eh, Rh, Rt, SwWs];
}

/// Inclusive node-count range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeRange {
    pub lo: usize,
    pub hi: usize,
}

impl SizeRange {
    pub const NA: SizeRange = SizeRange { lo: 700, hi: 1300 };
    pub const NB: SizeRange = SizeRange { lo: 300, hi: 700 };
    pub const NC: SizeRange = SizeRange { lo: 1300, hi: 1700 };

    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidConfig(format!("bad size range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, n: usize) -> bool {
        (self.lo..=self.hi).contains(&n)
    }
}

impl FromStr for SizeRange {
    type Err = Error;

    /// Accepts `Na`, `Nb`, `Nc` or `lo-hi` / `lo:hi`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "na" | "n_a" => Ok(Self::NA),
            "nb" | "n_b" => Ok(Self::NB),
            "nc" | "n_c" => Ok(Self::NC),
            other => {
                let (lo, hi) = other
                    .split_once(['-', ':', ','])
                    .ok_or_else(|| Error::InvalidConfig(format!("bad size range `{s}`")))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidConfig(format!("bad size range `{s}`")))
                };
                Self::new(parse(lo)?, parse(hi)?)
            }
        }
    }
}

/// Optional per-model parameter overrides.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// QS: independent snapback probability (replaces the exact-count draw).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// SF: weight exponent in `[0, 1)`; sampled uniformly when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// SF: weight offset; defaults to 5.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// SW: nearest neighbors on each side of the ring; defaults to 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// BA: fixed attachment count; derived from `k_avg` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// SW-WS: per-edge rewiring probability; defaults to 0.3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewire_p: Option<f64>,
}

impl ModelParams {
    fn lattice_k(&self) -> usize {
        self.k.unwrap_or(2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub model: NetworkModel,
    pub n: usize,
    pub directed: bool,
    pub k_avg: f64,
    pub seed: u64,
    #[serde(default)]
    pub params: ModelParams,
}

impl GeneratorConfig {
    pub fn new(model: NetworkModel, n: usize, directed: bool, k_avg: f64, seed: u64) -> Self {
        Self {
            model,
            n,
            directed,
            k_avg,
            seed,
            params: ModelParams::default(),
        }
    }

    /// Number of stored edges (arcs when directed) implied by `k_avg`.
    pub fn target_edges(&self) -> usize {
        let per_node = if self.directed {
            self.k_avg
        } else {
            self.k_avg / 2.0
        };
        (self.n as f64 * per_node).round() as usize
    }

    /// Whether `k_avg` lies in the family's sampling range.
    pub fn in_degree_range(&self) -> bool {
        let (lo, hi) = self.model.degree_range(self.directed);
        (lo..=hi).contains(&self.k_avg)
    }
}

/// Draws a configuration with `n` and `k_avg` uniform in their ranges.
pub fn sample_config<R: Rng + ?Sized>(
    model: NetworkModel,
    directed: bool,
    size_range: SizeRange,
    rng: &mut R,
) -> GeneratorConfig {
    let n = rng.random_range(size_range.lo..=size_range.hi);
    let (lo, hi) = model.degree_range(directed);
    let k_avg = rng.random_range(lo..=hi);
    let seed = rng.random::<u64>();
    GeneratorConfig::new(model, n, directed, k_avg, seed)
}

/// Realized average degree under the same convention as `k_avg`.
pub fn average_degree(g: &Graph) -> f64 {
    let e = g.edge_count() as f64;
    let n = g.n_alive() as f64;
    if g.is_directed() {
        e / n
    } else {
        2.0 * e / n
    }
}

pub fn generate(config: &GeneratorConfig) -> Result<Graph> {
    let n = config.n;
    let min = config.model.min_nodes(&config.params);
    if n < min {
        return Err(Error::InvalidConfig(format!(
            "{} needs at least {min} nodes, got {n}",
            config.model
        )));
    }
    if !(config.k_avg.is_finite() && config.k_avg > 0.0) {
        return Err(Error::InvalidConfig(format!("k_avg = {}", config.k_avg)));
    }
    let m = config.target_edges();
    let capacity = if config.directed {
        n * (n - 1)
    } else {
        n * (n - 1) / 2
    };
    // undirected-native constructions store at most n(n-1)/2 edges before orientation
    let native_cap = match config.model {
        NetworkModel::Qs | NetworkModel::SwNw | NetworkModel::SwWs => capacity,
        _ => n * (n - 1) / 2,
    };
    if m > native_cap {
        return Err(Error::Infeasible(format!(
            "{m} edges exceed the simple-graph capacity {native_cap} for n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let undirected = match config.model {
        NetworkModel::Er => erdos_renyi(n, m, &mut rng)?,
        NetworkModel::Ba => barabasi_albert(n, m, config.params.m, &mut rng)?,
        NetworkModel::Sf => static_scale_free(n, m, &config.params, &mut rng)?,
        NetworkModel::Eh => extreme_homogeneous(n, m, &mut rng)?,
        NetworkModel::Rt => random_cycles(n, m, 3, &mut rng)?,
        NetworkModel::Rh => random_cycles(n, m, 6, &mut rng)?,
        NetworkModel::Qs => return q_snapback(n, m, config.directed, &config.params, &mut rng),
        NetworkModel::SwNw => {
            return newman_watts(n, m, config.directed, config.params.lattice_k(), &mut rng)
        }
        NetworkModel::SwWs => {
            let p = config.params.rewire_p.unwrap_or(0.3);
            return watts_strogatz(n, m, config.directed, config.params.lattice_k(), p, &mut rng);
        }
    };
    if config.directed {
        Ok(orient_randomly(&undirected, &mut rng))
    } else {
        Ok(undirected)
    }
}

/// Gives each undirected edge an independent uniformly random direction.
pub fn orient_randomly<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Graph {
    let mut d = Graph::new(g.n_initial(), true).expect("graph is nonempty");
    for (u, v) in g.edges() {
        let (a, b) = if rng.random_bool(0.5) { (u, v) } else { (v, u) };
        d.add_edge(a, b).expect("oriented copy of a simple graph is simple");
    }
    d
}

fn iteration_budget(m: usize) -> usize {
    100 * m + 10_000
}

fn erdos_renyi<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    let mut g = Graph::new(n, false)?;
    let total = n * (n - 1) / 2;
    if 2 * m > total {
        // dense regime: pick the pair indices directly
        for idx in index::sample(rng, total, m) {
            let (u, v) = pair_from_index(idx);
            g.add_edge(u, v)?;
        }
        return Ok(g);
    }
    while g.edge_count() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// Maps `0..n(n-1)/2` onto pairs `(u, v)` with `u < v`, ordered by `v`.
fn pair_from_index(idx: usize) -> (usize, usize) {
    let mut v = ((((8 * idx + 1) as f64).sqrt() + 1.0) / 2.0) as usize;
    while v * (v - 1) / 2 > idx {
        v -= 1;
    }
    while (v + 1) * v / 2 <= idx {
        v += 1;
    }
    (idx - v * (v - 1) / 2, v)
}

fn barabasi_albert<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    fixed_m: Option<usize>,
    rng: &mut R,
) -> Result<Graph> {
    let per_node = match fixed_m {
        Some(k) => k as f64,
        None => m as f64 / n as f64,
    };
    if per_node < 1.0 {
        return Err(Error::Infeasible(format!(
            "BA needs at least one attachment per node, got {per_node:.3}"
        )));
    }
    let seed = (per_node.ceil() as usize).clamp(1, n);
    let mut g = Graph::new(n, false)?;
    // every edge contributes both endpoints: sampling an entry is degree-proportional
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * m + 2 * seed * seed);
    for u in 0..seed {
        for v in u + 1..seed {
            g.add_edge(u, v)?;
            endpoints.extend([u, v]);
        }
    }
    let floor = per_node.floor() as usize;
    let frac = per_node - floor as f64;
    let mut chosen: Vec<NodeId> = Vec::new();
    for t in seed..n {
        let want = if frac > 0.0 && rng.random_bool(frac) {
            floor + 1
        } else {
            floor
        };
        let want = want.min(t);
        chosen.clear();
        while chosen.len() < want {
            let target = if endpoints.is_empty() {
                rng.random_range(0..t)
            } else {
                endpoints[rng.random_range(0..endpoints.len())]
            };
            if !chosen.contains(&target) {
                chosen.push(target);
            }
        }
        for &v in &chosen {
            g.add_edge(t, v)?;
            endpoints.extend([t, v]);
        }
    }
    Ok(g)
}

fn static_scale_free<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    params: &ModelParams,
    rng: &mut R,
) -> Result<Graph> {
    let sigma = params.sigma.unwrap_or_else(|| rng.random_range(0.0..1.0));
    let theta = params.theta.unwrap_or(5.0);
    if !(0.0..1.0).contains(&sigma) || theta < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "SF needs sigma in [0,1) and theta >= 0, got {sigma}, {theta}"
        )));
    }
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0f64;
    for i in 0..n {
        acc += (i as f64 + 1.0 + theta).powf(-sigma);
        cumulative.push(acc);
    }
    let draw = |rng: &mut R| {
        let x = rng.random_range(0.0..acc);
        cumulative.partition_point(|&c| c <= x).min(n - 1)
    };
    let mut g = Graph::new(n, false)?;
    let budget = iteration_budget(m);
    let mut iters = 0;
    while g.edge_count() < m {
        iters += 1;
        if iters > budget {
            return Err(Error::NonConvergence { iterations: budget });
        }
        let (u, v) = (draw(rng), draw(rng));
        if u != v {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

fn degree_extremes(g: &Graph) -> (usize, usize) {
    let mut lo = usize::MAX;
    let mut hi = 0;
    for v in g.live_nodes() {
        let d = g.total_degree_unchecked(v);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo, hi)
}

fn extreme_homogeneous<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    let mut g = erdos_renyi(n, m, rng)?;
    let budget = 50 * m.max(1);
    let mut candidates = Vec::new();
    for _ in 0..budget {
        let (lo, hi) = degree_extremes(&g);
        if hi - lo <= 1 {
            return Ok(g);
        }
        let maxes: Vec<NodeId> = g
            .live_nodes()
            .filter(|&v| g.total_degree_unchecked(v) == hi)
            .collect();
        let u = maxes[rng.random_range(0..maxes.len())];
        let nbrs = g.out_neighbors(u);
        let x = nbrs[rng.random_range(0..nbrs.len())];
        candidates.clear();
        candidates.extend(
            g.live_nodes()
                .filter(|&w| g.total_degree_unchecked(w) == lo && w != x && !g.has_edge(x, w)),
        );
        if candidates.is_empty() {
            continue;
        }
        let w = candidates[rng.random_range(0..candidates.len())];
        g.remove_edge(u, x);
        g.add_edge(x, w)?;
    }
    let (lo, hi) = degree_extremes(&g);
    if hi - lo <= 1 {
        Ok(g)
    } else {
        Err(Error::NonConvergence { iterations: budget })
    }
}

fn random_cycles<R: Rng + ?Sized>(n: usize, m: usize, len: usize, rng: &mut R) -> Result<Graph> {
    let mut g = Graph::new(n, false)?;
    let budget = iteration_budget(m);
    let mut iters = 0;
    while g.edge_count() < m {
        iters += 1;
        if iters > budget {
            return Err(Error::NonConvergence { iterations: budget });
        }
        // index::sample returns the picks in random order, so the cycle order is random too
        let nodes = index::sample(rng, n, len).into_vec();
        for i in 0..len {
            g.add_edge(nodes[i], nodes[(i + 1) % len])?;
        }
    }
    Ok(g)
}

fn q_snapback<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    directed: bool,
    params: &ModelParams,
    rng: &mut R,
) -> Result<Graph> {
    let mut g = Graph::new(n, directed)?;
    for i in 0..n - 1 {
        g.add_edge(i, i + 1)?;
    }
    // candidates: i -> j for j < i - 1, enumerated as pairs (j, i) with j < i - 1
    let candidates = if n >= 2 { (n - 1) * (n - 2) / 2 } else { 0 };
    let to_pair = |idx: usize| {
        // reuse the triangular map on nodes shifted by one: (a, b) with a < b
        let (a, b) = pair_from_index(idx);
        (b + 1, a) // snapback from b + 1 to a, where a < b = (b + 1) - 1
    };
    match params.q {
        Some(q) => {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidConfig(format!("QS q = {q}")));
            }
            for idx in 0..candidates {
                if rng.random_bool(q) {
                    let (i, j) = to_pair(idx);
                    g.add_edge(i, j)?;
                }
            }
        }
        None => {
            let snapbacks = m.saturating_sub(n - 1);
            if snapbacks > candidates {
                return Err(Error::Infeasible(format!(
                    "QS with n = {n} holds at most {candidates} snapback edges"
                )));
            }
            let mut picks = index::sample(rng, candidates, snapbacks).into_vec();
            picks.sort_unstable();
            for idx in picks {
                let (i, j) = to_pair(idx);
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

fn ring_lattice(n: usize, directed: bool, k: usize) -> Result<Graph> {
    let mut g = Graph::new(n, directed)?;
    for d in 1..=k {
        for i in 0..n {
            g.add_edge(i, (i + d) % n)?;
        }
    }
    Ok(g)
}

fn check_lattice_budget(n: usize, m: usize, k: usize) -> Result<()> {
    if m < n * k {
        return Err(Error::Infeasible(format!(
            "{m} edges are fewer than the {} ring-lattice edges",
            n * k
        )));
    }
    Ok(())
}

fn newman_watts<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    directed: bool,
    k: usize,
    rng: &mut R,
) -> Result<Graph> {
    check_lattice_budget(n, m, k)?;
    let mut g = ring_lattice(n, directed, k)?;
    let budget = iteration_budget(m);
    let mut iters = 0;
    while g.edge_count() < m {
        iters += 1;
        if iters > budget {
            return Err(Error::NonConvergence { iterations: budget });
        }
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

fn watts_strogatz<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    directed: bool,
    k: usize,
    p: f64,
    rng: &mut R,
) -> Result<Graph> {
    check_lattice_budget(n, m, k)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!("rewiring probability {p}")));
    }
    let mut g = ring_lattice(n, directed, k)?;
    // Widen the lattice ring by ring until the edge budget is met; the
    // outermost ring is filled at random positions.
    let mut d = k + 1;
    while g.edge_count() < m {
        if 2 * d > n {
            return Err(Error::Infeasible(format!(
                "{m} edges do not fit a ring lattice on {n} nodes"
            )));
        }
        let need = m - g.edge_count();
        if need >= n {
            for i in 0..n {
                g.add_edge(i, (i + d) % n)?;
            }
        } else {
            let mut starts = index::sample(rng, n, need).into_vec();
            starts.sort_unstable();
            for i in starts {
                g.add_edge(i, (i + d) % n)?;
            }
        }
        d += 1;
    }
    for (u, v) in g.edges() {
        if !rng.random_bool(p) {
            continue;
        }
        // undirected edges are reported as (min, max); rewire the ring-successor end
        let (src, old) = if directed || (v + n - u) % n < n / 2 {
            (u, v)
        } else {
            (v, u)
        };
        let free = n - 1 - g.out_neighbors(src).len();
        if free == 0 {
            continue;
        }
        loop {
            let w = rng.random_range(0..n);
            if w != src && !g.has_edge(src, w) {
                g.remove_edge(src, old);
                g.add_edge(src, w)?;
                break;
            }
        }
    }
    Ok(g)
}
