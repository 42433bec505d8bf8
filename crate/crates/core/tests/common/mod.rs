//! Independent reference implementations shared by the integration and
//! acceptance tests. Everything here is deliberately naive.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use robnet::graph::Graph;
use robnet::tensor::{Tape, Tensor, Var};

/// G(n, p) graph, directed or not.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, directed: bool) -> Graph {
    let mut g = Graph::new(n, directed).unwrap();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Largest weakly connected component of the live nodes, by DFS over an
/// edge list rebuilt from scratch.
pub fn lcc_dfs(g: &Graph) -> usize {
    let n = g.n_initial();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut best = 0;
    for s in g.live_nodes() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// Connectivity curve by removing nodes one at a time and re-running DFS.
pub fn connectivity_oracle(g: &Graph, seq: &[usize]) -> Vec<f64> {
    let n = g.n_alive();
    let mut h = g.clone();
    let mut out = Vec::with_capacity(n);
    for (i, &v) in seq.iter().enumerate() {
        out.push(lcc_dfs(&h) as f64 / (n - i) as f64);
        h.remove_node(v).unwrap();
    }
    out
}

/// Maximum matching of out-copies to in-copies by simple augmenting paths
/// (Kuhn's algorithm), one DFS per left vertex.
pub fn kuhn_matching(g: &Graph) -> usize {
    let n = g.n_initial();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        adj[u].push(v);
        if !g.is_directed() {
            adj[v].push(u);
        }
    }
    let mut match_in = vec![usize::MAX; n];
    fn try_augment(
        u: usize,
        adj: &[Vec<usize>],
        visited: &mut [bool],
        match_in: &mut [usize],
    ) -> bool {
        for &v in &adj[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if match_in[v] == usize::MAX || try_augment(match_in[v], adj, visited, match_in) {
                match_in[v] = u;
                return true;
            }
        }
        false
    }
    let mut size = 0;
    for u in g.live_nodes() {
        let mut visited = vec![false; n];
        if try_augment(u, &adj, &mut visited, &mut match_in) {
            size += 1;
        }
    }
    size
}

/// `max(1, n − |matching|)` from the Kuhn oracle.
pub fn mit_oracle(g: &Graph) -> usize {
    (g.n_alive() - kuhn_matching(g)).max(1)
}

/// Numerical rank: singular values above `1e-8 · σ_max`.
pub fn svd_rank(data: &[u8], n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(n, n, |i, j| f64::from(data[i * n + j]));
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-8 * max).count()
}

/// Bin `i` of `bins` over `len` cells: `[⌊i·len/bins⌋, ⌈(i+1)·len/bins⌉)`,
/// widened to one cell if empty.
pub fn bin_range(len: usize, bins: usize, i: usize) -> (usize, usize) {
    let start = i * len / bins;
    let end = ((i + 1) * len).div_ceil(bins).max(start + 1);
    (start, end)
}

/// Pyramid pooling of `[c, h, w]` into level-major, channel, row-major bins.
pub fn spp_oracle(x: &[f64], c: usize, h: usize, w: usize, levels: &[usize]) -> Vec<f64> {
    let mut out = Vec::new();
    for &l in levels {
        for ch in 0..c {
            for by in 0..l {
                for bx in 0..l {
                    let (y0, y1) = bin_range(h, l, by);
                    let (x0, x1) = bin_range(w, l, bx);
                    let mut m = f64::NEG_INFINITY;
                    for y in y0..y1 {
                        for xx in x0..x1 {
                            m = m.max(x[ch * h * w + y * w + xx]);
                        }
                    }
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Zero-padded stride-1 cross-correlation of `[b, cin, h, w]` with
/// `[cout, cin, k, k]` plus bias.
pub fn conv_oracle(
    x: &[f64],
    shape: [usize; 4],
    kernel: &[f64],
    cout: usize,
    k: usize,
    bias: &[f64],
    pad: usize,
) -> Vec<f64> {
    let [b, cin, h, w] = shape;
    let oh = h + 2 * pad + 1 - k;
    let ow = w + 2 * pad + 1 - k;
    let mut out = vec![0.0; b * cout * oh * ow];
    for bi in 0..b {
        for co in 0..cout {
            for oy in 0..oh {
                for ox in 0..ow {
                    let mut s = bias[co];
                    for ci in 0..cin {
                        for ky in 0..k {
                            for kx in 0..k {
                                let iy = (oy + ky) as isize - pad as isize;
                                let ix = (ox + kx) as isize - pad as isize;
                                if iy < 0 || ix < 0 || iy >= h as isize || ix >= w as isize {
                                    continue;
                                }
                                s += x[((bi * cin + ci) * h + iy as usize) * w + ix as usize]
                                    * kernel[((co * cin + ci) * k + ky) * k + kx];
                            }
                        }
                    }
                    out[((bi * cout + co) * oh + oy) * ow + ox] = s;
                }
            }
        }
    }
    out
}

/// 2×2 stride-2 max pooling of `[planes, h, w]`.
pub fn maxpool_oracle(x: &[f64], planes: usize, h: usize, w: usize) -> Vec<f64> {
    let (oh, ow) = (h / 2, w / 2);
    let mut out = Vec::with_capacity(planes * oh * ow);
    for p in 0..planes {
        for y in 0..oh {
            for xx in 0..ow {
                let at = |dy: usize, dx: usize| x[p * h * w + (2 * y + dy) * w + 2 * xx + dx];
                out.push(at(0, 0).max(at(0, 1)).max(at(1, 0)).max(at(1, 1)));
            }
        }
    }
    out
}

/// `[b, f] · [f, g] + [g]`.
pub fn dense_oracle(x: &[f64], b: usize, f: usize, wt: &[f64], g: usize, bias: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; b * g];
    for i in 0..b {
        for j in 0..g {
            let mut s = bias[j];
            for k in 0..f {
                s += x[i * f + k] * wt[k * g + j];
            }
            out[i * g + j] = s;
        }
    }
    out
}

/// Values spaced at least `gap` apart in random order, so max-style ops
/// have a unique winner that no `ε ≤ gap/2` perturbation can change.
pub fn distinct_values<R: Rng>(rng: &mut R, len: usize, gap: f64) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        idx.swap(i, rng.random_range(0..=i));
    }
    let offset = len as f64 * gap / 2.0;
    idx.into_iter()
        .map(|i| f64::from((i as f64 * gap - offset) as f32))
        .collect()
}

/// Uniform values in `[-1, 1]` rounded to `f32`, kept at least `margin`
/// away from each point in `kinks`.
pub fn values_away_from<R: Rng>(rng: &mut R, len: usize, kinks: &[f64], margin: f64) -> Vec<f64> {
    (0..len)
        .map(|_| loop {
            let v = f64::from(rng.random_range(-1.0f32..1.0));
            if kinks.iter().all(|k| (v - k).abs() >= margin) {
                break v;
            }
        })
        .collect()
}

/// Largest per-element relative error between an analytic gradient and a
/// reference, with the denominator floored at 1e-3 of the reference's
/// largest magnitude so exact zeros do not divide by zero.
pub fn max_rel_error(analytic: &[f64], reference: &[f64]) -> f64 {
    assert_eq!(analytic.len(), reference.len());
    let scale = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = (1e-3 * scale).max(1e-12);
    analytic
        .iter()
        .zip(reference)
        .map(|(a, r)| (a - r).abs() / a.abs().max(r.abs()).max(floor))
        .fold(0.0, f64::max)
}

/// Central difference of `Σ weight · f(x)` with respect to every input.
pub fn central_difference<F: Fn(&[f64]) -> Vec<f64>>(
    f: F,
    x: &[f64],
    weight: &[f64],
    eps: f64,
) -> Vec<f64> {
    let dot = |y: Vec<f64>| y.iter().zip(weight).map(|(a, b)| a * b).sum::<f64>();
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            xp[i] = x[i] + eps;
            let up = dot(f(&xp));
            xp[i] = x[i] - eps;
            let down = dot(f(&xp));
            xp[i] = x[i];
            (up - down) / (2.0 * eps)
        })
        .collect()
}

pub fn to_f32(v: &[f64]) -> Vec<f32> {
    v.iter().map(|&x| x as f32).collect()
}

pub fn to_f64(v: &[f32]) -> Vec<f64> {
    v.iter().map(|&x| f64::from(x)).collect()
}

pub fn tensor(shape: &[usize], v: &[f64]) -> Tensor {
    Tensor::new(shape, to_f32(v)).unwrap()
}

/// Uniform `[-1, 1)` values that are exact in `f32`.
pub fn weights(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| f64::from(rng.random_range(-1.0f32..1.0))).collect()
}

/// Checks the tape's vector-Jacobian product for every tracked input of an
/// op against central differences of an f64 reference.
pub struct GradCheck {
    pub shapes: Vec<Vec<usize>>,
    pub inputs: Vec<Vec<f64>>,
}

impl GradCheck {
    /// Worst relative error over all inputs, for a random output cotangent.
    pub fn run<T, R>(&self, rng: &mut ChaCha8Rng, eps: f64, tape_op: T, reference: R) -> f64
    where
        T: Fn(&mut Tape, &[Var]) -> Var,
        R: Fn(&[Vec<f64>]) -> Vec<f64>,
    {
        let mut t = Tape::new();
        let vars: Vec<_> = self
            .shapes
            .iter()
            .zip(&self.inputs)
            .map(|(s, v)| t.param(tensor(s, v)))
            .collect();
        let out = tape_op(&mut t, &vars);
        let w = weights(rng, t.value(out).len());
        t.backward_with(out, &to_f32(&w)).unwrap();
        let mut worst = 0.0f64;
        for (k, var) in vars.iter().enumerate() {
            let analytic = to_f64(t.grad(*var).expect("gradient reaches every input"));
            let fd = central_difference(
                |xk| {
                    let mut all = self.inputs.clone();
                    all[k] = xk.to_vec();
                    reference(&all)
                },
                &self.inputs[k],
                &w,
                eps,
            );
            worst = worst.max(max_rel_error(&analytic, &fd));
        }
        worst
    }
}
