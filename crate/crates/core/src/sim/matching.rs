//! Maximum matching on the out-copy/in-copy bipartite graph of a digraph.
//!
//! Every arc `u -> v` links left vertex `u` to right vertex `v`. The matcher
//! keeps its state across node removals: removing a node frees only the
//! pairs touching it, and Hopcroft-Karp phases then restore maximality.

use std::collections::VecDeque;

use crate::graph::{Graph, NodeId};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct DirectedMatching {
    /// Right partner of each left (out-copy) vertex.
    match_out: Vec<usize>,
    /// Left partner of each right (in-copy) vertex.
    match_in: Vec<usize>,
    size: usize,
    dist: Vec<usize>,
}

impl DirectedMatching {
    /// Maximum matching of the live part of `g`.
    pub fn maximum(g: &Graph) -> Self {
        let n = g.n_initial();
        let mut m = Self {
            match_out: vec![NONE; n],
            match_in: vec![NONE; n],
            size: 0,
            dist: vec![0; n],
        };
        m.augment(g);
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Matched arcs `(u, v)`.
    pub fn pairs(&self) -> Vec<(NodeId, NodeId)> {
        self.match_out
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != NONE)
            .map(|(u, &v)| (u, v))
            .collect()
    }

    /// Updates the matching after `v` was removed from `g`.
    pub fn node_removed(&mut self, g: &Graph, v: NodeId) {
        let right = self.match_out[v];
        if right != NONE {
            self.match_in[right] = NONE;
            self.match_out[v] = NONE;
            self.size -= 1;
        }
        let left = self.match_in[v];
        if left != NONE {
            self.match_out[left] = NONE;
            self.match_in[v] = NONE;
            self.size -= 1;
        }
        self.augment(g);
    }

    /// Hopcroft-Karp phases from the current matching until no augmenting
    /// path remains.
    fn augment(&mut self, g: &Graph) {
        while self.layer(g) {
            let free: Vec<NodeId> = g
                .live_nodes()
                .filter(|&u| self.match_out[u] == NONE)
                .collect();
            for u in free {
                if self.dfs(g, u) {
                    self.size += 1;
                }
            }
        }
    }

    /// BFS layering from free left vertices; true when some free right
    /// vertex is reachable.
    fn layer(&mut self, g: &Graph) -> bool {
        let mut queue = VecDeque::new();
        for u in 0..self.dist.len() {
            if g.is_alive(u) && self.match_out[u] == NONE {
                self.dist[u] = 0;
                queue.push_back(u);
            } else {
                self.dist[u] = NONE;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in g.out_neighbors(u) {
                let next = self.match_in[v];
                if next == NONE {
                    found = true;
                } else if self.dist[next] == NONE {
                    self.dist[next] = self.dist[u] + 1;
                    queue.push_back(next);
                }
            }
        }
        found
    }

    fn dfs(&mut self, g: &Graph, u: NodeId) -> bool {
        for i in 0..g.out_neighbors(u).len() {
            let v = g.out_neighbors(u)[i];
            let next = self.match_in[v];
            let ok = if next == NONE {
                true
            } else if self.dist[next] == self.dist[u] + 1 {
                self.dfs(g, next)
            } else {
                false
            };
            if ok {
                self.match_out[u] = v;
                self.match_in[v] = u;
                return true;
            }
        }
        self.dist[u] = NONE;
        false
    }
}
