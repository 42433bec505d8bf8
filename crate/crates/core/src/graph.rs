//! Simple unweighted graphs with node-removal support.
//!
//! Node ids are fixed at construction. Removing a node marks it dead and
//! detaches its incident edges; the id is never reused, so attack sequences
//! index against the original graph throughout a simulation.

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Directed or undirected simple graph over `0..n_initial`.
#[derive(Clone, Debug)]
pub struct Graph {
    directed: bool,
    /// Out-neighbors when directed, neighbors when undirected.
    out_adj: Vec<Vec<NodeId>>,
    /// In-neighbors; unused (empty lists) for undirected graphs.
    in_adj: Vec<Vec<NodeId>>,
    alive: Vec<bool>,
    n_alive: usize,
    n_edges: usize,
}

impl Graph {
    pub fn new(n: usize, directed: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(Self {
            directed,
            out_adj: vec![Vec::new(); n],
            in_adj: if directed {
                vec![Vec::new(); n]
            } else {
                Vec::new()
            },
            alive: vec![true; n],
            n_alive: n,
            n_edges: 0,
        })
    }

    /// Builds a graph from an edge list. Duplicate edges are ignored.
    pub fn from_edges(
        n: usize,
        directed: bool,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self> {
        let mut g = Self::new(n, directed)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n_initial(&self) -> usize {
        self.alive.len()
    }

    pub fn n_alive(&self) -> usize {
        self.n_alive
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_alive(&self, v: NodeId) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    /// Number of live edges (arcs when directed).
    pub fn edge_count(&self) -> usize {
        self.n_edges
    }

    pub fn live_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter_map(|(v, &a)| a.then_some(v))
    }

    fn check_live(&self, v: NodeId) -> Result<()> {
        match self.alive.get(v) {
            None => Err(Error::NodeOutOfRange(v, self.n_initial())),
            Some(false) => Err(Error::DeadNode(v)),
            Some(true) => Ok(()),
        }
    }

    /// Inserts `u -> v` (or `{u, v}`). Returns `Ok(false)` when the edge was
    /// already present.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check_live(u)?;
        self.check_live(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Ok(false);
        }
        self.out_adj[u].push(v);
        if self.directed {
            self.in_adj[v].push(u);
        } else {
            self.out_adj[v].push(u);
        }
        self.n_edges += 1;
        Ok(true)
    }

    /// Deletes a live edge. Returns whether it existed.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        if !self.is_alive(u) || !self.is_alive(v) || !self.has_edge(u, v) {
            return false;
        }
        detach(&mut self.out_adj[u], v);
        if self.directed {
            detach(&mut self.in_adj[v], u);
        } else {
            detach(&mut self.out_adj[v], u);
        }
        self.n_edges -= 1;
        true
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        if !self.is_alive(u) || !self.is_alive(v) {
            return false;
        }
        if self.directed {
            // scan the shorter list
            if self.out_adj[u].len() <= self.in_adj[v].len() {
                self.out_adj[u].contains(&v)
            } else {
                self.in_adj[v].contains(&u)
            }
        } else if self.out_adj[u].len() <= self.out_adj[v].len() {
            self.out_adj[u].contains(&v)
        } else {
            self.out_adj[v].contains(&u)
        }
    }

    /// Marks `v` dead and detaches all of its incident edges.
    pub fn remove_node(&mut self, v: NodeId) -> Result<()> {
        self.check_live(v)?;
        let out = std::mem::take(&mut self.out_adj[v]);
        if self.directed {
            let inc = std::mem::take(&mut self.in_adj[v]);
            for &w in &out {
                detach(&mut self.in_adj[w], v);
            }
            for &w in &inc {
                detach(&mut self.out_adj[w], v);
            }
            self.n_edges -= out.len() + inc.len();
        } else {
            for &w in &out {
                detach(&mut self.out_adj[w], v);
            }
            self.n_edges -= out.len();
        }
        self.alive[v] = false;
        self.n_alive -= 1;
        Ok(())
    }

    /// Out-neighbors (directed) or neighbors (undirected) of a live node.
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.out_adj[v]
    }

    /// In-neighbors (directed) or neighbors (undirected) of a live node.
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        if self.directed {
            &self.in_adj[v]
        } else {
            &self.out_adj[v]
        }
    }

    /// All nodes adjacent to `v` ignoring direction.
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let inc: &[NodeId] = if self.directed { &self.in_adj[v] } else { &[] };
        self.out_adj[v].iter().chain(inc.iter()).copied()
    }

    pub fn out_degree(&self, v: NodeId) -> Result<usize> {
        self.check_live(v)?;
        Ok(self.out_adj[v].len())
    }

    pub fn in_degree(&self, v: NodeId) -> Result<usize> {
        self.check_live(v)?;
        Ok(self.in_neighbors(v).len())
    }

    /// Neighbor count when undirected, in-degree plus out-degree when directed.
    pub fn total_degree(&self, v: NodeId) -> Result<usize> {
        self.check_live(v)?;
        Ok(self.total_degree_unchecked(v))
    }

    pub(crate) fn total_degree_unchecked(&self, v: NodeId) -> usize {
        if self.directed {
            self.out_adj[v].len() + self.in_adj[v].len()
        } else {
            self.out_adj[v].len()
        }
    }

    /// Live edges, sorted; undirected edges are reported once as `(min, max)`.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.n_edges);
        for u in self.live_nodes() {
            for &v in &self.out_adj[u] {
                if self.directed || u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Weakly connected components over live nodes.
    pub fn components(&self) -> Result<ComponentPartition> {
        if self.n_alive == 0 {
            return Err(Error::EmptyGraph);
        }
        let n = self.n_initial();
        let mut dsu = DisjointSet::new(n);
        for u in self.live_nodes() {
            for &v in &self.out_adj[u] {
                dsu.union(u, v);
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut root_label = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        for v in self.live_nodes() {
            let r = dsu.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = sizes.len();
                sizes.push(0);
            }
            label[v] = root_label[r];
            sizes[root_label[r]] += 1;
        }
        Ok(ComponentPartition {
            component_id: label,
            sizes,
        })
    }

    /// Size of the largest weakly connected component.
    pub fn largest_component_size(&self) -> Result<usize> {
        Ok(self.components()?.largest())
    }

    /// Dense 0/1 adjacency over live nodes in ascending id order.
    pub fn adjacency_matrix(&self) -> Result<AdjacencyMatrix> {
        if self.n_alive == 0 {
            return Err(Error::EmptyGraph);
        }
        let ids: Vec<NodeId> = self.live_nodes().collect();
        let mut index = vec![usize::MAX; self.n_initial()];
        for (i, &v) in ids.iter().enumerate() {
            index[v] = i;
        }
        let size = ids.len();
        let mut data = vec![0u8; size * size];
        for (i, &u) in ids.iter().enumerate() {
            for &v in &self.out_adj[u] {
                data[i * size + index[v]] = 1;
            }
        }
        Ok(AdjacencyMatrix { size, ids, data })
    }
}

fn detach(list: &mut Vec<NodeId>, v: NodeId) {
    if let Some(pos) = list.iter().position(|&w| w == v) {
        list.swap_remove(pos);
    }
}

/// Labels of the weakly connected components of the live nodes.
#[derive(Clone, Debug)]
pub struct ComponentPartition {
    /// Component label per original node id; `usize::MAX` for dead nodes.
    pub component_id: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ComponentPartition {
    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// Square 0/1 matrix indexed by live nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    size: usize,
    /// Original node id of each row/column.
    ids: Vec<NodeId>,
    data: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn from_rows(data: Vec<u8>, size: usize) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::Shape(format!(
                "{} entries for a {size}x{size} matrix",
                data.len()
            )));
        }
        Ok(Self {
            size,
            ids: (0..size).collect(),
            data,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (i + 1..self.size).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut data = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Self {
            size: n,
            ids: self.ids.clone(),
            data,
        }
    }

    /// Copy with the given row/column indices deleted.
    pub fn without_indices(&self, drop: &[usize]) -> Self {
        let mut keep = vec![true; self.size];
        for &d in drop {
            keep[d] = false;
        }
        let kept: Vec<usize> = (0..self.size).filter(|&i| keep[i]).collect();
        let m = kept.len();
        let mut data = Vec::with_capacity(m * m);
        for &i in &kept {
            for &j in &kept {
                data.push(self.get(i, j));
            }
        }
        Self {
            size: m,
            ids: kept.iter().map(|&i| self.ids[i]).collect(),
            data,
        }
    }

    pub fn to_f32(&self) -> Vec<f32> {
        self.data.iter().map(|&x| f32::from(x)).collect()
    }
}

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns the size of the merged set.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return self.size[ra];
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.size[ra]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n, false).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, false, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn construction() {
        let g = Graph::new(5, false).unwrap();
        assert_eq!((g.n_alive(), g.edge_count()), (5, 0));
        assert_eq!(Graph::new(1, true).unwrap().n_alive(), 1);
        assert_eq!(Graph::new(1000, false).unwrap().n_alive(), 1000);
        assert!(matches!(Graph::new(0, false), Err(Error::EmptyGraph)));
    }

    #[test]
    fn add_edge_semantics() {
        let mut g = Graph::new(3, false).unwrap();
        assert!(g.add_edge(0, 1).unwrap());
        assert_eq!(g.total_degree(0).unwrap(), 1);
        assert_eq!(g.total_degree(1).unwrap(), 1);
        assert!(!g.add_edge(0, 1).unwrap());
        assert!(!g.add_edge(1, 0).unwrap());
        assert_eq!(g.edge_count(), 1);
        assert!(matches!(g.add_edge(2, 2), Err(Error::SelfLoop(2))));
        g.remove_node(2).unwrap();
        assert!(matches!(g.add_edge(0, 2), Err(Error::DeadNode(2))));

        let mut d = Graph::new(2, true).unwrap();
        d.add_edge(0, 1).unwrap();
        assert_eq!(d.out_degree(0).unwrap(), 1);
        assert_eq!(d.in_degree(1).unwrap(), 1);
        assert_eq!(d.out_degree(1).unwrap(), 0);
        assert_eq!(d.total_degree(0).unwrap(), 1);
        assert_eq!(d.total_degree(1).unwrap(), 1);
        // reverse arc is distinct
        assert!(d.add_edge(1, 0).unwrap());
        assert_eq!(d.edge_count(), 2);
    }

    #[test]
    fn removal() {
        let mut p = Graph::from_edges(3, false, [(0, 1), (1, 2)]).unwrap();
        p.remove_node(1).unwrap();
        let parts = p.components().unwrap();
        assert_eq!(parts.count(), 2);
        assert_eq!(parts.sizes, vec![1, 1]);
        assert!(matches!(p.remove_node(1), Err(Error::DeadNode(1))));
        assert!(matches!(p.total_degree(1), Err(Error::DeadNode(1))));

        let mut k5 = complete(5);
        k5.remove_node(3).unwrap();
        assert_eq!(k5.edge_count(), 6);
        for v in [0, 1, 2, 4] {
            assert_eq!(k5.total_degree(v).unwrap(), 3);
        }

        let mut s = star(4);
        s.remove_node(0).unwrap();
        assert_eq!(s.edge_count(), 0);
        assert_eq!(s.components().unwrap().count(), 4);
    }

    #[test]
    fn degrees() {
        let k4 = complete(4);
        assert!((0..4).all(|v| k4.total_degree(v).unwrap() == 3));
        let s = star(4);
        assert_eq!(s.total_degree(0).unwrap(), 4);
        assert_eq!(s.total_degree(3).unwrap(), 1);
    }

    #[test]
    fn largest_component() {
        let p10 = Graph::from_edges(10, false, (0..9).map(|i| (i, i + 1))).unwrap();
        assert_eq!(p10.largest_component_size().unwrap(), 10);
        let g = Graph::from_edges(7, false, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
            .unwrap();
        assert_eq!(g.largest_component_size().unwrap(), 3);
        // weak connectivity
        let d = Graph::from_edges(3, true, [(0, 1), (2, 1)]).unwrap();
        assert_eq!(d.largest_component_size().unwrap(), 3);

        let mut single = Graph::new(1, false).unwrap();
        single.remove_node(0).unwrap();
        assert!(matches!(
            single.largest_component_size(),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn adjacency() {
        let a = complete(3).adjacency_matrix().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.get(i, j), u8::from(i != j));
            }
        }
        let chain = Graph::from_edges(3, true, [(0, 1), (1, 2)]).unwrap();
        let a = chain.adjacency_matrix().unwrap();
        assert_eq!(a.as_slice(), &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
        assert!(!a.is_symmetric());

        let mut p3 = Graph::from_edges(3, false, [(0, 1), (1, 2)]).unwrap();
        p3.remove_node(1).unwrap();
        let a = p3.adjacency_matrix().unwrap();
        assert_eq!(a.size(), 2);
        assert_eq!(a.as_slice(), &[0, 0, 0, 0]);
        assert_eq!(a.ids(), &[0, 2]);
    }
}
