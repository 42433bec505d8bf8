//! Node-pair files with arbitrary ids, as distributed for real-world
//! networks.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConvertOptions {
    pub directed: bool,
    /// Keep only the largest weakly connected component.
    pub largest_component: bool,
}

/// Result of a conversion: dense graph plus the original label of each node.
#[derive(Clone, Debug)]
pub struct Converted {
    pub graph: Graph,
    pub labels: Vec<String>,
    pub self_loops: usize,
    pub duplicates: usize,
}

/// Reads whitespace- or comma-separated pairs; lines starting with `#` or
/// `%` are comments. Ids are renumbered in order of first appearance.
/// Self-loops and repeated pairs are dropped and counted.
pub fn convert_pairs<'a>(text: &'a str, path: &Path, opts: ConvertOptions) -> Result<Converted> {
    let mut ids: HashMap<&'a str, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut pairs = Vec::new();
    let (mut self_loops, mut duplicates) = (0, 0);
    let mut seen = HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let mut parts = t.split(|c: char| c.is_ascii_whitespace() || c == ',').filter(|s| !s.is_empty());
        let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                reason: format!("expected a node pair, found `{t}`"),
            });
        };
        let mut intern = |s| -> usize {
            *ids.entry(s).or_insert_with(|| {
                labels.push(s.to_owned());
                labels.len() - 1
            })
        };
        let (u, v) = (intern(a), intern(b));
        if u == v {
            self_loops += 1;
            continue;
        }
        let key = if opts.directed { (u, v) } else { (u.min(v), u.max(v)) };
        if !seen.insert(key) {
            duplicates += 1;
            continue;
        }
        pairs.push((u, v));
    }
    if labels.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut graph = Graph::from_edges(labels.len(), opts.directed, pairs.iter().copied())?;
    if opts.largest_component {
        let parts = graph.components()?;
        let target = (0..parts.sizes.len())
            .max_by_key(|&c| (parts.sizes[c], std::cmp::Reverse(c)))
            .expect("nonempty");
        let keep: Vec<usize> = (0..labels.len())
            .filter(|&v| parts.component_id[v] == target)
            .collect();
        let mut index = vec![usize::MAX; labels.len()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = pairs
            .iter()
            .filter(|(u, _)| index[*u] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        graph = Graph::from_edges(keep.len(), opts.directed, edges)?;
        labels = keep.into_iter().map(|v| std::mem::take(&mut labels[v])).collect();
    }
    Ok(Converted {
        graph,
        labels,
        self_loops,
        duplicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reindexes_densely() {
        let text = "% comment\n100 7\n7,42\n42 42\n7 100\nx y\n";
        let c = convert_pairs(text, Path::new("m"), ConvertOptions::default()).unwrap();
        assert_eq!(c.labels, ["100", "7", "42", "x", "y"]);
        assert_eq!(c.graph.edges(), vec![(0, 1), (1, 2), (3, 4)]);
        assert_eq!((c.self_loops, c.duplicates), (1, 1));

        let opts = ConvertOptions {
            largest_component: true,
            ..Default::default()
        };
        let c = convert_pairs(text, Path::new("m"), opts).unwrap();
        assert_eq!(c.labels, ["100", "7", "42"]);
        assert_eq!(c.graph.n_alive(), 3);
        assert_eq!(c.graph.edge_count(), 2);
    }

    #[test]
    fn malformed_line() {
        assert!(convert_pairs("1 2\n3\n", Path::new("m"), ConvertOptions::default()).is_err());
        assert!(convert_pairs("# only\n", Path::new("m"), ConvertOptions::default()).is_err());
    }
}
