use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// What to do with a repeated edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Duplicates {
    /// Reject the file.
    #[default]
    Strict,
    /// Keep the first occurrence and count the rest.
    Dedup,
}

/// Text form: `# robnet v1 directed=<0|1> n=<N>` then one `u v` per line.
///
/// Live nodes are renumbered densely in id order, so a graph with removed
/// nodes is written as its induced subgraph.
pub fn format_edge_list(g: &Graph) -> String {
    let mut index = vec![usize::MAX; g.n_initial()];
    for (i, v) in g.live_nodes().enumerate() {
        index[v] = i;
    }
    let mut out = format!(
        "# robnet v1 directed={} n={}\n",
        u8::from(g.is_directed()),
        g.n_alive()
    );
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", index[u], index[v]));
    }
    out
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_edge_list(g)).map_err(|e| Error::io(path, e))
}

/// Parses an edge list; `path` only labels errors. Returns the graph and the
/// number of dropped duplicates.
pub fn parse_edge_list_str(text: &str, path: &Path, dup: Duplicates) -> Result<(Graph, usize)> {
    let err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header".into()))?;
    let (directed, n) = parse_header(header).ok_or_else(|| {
        err(
            1,
            format!("expected `# robnet v1 directed=<0|1> n=<N>`, found `{header}`"),
        )
    })?;
    let mut g = Graph::new(n, directed).map_err(|e| err(1, e.to_string()))?;
    let mut seen = HashSet::new();
    let mut dropped = 0;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut parts = t.split_ascii_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(lineno, format!("expected `u v`, found `{t}`")));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(lineno, format!("`{s}` is not a node id")))
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u >= n || v >= n {
            return Err(err(lineno, format!("node id {} out of range for n={n}", u.max(v))));
        }
        if u == v {
            return Err(err(lineno, format!("self-loop on node {u}")));
        }
        let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
        if !seen.insert(key) {
            match dup {
                Duplicates::Strict => {
                    return Err(err(lineno, format!("duplicate edge {u} {v}")));
                }
                Duplicates::Dedup => {
                    dropped += 1;
                    continue;
                }
            }
        }
        g.add_edge(u, v).map_err(|e| err(lineno, e.to_string()))?;
    }
    Ok((g, dropped))
}

pub fn parse_edge_list(path: impl AsRef<Path>, dup: Duplicates) -> Result<(Graph, usize)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list_str(&text, path, dup)
}

/// Strict parse returning just the graph.
pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(path, Duplicates::Strict).map(|(g, _)| g)
}

fn parse_header(line: &str) -> Option<(bool, usize)> {
    let mut parts = line.split_ascii_whitespace();
    if parts.next()? != "#" || parts.next()? != "robnet" || parts.next()? != "v1" {
        return None;
    }
    let directed = match parts.next()?.strip_prefix("directed=")? {
        "0" => false,
        "1" => true,
        _ => return None,
    };
    let n = parts.next()?.strip_prefix("n=")?.parse().ok()?;
    parts.next().is_none().then_some((directed, n))
}
