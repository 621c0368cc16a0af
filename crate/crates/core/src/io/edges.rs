//! Edge-list CSV: one `i,j,w` line per undirected edge, 0-based indices.
//! Blank lines and `#` comments are ignored, except `# n=<count>` which
//! declares the node count. A non-numeric first line is treated as a header.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::fmt_f64;

/// Parses an edge list. The node count is `n` if given, else the declared
/// `# n=` count, else one more than the largest index seen.
pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut first = true;
    let mut declared = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if let Some(comment) = t.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("n=") {
                declared = Some(v.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad node count {v:?}"),
                })?);
            }
            continue;
        }
        if t.is_empty() {
            continue;
        }
        let fields: Vec<&str> = t.split(',').map(str::trim).collect();
        let was_first = std::mem::replace(&mut first, false);
        if was_first && fields.first().is_some_and(|f| f.parse::<usize>().is_err()) {
            continue;
        }
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Parse { line, message: format!("expected i,j[,w], got {} fields", fields.len()) });
        }
        let idx = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line, message: format!("bad node index {s:?}") })
        };
        let (i, j) = (idx(fields[0])?, idx(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| Error::Parse { line, message: format!("bad weight {s:?}") })?,
            None => 1.0,
        };
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Parse { line, message: format!("weight {w} must be finite and non-negative") });
        }
        if i == j {
            return Err(Error::Parse { line, message: format!("self-loop at node {i}") });
        }
        edges.push((i, j, w));
    }
    let inferred = edges.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0);
    let n = n.or(declared).unwrap_or(inferred);
    if n < inferred {
        return Err(Error::invalid(format!("edge index {} out of range for n = {n}", inferred - 1)));
    }
    Graph::from_edges(n, &edges)
}

pub fn load_edge_list(path: impl AsRef<Path>, n: Option<usize>) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?, n)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# n={}\n", g.n());
    for (i, j, w) in g.edges() {
        out.push_str(&format!("{i},{j},{}\n", fmt_f64(w)));
    }
    out
}
