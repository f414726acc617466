use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::canon::{CanonKey, SmallGraph};
use super::{CancelToken, OracleConfig};

/// Whether `h` is a vertex-minor of `g` (vertex deletions and vertex
/// contractions).
pub fn vertex_minor_contains(g: &Graph, h: &Graph, cfg: &OracleConfig) -> Result<bool> {
    let target = SmallGraph::from_graph(h, cfg.vertex_minor_limit)?.canonical_key();
    let start = SmallGraph::from_graph(g, cfg.vertex_minor_limit)?;
    contains_any(&start, &[target], false, cfg.cancel.as_ref())
}

/// Whether `h` is a skew minor of `g` (vertex-minor operations plus edge
/// contractions).
pub fn skew_minor_contains(g: &Graph, h: &Graph, cfg: &OracleConfig) -> Result<bool> {
    let target = SmallGraph::from_graph(h, cfg.skew_minor_limit)?.canonical_key();
    let start = SmallGraph::from_graph(g, cfg.skew_minor_limit)?;
    contains_any(&start, &[target], true, cfg.cancel.as_ref())
}

/// Whether some graph in `hs` is a vertex-minor of `g`.
pub fn vertex_minor_contains_any(g: &Graph, hs: &[Graph], cfg: &OracleConfig) -> Result<bool> {
    let targets = keys(hs, cfg.vertex_minor_limit)?;
    let start = SmallGraph::from_graph(g, cfg.vertex_minor_limit)?;
    contains_any(&start, &targets, false, cfg.cancel.as_ref())
}

/// Whether some graph in `hs` is a skew minor of `g`.
pub fn skew_minor_contains_any(g: &Graph, hs: &[Graph], cfg: &OracleConfig) -> Result<bool> {
    let targets = keys(hs, cfg.skew_minor_limit)?;
    let start = SmallGraph::from_graph(g, cfg.skew_minor_limit)?;
    contains_any(&start, &targets, true, cfg.cancel.as_ref())
}

fn keys(hs: &[Graph], limit: usize) -> Result<Vec<CanonKey>> {
    hs.iter().map(|h| Ok(SmallGraph::from_graph(h, limit)?.canonical_key())).collect()
}

/// Whether any of `targets` is reachable from `g`. Every operation removes
/// exactly one vertex, so the search proceeds level by level, keeping one
/// canonical representative per isomorphism class.
fn contains_any(g: &SmallGraph, targets: &[CanonKey], with_edges: bool, cancel: Option<&CancelToken>) -> Result<bool> {
    let Some(floor) = targets.iter().map(|t| t.vertex_count()).min() else {
        return Ok(false);
    };
    let mut level: HashSet<CanonKey> = HashSet::from([g.canonical_key()]);
    let mut n = g.len();
    loop {
        if level.iter().any(|k| targets.contains(k)) {
            return Ok(true);
        }
        if n <= floor {
            return Ok(false);
        }
        let mut next = HashSet::new();
        for key in &level {
            if cancel.is_some_and(CancelToken::is_cancelled) {
                return Err(Error::Cancelled);
            }
            let x = key.graph();
            for v in 0..n {
                next.insert(x.delete(v).canonical_key());
                next.insert(x.contract_vertex(v).canonical_key());
            }
            if with_edges {
                for (u, v) in x.edges() {
                    next.insert(x.contract_edge(u, v).canonical_key());
                }
            }
        }
        level = next;
        n -= 1;
    }
}
