//! Recognition of graphs that are TDI for every independent terminal set.
//!
//! It suffices to test terminal sets of size three, so recognition scans
//! all independent triples. The scan runs in parallel over the first vertex
//! and keeps the lexicographically first failing triple, so the witness does
//! not depend on scheduling.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, Indexed, VertexId};
use crate::instance::Instance;
use crate::reduction::{is_tdi, is_tdi_indexed, AuxiliaryGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecognitionResult {
    pub is_mm: bool,
    /// First failing independent triple and its non-bipartite auxiliary
    /// graph; present iff `!is_mm`.
    pub witness: Option<([VertexId; 3], AuxiliaryGraph)>,
}

pub fn is_mader_mengerian(g: &Graph) -> RecognitionResult {
    let ix = Indexed::from_graph(g);
    match first_failing_triple(&ix, &(0..ix.len()).collect::<Vec<_>>()) {
        None => RecognitionResult { is_mm: true, witness: None },
        Some(t) => {
            let triple = t.map(|i| ix.names[i].clone());
            let inst = Instance::unit(g.clone(), triple.iter().cloned().collect()).expect("independent triple");
            let decision = is_tdi(&inst);
            debug_assert!(!decision.tdi);
            RecognitionResult { is_mm: false, witness: Some((triple, decision.auxiliary)) }
        }
    }
}

/// Lexicographically first independent triple drawn from `pool` (sorted)
/// whose instance is not TDI.
fn first_failing_triple(ix: &Indexed, pool: &[usize]) -> Option<[usize; 3]> {
    let adjacent = |x: usize, y: usize| ix.adj[x].binary_search(&y).is_ok();
    pool.par_iter().enumerate().find_map_first(|(p, &i)| {
        for (q, &j) in pool.iter().enumerate().skip(p + 1) {
            if adjacent(i, j) {
                continue;
            }
            for &k in &pool[q + 1..] {
                if !adjacent(i, k) && !adjacent(j, k) && !is_tdi_indexed(ix, &[i, j, k]) {
                    return Some([i, j, k]);
                }
            }
        }
        None
    })
}

/// Decides TDI-ness of `(G, S)` (weights are ignored). For a non-TDI
/// instance the witness is the first 3-subset `S'` of `S` that already fails
/// in `G - (S \ S')`; such a subset always exists. The converse does not
/// hold: a TDI instance may have a failing 3-subset, since the extra
/// terminals can force vertices that break an odd cycle.
pub fn is_tdi_fixed(inst: &Instance) -> Result<(bool, Option<[VertexId; 3]>)> {
    if is_tdi(inst).tdi {
        return Ok((true, None));
    }
    let s: Vec<&VertexId> = inst.terminals().iter().collect();
    let mut triples = Vec::new();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            for k in j + 1..s.len() {
                triples.push([s[i].clone(), s[j].clone(), s[k].clone()]);
            }
        }
    }
    let witness = triples.into_par_iter().find_map_first(|t| {
        let g = inst.graph().induced_subgraph(|v| !inst.is_terminal(v) || t.contains(v));
        let sub = Instance::unit(g, t.iter().cloned().collect()).expect("subset of an independent set");
        (!is_tdi(&sub).tdi).then_some(t)
    });
    match witness {
        Some(t) => Ok((false, Some(t))),
        None => Err(Error::InternalInvariantViolation(format!(
            "non-TDI terminal set {:?} has no failing 3-subset",
            inst.terminals()
        ))),
    }
}

/// True iff `g` is not Mader-Mengerian while every one-step vertex-minor
/// `g - v` and `g / v` is.
///
/// One step is enough: the class is closed under vertex-minors, so if some
/// deeper proper minor failed, the one-step minor above it would fail too.
pub fn check_minimal(g: &Graph) -> bool {
    if is_mader_mengerian(g).is_mm {
        return false;
    }
    let vs: Vec<&VertexId> = g.vertices().collect();
    vs.par_iter().all(|v| {
        let deleted = g.delete_vertex(v).expect("present");
        let contracted = g.contract_vertex(v).expect("present");
        is_mader_mengerian(&deleted).is_mm && is_mader_mengerian(&contracted).is_mm
    })
}

/// Independent triples of `g` in lexicographic order.
pub fn independent_triples(g: &Graph) -> Vec<BTreeSet<VertexId>> {
    let vs: Vec<&VertexId> = g.vertices().collect();
    let mut out = Vec::new();
    for (p, &i) in vs.iter().enumerate() {
        for (q, &j) in vs.iter().enumerate().skip(p + 1) {
            if g.has_edge(i, j) {
                continue;
            }
            for &k in &vs[q + 1..] {
                if !g.has_edge(i, k) && !g.has_edge(j, k) {
                    out.push([i, j, k].into_iter().cloned().collect());
                }
            }
        }
    }
    out
}
