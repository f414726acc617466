//! Bitmask graphs on at most 16 vertices and an exact canonical form.
//!
//! The canonical form is found by colour refinement plus individualization,
//! keeping the largest adjacency code over all leaves of the search tree.
//! Branches on twin vertices are skipped: swapping two twins is an
//! automorphism fixing everything individualized so far, so their subtrees
//! yield the same codes.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::graph::{Graph, Indexed, VertexId};

/// Largest vertex count with a canonical form (120 code bits).
pub const CANON_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallGraph {
    n: usize,
    adj: Vec<u32>,
}

/// Isomorphism-invariant key: vertex count and upper-triangle adjacency bits
/// in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonKey {
    n: u8,
    code: u128,
}

impl CanonKey {
    pub fn vertex_count(self) -> usize {
        self.n as usize
    }

    /// The canonical representative.
    pub fn graph(self) -> SmallGraph {
        let n = self.n as usize;
        let mut g = SmallGraph::empty(n);
        let mut bit = pair_count(n);
        for i in 0..n {
            for j in i + 1..n {
                bit -= 1;
                if self.code >> bit & 1 == 1 {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn drop_bit(mask: u32, v: usize) -> u32 {
    let low = mask & ((1u32 << v) - 1);
    let high = (mask >> (v + 1)) << v;
    low | high
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= 32, "bitmask graphs hold at most 32 vertices");
        SmallGraph { n, adj: vec![0; n] }
    }

    /// Vertex `i` is the `i`-th smallest id of `g`.
    pub fn from_graph(g: &Graph, limit: usize) -> Result<Self> {
        let ix = Indexed::from_graph(g);
        if ix.len() > limit.min(32) {
            return Err(Error::SizeLimit { limit, actual: ix.len() });
        }
        let mut s = SmallGraph::empty(ix.len());
        for (u, row) in ix.adj.iter().enumerate() {
            for &v in row {
                s.adj[u] |= 1 << v;
            }
        }
        Ok(s)
    }

    /// Names vertices `u0 .. u{n-1}`.
    pub fn to_graph(&self) -> Graph {
        let name = |i: usize| VertexId::from(format!("u{i}"));
        let mut g = Graph::new();
        for i in 0..self.n {
            g.add_vertex(name(i));
        }
        for (i, j) in self.edges() {
            g.add_edge(name(i), name(j)).expect("no loops");
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn neighbors(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let all = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == all
    }

    pub fn delete(&self, v: usize) -> SmallGraph {
        let adj = (0..self.n).filter(|&u| u != v).map(|u| drop_bit(self.adj[u], v)).collect();
        SmallGraph { n: self.n - 1, adj }
    }

    /// Vertex contraction: the neighbourhood of `v` becomes a clique, then
    /// `v` is deleted.
    pub fn contract_vertex(&self, v: usize) -> SmallGraph {
        let mut g = self.clone();
        let nv = self.adj[v];
        let mut rest = nv;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            g.adj[u] |= nv & !(1 << u);
        }
        g.delete(v)
    }

    /// Merges `y` into `x`, which must be adjacent.
    pub fn contract_edge(&self, x: usize, y: usize) -> SmallGraph {
        let mut g = self.clone();
        let merged = (self.adj[x] | self.adj[y]) & !(1 << x) & !(1 << y);
        g.adj[x] = merged;
        for u in 0..self.n {
            if merged >> u & 1 == 1 {
                g.adj[u] |= 1 << x;
            }
        }
        g.delete(y)
    }

    fn are_twins(&self, u: usize, v: usize) -> bool {
        let both = !((1u32 << u) | (1u32 << v));
        self.adj[u] & both == self.adj[v] & both
    }

    pub fn canonical_key(&self) -> CanonKey {
        assert!(self.n <= CANON_LIMIT, "canonical forms need at most {CANON_LIMIT} vertices");
        let mut cells = vec![(0..self.n).collect::<Vec<_>>()];
        if self.n == 0 {
            cells.clear();
        }
        let mut best = None;
        self.search(cells, &mut best);
        CanonKey { n: self.n as u8, code: best.unwrap_or(0) }
    }

    fn search(&self, mut cells: Vec<Vec<usize>>, best: &mut Option<u128>) {
        self.refine(&mut cells);
        let Some(target) = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
        else {
            let code = self.leaf_code(&cells);
            if best.is_none_or(|b| code > b) {
                *best = Some(code);
            }
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if tried.iter().any(|&u| self.are_twins(u, v)) {
                continue;
            }
            tried.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend(cells[..target].iter().cloned());
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&u| u != v).collect());
            next.extend(cells[target + 1..].iter().cloned());
            self.search(next, best);
        }
    }

    /// Splits cells by neighbour counts into every cell until stable. Sub-cells
    /// are ordered by their count signature, so the result is invariant.
    fn refine(&self, cells: &mut Vec<Vec<usize>>) {
        loop {
            let masks: Vec<u32> = cells.iter().map(|c| c.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| (masks.iter().map(|m| (self.adj[v] & m).count_ones()).collect(), v))
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                        start = i;
                    }
                }
            }
            let stable = next.len() == cells.len();
            *cells = next;
            if stable {
                return;
            }
        }
    }

    fn leaf_code(&self, cells: &[Vec<usize>]) -> u128 {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let mut code = 0u128;
        for i in 0..self.n {
            for j in i + 1..self.n {
                code = code << 1 | self.has_edge(order[i], order[j]) as u128;
            }
        }
        code
    }
}

pub fn canonical_key(g: &Graph) -> Result<CanonKey> {
    Ok(SmallGraph::from_graph(g, CANON_LIMIT)?.canonical_key())
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    Ok(g.vertex_count() == h.vertex_count() && canonical_key(g)? == canonical_key(h)?)
}

/// Canonical keys of all graphs on exactly `n` vertices, built by adding one
/// vertex at a time with every possible neighbourhood.
pub fn graph_keys(n: usize) -> BTreeSet<CanonKey> {
    assert!(n <= CANON_LIMIT);
    let mut level: BTreeSet<CanonKey> = BTreeSet::from([SmallGraph::empty(0).canonical_key()]);
    for k in 0..n {
        let mut next = HashSet::new();
        for key in &level {
            let g = key.graph();
            for nbhd in 0u32..1 << k {
                let mut h = SmallGraph::empty(k + 1);
                h.adj[..k].copy_from_slice(&g.adj);
                for u in 0..k {
                    if nbhd >> u & 1 == 1 {
                        h.add_edge(u, k);
                    }
                }
                next.insert(h.canonical_key());
            }
        }
        level = next.into_iter().collect();
    }
    level
}

/// All graphs on `n` vertices up to isomorphism, as canonical
/// representatives.
pub fn all_graphs(n: usize) -> Vec<SmallGraph> {
    graph_keys(n).into_iter().map(CanonKey::graph).collect()
}

pub fn connected_graphs(n: usize) -> Vec<SmallGraph> {
    all_graphs(n).into_iter().filter(SmallGraph::is_connected).collect()
}
