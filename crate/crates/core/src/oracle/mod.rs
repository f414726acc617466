//! Exhaustive ground truth for small instances. Nothing here is used by the
//! solver; tests and the `oracle` command compare against it.

pub mod canon;
pub mod minors;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::flow::{Cut, Packing, PackingEntry, SPath};
use crate::graph::{Indexed, VertexId};
use crate::instance::{Instance, Weight};

pub use canon::{all_graphs, are_isomorphic, canonical_key, connected_graphs, CanonKey, SmallGraph};
pub use minors::{skew_minor_contains, skew_minor_contains_any, vertex_minor_contains, vertex_minor_contains_any};

/// Shared flag for aborting long searches. Clones observe the same flag.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Bound for path enumeration and the brute-force optima.
    pub max_vertices: usize,
    pub vertex_minor_limit: usize,
    pub skew_minor_limit: usize,
    pub cancel: Option<CancelToken>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_vertices: 16, vertex_minor_limit: 12, skew_minor_limit: 10, cancel: None }
    }
}

impl OracleConfig {
    fn check_cancel(&self) -> Result<()> {
        match &self.cancel {
            Some(t) if t.is_cancelled() => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }

    fn check_size(&self, inst: &Instance) -> Result<()> {
        let n = inst.graph().vertex_count();
        if n > self.max_vertices.min(32) {
            return Err(Error::SizeLimit { limit: self.max_vertices, actual: n });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedPath {
    pub path: SPath,
    /// No edge joins two non-consecutive vertices of the path.
    pub chordless: bool,
}

/// Exact optima with witnesses. When `nu` is infinite the packing holds a
/// single path of infinite-weight vertices (repeatable without bound) and
/// the cut is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteResult {
    pub nu: Weight,
    pub kappa: Weight,
    pub optimal_packing: Packing,
    pub optimal_cut: Cut,
}

/// Vertex-index form of an instance for the searches below.
struct Small {
    ix: Indexed,
    adj: Vec<u32>,
    terminal: u32,
    /// `None` for terminals.
    weight: Vec<Option<Weight>>,
}

impl Small {
    fn new(inst: &Instance) -> Self {
        let ix = Indexed::from_graph(inst.graph());
        let adj = ix.adj.iter().map(|row| row.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
        let terminal = (0..ix.len()).filter(|&v| inst.is_terminal(&ix.names[v])).fold(0u32, |m, v| m | 1 << v);
        let weight = ix.names.iter().map(|v| inst.weight(v)).collect();
        Small { ix, adj, terminal, weight }
    }

    fn is_terminal(&self, v: usize) -> bool {
        self.terminal >> v & 1 == 1
    }

    /// All S-paths as index sequences with first end < last end, in
    /// lexicographic order.
    fn s_paths(&self, cfg: &OracleConfig) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for s in (0..self.ix.len()).filter(|&s| self.is_terminal(s)) {
            cfg.check_cancel()?;
            let mut path = vec![s];
            self.extend(&mut path, 1 << s, &mut out);
        }
        out.sort();
        Ok(out)
    }

    fn extend(&self, path: &mut Vec<usize>, used: u32, out: &mut Vec<Vec<usize>>) {
        let x = *path.last().expect("non-empty");
        let mut next = self.adj[x] & !used;
        while next != 0 {
            let y = next.trailing_zeros() as usize;
            next &= next - 1;
            path.push(y);
            if self.is_terminal(y) {
                if y > path[0] {
                    out.push(path.clone());
                }
            } else {
                self.extend(path, used | 1 << y, out);
            }
            path.pop();
        }
    }

    fn names(&self, p: &[usize]) -> Vec<VertexId> {
        p.iter().map(|&v| self.ix.names[v].clone()).collect()
    }

    fn chordless(&self, p: &[usize]) -> bool {
        (0..p.len()).all(|i| (i + 2..p.len()).all(|j| self.adj[p[i]] >> p[j] & 1 == 0))
    }

    /// Whether some terminal reaches another once `removed` is deleted.
    fn linked(&self, removed: u32) -> bool {
        let mut claimed = 0u32;
        let mut rest = self.terminal;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut seen = 1u32 << s;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let fresh = self.adj[x] & !seen & !removed;
                if fresh & self.terminal != 0 || fresh & claimed != 0 {
                    return true;
                }
                seen |= fresh;
                let mut f = fresh;
                while f != 0 {
                    queue.push_back(f.trailing_zeros() as usize);
                    f &= f - 1;
                }
            }
            claimed |= seen & !self.terminal;
        }
        false
    }
}

/// Every S-path of `inst` (one orientation each), in lexicographic order.
pub fn enumerate_s_paths(inst: &Instance, cfg: &OracleConfig) -> Result<Vec<EnumeratedPath>> {
    cfg.check_size(inst)?;
    let small = Small::new(inst);
    Ok(small
        .s_paths(cfg)?
        .into_iter()
        .map(|p| EnumeratedPath { chordless: small.chordless(&p), path: SPath::unchecked(small.names(&p)) })
        .collect())
}

/// Maximum w-packing. Paths are grouped by the finite-weight part of their
/// interior, only inclusion-minimal groups are kept, and multiplicities are
/// chosen by a memoized search over residual capacities.
pub fn brute_nu(inst: &Instance, cfg: &OracleConfig) -> Result<(Weight, Packing)> {
    cfg.check_size(inst)?;
    let small = Small::new(inst);
    let paths = small.s_paths(cfg)?;

    let mut groups: BTreeMap<u32, &Vec<usize>> = BTreeMap::new();
    for p in &paths {
        let mut finite = 0u32;
        let mut blocked = false;
        for &v in &p[1..p.len() - 1] {
            match small.weight[v].expect("interior is non-terminal") {
                Weight::Infinite => {}
                Weight::Finite(0) => blocked = true,
                Weight::Finite(_) => finite |= 1 << v,
            }
        }
        if blocked {
            continue;
        }
        if finite == 0 {
            let path = SPath::unchecked(small.names(p));
            return Ok((Weight::Infinite, Packing { entries: vec![PackingEntry { path, multiplicity: 1 }] }));
        }
        groups.entry(finite).or_insert(p);
    }
    let minimal: Vec<(u32, &Vec<usize>)> = groups
        .iter()
        .filter(|(&m, _)| !groups.keys().any(|&o| o != m && o & m == o))
        .map(|(&m, &p)| (m, p))
        .collect();

    let caps: Vec<u64> = small.weight.iter().map(|w| w.and_then(Weight::finite).unwrap_or(0)).collect();
    let masks: Vec<u32> = minimal.iter().map(|(m, _)| *m).collect();
    let mut search = PackSearch::new(&masks, cfg);
    let best = search.best(0, caps.clone())?;
    let choice = search.reconstruct(caps)?;

    let entries = minimal
        .iter()
        .zip(choice)
        .filter(|(_, k)| *k > 0)
        .map(|((_, p), k)| PackingEntry { path: SPath::unchecked(small.names(p)), multiplicity: k })
        .collect();
    Ok((Weight::Finite(best), Packing { entries }))
}

struct PackSearch<'a> {
    masks: &'a [u32],
    /// Union of `masks[i..]`.
    suffix: Vec<u32>,
    memo: HashMap<(usize, Vec<u64>), u64>,
    cfg: &'a OracleConfig,
}

impl<'a> PackSearch<'a> {
    fn new(masks: &'a [u32], cfg: &'a OracleConfig) -> Self {
        let mut suffix = vec![0u32; masks.len() + 1];
        for i in (0..masks.len()).rev() {
            suffix[i] = suffix[i + 1] | masks[i];
        }
        PackSearch { masks, suffix, memo: HashMap::new(), cfg }
    }

    fn room(&self, i: usize, caps: &[u64]) -> u64 {
        let mut m = self.masks[i];
        let mut room = u64::MAX;
        while m != 0 {
            room = room.min(caps[m.trailing_zeros() as usize]);
            m &= m - 1;
        }
        room
    }

    fn take(&self, i: usize, caps: &mut [u64], k: u64) {
        let mut m = self.masks[i];
        while m != 0 {
            caps[m.trailing_zeros() as usize] -= k;
            m &= m - 1;
        }
    }

    fn best(&mut self, i: usize, mut caps: Vec<u64>) -> Result<u64> {
        if i == self.masks.len() {
            return Ok(0);
        }
        for (v, c) in caps.iter_mut().enumerate() {
            if self.suffix[i] >> v & 1 == 0 {
                *c = 0;
            }
        }
        if let Some(&b) = self.memo.get(&(i, caps.clone())) {
            return Ok(b);
        }
        self.cfg.check_cancel()?;
        let mut best = 0;
        for k in 0..=self.room(i, &caps) {
            let mut rest = caps.clone();
            self.take(i, &mut rest, k);
            best = best.max(k + self.best(i + 1, rest)?);
        }
        self.memo.insert((i, caps), best);
        Ok(best)
    }

    fn reconstruct(&mut self, mut caps: Vec<u64>) -> Result<Vec<u64>> {
        let mut choice = Vec::with_capacity(self.masks.len());
        for i in 0..self.masks.len() {
            let target = self.best(i, caps.clone())?;
            let mut picked = None;
            for k in (0..=self.room(i, &caps)).rev() {
                let mut rest = caps.clone();
                self.take(i, &mut rest, k);
                if k + self.best(i + 1, rest.clone())? == target {
                    picked = Some((k, rest));
                    break;
                }
            }
            let (k, rest) = picked.expect("optimum is attained");
            choice.push(k);
            caps = rest;
        }
        Ok(choice)
    }
}

/// Minimum-weight S-cut over finite-weight non-terminals, by subset
/// enumeration with weight pruning. Zero-weight vertices are free and are
/// added first, then dropped again where not needed.
pub fn brute_kappa(inst: &Instance, cfg: &OracleConfig) -> Result<(Weight, Cut)> {
    cfg.check_size(inst)?;
    let small = Small::new(inst);
    let n = small.ix.len();
    let (mut zero, mut paid) = (0u32, Vec::new());
    for v in 0..n {
        match small.weight[v] {
            Some(Weight::Finite(0)) => zero |= 1 << v,
            Some(Weight::Finite(w)) => paid.push((v, w)),
            _ => {}
        }
    }
    let all_paid = paid.iter().fold(zero, |m, &(v, _)| m | 1 << v);
    if small.linked(all_paid) {
        return Ok((Weight::Infinite, Cut::default()));
    }

    let mut best: Option<(u64, u32)> = None;
    for subset in 0u64..1 << paid.len() {
        if subset & 0xFFF == 0 {
            cfg.check_cancel()?;
        }
        let mut cost = 0u64;
        let mut removed = zero;
        for (k, &(v, w)) in paid.iter().enumerate() {
            if subset >> k & 1 == 1 {
                cost = cost.saturating_add(w);
                removed |= 1 << v;
            }
        }
        if best.is_some_and(|(b, _)| cost >= b) {
            continue;
        }
        if !small.linked(removed) {
            best = Some((cost, removed));
        }
    }
    let (cost, mut removed) = best.expect("all finite vertices separate");
    for v in 0..n {
        if zero >> v & 1 == 1 && !small.linked(removed & !(1 << v)) {
            removed &= !(1 << v);
        }
    }
    let vertices = (0..n).filter(|&v| removed >> v & 1 == 1).map(|v| small.ix.names[v].clone()).collect();
    Ok((Weight::Finite(cost), Cut { vertices }))
}

pub fn brute(inst: &Instance, cfg: &OracleConfig) -> Result<BruteResult> {
    let (nu, optimal_packing) = brute_nu(inst, cfg)?;
    let (kappa, optimal_cut) = brute_kappa(inst, cfg)?;
    if nu > kappa {
        return Err(Error::InternalInvariantViolation(format!("oracle found nu {nu} above kappa {kappa}")));
    }
    Ok(BruteResult { nu, kappa, optimal_packing, optimal_cut })
}
