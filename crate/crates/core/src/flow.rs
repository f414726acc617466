//! Max packing / min cut for TDI instances, and the half-integral gap
//! certificate for the others.
//!
//! When the auxiliary graph has bipartition `(A, B)`, delete the terminals
//! and add a source adjacent to `A` and a sink adjacent to `B`. A max
//! vertex-capacitated flow in that network lifts to a maximum w-packing of
//! S-paths, and its min vertex cut is a minimum S-cut. Both are verified
//! against the original instance before [`solve`] returns them.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, Indexed, VertexId};
use crate::instance::{Instance, Weight};
use crate::reduction::{is_tdi, AuxiliaryGraph, ForcedVertex, ReducedInstance, Verdict};

/// Vertex-capacitated network with a source and a sink. Source and sink
/// have infinite capacity and are never split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    pub graph: Graph,
    pub source: VertexId,
    pub sink: VertexId,
    /// Capacity of every vertex other than source and sink.
    pub capacity: BTreeMap<VertexId, Weight>,
}

impl FlowNetwork {
    pub fn new(graph: Graph, source: VertexId, sink: VertexId, capacity: BTreeMap<VertexId, Weight>) -> Result<Self> {
        for end in [&source, &sink] {
            if !graph.contains_vertex(end) {
                return Err(Error::UnknownVertex(end.clone()));
            }
        }
        if source == sink {
            return Err(Error::InvalidInstance("source and sink coincide".into()));
        }
        for v in graph.vertices().filter(|&v| v != &source && v != &sink) {
            if !capacity.contains_key(v) {
                return Err(Error::InvalidInstance(format!("no capacity for `{v}`")));
            }
        }
        Ok(FlowNetwork { graph, source, sink, capacity })
    }
}

/// Path with distinct terminal ends and non-terminal interior.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SPath(Vec<VertexId>);

impl SPath {
    /// Checks the path against `inst`.
    pub fn new(vertices: Vec<VertexId>, inst: &Instance) -> Result<Self> {
        let p = SPath(vertices);
        p.check(inst)?;
        Ok(p)
    }

    pub(crate) fn unchecked(vertices: Vec<VertexId>) -> Self {
        SPath(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn interior(&self) -> &[VertexId] {
        let n = self.0.len();
        if n < 2 {
            &[]
        } else {
            &self.0[1..n - 1]
        }
    }

    pub fn check(&self, inst: &Instance) -> Result<()> {
        let bad = |why: String| Err(Error::InternalInvariantViolation(format!("path {:?}: {why}", self.0)));
        let vs = &self.0;
        if vs.len() < 3 {
            return bad("fewer than three vertices".into());
        }
        let (first, last) = (&vs[0], &vs[vs.len() - 1]);
        if !inst.is_terminal(first) || !inst.is_terminal(last) || first == last {
            return bad("ends are not two distinct terminals".into());
        }
        if let Some(v) = self.interior().iter().find(|v| inst.is_terminal(v) || !inst.graph().contains_vertex(*v)) {
            return bad(format!("interior vertex `{v}` is not a non-terminal"));
        }
        let distinct: BTreeSet<&VertexId> = vs.iter().collect();
        if distinct.len() != vs.len() {
            return bad("repeated vertex".into());
        }
        if let Some(w) = vs.windows(2).find(|w| !inst.graph().has_edge(&w[0], &w[1])) {
            return bad(format!("`{}`-`{}` is not an edge", w[0], w[1]));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingEntry {
    pub path: SPath,
    pub multiplicity: u64,
}

/// A w-packing: a multiset of S-paths using each non-terminal `v` at most
/// `w(v)` times.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Packing {
    pub entries: Vec<PackingEntry>,
}

impl Packing {
    pub fn value(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Multiplicity-weighted use of each non-terminal.
    pub fn usage(&self) -> BTreeMap<&VertexId, u64> {
        let mut load = BTreeMap::new();
        for e in &self.entries {
            for v in e.path.interior() {
                *load.entry(v).or_insert(0) += e.multiplicity;
            }
        }
        load
    }

    pub fn check_feasible(&self, inst: &Instance) -> Result<()> {
        for e in &self.entries {
            e.path.check(inst)?;
            if e.multiplicity == 0 {
                return Err(Error::InternalInvariantViolation("zero multiplicity entry".into()));
            }
        }
        for (v, used) in self.usage() {
            if Weight::Finite(used) > inst.weight(v).expect("interior is non-terminal") {
                return Err(Error::InternalInvariantViolation(format!("vertex `{v}` used {used} times")));
            }
        }
        Ok(())
    }
}

/// A set of non-terminals meeting every S-path.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cut {
    pub vertices: BTreeSet<VertexId>,
}

impl Cut {
    pub fn value(&self, inst: &Instance) -> Weight {
        self.vertices.iter().map(|v| inst.weight(v).unwrap_or(Weight::Infinite)).sum()
    }

    pub fn check_valid(&self, inst: &Instance) -> Result<()> {
        if let Some(v) = self.vertices.iter().find(|v| inst.weight(v).is_none()) {
            return Err(Error::InternalInvariantViolation(format!("cut vertex `{v}` is not a non-terminal")));
        }
        if let Some((s, t)) = linked_terminals(inst, |v| self.vertices.contains(v)) {
            return Err(Error::InternalInvariantViolation(format!("cut leaves `{s}` and `{t}` connected")));
        }
        Ok(())
    }
}

/// Two terminals still connected once `removed` vertices are deleted.
pub(crate) fn linked_terminals<F>(inst: &Instance, removed: F) -> Option<(VertexId, VertexId)>
where
    F: Fn(&VertexId) -> bool,
{
    let g = inst.graph();
    let mut owner: BTreeMap<&VertexId, &VertexId> = BTreeMap::new();
    for s in inst.terminals() {
        let mut queue = VecDeque::from([s]);
        let mut seen = BTreeSet::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in g.neighbors(x).expect("present") {
                if removed(y) || !seen.insert(y) {
                    continue;
                }
                if inst.is_terminal(y) {
                    return Some((s.clone(), y.clone()));
                }
                if let Some(&o) = owner.get(y) {
                    if o != s {
                        return Some((o.clone(), s.clone()));
                    }
                }
                owner.insert(y, s);
                queue.push_back(y);
            }
        }
    }
    None
}

/// Integral packing and cut of equal value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedOptimum {
    pub packing: Packing,
    pub cut: Cut,
    pub value: Weight,
    pub forced: Vec<ForcedVertex>,
}

/// An S-path whose interior has infinite capacity: both optima are infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnboundedWitness {
    pub path: SPath,
    pub forced: Vec<ForcedVertex>,
}

/// A non-negative multiple of one half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(pub u64);

impl Half {
    pub const HALF: Half = Half(1);
    pub const ONE: Half = Half(2);

    /// Reduced numerator and denominator.
    pub fn num_den(self) -> (u64, u64) {
        if self.0.is_multiple_of(2) {
            (self.0 / 2, 1)
        } else {
            (self.0, 2)
        }
    }

    pub fn from_num_den(num: u64, den: u64) -> Option<Half> {
        match den {
            1 => num.checked_mul(2).map(Half),
            2 => Some(Half(num)),
            _ => None,
        }
    }
}

/// Gap certificate for a non-TDI instance: under `gap_weights`, the
/// half-paths (each taken with value 1/2) and `half_cut` are feasible primal
/// and dual solutions of the same value `|odd_cycle| / 2`, which is not an
/// integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalCertificate {
    pub odd_cycle: Vec<VertexId>,
    pub gap_weights: BTreeMap<VertexId, Weight>,
    pub half_paths: Vec<SPath>,
    pub half_cut: BTreeMap<VertexId, Half>,
    pub forced: Vec<ForcedVertex>,
}

impl FractionalCertificate {
    pub fn value(&self) -> Half {
        Half(self.odd_cycle.len() as u64)
    }

    /// The original instance reweighted by `gap_weights`.
    pub fn gap_instance(&self, original: &Instance) -> Result<Instance> {
        original.reweighted(self.gap_weights.clone())
    }

    /// Checks both half-integral solutions against `original` under the gap
    /// weights, and that their values agree.
    pub fn verify(&self, original: &Instance) -> Result<()> {
        let gap = self.gap_instance(original)?;
        let fail = |why: String| Err(Error::InternalInvariantViolation(why));
        if self.odd_cycle.len().is_multiple_of(2) {
            return fail("cycle has even length".into());
        }
        // Primal: each vertex carries at most w(v), in halves.
        let mut load: BTreeMap<&VertexId, u64> = BTreeMap::new();
        for p in &self.half_paths {
            p.check(&gap)?;
            for v in p.interior() {
                *load.entry(v).or_default() += 1;
            }
        }
        for (v, halves) in load {
            if let Weight::Finite(w) = gap.weight(v).expect("non-terminal") {
                if halves > 2 * w {
                    return fail(format!("vertex `{v}` over capacity in the half packing"));
                }
            }
        }
        // Dual: every S-path has x-length at least one.
        let shortest = shortest_x_path(&gap, &self.half_cut);
        if shortest < 2 {
            return fail(format!("some S-path has x-length {}/2", shortest));
        }
        let mut dual = 0u64;
        for (v, x) in &self.half_cut {
            match gap.weight(v) {
                None => return fail(format!("half cut on terminal `{v}`")),
                Some(Weight::Infinite) if x.0 > 0 => return fail(format!("half cut on infinite `{v}`")),
                Some(Weight::Infinite) => {}
                Some(Weight::Finite(w)) => dual += w * x.0,
            }
        }
        let primal = self.half_paths.len() as u64;
        if primal != dual || primal != self.value().0 {
            return fail(format!("primal {primal}/2 and dual {dual}/2 differ"));
        }
        Ok(())
    }
}

/// Minimum, over pairs of distinct terminals, of the `x`-length (in halves)
/// of a path between them through non-terminals.
fn shortest_x_path(inst: &Instance, x: &BTreeMap<VertexId, Half>) -> u64 {
    let g = inst.graph();
    let mut best = u64::MAX;
    for s in inst.terminals() {
        let mut dist: BTreeMap<&VertexId, u64> = BTreeMap::from([(s, 0)]);
        let mut heap = BinaryHeap::from([Reverse((0u64, s))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            if v != s && inst.is_terminal(v) {
                best = best.min(d);
                continue;
            }
            for y in g.neighbors(v).expect("present") {
                let step = if inst.is_terminal(y) { 0 } else { x.get(y).map_or(0, |h| h.0) };
                let nd = d + step;
                if dist.get(y).is_none_or(|&old| nd < old) {
                    dist.insert(y, nd);
                    heap.push(Reverse((nd, y)));
                }
            }
        }
    }
    best
}

/// Outcome of [`solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Optimal(CertifiedOptimum),
    Unbounded(UnboundedWitness),
    NotTdi(FractionalCertificate),
}

/// Builds the two-source network of a reduced instance with bipartite
/// auxiliary graph. Zero-capacity vertices are left out.
pub fn build_flow_network(red: &ReducedInstance, aux: &AuxiliaryGraph) -> Result<FlowNetwork> {
    let Verdict::Bipartition { a, b } = &aux.verdict else {
        return Err(Error::NotBipartite);
    };
    let inst = &red.instance;
    let keep = |v: &VertexId| !inst.is_terminal(v) && inst.weight(v) != Some(Weight::ZERO);
    let mut graph = inst.graph().induced_subgraph(keep);
    let source = graph.fresh_name("s_a");
    graph.add_vertex(source.clone());
    let sink = graph.fresh_name("s_b");
    graph.add_vertex(sink.clone());
    for v in a.iter().filter(|v| keep(v)) {
        graph.add_edge(source.clone(), v.clone())?;
    }
    for v in b.iter().filter(|v| keep(v)) {
        graph.add_edge(sink.clone(), v.clone())?;
    }
    let capacity = graph
        .vertices()
        .filter(|&v| v != &source && v != &sink)
        .map(|v| (v.clone(), inst.weight(v).expect("non-terminal")))
        .collect();
    FlowNetwork::new(graph, source, sink, capacity)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: Weight,
    /// Source-to-sink paths with their flow amounts.
    pub paths: Vec<(Vec<VertexId>, u64)>,
    /// Finite-capacity vertices whose removal separates source from sink.
    pub min_cut: BTreeSet<VertexId>,
    /// Set when some source-sink path uses only infinite-capacity vertices.
    pub unbounded_path: Option<Vec<VertexId>>,
}

struct Arc {
    to: usize,
    cap: u64,
}

/// Residual network with paired arcs (`e ^ 1` is the reverse of `e`).
struct Residual {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Residual {
    fn new(nodes: usize) -> Self {
        Residual { arcs: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, from: usize, to: usize, cap: u64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    /// Shortest augmenting paths (Edmonds-Karp). Returns the flow value and
    /// the original capacities for flow recovery.
    fn max_flow(&mut self, s: usize, t: usize) -> (u64, Vec<u64>) {
        let original: Vec<u64> = self.arcs.iter().map(|a| a.cap).collect();
        let mut total = 0u64;
        loop {
            let mut via = vec![usize::MAX; self.out.len()];
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; self.out.len()];
            seen[s] = true;
            while let Some(x) = queue.pop_front() {
                if x == t {
                    break;
                }
                for &e in &self.out[x] {
                    let y = self.arcs[e].to;
                    if self.arcs[e].cap > 0 && !seen[y] {
                        seen[y] = true;
                        via[y] = e;
                        queue.push_back(y);
                    }
                }
            }
            if !seen[t] {
                return (total, original);
            }
            let mut push = u64::MAX;
            let mut y = t;
            while y != s {
                let e = via[y];
                push = push.min(self.arcs[e].cap);
                y = self.arcs[e ^ 1].to;
            }
            let mut y = t;
            while y != s {
                let e = via[y];
                self.arcs[e].cap -= push;
                self.arcs[e ^ 1].cap += push;
                y = self.arcs[e ^ 1].to;
            }
            total += push;
        }
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &e in &self.out[x] {
                let y = self.arcs[e].to;
                if self.arcs[e].cap > 0 && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

/// Max flow with vertex capacities via node splitting: vertex `v` becomes
/// `in(v) -> out(v)` with capacity `cap(v)`, and every edge `uv` becomes
/// `out(u) -> in(v)` and `out(v) -> in(u)` with unbounded capacity.
pub fn max_flow_vertex_capacitated(net: &FlowNetwork) -> MaxFlow {
    let ix = Indexed::from_graph(&net.graph);
    let n = ix.len();
    let src = ix.index_of(&net.source).expect("validated");
    let dst = ix.index_of(&net.sink).expect("validated");
    let cap_of = |v: usize| -> Weight {
        if v == src || v == dst {
            Weight::Infinite
        } else {
            net.capacity[&ix.names[v]]
        }
    };

    if let Some(path) = infinite_route(&ix, src, dst, |v| cap_of(v).is_infinite()) {
        return MaxFlow {
            value: Weight::Infinite,
            paths: Vec::new(),
            min_cut: BTreeSet::new(),
            unbounded_path: Some(path.into_iter().map(|v| ix.names[v].clone()).collect()),
        };
    }

    let finite_total: u64 = (0..n).filter_map(|v| cap_of(v).finite()).fold(0u64, |a, c| a.saturating_add(c));
    let big = finite_total.saturating_add(1);
    let node_in = |v: usize| 2 * v;
    let node_out = |v: usize| 2 * v + 1;
    let mut res = Residual::new(2 * n);
    for v in 0..n {
        res.add(node_in(v), node_out(v), cap_of(v).finite().unwrap_or(big));
    }
    for (u, row) in ix.adj.iter().enumerate() {
        for &v in row {
            res.add(node_out(u), node_in(v), big);
        }
    }
    let (value, original) = res.max_flow(node_out(src), node_in(dst));

    let seen = res.reachable(node_out(src));
    let min_cut: BTreeSet<VertexId> = (0..n)
        .filter(|&v| v != src && v != dst && seen[node_in(v)] && !seen[node_out(v)])
        .map(|v| ix.names[v].clone())
        .collect();

    // Flow on each forward arc.
    let mut flow: Vec<u64> = (0..res.arcs.len()).map(|e| if e % 2 == 0 { original[e] - res.arcs[e].cap } else { 0 }).collect();
    let mut paths = Vec::new();
    let (start, goal) = (node_out(src), node_in(dst));
    'decompose: loop {
        let mut walk = vec![start];
        let mut arcs_used: Vec<usize> = Vec::new();
        let mut position = vec![usize::MAX; 2 * n];
        position[start] = 0;
        let mut x = start;
        while x != goal {
            let Some(&e) = res.out[x].iter().find(|&&e| e % 2 == 0 && flow[e] > 0) else {
                break 'decompose;
            };
            let y = res.arcs[e].to;
            arcs_used.push(e);
            if position[y] != usize::MAX {
                // Cancel the cycle and restart.
                let cycle = &arcs_used[position[y]..];
                let amount = cycle.iter().map(|&c| flow[c]).min().expect("non-empty");
                for &c in cycle {
                    flow[c] -= amount;
                }
                continue 'decompose;
            }
            position[y] = walk.len();
            walk.push(y);
            x = y;
        }
        let amount = arcs_used.iter().map(|&c| flow[c]).min().expect("non-empty");
        for &c in &arcs_used {
            flow[c] -= amount;
        }
        let mut vertices: Vec<VertexId> = Vec::new();
        for node in walk {
            let name = &ix.names[node / 2];
            if vertices.last() != Some(name) {
                vertices.push(name.clone());
            }
        }
        paths.push((vertices, amount));
    }

    MaxFlow { value: Weight::Finite(value), paths, min_cut, unbounded_path: None }
}

/// BFS from `src` to `dst` through vertices satisfying `open`.
fn infinite_route<F: Fn(usize) -> bool>(ix: &Indexed, src: usize, dst: usize, open: F) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; ix.len()];
    parent[src] = src;
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        if x == dst {
            let mut path = vec![dst];
            let mut y = dst;
            while y != src {
                y = parent[y];
                path.push(y);
            }
            path.reverse();
            return Some(path);
        }
        for &y in &ix.adj[x] {
            if parent[y] == usize::MAX && open(y) {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

/// Keeps the first vertex, then repeatedly jumps to the furthest later
/// vertex adjacent to the current one. The result has no chords.
fn shortcut<F: Fn(&VertexId, &VertexId) -> bool>(path: &[VertexId], adjacent: F) -> Vec<VertexId> {
    let mut out = vec![path[0].clone()];
    let mut i = 0;
    while i + 1 < path.len() {
        let j = (i + 1..path.len()).rev().find(|&j| adjacent(&path[i], &path[j])).expect("consecutive vertices are adjacent");
        out.push(path[j].clone());
        i = j;
    }
    out
}

/// Turns source-sink paths of `net` into S-paths: shortcut to a chordless
/// path, then replace source and sink by the colors of the first and last
/// auxiliary vertices. Equal S-paths are merged.
pub fn lift_paths(net: &FlowNetwork, aux: &AuxiliaryGraph, path_flows: &[(Vec<VertexId>, u64)]) -> Result<Packing> {
    let mut merged: BTreeMap<SPath, u64> = BTreeMap::new();
    for (path, amount) in path_flows {
        let lifted = lift_one(net, aux, path)?;
        *merged.entry(lifted).or_default() += amount;
    }
    Ok(Packing {
        entries: merged.into_iter().filter(|(_, m)| *m > 0).map(|(path, multiplicity)| PackingEntry { path, multiplicity }).collect(),
    })
}

fn lift_one(net: &FlowNetwork, aux: &AuxiliaryGraph, path: &[VertexId]) -> Result<SPath> {
    let broken = |why: &str| Error::InternalInvariantViolation(format!("flow path {path:?}: {why}"));
    if path.len() < 3 || path[0] != net.source || path[path.len() - 1] != net.sink {
        return Err(broken("does not run from source to sink"));
    }
    let chordless = shortcut(path, |x, y| net.graph.has_edge(x, y));
    let k = chordless.len();
    if k < 4 {
        return Err(broken("shortcut path is too short"));
    }
    let (a, b) = (&chordless[1], &chordless[k - 2]);
    let (Some(ca), Some(cb)) = (aux.color.get(a), aux.color.get(b)) else {
        return Err(broken("extremal vertices outside N"));
    };
    if chordless[2..k - 2].iter().any(|v| aux.color.contains_key(v)) {
        return Err(broken("interior meets N"));
    }
    if ca == cb {
        return Err(broken("lift is a cycle"));
    }
    let mut vertices = Vec::with_capacity(k);
    vertices.push(ca.clone());
    vertices.extend(chordless[1..k - 1].iter().cloned());
    vertices.push(cb.clone());
    Ok(SPath::unchecked(vertices))
}

/// Certified optimum, unbounded witness, or gap certificate for `inst`.
pub fn solve(inst: &Instance) -> Result<Solution> {
    let decision = is_tdi(inst);
    let (red, aux) = (&decision.reduced, &decision.auxiliary);
    if !decision.tdi {
        return fractional_certificate(inst, red, aux).map(Solution::NotTdi);
    }
    if let Some(f) = red.forced.iter().find(|f| f.weight.is_infinite()) {
        let path = SPath::new(vec![f.terminal_pair.0.clone(), f.vertex.clone(), f.terminal_pair.1.clone()], inst)?;
        return Ok(Solution::Unbounded(UnboundedWitness { path, forced: red.forced.clone() }));
    }
    let net = build_flow_network(red, aux)?;
    let flow = max_flow_vertex_capacitated(&net);
    if let Some(route) = &flow.unbounded_path {
        let path = lift_one(&net, aux, route)?;
        path.check(inst)?;
        return Ok(Solution::Unbounded(UnboundedWitness { path, forced: red.forced.clone() }));
    }

    let mut packing = lift_paths(&net, aux, &flow.paths)?;
    for f in red.forced.iter().filter(|f| f.weight != Weight::ZERO) {
        let path = SPath::unchecked(vec![f.terminal_pair.0.clone(), f.vertex.clone(), f.terminal_pair.1.clone()]);
        packing.entries.push(PackingEntry { path, multiplicity: f.weight.finite().expect("finite") });
    }
    packing.entries.sort_by(|x, y| x.path.cmp(&y.path));

    let mut cut = Cut { vertices: flow.min_cut.clone() };
    cut.vertices.extend(red.forced.iter().map(|f| f.vertex.clone()));
    // Zero-weight vertices were left out of the network; add the ones the
    // cut needs.
    let zeros: Vec<VertexId> = red
        .instance
        .non_terminals()
        .filter(|v| red.instance.weight(v) == Some(Weight::ZERO) && !cut.vertices.contains(*v))
        .cloned()
        .collect();
    cut.vertices.extend(zeros.iter().cloned());
    for z in &zeros {
        cut.vertices.remove(z);
        if linked_terminals(inst, |v| cut.vertices.contains(v)).is_some() {
            cut.vertices.insert(z.clone());
        }
    }

    packing.check_feasible(inst)?;
    cut.check_valid(inst)?;
    let value = Weight::Finite(packing.value());
    if cut.value(inst) != value {
        return Err(Error::InternalInvariantViolation(format!(
            "packing value {} differs from cut value {}",
            value,
            cut.value(inst)
        )));
    }
    Ok(Solution::Optimal(CertifiedOptimum { packing, cut, value, forced: red.forced.clone() }))
}

/// Half-integral primal/dual pair for a reduced instance whose auxiliary
/// graph has an odd cycle `C`. Gap weights are 1 on `C`, 0 on the rest of `N`
/// and on every vertex removed by the reduction, and infinite elsewhere.
pub fn fractional_certificate(
    original: &Instance,
    red: &ReducedInstance,
    aux: &AuxiliaryGraph,
) -> Result<FractionalCertificate> {
    let Verdict::OddCycle(cycle) = &aux.verdict else {
        return Err(Error::InternalInvariantViolation("auxiliary graph is bipartite".into()));
    };
    let on_cycle: BTreeSet<&VertexId> = cycle.iter().collect();
    let removed: BTreeSet<&VertexId> =
        red.forced.iter().map(|f| &f.vertex).chain(red.removed_vertices.iter()).collect();

    let mut gap_weights = BTreeMap::new();
    let mut half_cut = BTreeMap::new();
    for v in original.non_terminals() {
        let w = if on_cycle.contains(v) {
            half_cut.insert(v.clone(), Half::HALF);
            Weight::ONE
        } else if aux.color.contains_key(v) || removed.contains(v) {
            half_cut.insert(v.clone(), Half::ONE);
            Weight::ZERO
        } else {
            Weight::Infinite
        };
        gap_weights.insert(v.clone(), w);
    }

    let reduced = red.instance.graph();
    let mut half_paths = Vec::with_capacity(cycle.len());
    for i in 0..cycle.len() {
        let (u, v) = (&cycle[i], &cycle[(i + 1) % cycle.len()]);
        let middle = link_through_outside(reduced, aux, red, u, v).ok_or_else(|| {
            Error::InternalInvariantViolation(format!("no witness path for auxiliary edge `{u}`-`{v}`"))
        })?;
        let mut vertices = vec![aux.color[u].clone()];
        vertices.extend(middle);
        vertices.push(aux.color[v].clone());
        half_paths.push(SPath::unchecked(vertices));
    }

    let cert = FractionalCertificate {
        odd_cycle: cycle.clone(),
        gap_weights,
        half_paths,
        half_cut,
        forced: red.forced.clone(),
    };
    cert.verify(original)?;
    Ok(cert)
}

/// Path `u .. v` in the reduced graph whose inner vertices avoid both the
/// terminals and `N`; shortest, with ties broken by BFS in id order.
fn link_through_outside(
    g: &Graph,
    aux: &AuxiliaryGraph,
    red: &ReducedInstance,
    u: &VertexId,
    v: &VertexId,
) -> Option<Vec<VertexId>> {
    if g.has_edge(u, v) {
        return Some(vec![u.clone(), v.clone()]);
    }
    let inner = |x: &VertexId| !red.instance.is_terminal(x) && !aux.color.contains_key(x);
    let mut parent: BTreeMap<&VertexId, &VertexId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for x in g.neighbors(u)?.iter().filter(|x| inner(x)) {
        parent.insert(x, u);
        queue.push_back(x);
    }
    while let Some(x) = queue.pop_front() {
        let ns = g.neighbors(x)?;
        if ns.contains(v) {
            let mut path = vec![v.clone(), x.clone()];
            let mut y = x;
            while let Some(&p) = parent.get(y) {
                path.push(p.clone());
                if p == u {
                    break;
                }
                y = p;
            }
            path.reverse();
            return Some(path);
        }
        for y in ns.iter().filter(|y| inner(y)) {
            if !parent.contains_key(y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    None
}
