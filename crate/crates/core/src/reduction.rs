//! Terminal-set reduction and the auxiliary graph.
//!
//! [`preprocess`] applies three rules until none fires:
//!
//! 1. a non-terminal adjacent to two or more terminals is *forced*: it is
//!    recorded (it contributes `w(v)` to both optima) and deleted;
//! 2. for each terminal `s`, a component of `G - N(s)` containing no terminal
//!    is deleted;
//! 3. an edge whose ends share a terminal neighbour is deleted.
//!
//! On the reduced graph every vertex of `N = N(S)` has a unique adjacent
//! terminal, its *color*. The auxiliary graph lives on `N`: two vertices of
//! different colors are adjacent when they are adjacent in `G` or both touch a
//! common component of `G - (S ∪ N)`. The blocking system of the S-paths is
//! TDI exactly when this graph is bipartite.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::{Graph, Indexed, VertexId};
use crate::instance::{Instance, Weight};

/// A non-terminal adjacent to at least two terminals, removed by rule 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedVertex {
    pub vertex: VertexId,
    /// The two smallest terminals adjacent to `vertex`.
    pub terminal_pair: (VertexId, VertexId),
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedInstance {
    /// The residual instance; satisfies all three rules.
    pub instance: Instance,
    pub forced: Vec<ForcedVertex>,
    /// Vertices deleted by rule 2.
    pub removed_vertices: BTreeSet<VertexId>,
    /// Edges deleted by rule 3, as `(u, v)` with `u < v`.
    pub removed_edges: BTreeSet<(VertexId, VertexId)>,
}

impl ReducedInstance {
    /// Total weight of the forced vertices.
    pub fn forced_weight(&self) -> Weight {
        self.forced.iter().map(|f| f.weight).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `a` holds the smallest vertex of every component.
    Bipartition { a: BTreeSet<VertexId>, b: BTreeSet<VertexId> },
    /// A shortest odd cycle, starting at its smallest vertex, lexicographically
    /// first among shortest ones.
    OddCycle(Vec<VertexId>),
}

impl Verdict {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Verdict::Bipartition { .. })
    }

    pub fn odd_cycle(&self) -> Option<&[VertexId]> {
        match self {
            Verdict::OddCycle(c) => Some(c),
            Verdict::Bipartition { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryGraph {
    pub graph: Graph,
    /// The unique terminal adjacent to each vertex of `N`.
    pub color: BTreeMap<VertexId, VertexId>,
    pub verdict: Verdict,
}

/// Result of [`is_tdi`], carrying the intermediate artifacts.
#[derive(Clone, Debug)]
pub struct TdiDecision {
    pub tdi: bool,
    pub auxiliary: AuxiliaryGraph,
    pub reduced: ReducedInstance,
}

/// Reduces `inst` to a fixpoint of the three rules. Each round runs rule 1,
/// then rule 2 for each terminal in id order, then rule 3.
pub fn preprocess(inst: &Instance) -> ReducedInstance {
    let ix = Indexed::from_graph(inst.graph());
    let terminals: Vec<usize> = inst.terminals().iter().map(|t| ix.index_of(t).expect("terminal in graph")).collect();
    let mut red = Reducer::new(&ix, &terminals);
    red.run_default();
    red.into_reduced(inst)
}

/// Builds the auxiliary graph of a reduced instance and decides bipartiteness.
pub fn build_auxiliary(red: &ReducedInstance) -> AuxiliaryGraph {
    let inst = &red.instance;
    let ix = Indexed::from_graph(inst.graph());
    let is_terminal: Vec<bool> = ix.names.iter().map(|v| inst.is_terminal(v)).collect();
    let alive = vec![true; ix.len()];
    let aux = AuxIx::build(&ix.adj, &alive, &is_terminal);

    let mut graph = Graph::new();
    let mut color = BTreeMap::new();
    for (k, &v) in aux.nodes.iter().enumerate() {
        graph.add_vertex(ix.names[v].clone());
        color.insert(ix.names[v].clone(), ix.names[aux.color[k]].clone());
    }
    for (k, ns) in aux.adj.iter().enumerate() {
        for &m in ns.iter().filter(|&&m| m > k) {
            graph.add_edge(ix.names[aux.nodes[k]].clone(), ix.names[aux.nodes[m]].clone()).expect("distinct");
        }
    }
    let verdict = match split_or_odd_cycle(&aux.adj) {
        LocalVerdict::Sides(side) => {
            let mut a = BTreeSet::new();
            let mut b = BTreeSet::new();
            for (k, s) in side.into_iter().enumerate() {
                let name = ix.names[aux.nodes[k]].clone();
                if s { b.insert(name) } else { a.insert(name) };
            }
            Verdict::Bipartition { a, b }
        }
        LocalVerdict::Cycle(c) => Verdict::OddCycle(c.into_iter().map(|k| ix.names[aux.nodes[k]].clone()).collect()),
    };
    AuxiliaryGraph { graph, color, verdict }
}

/// Bipartition of `g`, or its canonical shortest odd cycle.
pub fn bipartition_or_odd_cycle(g: &Graph) -> Verdict {
    let ix = Indexed::from_graph(g);
    match split_or_odd_cycle(&ix.adj) {
        LocalVerdict::Sides(side) => {
            let mut a = BTreeSet::new();
            let mut b = BTreeSet::new();
            for (k, s) in side.into_iter().enumerate() {
                if s { b.insert(ix.names[k].clone()) } else { a.insert(ix.names[k].clone()) };
            }
            Verdict::Bipartition { a, b }
        }
        LocalVerdict::Cycle(c) => Verdict::OddCycle(c.into_iter().map(|k| ix.names[k].clone()).collect()),
    }
}

/// Decides total dual integrality of the S-path blocking system of `inst`.
pub fn is_tdi(inst: &Instance) -> TdiDecision {
    let reduced = preprocess(inst);
    let auxiliary = build_auxiliary(&reduced);
    TdiDecision { tdi: auxiliary.verdict.is_bipartite(), auxiliary, reduced }
}

/// Bipartiteness of the auxiliary graph only; the hot path of recognition.
pub(crate) fn is_tdi_indexed(ix: &Indexed, terminals: &[usize]) -> bool {
    let mut red = Reducer::new(ix, terminals);
    red.run_default();
    let aux = AuxIx::build(&red.adj, &red.alive, &red.is_terminal);
    two_color(&aux.adj).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rule {
    Forced,
    Detached,
    SharedTerminalEdge,
}

/// Index-based working copy of an instance under reduction.
pub(crate) struct Reducer {
    pub adj: Vec<Vec<usize>>,
    pub alive: Vec<bool>,
    pub is_terminal: Vec<bool>,
    pub terminals: Vec<usize>,
    pub forced: Vec<(usize, usize, usize)>,
    pub detached: Vec<usize>,
    pub cut_edges: Vec<(usize, usize)>,
}

impl Reducer {
    pub fn new(ix: &Indexed, terminals: &[usize]) -> Self {
        let mut is_terminal = vec![false; ix.len()];
        for &t in terminals {
            is_terminal[t] = true;
        }
        let mut terminals = terminals.to_vec();
        terminals.sort_unstable();
        Reducer {
            adj: ix.adj.clone(),
            alive: vec![true; ix.len()],
            is_terminal,
            terminals,
            forced: Vec::new(),
            detached: Vec::new(),
            cut_edges: Vec::new(),
        }
    }

    pub fn run_default(&mut self) {
        loop {
            let mut changed = self.apply(Rule::Forced);
            changed |= self.apply(Rule::Detached);
            changed |= self.apply(Rule::SharedTerminalEdge);
            if !changed {
                break;
            }
        }
    }

    pub fn apply(&mut self, rule: Rule) -> bool {
        match rule {
            Rule::Forced => self.apply_forced(),
            Rule::Detached => {
                let mut changed = false;
                for k in 0..self.terminals.len() {
                    changed |= self.detach_for(self.terminals[k]);
                }
                changed
            }
            Rule::SharedTerminalEdge => self.apply_shared_terminal_edges(),
        }
    }

    fn terminal_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied().filter(|&n| self.is_terminal[n])
    }

    fn delete(&mut self, v: usize) {
        self.alive[v] = false;
        for n in std::mem::take(&mut self.adj[v]) {
            self.adj[n].retain(|&m| m != v);
        }
    }

    fn apply_forced(&mut self) -> bool {
        let hits: Vec<(usize, usize, usize)> = (0..self.adj.len())
            .filter(|&v| self.alive[v] && !self.is_terminal[v])
            .filter_map(|v| {
                let mut ts = self.terminal_neighbors(v);
                match (ts.next(), ts.next()) {
                    (Some(s), Some(t)) => Some((v, s.min(t), s.max(t))),
                    _ => None,
                }
            })
            .collect();
        for &(v, _, _) in &hits {
            self.delete(v);
        }
        let changed = !hits.is_empty();
        self.forced.extend(hits);
        changed
    }

    /// Rule 2 for a single terminal `s`.
    pub fn detach_for(&mut self, s: usize) -> bool {
        let n = self.adj.len();
        let mut blocked = vec![false; n];
        for &x in &self.adj[s] {
            blocked[x] = true;
        }
        let mut seen = vec![false; n];
        let mut doomed = Vec::new();
        for start in 0..n {
            if !self.alive[start] || blocked[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut has_terminal = false;
            let mut head = 0;
            while head < comp.len() {
                let x = comp[head];
                head += 1;
                has_terminal |= self.is_terminal[x];
                for &y in &self.adj[x] {
                    if !blocked[y] && !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            if !has_terminal {
                doomed.extend(comp);
            }
        }
        doomed.sort_unstable();
        for &v in &doomed {
            self.delete(v);
        }
        let changed = !doomed.is_empty();
        self.detached.extend(doomed);
        changed
    }

    fn apply_shared_terminal_edges(&mut self) -> bool {
        let mut doomed = Vec::new();
        for u in 0..self.adj.len() {
            if !self.alive[u] || self.is_terminal[u] {
                continue;
            }
            for &v in self.adj[u].iter().filter(|&&v| v > u) {
                if self.terminal_neighbors(u).any(|t| self.adj[v].binary_search(&t).is_ok()) {
                    doomed.push((u, v));
                }
            }
        }
        for &(u, v) in &doomed {
            self.adj[u].retain(|&x| x != v);
            self.adj[v].retain(|&x| x != u);
        }
        let changed = !doomed.is_empty();
        self.cut_edges.extend(doomed);
        changed
    }

    fn into_reduced(self, inst: &Instance) -> ReducedInstance {
        let ix_names: Vec<&VertexId> = inst.graph().vertices().collect();
        let mut graph = Graph::new();
        for v in (0..self.adj.len()).filter(|&v| self.alive[v]) {
            graph.add_vertex(ix_names[v].clone());
        }
        for u in 0..self.adj.len() {
            for &v in self.adj[u].iter().filter(|&&v| v > u) {
                graph.add_edge(ix_names[u].clone(), ix_names[v].clone()).expect("distinct");
            }
        }
        let weights = graph
            .vertices()
            .filter(|v| !inst.is_terminal(v))
            .map(|v| (v.clone(), inst.weight(v).expect("non-terminal weight")))
            .collect();
        let instance = Instance::new(graph, inst.terminals().clone(), weights).expect("reduction keeps validity");
        let forced = self
            .forced
            .iter()
            .map(|&(v, s, t)| ForcedVertex {
                vertex: ix_names[v].clone(),
                terminal_pair: (ix_names[s].clone(), ix_names[t].clone()),
                weight: inst.weight(ix_names[v]).expect("non-terminal weight"),
            })
            .collect();
        ReducedInstance {
            instance,
            forced,
            removed_vertices: self.detached.iter().map(|&v| ix_names[v].clone()).collect(),
            removed_edges: self.cut_edges.iter().map(|&(u, v)| (ix_names[u].clone(), ix_names[v].clone())).collect(),
        }
    }
}

/// Auxiliary graph over local indices `0..nodes.len()`.
pub(crate) struct AuxIx {
    /// Vertices of `N`, ascending.
    pub nodes: Vec<usize>,
    /// Terminal adjacent to each node.
    pub color: Vec<usize>,
    pub adj: Vec<Vec<usize>>,
}

impl AuxIx {
    /// `adj` must satisfy rule 1 on the alive vertices.
    pub fn build(adj: &[Vec<usize>], alive: &[bool], is_terminal: &[bool]) -> Self {
        let n = adj.len();
        let mut local = vec![usize::MAX; n];
        let mut nodes = Vec::new();
        let mut color = Vec::new();
        for v in 0..n {
            if !alive[v] || is_terminal[v] {
                continue;
            }
            if let Some(&t) = adj[v].iter().find(|&&x| is_terminal[x]) {
                local[v] = nodes.len();
                nodes.push(v);
                color.push(t);
            }
        }
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let add = |a: usize, b: usize, edges: &mut BTreeSet<(usize, usize)>| {
            if color[a] != color[b] {
                edges.insert((a.min(b), a.max(b)));
            }
        };
        for (k, &v) in nodes.iter().enumerate() {
            for &x in &adj[v] {
                if local[x] != usize::MAX && local[x] > k {
                    add(k, local[x], &mut edges);
                }
            }
        }
        // Components of G - (S ∪ N) and the N-vertices touching each.
        let mut seen = vec![false; n];
        for start in 0..n {
            if !alive[start] || is_terminal[start] || local[start] != usize::MAX || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut touching = BTreeSet::new();
            let mut head = 0;
            while head < comp.len() {
                let x = comp[head];
                head += 1;
                for &y in &adj[x] {
                    if local[y] != usize::MAX {
                        touching.insert(local[y]);
                    } else if !is_terminal[y] && !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            let touching: Vec<usize> = touching.into_iter().collect();
            for (i, &a) in touching.iter().enumerate() {
                for &b in &touching[i + 1..] {
                    add(a, b, &mut edges);
                }
            }
        }
        let mut ladj = vec![Vec::new(); nodes.len()];
        for (a, b) in edges {
            ladj[a].push(b);
            ladj[b].push(a);
        }
        for row in &mut ladj {
            row.sort_unstable();
        }
        AuxIx { nodes, color, adj: ladj }
    }
}

pub(crate) enum LocalVerdict {
    /// `false` = side A.
    Sides(Vec<bool>),
    Cycle(Vec<usize>),
}

/// Proper 2-coloring with the smallest vertex of each component on side A,
/// or `None` if the graph has an odd cycle. `adj` rows must be sorted.
pub(crate) fn two_color(adj: &[Vec<usize>]) -> Option<Vec<bool>> {
    let n = adj.len();
    let mut side: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let sx = side[x].expect("colored");
            for &y in &adj[x] {
                match side[y] {
                    None => {
                        side[y] = Some(!sx);
                        queue.push_back(y);
                    }
                    Some(sy) if sy == sx => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.expect("colored")).collect())
}

pub(crate) fn split_or_odd_cycle(adj: &[Vec<usize>]) -> LocalVerdict {
    match two_color(adj) {
        Some(sides) => LocalVerdict::Sides(sides),
        None => LocalVerdict::Cycle(shortest_odd_cycle(adj).expect("non-bipartite graph has an odd cycle")),
    }
}

/// Canonical shortest odd cycle: minimal length, then minimal first vertex,
/// then lexicographically minimal sequence. Every closed walk of the minimal
/// odd length is a simple chordless cycle, so a greedy walk guided by
/// exact-length reachability yields the canonical one.
pub(crate) fn shortest_odd_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut girth = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= girth {
                break;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                } else if dist[y] == dist[x] {
                    girth = girth.min(2 * dist[x] + 1);
                }
            }
        }
    }
    if girth == usize::MAX {
        return None;
    }
    for root in 0..n {
        // reach[len][v]: a walk of exactly `len` edges from v to root inside
        // the vertices >= root.
        let mut reach = vec![vec![false; n]; girth + 1];
        reach[0][root] = true;
        for len in 1..=girth {
            for v in root..n {
                reach[len][v] = adj[v].iter().any(|&u| u >= root && reach[len - 1][u]);
            }
        }
        if !reach[girth][root] {
            continue;
        }
        let mut cycle = vec![root];
        let mut cur = root;
        for step in 1..girth {
            let next = adj[cur]
                .iter()
                .copied()
                .find(|&u| u > root && reach[girth - step][u])
                .expect("reachability guides the walk");
            cycle.push(next);
            cur = next;
        }
        return Some(cycle);
    }
    unreachable!("some root lies on a shortest odd cycle")
}
