//! Simple undirected graphs with named vertices and the three minor operations
//! used throughout the crate: vertex deletion, vertex contraction (the
//! neighbourhood becomes a clique) and edge contraction.
//!
//! Every operation is persistent: it returns a new [`Graph`] and leaves the
//! input untouched, so certificates can keep referring to the original
//! instance.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Stable vertex name. Ordering is the lexicographic order of the name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Arc<str>);

impl VertexId {
    pub fn new(name: impl AsRef<str>) -> Self {
        VertexId(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s)
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(Arc::from(s))
    }
}

impl From<&VertexId> for VertexId {
    fn from(v: &VertexId) -> Self {
        v.clone()
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer).map(VertexId::from)
    }
}

/// Builds a sorted vertex set from anything name-like.
pub fn vertex_set<I, T>(names: I) -> BTreeSet<VertexId>
where
    I: IntoIterator<Item = T>,
    T: Into<VertexId>,
{
    names.into_iter().map(Into::into).collect()
}

/// Undirected simple graph: no loops, no parallel edges.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<_> = self.vertices().collect();
        let es: Vec<_> = self.edges().map(|(u, v)| format!("{u}-{v}")).collect();
        f.debug_struct("Graph").field("vertices", &vs).field("edges", &es).finish()
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on `vertices` plus every endpoint of `edges`. Repeated edges are
    /// merged; a loop is an error.
    pub fn from_edges<I, J, T, U>(vertices: I, edges: J) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<VertexId>,
        J: IntoIterator<Item = (U, U)>,
        U: Into<VertexId>,
    {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Returns `false` if the vertex already existed.
    pub fn add_vertex(&mut self, v: impl Into<VertexId>) -> bool {
        let v = v.into();
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeSet::new());
        true
    }

    /// Adds `uv`, declaring missing endpoints. Returns `false` if the edge
    /// was already present.
    pub fn add_edge(&mut self, u: impl Into<VertexId>, v: impl Into<VertexId>) -> Result<bool> {
        let (u, v) = (u.into(), v.into());
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.add_vertex(u.clone());
        self.add_vertex(v.clone());
        let fresh = self.adj.get_mut(&u).expect("declared").insert(v.clone());
        self.adj.get_mut(&v).expect("declared").insert(u);
        Ok(fresh)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Vertices in increasing id order.
    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.adj.keys()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(u, ns)| ns.range::<VertexId, _>((std::ops::Bound::Excluded(u), std::ops::Bound::Unbounded)).map(move |v| (u, v)))
    }

    pub fn contains_vertex<Q>(&self, v: &Q) -> bool
    where
        VertexId: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        self.adj.contains_key(v)
    }

    pub fn has_edge<Q>(&self, u: &Q, v: &Q) -> bool
    where
        VertexId: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        self.adj.get(u).is_some_and(|ns| ns.contains(v))
    }

    pub fn neighbors<Q>(&self, v: &Q) -> Option<&BTreeSet<VertexId>>
    where
        VertexId: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        self.adj.get(v)
    }

    pub fn degree<Q>(&self, v: &Q) -> Option<usize>
    where
        VertexId: Borrow<Q>,
        Q: Ord + ?Sized,
    {
        self.adj.get(v).map(BTreeSet::len)
    }

    fn require(&self, v: &VertexId) -> Result<()> {
        if self.adj.contains_key(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.clone()))
        }
    }

    /// `G - v`: the subgraph induced by `V - v`.
    pub fn delete_vertex(&self, v: &VertexId) -> Result<Graph> {
        self.require(v)?;
        let mut adj = self.adj.clone();
        if let Some(ns) = adj.remove(v) {
            for n in &ns {
                adj.get_mut(n).expect("symmetric adjacency").remove(v);
            }
        }
        Ok(Graph { adj })
    }

    /// `G / v`: remove `v` and make its neighbourhood a clique.
    pub fn contract_vertex(&self, v: &VertexId) -> Result<Graph> {
        self.require(v)?;
        let mut adj = self.adj.clone();
        let ns = adj.remove(v).unwrap_or_default();
        for n in &ns {
            let row = adj.get_mut(n).expect("symmetric adjacency");
            row.remove(v);
            row.extend(ns.iter().filter(|&m| m != n).cloned());
        }
        Ok(Graph { adj })
    }

    /// `G / xy`: identify `x` and `y`. The merged vertex keeps the smaller
    /// id; the loop and any parallel edges disappear.
    pub fn contract_edge(&self, x: &VertexId, y: &VertexId) -> Result<Graph> {
        if !self.has_edge(x, y) {
            return Err(Error::UnknownEdge(x.clone(), y.clone()));
        }
        let (keep, gone) = if x < y { (x, y) } else { (y, x) };
        let mut adj = self.adj.clone();
        let gone_ns = adj.remove(gone).unwrap_or_default();
        for n in &gone_ns {
            adj.get_mut(n).expect("symmetric adjacency").remove(gone);
        }
        for n in gone_ns.iter().filter(|&n| n != keep) {
            adj.get_mut(keep).expect("present").insert(n.clone());
            adj.get_mut(n).expect("present").insert(keep.clone());
        }
        Ok(Graph { adj })
    }

    /// Applies a batch of deletions and contractions at once. Two surviving
    /// vertices are adjacent iff the original graph has a path between them
    /// whose inner vertices are all contracted.
    pub fn apply_vertex_minor(&self, spec: &MinorSpec) -> Result<Graph> {
        for v in spec.deletions.iter().chain(&spec.contractions) {
            self.require(v)?;
        }
        if let Some(v) = spec.deletions.intersection(&spec.contractions).next() {
            return Err(Error::OverlappingSpec(v.clone()));
        }
        let kept: BTreeSet<&VertexId> = self
            .vertices()
            .filter(|v| !spec.deletions.contains(*v) && !spec.contractions.contains(*v))
            .collect();
        let mut out = Graph::new();
        for &u in &kept {
            out.add_vertex(u.clone());
        }
        for &u in &kept {
            // BFS through contracted vertices only.
            let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
            let mut queue = VecDeque::from([u]);
            seen.insert(u);
            while let Some(x) = queue.pop_front() {
                for y in &self.adj[x] {
                    if !seen.insert(y) {
                        continue;
                    }
                    if spec.contractions.contains(y) {
                        queue.push_back(y);
                    } else if kept.contains(y) && u < y {
                        out.add_edge(u.clone(), y.clone())?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `true` iff no edge has both ends in `set`.
    pub fn is_independent_set<'a, I>(&self, set: I) -> Result<bool>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let set: BTreeSet<&VertexId> = set.into_iter().collect();
        for v in &set {
            self.require(v)?;
        }
        Ok(set.iter().all(|v| self.adj[*v].iter().all(|n| !set.contains(n))))
    }

    /// First edge (in order) with both ends in `set`, if any.
    pub fn edge_within<'a>(&'a self, set: &BTreeSet<VertexId>) -> Option<(&'a VertexId, &'a VertexId)> {
        self.edges().find(|(u, v)| set.contains(*u) && set.contains(*v))
    }

    pub fn induced_subgraph<F>(&self, mut keep: F) -> Graph
    where
        F: FnMut(&VertexId) -> bool,
    {
        let kept: BTreeSet<VertexId> = self.vertices().filter(|v| keep(v)).cloned().collect();
        let adj = kept
            .iter()
            .map(|v| {
                let ns = self.adj[v].iter().filter(|n| kept.contains(*n)).cloned().collect();
                (v.clone(), ns)
            })
            .collect();
        Graph { adj }
    }

    /// Renames every vertex. `rename` must be injective on the vertex set.
    pub fn relabel<F>(&self, mut rename: F) -> Graph
    where
        F: FnMut(&VertexId) -> VertexId,
    {
        let names: BTreeMap<&VertexId, VertexId> = self.vertices().map(|v| (v, rename(v))).collect();
        let mut g = Graph::new();
        for v in names.values() {
            g.add_vertex(v.clone());
        }
        for (u, v) in self.edges() {
            g.add_edge(names[u].clone(), names[v].clone()).expect("injective rename");
        }
        g
    }

    /// Checks the representation invariants: symmetric adjacency, no loops,
    /// every neighbour declared.
    pub fn is_simple(&self) -> bool {
        self.adj.iter().all(|(u, ns)| {
            !ns.contains(u) && ns.iter().all(|n| self.adj.get(n).is_some_and(|m| m.contains(u)))
        })
    }

    /// Vertex sets of the connected components, each in id order, listed by
    /// smallest member.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::from([start.clone()]);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for y in &self.adj[x] {
                    if seen.insert(y) {
                        comp.insert(y.clone());
                        queue.push_back(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// A name not used by any vertex, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> VertexId {
        let mut name = base.to_string();
        while self.adj.contains_key(name.as_str()) {
            name.push('_');
        }
        VertexId::from(name)
    }
}

/// A batch vertex-minor: `deletions` (D) and `contractions` (C).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinorSpec {
    pub deletions: BTreeSet<VertexId>,
    pub contractions: BTreeSet<VertexId>,
}

impl MinorSpec {
    pub fn new(deletions: BTreeSet<VertexId>, contractions: BTreeSet<VertexId>) -> Result<Self> {
        if let Some(v) = deletions.intersection(&contractions).next() {
            return Err(Error::OverlappingSpec(v.clone()));
        }
        Ok(MinorSpec { deletions, contractions })
    }
}

/// Index-based snapshot of a [`Graph`]. Index order equals id order, so any
/// "smallest vertex" rule can be evaluated on indices.
#[derive(Clone, Debug)]
pub(crate) struct Indexed {
    pub names: Vec<VertexId>,
    pub adj: Vec<Vec<usize>>,
}

impl Indexed {
    pub fn from_graph(g: &Graph) -> Self {
        let names: Vec<VertexId> = g.vertices().cloned().collect();
        let adj = g
            .adj
            .values()
            .map(|ns| ns.iter().map(|n| names.binary_search(n).expect("declared")).collect())
            .collect();
        Indexed { names, adj }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.names.binary_search(v).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(&str, &str)]) -> Graph {
        Graph::from_edges(Vec::<&str>::new(), edges.iter().copied()).unwrap()
    }

    fn v(s: &str) -> VertexId {
        VertexId::from(s)
    }

    fn net() -> Graph {
        g(&[("a1", "b1"), ("b1", "c1"), ("c1", "a1"), ("a1", "a2"), ("b1", "b2"), ("c1", "c2")])
    }

    #[test]
    fn delete_from_triangle_leaves_edge() {
        let t = g(&[("a", "b"), ("b", "c"), ("c", "a")]);
        let d = t.delete_vertex(&v("c")).unwrap();
        assert_eq!(d, g(&[("a", "b")]));
        assert_eq!(t.vertex_count(), 3, "input untouched");
    }

    #[test]
    fn delete_net_terminal() {
        let d = net().delete_vertex(&v("a2")).unwrap();
        assert_eq!(d, g(&[("a1", "b1"), ("b1", "c1"), ("c1", "a1"), ("b1", "b2"), ("c1", "c2")]));
    }

    #[test]
    fn delete_only_vertex() {
        let single = Graph::from_edges(["v"], Vec::<(&str, &str)>::new()).unwrap();
        assert!(single.delete_vertex(&v("v")).unwrap().is_empty());
        assert_eq!(single.delete_vertex(&v("x")), Err(Error::UnknownVertex(v("x"))));
    }

    #[test]
    fn contract_star_center() {
        let star = g(&[("c", "x"), ("c", "y"), ("c", "z")]);
        assert_eq!(star.contract_vertex(&v("c")).unwrap(), g(&[("x", "y"), ("y", "z"), ("x", "z")]));
    }

    #[test]
    fn contract_path_middle() {
        let p = g(&[("a", "b"), ("b", "c")]);
        assert_eq!(p.contract_vertex(&v("b")).unwrap(), g(&[("a", "c")]));
    }

    #[test]
    fn contract_isolated_equals_delete() {
        let mut h = net();
        h.add_vertex("iso");
        assert_eq!(h.contract_vertex(&v("iso")).unwrap(), h.delete_vertex(&v("iso")).unwrap());
    }

    #[test]
    fn contract_edges() {
        let p = g(&[("a", "b"), ("b", "c")]);
        assert_eq!(p.contract_edge(&v("b"), &v("a")).unwrap(), g(&[("a", "c")]));
        let t = g(&[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(t.contract_edge(&v("b"), &v("c")).unwrap(), g(&[("a", "b")]));
        assert!(matches!(p.contract_edge(&v("a"), &v("c")), Err(Error::UnknownEdge(..))));

        let merged = net().contract_edge(&v("a1"), &v("a2")).unwrap();
        assert_eq!(merged.vertex_count(), 5);
        assert_eq!(merged.neighbors("a1").unwrap(), &vertex_set(["b1", "c1"]));
    }

    #[test]
    fn vertex_minor_examples() {
        let m = net()
            .apply_vertex_minor(&MinorSpec::new(BTreeSet::new(), vertex_set(["a1", "b1", "c1"])).unwrap())
            .unwrap();
        assert_eq!(m, g(&[("a2", "b2"), ("b2", "c2"), ("a2", "c2")]));

        assert_eq!(net().apply_vertex_minor(&MinorSpec::default()).unwrap(), net());

        let p = g(&[("a", "b"), ("b", "c"), ("c", "d")]);
        let m = p.apply_vertex_minor(&MinorSpec::new(vertex_set(["c"]), vertex_set(["b"])).unwrap()).unwrap();
        assert_eq!(m, Graph::from_edges(["a", "d"], Vec::<(&str, &str)>::new()).unwrap());

        let overlap = MinorSpec { deletions: vertex_set(["a"]), contractions: vertex_set(["a"]) };
        assert_eq!(p.apply_vertex_minor(&overlap), Err(Error::OverlappingSpec(v("a"))));
        assert!(MinorSpec::new(vertex_set(["a"]), vertex_set(["a"])).is_err());
        let unknown = MinorSpec { deletions: vertex_set(["zz"]), contractions: BTreeSet::new() };
        assert_eq!(p.apply_vertex_minor(&unknown), Err(Error::UnknownVertex(v("zz"))));
    }

    #[test]
    fn independence() {
        assert!(net().is_independent_set(&vertex_set(["a2", "b2", "c2"])).unwrap());
        let t = g(&[("a", "b"), ("b", "c"), ("c", "a")]);
        assert!(!t.is_independent_set(&vertex_set(["a", "b"])).unwrap());
        assert!(t.is_independent_set(&vertex_set(["a"])).unwrap());
        assert!(t.is_independent_set(&vertex_set(["q"])).is_err());
    }

    #[test]
    fn loops_rejected() {
        assert_eq!(Graph::from_edges(Vec::<&str>::new(), [("a", "a")]), Err(Error::SelfLoop(v("a"))));
    }

    #[test]
    fn edges_listed_once() {
        let n = net();
        assert_eq!(n.edge_count(), 6);
        assert_eq!(n.edges().count(), 6);
        assert!(n.edges().all(|(u, v)| u < v));
    }
}
