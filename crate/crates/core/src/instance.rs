use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Vertex capacity: a natural number or `+inf`. Addition saturates at
/// infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    Finite(u64),
    Infinite,
}

impl Weight {
    pub const ZERO: Weight = Weight::Finite(0);
    pub const ONE: Weight = Weight::Finite(1);

    pub fn is_infinite(self) -> bool {
        matches!(self, Weight::Infinite)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Weight::Finite(n) => Some(n),
            Weight::Infinite => None,
        }
    }
}

impl Add for Weight {
    type Output = Weight;

    fn add(self, rhs: Weight) -> Weight {
        match (self, rhs) {
            (Weight::Finite(a), Weight::Finite(b)) => a.checked_add(b).map_or(Weight::Infinite, Weight::Finite),
            _ => Weight::Infinite,
        }
    }
}

impl std::iter::Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, Add::add)
    }
}

impl From<u64> for Weight {
    fn from(n: u64) -> Self {
        Weight::Finite(n)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(n) => write!(f, "{n}"),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Weight {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Weight::Infinite);
        }
        s.parse::<u64>().map(Weight::Finite).map_err(|_| format!("invalid weight `{s}`"))
    }
}

/// Serialized as a JSON integer, or the string `"inf"`.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Weight::Finite(n) => serializer.serialize_u64(*n),
            Weight::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct WeightVisitor;

        impl Visitor<'_> for WeightVisitor {
            type Value = Weight;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Weight, E> {
                Ok(Weight::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Weight, E> {
                u64::try_from(v).map(Weight::Finite).map_err(|_| E::custom("negative weight"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Weight, E> {
                if v == "inf" {
                    Ok(Weight::Infinite)
                } else {
                    Err(E::custom(format!("unexpected string `{v}`")))
                }
            }
        }

        deserializer.deserialize_any(WeightVisitor)
    }
}

/// A graph, an independent terminal set `S` with `|S| >= 2`, and a weight on
/// every non-terminal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    terminals: BTreeSet<VertexId>,
    weights: BTreeMap<VertexId, Weight>,
}

impl Instance {
    pub fn new(graph: Graph, terminals: BTreeSet<VertexId>, weights: BTreeMap<VertexId, Weight>) -> Result<Self> {
        validate_terminals(&graph, &terminals)?;
        for v in graph.vertices() {
            if !terminals.contains(v) && !weights.contains_key(v) {
                return Err(Error::InvalidInstance(format!("no weight for vertex `{v}`")));
            }
        }
        for v in weights.keys() {
            if terminals.contains(v) {
                return Err(Error::InvalidInstance(format!("terminal `{v}` carries a weight")));
            }
            if !graph.contains_vertex(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        Ok(Instance { graph, terminals, weights })
    }

    /// Every non-terminal gets weight 1.
    pub fn unit(graph: Graph, terminals: BTreeSet<VertexId>) -> Result<Self> {
        Self::uniform(graph, terminals, Weight::ONE)
    }

    pub fn uniform(graph: Graph, terminals: BTreeSet<VertexId>, w: Weight) -> Result<Self> {
        let weights = graph.vertices().filter(|v| !terminals.contains(*v)).map(|v| (v.clone(), w)).collect();
        Self::new(graph, terminals, weights)
    }

    /// Same graph and terminals, new weights.
    pub fn reweighted(&self, weights: BTreeMap<VertexId, Weight>) -> Result<Self> {
        Self::new(self.graph.clone(), self.terminals.clone(), weights)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn terminals(&self) -> &BTreeSet<VertexId> {
        &self.terminals
    }

    pub fn weights(&self) -> &BTreeMap<VertexId, Weight> {
        &self.weights
    }

    pub fn is_terminal(&self, v: &VertexId) -> bool {
        self.terminals.contains(v)
    }

    /// Weight of a non-terminal; `None` for terminals and unknown vertices.
    pub fn weight(&self, v: &VertexId) -> Option<Weight> {
        self.weights.get(v).copied()
    }

    pub fn non_terminals(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.weights.keys()
    }
}

pub(crate) fn validate_terminals(graph: &Graph, terminals: &BTreeSet<VertexId>) -> Result<()> {
    if terminals.len() < 2 {
        return Err(Error::InvalidInstance(format!("need at least 2 terminals, got {}", terminals.len())));
    }
    for t in terminals {
        if !graph.contains_vertex(t) {
            return Err(Error::UnknownVertex(t.clone()));
        }
    }
    if let Some((u, v)) = graph.edge_within(terminals) {
        return Err(Error::InvalidInstance(format!("terminals are not independent: edge `{u}`-`{v}`")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vertex_set;

    #[test]
    fn weight_arithmetic_saturates() {
        assert_eq!(Weight::Finite(2) + Weight::Finite(3), Weight::Finite(5));
        assert_eq!(Weight::Finite(2) + Weight::Infinite, Weight::Infinite);
        assert_eq!(Weight::Finite(u64::MAX) + Weight::ONE, Weight::Infinite);
        assert!(Weight::Finite(u64::MAX) < Weight::Infinite);
        assert_eq!([1u64, 2, 3].into_iter().map(Weight::from).sum::<Weight>(), Weight::Finite(6));
    }

    #[test]
    fn weight_json() {
        assert_eq!(serde_json::to_string(&Weight::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::from_str::<Weight>("7").unwrap(), Weight::Finite(7));
        assert_eq!(serde_json::from_str::<Weight>("\"inf\"").unwrap(), Weight::Infinite);
        assert!(serde_json::from_str::<Weight>("-1").is_err());
        assert!(serde_json::from_str::<Weight>("\"x\"").is_err());
    }

    #[test]
    fn instance_validation() {
        let g = Graph::from_edges(Vec::<&str>::new(), [("s", "a"), ("a", "t")]).unwrap();
        assert!(Instance::unit(g.clone(), vertex_set(["s", "t"])).is_ok());
        assert!(matches!(Instance::unit(g.clone(), vertex_set(["s"])), Err(Error::InvalidInstance(_))));
        assert!(matches!(Instance::unit(g.clone(), vertex_set(["s", "a"])), Err(Error::InvalidInstance(_))));
        assert!(matches!(Instance::unit(g.clone(), vertex_set(["s", "z"])), Err(Error::UnknownVertex(_))));
        let missing = BTreeMap::new();
        assert!(Instance::new(g, vertex_set(["s", "t"]), missing).is_err());
    }
}
