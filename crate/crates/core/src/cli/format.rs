//! Line-based graph files.
//!
//! ```text
//! # comment
//! v <name> [<weight>|inf]
//! e <u> <v>
//! t <name>
//! ```
//!
//! Names are `[A-Za-z0-9_]+`, the default weight is 1, edges declare their
//! ends implicitly, and terminal weights are ignored.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::instance::{Instance, Weight};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    /// Explicit weights from `v` lines.
    pub weights: BTreeMap<VertexId, Weight>,
    pub terminals: BTreeSet<VertexId>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<GraphFile> {
        let mut file = GraphFile::default();
        let mut declared = BTreeSet::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let fail = |reason: String| Error::Parse { line, reason };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            let name = |i: usize| -> Result<VertexId> {
                let s = tokens[i];
                if valid_name(s) {
                    Ok(VertexId::from(s))
                } else {
                    Err(fail(format!("invalid vertex name `{s}`")))
                }
            };
            match (tokens[0], tokens.len()) {
                ("v", 2 | 3) => {
                    let v = name(1)?;
                    if !declared.insert(v.clone()) {
                        return Err(fail(format!("vertex `{v}` declared twice")));
                    }
                    if let Some(w) = tokens.get(2) {
                        file.weights.insert(v.clone(), w.parse().map_err(fail)?);
                    }
                    file.graph.add_vertex(v);
                }
                ("e", 3) => {
                    let (u, v) = (name(1)?, name(2)?);
                    if u == v {
                        return Err(fail(format!("self-loop on `{u}`")));
                    }
                    if file.graph.has_edge(&u, &v) {
                        return Err(fail(format!("duplicate edge `{u}`-`{v}`")));
                    }
                    file.graph.add_edge(u, v)?;
                }
                ("t", 2) => {
                    let t = name(1)?;
                    if !file.terminals.insert(t.clone()) {
                        return Err(fail(format!("terminal `{t}` listed twice")));
                    }
                    file.graph.add_vertex(t);
                }
                ("v" | "e" | "t", n) => return Err(fail(format!("wrong number of fields ({n}) for `{}`", tokens[0]))),
                (other, _) => return Err(fail(format!("unknown directive `{other}`"))),
            }
        }
        Ok(file)
    }

    /// The instance with the file's terminals, or `terminals` if given.
    pub fn to_instance(&self, terminals: Option<&BTreeSet<VertexId>>) -> Result<Instance> {
        let terminals = terminals.unwrap_or(&self.terminals).clone();
        let weights = self
            .graph
            .vertices()
            .filter(|v| !terminals.contains(*v))
            .map(|v| (v.clone(), self.weights.get(v).copied().unwrap_or(Weight::ONE)))
            .collect();
        Instance::new(self.graph.clone(), terminals, weights)
    }
}

pub fn parse_graph_file(text: &str) -> Result<Instance> {
    GraphFile::parse(text)?.to_instance(None)
}

/// Inverse of [`parse_graph_file`].
pub fn write_graph_file(inst: &Instance) -> String {
    let mut out = String::new();
    for v in inst.graph().vertices() {
        match inst.weight(v) {
            Some(w) => out.push_str(&format!("v {v} {w}\n")),
            None => out.push_str(&format!("v {v}\n")),
        }
    }
    for (u, v) in inst.graph().edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    for t in inst.terminals() {
        out.push_str(&format!("t {t}\n"));
    }
    out
}
