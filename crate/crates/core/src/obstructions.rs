//! Generators for the net, the rocket and the odd-cycle obstruction family.
//!
//! A family member is an odd cycle `v0 .. v{L-1}` whose vertices are colored
//! with `1..=n` (consecutive vertices differ), one terminal `r{c}` per color
//! adjacent to every cycle vertex of that color, and optional chords between
//! same-colored cycle vertices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{vertex_set, Graph, VertexId};

/// The net: triangle `a1 b1 c1` with pendant terminals `a2 b2 c2`.
pub fn gen_net() -> (Graph, BTreeSet<VertexId>) {
    let g = Graph::from_edges(
        Vec::<&str>::new(),
        [("a1", "b1"), ("b1", "c1"), ("c1", "a1"), ("a1", "a2"), ("b1", "b2"), ("c1", "c2")],
    )
    .expect("static edge list");
    (g, vertex_set(["a2", "b2", "c2"]))
}

/// The rocket: 5-cycle `a b d c e`, pendant `h` on `a`, `f` joined to `b`
/// and `c`, `g` joined to `d` and `e`. Terminals `{f, g, h}`.
pub fn gen_rocket() -> (Graph, BTreeSet<VertexId>) {
    let g = Graph::from_edges(
        Vec::<&str>::new(),
        [
            ("a", "b"), ("b", "d"), ("d", "c"), ("c", "e"), ("e", "a"),
            ("a", "h"), ("b", "f"), ("f", "c"), ("d", "g"), ("g", "e"),
        ],
    )
    .expect("static edge list");
    (g, vertex_set(["f", "g", "h"]))
}

/// Parameters of one family member. Colors are `1..=n`; chords are pairs of
/// cycle indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObstructionSpec {
    colors: Vec<usize>,
    chords: BTreeSet<(usize, usize)>,
    color_count: usize,
}

impl ObstructionSpec {
    pub fn new(colors: Vec<usize>, chords: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let len = colors.len();
        if len < 3 || len.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!("cycle length must be odd and at least 3, got {len}")));
        }
        let color_count = colors.iter().copied().max().unwrap_or(0);
        if colors.contains(&0) {
            return Err(Error::InvalidSpec("colors are numbered from 1".into()));
        }
        let used: BTreeSet<usize> = colors.iter().copied().collect();
        if used.len() != color_count {
            return Err(Error::InvalidSpec(format!("colors must be exactly 1..={color_count}")));
        }
        for i in 0..len {
            if colors[i] == colors[(i + 1) % len] {
                return Err(Error::InvalidSpec(format!("cycle vertices {i} and {} share a color", (i + 1) % len)));
            }
        }
        let mut normalized = BTreeSet::new();
        for (i, j) in chords {
            let (i, j) = (i.min(j), i.max(j));
            if j >= len {
                return Err(Error::InvalidSpec(format!("chord {i}-{j} out of range")));
            }
            if i == j || j - i == 1 || (i == 0 && j == len - 1) {
                return Err(Error::InvalidSpec(format!("chord {i}-{j} joins consecutive cycle vertices")));
            }
            if colors[i] != colors[j] {
                return Err(Error::InvalidSpec(format!("chord {i}-{j} joins different colors")));
            }
            normalized.insert((i, j));
        }
        Ok(ObstructionSpec { colors, chords: normalized, color_count })
    }

    /// Every same-colored pair becomes a chord, so each color class induces
    /// a clique.
    pub fn with_complete_classes(colors: Vec<usize>) -> Result<Self> {
        let chords = same_color_pairs(&colors);
        Self::new(colors, chords)
    }

    pub fn cycle_length(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn chords(&self) -> &BTreeSet<(usize, usize)> {
        &self.chords
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }
}

fn same_color_pairs(colors: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..colors.len() {
        for j in i + 1..colors.len() {
            if colors[i] == colors[j] {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn cycle_vertex(i: usize) -> VertexId {
    VertexId::from(format!("v{i}"))
}

pub fn representant(color: usize) -> VertexId {
    VertexId::from(format!("r{color}"))
}

/// Builds the graph of `spec` and its terminal set `{r1, .., rn}`.
pub fn gen_a_n(spec: &ObstructionSpec) -> (Graph, BTreeSet<VertexId>) {
    let len = spec.cycle_length();
    let mut g = Graph::new();
    let terminals: BTreeSet<VertexId> = (1..=spec.color_count).map(representant).collect();
    for t in &terminals {
        g.add_vertex(t.clone());
    }
    for i in 0..len {
        g.add_edge(cycle_vertex(i), cycle_vertex((i + 1) % len)).expect("distinct");
        g.add_edge(cycle_vertex(i), representant(spec.colors[i])).expect("distinct");
    }
    for &(i, j) in &spec.chords {
        g.add_edge(cycle_vertex(i), cycle_vertex(j)).expect("distinct");
    }
    (g, terminals)
}

/// All proper cyclic colorings of a cycle of length `len` using each of the
/// colors `1..=n` at least once, in lexicographic order.
pub fn proper_colorings(len: usize, n: usize) -> Vec<Vec<usize>> {
    fn extend(len: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            let closes = cur[len - 1] != cur[0];
            let all_used = (1..=n).all(|c| cur.contains(&c));
            if closes && all_used {
                out.push(cur.clone());
            }
            return;
        }
        for c in 1..=n {
            if cur.last() != Some(&c) {
                cur.push(c);
                extend(len, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if len > 0 {
        extend(len, n, &mut Vec::with_capacity(len), &mut out);
    }
    out
}

/// Every valid three-color spec of cycle length `len`: all colorings and
/// all subsets of same-color chords.
pub fn a3_specs(len: usize) -> impl Iterator<Item = ObstructionSpec> {
    proper_colorings(len, 3).into_iter().flat_map(|colors| {
        let pairs = same_color_pairs(&colors);
        (0u64..1 << pairs.len()).map(move |mask| {
            let chords = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p);
            ObstructionSpec::new(colors.clone(), chords).expect("valid by construction")
        })
    })
}
