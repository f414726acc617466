#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spath_tdi::flow::{solve, Solution};
use spath_tdi::oracle::connected_graphs;
use spath_tdi::{Graph, Instance, VertexId, Weight};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn name(i: usize) -> VertexId {
    VertexId::from(format!("x{i}"))
}

/// G(n, p) on `x0 .. x{n-1}`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(name(i));
        for j in 0..i {
            if rng.gen_bool(p) {
                g.add_edge(name(j), name(i)).unwrap();
            }
        }
    }
    g
}

/// A random spanning tree plus independent extra edges.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = random_graph(rng, n, p);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        g.add_edge(name(order[k]), name(parent)).unwrap();
    }
    g
}

/// Graph with exactly `m` edges chosen uniformly.
pub fn random_graph_with_edges(rng: &mut impl Rng, n: usize, m: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(name(i));
    }
    for &(i, j) in &pairs[..m] {
        g.add_edge(name(i), name(j)).unwrap();
    }
    g
}

/// Intersection graph of random closed intervals with integer ends.
pub fn random_interval_graph(rng: &mut impl Rng, n: usize) -> Graph {
    let intervals: Vec<(u32, u32)> = (0..n)
        .map(|_| {
            let a = rng.gen_range(0..30);
            (a, a + rng.gen_range(0..8))
        })
        .collect();
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(name(i));
        for j in 0..i {
            let ((a, b), (c, d)) = (intervals[i], intervals[j]);
            if a <= d && c <= b {
                g.add_edge(name(j), name(i)).unwrap();
            }
        }
    }
    g
}

/// Every connected graph on `1..=max_n` vertices, up to isomorphism.
pub fn connected_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(|n| connected_graphs(n).into_iter().map(|s| s.to_graph())).collect()
}

/// Independent sets of `g` with exactly `k` vertices, in lexicographic order.
pub fn independent_sets(g: &Graph, k: usize) -> Vec<BTreeSet<VertexId>> {
    fn extend(g: &Graph, vs: &[VertexId], from: usize, k: usize, cur: &mut Vec<VertexId>, out: &mut Vec<BTreeSet<VertexId>>) {
        if cur.len() == k {
            out.push(cur.iter().cloned().collect());
            return;
        }
        for i in from..vs.len() {
            if cur.iter().all(|u| !g.has_edge(u, &vs[i])) {
                cur.push(vs[i].clone());
                extend(g, vs, i + 1, k, cur, out);
                cur.pop();
            }
        }
    }
    let vs: Vec<VertexId> = g.vertices().cloned().collect();
    let mut out = Vec::new();
    extend(g, &vs, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Every independent set with at least two vertices.
pub fn independent_sets_from_two(g: &Graph) -> Vec<BTreeSet<VertexId>> {
    (2..=g.vertex_count()).flat_map(|k| independent_sets(g, k)).collect()
}

/// Every assignment of `values` to the non-terminals of `inst`.
pub fn all_weightings(inst: &Instance, values: &[Weight]) -> Vec<BTreeMap<VertexId, Weight>> {
    let vs: Vec<VertexId> = inst.non_terminals().cloned().collect();
    let mut out = vec![BTreeMap::new()];
    for v in vs {
        out = out
            .into_iter()
            .flat_map(|m| {
                let v = v.clone();
                values.iter().map(move |&w| {
                    let mut m = m.clone();
                    m.insert(v.clone(), w);
                    m
                })
            })
            .collect();
    }
    out
}

pub fn random_weights(rng: &mut impl Rng, inst: &Instance, values: &[Weight]) -> Instance {
    let weights = inst.non_terminals().map(|v| (v.clone(), *values.choose(rng).unwrap())).collect();
    inst.reweighted(weights).unwrap()
}

/// Optimum value from the solver; `None` for non-TDI instances.
pub fn solved_value(inst: &Instance) -> Option<Weight> {
    match solve(inst).expect("solver succeeds") {
        Solution::Optimal(opt) => Some(opt.value),
        Solution::Unbounded(_) => Some(Weight::Infinite),
        Solution::NotTdi(_) => None,
    }
}

/// Graph file text without terminals.
pub fn graph_text(g: &Graph) -> String {
    let mut out: String = g.vertices().map(|v| format!("v {v}\n")).collect();
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}
