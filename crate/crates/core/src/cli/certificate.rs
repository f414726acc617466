//! JSON certificates and a checker that re-validates them against an
//! instance without going through the solver's own checks.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{Half, Solution};
use crate::graph::VertexId;
use crate::instance::{Instance, Weight};
use crate::reduction::ForcedVertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Tdi,
    NotTdi,
    Unbounded,
}

/// `num / den` with `den` in `{1, 2}`; `num` may be `"inf"` when `den` is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueJson {
    pub num: Weight,
    pub den: u64,
}

impl ValueJson {
    pub fn whole(w: Weight) -> Self {
        ValueJson { num: w, den: 1 }
    }

    pub fn half(h: Half) -> Self {
        let (num, den) = h.num_den();
        ValueJson { num: Weight::Finite(num), den }
    }

    fn as_half(self) -> Option<Half> {
        Half::from_num_den(self.num.finite()?, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingEntryJson {
    pub path: Vec<VertexId>,
    pub multiplicity: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfPathJson {
    pub path: Vec<VertexId>,
    pub value: ValueJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractionalJson {
    pub odd_cycle: Vec<VertexId>,
    pub gap_weights: BTreeMap<VertexId, Weight>,
    pub half_paths: Vec<HalfPathJson>,
    pub half_cut: BTreeMap<VertexId, ValueJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcedJson {
    pub vertex: VertexId,
    pub pair: [VertexId; 2],
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub status: Status,
    pub value: ValueJson,
    pub packing: Vec<PackingEntryJson>,
    pub cut: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fractional: Option<FractionalJson>,
    pub forced: Vec<ForcedJson>,
}

fn forced_json(forced: &[ForcedVertex]) -> Vec<ForcedJson> {
    forced
        .iter()
        .map(|f| ForcedJson {
            vertex: f.vertex.clone(),
            pair: [f.terminal_pair.0.clone(), f.terminal_pair.1.clone()],
            weight: f.weight,
        })
        .collect()
}

impl CertificateJson {
    pub fn from_solution(sol: &Solution) -> Self {
        match sol {
            Solution::Optimal(opt) => CertificateJson {
                status: Status::Tdi,
                value: ValueJson::whole(opt.value),
                packing: opt
                    .packing
                    .entries
                    .iter()
                    .map(|e| PackingEntryJson { path: e.path.vertices().to_vec(), multiplicity: Weight::Finite(e.multiplicity) })
                    .collect(),
                cut: opt.cut.vertices.iter().cloned().collect(),
                fractional: None,
                forced: forced_json(&opt.forced),
            },
            Solution::Unbounded(w) => CertificateJson {
                status: Status::Unbounded,
                value: ValueJson::whole(Weight::Infinite),
                packing: vec![PackingEntryJson { path: w.path.vertices().to_vec(), multiplicity: Weight::Infinite }],
                cut: Vec::new(),
                fractional: None,
                forced: forced_json(&w.forced),
            },
            Solution::NotTdi(cert) => CertificateJson {
                status: Status::NotTdi,
                value: ValueJson::half(cert.value()),
                packing: Vec::new(),
                cut: Vec::new(),
                fractional: Some(FractionalJson {
                    odd_cycle: cert.odd_cycle.clone(),
                    gap_weights: cert.gap_weights.clone(),
                    half_paths: cert
                        .half_paths
                        .iter()
                        .map(|p| HalfPathJson { path: p.vertices().to_vec(), value: ValueJson::half(Half::HALF) })
                        .collect(),
                    half_cut: cert.half_cut.iter().map(|(v, &x)| (v.clone(), ValueJson::half(x))).collect(),
                }),
                forced: forced_json(&cert.forced),
            },
        }
    }
}

fn reject<T>(why: impl Into<String>) -> Result<T> {
    Err(Error::InternalInvariantViolation(format!("certificate rejected: {}", why.into())))
}

/// Validates `cert` against `inst`. Packing paths must be S-paths within
/// capacity, the cut must separate all terminals, and the two values must
/// match the stated value. For `not_tdi`, the same is checked for the
/// half-integral pair under the gap weights.
pub fn check_certificate(inst: &Instance, cert: &CertificateJson) -> Result<()> {
    match cert.status {
        Status::Tdi => check_integral(inst, cert),
        Status::Unbounded => check_unbounded(inst, cert),
        Status::NotTdi => check_fractional(inst, cert),
    }
}

fn check_path(inst: &Instance, path: &[VertexId]) -> Result<()> {
    let g = inst.graph();
    if path.len() < 3 {
        return reject(format!("path {path:?} is too short"));
    }
    let (first, last) = (&path[0], &path[path.len() - 1]);
    if first == last || !inst.is_terminal(first) || !inst.is_terminal(last) {
        return reject(format!("path {path:?} does not join two terminals"));
    }
    if path[1..path.len() - 1].iter().any(|v| inst.weight(v).is_none()) {
        return reject(format!("path {path:?} has a terminal or unknown vertex inside"));
    }
    if path.iter().collect::<BTreeSet<_>>().len() != path.len() {
        return reject(format!("path {path:?} repeats a vertex"));
    }
    if !path.windows(2).all(|e| g.has_edge(&e[0], &e[1])) {
        return reject(format!("path {path:?} uses a non-edge"));
    }
    Ok(())
}

/// Whether deleting `removed` leaves two terminals connected. Each search
/// stops at the first other terminal, so searches never overlap otherwise.
fn still_linked(inst: &Instance, removed: &BTreeSet<VertexId>) -> bool {
    let g = inst.graph();
    let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
    for s in inst.terminals() {
        seen.insert(s);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in g.neighbors(x).expect("present") {
                if removed.contains(y) || !seen.insert(y) {
                    continue;
                }
                if inst.is_terminal(y) {
                    return true;
                }
                queue.push_back(y);
            }
        }
    }
    false
}

fn check_integral(inst: &Instance, cert: &CertificateJson) -> Result<()> {
    if cert.fractional.is_some() || cert.value.den != 1 {
        return reject("integral status with a fractional part");
    }
    let Weight::Finite(value) = cert.value.num else {
        return reject("tdi status with infinite value");
    };
    let mut load: BTreeMap<&VertexId, u64> = BTreeMap::new();
    let mut total = 0u64;
    for e in &cert.packing {
        check_path(inst, &e.path)?;
        let Weight::Finite(m) = e.multiplicity else {
            return reject("infinite multiplicity in a finite packing");
        };
        if m == 0 {
            return reject("zero multiplicity");
        }
        total += m;
        for v in &e.path[1..e.path.len() - 1] {
            *load.entry(v).or_default() += m;
        }
    }
    for (v, l) in load {
        if Weight::Finite(l) > inst.weight(v).expect("checked") {
            return reject(format!("vertex `{v}` carries {l} paths"));
        }
    }
    let cut: BTreeSet<VertexId> = cert.cut.iter().cloned().collect();
    let mut cost = Weight::ZERO;
    for v in &cut {
        match inst.weight(v) {
            Some(w) => cost = cost + w,
            None => return reject(format!("cut vertex `{v}` is a terminal or unknown")),
        }
    }
    if still_linked(inst, &cut) {
        return reject("cut leaves two terminals connected");
    }
    if total != value || cost != Weight::Finite(value) {
        return reject(format!("packing {total}, cut {cost}, stated {value}"));
    }
    Ok(())
}

fn check_unbounded(inst: &Instance, cert: &CertificateJson) -> Result<()> {
    if cert.value != ValueJson::whole(Weight::Infinite) {
        return reject("unbounded status with a finite value");
    }
    let witness = cert.packing.iter().find(|e| e.multiplicity == Weight::Infinite);
    let Some(e) = witness else {
        return reject("no infinitely repeatable path");
    };
    check_path(inst, &e.path)?;
    if !e.path[1..e.path.len() - 1].iter().all(|v| inst.weight(v) == Some(Weight::Infinite)) {
        return reject("witness path has a finite-weight vertex");
    }
    Ok(())
}

fn check_fractional(inst: &Instance, cert: &CertificateJson) -> Result<()> {
    let Some(frac) = &cert.fractional else {
        return reject("not_tdi status without a fractional part");
    };
    let len = frac.odd_cycle.len() as u64;
    if len.is_multiple_of(2) || cert.value != ValueJson::half(Half(len)) {
        return reject("value is not half the length of an odd cycle");
    }
    let gap = inst.reweighted(frac.gap_weights.clone()).or_else(|e| reject(e.to_string()))?;
    let mut primal = 0u64;
    let mut load: BTreeMap<&VertexId, u64> = BTreeMap::new();
    for hp in &frac.half_paths {
        check_path(&gap, &hp.path)?;
        let Some(x) = hp.value.as_half() else {
            return reject("half-path value is not half-integral");
        };
        primal += x.0;
        for v in &hp.path[1..hp.path.len() - 1] {
            *load.entry(v).or_default() += x.0;
        }
    }
    for (v, halves) in load {
        if let Some(Weight::Finite(w)) = gap.weight(v) {
            if halves > 2 * w {
                return reject(format!("vertex `{v}` overloaded in the half packing"));
            }
        }
    }
    let mut x: BTreeMap<&VertexId, u64> = BTreeMap::new();
    let mut dual = 0u64;
    for (v, val) in &frac.half_cut {
        let Some(h) = val.as_half() else {
            return reject("half-cut value is not half-integral");
        };
        match gap.weight(v) {
            None => return reject(format!("half cut on terminal `{v}`")),
            Some(Weight::Infinite) if h.0 > 0 => return reject(format!("half cut on infinite-weight `{v}`")),
            Some(Weight::Infinite) => {}
            Some(Weight::Finite(w)) => dual += w * h.0,
        }
        x.insert(v, h.0);
    }
    if min_x_length(&gap, &x) < 2 {
        return reject("some S-path has x-length below 1");
    }
    if primal != len || dual != len {
        return reject(format!("primal {primal}/2, dual {dual}/2, stated {len}/2"));
    }
    Ok(())
}

/// Smallest `x`-length (in halves) of a path between two terminals.
fn min_x_length(inst: &Instance, x: &BTreeMap<&VertexId, u64>) -> u64 {
    let g = inst.graph();
    let cost = |v: &VertexId| if inst.is_terminal(v) { 0 } else { x.get(v).copied().unwrap_or(0) };
    let mut best = u64::MAX;
    for s in inst.terminals() {
        let mut dist: BTreeMap<&VertexId, u64> = BTreeMap::new();
        let mut heap = BinaryHeap::from([Reverse((0u64, s))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist.contains_key(v) {
                continue;
            }
            dist.insert(v, d);
            if v != s && inst.is_terminal(v) {
                best = best.min(d);
                continue;
            }
            for y in g.neighbors(v).expect("present") {
                if !dist.contains_key(y) {
                    heap.push(Reverse((d + cost(y), y)));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::solve;
    use crate::obstructions::{gen_net, gen_rocket};

    fn net() -> Instance {
        let (g, s) = gen_net();
        Instance::unit(g, s).unwrap()
    }

    #[test]
    fn net_certificate() {
        let inst = net();
        let cert = CertificateJson::from_solution(&solve(&inst).unwrap());
        assert_eq!(cert.status, Status::NotTdi);
        assert_eq!(cert.value, ValueJson { num: Weight::Finite(3), den: 2 });
        check_certificate(&inst, &cert).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        assert_eq!(serde_json::from_str::<CertificateJson>(&text).unwrap(), cert);
    }

    #[test]
    fn tampering_is_caught() {
        let (g, s) = gen_rocket();
        let inst = Instance::unit(g, s).unwrap();
        let cert = CertificateJson::from_solution(&solve(&inst).unwrap());
        check_certificate(&inst, &cert).unwrap();

        let mut short = cert.clone();
        short.fractional.as_mut().unwrap().half_paths.pop();
        assert!(check_certificate(&inst, &short).is_err());

        let mut cheap = cert.clone();
        let frac = cheap.fractional.as_mut().unwrap();
        let v = frac.odd_cycle[0].clone();
        frac.half_cut.remove(&v);
        assert!(check_certificate(&inst, &cheap).is_err());

        let two = crate::cli::format::parse_graph_file("e s a\ne a b\ne b t\ne s c\ne c d\ne d t\nt s\nt t\n").unwrap();
        let good = CertificateJson::from_solution(&solve(&two).unwrap());
        check_certificate(&two, &good).unwrap();
        let mut bad = good.clone();
        bad.cut.pop();
        assert!(check_certificate(&two, &bad).is_err());
        let mut bad = good.clone();
        bad.packing[0].multiplicity = Weight::Finite(2);
        assert!(check_certificate(&two, &bad).is_err());
    }

    #[test]
    fn unbounded_certificate() {
        let inst = crate::cli::format::parse_graph_file("v a inf\ne s a\ne a t\nt s\nt t\n").unwrap();
        let cert = CertificateJson::from_solution(&solve(&inst).unwrap());
        assert_eq!(cert.status, Status::Unbounded);
        check_certificate(&inst, &cert).unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["value"]["num"], "inf");
        assert_eq!(json["packing"][0]["multiplicity"], "inf");
    }
}
