//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! The exhaustive skew-minor check runs only with `--slow`:
//! `cargo test --release --test acceptance -- --slow`.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use spath_tdi::cli::certificate::{check_certificate, CertificateJson, Status, ValueJson};
use spath_tdi::cli::format::parse_graph_file;
use spath_tdi::cli::run;
use spath_tdi::flow::{solve, Solution};
use spath_tdi::obstructions::{a3_specs, gen_a_n, gen_net, gen_rocket, proper_colorings, ObstructionSpec};
use spath_tdi::oracle::{brute, connected_graphs, skew_minor_contains, skew_minor_contains_any, OracleConfig};
use spath_tdi::recognition::{check_minimal, is_mader_mengerian};
use spath_tdi::reduction::is_tdi;
use spath_tdi::{Graph, Instance, Weight};

use common::*;

const NET_BUDGET: Duration = Duration::from_secs(1);
const MENGER_BUDGET: Duration = Duration::from_secs(30);
const EQUIVALENCE_BUDGET: Duration = Duration::from_secs(600);
const FAMILY_BUDGET: Duration = Duration::from_secs(120);
const RECOGNIZE_BUDGET: Duration = Duration::from_secs(10);

type Verdict = Result<String, String>;

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < budget, || format!("took {took:.2?}, budget {budget:?}"))
}

fn cli(args: &[&str], input: &str) -> spath_tdi::cli::Outcome {
    run(std::iter::once("spath-tdi").chain(args.iter().copied()), &mut input.as_bytes())
}

fn net_reproduction() -> Verdict {
    let start = Instant::now();
    let text = cli(&["gen", "net"], "").stdout;
    let oracle = cli(&["oracle", "-g", "-"], &text);
    let v: serde_json::Value = serde_json::from_str(&oracle.stdout).map_err(|e| e.to_string())?;
    ensure(v["nu"] == 1 && v["kappa"] == 2 && oracle.code == 1, || format!("oracle gave {v}"))?;

    let pack = cli(&["pack", "-g", "-"], &text);
    let cert: CertificateJson = serde_json::from_str(&pack.stdout).map_err(|e| e.to_string())?;
    ensure(pack.code == 1 && cert.status == Status::NotTdi, || format!("pack exit {}", pack.code))?;
    ensure(cert.value == ValueJson { num: Weight::Finite(3), den: 2 }, || format!("value {:?}", cert.value))?;
    let inst = parse_graph_file(&text).map_err(|e| e.to_string())?;
    check_certificate(&inst, &cert).map_err(|e| e.to_string())?;
    within(start, NET_BUDGET)?;
    Ok("nu=1 kappa=2, fractional value 3/2 verified".into())
}

fn menger_base_case() -> Verdict {
    let start = Instant::now();
    let mut rng = rng(2);
    let values = [Weight::ZERO, Weight::ONE, Weight::Finite(2), Weight::Infinite];
    let cfg = OracleConfig::default();
    let mut done = 0;
    while done < 200 {
        let n = rng.gen_range(3..=10);
        let p = rng.gen_range(0.1..0.5);
        let g = random_connected_graph(&mut rng, n, p);
        let pairs = independent_sets(&g, 2);
        if pairs.is_empty() {
            continue;
        }
        let s = pairs[rng.gen_range(0..pairs.len())].clone();
        let inst = random_weights(&mut rng, &Instance::unit(g, s).unwrap(), &values);
        ensure(is_tdi(&inst).tdi, || format!("two terminals not TDI: {inst:?}"))?;
        let r = brute(&inst, &cfg).map_err(|e| e.to_string())?;
        let solved = solved_value(&inst);
        ensure(solved == Some(r.nu) && r.nu == r.kappa, || {
            format!("solver {solved:?}, nu {}, kappa {} on {inst:?}", r.nu, r.kappa)
        })?;
        done += 1;
    }
    within(start, MENGER_BUDGET)?;
    Ok(format!("{done} instances, solver = nu = kappa"))
}

/// Aux bipartite iff nu = kappa for every weighting in {0,1,inf}; the gap
/// weights of a non-bipartite instance must give nu < kappa.
fn bipartite_iff_integral() -> Verdict {
    let start = Instant::now();
    let graphs = connected_up_to(7);
    let cases: Vec<(Graph, BTreeSet<_>)> =
        graphs.iter().flat_map(|g| independent_sets(g, 3).into_iter().map(move |s| (g.clone(), s))).collect();
    let values = [Weight::ZERO, Weight::ONE, Weight::Infinite];
    let cfg = OracleConfig::default();
    let outcomes: Vec<Result<(bool, usize), String>> = cases
        .par_iter()
        .map(|(g, s)| {
            let unit = Instance::unit(g.clone(), s.clone()).unwrap();
            let bipartite = is_tdi(&unit).auxiliary.verdict.is_bipartite();
            let mut gap_seen = false;
            let weightings = all_weightings(&unit, &values);
            for w in &weightings {
                let inst = unit.reweighted(w.clone()).unwrap();
                let r = brute(&inst, &cfg).map_err(|e| e.to_string())?;
                if r.nu < r.kappa {
                    gap_seen = true;
                }
                if bipartite {
                    let solved = solved_value(&inst);
                    ensure(r.nu == r.kappa && solved == Some(r.nu), || {
                        format!("bipartite but nu {} kappa {} solver {solved:?} on {inst:?}", r.nu, r.kappa)
                    })?;
                }
            }
            if !bipartite {
                let Solution::NotTdi(cert) = solve(&unit).map_err(|e| e.to_string())? else {
                    return Err(format!("no gap certificate for {unit:?}"));
                };
                let gap = cert.gap_instance(&unit).map_err(|e| e.to_string())?;
                let r = brute(&gap, &cfg).map_err(|e| e.to_string())?;
                ensure(r.nu < r.kappa && gap_seen, || format!("gap weights give nu {} kappa {} on {unit:?}", r.nu, r.kappa))?;
            }
            Ok((bipartite, weightings.len()))
        })
        .collect();
    let mut bipartite = 0;
    let mut weightings = 0;
    for o in outcomes {
        let (b, w) = o?;
        bipartite += b as usize;
        weightings += w;
    }
    within(start, EQUIVALENCE_BUDGET)?;
    Ok(format!(
        "{} graphs, {} instances ({bipartite} bipartite), {weightings} weightings, zero exceptions",
        graphs.len(),
        cases.len()
    ))
}

fn triples_suffice() -> Verdict {
    let graphs = connected_up_to(7);
    let failures: Vec<String> = graphs
        .par_iter()
        .filter_map(|g| {
            let mm = is_mader_mengerian(g).is_mm;
            let all = independent_sets_from_two(g).into_iter().all(|s| is_tdi(&Instance::unit(g.clone(), s).unwrap()).tdi);
            (mm != all).then(|| format!("{g:?}: recognition {mm}, all sets {all}"))
        })
        .collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    let non_mm = graphs.iter().filter(|g| !is_mader_mengerian(g).is_mm).count();
    Ok(format!("{} graphs ({non_mm} not Mader-Mengerian), zero exceptions", graphs.len()))
}

fn obstruction_family() -> Verdict {
    let start = Instant::now();
    let mut counts = Vec::new();
    for len in [3, 5, 7, 9] {
        let specs: Vec<ObstructionSpec> = a3_specs(len).collect();
        let bad = specs
            .par_iter()
            .find_any(|spec| {
                let (g, s) = gen_a_n(spec);
                is_tdi(&Instance::unit(g, s).unwrap()).tdi
            })
            .cloned();
        ensure(bad.is_none(), || format!("TDI family member {bad:?}"))?;
        counts.push(format!("L={len}: {}", specs.len()));
    }
    let mut minimal = 0;
    for len in [3, 5] {
        for colors in proper_colorings(len, 3) {
            let spec = ObstructionSpec::with_complete_classes(colors).unwrap();
            ensure(check_minimal(&gen_a_n(&spec).0), || format!("not minimal: {spec:?}"))?;
            minimal += 1;
        }
    }
    within(start, FAMILY_BUDGET)?;
    Ok(format!("non-TDI for all specs ({}), {minimal} complete-class members minimal", counts.join(", ")))
}

fn interval_graphs() -> Verdict {
    let mut rng = rng(6);
    for k in 0..100 {
        let n = rng.gen_range(3..=10);
        let g = random_interval_graph(&mut rng, n);
        ensure(is_mader_mengerian(&g).is_mm, || format!("interval graph {k} not Mader-Mengerian: {g:?}"))?;
    }
    Ok("100 interval graphs, all Mader-Mengerian".into())
}

fn minor_closure() -> Verdict {
    let mut rng = rng(7);
    let mut found = 0;
    let mut minors = 0;
    while found < 100 {
        let n = rng.gen_range(4..=8);
        let p = rng.gen_range(0.15..0.7);
        let g = random_graph(&mut rng, n, p);
        if !is_mader_mengerian(&g).is_mm {
            continue;
        }
        for v in g.vertices() {
            for m in [g.delete_vertex(v).unwrap(), g.contract_vertex(v).unwrap()] {
                ensure(is_mader_mengerian(&m).is_mm, || format!("{m:?} is a failing minor of {g:?}"))?;
                minors += 1;
            }
        }
        found += 1;
    }
    Ok(format!("100 Mader-Mengerian graphs, {minors} one-step minors, all Mader-Mengerian"))
}

fn rocket() -> Verdict {
    let (g, s) = gen_rocket();
    let inst = Instance::unit(g.clone(), s).unwrap();
    let d = is_tdi(&inst);
    let cycle = d.auxiliary.verdict.odd_cycle().map(<[_]>::len);
    ensure(!d.tdi && cycle == Some(5), || format!("verdict {:?}", d.auxiliary.verdict))?;
    let r = brute(&inst, &OracleConfig::default()).map_err(|e| e.to_string())?;
    ensure(r.nu == Weight::Finite(2) && r.kappa == Weight::Finite(3), || format!("nu {} kappa {}", r.nu, r.kappa))?;
    let contains = skew_minor_contains(&g, &gen_net().0, &OracleConfig::default()).map_err(|e| e.to_string())?;
    ensure(!contains, || "rocket contains the net".into())?;
    Ok("odd auxiliary 5-cycle, nu=2 kappa=3, no net skew minor".into())
}

/// Every connected non-Mader-Mengerian graph on at most 8 vertices has the
/// net or the rocket as a skew minor.
fn net_or_rocket() -> Verdict {
    let obstructions = [gen_net().0, gen_rocket().0];
    let cfg = OracleConfig::default();
    let mut checked = 0;
    for n in 1..=8 {
        let graphs: Vec<Graph> = connected_graphs(n).into_iter().map(|s| s.to_graph()).collect();
        let failing: Vec<&Graph> = graphs.par_iter().filter(|g| !is_mader_mengerian(g).is_mm).collect();
        let missing = failing
            .par_iter()
            .find_any(|g| !skew_minor_contains_any(g, &obstructions, &cfg).expect("within limits"))
            .map(|g| format!("{g:?}"));
        ensure(missing.is_none(), || format!("no net or rocket in {}", missing.clone().unwrap_or_default()))?;
        checked += failing.len();
    }
    Ok(format!("{checked} non-Mader-Mengerian connected graphs, each contains net or rocket"))
}

fn recognize_performance() -> Verdict {
    let g = random_graph_with_edges(&mut rng(9), 50, 200);
    let text = graph_text(&g);
    let start = Instant::now();
    let out = cli(&["recognize", "-g", "-"], &text);
    let took = start.elapsed();
    ensure(out.code == 0 || out.code == 1, || out.stderr.clone())?;
    within(start, RECOGNIZE_BUDGET)?;
    Ok(format!("50 vertices, 200 edges, exit {} in {took:.2?}", out.code))
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    slow: bool,
    run: fn() -> Verdict,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: "AC1", title: "net reproduction", slow: false, run: net_reproduction },
    Criterion { id: "AC2", title: "two-terminal base case", slow: false, run: menger_base_case },
    Criterion { id: "AC3", title: "bipartite auxiliary graph iff integral optima", slow: false, run: bipartite_iff_integral },
    Criterion { id: "AC4", title: "triples suffice for recognition", slow: false, run: triples_suffice },
    Criterion { id: "AC5", title: "obstruction family", slow: false, run: obstruction_family },
    Criterion { id: "AC6", title: "interval graphs", slow: false, run: interval_graphs },
    Criterion { id: "AC7", title: "minor closure", slow: false, run: minor_closure },
    Criterion { id: "AC8", title: "rocket", slow: false, run: rocket },
    Criterion { id: "AC8-slow", title: "net or rocket skew minor, up to 8 vertices", slow: true, run: net_or_rocket },
    Criterion { id: "AC9", title: "recognition performance", slow: false, run: recognize_performance },
];

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let slow = args.iter().any(|a| a == "--slow");
    let filters: Vec<&String> = args.iter().filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in CRITERIA {
        if !filters.is_empty() && !filters.iter().any(|f| c.id.contains(f.as_str())) {
            continue;
        }
        if c.slow && !slow {
            println!("SKIP {} {} (pass --slow)", c.id, c.title);
            continue;
        }
        let start = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS {} {}: {detail} [{took:.2?}]", c.id, c.title),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {}: {why} [{took:.2?}]", c.id, c.title);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
