//! Command-line surface. Exit codes: 0 affirmative, 1 negative with a
//! certificate, 2 error.

pub mod certificate;
pub mod format;

use std::collections::BTreeSet;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::solve;
use crate::graph::VertexId;
use crate::instance::{Instance, Weight};
use crate::obstructions::{gen_a_n, gen_net, gen_rocket, ObstructionSpec};
use crate::oracle::{brute, OracleConfig};
use crate::recognition::is_mader_mengerian;
use crate::reduction::{is_tdi, Verdict};

use certificate::{check_certificate, CertificateJson, PackingEntryJson};
use format::{write_graph_file, GraphFile};

#[derive(Debug, Parser)]
#[command(name = "spath-tdi", version, about = "Packing S-paths and vertex multicuts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the blocking system of (G, S) is TDI.
    Check(InstanceArgs),
    /// Certified max packing and min cut, or a half-integral gap certificate.
    Pack(InstanceArgs),
    /// Decide whether G is TDI for every independent terminal set.
    Recognize {
        #[arg(short = 'g', long = "graph", value_name = "FILE")]
        graph: String,
    },
    /// Write a generated instance as a graph file.
    Gen(GenArgs),
    /// Exhaustive optima for small instances.
    Oracle {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 16)]
        max_vertices: usize,
    },
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Graph file, or `-` for stdin.
    #[arg(short = 'g', long = "graph", value_name = "FILE")]
    graph: String,
    /// Comma-separated terminals; overrides the file's `t` lines.
    #[arg(short = 't', long = "terminals", value_delimiter = ',')]
    terminals: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Net,
    Rocket,
    A3,
}

#[derive(Debug, Args)]
struct GenArgs {
    kind: GenKind,
    /// Cycle length; must match the number of colors.
    #[arg(long)]
    len: Option<usize>,
    /// Color of each cycle vertex, numbered from 1.
    #[arg(long, value_delimiter = ',')]
    colors: Vec<usize>,
    /// Chords as `i-j` pairs of cycle indices.
    #[arg(long, value_delimiter = ',')]
    chords: Vec<String>,
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: impl std::fmt::Display) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

/// Runs the command line `args` (including the program name), reading `-`
/// files from `stdin`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command, stdin) {
        Ok(out) => out,
        Err(e) => Outcome::error(e),
    }
}

fn read_file(path: &str, stdin: &mut dyn Read) -> Result<GraphFile> {
    let mut text = String::new();
    let io = |e: std::io::Error| Error::InvalidInstance(format!("cannot read `{path}`: {e}"));
    if path == "-" {
        stdin.read_to_string(&mut text).map_err(io)?;
    } else {
        text = std::fs::read_to_string(path).map_err(io)?;
    }
    GraphFile::parse(&text)
}

fn load_instance(args: &InstanceArgs, stdin: &mut dyn Read) -> Result<Instance> {
    let file = read_file(&args.graph, stdin)?;
    let terminals: Option<BTreeSet<VertexId>> =
        args.terminals.as_ref().map(|ts| ts.iter().map(|t| VertexId::from(t.trim())).collect());
    file.to_instance(terminals.as_ref())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn names(vs: &[VertexId]) -> String {
    vs.iter().map(VertexId::as_str).collect::<Vec<_>>().join(" ")
}

fn dispatch(command: Command, stdin: &mut dyn Read) -> Result<Outcome> {
    match command {
        Command::Check(args) => {
            let inst = load_instance(&args, stdin)?;
            let decision = is_tdi(&inst);
            let (status, code) = if decision.tdi { ("tdi", 0) } else { ("not_tdi", 1) };
            let stderr = match &decision.auxiliary.verdict {
                Verdict::Bipartition { .. } => "TDI: auxiliary graph is bipartite\n".to_string(),
                Verdict::OddCycle(c) => format!("not TDI: odd cycle {} in the auxiliary graph\n", names(c)),
            };
            Ok(Outcome { code, stdout: json(&serde_json::json!({ "status": status })), stderr })
        }
        Command::Pack(args) => {
            let inst = load_instance(&args, stdin)?;
            let cert = CertificateJson::from_solution(&solve(&inst)?);
            check_certificate(&inst, &cert)?;
            let (code, stderr) = match cert.status {
                certificate::Status::Tdi => (0, format!("TDI: packing and cut of value {}\n", cert.value.num)),
                certificate::Status::Unbounded => (0, "TDI: unbounded, a path of infinite-weight vertices exists\n".into()),
                certificate::Status::NotTdi => (1, format!("not TDI: half-integral certificate of value {}/2\n", cert.value.num)),
            };
            Ok(Outcome { code, stdout: json(&cert), stderr })
        }
        Command::Recognize { graph } => {
            let file = read_file(&graph, stdin)?;
            let r = is_mader_mengerian(&file.graph);
            let witness = r.witness.as_ref().map(|(triple, aux)| {
                serde_json::json!({
                    "triple": triple,
                    "odd_cycle": aux.verdict.odd_cycle().unwrap_or_default(),
                })
            });
            let stderr = match &r.witness {
                None => "Mader-Mengerian\n".to_string(),
                Some((t, _)) => format!("not Mader-Mengerian: terminal set {} is not TDI\n", names(t)),
            };
            let out = serde_json::json!({ "mader_mengerian": r.is_mm, "witness": witness });
            Ok(Outcome { code: if r.is_mm { 0 } else { 1 }, stdout: json(&out), stderr })
        }
        Command::Gen(args) => {
            let (graph, terminals) = match args.kind {
                GenKind::Net => gen_net(),
                GenKind::Rocket => gen_rocket(),
                GenKind::A3 => gen_a_n(&a3_spec(&args)?),
            };
            let inst = Instance::unit(graph, terminals)?;
            Ok(Outcome { code: 0, stdout: write_graph_file(&inst), stderr: String::new() })
        }
        Command::Oracle { instance, max_vertices } => {
            let inst = load_instance(&instance, stdin)?;
            let cfg = OracleConfig { max_vertices, ..OracleConfig::default() };
            let r = brute(&inst, &cfg)?;
            let out = BruteJson {
                nu: r.nu,
                kappa: r.kappa,
                packing: r
                    .optimal_packing
                    .entries
                    .iter()
                    .map(|e| PackingEntryJson {
                        path: e.path.vertices().to_vec(),
                        multiplicity: if r.nu.is_infinite() { Weight::Infinite } else { Weight::Finite(e.multiplicity) },
                    })
                    .collect(),
                cut: r.optimal_cut.vertices.iter().cloned().collect(),
            };
            let code = if r.nu == r.kappa { 0 } else { 1 };
            Ok(Outcome { code, stdout: json(&out), stderr: format!("nu = {}, kappa = {}\n", r.nu, r.kappa) })
        }
    }
}

#[derive(Serialize)]
struct BruteJson {
    nu: Weight,
    kappa: Weight,
    packing: Vec<PackingEntryJson>,
    cut: Vec<VertexId>,
}

fn a3_spec(args: &GenArgs) -> Result<ObstructionSpec> {
    if args.colors.is_empty() {
        return Err(Error::InvalidSpec("`--colors` is required for a3".into()));
    }
    if let Some(len) = args.len {
        if len != args.colors.len() {
            return Err(Error::InvalidSpec(format!("--len {len} but {} colors given", args.colors.len())));
        }
    }
    let mut chords = Vec::new();
    for c in &args.chords {
        let parsed = c.split_once('-').and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)));
        chords.push(parsed.ok_or_else(|| Error::InvalidSpec(format!("chord `{c}` is not of the form i-j")))?);
    }
    let spec = ObstructionSpec::new(args.colors.clone(), chords)?;
    if spec.color_count() != 3 {
        return Err(Error::InvalidSpec(format!("a3 needs exactly 3 colors, got {}", spec.color_count())));
    }
    Ok(spec)
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let out = run(std::env::args_os(), &mut std::io::stdin());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> Outcome {
        let argv = std::iter::once("spath-tdi").chain(args.iter().copied());
        run(argv, &mut input.as_bytes())
    }

    fn net_text() -> String {
        call(&["gen", "net"], "").stdout
    }

    #[test]
    fn check_net() {
        let out = call(&["check", "-g", "-"], &net_text());
        assert_eq!(out.code, 1);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v, serde_json::json!({ "status": "not_tdi" }));
        let pair = call(&["check", "-g", "-", "-t", "a2,b2"], &net_text());
        assert_eq!(pair.code, 0);
    }

    #[test]
    fn pack_two_paths() {
        let text = "e s a\ne a b\ne b t\ne s c\ne c d\ne d t\nt s\nt t\n";
        let out = call(&["pack", "-g", "-"], text);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["status"], "tdi");
        assert_eq!(v["value"], serde_json::json!({ "num": 2, "den": 1 }));
    }

    #[test]
    fn recognize_path() {
        let text = "e p0 p1\ne p1 p2\ne p2 p3\ne p3 p4\ne p4 p5\n";
        assert_eq!(call(&["recognize", "-g", "-"], text).code, 0);
        let out = call(&["recognize", "-g", "-"], &net_text());
        assert_eq!(out.code, 1);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["witness"]["triple"], serde_json::json!(["a2", "b2", "c2"]));
    }

    #[test]
    fn gen_a3() {
        let out = call(&["gen", "a3", "--len", "5", "--colors", "1,2,1,2,3", "--chords", "0-2"], "");
        assert_eq!(out.code, 0, "{}", out.stderr);
        let inst = format::parse_graph_file(&out.stdout).unwrap();
        assert_eq!(inst.graph().vertex_count(), 8);
        assert!(!is_tdi(&inst).tdi);
        assert_eq!(call(&["gen", "a3", "--colors", "1,2,1,2"], "").code, 2);
        assert_eq!(call(&["gen", "a3", "--len", "3", "--colors", "1,2,1,2,3"], "").code, 2);
        assert_eq!(call(&["gen", "a3", "--colors", "1,2,3", "--chords", "x"], "").code, 2);
    }

    #[test]
    fn oracle_net() {
        let out = call(&["oracle", "-g", "-"], &net_text());
        assert_eq!(out.code, 1);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!((v["nu"].as_u64(), v["kappa"].as_u64()), (Some(1), Some(2)));
        let small = call(&["oracle", "-g", "-", "--max-vertices", "4"], &net_text());
        assert_eq!(small.code, 2);
    }

    #[test]
    fn errors_exit_two() {
        assert_eq!(call(&["check", "-g", "-"], "e a a\n").code, 2);
        assert_eq!(call(&["check", "-g", "/nonexistent/file"], "").code, 2);
        assert_eq!(call(&["frobnicate"], "").code, 2);
        assert_eq!(call(&["check"], "").code, 2);
        assert_eq!(call(&["check", "-g", "-", "-t", "a1,zz"], &net_text()).code, 2);
        assert_eq!(call(&["--help"], "").code, 0);
    }
}
