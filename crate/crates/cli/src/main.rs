//! `planmod`: solve instances, generate graphs, and run the check batteries.
//!
//! Exit codes are shared by every subcommand: 0 for YES or all checks
//! passing, 1 for NO or a failed check, 2 for errors and exhausted caps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use planmod::graph::grid::{make_grid, make_triangulated_grid};
use planmod::logic::{parse_sentence, Formula, GaifmanSentence};
use planmod::modification::{ModificationSet, Operation, SizeMode};
use planmod::signatures::Parameters;
use planmod::solver::star::k5_star;
use planmod::solver::{solve_oracle, solve_pipeline, Caps, Instance, PipelineConfig, Sentence, TraceStep};
use planmod::suites::{self, CheckReport};
use planmod::{Error, Graph, VertexSet};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "planmod", version, about = "Planarity-targeted graph modification under first-order constraints")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide an instance with the reduction pipeline or the brute-force oracle.
    Solve(Box<SolveArgs>),
    /// Write a generated graph as JSON (or DOT).
    Gen(GenArgs),
    /// Run a check battery and print a summary table.
    Check(CheckArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Graph file: JSON {"vertices", "edges"}, or DOT when the name ends in .dot.
    graph: PathBuf,
    #[arg(long, default_value = "vr", value_parser = parse_op)]
    op: Operation,
    #[arg(short = 'k', default_value_t = 1)]
    k: usize,
    /// First-order sentence; "true" and "false" also work with the pipeline.
    #[arg(long, conflicts_with = "gaifman")]
    phi: Option<String>,
    /// Gaifman sentence in JSON.
    #[arg(long)]
    gaifman: Option<PathBuf>,
    /// JSON array of annotated vertices; every vertex when absent.
    #[arg(long)]
    annotated: Option<PathBuf>,
    /// Exhaustive search instead of the pipeline.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    no_cross_check: bool,
    #[arg(long, default_value = "at-most", value_parser = parse_size_mode)]
    size_mode: SizeMode,
    #[arg(long)]
    rho_hat: Option<usize>,
    #[arg(long)]
    w_hat: Option<usize>,
    #[arg(long)]
    q_hat: Option<usize>,
    #[arg(long)]
    d_hat: Option<usize>,
    #[arg(long)]
    c1: Option<usize>,
    #[arg(long)]
    c2: Option<usize>,
    /// Most modification sets any exhaustive search may enumerate.
    #[arg(long)]
    cap_enum: Option<u64>,
    /// Most vertices handed to the exact treewidth DP.
    #[arg(long)]
    cap_treewidth: Option<usize>,
    /// Node budget of wall and star searches.
    #[arg(long)]
    cap_wall_search: Option<u64>,
    /// Most vertices of a compass whose characteristic is computed.
    #[arg(long)]
    cap_compass: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock times (reports then differ between runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Wall,
    K5star,
    TriGrid,
    Grid,
    Annulus,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long, default_value_t = 7)]
    height: u32,
    /// Each wall edge gets 0..=this many subdivision vertices.
    #[arg(long, default_value_t = 1)]
    max_subdivision: u32,
    /// Number of K4 copies of a star.
    #[arg(short = 'r', default_value_t = 2)]
    copies: usize,
    /// Grid width.
    #[arg(short = 'k', default_value_t = 5)]
    k: u32,
    /// Grid height; the width when absent.
    #[arg(long)]
    rows: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// locality, gluing, scattered, decomposition, sig-oracle, pipeline-vs-oracle or all.
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Corpus size of each battery.
    #[arg(short = 'n')]
    n: Option<usize>,
    /// Batteries not started within this time are skipped, e.g. "60s".
    #[arg(long, value_parser = humantime::parse_duration)]
    budget: Option<Duration>,
    /// JSON report destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_op(s: &str) -> Result<Operation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_size_mode(s: &str) -> Result<SizeMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// An error that ends the run with exit code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "dot") { Graph::from_dot(&text) } else { Graph::from_json(&text) };
    parsed.map_err(|e| Failure(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct InstanceEcho {
    digest: String,
    n: usize,
    m: usize,
    annotated: usize,
    op: Operation,
    k: usize,
    phi: String,
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    #[serde(flatten)]
    pipeline: &'a PipelineConfig,
    seed: u64,
}

#[derive(Serialize)]
struct RunReport<'a> {
    instance: InstanceEcho,
    mode: &'static str,
    answer: Option<&'static str>,
    witness: Option<ModificationSet>,
    trace: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<Parameters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    config: ConfigEcho<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    millis: Option<u64>,
}

fn config_of(a: &SolveArgs) -> PipelineConfig {
    let d = PipelineConfig::default();
    let caps = Caps {
        enumeration: a.cap_enum.unwrap_or(d.caps.enumeration),
        treewidth: a.cap_treewidth.unwrap_or(d.caps.treewidth),
        search_nodes: a.cap_wall_search.unwrap_or(d.caps.search_nodes),
        compass_vertices: a.cap_compass.unwrap_or(d.caps.compass_vertices),
        ..d.caps
    };
    PipelineConfig {
        c1: a.c1.unwrap_or(d.c1),
        c2: a.c2.unwrap_or(d.c2),
        rho_hat: a.rho_hat.unwrap_or(d.rho_hat),
        w_hat: a.w_hat.unwrap_or(d.w_hat),
        q_hat: a.q_hat.unwrap_or(d.q_hat),
        d_hat: a.d_hat.or(d.d_hat),
        caps,
        size_mode: a.size_mode,
        cross_check: !a.no_cross_check,
        timings: a.timings,
        ..d
    }
}

fn digest(g: &Graph, r: &VertexSet, op: Operation, k: usize, phi: &str) -> String {
    let mut h = Sha256::new();
    h.update(g.to_json());
    h.update(serde_json::to_string(r).expect("vertex sets serialise"));
    h.update(format!("{op}|{k}|{phi}"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn solve(a: &SolveArgs) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let graph = load_graph(&a.graph)?;
    let (phi, phi_text) = match (&a.phi, &a.gaifman) {
        (_, Some(path)) => {
            let text = read(path)?;
            let g = GaifmanSentence::from_json(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            let canonical = g.to_json();
            (Sentence::Gaifman(g), canonical)
        }
        (Some(text), None) => (Sentence::Fol(parse_sentence(text)?), text.clone()),
        (None, None) => (Sentence::Fol(Formula::True), "true".into()),
    };
    let mut inst = Instance::new(graph, a.k, a.op, phi);
    if let Some(path) = &a.annotated {
        let r: VertexSet =
            serde_json::from_str(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        inst = inst.with_annotation(r)?;
    }
    let cfg = config_of(a);
    let mut report = RunReport {
        instance: InstanceEcho {
            digest: digest(&inst.graph, &inst.r_set, a.op, a.k, &phi_text),
            n: inst.graph.n(),
            m: inst.graph.m(),
            annotated: inst.r_set.len(),
            op: a.op,
            k: a.k,
            phi: phi_text,
        },
        mode: if a.oracle { "oracle" } else { "pipeline" },
        answer: None,
        witness: None,
        trace: Vec::new(),
        oracle_agrees: None,
        params: None,
        error: None,
        config: ConfigEcho { pipeline: &cfg, seed: a.seed },
        millis: None,
    };
    let answer = if a.oracle {
        match solve_oracle(&inst, &cfg) {
            Ok(ans) => {
                report.witness = ans.witness;
                Ok(ans.answer)
            }
            Err(e) => Err(e),
        }
    } else {
        match solve_pipeline(&inst, &cfg) {
            Ok(run) => {
                report.trace = run.trace;
                report.oracle_agrees = run.oracle_agrees;
                report.params = Some(run.params);
                Ok(run.answer)
            }
            Err(f) => {
                report.trace = f.trace;
                Err(f.error)
            }
        }
    };
    if a.timings {
        report.millis = Some(started.elapsed().as_millis() as u64);
    }
    let code = match &answer {
        Ok(yes) => {
            report.answer = Some(if *yes { "YES" } else { "NO" });
            if *yes { 0 } else { 1 }
        }
        Err(e) => {
            eprintln!("error: {e}");
            report.error = Some(e.to_string());
            2
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("reports serialise");
    write_out(a.out.as_deref(), &text)?;
    if let (Some(ans), Some(_)) = (report.answer, &a.out) {
        println!("{ans}");
    }
    Ok(ExitCode::from(code))
}

fn generate(a: &GenArgs) -> Result<ExitCode, Failure> {
    let g = match a.kind {
        GenKind::Wall => suites::gen::random_wall(a.height, a.max_subdivision, a.seed)?.graph,
        GenKind::K5star => k5_star(a.copies),
        GenKind::TriGrid => make_triangulated_grid(a.k)?.graph,
        GenKind::Grid => make_grid(a.k, a.rows.unwrap_or(a.k))?.graph,
        GenKind::Annulus => suites::gen::random_separator(&mut suites::gen::seeded(a.seed))?.graph,
    };
    let text = if a.dot { g.to_dot() } else { g.to_json() };
    write_out(a.out.as_deref(), text.trim_end())?;
    Ok(ExitCode::SUCCESS)
}

fn check(a: &CheckArgs) -> Result<ExitCode, Failure> {
    let deadline = a.budget.map(|b| Instant::now() + b);
    let reports = suites::run_suite(&a.suite, a.seed, a.n, deadline)?;
    println!("{:<20} {:>12} {:>10}  status", "battery", "passed", "ms");
    for r in &reports {
        let status = if r.skipped { "SKIPPED" } else if r.ok() { "PASS" } else { "FAIL" };
        println!("{:<20} {:>12} {:>10}  {status}", r.name, format!("{}/{}", r.passed, r.total), r.millis);
        for n in &r.notes {
            println!("    {n}");
        }
        for f in &r.failures {
            println!("    failure: {f}");
        }
    }
    if let Some(out) = &a.out {
        write_out(Some(out), &serde_json::to_string_pretty(&reports).expect("reports serialise"))?;
    }
    let failed = reports.iter().any(|r: &CheckReport| !r.skipped && !r.ok());
    Ok(ExitCode::from(if failed { 1 } else { 0 }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Solve(a) => solve(a),
        Cmd::Gen(a) => generate(a),
        Cmd::Check(a) => check(a),
    };
    result.unwrap_or_else(|Failure(msg)| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    })
}
