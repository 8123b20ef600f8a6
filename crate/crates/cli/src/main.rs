//! `twincut` command-line frontend.
//!
//! Exit codes: 0 success, 1 a checked property is violated (a witness is
//! printed), 2 usage or input error, 3 budget exhausted before an exact
//! answer.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twincut::closure;
use twincut::coloring::{self, Budget, ChiOutcome};
use twincut::criticality;
use twincut::graph::{self, Graph, VertexId};
use twincut::structure::{self, DecompositionWitness};
use twincut::tree;
use twincut::twincut as family;
use twincut::{Error, TwincutFamily};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "twincut", version, about = "Construct and verify the twincut family G_k")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Node budget for the exact chromatic-number solver.
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    /// Time budget in milliseconds for the exact solver.
    #[arg(long, global = true, env = "TWINCUT_BUDGET_MS")]
    max_millis: Option<u64>,
    /// Print progress details to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    Dimacs,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit G_k (stdout or --output, with a vertex-address label sidecar).
    Generate {
        k: u32,
        #[arg(long, value_enum, default_value_t = Format::Graph6)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit the structured tree T_k as JSON.
    Tree {
        k: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact chromatic number of a graph file, with a coloring witness.
    Chi {
        file: PathBuf,
        /// Write the witness coloring JSON here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// DIMACS CNF encoding of q-colorability for a graph file.
    Cnf {
        file: PathBuf,
        q: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a coloring JSON against a graph file.
    VerifyColoring { file: PathBuf, coloring: PathBuf },
    /// Derive the closure certificate for G_k and replay-check it, or
    /// replay-check an existing certificate file with --check.
    Certify {
        k: Option<u32>,
        /// Replay an existing certificate JSON; exits 1 on the first
        /// invalid step with a machine-readable error record.
        #[arg(long, conflicts_with = "k")]
        check: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decomposition witness (twins / edgeless cutset / disconnection).
    Decompose { file: PathBuf },
    /// Sample random connected induced subgraphs of G_k and require each
    /// to decompose; any failure is a counterexample and exits 1.
    SampleDecompose {
        k: u32,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        min_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Edge-criticality sweep over G_k.
    Critical { k: u32 },
    /// Full property battery on G_k.
    Check {
        k: u32,
        /// Check this graph file in place of the constructed G_k
        /// (tree-dependent checks are skipped).
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget {
        max_nodes: cli.max_nodes,
        max_millis: cli.max_millis,
    };
    match run(&cli, budget) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Infeasible { .. } => EXIT_USAGE,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli, budget: Budget) -> twincut::Result<u8> {
    match &cli.cmd {
        Cmd::Generate { k, format, output } => generate(*k, *format, output.as_deref()),
        Cmd::Tree { k, output } => {
            let fam = TwincutFamily::new(*k)?;
            emit(output.as_deref(), &tree::encode_tree_json(fam.tree(*k)?))?;
            Ok(0)
        }
        Cmd::Chi { file, output } => chi(file, output.as_deref(), budget),
        Cmd::Cnf { file, q, output } => {
            let g = read_graph(file)?;
            emit(output.as_deref(), &coloring::export_kcolor_cnf(&g, *q))?;
            Ok(0)
        }
        Cmd::VerifyColoring { file, coloring } => verify_coloring(file, coloring),
        Cmd::Certify { k, check, output } => certify(*k, check.as_deref(), output.as_deref()),
        Cmd::Decompose { file } => {
            let g = read_graph(file)?;
            println!("{}", serde_json::to_string(&structure::decompose(&g))?);
            Ok(0)
        }
        Cmd::SampleDecompose {
            k,
            count,
            min_size,
            seed,
        } => sample_decompose(*k, *count, *min_size, *seed),
        Cmd::Critical { k } => critical(*k, budget, cli.verbose),
        Cmd::Check { k, input } => check(*k, input.as_deref(), budget),
    }
}

// --------------------------------------------------------------------------
// plumbing

fn write_atomic(path: &Path, data: &str) -> twincut::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(data.as_bytes()).map_err(io_err)?;
    if !data.ends_with('\n') {
        tmp.write_all(b"\n").map_err(io_err)?;
    }
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn io_err(e: std::io::Error) -> Error {
    Error::Tree(format!("io: {e}"))
}

fn emit(output: Option<&Path>, data: &str) -> twincut::Result<()> {
    match output {
        Some(path) => write_atomic(path, data),
        None => {
            if data.ends_with('\n') {
                print!("{data}");
            } else {
                println!("{data}");
            }
            Ok(())
        }
    }
}

/// Reads a graph file, detecting graph6 / DIMACS / JSON from extension or
/// content.
fn read_graph(path: &Path) -> twincut::Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(io_err)?;
    let trimmed = text.trim();
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => return graph::decode_json(trimmed),
        Some("g6") => return graph::decode_graph6(trimmed),
        Some("col") | Some("dimacs") => return graph::decode_dimacs(trimmed),
        _ => {}
    }
    if trimmed.starts_with('{') {
        graph::decode_json(trimmed)
    } else if trimmed.lines().any(|l| l.starts_with("p edge") || l.starts_with("p cnf")) {
        graph::decode_dimacs(trimmed)
    } else {
        graph::decode_graph6(trimmed)
    }
}

// --------------------------------------------------------------------------
// subcommands

fn generate(k: u32, format: Format, output: Option<&Path>) -> twincut::Result<u8> {
    let fam = TwincutFamily::new(k)?;
    let g = fam.graph(k)?;
    let text = match format {
        Format::Graph6 => graph::encode_graph6(g),
        Format::Dimacs => graph::encode_dimacs(g),
        Format::Json => graph::encode_json(g),
    };
    emit(output, &text)?;
    if let Some(path) = output {
        let labels: Vec<String> = g
            .labels()
            .expect("twincut graphs are labeled")
            .iter()
            .map(|a| a.to_string())
            .collect();
        let sidecar = serde_json::to_string(&serde_json::json!({ "labels": labels }))?;
        let mut side_path = path.as_os_str().to_owned();
        side_path.push(".labels.json");
        write_atomic(Path::new(&side_path), &sidecar)?;
    }
    Ok(0)
}

fn chi(file: &Path, output: Option<&Path>, budget: Budget) -> twincut::Result<u8> {
    let g = read_graph(file)?;
    match coloring::chromatic_number(&g, budget) {
        ChiOutcome::Exact(r) => {
            println!("chi = {}", r.chi);
            let witness = coloring::encode_coloring_json(&g, &r.witness);
            emit(output, &witness)?;
            Ok(0)
        }
        ChiOutcome::Unknown { lower, upper, .. } => {
            println!("unknown within budget: chi in [{lower}, {upper}]");
            Ok(EXIT_BUDGET)
        }
    }
}

fn verify_coloring(file: &Path, coloring_path: &Path) -> twincut::Result<u8> {
    let g = read_graph(file)?;
    let text = std::fs::read_to_string(coloring_path).map_err(io_err)?;
    let c = coloring::decode_coloring_json(&g, &text)?;
    if coloring::is_proper(&g, &c)? {
        println!("proper (palette {})", c.palette);
        Ok(0)
    } else {
        let bad = g
            .edges()
            .iter()
            .find(|&&(u, v)| c.assignment[u as usize] == c.assignment[v as usize]);
        println!(
            "{}",
            serde_json::to_string(&serde_json::json!({
                "violation": "improper-coloring",
                "edge": bad,
            }))?
        );
        Ok(EXIT_VIOLATION)
    }
}

fn certify(k: Option<u32>, check: Option<&Path>, output: Option<&Path>) -> twincut::Result<u8> {
    if let Some(path) = check {
        let text = std::fs::read_to_string(path).map_err(io_err)?;
        let cert: closure::ClosureCertificate = serde_json::from_str(&text)?;
        return match closure::replay_with(
            &cert,
            closure::ReplayOptions {
                check_triangle_free: true,
            },
        ) {
            Ok(out) => {
                println!(
                    "valid: {} vertices, {} base / {} substitute / {} glue",
                    out.graph.vertex_count(),
                    out.stats.base,
                    out.stats.substitute,
                    out.stats.glue
                );
                Ok(0)
            }
            Err(Error::Certificate { step, reason }) => {
                println!(
                    "{}",
                    serde_json::to_string(&serde_json::json!({
                        "violation": "invalid-certificate",
                        "step": step,
                        "reason": reason,
                    }))?
                );
                Ok(EXIT_VIOLATION)
            }
            Err(e) => Err(e),
        };
    }
    let k = k.ok_or_else(|| Error::Index(0, "certify needs k or --check FILE".into()))?;
    let fam = TwincutFamily::new(k)?;
    let cert = closure::twincut_certificate(&fam, k)?;
    let out = closure::replay_with(
        &cert,
        closure::ReplayOptions {
            check_triangle_free: true,
        },
    )?;
    let expected = fam.graph(k)?;
    if out.graph.edges() != expected.edges() || out.graph.vertex_count() != expected.vertex_count() {
        println!(
            "{}",
            serde_json::to_string(&serde_json::json!({
                "violation": "certificate-replay-mismatch",
                "k": k,
            }))?
        );
        return Ok(EXIT_VIOLATION);
    }
    if let Some(path) = output {
        write_atomic(path, &serde_json::to_string(&cert)?)?;
    }
    println!(
        "certificate for G_{k}: {} base / {} substitute / {} glue steps, replay matches",
        out.stats.base, out.stats.substitute, out.stats.glue
    );
    Ok(0)
}

fn random_connected_subgraph(
    g: &Graph,
    rng: &mut ChaCha8Rng,
    min: usize,
    max: usize,
) -> twincut::Result<Graph> {
    loop {
        let target = rng.random_range(min..=max.min(g.vertex_count()));
        let start = rng.random_range(0..g.vertex_count()) as VertexId;
        let mut chosen = vec![start];
        let mut frontier: Vec<VertexId> = g.neighbors(start).to_vec();
        while chosen.len() < target && !frontier.is_empty() {
            let i = rng.random_range(0..frontier.len());
            let v = frontier.swap_remove(i);
            if chosen.contains(&v) {
                continue;
            }
            chosen.push(v);
            frontier.extend(g.neighbors(v).iter().filter(|w| !chosen.contains(w)));
        }
        if chosen.len() >= min {
            let (h, _) = g.induced_subgraph(&chosen)?;
            if h.is_connected() {
                return Ok(h);
            }
        }
    }
}

fn sample_decompose(k: u32, count: usize, min_size: usize, seed: u64) -> twincut::Result<u8> {
    let fam = TwincutFamily::new(k)?;
    let g = fam.graph(k)?;
    if g.vertex_count() < min_size.max(1) {
        return Err(Error::Index(k, "G_k smaller than --min-size".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max = g.vertex_count().min(48);
    let (mut twins, mut cutsets, mut disconnected) = (0usize, 0usize, 0usize);
    for i in 0..count {
        let h = random_connected_subgraph(g, &mut rng, min_size, max)?;
        match structure::decompose(&h) {
            DecompositionWitness::Twins { .. } => twins += 1,
            DecompositionWitness::Cutset { .. } => cutsets += 1,
            DecompositionWitness::Disconnected { .. } => disconnected += 1,
            DecompositionWitness::None => {
                println!(
                    "{}",
                    serde_json::to_string(&serde_json::json!({
                        "violation": "undecomposable-subgraph",
                        "sample": i,
                        "n": h.vertex_count(),
                        "edges": h.edges(),
                    }))?
                );
                return Ok(EXIT_VIOLATION);
            }
        }
    }
    println!(
        "{count} samples of G_{k}: {twins} twins, {cutsets} cutsets, {disconnected} disconnected, 0 undecomposable"
    );
    Ok(0)
}

fn critical(k: u32, budget: Budget, verbose: u8) -> twincut::Result<u8> {
    let fam = TwincutFamily::new(k)?;
    let started = std::time::Instant::now();
    let report = criticality::verify_critical(&fam, k, budget)?;
    eprintln!("critical sweep wall time: {:?}", started.elapsed());
    if report.chi.is_none() {
        println!(
            "unknown within budget: chi in [{}, {}]",
            report.chi_bounds.0, report.chi_bounds.1
        );
        return Ok(EXIT_BUDGET);
    }
    if verbose > 0 {
        for r in &report.per_edge {
            eprintln!(
                "edge ({}, {}): palette {}, verified {}, path {:?}",
                r.edge.0, r.edge.1, r.palette, r.verified, r.path
            );
        }
    }
    println!(
        "k = {k}: chi = {}, edges = {}, verified = {}, solver fallbacks = {}",
        report.chi.unwrap(),
        report.per_edge.len(),
        report.per_edge.iter().filter(|r| r.verified).count(),
        report.fallback_count()
    );
    if report.all_verified() {
        Ok(0)
    } else {
        for r in report.per_edge.iter().filter(|r| !r.verified) {
            println!(
                "{}",
                serde_json::to_string(&serde_json::json!({
                    "violation": "edge-not-certified",
                    "edge": r.edge,
                    "error": r.error,
                }))?
            );
        }
        Ok(EXIT_VIOLATION)
    }
}

fn check(k: u32, input: Option<&Path>, budget: Budget) -> twincut::Result<u8> {
    let fam = TwincutFamily::new(k)?;
    let override_graph = input.map(read_graph).transpose()?;
    let g = match &override_graph {
        Some(g) => g,
        None => fam.graph(k)?,
    };
    let mut failed = false;
    let mut fail = |name: &str, witness: serde_json::Value| {
        println!("[FAIL] {name}: {witness}");
        failed = true;
    };

    if override_graph.is_none() {
        let expected = family::vertex_count(k);
        if num_bigint::BigUint::from(g.vertex_count()) == expected {
            println!("[ok] size: |V(G_{k})| = {}", g.vertex_count());
        } else {
            fail(
                "size",
                serde_json::json!({ "got": g.vertex_count(), "expected": expected.to_string() }),
            );
        }
    }

    match structure::has_triangle(g) {
        None => println!("[ok] triangle-free"),
        Some(t) => fail("triangle-free", serde_json::json!({ "triangle": [t.0, t.1, t.2] })),
    }

    match coloring::chromatic_number(g, budget) {
        ChiOutcome::Exact(r) if r.chi == k => println!("[ok] chi = {k} (exact)"),
        ChiOutcome::Exact(r) => fail(
            "chromatic-number",
            serde_json::json!({ "got": r.chi, "expected": k }),
        ),
        ChiOutcome::Unknown { lower, upper, .. } => {
            if lower > k || upper < k {
                fail(
                    "chromatic-number",
                    serde_json::json!({ "bounds": [lower, upper], "expected": k }),
                );
            } else {
                println!("[note] chi in [{lower}, {upper}] (budget exhausted, consistent with {k})");
            }
        }
    }

    if override_graph.is_none() && k >= 1 {
        let c = coloring::constructive_coloring(&fam, k)?;
        if c.palette <= k && coloring::is_proper(g, &c)? {
            println!("[ok] constructive {k}-coloring is proper");
        } else {
            fail("constructive-coloring", serde_json::json!({ "palette": c.palette }));
        }
    }

    if g.vertex_count() <= structure::CUBE_DEFAULT_CAP {
        match structure::contains_induced_cube(g)? {
            None => println!("[ok] no induced cube"),
            Some(set) => fail("cube-free", serde_json::json!({ "vertices": set })),
        }
    } else {
        println!("[note] cube check skipped ({} vertices over cap)", g.vertex_count());
    }

    if g.vertex_count() >= 3 {
        let w = structure::decompose(g);
        if w == DecompositionWitness::None {
            fail("decomposable", serde_json::json!({ "witness": "none" }));
        } else {
            println!("[ok] decomposes ({})", witness_kind(&w));
        }
    }

    if override_graph.is_none() && k >= 2 {
        let cert = closure::twincut_certificate(&fam, k)?;
        let out = closure::replay_with(
            &cert,
            closure::ReplayOptions {
                check_triangle_free: true,
            },
        )?;
        if out.graph.edges() == g.edges() && out.graph.vertex_count() == g.vertex_count() {
            println!("[ok] closure certificate replays labeled-identical");
        } else {
            fail("closure-certificate", serde_json::json!({ "k": k }));
        }
    }

    if override_graph.is_none() {
        if k <= 4 {
            let report = criticality::verify_critical(&fam, k, budget)?;
            if report.all_verified() {
                println!("[ok] all {} edges critical", report.per_edge.len());
            } else {
                fail(
                    "criticality",
                    serde_json::json!({
                        "unverified": report
                            .per_edge
                            .iter()
                            .filter(|r| !r.verified)
                            .map(|r| r.edge)
                            .collect::<Vec<_>>()
                    }),
                );
            }
        } else {
            println!("[note] criticality sweep skipped for k = {k} (run `critical {k}` explicitly)");
        }
    }

    if failed {
        Ok(EXIT_VIOLATION)
    } else {
        println!("all checks passed for k = {k}");
        Ok(0)
    }
}

fn witness_kind(w: &DecompositionWitness) -> &'static str {
    match w {
        DecompositionWitness::Disconnected { .. } => "disconnected",
        DecompositionWitness::Twins { .. } => "twins",
        DecompositionWitness::Cutset { .. } => "cutset",
        DecompositionWitness::None => "none",
    }
}
