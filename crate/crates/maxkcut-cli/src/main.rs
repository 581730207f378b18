//! Batch front end over the maxkcut library.
//!
//! Exit codes: 0 on success, 1 when a validation suite finds a failure (or
//! a run errors out), 2 for usage errors. Relative output paths resolve
//! against `MAXKCUT_OUT_DIR` when that variable is set.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use maxkcut::ansatz::{
    default_validation_betas, mixer_grover, mixer_lx, phase_separator_oracle,
    phase_separator_power2, prepare_subspace, prepare_subspace_real, separators, validate_mixer,
};
use maxkcut::circuit::CostTable;
use maxkcut::coloring::{qubits_per_vertex, ColorRelation, RelationVariant};
use maxkcut::graph::{
    brute_force_max_kcut, generate_barabasi_albert, generate_erdos_renyi, load_graph, save_graph,
};
use maxkcut::qaoa::{
    landscape, optimize_schedule, resource_report, sig12, AnsatzConfig, Encoding, LandscapeOpts,
    Mixer, OptimizeOpts, QaoaEngine, write_landscape_csv,
};
use maxkcut::statevector::Statevector;

#[derive(Parser)]
#[command(name = "maxkcut", version, about = "Weighted MAX k-CUT QAOA laboratory")]
struct Cli {
    /// Cap the worker pool (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random graph and write it as JSON.
    GenGraph {
        #[command(subcommand)]
        kind: GraphKind,
    },
    /// Exhaustive MAX k-CUT of a graph file.
    BruteForce {
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        /// Also write `{optimum, witnesses}` as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the oracle-backed verification suites.
    Validate {
        /// separators | mixers | preps | all
        #[arg(default_value = "all")]
        scope: String,
    },
    /// Depth-1 approximation-ratio grid, written as CSV.
    Landscape {
        graph: PathBuf,
        #[command(flatten)]
        ansatz: AnsatzArgs,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimize depths 1..=p-max with the interpolation schedule; one
    /// record per depth is written as a JSON array.
    Optimize {
        graph: PathBuf,
        #[command(flatten)]
        ansatz: AnsatzArgs,
        #[arg(long, default_value_t = 3)]
        p_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Depth-1 grid resolution (default 32).
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-layer gate census and CX-equivalent cost of an ansatz.
    Resources {
        #[command(flatten)]
        ansatz: AnsatzArgs,
        /// Evaluate the per-layer formula for a concrete size.
        #[arg(long)]
        num_vertices: Option<u64>,
        #[arg(long)]
        num_edges: Option<u64>,
        /// Load a custom CX decomposition table (JSON map).
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct AnsatzArgs {
    #[arg(long)]
    k: u32,
    /// full-lt | full-bal | subspace
    #[arg(long)]
    encoding: Encoding,
    /// x | lx | grover | grover-box
    #[arg(long)]
    mixer: Mixer,
}

#[derive(Subcommand)]
enum GraphKind {
    /// Erdos-Renyi G(n, p), unit weights.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "graph.json")]
        out: PathBuf,
    },
    /// Barabasi-Albert preferential attachment, uniform weights.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        w_low: f64,
        #[arg(long, default_value_t = 1.5)]
        w_high: f64,
        #[arg(long, default_value = "graph.json")]
        out: PathBuf,
    },
}

const USAGE_ERROR: u8 = 2;
const VALIDATION_FAILURE: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Read by rayon's global pool on first use; only affects builds of
        // the library with its parallel feature.
        std::env::set_var("RAYON_NUM_THREADS", threads.to_string());
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
        Err(CmdError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(VALIDATION_FAILURE)
        }
    }
}

enum CmdError {
    /// Bad arguments or unreadable inputs: exit 2.
    Usage(String),
    /// A run or validation that failed: exit 1.
    Run(String),
}

fn usage<E: std::fmt::Display>(e: E) -> CmdError {
    CmdError::Usage(e.to_string())
}

fn runtime<E: std::fmt::Display>(e: E) -> CmdError {
    CmdError::Run(e.to_string())
}

/// Relative paths land in `MAXKCUT_OUT_DIR` when it is set.
fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("MAXKCUT_OUT_DIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}

fn run(command: Command) -> Result<ExitCode, CmdError> {
    match command {
        Command::GenGraph { kind } => {
            let (graph, out) = match kind {
                GraphKind::Er { n, p, seed, out } => {
                    (generate_erdos_renyi(n, p, seed).map_err(usage)?, out)
                }
                GraphKind::Ba { n, m, seed, w_low, w_high, out } => {
                    (generate_barabasi_albert(n, m, seed, w_low, w_high).map_err(usage)?, out)
                }
            };
            let out = resolve_out(&out);
            save_graph(&graph, &out).map_err(runtime)?;
            println!("{graph}");
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::BruteForce { graph, k, json } => {
            let g = load_graph(&graph).map_err(usage)?;
            let result = brute_force_max_kcut(&g, k).map_err(usage)?;
            println!("optimum = {}", sig12(result.optimum));
            println!("witnesses (vertex 0 pinned to color 0): {}", result.witnesses.len());
            if let Some(w) = result.witnesses.first() {
                println!("first witness: {:?}", w.colors());
            }
            if let Some(path) = json {
                let path = resolve_out(&path);
                let payload = serde_json::json!({
                    "k": k,
                    "optimum": result.optimum,
                    "witnesses": result.witnesses,
                });
                std::fs::write(&path, serde_json::to_string_pretty(&payload).unwrap())
                    .map_err(runtime)?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { scope } => cmd_validate(&scope),
        Command::Landscape { graph, ansatz, resolution, out } => {
            let g = load_graph(&graph).map_err(usage)?;
            let config = AnsatzConfig {
                k: ansatz.k,
                encoding: ansatz.encoding,
                mixer: ansatz.mixer,
                depth: 1,
            };
            config.validate().map_err(usage)?;
            let engine = QaoaEngine::new(&g, config).map_err(usage)?;
            let rows = landscape(&engine, &LandscapeOpts::for_mixer(ansatz.mixer, resolution))
                .map_err(runtime)?;
            let out = resolve_out(&out);
            let mut buf = Vec::new();
            write_landscape_csv(&rows, &mut buf).map_err(runtime)?;
            std::fs::write(&out, buf).map_err(runtime)?;
            let best = rows
                .iter()
                .max_by(|a, b| a.2.total_cmp(&b.2))
                .expect("grid is nonempty");
            println!("max alpha = {} at gamma = {}, beta = {}", sig12(best.2), sig12(best.0), sig12(best.1));
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize { graph, ansatz, p_max, seed, grid, out } => {
            let g = load_graph(&graph).map_err(usage)?;
            let config = AnsatzConfig {
                k: ansatz.k,
                encoding: ansatz.encoding,
                mixer: ansatz.mixer,
                depth: p_max,
            };
            config.validate().map_err(usage)?;
            let engine = QaoaEngine::new(&g, config).map_err(usage)?;
            let mut opts = OptimizeOpts::for_mixer(ansatz.mixer);
            if let Some(res) = grid {
                opts = opts.with_grid(res);
            }
            let records = optimize_schedule(&engine, p_max, &opts, seed).map_err(runtime)?;
            for r in &records {
                println!(
                    "p = {}: alpha = {} (expectation {}, {:.0} ms)",
                    r.config.depth,
                    sig12(r.alpha),
                    sig12(r.expectation),
                    r.wall_time_ms
                );
            }
            let out = resolve_out(&out);
            std::fs::write(&out, serde_json::to_string_pretty(&records).unwrap())
                .map_err(runtime)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Resources { ansatz, num_vertices, num_edges, table, json } => {
            let table = match table {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(usage)?;
                    CostTable::from_json(&text).map_err(usage)?
                }
                None => CostTable::default(),
            };
            let config = AnsatzConfig {
                k: ansatz.k,
                encoding: ansatz.encoding,
                mixer: ansatz.mixer,
                depth: 1,
            };
            let report = resource_report(config, &table).map_err(usage)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!(
                    "ansatz: k = {}, encoding = {}, mixer = {}",
                    config.k, config.encoding, config.mixer
                );
                println!("separator (per edge): {}", report.separator_per_edge.rendered);
                let scope = match report.mixer_scope {
                    maxkcut::qaoa::MixerScope::PerVertex => "per vertex",
                    maxkcut::qaoa::MixerScope::Global => "per vertex, around one global phase",
                };
                println!("mixer ({scope}): {}", report.mixer_census.rendered);
                println!("initial state (per vertex): {}", report.prep_per_vertex.rendered);
                println!("{}", report.per_layer_formula);
                if let Some(prior) = &report.prior_work_per_edge {
                    println!("ancilla-based construction (per edge): {prior}");
                }
                if let (Some(v), Some(e)) = (num_vertices, num_edges) {
                    let per_layer = report.separator_cx_per_edge * e + report.mixer_cx * v;
                    println!(
                        "with |V| = {v}, |E| = {e}: {per_layer} CX per layer + {} CX initial state",
                        report.prep_cx_per_vertex * v
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

// ============================================================================
// validate
// ============================================================================

struct Suite {
    failures: usize,
    rows: Vec<String>,
}

impl Suite {
    fn new() -> Self {
        Self { failures: 0, rows: Vec::new() }
    }

    fn record(&mut self, name: &str, ok: bool, detail: String) {
        let mark = if ok { "ok" } else { "FAIL" };
        self.rows.push(format!("{name:<42} {mark:<4} {detail}"));
        if !ok {
            self.failures += 1;
        }
    }
}

fn cmd_validate(scope: &str) -> Result<ExitCode, CmdError> {
    let mut suite = Suite::new();
    match scope {
        "separators" => validate_separators(&mut suite),
        "mixers" => validate_mixers(&mut suite),
        "preps" => validate_preps(&mut suite),
        "all" => {
            validate_separators(&mut suite);
            validate_mixers(&mut suite);
            validate_preps(&mut suite);
        }
        other => {
            return Err(CmdError::Usage(format!(
                "unknown scope {other:?} (separators, mixers, preps, all)"
            )))
        }
    }
    for row in &suite.rows {
        println!("{row}");
    }
    if suite.failures == 0 {
        println!("all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{} check(s) failed", suite.failures);
        Ok(ExitCode::from(VALIDATION_FAILURE))
    }
}

/// Deterministic angle sample for the oracle sweeps.
fn angle_grid(count: usize) -> Vec<f64> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_240_901);
    (0..count).map(|_| rng.gen_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI)).collect()
}

fn validate_separators(suite: &mut Suite) {
    let tol = 1e-9;
    let angles = angle_grid(20);

    let mut check = |name: String, build: &dyn Fn(f64) -> maxkcut::Circuit, rel: &ColorRelation| {
        let mut worst = (0.0f64, 0usize, 0usize, 0.0f64);
        for &t in &angles {
            let circuit = build(t);
            let oracle = phase_separator_oracle(rel, t);
            let (dev, row, col) = separators::oracle_deviation(&circuit, &oracle);
            if dev > worst.0 {
                worst = (dev, row, col, t);
            }
        }
        let ok = worst.0 < tol;
        let detail = if ok {
            format!("max |delta| = {:.2e}", worst.0)
        } else {
            format!(
                "deviation {:.3e} at basis ({}, {}) for t = {}",
                worst.0, worst.2, worst.1, worst.3
            )
        };
        suite.record(&name, ok, detail);
    };

    for n_k in 1..=3u32 {
        let rel = ColorRelation::trivial(n_k);
        check(
            format!("separator k={} (power of two)", 1u32 << n_k),
            &|t| phase_separator_power2(n_k, t),
            &rel,
        );
    }
    use RelationVariant::*;
    for (k, variant) in [(3, LessThan), (5, LessThan), (5, Balanced), (6, LessThan), (6, Balanced), (7, LessThan)] {
        let rel = ColorRelation::by_variant(k, variant);
        check(
            format!("separator k={k} ({variant})"),
            &|t| separators::phase_separator_k(k, variant, t).unwrap(),
            &rel,
        );
    }
    let rel9 = ColorRelation::less_than(9);
    check("separator k=9 (generalized ladder)".into(), &|t| separators::phase_separator_2l_plus1(3, t), &rel9);
}

fn validate_mixers(suite: &mut Suite) {
    let betas = default_validation_betas();
    for k in [3u32, 5, 6, 7] {
        let feasible: Vec<usize> = (0..k as usize).collect();
        let report = validate_mixer(|b| mixer_lx(k, b).unwrap(), &feasible, &betas);
        suite.record(
            &format!("lx mixer k={k} preserves + connects"),
            report.preserves && report.connected,
            match report.first_leak {
                Some((state, beta, leak)) => {
                    format!("leak {leak:.3e} from basis {state} at beta = {beta}")
                }
                None => format!("leak {:.2e}, connected = {}", report.max_leak, report.connected),
            },
        );
        let prep = prepare_subspace_real(k).unwrap();
        let report = validate_mixer(|b| mixer_grover(&prep, b), &feasible, &betas);
        suite.record(
            &format!("grover-box mixer k={k} preserves + connects"),
            report.preserves && report.connected,
            format!("leak {:.2e}, connected = {}", report.max_leak, report.connected),
        );
    }
}

fn validate_preps(suite: &mut Suite) {
    for k in [3u32, 5, 6, 7] {
        let n_k = qubits_per_vertex(k) as usize;
        let mut magnitude_err = 0.0f64;
        let mut stray = 0.0f64;
        let circuit = prepare_subspace(k).unwrap();
        let mut s = Statevector::zero(n_k).unwrap();
        s.apply_circuit(&circuit).unwrap();
        let want = 1.0 / (k as f64).sqrt();
        for (idx, amp) in s.amplitudes().iter().enumerate() {
            if idx < k as usize {
                magnitude_err = magnitude_err.max((amp.norm() - want).abs());
            } else {
                stray = stray.max(amp.norm());
            }
        }
        let mut real_err = 0.0f64;
        let corrected = prepare_subspace_real(k).unwrap();
        let mut s = Statevector::zero(n_k).unwrap();
        s.apply_circuit(&corrected).unwrap();
        for (idx, amp) in s.amplitudes().iter().enumerate() {
            if idx < k as usize {
                real_err = real_err.max((amp.re - want).abs().max(amp.im.abs()));
            }
        }
        let ok = magnitude_err < 1e-10 && stray < 1e-10 && real_err < 1e-10;
        suite.record(
            &format!("subspace prep k={k}"),
            ok,
            format!("|amp| err {magnitude_err:.2e}, stray {stray:.2e}, corrected err {real_err:.2e}"),
        );
    }
}
