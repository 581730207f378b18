//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them on success).
//!
//! Criterion 2's seven-color census row is asserted exactly as printed in
//! the published resource table and is expected to FAIL: no circuit with
//! that gate census can realize the seven-color separator (a counting
//! argument, spelled out in the test), and the faithful circuit this crate
//! builds — which does pass the oracle-equivalence criterion — uses a C4Ph
//! where the table prints a C3Ph. The test stays red on purpose rather
//! than asserting a weakened value.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use maxkcut::ansatz::separators::{oracle_deviation, phase_separator_k};
use maxkcut::ansatz::{
    default_validation_betas, lx_term_edges, mixer_lx, phase_separator_2l_plus1,
    phase_separator_oracle, phase_separator_power2, prepare_subspace, prepare_subspace_real,
    validate_mixer,
};
use maxkcut::circuit::{cx_equivalent_cost, Census, CostTable, GateClass};
use maxkcut::coloring::{qubits_per_vertex, ColorRelation, RelationVariant};
use maxkcut::graph::{
    brute_force_max_kcut, generate_barabasi_albert, generate_erdos_renyi, Graph,
};
use maxkcut::qaoa::{
    optimize_schedule, AnsatzConfig, Encoding, Mixer, OptimizeOpts,
    QaoaEngine,
};
use maxkcut::statevector::{cost_diagonal, Statevector};

type C64 = Complex64;

fn pass(criterion: &str, detail: &str) {
    println!("ACCEPTANCE {criterion}: PASS ({detail})");
}

fn fail(criterion: &str, detail: &str) -> ! {
    println!("ACCEPTANCE {criterion}: FAIL ({detail})");
    panic!("{criterion}: {detail}");
}

// ============================================================================
// Criterion 1: separator-oracle equivalence, k in 2..=9, 20 angles, 1e-9
// ============================================================================

#[test]
fn criterion1_separator_oracle_equivalence() {
    let started = Instant::now();
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE517);
    let angles: Vec<f64> =
        (0..20).map(|_| rng.gen_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI)).collect();

    struct Case {
        name: &'static str,
        build: Box<dyn Fn(f64) -> maxkcut::Circuit + Sync>,
        rel: ColorRelation,
    }
    use RelationVariant::*;
    let cases = vec![
        Case { name: "k=2", build: Box::new(|t| phase_separator_power2(1, t)), rel: ColorRelation::trivial(1) },
        Case { name: "k=4", build: Box::new(|t| phase_separator_power2(2, t)), rel: ColorRelation::trivial(2) },
        Case { name: "k=8", build: Box::new(|t| phase_separator_power2(3, t)), rel: ColorRelation::trivial(3) },
        Case { name: "k=3", build: Box::new(|t| phase_separator_k(3, LessThan, t).unwrap()), rel: ColorRelation::less_than(3) },
        Case { name: "k=5 <k", build: Box::new(|t| phase_separator_k(5, LessThan, t).unwrap()), rel: ColorRelation::less_than(5) },
        Case { name: "k=5 bal", build: Box::new(|t| phase_separator_k(5, Balanced, t).unwrap()), rel: ColorRelation::balanced(5) },
        Case { name: "k=6 <k", build: Box::new(|t| phase_separator_k(6, LessThan, t).unwrap()), rel: ColorRelation::less_than(6) },
        Case { name: "k=6 bal", build: Box::new(|t| phase_separator_k(6, Balanced, t).unwrap()), rel: ColorRelation::balanced(6) },
        Case { name: "k=7", build: Box::new(|t| phase_separator_k(7, LessThan, t).unwrap()), rel: ColorRelation::less_than(7) },
        Case { name: "k=9", build: Box::new(|t| phase_separator_2l_plus1(3, t)), rel: ColorRelation::less_than(9) },
    ];

    let mut worst = (0.0f64, "");
    for case in &cases {
        for &t in &angles {
            let circuit = (case.build)(t);
            let oracle = phase_separator_oracle(&case.rel, t);
            let (dev, row, col) = oracle_deviation(&circuit, &oracle);
            if dev > worst.0 {
                worst = (dev, case.name);
            }
            if dev >= tol {
                fail(
                    "criterion 1 (separator-oracle equivalence)",
                    &format!("{} deviates {dev:e} at ({row}, {col}) for t = {t}", case.name),
                );
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 30.0 {
        fail("criterion 1 (separator-oracle equivalence)", &format!("took {elapsed:.1} s >= 30 s"));
    }
    pass(
        "criterion 1 (separator-oracle equivalence)",
        &format!("10 variants x 20 angles, worst |delta| = {:.1e} ({}), {elapsed:.2} s", worst.0, worst.1),
    );
}

// ============================================================================
// Criterion 2: gate census golden values
// ============================================================================

fn census_of(entries: &[(GateClass, usize)]) -> Census {
    entries.iter().copied().collect()
}

#[test]
fn criterion2_census_power_of_two() {
    for n_k in 1..=4u32 {
        let census = phase_separator_power2(n_k, 0.37).census();
        let want = census_of(&[
            (GateClass::X(1), 2 * n_k as usize),
            (GateClass::Phase(n_k as usize - 1), 1),
        ]);
        if census != want {
            fail("criterion 2 (census, power of two)", &format!("n_k = {n_k}: got {census}"));
        }
    }
    pass("criterion 2 (census, power of two)", "2 n_k CX + 1 C^(n_k-1)Ph for n_k = 1..4");
}

#[test]
fn criterion2_census_k3() {
    let golden = census_of(&[(GateClass::Phase(1), 1), (GateClass::Phase(2), 1), (GateClass::X(1), 2)]);
    let census = phase_separator_k(3, RelationVariant::LessThan, 0.37).unwrap().census();
    if census != golden {
        fail("criterion 2 (census k=3)", &format!("got {census}, want {golden}"));
    }
    pass("criterion 2 (census k=3)", &golden.to_string());
}

#[test]
fn criterion2_census_k5() {
    let golden = census_of(&[(GateClass::Phase(1), 1), (GateClass::Phase(3), 1), (GateClass::X(1), 4)]);
    let census = phase_separator_k(5, RelationVariant::LessThan, 0.37).unwrap().census();
    if census != golden {
        fail("criterion 2 (census k=5)", &format!("got {census}, want {golden}"));
    }
    pass("criterion 2 (census k=5)", &golden.to_string());
}

#[test]
fn criterion2_census_k6() {
    // The golden row {1 C2Ph, 1 C3Ph, 8 CX} is achieved exactly by the
    // balanced six-color separator. It cannot describe the merged-tail
    // variant: that relation phases 14 basis states, while one C2Ph plus
    // one C3Ph reach at most 8 + 4 = 12 under any arrangement of
    // permutation gates.
    let golden = census_of(&[(GateClass::Phase(2), 1), (GateClass::Phase(3), 1), (GateClass::X(1), 8)]);
    let balanced = phase_separator_k(6, RelationVariant::Balanced, 0.37).unwrap().census();
    if balanced != golden {
        fail("criterion 2 (census k=6)", &format!("balanced circuit got {balanced}, want {golden}"));
    }
    // Regression-pin the merged-tail circuit's true census alongside.
    let less_than = phase_separator_k(6, RelationVariant::LessThan, 0.37).unwrap().census();
    let want_lt = census_of(&[
        (GateClass::X(1), 6),
        (GateClass::X(2), 2),
        (GateClass::Phase(2), 1),
        (GateClass::Phase(3), 1),
        (GateClass::Phase(4), 1),
    ]);
    assert_eq!(less_than, want_lt, "merged-tail k=6 census regressed");
    pass(
        "criterion 2 (census k=6)",
        &format!("balanced = {golden}; merged-tail = {less_than}"),
    );
}

#[test]
fn criterion2_census_k7_as_printed() {
    // Asserted exactly as printed: {1 C2Ph, 1 C3Ph, 2 C2X, 6 CX}. This is
    // not attainable for the seven-color relation: the equal-color set has
    // 8 + 2 = 10 states, phase gates fire on 2^(6 - m - 1) states (8 for
    // C2Ph, 4 for C3Ph), and CX/Toffoli conjugation only permutes those
    // sets. Any disjoint split covers 12 states, any overlap double-phases
    // it, so one of the two phase gates must be a C4Ph (firing on 2
    // states); the faithful circuit here uses {1 C2Ph, 1 C4Ph, 8 CX} and
    // passes the oracle-equivalence criterion.
    let golden = census_of(&[
        (GateClass::Phase(2), 1),
        (GateClass::Phase(3), 1),
        (GateClass::X(2), 2),
        (GateClass::X(1), 6),
    ]);
    let census = phase_separator_k(7, RelationVariant::LessThan, 0.37).unwrap().census();
    if census != golden {
        fail(
            "criterion 2 (census k=7, as printed)",
            &format!("got {census}, printed golden value {golden} is unrealizable (counting obstruction)"),
        );
    }
    pass("criterion 2 (census k=7, as printed)", &golden.to_string());
}

// ============================================================================
// Criterion 3: LX mixer CX costs and validity
// ============================================================================

#[test]
fn criterion3_lx_mixer_costs_and_validity() {
    let table = CostTable::default();
    let golden = [(3u32, 4u64), (5, 12), (6, 4), (7, 6)];
    for (k, want) in golden {
        let circuit = mixer_lx(k, 0.37).unwrap();
        let cost = cx_equivalent_cost(&circuit, &table).unwrap();
        if cost != want {
            fail("criterion 3 (LX mixers)", &format!("k = {k}: CX cost {cost}, want {want}"));
        }
        let feasible: Vec<usize> = (0..k as usize).collect();
        let report =
            validate_mixer(|b| mixer_lx(k, b).unwrap(), &feasible, &default_validation_betas());
        if !report.preserves {
            fail("criterion 3 (LX mixers)", &format!("k = {k} leaks {:e}", report.max_leak));
        }
        if !report.connected {
            fail("criterion 3 (LX mixers)", &format!("k = {k} transition graph not connected"));
        }
    }
    // The per-term couplings for k = 7 are exactly the six drawn pairs.
    let edges = lx_term_edges(7).unwrap();
    let flattened: BTreeSet<(u32, u32)> = edges.into_iter().flatten().collect();
    let want: BTreeSet<(u32, u32)> =
        [(0, 1), (2, 3), (0, 2), (4, 6), (0, 4), (1, 5)].into_iter().collect();
    assert_eq!(flattened, want, "k = 7 term couplings");
    pass("criterion 3 (LX mixers)", "CX costs 4/12/4/6; preservation < 1e-10; connected");
}

// ============================================================================
// Criterion 4: state preparations
// ============================================================================

#[test]
fn criterion4_subspace_preparations() {
    let tol = 1e-10;
    for k in [3u32, 5, 6, 7] {
        let circuit = prepare_subspace(k).unwrap();
        let mut s = Statevector::zero(circuit.num_qubits()).unwrap();
        s.apply_circuit(&circuit).unwrap();
        let want = 1.0 / (k as f64).sqrt();
        for (idx, amp) in s.amplitudes().iter().enumerate() {
            let ok = if idx < k as usize {
                (amp.norm() - want).abs() < tol
            } else {
                amp.norm() < tol
            };
            if !ok {
                fail(
                    "criterion 4 (subspace preparations)",
                    &format!("k = {k}, label {idx}: amplitude {amp}"),
                );
            }
        }
        // And the documented correction makes them exactly real positive.
        let corrected = prepare_subspace_real(k).unwrap();
        let mut s = Statevector::zero(corrected.num_qubits()).unwrap();
        s.apply_circuit(&corrected).unwrap();
        for (idx, amp) in s.amplitudes().iter().enumerate().take(k as usize) {
            if (amp.re - want).abs() >= tol || amp.im.abs() >= tol {
                fail(
                    "criterion 4 (subspace preparations)",
                    &format!("k = {k}, corrected label {idx}: amplitude {amp}"),
                );
            }
        }
    }
    pass("criterion 4 (subspace preparations)", "|amp| = 1/sqrt(k) on 0..k, < 1e-10 elsewhere");
}

// ============================================================================
// Criterion 5: subspace restriction identity
// ============================================================================

#[test]
fn criterion5_restriction_identity() {
    // The power-of-two separator restricted to labels < k in both registers
    // equals the k-color diagonal that phases exactly the equal-label
    // pairs.
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for k in [3u32, 5, 6, 7] {
        let n_k = qubits_per_vertex(k);
        for _ in 0..5 {
            let t = rng.gen_range(-6.0..6.0);
            let circuit = phase_separator_power2(n_k, t);
            let u = circuit.unitary().unwrap();
            let dim = 1usize << n_k;
            for i in 0..k as usize {
                for j in 0..k as usize {
                    for i2 in 0..k as usize {
                        for j2 in 0..k as usize {
                            let row = i2 * dim + j2;
                            let col = i * dim + j;
                            let want = if row == col {
                                if i == j { C64::from_polar(1.0, t) } else { C64::new(1.0, 0.0) }
                            } else {
                                C64::new(0.0, 0.0)
                            };
                            let got = u[[row, col]];
                            if (want - got).norm() >= tol {
                                fail(
                                    "criterion 5 (restriction identity)",
                                    &format!("k = {k}: entry ({row}, {col}) = {got}, want {want}"),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    pass("criterion 5 (restriction identity)", "power-of-two separator restricts to the k-color diagonal, 1e-9");
}

// ============================================================================
// Criterion 6: landscape periodicity in beta
// ============================================================================

#[test]
fn criterion6_landscape_periodicity() {
    use std::f64::consts::PI;
    let g = generate_erdos_renyi(5, 0.6, 11).unwrap();
    let tol = 1e-9;
    let gammas: Vec<f64> = (0..6).map(|i| 0.3 + 0.9 * i as f64).collect();
    let betas: Vec<f64> = (0..6).map(|i| 0.1 + 0.5 * i as f64).collect();

    let cases = [
        ("X mixer, period pi", Encoding::FullLt, Mixer::X, PI),
        ("Grover-box (full), period 2pi", Encoding::FullLt, Mixer::GroverBox, 2.0 * PI),
        ("Grover-box (subspace), period 2pi", Encoding::Subspace, Mixer::GroverBox, 2.0 * PI),
        ("Grover (subspace), period 2pi", Encoding::Subspace, Mixer::Grover, 2.0 * PI),
    ];
    for (name, encoding, mixer, period) in cases {
        let engine =
            QaoaEngine::new(&g, AnsatzConfig { k: 3, encoding, mixer, depth: 1 }).unwrap();
        let mut max_dev = 0.0f64;
        for &gamma in &gammas {
            for &beta in &betas {
                let (_, a0) = engine.evaluate(&[gamma], &[beta]).unwrap();
                let (_, a1) = engine.evaluate(&[gamma], &[beta + period]).unwrap();
                max_dev = max_dev.max((a0 - a1).abs());
            }
        }
        if max_dev >= tol {
            fail("criterion 6 (landscape periodicity)", &format!("{name}: deviation {max_dev:e}"));
        }
    }
    pass("criterion 6 (landscape periodicity)", "X period pi; Grover mixers period 2pi; dev < 1e-9");
}

// ============================================================================
// Criterion 7: desk-scale experiment
// ============================================================================

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Method {
    encoding: Encoding,
    mixer: Mixer,
}

impl Method {
    fn label(&self) -> String {
        format!("{}+{}", self.encoding, self.mixer)
    }
}

fn methods_for(k: u32) -> Vec<Method> {
    let mut methods = vec![
        Method { encoding: Encoding::FullLt, mixer: Mixer::X },
        Method { encoding: Encoding::FullLt, mixer: Mixer::GroverBox },
    ];
    if matches!(k, 5 | 6) {
        methods.push(Method { encoding: Encoding::FullBal, mixer: Mixer::X });
        methods.push(Method { encoding: Encoding::FullBal, mixer: Mixer::GroverBox });
    }
    methods.push(Method { encoding: Encoding::Subspace, mixer: Mixer::Lx });
    methods.push(Method { encoding: Encoding::Subspace, mixer: Mixer::GroverBox });
    methods.push(Method { encoding: Encoding::Subspace, mixer: Mixer::Grover });
    methods
}

#[test]
fn criterion7_desk_scale_experiment() {
    let started = Instant::now();
    const P_MAX: usize = 5;
    const MONOTONE_SLACK: f64 = 5e-3;
    const RANKING_SLACK: f64 = 0.02;

    let instances = vec![
        ("ER(6, 0.5)", generate_erdos_renyi(6, 0.5, 11).unwrap()),
        ("BA(6, 2)", generate_barabasi_albert(6, 2, 17, 0.5, 1.5).unwrap()),
    ];

    struct Run {
        instance: &'static str,
        k: u32,
        method: Method,
        alphas: Vec<f64>,
    }

    let mut jobs: Vec<(&'static str, &Graph, u32, Method)> = Vec::new();
    for (name, graph) in &instances {
        for k in [3u32, 5, 6, 7] {
            for method in methods_for(k) {
                jobs.push((name, graph, k, method));
            }
        }
    }

    let runs: Vec<Run> = jobs
        .par_iter()
        .map(|&(instance, graph, k, method)| {
            let config = AnsatzConfig { k, encoding: method.encoding, mixer: method.mixer, depth: P_MAX };
            let engine = QaoaEngine::new(graph, config).expect("desk configs are valid");
            // Trimmed optimizer budget for the sweep: a coarse 10x10
            // depth-1 grid and short refinements; the interpolated (and
            // zero-padded) warm starts carry the depth schedule.
            let mut opts = OptimizeOpts::for_mixer(method.mixer).with_grid(10);
            opts.nm_max_iter = 25;
            let records = optimize_schedule(&engine, P_MAX, &opts, 0).expect("runs fit in memory");
            Run { instance, k, method, alphas: records.iter().map(|r| r.alpha).collect() }
        })
        .collect();

    // Report the whole table.
    println!("  desk-scale alpha by depth (p = 1..{P_MAX}):");
    for run in &runs {
        let alphas: Vec<String> = run.alphas.iter().map(|a| format!("{a:.4}")).collect();
        println!(
            "    {:9} k={} {:22} {}",
            run.instance,
            run.k,
            run.method.label(),
            alphas.join(" ")
        );
    }

    let mut violations: Vec<String> = Vec::new();

    // (a) alpha non-decreasing in depth for every method.
    for run in &runs {
        for w in run.alphas.windows(2) {
            if w[1] < w[0] - MONOTONE_SLACK {
                violations.push(format!(
                    "monotonicity: {} k={} {}: {:.4} then {:.4}",
                    run.instance,
                    run.k,
                    run.method.label(),
                    w[0],
                    w[1]
                ));
            }
        }
    }

    // (b) depth-1 ranking: Grover-box >= LX and >= X (same encoding space),
    // and balanced >= merged-tail under the X mixer.
    let alpha1 = |instance: &str, k: u32, method: Method| -> Option<f64> {
        runs.iter()
            .find(|r| r.instance == instance && r.k == k && r.method == method)
            .map(|r| r.alphas[0])
    };
    for (name, _) in &instances {
        for k in [3u32, 5, 6, 7] {
            let pairs: Vec<(Method, Method, &str)> = {
                let mut v = vec![
                    (
                        Method { encoding: Encoding::Subspace, mixer: Mixer::GroverBox },
                        Method { encoding: Encoding::Subspace, mixer: Mixer::Lx },
                        "subspace grover-box >= lx",
                    ),
                    (
                        Method { encoding: Encoding::FullLt, mixer: Mixer::GroverBox },
                        Method { encoding: Encoding::FullLt, mixer: Mixer::X },
                        "full-lt grover-box >= x",
                    ),
                ];
                if matches!(k, 5 | 6) {
                    v.push((
                        Method { encoding: Encoding::FullBal, mixer: Mixer::GroverBox },
                        Method { encoding: Encoding::FullBal, mixer: Mixer::X },
                        "full-bal grover-box >= x",
                    ));
                    v.push((
                        Method { encoding: Encoding::FullBal, mixer: Mixer::X },
                        Method { encoding: Encoding::FullLt, mixer: Mixer::X },
                        "x mixer: balanced >= merged-tail",
                    ));
                }
                v
            };
            for (hi, lo, what) in pairs {
                let (a_hi, a_lo) = (alpha1(name, k, hi).unwrap(), alpha1(name, k, lo).unwrap());
                if a_hi < a_lo - RANKING_SLACK {
                    violations.push(format!(
                        "ranking: {name} k={k} {what}: {a_hi:.4} vs {a_lo:.4}"
                    ));
                }
            }
        }
    }

    let elapsed = started.elapsed().as_secs_f64();
    for v in &violations {
        println!("  VIOLATION {v}");
    }
    if !violations.is_empty() {
        fail(
            "criterion 7 (desk-scale experiment)",
            &format!("{} violation(s), see list above", violations.len()),
        );
    }
    if elapsed >= 600.0 {
        fail("criterion 7 (desk-scale experiment)", &format!("took {elapsed:.0} s >= 600 s"));
    }
    pass(
        "criterion 7 (desk-scale experiment)",
        &format!("{} runs, monotone within 5e-3, rankings within 0.02, {elapsed:.0} s", runs.len()),
    );
}

// ============================================================================
// Criterion 8: conditional 10-vertex reproduction (excluded from CI)
// ============================================================================

/// Published depth-1 ratios for the two 10-vertex instances, in method
/// order [X-lt, GB-lt, X-bal, GB-bal, LX, GB-sub, G-sub] and k order
/// [3, 5, 6, 7]; None where a method does not apply.
#[allow(clippy::type_complexity)]
fn reference_table() -> Vec<(&'static str, Vec<(u32, [Option<f64>; 7])>)> {
    vec![
        (
            "er10",
            vec![
                (3, [Some(0.80), Some(0.81), None, None, Some(0.80), Some(0.83), Some(0.75)]),
                (5, [Some(0.86), Some(0.90), Some(0.90), Some(0.93), Some(0.91), Some(0.94), Some(0.87)]),
                (6, [Some(0.92), Some(0.94), Some(0.94), Some(0.95), Some(0.94), Some(0.96), Some(0.90)]),
                (7, [Some(0.95), Some(0.96), None, None, Some(0.94), Some(0.97), Some(0.92)]),
            ],
        ),
        (
            "ba10",
            vec![
                (3, [Some(0.79), Some(0.79), None, None, Some(0.79), Some(0.82), Some(0.75)]),
                (5, [Some(0.84), Some(0.88), Some(0.88), Some(0.91), Some(0.89), Some(0.92), Some(0.86)]),
                (6, [Some(0.90), Some(0.92), Some(0.92), Some(0.93), Some(0.93), Some(0.94), Some(0.89)]),
                (7, [Some(0.93), Some(0.95), None, None, Some(0.93), Some(0.95), Some(0.91)]),
            ],
        ),
    ]
}

/// Optional: needs the original 10-vertex instances (as `er10.json` /
/// `ba10.json`, JSON or edge-list, in `MAXKCUT_PAPER_GRAPHS_DIR`) and about
/// 20 GiB of memory for the 30-qubit cases. `cargo test -- --ignored`.
#[test]
#[ignore = "needs the published 10-vertex instances and ~20 GiB of memory"]
fn criterion8_conditional_table_reproduction() {
    let Some(dir) = std::env::var_os("MAXKCUT_PAPER_GRAPHS_DIR") else {
        println!("ACCEPTANCE criterion 8 (conditional reproduction): SKIP (MAXKCUT_PAPER_GRAPHS_DIR not set)");
        return;
    };
    let dir = std::path::PathBuf::from(dir);
    let all_methods = [
        Method { encoding: Encoding::FullLt, mixer: Mixer::X },
        Method { encoding: Encoding::FullLt, mixer: Mixer::GroverBox },
        Method { encoding: Encoding::FullBal, mixer: Mixer::X },
        Method { encoding: Encoding::FullBal, mixer: Mixer::GroverBox },
        Method { encoding: Encoding::Subspace, mixer: Mixer::Lx },
        Method { encoding: Encoding::Subspace, mixer: Mixer::GroverBox },
        Method { encoding: Encoding::Subspace, mixer: Mixer::Grover },
    ];
    let mut worst = 0.0f64;
    for (stem, rows) in reference_table() {
        let path = ["json", "txt"]
            .iter()
            .map(|ext| dir.join(format!("{stem}.{ext}")))
            .find(|p| p.exists());
        let Some(path) = path else {
            println!("ACCEPTANCE criterion 8 (conditional reproduction): SKIP (no {stem}.json/.txt in {})", dir.display());
            return;
        };
        let graph = maxkcut::graph::load_graph(&path).unwrap();
        for (k, refs) in rows {
            for (method, reference) in all_methods.iter().zip(refs) {
                let Some(reference) = reference else { continue };
                let config = AnsatzConfig {
                    k,
                    encoding: method.encoding,
                    mixer: method.mixer,
                    depth: 1,
                };
                let engine = QaoaEngine::new(&graph, config).unwrap();
                let opts = OptimizeOpts::for_mixer(method.mixer);
                let records = optimize_schedule(&engine, 1, &opts, 0).unwrap();
                let alpha = records[0].alpha;
                let dev = (alpha - reference).abs();
                worst = worst.max(dev);
                println!(
                    "  {stem} k={k} {}: alpha = {alpha:.4}, reference {reference:.2}, |dev| = {dev:.3}",
                    method.label()
                );
                if dev > 0.02 {
                    fail(
                        "criterion 8 (conditional reproduction)",
                        &format!("{stem} k={k} {}: {alpha:.4} vs {reference:.2}", method.label()),
                    );
                }
            }
        }
    }
    pass("criterion 8 (conditional reproduction)", &format!("within +-0.02 (worst {worst:.3})"));
}

// ============================================================================
// Criterion 9: brute-force oracle self-check
// ============================================================================

#[test]
fn criterion9_brute_force_against_diagonal() {
    let k = 3u32;
    let rel = ColorRelation::less_than(k);
    for seed in 0..10u64 {
        // Half unweighted, half weighted instances.
        let g = if seed % 2 == 0 {
            generate_erdos_renyi(5, 0.6, seed).unwrap()
        } else {
            generate_barabasi_albert(5, 2, seed, 0.5, 1.5).unwrap()
        };
        let optimum = brute_force_max_kcut(&g, k).unwrap().optimum;
        let diag = cost_diagonal(&g, &rel);
        let diag_max = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if optimum != diag_max {
            fail(
                "criterion 9 (brute-force self-check)",
                &format!("seed {seed}: optimum {optimum} != diagonal max {diag_max}"),
            );
        }
    }
    pass("criterion 9 (brute-force self-check)", "10 graphs, exhaustive optimum == max of cost diagonal, exact");
}
