//! QAOA driver: assembles an ansatz from an encoding/mixer choice, evaluates
//! cut expectations and approximation ratios on the statevector simulator,
//! sweeps depth-1 landscapes, optimizes parameters with a grid +
//! Nelder-Mead pipeline and an interpolation-based depth schedule, and
//! reports per-layer gate resources.
//!
//! The phase-separation layer of every supported ansatz is diagonal, so the
//! engine applies it as one pass over the state using the precomputed cut
//! values (the layer equals the per-edge separator circuits up to a global
//! phase; a test pins that equivalence). Mixers are applied as per-vertex
//! block unitaries, or prep/phase/unprep sweeps for the global Grover
//! mixer.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::ansatz::{mixer_grover, mixer_lx, mixer_x, prepare_plus, prepare_subspace_real};
use crate::circuit::{cx_equivalent_cost, Census, Circuit, CostTable, Gate};
use crate::coloring::{qubits_per_vertex, ColorRelation, RelationVariant};
use crate::graph::{brute_force_max_kcut, Graph, GraphError};
use crate::statevector::{cost_diagonal, SimError, Statevector};

type C64 = Complex64;

/// Probability allowed outside the feasible span after a subspace run.
pub const SUBSPACE_LEAK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum QaoaError {
    #[error("mixer {mixer} is not compatible with encoding {encoding}")]
    Incompatible { encoding: Encoding, mixer: Mixer },
    #[error("k = {0} is not supported by this ansatz: {1}")]
    UnsupportedK(u32, String),
    #[error("parameter vectors have lengths {gammas} and {betas}; both must equal the depth")]
    BadParameters { gammas: usize, betas: usize },
    #[error("subspace evolution leaked probability {0:e} out of the feasible span")]
    SubspaceLeak(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    /// Full Hilbert space, merged-tail relation.
    FullLt,
    /// Full Hilbert space, balanced relation.
    FullBal,
    /// Evolution restricted to the first k labels per vertex.
    Subspace,
}

impl Encoding {
    pub fn is_full(self) -> bool {
        !matches!(self, Encoding::Subspace)
    }

    pub fn variant(self) -> RelationVariant {
        match self {
            Encoding::FullBal => RelationVariant::Balanced,
            _ => RelationVariant::LessThan,
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Encoding::FullLt => write!(f, "full-lt"),
            Encoding::FullBal => write!(f, "full-bal"),
            Encoding::Subspace => write!(f, "subspace"),
        }
    }
}

impl std::str::FromStr for Encoding {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full-lt" => Ok(Encoding::FullLt),
            "full-bal" => Ok(Encoding::FullBal),
            "subspace" => Ok(Encoding::Subspace),
            other => Err(format!("unknown encoding {other:?} (full-lt, full-bal, subspace)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mixer {
    X,
    Lx,
    Grover,
    GroverBox,
}

impl fmt::Display for Mixer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mixer::X => write!(f, "x"),
            Mixer::Lx => write!(f, "lx"),
            Mixer::Grover => write!(f, "grover"),
            Mixer::GroverBox => write!(f, "grover-box"),
        }
    }
}

impl std::str::FromStr for Mixer {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "x" => Ok(Mixer::X),
            "lx" => Ok(Mixer::Lx),
            "grover" => Ok(Mixer::Grover),
            "grover-box" => Ok(Mixer::GroverBox),
            other => Err(format!("unknown mixer {other:?} (x, lx, grover, grover-box)")),
        }
    }
}

/// A full ansatz choice. Compatibility: the X mixer needs the full space,
/// the LX mixer needs the subspace, Grover mixers work with either.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzConfig {
    pub k: u32,
    pub encoding: Encoding,
    pub mixer: Mixer,
    pub depth: usize,
}

impl AnsatzConfig {
    pub fn validate(&self) -> Result<(), QaoaError> {
        let compatible = match self.mixer {
            Mixer::X => self.encoding.is_full(),
            Mixer::Lx => self.encoding == Encoding::Subspace,
            Mixer::Grover | Mixer::GroverBox => true,
        };
        if !compatible {
            return Err(QaoaError::Incompatible { encoding: self.encoding, mixer: self.mixer });
        }
        if self.k < 2 {
            return Err(QaoaError::UnsupportedK(self.k, "k must be at least 2".into()));
        }
        if self.encoding == Encoding::Subspace && !matches!(self.k, 3 | 5 | 6 | 7) {
            return Err(QaoaError::UnsupportedK(
                self.k,
                "subspace preparations exist for k in {3, 5, 6, 7}".into(),
            ));
        }
        Ok(())
    }
}

/// Cut values compressed to (distinct values, per-state index); the number
/// of distinct cut values is tiny next to `2^n`, so per-layer phase tables
/// need few sin/cos evaluations.
struct CompressedDiag {
    values: Vec<f64>,
    index: Vec<u32>,
}

impl CompressedDiag {
    fn new(diag: &[f64]) -> Self {
        let mut values: Vec<f64> = diag.to_vec();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let index = diag
            .iter()
            .map(|d| values.binary_search_by(|v| v.total_cmp(d)).unwrap() as u32)
            .collect();
        Self { values, index }
    }

    fn apply_phase(&self, state: &mut Statevector, scale: f64) -> Result<(), SimError> {
        let phases: Vec<C64> =
            self.values.iter().map(|&v| C64::from_polar(1.0, scale * v)).collect();
        state.apply_indexed_phase(&self.index, &phases)
    }
}

enum MixerPlan {
    /// Identical block unitary on every vertex register, built per angle.
    PerVertex(Box<dyn Fn(f64) -> Vec<C64> + Sync + Send>),
    /// Global Grover: per-vertex prep blocks around one phase on |0..0>.
    GlobalGrover { prep: Vec<C64>, prep_dag: Vec<C64> },
}

/// A ready-to-run ansatz bound to one graph: precomputed diagonals, initial
/// state, mixer plan, and the exact optimum for approximation ratios.
pub struct QaoaEngine {
    config: AnsatzConfig,
    num_vertices: usize,
    n_k: u32,
    num_qubits: usize,
    /// Drives the phase separator: cut values under the separator's own
    /// relation.
    phase_diag: CompressedDiag,
    /// Measured at the end: cut values under the encoding's decode.
    expect_diag: Vec<f64>,
    init: Statevector,
    plan: MixerPlan,
    /// `true` for feasible basis states; empty for full encodings.
    feasible: Vec<bool>,
    optimum: f64,
}

fn flat_unitary(c: &Circuit) -> Vec<C64> {
    let u = c.unitary().expect("per-vertex blocks stay under the unitary cap");
    u.rows().into_iter().flat_map(|r| r.to_vec()).collect()
}

impl QaoaEngine {
    pub fn new(graph: &Graph, config: AnsatzConfig) -> Result<Self, QaoaError> {
        config.validate()?;
        let k = config.k;
        let n_k = qubits_per_vertex(k);
        let num_vertices = graph.num_vertices();
        let num_qubits = num_vertices * n_k as usize;

        // Relation the separator phases follow. The subspace ansatz uses the
        // power-of-two separator, i.e. phases on equal raw labels.
        let phase_rel = match config.encoding {
            Encoding::Subspace => ColorRelation::trivial(n_k),
            full => ColorRelation::by_variant(k, full.variant()),
        };
        // Relation behind the measured cut values. On feasible states the
        // merged-tail decode is the identity on labels < k, which is what
        // the subspace encoding means by its colors.
        let expect_rel = match config.encoding {
            Encoding::Subspace => ColorRelation::less_than(k),
            full => ColorRelation::by_variant(k, full.variant()),
        };
        let phase_diag = CompressedDiag::new(&cost_diagonal(graph, &phase_rel));
        let expect_diag = cost_diagonal(graph, &expect_rel);

        let vertex_prep = match config.encoding {
            Encoding::Subspace => {
                prepare_subspace_real(k).map_err(|e| QaoaError::UnsupportedK(k, e.to_string()))?
            }
            _ => prepare_plus(n_k as usize),
        };
        let prep_block = flat_unitary(&vertex_prep);
        let mut init = Statevector::zero(num_qubits)?;
        for v in 0..num_vertices {
            init.apply_block_unitary(v * n_k as usize, n_k as usize, &prep_block)?;
        }

        let plan = match config.mixer {
            Mixer::X => {
                let width = n_k as usize;
                MixerPlan::PerVertex(Box::new(move |beta| flat_unitary(&mixer_x(width, beta))))
            }
            Mixer::Lx => MixerPlan::PerVertex(Box::new(move |beta| {
                flat_unitary(&mixer_lx(k, beta).expect("validated k"))
            })),
            Mixer::GroverBox => {
                let prep = vertex_prep.clone();
                MixerPlan::PerVertex(Box::new(move |beta| flat_unitary(&mixer_grover(&prep, beta))))
            }
            Mixer::Grover => MixerPlan::GlobalGrover {
                prep: prep_block.clone(),
                prep_dag: flat_unitary(&vertex_prep.dagger()),
            },
        };

        let feasible = if config.encoding == Encoding::Subspace {
            let mask = (1usize << n_k) - 1;
            (0..1usize << num_qubits)
                .map(|x| {
                    (0..num_vertices).all(|v| {
                        let shift = (num_vertices - 1 - v) * n_k as usize;
                        ((x >> shift) & mask) < k as usize
                    })
                })
                .collect()
        } else {
            Vec::new()
        };

        let optimum = brute_force_max_kcut(graph, k)?.optimum;

        Ok(Self {
            config,
            num_vertices,
            n_k,
            num_qubits,
            phase_diag,
            expect_diag,
            init,
            plan,
            feasible,
            optimum,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn optimum(&self) -> f64 {
        self.optimum
    }

    pub fn config(&self) -> AnsatzConfig {
        self.config
    }

    fn apply_mixer(&self, state: &mut Statevector, beta: f64) -> Result<(), SimError> {
        let width = self.n_k as usize;
        match &self.plan {
            MixerPlan::PerVertex(build) => {
                let block = build(beta);
                for v in 0..self.num_vertices {
                    state.apply_block_unitary(v * width, width, &block)?;
                }
            }
            MixerPlan::GlobalGrover { prep, prep_dag } => {
                for v in 0..self.num_vertices {
                    state.apply_block_unitary(v * width, width, prep_dag)?;
                }
                // e^{-i beta} on the all-zero string marks |F>.
                let pattern = (0..self.num_qubits).map(|q| (q, false)).collect();
                state.apply(&Gate::pattern_phase(pattern, -beta))?;
                for v in 0..self.num_vertices {
                    state.apply_block_unitary(v * width, width, prep)?;
                }
            }
        }
        Ok(())
    }

    /// Runs the ansatz at the given schedule and returns the statevector.
    pub fn run(&self, gammas: &[f64], betas: &[f64]) -> Result<Statevector, QaoaError> {
        if gammas.len() != betas.len() || gammas.is_empty() {
            return Err(QaoaError::BadParameters { gammas: gammas.len(), betas: betas.len() });
        }
        let mut state = self.init.clone();
        for (&gamma, &beta) in gammas.iter().zip(betas) {
            // e^{i gamma w} on equal-color pairs equals e^{-i gamma cost(x)}
            // up to a global phase, which expectation values ignore.
            self.phase_diag.apply_phase(&mut state, -gamma)?;
            self.apply_mixer(&mut state, beta)?;
        }
        if !self.feasible.is_empty() {
            let leak = state.probability_outside(&self.feasible);
            if leak > SUBSPACE_LEAK_TOLERANCE {
                return Err(QaoaError::SubspaceLeak(leak));
            }
        }
        Ok(state)
    }

    /// Cut expectation and approximation ratio at the given schedule.
    pub fn evaluate(&self, gammas: &[f64], betas: &[f64]) -> Result<(f64, f64), QaoaError> {
        let state = self.run(gammas, betas)?;
        let expectation = state.expectation(&self.expect_diag)?;
        let alpha = if self.optimum > 0.0 { expectation / self.optimum } else { 1.0 };
        Ok((expectation, alpha))
    }
}

// ============================================================================
// Landscapes
// ============================================================================

/// Default search box: `gamma` in `[0, 2pi)` always; `beta` in `[0, pi)`
/// for the X mixer (period pi) and `[0, 2pi)` otherwise.
pub fn default_ranges(mixer: Mixer) -> ((f64, f64), (f64, f64)) {
    use std::f64::consts::PI;
    let beta_hi = if mixer == Mixer::X { PI } else { 2.0 * PI };
    ((0.0, 2.0 * PI), (0.0, beta_hi))
}

#[derive(Debug, Clone)]
pub struct LandscapeOpts {
    pub resolution: usize,
    pub gamma_range: (f64, f64),
    pub beta_range: (f64, f64),
}

impl LandscapeOpts {
    pub fn for_mixer(mixer: Mixer, resolution: usize) -> Self {
        let (gamma_range, beta_range) = default_ranges(mixer);
        Self { resolution, gamma_range, beta_range }
    }
}

/// Depth-1 approximation-ratio grid, row-major over `(gamma, beta)` with
/// half-open ranges. Points run in parallel, gathered in grid order.
pub fn landscape(
    engine: &QaoaEngine,
    opts: &LandscapeOpts,
) -> Result<Vec<(f64, f64, f64)>, QaoaError> {
    let res = opts.resolution;
    let gamma_step = (opts.gamma_range.1 - opts.gamma_range.0) / res as f64;
    let beta_step = (opts.beta_range.1 - opts.beta_range.0) / res as f64;
    let point = |idx: usize| -> Result<(f64, f64, f64), QaoaError> {
        let (i, j) = (idx / res, idx % res);
        let gamma = opts.gamma_range.0 + i as f64 * gamma_step;
        let beta = opts.beta_range.0 + j as f64 * beta_step;
        let (_, alpha) = engine.evaluate(&[gamma], &[beta])?;
        Ok((gamma, beta, alpha))
    };
    #[cfg(feature = "parallel")]
    let rows: Result<Vec<_>, _> = (0..res * res).into_par_iter().map(point).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Result<Vec<_>, _> = (0..res * res).map(point).collect();
    rows
}

/// Formats a float with 12 significant digits, the crate-wide convention
/// for numeric text output.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Writes `gamma,beta,alpha` rows (one header line first).
pub fn write_landscape_csv(
    rows: &[(f64, f64, f64)],
    mut out: impl std::io::Write,
) -> std::io::Result<()> {
    writeln!(out, "gamma,beta,alpha")?;
    for (g, b, a) in rows {
        writeln!(out, "{},{},{}", sig12(*g), sig12(*b), sig12(*a))?;
    }
    Ok(())
}

// ============================================================================
// Optimization
// ============================================================================

#[derive(Debug, Clone)]
pub struct OptimizeOpts {
    /// Grid resolution for the depth-1 coarse scan.
    pub grid: usize,
    pub nm_max_iter: usize,
    pub nm_tolerance: f64,
    pub gamma_range: (f64, f64),
    pub beta_range: (f64, f64),
}

impl OptimizeOpts {
    pub fn for_mixer(mixer: Mixer) -> Self {
        let (gamma_range, beta_range) = default_ranges(mixer);
        Self { grid: 32, nm_max_iter: 500, nm_tolerance: 1e-6, gamma_range, beta_range }
    }

    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid = grid;
        self
    }
}

/// One optimized depth: the schedule found, its expectation and ratio.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: AnsatzConfig,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub expectation: f64,
    pub alpha: f64,
    pub optimum: f64,
    pub seed: u64,
    /// Not serialized: repeated runs should produce byte-identical records.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

/// Linear reparametrization of a depth-p schedule to depth p+1, the
/// interpolation heuristic for warm-starting the next depth.
pub fn interpolate_schedule(params: &[f64]) -> Vec<f64> {
    let p = params.len();
    let mut out = Vec::with_capacity(p + 1);
    for i in 0..=p {
        let left = if i == 0 { 0.0 } else { params[i - 1] * (i as f64 / p as f64) };
        let right = if i == p { 0.0 } else { params[i] * ((p - i) as f64 / p as f64) };
        out.push(left + right);
    }
    out
}

/// Optimizes depths `1..=p_max`; deterministic for fixed options.
///
/// Depth 1 seeds Nelder-Mead from the best coarse-grid point. Each later
/// depth seeds the simplex with both the interpolated previous schedule and
/// the zero-padded previous optimum (a zero layer is the identity), so the
/// reported ratio never regresses below the previous depth.
pub fn optimize_schedule(
    engine: &QaoaEngine,
    p_max: usize,
    opts: &OptimizeOpts,
    seed: u64,
) -> Result<Vec<RunRecord>, QaoaError> {
    let mut records: Vec<RunRecord> = Vec::with_capacity(p_max);
    let mut best_prev: Option<(Vec<f64>, Vec<f64>)> = None;

    for depth in 1..=p_max {
        let start = std::time::Instant::now();
        let seeds: Vec<Vec<f64>> = match &best_prev {
            None => {
                let (g0, b0) = grid_best(engine, opts)?;
                vec![vec![g0, b0]]
            }
            Some((gs, bs)) => {
                let interpolated: Vec<f64> = interpolate_schedule(gs)
                    .into_iter()
                    .chain(interpolate_schedule(bs))
                    .collect();
                let mut padded: Vec<f64> = gs.clone();
                padded.push(0.0);
                padded.extend(bs.iter().copied());
                padded.push(0.0);
                vec![interpolated, padded]
            }
        };
        let dim = 2 * depth;
        let gamma_scale = (opts.gamma_range.1 - opts.gamma_range.0) / opts.grid.max(8) as f64;
        let beta_scale = (opts.beta_range.1 - opts.beta_range.0) / opts.grid.max(8) as f64;
        let steps: Vec<f64> = (0..dim)
            .map(|i| if i < depth { gamma_scale } else { beta_scale })
            .collect();
        let objective = |x: &[f64]| -> f64 {
            let (gammas, betas) = x.split_at(depth);
            match engine.evaluate(gammas, betas) {
                Ok((_, alpha)) => -alpha,
                Err(_) => f64::INFINITY,
            }
        };
        let (best_x, _) =
            nelder_mead(objective, &seeds, &steps, opts.nm_max_iter, opts.nm_tolerance);
        let (gammas, betas) = best_x.split_at(depth);
        let (expectation, alpha) = engine.evaluate(gammas, betas)?;
        records.push(RunRecord {
            config: AnsatzConfig { depth, ..engine.config() },
            gammas: gammas.to_vec(),
            betas: betas.to_vec(),
            expectation,
            alpha,
            optimum: engine.optimum(),
            seed,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        best_prev = Some((gammas.to_vec(), betas.to_vec()));
    }
    Ok(records)
}

/// Best point of the depth-1 coarse grid.
fn grid_best(engine: &QaoaEngine, opts: &OptimizeOpts) -> Result<(f64, f64), QaoaError> {
    let res = opts.grid;
    let gamma_step = (opts.gamma_range.1 - opts.gamma_range.0) / res as f64;
    let beta_step = (opts.beta_range.1 - opts.beta_range.0) / res as f64;
    let eval = |idx: usize| -> Result<(f64, usize), QaoaError> {
        let (i, j) = (idx / res, idx % res);
        let gamma = opts.gamma_range.0 + i as f64 * gamma_step;
        let beta = opts.beta_range.0 + j as f64 * beta_step;
        let (_, alpha) = engine.evaluate(&[gamma], &[beta])?;
        Ok((alpha, idx))
    };
    #[cfg(feature = "parallel")]
    let results: Result<Vec<_>, _> = (0..res * res).into_par_iter().map(eval).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Result<Vec<_>, _> = (0..res * res).map(eval).collect();
    // Deterministic argmax: highest alpha, lowest index on ties.
    let (_, best_idx) = results?
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("grid is nonempty");
    Ok((
        opts.gamma_range.0 + (best_idx / res) as f64 * gamma_step,
        opts.beta_range.0 + (best_idx % res) as f64 * beta_step,
    ))
}

/// Plain Nelder-Mead with the standard coefficients. The simplex starts
/// from the given seed points, padded with coordinate steps off the first
/// seed. Deterministic.
fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    seeds: &[Vec<f64>],
    steps: &[f64],
    max_iter: usize,
    tolerance: f64,
) -> (Vec<f64>, f64) {
    let dim = steps.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    for s in seeds.iter().take(dim + 1) {
        simplex.push(s.clone());
    }
    let base = seeds[0].clone();
    let mut coord = 0usize;
    while simplex.len() < dim + 1 {
        let mut v = base.clone();
        v[coord] += steps[coord];
        simplex.push(v);
        coord += 1;
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalued: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalued;

        if (values[dim] - values[0]).abs() < tolerance {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|c| simplex[..dim].iter().map(|v| v[c]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let reflect: Vec<f64> =
            (0..dim).map(|c| centroid[c] + alpha * (centroid[c] - worst[c])).collect();
        let f_reflect = f(&reflect);

        if f_reflect < values[0] {
            let expand: Vec<f64> =
                (0..dim).map(|c| centroid[c] + gamma * (reflect[c] - centroid[c])).collect();
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                simplex[dim] = expand;
                values[dim] = f_expand;
            } else {
                simplex[dim] = reflect;
                values[dim] = f_reflect;
            }
        } else if f_reflect < values[dim - 1] {
            simplex[dim] = reflect;
            values[dim] = f_reflect;
        } else {
            let contract: Vec<f64> =
                (0..dim).map(|c| centroid[c] + rho * (worst[c] - centroid[c])).collect();
            let f_contract = f(&contract);
            if f_contract < values[dim] {
                simplex[dim] = contract;
                values[dim] = f_contract;
            } else {
                for i in 1..=dim {
                    let shrunk: Vec<f64> = (0..dim)
                        .map(|c| simplex[0][c] + sigma * (simplex[i][c] - simplex[0][c]))
                        .collect();
                    values[i] = f(&shrunk);
                    simplex[i] = shrunk;
                }
            }
        }
    }
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    (simplex[best].clone(), values[best])
}

// ============================================================================
// Resource reports
// ============================================================================

/// Where a mixer's census applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixerScope {
    PerVertex,
    Global,
}

/// Census plus its rendered string, so JSON output stays readable.
#[derive(Debug, Clone, Serialize)]
pub struct CensusOut {
    pub counts: std::collections::BTreeMap<String, usize>,
    pub rendered: String,
}

impl From<&Census> for CensusOut {
    fn from(census: &Census) -> Self {
        CensusOut {
            counts: census.0.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            rendered: census.to_string(),
        }
    }
}

/// Per-layer gate counts of an ansatz, split into the per-edge separator,
/// the mixer, and the one-time initial state.
#[derive(Debug, Clone, Serialize)]
pub struct ResourceReport {
    pub config: AnsatzConfig,
    pub separator_per_edge: CensusOut,
    pub mixer_scope: MixerScope,
    /// Per vertex for per-vertex mixers; for the global Grover mixer, the
    /// per-vertex prep/unprep part, with the single global phase noted in
    /// the formula.
    pub mixer_census: CensusOut,
    pub prep_per_vertex: CensusOut,
    pub separator_cx_per_edge: u64,
    pub mixer_cx: u64,
    pub prep_cx_per_vertex: u64,
    /// CX-equivalent cost of one layer as a formula in |V| and |E|.
    pub per_layer_formula: String,
    /// The same counts for the ancilla-based construction these separators
    /// replace (full encodings, k not a power of two): `a(a-1)` repetitions
    /// of a (4 C^{n_k}X, 1 C2Ph) subcircuit with `a = 2^{n_k} - (k-1)`,
    /// next to one C^{n_k-1}Ph and 2 n_k CX.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prior_work_per_edge: Option<String>,
}

/// Builds the per-layer resource summary for an ansatz; counts are per edge
/// and per vertex, independent of a concrete graph.
pub fn resource_report(
    config: AnsatzConfig,
    table: &CostTable,
) -> Result<ResourceReport, QaoaError> {
    config.validate()?;
    let k = config.k;
    let n_k = qubits_per_vertex(k);
    let angle = 0.731; // censuses are angle-independent

    let separator = match config.encoding {
        Encoding::Subspace => crate::ansatz::phase_separator_power2(n_k, angle),
        full => crate::ansatz::separators::separator_for(k, full.variant(), angle)
            .map_err(|e| QaoaError::UnsupportedK(k, e.to_string()))?,
    };
    let prep = match config.encoding {
        Encoding::Subspace => {
            prepare_subspace_real(k).map_err(|e| QaoaError::UnsupportedK(k, e.to_string()))?
        }
        _ => prepare_plus(n_k as usize),
    };
    let (mixer_circuit, mixer_scope) = match config.mixer {
        Mixer::X => (mixer_x(n_k as usize, angle), MixerScope::PerVertex),
        Mixer::Lx => (
            mixer_lx(k, angle).ok_or_else(|| {
                QaoaError::UnsupportedK(k, "LX mixer defined for k in {3, 5, 6, 7}".into())
            })?,
            MixerScope::PerVertex,
        ),
        Mixer::GroverBox => (mixer_grover(&prep, angle), MixerScope::PerVertex),
        Mixer::Grover => {
            // Per-vertex part only: unprep then prep; the global zero-string
            // phase spans all |V| * n_k qubits and is noted in the formula.
            let mut c = prep.dagger();
            c.concat(&prep);
            (c, MixerScope::Global)
        }
    };

    let sep_census = separator.census();
    let prep_census = prep.census();
    let mixer_census = mixer_circuit.census();

    let separator_cx = cx_equivalent_cost(&separator, table).map_err(map_cost_err)?;
    let prep_cx = cx_equivalent_cost(&prep, table).map_err(map_cost_err)?;
    let mixer_cx = cx_equivalent_cost(&mixer_circuit, table).map_err(map_cost_err)?;

    let per_layer_formula = match mixer_scope {
        MixerScope::PerVertex => format!("{separator_cx}|E| + {mixer_cx}|V| CX per layer"),
        MixerScope::Global => format!(
            "{separator_cx}|E| + {mixer_cx}|V| CX + one C(|V|*{n_k}-1)Ph per layer"
        ),
    };

    let prior_work_per_edge = if config.encoding.is_full() && !k.is_power_of_two() {
        let a = (1u64 << n_k) - (k as u64 - 1);
        let reps = a * (a - 1);
        let head = crate::circuit::GateClass::Phase(n_k as usize - 1);
        let body_x = crate::circuit::GateClass::X(n_k as usize);
        Some(format!("1{head}, {reps}(4{body_x}, 1C2Ph), {}CX", 2 * n_k))
    } else {
        None
    };

    Ok(ResourceReport {
        config,
        separator_per_edge: (&sep_census).into(),
        mixer_scope,
        mixer_census: (&mixer_census).into(),
        prep_per_vertex: (&prep_census).into(),
        separator_cx_per_edge: separator_cx,
        mixer_cx,
        prep_cx_per_vertex: prep_cx,
        per_layer_formula,
        prior_work_per_edge,
    })
}

fn map_cost_err(e: crate::circuit::CircuitError) -> QaoaError {
    QaoaError::UnsupportedK(0, e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::separators::separator_for;
    use crate::graph::generate_erdos_renyi;

    fn single_edge() -> Graph {
        Graph::new(2, vec![(0, 1, 1.0)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn config_compatibility() {
        let bad = AnsatzConfig { k: 3, encoding: Encoding::Subspace, mixer: Mixer::X, depth: 1 };
        assert!(bad.validate().is_err());
        let bad2 = AnsatzConfig { k: 3, encoding: Encoding::FullLt, mixer: Mixer::Lx, depth: 1 };
        assert!(bad2.validate().is_err());
        let ok =
            AnsatzConfig { k: 5, encoding: Encoding::Subspace, mixer: Mixer::GroverBox, depth: 2 };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn zero_angles_give_uniform_ratio() {
        // k = 2, single edge, |+> start: the uniform state cuts with
        // probability 1/2.
        let engine = QaoaEngine::new(
            &single_edge(),
            AnsatzConfig { k: 2, encoding: Encoding::FullLt, mixer: Mixer::X, depth: 1 },
        )
        .unwrap();
        let (e, alpha) = engine.evaluate(&[0.0], &[0.0]).unwrap();
        assert!((e - 0.5).abs() < 1e-12);
        assert!((alpha - 0.5).abs() < 1e-12);
    }

    #[test]
    fn subspace_zero_angles_give_two_thirds() {
        // Independent uniform colors on one edge: P(differ) = 1 - 1/3.
        let engine = QaoaEngine::new(
            &single_edge(),
            AnsatzConfig { k: 3, encoding: Encoding::Subspace, mixer: Mixer::Lx, depth: 1 },
        )
        .unwrap();
        let (e, alpha) = engine.evaluate(&[0.0], &[0.0]).unwrap();
        assert!((e - 2.0 / 3.0).abs() < 1e-12);
        assert!((alpha - 2.0 / 3.0).abs() < 1e-12);
    }

    /// Maps a gate built on `2 n_k` separator qubits (registers `0..n_k`
    /// and `n_k..`) onto the blocks of two vertices.
    fn remap_two_registers(gate: &Gate, u_base: usize, v_base: usize, n_k: usize) -> Gate {
        let map = |q: usize| if q < n_k { u_base + q } else { v_base + (q - n_k) };
        let mc = |cs: &[(usize, bool)]| cs.iter().map(|&(q, b)| (map(q), b)).collect();
        match gate {
            Gate::X { controls, target } => {
                Gate::X { controls: mc(controls), target: map(*target) }
            }
            Gate::H { controls, target } => {
                Gate::H { controls: mc(controls), target: map(*target) }
            }
            Gate::Rx { target, theta } => Gate::Rx { target: map(*target), theta: *theta },
            Gate::Ry { controls, target, theta } => {
                Gate::Ry { controls: mc(controls), target: map(*target), theta: *theta }
            }
            Gate::Rz { target, theta } => Gate::Rz { target: map(*target), theta: *theta },
            Gate::Phase { pattern, t } => Gate::Phase { pattern: mc(pattern), t: *t },
            Gate::Rxy { a, b, t } => Gate::Rxy { a: map(*a), b: map(*b), t: *t },
            Gate::PauliRot { qubits, axes, theta } => Gate::PauliRot {
                qubits: qubits.iter().map(|&q| map(q)).collect(),
                axes: axes.clone(),
                theta: *theta,
            },
        }
    }

    #[test]
    fn engine_matches_explicit_circuit_layers() {
        // Dual route: the compressed-diagonal + block-unitary engine versus
        // literal per-edge separator circuits and per-vertex mixer gates.
        let g = triangle();
        let configs = [
            AnsatzConfig { k: 3, encoding: Encoding::FullLt, mixer: Mixer::X, depth: 2 },
            AnsatzConfig { k: 3, encoding: Encoding::Subspace, mixer: Mixer::Lx, depth: 2 },
            AnsatzConfig { k: 3, encoding: Encoding::Subspace, mixer: Mixer::GroverBox, depth: 2 },
            AnsatzConfig { k: 3, encoding: Encoding::Subspace, mixer: Mixer::Grover, depth: 2 },
        ];
        let gammas = [0.71, -0.32];
        let betas = [0.45, 1.2];
        for config in configs {
            let engine = QaoaEngine::new(&g, config).unwrap();
            let fast = engine.run(&gammas, &betas).unwrap();

            let n_k = qubits_per_vertex(config.k) as usize;
            let n = g.num_vertices() * n_k;
            let mut slow = Statevector::zero(n).unwrap();
            match config.encoding {
                Encoding::Subspace => {
                    let prep = prepare_subspace_real(config.k).unwrap();
                    for v in 0..g.num_vertices() {
                        for gate in prep.gates() {
                            slow.apply(&gate.shifted(v * n_k)).unwrap();
                        }
                    }
                }
                _ => slow.apply_circuit(&prepare_plus(n)).unwrap(),
            }
            for layer in 0..gammas.len() {
                for &(u, v, w) in g.edges() {
                    let sep = match config.encoding {
                        Encoding::Subspace => {
                            crate::ansatz::phase_separator_power2(n_k as u32, gammas[layer] * w)
                        }
                        full => {
                            separator_for(config.k, full.variant(), gammas[layer] * w).unwrap()
                        }
                    };
                    for gate in sep.gates() {
                        slow.apply(&remap_two_registers(gate, u * n_k, v * n_k, n_k)).unwrap();
                    }
                }
                let beta = betas[layer];
                match config.mixer {
                    Mixer::X => slow.apply_circuit(&mixer_x(n, beta)).unwrap(),
                    Mixer::Lx => {
                        let m = mixer_lx(config.k, beta).unwrap();
                        for v in 0..g.num_vertices() {
                            for gate in m.gates() {
                                slow.apply(&gate.shifted(v * n_k)).unwrap();
                            }
                        }
                    }
                    Mixer::GroverBox => {
                        let prep = prepare_subspace_real(config.k).unwrap();
                        let m = mixer_grover(&prep, beta);
                        for v in 0..g.num_vertices() {
                            for gate in m.gates() {
                                slow.apply(&gate.shifted(v * n_k)).unwrap();
                            }
                        }
                    }
                    Mixer::Grover => {
                        let prep = prepare_subspace_real(config.k).unwrap();
                        let mut global_prep = Circuit::new(n);
                        for v in 0..g.num_vertices() {
                            global_prep.concat_shifted(&prep, v * n_k).unwrap();
                        }
                        slow.apply_circuit(&mixer_grover(&global_prep, beta)).unwrap();
                    }
                }
            }
            // The engine drops the global phase e^{i gamma W} per layer, so
            // compare via fidelity.
            let overlap: C64 = fast
                .amplitudes()
                .iter()
                .zip(slow.amplitudes())
                .map(|(a, b)| a.conj() * b)
                .sum();
            assert!(
                (overlap.norm() - 1.0).abs() < 1e-10,
                "{config:?}: fidelity {}",
                overlap.norm()
            );
            let diag = cost_diagonal(&g, &ColorRelation::less_than(config.k));
            let ef = fast.expectation(&diag).unwrap();
            let es = slow.expectation(&diag).unwrap();
            assert!((ef - es).abs() < 1e-10);
        }
    }

    #[test]
    fn landscape_shape_and_gamma_zero_row_is_constant() {
        let engine = QaoaEngine::new(
            &triangle(),
            AnsatzConfig { k: 3, encoding: Encoding::FullLt, mixer: Mixer::X, depth: 1 },
        )
        .unwrap();
        let rows = landscape(&engine, &LandscapeOpts::for_mixer(Mixer::X, 8)).unwrap();
        assert_eq!(rows.len(), 64);
        // gamma = 0: the separator is the identity, so alpha is flat in beta.
        let first: Vec<f64> = rows.iter().filter(|r| r.0 == 0.0).map(|r| r.2).collect();
        assert_eq!(first.len(), 8);
        for a in &first {
            assert!((a - first[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn optimizer_beats_grid_and_is_deterministic() {
        let engine = QaoaEngine::new(
            &triangle(),
            AnsatzConfig { k: 3, encoding: Encoding::Subspace, mixer: Mixer::GroverBox, depth: 1 },
        )
        .unwrap();
        let opts = OptimizeOpts::for_mixer(Mixer::GroverBox).with_grid(16);
        let records = optimize_schedule(&engine, 1, &opts, 7).unwrap();
        let grid_rows =
            landscape(&engine, &LandscapeOpts::for_mixer(Mixer::GroverBox, 16)).unwrap();
        let grid_max = grid_rows.iter().map(|r| r.2).fold(f64::MIN, f64::max);
        assert!(records[0].alpha + 1e-9 >= grid_max);

        let again = optimize_schedule(&engine, 1, &opts, 7).unwrap();
        assert_eq!(records[0].gammas, again[0].gammas);
        assert_eq!(records[0].betas, again[0].betas);
        assert_eq!(records[0].alpha, again[0].alpha);
    }

    #[test]
    fn depth_schedule_is_monotone() {
        let g = generate_erdos_renyi(4, 0.8, 3).unwrap();
        let engine = QaoaEngine::new(
            &g,
            AnsatzConfig { k: 3, encoding: Encoding::FullLt, mixer: Mixer::X, depth: 1 },
        )
        .unwrap();
        let opts = OptimizeOpts::for_mixer(Mixer::X).with_grid(12);
        let records = optimize_schedule(&engine, 3, &opts, 1).unwrap();
        for w in records.windows(2) {
            assert!(w[1].alpha >= w[0].alpha - 5e-3, "{} then {}", w[0].alpha, w[1].alpha);
        }
    }

    #[test]
    fn interpolation_endpoints() {
        let out = interpolate_schedule(&[1.0, 2.0, 3.0]);
        assert_eq!(out.len(), 4);
        assert!((out[0] - 1.0).abs() < 1e-15);
        assert!((out[3] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_is_one_exactly_on_optimal_basis_states() {
        let g = triangle();
        let engine = QaoaEngine::new(
            &g,
            AnsatzConfig { k: 3, encoding: Encoding::FullLt, mixer: Mixer::X, depth: 1 },
        )
        .unwrap();
        // Rainbow coloring (0, 1, 2) -> labels 00 01 10 -> index 0b000110.
        let diag = cost_diagonal(&g, &ColorRelation::less_than(3));
        let s = Statevector::basis(6, 0b000110).unwrap();
        assert_eq!(s.expectation(&diag).unwrap(), engine.optimum());
    }

    #[test]
    fn expectation_invariant_under_witness_color_permutation() {
        let diag = cost_diagonal(&triangle(), &ColorRelation::less_than(3));
        // Colorings (0,1,2) and (2,0,1) are label permutations of each
        // other; the diagonal entries agree.
        assert_eq!(diag[0b000110], diag[0b100001]);
    }

    #[test]
    fn resource_report_examples() {
        let table = CostTable::default();
        let r = resource_report(
            AnsatzConfig { k: 3, encoding: Encoding::FullLt, mixer: Mixer::X, depth: 1 },
            &table,
        )
        .unwrap();
        assert_eq!(r.separator_per_edge.rendered, "2CX, 1CPh, 1C2Ph");

        let r5 = resource_report(
            AnsatzConfig { k: 5, encoding: Encoding::FullLt, mixer: Mixer::X, depth: 1 },
            &table,
        )
        .unwrap();
        assert_eq!(r5.separator_per_edge.rendered, "4CX, 1CPh, 1C3Ph");
        assert_eq!(r5.prior_work_per_edge.as_deref(), Some("1C2Ph, 12(4C3X, 1C2Ph), 6CX"));

        let r3 = resource_report(
            AnsatzConfig { k: 3, encoding: Encoding::Subspace, mixer: Mixer::Lx, depth: 1 },
            &table,
        )
        .unwrap();
        assert_eq!(r3.mixer_cx, 4);
        assert_eq!(r3.mixer_scope, MixerScope::PerVertex);

        // Power-of-two Grover-box: one C^{n_k - 1}Ph per vertex.
        let r4 = resource_report(
            AnsatzConfig { k: 4, encoding: Encoding::FullLt, mixer: Mixer::GroverBox, depth: 1 },
            &table,
        )
        .unwrap();
        assert_eq!(r4.mixer_census.counts.get("CPh"), Some(&1));
    }

    #[test]
    fn subspace_runs_do_not_leak() {
        let g = triangle();
        for mixer in [Mixer::Lx, Mixer::Grover, Mixer::GroverBox] {
            let engine = QaoaEngine::new(
                &g,
                AnsatzConfig { k: 5, encoding: Encoding::Subspace, mixer, depth: 2 },
            )
            .unwrap();
            // The run errors out if probability escapes the feasible span.
            engine.run(&[0.9, -1.3], &[0.4, 2.2]).unwrap();
        }
    }
}
