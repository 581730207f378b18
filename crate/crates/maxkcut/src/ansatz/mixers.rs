//! Mixers: plain X, the constrained LX family, and Grover reflections.
//!
//! LX mixer Hamiltonians are sums of terms `X^a * P`, an X-string times a
//! projector `P = (1/2^m) sum_S S` over the group generated by `m` Z-type
//! stabilizers. The strings inside one term commute, so each term
//! exponentiates exactly into one Pauli rotation per group element; terms
//! are applied as an ordered product. [`validate_mixer`] checks the two
//! requirements on any mixer numerically: it must keep feasible states in
//! the feasible span, and repeated application must connect every pair of
//! feasible basis states.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, PauliAxis};
use crate::coloring::qubits_per_vertex;
use crate::statevector::Statevector;

type C64 = Complex64;

/// Leakage above this is a preservation failure.
pub const LEAK_TOLERANCE: f64 = 1e-10;
/// Matrix elements above this count as transitions.
pub const TRANSITION_TOLERANCE: f64 = 1e-8;

/// `exp(-i beta X)` on every qubit; the unconstrained full-space mixer.
pub fn mixer_x(n: usize, beta: f64) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::Rx { target: q, theta: 2.0 * beta }).unwrap();
    }
    c
}

/// One LX term: an X string (bit per qubit, MSB first) with the Z-type
/// stabilizer generators of its projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LxTerm {
    pub n_k: u32,
    pub x_mask: u32,
    pub generators: &'static [u32],
    /// Number of listed generators; the projector coefficient is `1/2^m`.
    pub m: u32,
}

/// The per-vertex LX terms for k in {3, 5, 6, 7}, in application order.
/// Masks are MSB-first over the `n_k` qubits of one vertex register, e.g.
/// for `n_k = 3` the string `XII` is `0b100` and `IZI` is `0b010`.
pub fn lx_terms(k: u32) -> Option<&'static [LxTerm]> {
    const K3: &[LxTerm] = &[
        // IX<ZI>, XI<IZ>
        LxTerm { n_k: 2, x_mask: 0b01, generators: &[0b10], m: 1 },
        LxTerm { n_k: 2, x_mask: 0b10, generators: &[0b01], m: 1 },
    ];
    const K5: &[LxTerm] = &[
        // XII<IZI, IIZ>, IXI<ZII>, IIX<ZII>
        LxTerm { n_k: 3, x_mask: 0b100, generators: &[0b010, 0b001], m: 2 },
        LxTerm { n_k: 3, x_mask: 0b010, generators: &[0b100], m: 1 },
        LxTerm { n_k: 3, x_mask: 0b001, generators: &[0b100], m: 1 },
    ];
    const K6: &[LxTerm] = &[
        // XII<IZI>, IXI<ZII>, IIX<III>; the identity generator still halves
        // the coefficient, matching the 1/2^m normalization of the listing.
        LxTerm { n_k: 3, x_mask: 0b100, generators: &[0b010], m: 1 },
        LxTerm { n_k: 3, x_mask: 0b010, generators: &[0b100], m: 1 },
        LxTerm { n_k: 3, x_mask: 0b001, generators: &[0b000], m: 1 },
    ];
    const K7: &[LxTerm] = &[
        // XII<IZI>, IXI<IIZ>, IIX<ZII>
        LxTerm { n_k: 3, x_mask: 0b100, generators: &[0b010], m: 1 },
        LxTerm { n_k: 3, x_mask: 0b010, generators: &[0b001], m: 1 },
        LxTerm { n_k: 3, x_mask: 0b001, generators: &[0b100], m: 1 },
    ];
    match k {
        3 => Some(K3),
        5 => Some(K5),
        6 => Some(K6),
        7 => Some(K7),
        _ => None,
    }
}

/// Distinct Z-masks of the projector group, in subset order.
fn group_z_masks(term: &LxTerm) -> Vec<u32> {
    let mut masks = Vec::new();
    for subset in 0..(1u32 << term.generators.len()) {
        let mut z = 0u32;
        for (i, g) in term.generators.iter().enumerate() {
            if subset >> i & 1 == 1 {
                z ^= g;
            }
        }
        if !masks.contains(&z) {
            masks.push(z);
        }
    }
    masks
}

fn axes_for(n_k: u32, x_mask: u32, z_mask: u32) -> (Vec<usize>, Vec<PauliAxis>) {
    let mut qubits = Vec::new();
    let mut axes = Vec::new();
    for q in 0..n_k {
        let bit = 1u32 << (n_k - 1 - q);
        let (x, z) = (x_mask & bit != 0, z_mask & bit != 0);
        match (x, z) {
            (true, false) => {
                qubits.push(q as usize);
                axes.push(PauliAxis::X);
            }
            (false, true) => {
                qubits.push(q as usize);
                axes.push(PauliAxis::Z);
            }
            (true, true) => {
                qubits.push(q as usize);
                axes.push(PauliAxis::Y);
            }
            (false, false) => {}
        }
    }
    (qubits, axes)
}

/// Per-vertex LX mixer circuit on `n_k` qubits: `prod_terms exp(-i beta
/// X^a P)`, each term expanded into its commuting Pauli rotations with
/// angle `2 beta / 2^m` apiece.
pub fn mixer_lx(k: u32, beta: f64) -> Option<Circuit> {
    let terms = lx_terms(k)?;
    let n_k = qubits_per_vertex(k);
    let mut c = Circuit::new(n_k as usize);
    for term in terms {
        let theta = 2.0 * beta / (1u32 << term.m) as f64;
        for z in group_z_masks(term) {
            let (qubits, axes) = axes_for(term.n_k, term.x_mask, z);
            c.push(Gate::PauliRot { qubits, axes, theta }).unwrap();
        }
    }
    Some(c)
}

/// The feasible pairs each LX term couples at the Hamiltonian level: for a
/// term `X^a P`, the pairs `(x, x ^ a)` inside `{0, .., k-1}` on which the
/// projector is nonzero. This is the per-term transition diagram, distinct
/// from the transitions of the full product unitary.
pub fn lx_term_edges(k: u32) -> Option<Vec<BTreeSet<(u32, u32)>>> {
    let terms = lx_terms(k)?;
    let mut all = Vec::new();
    for term in terms {
        let mut edges = BTreeSet::new();
        for x in 0..k {
            let y = x ^ term.x_mask;
            if y >= k || y <= x {
                continue;
            }
            let in_projector = term
                .generators
                .iter()
                .all(|&g| (x & g).count_ones() % 2 == 0);
            if in_projector {
                edges.insert((x, y));
            }
        }
        all.push(edges);
    }
    Some(all)
}

/// Grover-style mixer over whatever `prep` prepares from `|0..0>`:
/// `U_S (pattern phase -beta on the all-zero string) U_S^dag`, which equals
/// `I - (1 - e^{-i beta}) |F><F|` for `|F> = U_S |0..0>`. Apply per vertex
/// block or once globally by choosing `prep`'s width.
pub fn mixer_grover(prep: &Circuit, beta: f64) -> Circuit {
    let n = prep.num_qubits();
    let mut c = prep.dagger();
    c.push(Gate::pattern_phase((0..n).map(|q| (q, false)).collect(), -beta)).unwrap();
    c.concat(prep);
    c
}

/// Validation report for a per-vertex mixer on a feasible label set.
#[derive(Debug, Clone)]
pub struct MixerReport {
    /// Largest probability observed outside the feasible span.
    pub max_leak: f64,
    pub preserves: bool,
    /// Whether transitions (over all sampled angles and powers up to |B|)
    /// connect the feasible basis states.
    pub connected: bool,
    /// Transitions of the mixer unitary itself (power 1), unioned over the
    /// sampled angles, as index pairs into `feasible`.
    pub unitary_edges: BTreeSet<(usize, usize)>,
    /// First preservation counterexample: (feasible state, beta, leak).
    pub first_leak: Option<(usize, f64, f64)>,
}

/// Checks subspace preservation and pairwise connectivity of a mixer
/// builder over a sampled grid of angles.
pub fn validate_mixer(
    build: impl Fn(f64) -> Circuit,
    feasible: &[usize],
    betas: &[f64],
) -> MixerReport {
    let n = build(betas.first().copied().unwrap_or(0.5)).num_qubits();
    let dim = 1usize << n;
    let mut keep = vec![false; dim];
    for &f in feasible {
        keep[f] = true;
    }
    let b = feasible.len();

    let mut max_leak = 0.0f64;
    let mut first_leak = None;
    let mut unitary_edges = BTreeSet::new();
    let mut reach = vec![false; b * b];

    for &beta in betas {
        let circuit = build(beta);
        // Columns of the mixer restricted to the feasible span.
        let mut m = vec![C64::new(0.0, 0.0); b * b];
        for (col, &fc) in feasible.iter().enumerate() {
            let mut s = Statevector::basis(n, fc).unwrap();
            s.apply_circuit(&circuit).unwrap();
            let leak = s.probability_outside(&keep);
            if leak > max_leak {
                max_leak = leak;
                if leak >= LEAK_TOLERANCE && first_leak.is_none() {
                    first_leak = Some((fc, beta, leak));
                }
            }
            for (row, &fr) in feasible.iter().enumerate() {
                m[row * b + col] = s.amplitudes()[fr];
            }
        }
        for row in 0..b {
            for col in 0..b {
                if m[row * b + col].norm() > TRANSITION_TOLERANCE && row != col {
                    unitary_edges.insert((row.min(col), row.max(col)));
                }
            }
        }
        // Accumulate transitions of powers U^r, r <= |B|.
        let mut a = m.clone();
        for _ in 0..b {
            for row in 0..b {
                for col in 0..b {
                    if a[row * b + col].norm() > TRANSITION_TOLERANCE {
                        reach[row * b + col] = true;
                    }
                }
            }
            a = mat_mul(&a, &m, b);
        }
    }

    // Connectivity of the accumulated transition graph.
    let mut parent: Vec<usize> = (0..b).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for row in 0..b {
        for col in 0..b {
            if reach[row * b + col] {
                let (a, c) = (find(&mut parent, row), find(&mut parent, col));
                if a != c {
                    parent[a] = c;
                }
            }
        }
    }
    let root = find(&mut parent, 0);
    let connected = (0..b).all(|x| find(&mut parent, x) == root);

    MixerReport {
        max_leak,
        preserves: max_leak < LEAK_TOLERANCE,
        connected,
        unitary_edges,
        first_leak,
    }
}

fn mat_mul(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Default angle grid for mixer validation: a handful of angles away from
/// the degenerate multiples of pi.
pub fn default_validation_betas() -> Vec<f64> {
    vec![0.3, 0.7, 1.1, 1.9, 2.6]
}
