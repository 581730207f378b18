//! Per-edge phase separators.
//!
//! Every separator acts on the `2 n_k` qubits of an edge's two vertex
//! registers (first register `0..n_k`, second `n_k..2n_k`) and must equal
//! the diagonal that applies `e^{it}` exactly on basis states `|i>|j>`
//! whose labels are equivalent colors. [`phase_separator_oracle`] computes
//! that diagonal directly from the relation and is the ground truth every
//! circuit here is tested against.
//!
//! A circuit's strategy is always the same: conjugate by CX (and, for the
//! six-color merged-tail relation, one Toffoli pair) so that chunks of the
//! equal-color set become coordinate patterns, then apply one
//! pattern-controlled phase per chunk. Open controls are encoded in the
//! pattern bits, never as explicit X gates.

use num_complex::Complex64;

use crate::circuit::{Circuit, CircuitError, Control, Gate};
use crate::coloring::{qubits_per_vertex, ColorRelation, RelationVariant};

type C64 = Complex64;

#[derive(Debug, thiserror::Error)]
pub enum SeparatorError {
    #[error("no separator circuit for k = {k} with the {variant} relation")]
    Unsupported { k: u32, variant: RelationVariant },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// The diagonal a separator must realize: entry `x = (i << n_k) | j` is
/// `e^{it}` when `i` and `j` are equivalent colors and 1 otherwise.
pub fn phase_separator_oracle(rel: &ColorRelation, t: f64) -> Vec<C64> {
    let n_k = rel.n_k();
    let dim = 1usize << (2 * n_k);
    let phase = C64::from_polar(1.0, t);
    let one = C64::new(1.0, 0.0);
    (0..dim)
        .map(|x| {
            let i = (x >> n_k) as u32;
            let j = (x as u32) & ((1 << n_k) - 1);
            if rel.same_color(i, j) {
                phase
            } else {
                one
            }
        })
        .collect()
}

fn open(qubits: impl IntoIterator<Item = usize>) -> Vec<Control> {
    qubits.into_iter().map(|q| (q, false)).collect()
}

fn closed(qubits: impl IntoIterator<Item = usize>) -> Vec<Control> {
    qubits.into_iter().map(|q| (q, true)).collect()
}

/// Separator for the trivial relation (`k = 2^{n_k}`): a CX ladder maps the
/// equal-label states `|y>|y>` onto `|y>|0>`, one open-pattern phase on the
/// second register marks them, and the ladder uncomputes. Costs `2 n_k` CX
/// and one `C^{n_k - 1}Ph`.
pub fn phase_separator_power2(n_k: u32, t: f64) -> Circuit {
    let n_k = n_k as usize;
    let mut c = Circuit::new(2 * n_k);
    for i in 0..n_k {
        c.push(Gate::cx(i, i + n_k)).unwrap();
    }
    c.push(Gate::pattern_phase(open(n_k..2 * n_k), t)).unwrap();
    for i in (0..n_k).rev() {
        c.push(Gate::cx(i, i + n_k)).unwrap();
    }
    c
}

/// Separator for the merged-tail relation with `k = 2^l + 1` colors
/// (`n_k = l + 1`).
///
/// The equal-color set splits in two: the `k - 1` plain colors contribute
/// the pairs `|0y>|0y>`, reachable with the power-of-two ladder minus its
/// first CX plus the first qubit joining the phase pattern; the merged tail
/// contributes every pair of labels with both top bits set, which is a
/// two-qubit closed pattern.
pub fn phase_separator_2l_plus1(l: u32, t: f64) -> Circuit {
    let n_k = (l + 1) as usize;
    let mut c = Circuit::new(2 * n_k);
    for i in 1..n_k {
        c.push(Gate::cx(i, i + n_k)).unwrap();
    }
    let mut pattern = open([0]);
    pattern.extend(open(n_k..2 * n_k));
    c.push(Gate::pattern_phase(pattern, t)).unwrap();
    for i in (1..n_k).rev() {
        c.push(Gate::cx(i, i + n_k)).unwrap();
    }
    c.push(Gate::pattern_phase(closed([0, n_k]), t)).unwrap();
    c
}

/// Separator circuits for `k` in {3, 5, 6, 7} under the merged-tail or the
/// balanced relation. `k = 3` and `k = 7` have a single relation, so both
/// variants return the same circuit.
pub fn phase_separator_k(
    k: u32,
    variant: RelationVariant,
    t: f64,
) -> Result<Circuit, SeparatorError> {
    match (k, variant) {
        (3, _) => Ok(phase_separator_2l_plus1(1, t)),
        (5, RelationVariant::LessThan) => Ok(phase_separator_2l_plus1(2, t)),
        (5, RelationVariant::Balanced) => Ok(separator_balanced5(t, true, true)),
        (6, RelationVariant::LessThan) => Ok(separator_less_than6(t)),
        (6, RelationVariant::Balanced) => Ok(separator_balanced5(t, true, false)),
        (7, _) => Ok(separator_balanced5(t, false, true)),
        _ => Err(SeparatorError::Unsupported { k, variant }),
    }
}

/// The three-block circuit behind the balanced-5, balanced-6 and 7-color
/// separators (6 qubits, registers (0,1,2) and (3,4,5)).
///
/// * Block 1 phases the eight equal-label pairs `|y>|y>` (power-of-two
///   ladder).
/// * Block 2 phases `(0,1), (1,0), (4,5), (5,4)`: with the first CX of the
///   ladder still active and one open-controlled CX folding "last bits
///   differ" into qubit 2, they are the open pattern on qubits 1..=4.
/// * Block 3 phases `(6,7), (7,6)`: a CX turns "last bits differ" into
///   qubit 5 and the rest is a closed pattern.
///
/// Balanced-6 drops block 3, the seven-color relation drops block 2. When
/// block 2 is present, its leading CX(0,3) cancels against the ladder's
/// closing CX(0,3) and both are omitted.
fn separator_balanced5(t: f64, with_pairs: bool, with_tail: bool) -> Circuit {
    let mut c = Circuit::new(6);
    c.push(Gate::cx(0, 3)).unwrap();
    c.push(Gate::cx(1, 4)).unwrap();
    c.push(Gate::cx(2, 5)).unwrap();
    c.push(Gate::pattern_phase(open([3, 4, 5]), t)).unwrap();
    c.push(Gate::cx(2, 5)).unwrap();
    c.push(Gate::cx(1, 4)).unwrap();
    if with_pairs {
        // CX(0,3) CX(0,3) at the block boundary cancel to the identity.
        c.push(Gate::cx_open(5, 2)).unwrap();
        c.push(Gate::pattern_phase(open([1, 2, 3, 4]), t)).unwrap();
        c.push(Gate::cx_open(5, 2)).unwrap();
        c.push(Gate::cx(0, 3)).unwrap();
    } else {
        c.push(Gate::cx(0, 3)).unwrap();
    }
    if with_tail {
        c.push(Gate::cx(2, 5)).unwrap();
        c.push(Gate::pattern_phase(closed([0, 1, 3, 4, 5]), t)).unwrap();
        c.push(Gate::cx(2, 5)).unwrap();
    }
    c
}

/// Separator for the six-color merged-tail relation (colors
/// `{0},..,{4},{5,6,7}`), in three blocks:
///
/// * the power-of-two ladder for the eight equal-label pairs;
/// * one pattern phase for `(5,6), (5,7)` (first register pinned to 101,
///   second to 11x);
/// * `(6,5), (6,7), (7,5), (7,6)` are not an affine set, so a Toffoli pair
///   folds `x5 ^ (x2 & x4)` into qubit 5 first, after which they are the
///   closed pattern on qubits 0, 1, 3, 5.
fn separator_less_than6(t: f64) -> Circuit {
    let mut c = phase_separator_power2(3, t);
    c.push(Gate::pattern_phase(
        vec![(0, true), (1, false), (2, true), (3, true), (4, true)],
        t,
    ))
    .unwrap();
    c.push(Gate::ccx(2, 4, 5)).unwrap();
    c.push(Gate::pattern_phase(closed([0, 1, 3, 5]), t)).unwrap();
    c.push(Gate::ccx(2, 4, 5)).unwrap();
    c
}

/// Worst deviation of a separator circuit from its oracle diagonal, over
/// the full matrix (every basis column, so off-diagonal leakage counts).
/// Returns `(max_deviation, row, column)`.
pub fn oracle_deviation(circuit: &Circuit, oracle: &[C64]) -> (f64, usize, usize) {
    use crate::statevector::Statevector;
    let n = circuit.num_qubits();
    debug_assert_eq!(oracle.len(), 1 << n);
    let mut worst = (0.0f64, 0usize, 0usize);
    for col in 0..1usize << n {
        let mut s = Statevector::basis(n, col).expect("separator widths are small");
        s.apply_circuit(circuit).expect("circuit fits its own qubit count");
        for (row, amp) in s.amplitudes().iter().enumerate() {
            let want = if row == col { oracle[col] } else { C64::new(0.0, 0.0) };
            let dev = (want - amp).norm();
            if dev > worst.0 {
                worst = (dev, row, col);
            }
        }
    }
    worst
}

/// The relation a `(k, variant)` separator realizes; the power-of-two cases
/// map to the trivial relation.
pub fn relation_for(k: u32, variant: RelationVariant) -> ColorRelation {
    if k.is_power_of_two() {
        ColorRelation::trivial(qubits_per_vertex(k))
    } else {
        ColorRelation::by_variant(k, variant)
    }
}

/// Builds the separator circuit for any supported `(k, variant)`:
/// power-of-two k via the ladder, k in {3, 5, 6, 7} via the hand-built
/// circuits, and any other `k = 2^l + 1` via the generalized ladder
/// (merged-tail relation only).
pub fn separator_for(k: u32, variant: RelationVariant, t: f64) -> Result<Circuit, SeparatorError> {
    if k.is_power_of_two() {
        return Ok(phase_separator_power2(qubits_per_vertex(k), t));
    }
    if matches!(k, 3 | 5 | 6 | 7) {
        return phase_separator_k(k, variant, t);
    }
    let l = qubits_per_vertex(k) - 1;
    if k == (1 << l) + 1 && variant == RelationVariant::LessThan {
        return Ok(phase_separator_2l_plus1(l, t));
    }
    Err(SeparatorError::Unsupported { k, variant })
}
