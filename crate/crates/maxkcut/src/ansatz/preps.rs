//! Initial-state preparation circuits.
//!
//! [`prepare_subspace`] builds, per vertex, the uniform superposition of the
//! first `k` color labels on `n_k` qubits. The circuits produce the right
//! magnitudes (`1/sqrt(k)` on labels `0..k`, zero elsewhere) but the RXY
//! step leaves a relative `-i` on part of the support; [`phase_correction`]
//! is the diagonal tail that turns every amplitude into the real positive
//! value `1/sqrt(k)` exactly, and [`prepare_subspace_real`] is the two glued
//! together. Grover mixers are built on the corrected circuit so that their
//! marked state is the real uniform superposition.
//!
//! Control polarities below are fixed by the target state, not by a reading
//! of any particular diagram: the split-off branch must stay parked on the
//! high labels while the rest of the register is spread out, which forces
//! the controlled gates to fire on the |0> branch of qubit 0 (k = 5, 7) and
//! the parking CX to fire on the |1> branch (k = 7).

use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Circuit, Gate};

#[derive(Debug, thiserror::Error)]
#[error("no subspace preparation for k = {0}; supported: 3, 5, 6, 7")]
pub struct UnsupportedPrep(pub u32);

/// `H` on every qubit: the uniform superposition over all of `2^n` labels.
pub fn prepare_plus(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::h(q)).unwrap();
    }
    c
}

/// Per-vertex preparation of `(1/sqrt(k)) sum_{i<k} |i>` up to per-state
/// phases, for k in {3, 5, 6, 7}.
pub fn prepare_subspace(k: u32) -> Result<Circuit, UnsupportedPrep> {
    let mut c;
    match k {
        3 => {
            // 1/sqrt(3) on {00, 01, 10}: an Ry split 1:2 and an RXY spread
            // of the heavy branch across {01, 10}.
            c = Circuit::new(2);
            c.push(Gate::Ry { controls: vec![], target: 0, theta: 2.0 * (1.0 / 3.0_f64.sqrt()).acos() })
                .unwrap();
            c.push(Gate::Rxy { a: 0, b: 1, t: FRAC_PI_2 }).unwrap();
        }
        5 => {
            // 1/sqrt(5) on {000, .., 100}: split off |100> with weight 1/5,
            // then Hadamards on the |0..> branch spread the rest 4 ways.
            c = Circuit::new(3);
            c.push(Gate::Ry { controls: vec![], target: 0, theta: 2.0 * (1.0 / 5.0_f64.sqrt()).asin() })
                .unwrap();
            c.push(Gate::H { controls: vec![(0, false)], target: 1 }).unwrap();
            c.push(Gate::H { controls: vec![(0, false)], target: 2 }).unwrap();
        }
        6 => {
            // 1/sqrt(6) on {000, .., 101}: qubit 2 is uniform, qubit 1
            // splits 1:2, and the RXY moves half the heavy branch to 10x.
            c = Circuit::new(3);
            c.push(Gate::Ry { controls: vec![], target: 1, theta: 2.0 * (1.0 / 3.0_f64.sqrt()).acos() })
                .unwrap();
            c.push(Gate::Ry { controls: vec![], target: 2, theta: FRAC_PI_2 }).unwrap();
            c.push(Gate::Rxy { a: 0, b: 1, t: FRAC_PI_2 }).unwrap();
        }
        7 => {
            // 1/sqrt(7) on {000, .., 110}: park a 1/7 branch on |110>, split
            // the rest 1/3 : 2/3 with qubit 2 uniform, then move half of the
            // heavy 01x weight to 10x.
            c = Circuit::new(3);
            c.push(Gate::Ry { controls: vec![], target: 0, theta: 2.0 * (1.0 / 7.0_f64.sqrt()).asin() })
                .unwrap();
            c.push(Gate::cx(0, 1)).unwrap();
            c.push(Gate::Ry { controls: vec![(0, false)], target: 2, theta: FRAC_PI_2 }).unwrap();
            c.push(Gate::Ry {
                controls: vec![(0, false)],
                target: 1,
                theta: 2.0 * (1.0 / 3.0_f64.sqrt()).acos(),
            })
            .unwrap();
            c.push(Gate::Rxy { a: 0, b: 1, t: FRAC_PI_2 }).unwrap();
        }
        other => return Err(UnsupportedPrep(other)),
    }
    Ok(c)
}

/// Diagonal tail that cancels the `-i` phases [`prepare_subspace`] leaves
/// behind, making every supported amplitude exactly `1/sqrt(k)`.
pub fn phase_correction(k: u32) -> Result<Circuit, UnsupportedPrep> {
    let mut c;
    match k {
        3 => {
            // -i sits on |01>.
            c = Circuit::new(2);
            c.push(Gate::ph(1, FRAC_PI_2)).unwrap();
        }
        5 => c = Circuit::new(3), // all real already
        6 => {
            // -i sits on |10x>; |11x> has no support, so qubit 0 suffices.
            c = Circuit::new(3);
            c.push(Gate::ph(0, FRAC_PI_2)).unwrap();
        }
        7 => {
            // -i sits on |100> and |101> but |110> is real, so the
            // correction needs the two-qubit pattern 10.
            c = Circuit::new(3);
            c.push(Gate::pattern_phase(vec![(0, true), (1, false)], FRAC_PI_2)).unwrap();
        }
        other => return Err(UnsupportedPrep(other)),
    }
    Ok(c)
}

/// Preparation with the phase correction appended: amplitudes are the real
/// positive `1/sqrt(k)` on labels `0..k` and zero elsewhere.
pub fn prepare_subspace_real(k: u32) -> Result<Circuit, UnsupportedPrep> {
    let mut c = prepare_subspace(k)?;
    c.concat(&phase_correction(k)?);
    Ok(c)
}
