//! Builders for every circuit the QAOA ansatz needs: per-edge phase
//! separators (with an independent diagonal oracle as ground truth),
//! per-vertex initial-state preparations, and the X/LX/Grover mixer family
//! with validity checking.

pub mod mixers;
pub mod preps;
pub mod separators;

pub use mixers::{
    default_validation_betas, lx_term_edges, lx_terms, mixer_grover, mixer_lx, mixer_x,
    validate_mixer, MixerReport,
};
pub use preps::{phase_correction, prepare_plus, prepare_subspace, prepare_subspace_real};
pub use separators::{
    phase_separator_2l_plus1, phase_separator_k, phase_separator_oracle, phase_separator_power2,
};

use ndarray::Array2;
use num_complex::Complex64;

type C64 = Complex64;

/// Kronecker product of two dense complex matrices.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::<C64>::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Kronecker sum `G (x) I + I (x) H`; the mixer Hamiltonian of a multi-vertex
/// system is the iterated box product of the per-vertex mixers.
pub fn box_product(g: &Array2<C64>, h: &Array2<C64>) -> Result<Array2<C64>, String> {
    let (gr, gc) = g.dim();
    let (hr, hc) = h.dim();
    if gr != gc || hr != hc {
        return Err(format!("box product needs square inputs, got {gr}x{gc} and {hr}x{hc}"));
    }
    Ok(kron(g, &Array2::eye(hr)) + kron(&Array2::eye(gr), h))
}
