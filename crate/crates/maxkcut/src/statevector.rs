//! Dense statevector engine: in-place gate application, diagonal
//! expectation values, and seeded sampling.
//!
//! Amplitude indexing matches the rest of the crate: qubit 0 is the most
//! significant index bit. Kernels run in place over contiguous stride
//! blocks; with the `parallel` feature they split across rayon workers once
//! the state is large enough to amortize the fork.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::circuit::{Circuit, Control, Gate, PauliAxis};
use crate::coloring::ColorRelation;
use crate::graph::{cost_unchecked, Graph};

pub type C64 = Complex64;

/// Default qubit cap: 2^26 amplitudes is about 1 GiB.
pub const DEFAULT_MAX_QUBITS: usize = 26;

/// Below this many amplitudes the parallel kernels fall back to the
/// sequential path; forking costs more than the work saved.
#[cfg(feature = "parallel")]
const PARALLEL_MIN_AMPS: usize = 1 << 14;

/// Minimum amplitudes per rayon task; small strided chunks are batched so
/// the scheduler never juggles byte-sized jobs.
#[cfg(feature = "parallel")]
const PARALLEL_MIN_TASK: usize = 1 << 12;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("statevector on {requested} qubits exceeds the cap of {cap} (2^{cap} amplitudes)")]
    TooManyQubits { requested: usize, cap: usize },
    #[error("gate qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("dimension mismatch: state has {state} amplitudes, diagonal has {diag}")]
    DimensionMismatch { state: usize, diag: usize },
    #[error("state norm is {0}, not 1")]
    NotNormalized(f64),
}

/// A unit vector of `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl Statevector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self, SimError> {
        Self::zero_with_cap(num_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_cap(num_qubits: usize, cap: usize) -> Result<Self, SimError> {
        if num_qubits > cap {
            return Err(SimError::TooManyQubits { requested: num_qubits, cap });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// The computational basis state with index `idx`.
    pub fn basis(num_qubits: usize, idx: usize) -> Result<Self, SimError> {
        let mut s = Self::zero(num_qubits)?;
        s.amps[0] = C64::new(0.0, 0.0);
        s.amps[idx] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self, SimError> {
        if amps.is_empty() {
            return Err(SimError::DimensionMismatch { state: 0, diag: 0 });
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << num_qubits {
            return Err(SimError::DimensionMismatch { state: amps.len(), diag: 0 });
        }
        let s = Self { num_qubits, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn stride_of(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    fn check_gate(&self, gate: &Gate) -> Result<(), SimError> {
        for q in gate.qubits() {
            if q >= self.num_qubits {
                return Err(SimError::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
            }
        }
        Ok(())
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        self.check_gate(gate)?;
        match gate {
            Gate::X { controls, target } => {
                self.apply_1q(*target, controls, [c(0.), c(1.), c(1.), c(0.)])
            }
            Gate::H { controls, target } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.apply_1q(*target, controls, [c(s), c(s), c(s), c(-s)])
            }
            Gate::Rx { target, theta } => {
                let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let i = C64::new(0.0, -sh);
                self.apply_1q(*target, &[], [c(ch), i, i, c(ch)])
            }
            Gate::Ry { controls, target, theta } => {
                let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                self.apply_1q(*target, controls, [c(ch), c(-sh), c(sh), c(ch)])
            }
            Gate::Rz { target, theta } => {
                let m = [
                    C64::from_polar(1.0, -theta / 2.0),
                    c(0.),
                    c(0.),
                    C64::from_polar(1.0, theta / 2.0),
                ];
                self.apply_1q(*target, &[], m)
            }
            Gate::Phase { pattern, t } => self.apply_pattern_phase(pattern, *t),
            Gate::Rxy { a, b, t } => self.apply_rxy(*a, *b, *t),
            Gate::PauliRot { qubits, axes, theta } => self.apply_pauli_rot(qubits, axes, *theta),
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        for gate in circuit.gates() {
            self.apply(gate)?;
        }
        Ok(())
    }

    /// Single-qubit unitary `[[m0, m1], [m2, m3]]` on `target`, gated on
    /// `controls`.
    fn apply_1q(&mut self, target: usize, controls: &[Control], m: [C64; 4]) {
        let n = self.num_qubits;
        let stride = self.stride_of(target);
        let (cmask, cval) = control_mask(n, controls);
        let kernel = |block: &mut [C64], base: usize| {
            let (lo, hi) = block.split_at_mut(stride);
            for (off, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if (base + off) & cmask != cval {
                    continue;
                }
                let (x, y) = (*a, *b);
                *a = m[0] * x + m[1] * y;
                *b = m[2] * x + m[3] * y;
            }
        };
        #[cfg(feature = "parallel")]
        if self.amps.len() >= PARALLEL_MIN_AMPS {
            if stride * 2 >= PARALLEL_MIN_AMPS {
                // Few large blocks: parallelize inside each block.
                self.amps.chunks_mut(2 * stride).enumerate().for_each(|(i, block)| {
                    let (lo, hi) = block.split_at_mut(stride);
                    let base = i * 2 * stride;
                    lo.par_iter_mut().zip(hi.par_iter_mut()).enumerate().for_each(
                        |(off, (a, b))| {
                            if (base + off) & cmask != cval {
                                return;
                            }
                            let (x, y) = (*a, *b);
                            *a = m[0] * x + m[1] * y;
                            *b = m[2] * x + m[3] * y;
                        },
                    );
                });
            } else {
                self.amps
                    .par_chunks_mut(2 * stride)
                    .enumerate()
                    .with_min_len((PARALLEL_MIN_TASK / (2 * stride)).max(1))
                    .for_each(|(i, block)| kernel(block, i * 2 * stride));
            }
            return;
        }
        for (i, block) in self.amps.chunks_mut(2 * stride).enumerate() {
            kernel(block, i * 2 * stride);
        }
    }

    fn apply_pattern_phase(&mut self, pattern: &[Control], t: f64) {
        let n = self.num_qubits;
        let (mask, val) = control_mask(n, pattern);
        let phase = C64::from_polar(1.0, t);
        // Fully constrained pattern: exactly one amplitude moves.
        if mask == self.amps.len() - 1 {
            self.amps[val] *= phase;
            return;
        }
        let update = |(x, a): (usize, &mut C64)| {
            if x & mask == val {
                *a *= phase;
            }
        };
        #[cfg(feature = "parallel")]
        if self.amps.len() >= PARALLEL_MIN_AMPS {
            self.amps.par_iter_mut().enumerate().for_each(|(x, a)| update((x, a)));
            return;
        }
        self.amps.iter_mut().enumerate().for_each(update);
    }

    fn apply_rxy(&mut self, a: usize, b: usize, t: f64) {
        // Rotation on the {|01>, |10>} block of qubits (a, b).
        let n = self.num_qubits;
        let (ma, mb) = (1usize << (n - 1 - a), 1usize << (n - 1 - b));
        let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
        let mis = C64::new(0.0, -sh);
        let flip = ma | mb;
        let top = flip.next_power_of_two() >> 1; // higher of the two masks
        let low = flip ^ top;
        let stride = top;
        let kernel = |block: &mut [C64], base: usize| {
            let (lo, hi) = block.split_at_mut(stride);
            for off in 0..stride {
                let x = base + off;
                // Pair (x with top=0, low=1) <-> (x ^ flip).
                if x & low == 0 {
                    continue;
                }
                let (p, q) = (off, off ^ low);
                let (u, v) = (lo[p], hi[q]);
                lo[p] = ch * u + mis * v;
                hi[q] = mis * u + ch * v;
            }
        };
        self.run_paired_kernel(stride, kernel);
    }

    fn apply_pauli_rot(&mut self, qubits: &[usize], axes: &[PauliAxis], theta: f64) {
        let n = self.num_qubits;
        let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let mis = C64::new(0.0, -sh);
        let mut flips = 0usize;
        let mut zy_mask = 0usize; // qubits contributing (-1)^bit
        let mut y_count = 0u32;
        for (&q, &ax) in qubits.iter().zip(axes) {
            let m = 1usize << (n - 1 - q);
            match ax {
                PauliAxis::X => flips |= m,
                PauliAxis::Y => {
                    flips |= m;
                    zy_mask |= m;
                    y_count += 1;
                }
                PauliAxis::Z => zy_mask |= m,
            }
        }
        // P|x> = i^{y_count} * (-1)^{popcount(x & zy_mask)} |x ^ flips>
        let y_phase = C64::new(0.0, 1.0).powu(y_count);
        if flips == 0 {
            // Pure-Z string: diagonal, e^{-i theta/2 (+-1)}.
            let plus = C64::new(ch, 0.0) + mis;
            let minus = C64::new(ch, 0.0) - mis;
            let update = |(x, a): (usize, &mut C64)| {
                *a *= if (x & zy_mask).count_ones() % 2 == 0 { plus } else { minus };
            };
            #[cfg(feature = "parallel")]
            if self.amps.len() >= PARALLEL_MIN_AMPS {
                self.amps.par_iter_mut().enumerate().for_each(|(x, a)| update((x, a)));
                return;
            }
            self.amps.iter_mut().enumerate().for_each(update);
            return;
        }
        let top = {
            let mut t = flips;
            let mut top = 1usize;
            while t > 1 {
                t >>= 1;
                top <<= 1;
            }
            top
        };
        let low = flips ^ top;
        let stride = top;
        let kernel = |block: &mut [C64], base: usize| {
            let (lo, hi) = block.split_at_mut(stride);
            for off in 0..stride {
                let x = base + off; // top bit of the pair is 0 here
                let y = x ^ flips;
                let lambda_y = pauli_sign(y, zy_mask, y_phase);
                let lambda_x = pauli_sign(x, zy_mask, y_phase);
                let (u, v) = (lo[off], hi[off ^ low]);
                lo[off] = ch * u + mis * lambda_y * v;
                hi[off ^ low] = ch * v + mis * lambda_x * u;
            }
        };
        self.run_paired_kernel(stride, kernel);
    }

    /// Runs a kernel over blocks of `2 * stride` amplitudes; the kernel
    /// receives each block and its base index and updates pairs that span
    /// the block's two halves.
    fn run_paired_kernel(&mut self, stride: usize, kernel: impl Fn(&mut [C64], usize) + Sync) {
        #[cfg(feature = "parallel")]
        if self.amps.len() >= PARALLEL_MIN_AMPS && 2 * stride <= self.amps.len() / 2 {
            self.amps
                .par_chunks_mut(2 * stride)
                .enumerate()
                .with_min_len((PARALLEL_MIN_TASK / (2 * stride)).max(1))
                .for_each(|(i, block)| kernel(block, i * 2 * stride));
            return;
        }
        for (i, block) in self.amps.chunks_mut(2 * stride).enumerate() {
            kernel(block, i * 2 * stride);
        }
    }

    /// Applies a dense `2^w x 2^w` unitary (row-major) to the contiguous
    /// qubit block `[first_qubit, first_qubit + width)`. One pass over the
    /// state regardless of how many gates built the block matrix.
    pub fn apply_block_unitary(
        &mut self,
        first_qubit: usize,
        width: usize,
        u: &[C64],
    ) -> Result<(), SimError> {
        let n = self.num_qubits;
        if first_qubit + width > n {
            return Err(SimError::QubitOutOfRange { qubit: first_qubit + width - 1, num_qubits: n });
        }
        let dim = 1usize << width;
        if u.len() != dim * dim {
            return Err(SimError::DimensionMismatch { state: dim * dim, diag: u.len() });
        }
        let low_bits = n - first_qubit - width;
        let s_mid = 1usize << low_bits;
        let chunk_len = dim * s_mid;
        // A chunk holds `dim` contiguous rows of length `s_mid` (row m is
        // the block value m); the update is row_out[m2] = sum_m u[m2,m]
        // row_in[m], done as contiguous axpy passes so it vectorizes.
        let kernel = |chunk: &mut [C64]| {
            let buf = chunk.to_vec();
            chunk.fill(C64::new(0.0, 0.0));
            for m2 in 0..dim {
                let out = &mut chunk[m2 * s_mid..(m2 + 1) * s_mid];
                for m in 0..dim {
                    let coeff = u[m2 * dim + m];
                    if coeff.re == 0.0 && coeff.im == 0.0 {
                        continue;
                    }
                    let src = &buf[m * s_mid..(m + 1) * s_mid];
                    for (o, s) in out.iter_mut().zip(src) {
                        *o += coeff * s;
                    }
                }
            }
        };
        #[cfg(feature = "parallel")]
        if self.amps.len() >= PARALLEL_MIN_AMPS && self.amps.len() / chunk_len >= 2 {
            self.amps
                .par_chunks_mut(chunk_len)
                .with_min_len((PARALLEL_MIN_TASK / chunk_len).max(1))
                .for_each(kernel);
            return Ok(());
        }
        self.amps.chunks_mut(chunk_len).for_each(kernel);
        Ok(())
    }

    /// Multiplies each amplitude by `phases[index[x]]`; the compressed form
    /// of a diagonal phase whose diagonal takes few distinct values.
    pub fn apply_indexed_phase(&mut self, index: &[u32], phases: &[C64]) -> Result<(), SimError> {
        if index.len() != self.amps.len() {
            return Err(SimError::DimensionMismatch { state: self.amps.len(), diag: index.len() });
        }
        let update = |(a, &i): (&mut C64, &u32)| {
            *a *= phases[i as usize];
        };
        #[cfg(feature = "parallel")]
        if self.amps.len() >= PARALLEL_MIN_AMPS {
            self.amps.par_iter_mut().zip(index.par_iter()).for_each(|(a, i)| update((a, i)));
            return Ok(());
        }
        self.amps.iter_mut().zip(index.iter()).for_each(update);
        Ok(())
    }

    /// Multiplies each amplitude by `e^{i * scale * diag[x]}`.
    pub fn apply_diagonal_phase(&mut self, diag: &[f64], scale: f64) -> Result<(), SimError> {
        if diag.len() != self.amps.len() {
            return Err(SimError::DimensionMismatch { state: self.amps.len(), diag: diag.len() });
        }
        let update = |(a, &d): (&mut C64, &f64)| {
            *a *= C64::from_polar(1.0, scale * d);
        };
        #[cfg(feature = "parallel")]
        if self.amps.len() >= PARALLEL_MIN_AMPS {
            self.amps.par_iter_mut().zip(diag.par_iter()).for_each(|(a, d)| update((a, d)));
            return Ok(());
        }
        self.amps.iter_mut().zip(diag.iter()).for_each(update);
        Ok(())
    }

    /// `sum_x |amp_x|^2 diag_x`.
    pub fn expectation(&self, diag: &[f64]) -> Result<f64, SimError> {
        if diag.len() != self.amps.len() {
            return Err(SimError::DimensionMismatch { state: self.amps.len(), diag: diag.len() });
        }
        #[cfg(feature = "parallel")]
        if self.amps.len() >= PARALLEL_MIN_AMPS {
            return Ok(self
                .amps
                .par_iter()
                .zip(diag.par_iter())
                .map(|(a, d)| a.norm_sqr() * d)
                .sum());
        }
        Ok(self.amps.iter().zip(diag).map(|(a, d)| a.norm_sqr() * d).sum())
    }

    /// Total probability on the basis states where `keep` is false.
    pub fn probability_outside(&self, keep: &[bool]) -> f64 {
        self.amps
            .iter()
            .zip(keep)
            .filter(|(_, &k)| !k)
            .map(|(a, _)| a.norm_sqr())
            .sum()
    }

    /// `shots` i.i.d. basis-state draws from `|amp|^2`, deterministic per
    /// seed (ChaCha8 keyed with `seed`, inverse-CDF sampling).
    pub fn sample(&self, shots: usize, seed: u64) -> Vec<usize> {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..shots)
            .map(|_| {
                let r = rng.gen_range(0.0..total);
                cdf.partition_point(|&c| c <= r).min(self.amps.len() - 1)
            })
            .collect()
    }

    /// Raw little-endian `(re, im)` f64 pairs, index order; a debugging aid.
    pub fn dump_amplitudes(&self, path: &std::path::Path) -> std::io::Result<()> {
        let mut bytes = Vec::with_capacity(self.amps.len() * 16);
        for a in &self.amps {
            bytes.extend_from_slice(&a.re.to_le_bytes());
            bytes.extend_from_slice(&a.im.to_le_bytes());
        }
        std::fs::write(path, bytes)
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn pauli_sign(x: usize, zy_mask: usize, y_phase: C64) -> C64 {
    if (x & zy_mask).count_ones() % 2 == 0 {
        y_phase
    } else {
        -y_phase
    }
}

fn control_mask(num_qubits: usize, controls: &[Control]) -> (usize, usize) {
    let mut mask = 0usize;
    let mut val = 0usize;
    for &(q, b) in controls {
        let m = 1usize << (num_qubits - 1 - q);
        mask |= m;
        if b {
            val |= m;
        }
    }
    (mask, val)
}

// ============================================================================
// Cost diagonals
// ============================================================================

/// The cut-value diagonal over `|V| * n_k` qubits: entry `x` is the cost of
/// the assignment obtained by decoding `x` under `rel`.
pub fn cost_diagonal(g: &Graph, rel: &ColorRelation) -> Vec<f64> {
    let n = g.num_vertices() * rel.n_k() as usize;
    let dim = 1usize << n;
    let n_k = rel.n_k() as usize;
    let label_mask = (1usize << n_k) - 1;
    let num_vertices = g.num_vertices();
    assert!(num_vertices <= 64, "cost_diagonal supports up to 64 vertices");
    let entry = |x: usize| {
        let mut colors = [0u32; 64];
        for v in 0..num_vertices {
            let shift = (num_vertices - 1 - v) * n_k;
            colors[v] = rel.color_of(((x >> shift) & label_mask) as u32);
        }
        cost_unchecked(g, &colors[..num_vertices])
    };
    #[cfg(feature = "parallel")]
    if dim >= PARALLEL_MIN_AMPS {
        return (0..dim).into_par_iter().map(entry).collect();
    }
    (0..dim).map(entry).collect()
}
