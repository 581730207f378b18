//! Weighted MAX k-CUT on qubits, end to end: binary color encodings on the
//! full Hilbert space and on feasible subspaces, phase-separator circuits
//! verified gate-by-gate against an independent diagonal oracle, constrained
//! mixers (LX and Grover flavors), a dense statevector simulator, and a QAOA
//! driver with landscape sweeps, interpolation-based depth schedules, and
//! gate-resource accounting.
//!
//! The crate-wide conventions, stated once and tested everywhere:
//!
//! * Vertex `v` of a `k`-color problem owns the qubit block
//!   `[v * n_k, (v+1) * n_k)` with `n_k = ceil(log2 k)`; within a block the
//!   first qubit is the most significant bit of the color label.
//! * Statevector indexing follows suit: qubit 0 is the most significant
//!   index bit.
//! * `Ph(t) = diag(1, e^{it})`; rotations use `R_P(t) = exp(-i t/2 P)` and
//!   `R_XY(t) = exp(-i t/4 (XX + YY))`.
//! * The phase separator applies `e^{i gamma w}` to basis states whose edge
//!   endpoints carry equivalent colors; mixers apply `e^{-i beta H_M}`.

pub mod ansatz;
pub mod circuit;
pub mod coloring;
pub mod graph;
pub mod qaoa;
pub mod statevector;

pub use circuit::{Circuit, Gate};
pub use coloring::{ColorRelation, RelationVariant};
pub use graph::{Assignment, Graph};
pub use statevector::Statevector;
