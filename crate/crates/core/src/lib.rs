//! Fault-tolerant Householder reflections from composite pulses.
//!
//! An N-pod (N degenerate states driven through one ancilla by couplings
//! that share a time dependence) acts on its manifold as the reflection
//! `M(v; φ) = I + (e^{iφ} - 1)|v⟩⟨v|` whenever the bright-state amplitude
//! of its two-level Morris-Shore propagator equals `e^{iφ}`. That condition
//! is a phase gate with `α = 2φ`, which two composite pulses produce
//! robustly. This crate builds those sequences, propagates them exactly
//! (two-level and full `(N+1)`-level) and measures their infidelity under
//! systematic area and detuning errors.
//!
//! - [`linalg`]: complex matrices and Hermitian exponentials.
//! - [`two_level`]: pulse shapes and two-level propagators.
//! - [`composite`]: phase families and the composite phase gate.
//! - [`npod`]: Householder targets, Morris-Shore reduction, full propagation.
//! - [`metrics`]: infidelity, the broadband law, area and 2D scans.
//! - [`cli`]: the `composite-hr` command line.

pub mod angle;
pub mod cli;
pub mod composite;
pub mod config;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod npod;
pub mod two_level;

pub use composite::{
    bb_phases, compose, composite_phase_gate, gate_sequence, universal_phases, Drive, Family,
    GateSequence, PhaseList,
};
pub use error::{Error, Result};
pub use linalg::{expm_hermitian, frobenius_distance, unitarity_defect, CMatrix, CVector, C64};
pub use metrics::{bb_infidelity_analytic, infidelity, scan_2d, scan_area, ScanGrid, ScanResult};
pub use npod::{
    composite_hr, householder_matrix, manifold_block, ms_reduce, npod_hamiltonian, npod_propagator,
    HouseholderTarget, MSReduction, NPodSystem,
};
pub use two_level::{
    apply_phase, constant_propagator, resonant_propagator, shaped_propagator, Propagator2,
    PulseShape, PulseSpec,
};
