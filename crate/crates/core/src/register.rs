// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use crate::{AtomOutcome, Branch, DensityMatrix, Pauli, Result, Threshold};

/// A joint state of optical modes and two-level atoms.
///
/// Operations never mutate; each returns a new state. Mode and atom indices
/// are positions in the register, new modes and atoms are appended at the end.
pub trait Register: Clone + Send + Sync + Sized {
    /// Backend-specific construction parameters (the photon cutoff for Fock).
    type Params: Clone + Send + Sync;

    /// Normalized single-mode even cat `|β⟩ + |−β⟩` with no atoms.
    fn even_cat(beta: Complex64, params: &Self::Params) -> Result<Self>;

    fn n_modes(&self) -> usize;
    fn n_atoms(&self) -> usize;

    /// Term count (exact) or stored amplitude count (Fock), for traces.
    fn size(&self) -> usize;

    fn norm(&self) -> Result<f64>;

    /// Tensors a coherent state `|β⟩` as a new last mode.
    fn append_coherent(&self, beta: Complex64) -> Result<Self>;

    /// Tensors an atom `g|g⟩ + f|f⟩` as a new last atom.
    fn append_atom(&self, g: Complex64, f: Complex64) -> Result<Self>;

    /// 50:50 beam splitter: coherent labels `(u, v)` at `(i, j)` become
    /// `((u+v)/√2, (u−v)/√2)`.
    fn beam_splitter(&self, i: usize, j: usize) -> Result<Self>;

    /// Reflection of `mode` off the cavity holding `atom`: the optical field
    /// picks up a π phase on the `g` branch only.
    fn cavity_reflect(&self, mode: usize, atom: usize) -> Result<Self>;

    fn project_threshold(&self, mode: usize, outcome: Threshold) -> Result<Branch<Self>>;

    fn project_atom(&self, atom: usize, outcome: AtomOutcome) -> Result<Branch<Self>>;

    fn apply_pauli(&self, atom: usize, op: Pauli) -> Result<Self>;

    /// Reduced density matrix of the listed atoms, tracing out everything else.
    fn reduced_atoms(&self, atoms: &[usize]) -> Result<DensityMatrix>;
}
