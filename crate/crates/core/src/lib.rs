// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Long-distance atomic teleportation with entangled coherent states.
//!
//! An unknown atomic qubit `a|g⟩ + b|f⟩` trapped in cavity C1 is moved to an
//! atom in a distant cavity C2. The channel is the entangled coherent state
//! `N₊(|α,α⟩ + |−α,−α⟩)`; each optical mode is reflected off one of the
//! atom-cavity systems (a π phase flip when the atom is in `|g⟩`), mixed with
//! an ancillary coherent pulse on a 50:50 beam splitter and read out by
//! ON/OFF threshold detectors.
//!
//! Two independent state backends are provided:
//!
//! * [`cat_algebra`]: exact superpositions of multimode coherent states with
//!   analytic (Gram) inner products.
//! * [`fock`]: dense state vectors over truncated photon-number spaces.
//!
//! Both implement [`Register`], which is all the [`protocol`] orchestrator
//! needs. [`analytics`] evaluates the closed-form success probabilities and
//! [`verify`] runs the cross-checks between all of the above.

pub mod analytics;
pub mod cat_algebra;
mod error;
pub mod fock;
mod linalg;
pub mod montecarlo;
pub mod protocol;
mod register;
pub mod rng;
mod types;
pub mod verify;

pub use cat_algebra::{coherent_overlap, AtomLabel, CoherentLabel, HybridState, HybridTerm};
pub use error::{Error, Result};
pub use fock::{coherent_vector, default_cutoff, FockVector};
pub use protocol::{
    classify, correction_for, AttemptKind, AttemptResult, BackendKind, DetectionRecord, Group,
    MessageState, Pattern, ProtocolConfig, ProtocolRunReport, Teleporter,
};
pub use register::Register;
pub use types::{AtomOutcome, Branch, DensityMatrix, Pauli, Threshold};

pub use num_complex::Complex64;
