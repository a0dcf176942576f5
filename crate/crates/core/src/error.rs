// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode index {index} out of range for a register with {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("atom index {index} out of range for a register with {n_atoms} atoms")]
    AtomOutOfRange { index: usize, n_atoms: usize },

    #[error("beam splitter needs two distinct modes, got {0} twice")]
    SameMode(usize),

    #[error("registers have different shapes")]
    ShapeMismatch,

    #[error("Gram radicand {radicand:e} is negative beyond rounding")]
    InconsistentGram { radicand: f64 },

    #[error("state has zero norm")]
    ZeroState,

    #[error(
        "cutoff {cutoff} is below the required {required} for |beta|^2 = {mean_photons}; \
         discarded weight would be {leakage:e}"
    )]
    CutoffTooSmall {
        cutoff: usize,
        required: usize,
        mean_photons: f64,
        leakage: f64,
    },

    #[error("Fock register would need {amplitudes} amplitudes (limit {limit})")]
    RegisterTooLarge { amplitudes: usize, limit: usize },

    #[error("message amplitudes are not normalized: |a|^2 + |b|^2 = {norm_sq}")]
    InvalidMessage { norm_sq: f64 },

    #[error("odd-cat normalization is undefined at alpha_sq = 0")]
    UndefinedNormalization,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("pattern {0} is not a Group I pattern")]
    NotGroupI(String),

    #[error("model violation: {0}")]
    ModelViolation(String),
}
