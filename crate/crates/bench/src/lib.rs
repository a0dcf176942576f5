// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures for the criterion benchmarks.

use ecs_teleport::{FockVector, HybridState, MessageState, ProtocolConfig, Teleporter};

pub fn message() -> MessageState {
    MessageState::from_bloch(1.0, 0.3)
}

pub fn config(alpha_sq: f64) -> ProtocolConfig {
    ProtocolConfig::new(alpha_sq, message())
}

pub fn exact_teleporter(alpha_sq: f64) -> Teleporter<HybridState> {
    Teleporter::new(&config(alpha_sq), &()).expect("valid config")
}

pub fn fock_teleporter(alpha_sq: f64) -> Teleporter<FockVector> {
    let c = config(alpha_sq);
    Teleporter::new(&c, &c.effective_cutoff()).expect("valid config")
}
