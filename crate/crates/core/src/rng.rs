// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic per-attempt random streams.
//!
//! Every attempt of every trial draws from its own ChaCha stream whose seed is
//! a pure function of `(master seed, trial, attempt)`, so results do not
//! depend on how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type AttemptRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream_seed(master: u64, trial: u64, attempt: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ trial) ^ attempt.rotate_left(32))
}

pub fn attempt_rng(master: u64, trial: u64, attempt: u64) -> AttemptRng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, trial, attempt))
}
