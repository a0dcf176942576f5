// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form success and failure probabilities.
//!
//! Everything is parameterized by `alpha_sq = |α|²` with `x = exp(−|α|²)`.
//! A single attempt succeeds with `(1−x²)²/(1+x⁴)` and fails (leaving the
//! message intact) with `2x²/(1+x⁴)`; `n` independent attempts succeed with
//! `1 − P_fail^n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, MessageState, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EcsSign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha_sq: f64,
    pub n: u32,
    pub p_success_n: f64,
}

pub fn x_of(alpha_sq: f64) -> f64 {
    (-alpha_sq).exp()
}

/// `N± = [2(1 ± x⁴)]^{−1/2}`.
pub fn normalization(alpha_sq: f64, sign: EcsSign) -> Result<f64> {
    let x4 = x_of(alpha_sq).powi(4);
    match sign {
        EcsSign::Plus => Ok((2.0 * (1.0 + x4)).sqrt().recip()),
        EcsSign::Minus if alpha_sq > 0.0 => Ok((2.0 * (1.0 - x4)).sqrt().recip()),
        EcsSign::Minus => Err(Error::UndefinedNormalization),
    }
}

pub fn p_success(alpha_sq: f64) -> f64 {
    let x2 = x_of(alpha_sq).powi(2);
    (1.0 - x2).powi(2) / (1.0 + x2 * x2)
}

pub fn p_fail(alpha_sq: f64) -> f64 {
    let x2 = x_of(alpha_sq).powi(2);
    2.0 * x2 / (1.0 + x2 * x2)
}

/// Success probability within `n` attempts. `n = 0` is treated as no attempt.
pub fn p_success_n(alpha_sq: f64, n: u32) -> f64 {
    1.0 - p_fail(alpha_sq).powi(n as i32)
}

/// Cartesian evaluation, ordered by `alpha_sq` then by the order of `ns`.
pub fn sweep(alpha_sq_grid: &[f64], ns: &[u32]) -> Vec<SweepPoint> {
    alpha_sq_grid
        .iter()
        .flat_map(|&alpha_sq| {
            ns.iter().map(move |&n| SweepPoint {
                alpha_sq,
                n,
                p_success_n: p_success_n(alpha_sq, n),
            })
        })
        .collect()
}

/// `min, min + step, …` up to `max` inclusive, snapped to 1e-10 so printed
/// grid values stay short.
pub fn grid(min: f64, max: f64, step: f64) -> Vec<f64> {
    if step.is_nan() || step <= 0.0 || max < min {
        return if (max - min).abs() < 1e-12 {
            vec![min]
        } else {
            vec![]
        };
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|k| ((min + k as f64 * step) * 1e10).round() / 1e10)
        .collect()
}

pub fn default_grid() -> Vec<f64> {
    grid(0.0, 4.0, 0.05)
}

pub const DEFAULT_NS: [u32; 4] = [1, 2, 3, 5];

/// `|⟨M|ψ⟩|²` for a pure single-atom state `ψ = (g, f)`.
pub fn fidelity(atom_state: [Complex64; 2], message: &MessageState) -> f64 {
    let [a, b] = message.amplitudes();
    let overlap = a.conj() * atom_state[0] + b.conj() * atom_state[1];
    let norm = atom_state[0].norm_sqr() + atom_state[1].norm_sqr();
    (overlap.norm_sqr() / norm).clamp(0.0, 1.0)
}
