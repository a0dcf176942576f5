// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Independent seeded trials of the repeat-until-success protocol.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cat_algebra::HybridState;
use crate::fock::FockVector;
use crate::protocol::{AttemptResult, BackendKind, ProtocolConfig, Teleporter, Tolerances};
use crate::{analytics, Error, Register, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: u64,
    pub success: bool,
    pub attempts_used: usize,
    pub last: AttemptResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub alpha_sq: f64,
    pub max_attempts: usize,
    pub backend: BackendKind,
    pub seed: u64,
    pub trials: u64,
    pub successes: u64,
    pub empirical_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub analytic: f64,
    /// Binomial standard error at the analytic rate.
    pub sigma: f64,
    /// `|empirical − analytic| / sigma`; 0 when sigma vanishes and they agree.
    pub deviation_sigma: f64,
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn run_with<R: Register + Tolerances>(
    teleporter: &Teleporter<R>,
    trials: u64,
) -> Result<Vec<TrialOutcome>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let report = teleporter.run(trial, None)?;
            Ok(TrialOutcome {
                trial,
                success: report.success,
                attempts_used: report.attempts_used,
                last: report
                    .attempts
                    .last()
                    .cloned()
                    .expect("at least one attempt"),
            })
        })
        .collect()
}

/// Runs `trials` trials in parallel; the output is ordered by trial index and
/// identical for any thread count.
pub fn run_trials(config: &ProtocolConfig, trials: u64) -> Result<Vec<TrialOutcome>> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    match config.backend {
        BackendKind::Exact => run_with(&Teleporter::<HybridState>::new(config, &())?, trials),
        BackendKind::Fock => run_with(
            &Teleporter::<FockVector>::new(config, &config.effective_cutoff())?,
            trials,
        ),
    }
}

/// Fraction of trials that succeeded within `n` attempts.
pub fn success_rate_within(outcomes: &[TrialOutcome], n: usize) -> f64 {
    let hits = outcomes
        .iter()
        .filter(|o| o.success && o.attempts_used <= n)
        .count();
    hits as f64 / outcomes.len() as f64
}

pub fn summarize(config: &ProtocolConfig, outcomes: &[TrialOutcome]) -> McSummary {
    let trials = outcomes.len() as u64;
    let successes = outcomes.iter().filter(|o| o.success).count() as u64;
    let empirical_rate = successes as f64 / trials as f64;
    let (wilson_low, wilson_high) = wilson_interval(successes, trials, Z_95);
    let analytic = analytics::p_success_n(config.alpha_sq, config.max_attempts as u32);
    let sigma = (analytic * (1.0 - analytic) / trials as f64).sqrt();
    let diff = (empirical_rate - analytic).abs();
    let deviation_sigma = if sigma > 0.0 {
        diff / sigma
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    McSummary {
        alpha_sq: config.alpha_sq,
        max_attempts: config.max_attempts,
        backend: config.backend,
        seed: config.seed,
        trials,
        successes,
        empirical_rate,
        wilson_low,
        wilson_high,
        analytic,
        sigma,
        deviation_sigma,
    }
}
