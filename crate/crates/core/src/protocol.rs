// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! The teleportation sequence.
//!
//! Register layout (identical for both backends):
//!
//! | index | optical path                      | detector |
//! |-------|-----------------------------------|----------|
//! | mode 0 | 1 → (reflect off C1) 3 → BS2 → 7 | D7       |
//! | mode 1 | 2 → (reflect off C2) 4 → BS3 → 9 | D9       |
//! | mode 2 | ancilla 5 → BS2 → 8              | D8       |
//! | mode 3 | ancilla 6 → BS3 → 10             | D10      |
//! | atom 0 | C1, holds the message            |          |
//! | atom 1 | C2, receives it                  |          |
//!
//! Everything up to detection is deterministic, so a [`Teleporter`] evolves
//! the circuit once and every attempt starts from a copy of that state.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cat_algebra::HybridState;
use crate::fock::{default_cutoff, FockVector};
use crate::rng::attempt_rng;
use crate::types::kron_atoms;
use crate::{AtomOutcome, Error, Pauli, Register, Result, Threshold};

pub const MODE_1: usize = 0;
pub const MODE_2: usize = 1;
pub const MODE_5: usize = 2;
pub const MODE_6: usize = 3;
pub const ATOM_C1: usize = 0;
pub const ATOM_C2: usize = 1;

/// Register mode read by D7, D8, D9, D10 in that order.
pub const DETECTOR_MODES: [usize; 4] = [MODE_1, MODE_5, MODE_2, MODE_6];
pub const DETECTOR_NAMES: [&str; 4] = ["D7", "D8", "D9", "D10"];

/// Patterns with a nonzero probability above this are a broken model.
pub const INVALID_TOL: f64 = 1e-9;

/// `alpha_sq` above which the Fock backend is refused.
pub const FOCK_ALPHA_SQ_LIMIT: f64 = 16.0;

/// The unknown qubit `a|g⟩ + b|f⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MessageState {
    a: Complex64,
    b: Complex64,
}

impl MessageState {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm_sq = a.norm_sqr() + b.norm_sqr();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMessage { norm_sq });
        }
        Ok(MessageState { a, b })
    }

    /// `cos(θ/2)|g⟩ + e^{iφ} sin(θ/2)|f⟩`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        MessageState {
            a: Complex64::new((theta / 2.0).cos(), 0.0),
            b: Complex64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    /// Uniform on the Bloch sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let cos_theta: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        Self::from_bloch(cos_theta.acos(), phi)
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.a, self.b]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Exact,
    Fock,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Exact => "exact",
            BackendKind::Fock => "fock",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub alpha_sq: f64,
    pub max_attempts: usize,
    pub backend: BackendKind,
    /// Fock only; `None` uses [`default_cutoff`].
    pub cutoff: Option<usize>,
    pub seed: u64,
    pub message: MessageState,
}

impl ProtocolConfig {
    pub fn new(alpha_sq: f64, message: MessageState) -> Self {
        ProtocolConfig {
            alpha_sq,
            max_attempts: 1,
            backend: BackendKind::Exact,
            cutoff: None,
            seed: 0,
            message,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha_sq.is_finite() || self.alpha_sq < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "alpha_sq must be finite and >= 0, got {}",
                self.alpha_sq
            )));
        }
        if self.max_attempts == 0 {
            return Err(Error::InvalidConfig("max_attempts must be >= 1".into()));
        }
        if self.backend == BackendKind::Fock && self.alpha_sq > FOCK_ALPHA_SQ_LIMIT {
            return Err(Error::InvalidConfig(format!(
                "fock backend supports alpha_sq <= {FOCK_ALPHA_SQ_LIMIT}, got {}",
                self.alpha_sq
            )));
        }
        MessageState::new(self.message.a, self.message.b)?;
        Ok(())
    }

    pub fn effective_cutoff(&self) -> usize {
        self.cutoff.unwrap_or_else(|| default_cutoff(self.alpha_sq))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_sq.sqrt()
    }
}

/// ON/OFF outcomes of D7, D8, D9, D10.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern(pub [Threshold; 4]);

impl Pattern {
    /// Bit 3 is D7, bit 0 is D10; a set bit is ON.
    pub fn from_bits(bits: u8) -> Self {
        let t = |k: u8| {
            if bits >> (3 - k) & 1 == 1 {
                Threshold::On
            } else {
                Threshold::Off
            }
        };
        Pattern([t(0), t(1), t(2), t(3)])
    }

    pub fn all() -> impl Iterator<Item = Pattern> {
        (0u8..16).map(Pattern::from_bits)
    }

    /// `"1010"` style, D7 first.
    pub fn code(&self) -> String {
        self.0
            .iter()
            .map(|t| if t.is_on() { '1' } else { '0' })
            .collect()
    }

    fn on_count(&self) -> usize {
        self.0.iter().filter(|t| t.is_on()).count()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

const ON: Threshold = Threshold::On;
const OFF: Threshold = Threshold::Off;

/// The four two-ON patterns the detected state can produce.
pub const GROUP_I_PATTERNS: [Pattern; 4] = [
    Pattern([ON, OFF, ON, OFF]),
    Pattern([OFF, ON, OFF, ON]),
    Pattern([ON, OFF, OFF, ON]),
    Pattern([OFF, ON, ON, OFF]),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    AllOff,
    /// Index into [`DETECTOR_NAMES`] of the single detector that fired.
    SingleOn(usize),
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureKind::AllOff => f.write_str("all-off"),
            FailureKind::SingleOn(k) => write!(f, "single-on {}", DETECTOR_NAMES[*k]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    /// Two detectors fired in a correctable pairing.
    GroupI,
    /// At most one detector fired; the atoms are untouched.
    GroupII(FailureKind),
    Invalid,
}

pub fn classify(pattern: Pattern) -> Group {
    match pattern.on_count() {
        0 => Group::GroupII(FailureKind::AllOff),
        1 => {
            let k = pattern.0.iter().position(|t| t.is_on()).expect("one ON");
            Group::GroupII(FailureKind::SingleOn(k))
        }
        2 if GROUP_I_PATTERNS.contains(&pattern) => Group::GroupI,
        _ => Group::Invalid,
    }
}

/// Correction Bob applies to C2 for a Group I record.
///
/// Same-side pairings (D7 with D9, D8 with D10) leave C2 in `|M⟩` or `σ_Z|M⟩`;
/// crossed pairings leave `σ_X|M⟩` or `−iσ_Y|M⟩`. The atomic outcome on C1
/// selects between the two.
pub fn correction_for(pattern: Pattern, atomic: AtomOutcome) -> Result<Pauli> {
    if classify(pattern) != Group::GroupI {
        return Err(Error::NotGroupI(pattern.to_string()));
    }
    let same_side = pattern.0[0] == pattern.0[2];
    Ok(match (same_side, atomic) {
        (true, AtomOutcome::Plus) => Pauli::I,
        (true, AtomOutcome::Minus) => Pauli::Z,
        (false, AtomOutcome::Plus) => Pauli::X,
        (false, AtomOutcome::Minus) => Pauli::IY,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub pattern: Pattern,
    /// `None` when the optical pattern already rejected the attempt.
    pub atomic: Option<AtomOutcome>,
}

impl fmt::Display for DetectionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.atomic {
            Some(a) => write!(f, "{} C1:{}", self.pattern, a),
            None => write!(f, "{} C1:not-measured", self.pattern),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttemptKind {
    Success,
    Failure,
    Invalid,
}

impl fmt::Display for AttemptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            AttemptKind::Success => "success",
            AttemptKind::Failure => "failure",
            AttemptKind::Invalid => "invalid",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttemptResult {
    pub attempt: usize,
    pub kind: AttemptKind,
    pub group: Group,
    pub record: DetectionRecord,
    pub correction: Option<Pauli>,
    /// Joint probability of `record`, the product of the sampled conditionals.
    pub probability: f64,
    /// Success: C2 against the message after correction. Failure: C1⊗C2
    /// against `|M⟩⊗|+⟩`. Invalid: NaN.
    pub post_fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRunReport {
    pub attempts: Vec<AttemptResult>,
    pub success: bool,
    pub attempts_used: usize,
}

/// One line of a verbose run.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub step: String,
    pub size: usize,
    pub norm: f64,
    pub outcome: Option<String>,
    pub probability: Option<f64>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} size={:<6} norm={:.12}",
            self.step, self.size, self.norm
        )?;
        if let Some(o) = &self.outcome {
            write!(f, " outcome={o}")?;
        }
        if let Some(p) = self.probability {
            write!(f, " p={p:.9}")?;
        }
        Ok(())
    }
}

/// Backend-dependent tolerances.
pub trait Tolerances {
    /// Allowed shortfall from unit fidelity.
    const FIDELITY_TOL: f64;
}

impl Tolerances for HybridState {
    const FIDELITY_TOL: f64 = 1e-9;
}

impl Tolerances for FockVector {
    const FIDELITY_TOL: f64 = 1e-6;
}

fn plus_state() -> [Complex64; 2] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [h, h]
}

/// Even cat `|√2α⟩ + |−√2α⟩` through BS1 into modes 1, 2, then the message
/// atom C1 and the target atom C2 in `|+⟩`.
pub fn prepare_joint<R: Register>(
    alpha_sq: f64,
    message: &MessageState,
    params: &R::Params,
) -> Result<R> {
    let beta = Complex64::new((2.0 * alpha_sq).sqrt(), 0.0);
    let [a, b] = message.amplitudes();
    let [pg, pf] = plus_state();
    R::even_cat(beta, params)?
        .append_coherent(Complex64::new(0.0, 0.0))?
        .beam_splitter(MODE_1, MODE_2)?
        .append_atom(a, b)?
        .append_atom(pg, pf)
}

/// Result of steering the detected state into one measurement record.
#[derive(Clone, Debug)]
pub struct ResolvedRecord<R> {
    pub record: DetectionRecord,
    pub group: Group,
    pub probability: f64,
    /// Post-measurement state (before any correction); `None` if the record is
    /// impossible.
    pub state: Option<R>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRecord {
    pub record: DetectionRecord,
    pub group: Group,
    pub probability: f64,
    pub correction: Option<Pauli>,
    pub fidelity: Option<f64>,
}

/// Exhaustive enumeration of every detector pattern and atomic outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeAudit {
    pub records: Vec<AuditRecord>,
    pub group_i: f64,
    pub group_ii: f64,
    pub invalid: f64,
}

impl OutcomeAudit {
    pub fn total(&self) -> f64 {
        self.group_i + self.group_ii + self.invalid
    }
}

pub struct Teleporter<R: Register> {
    config: ProtocolConfig,
    stages: Vec<(&'static str, R)>,
}

impl<R: Register + Tolerances> Teleporter<R> {
    pub fn new(config: &ProtocolConfig, params: &R::Params) -> Result<Self> {
        config.validate()?;
        let alpha = Complex64::new(config.alpha(), 0.0);
        let prepared: R = prepare_joint(config.alpha_sq, &config.message, params)?;
        let reflected_2 = prepared.cavity_reflect(MODE_2, ATOM_C2)?;
        let reflected_1 = reflected_2.cavity_reflect(MODE_1, ATOM_C1)?;
        let with_ancillas = reflected_1.append_coherent(alpha)?.append_coherent(alpha)?;
        let mixed_alice = with_ancillas.beam_splitter(MODE_1, MODE_5)?;
        let mixed_bob = mixed_alice.beam_splitter(MODE_2, MODE_6)?;
        Ok(Teleporter {
            config: config.clone(),
            stages: vec![
                ("prepare ECS + atoms", prepared),
                ("reflect 2 off C2 -> 4", reflected_2),
                ("reflect 1 off C1 -> 3", reflected_1),
                ("ancillas |a> in 5, 6", with_ancillas),
                ("BS2: 3,5 -> 7,8", mixed_alice),
                ("BS3: 4,6 -> 9,10", mixed_bob),
            ],
        })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    /// Named circuit states from preparation to just before detection.
    pub fn stages(&self) -> &[(&'static str, R)] {
        &self.stages
    }

    pub fn prepared(&self) -> &R {
        &self.stages[0].1
    }

    /// State of modes 7–10 and both atoms before any detector clicks.
    pub fn detection_state(&self) -> &R {
        &self.stages.last().expect("stages are never empty").1
    }

    fn message_amplitudes(&self) -> Vec<Complex64> {
        self.config.message.amplitudes().to_vec()
    }

    fn preserved_amplitudes(&self) -> Vec<Complex64> {
        kron_atoms(&[self.config.message.amplitudes(), plus_state()])
    }

    fn success_fidelity(&self, state: &R, correction: Pauli) -> Result<f64> {
        let corrected = state.apply_pauli(ATOM_C2, correction)?;
        Ok(corrected
            .reduced_atoms(&[ATOM_C2])?
            .fidelity_with(&self.message_amplitudes()))
    }

    fn failure_fidelity(&self, state: &R) -> Result<f64> {
        Ok(state
            .reduced_atoms(&[ATOM_C1, ATOM_C2])?
            .fidelity_with(&self.preserved_amplitudes()))
    }

    fn trace_state(trace: &mut Option<&mut Vec<TraceStep>>, step: &str, state: &R) -> Result<()> {
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceStep {
                step: step.to_string(),
                size: state.size(),
                norm: state.norm()?,
                outcome: None,
                probability: None,
            });
        }
        Ok(())
    }

    fn trace_measurement(
        trace: &mut Option<&mut Vec<TraceStep>>,
        step: String,
        state: &R,
        outcome: String,
        probability: f64,
    ) -> Result<()> {
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceStep {
                step,
                size: state.size(),
                norm: state.norm()?,
                outcome: Some(outcome),
                probability: Some(probability),
            });
        }
        Ok(())
    }

    /// One attempt from a fresh copy of the channel: chain-rule sampling of
    /// D7 → D8 → D9 → D10, classification, then (Group I only) the atomic
    /// measurement on C1 and Bob's correction on C2.
    pub fn run_attempt<G: Rng + ?Sized>(
        &self,
        attempt: usize,
        rng: &mut G,
        mut trace: Option<&mut Vec<TraceStep>>,
    ) -> Result<AttemptResult> {
        for (name, s) in &self.stages {
            Self::trace_state(&mut trace, name, s)?;
        }
        let mut state = self.detection_state().clone();
        let mut outcomes = [OFF; 4];
        let mut probability = 1.0;
        for (k, &mode) in DETECTOR_MODES.iter().enumerate() {
            let off = state.project_threshold(mode, OFF)?;
            let u: f64 = rng.random();
            let (outcome, branch) = if u < off.probability {
                (OFF, off)
            } else {
                (ON, state.project_threshold(mode, ON)?)
            };
            outcomes[k] = outcome;
            probability *= branch.probability;
            Self::trace_measurement(
                &mut trace,
                format!("detect {}", DETECTOR_NAMES[k]),
                &branch.state,
                outcome.to_string(),
                branch.probability,
            )?;
            if !branch.is_possible() {
                // Only reachable through rounding in the sampler; the record
                // is reported as-is with its vanishing probability.
                let pattern = Pattern(outcomes);
                return self.invalid_result(attempt, pattern, probability);
            }
            state = branch.state;
        }

        let pattern = Pattern(outcomes);
        let group = classify(pattern);
        match group {
            Group::Invalid => self.invalid_result(attempt, pattern, probability),
            Group::GroupII(_) => {
                let post_fidelity = self.failure_fidelity(&state)?;
                Ok(AttemptResult {
                    attempt,
                    kind: AttemptKind::Failure,
                    group,
                    record: DetectionRecord {
                        pattern,
                        atomic: None,
                    },
                    correction: None,
                    probability,
                    post_fidelity,
                })
            }
            Group::GroupI => {
                let plus = state.project_atom(ATOM_C1, AtomOutcome::Plus)?;
                let u: f64 = rng.random();
                let (atomic, branch) = if u < plus.probability {
                    (AtomOutcome::Plus, plus)
                } else {
                    (
                        AtomOutcome::Minus,
                        state.project_atom(ATOM_C1, AtomOutcome::Minus)?,
                    )
                };
                Self::trace_measurement(
                    &mut trace,
                    "measure C1 in +/-".into(),
                    &branch.state,
                    atomic.to_string(),
                    branch.probability,
                )?;
                probability *= branch.probability;
                let correction = correction_for(pattern, atomic)?;
                let post_fidelity = self.success_fidelity(&branch.state, correction)?;
                if let Some(t) = trace {
                    let corrected = branch.state.apply_pauli(ATOM_C2, correction)?;
                    t.push(TraceStep {
                        step: format!("apply {correction} on C2"),
                        size: corrected.size(),
                        norm: corrected.norm()?,
                        outcome: Some(format!("fidelity={post_fidelity:.12}")),
                        probability: None,
                    });
                }
                Ok(AttemptResult {
                    attempt,
                    kind: AttemptKind::Success,
                    group,
                    record: DetectionRecord {
                        pattern,
                        atomic: Some(atomic),
                    },
                    correction: Some(correction),
                    probability,
                    post_fidelity,
                })
            }
        }
    }

    fn invalid_result(
        &self,
        attempt: usize,
        pattern: Pattern,
        probability: f64,
    ) -> Result<AttemptResult> {
        if probability > INVALID_TOL {
            return Err(Error::ModelViolation(format!(
                "pattern {pattern} sampled with probability {probability:e}"
            )));
        }
        Ok(AttemptResult {
            attempt,
            kind: AttemptKind::Invalid,
            group: classify(pattern),
            record: DetectionRecord {
                pattern,
                atomic: None,
            },
            correction: None,
            probability,
            post_fidelity: f64::NAN,
        })
    }

    /// Repeat-until-success loop for one trial. Attempt `k` draws from the
    /// stream `(seed, trial, k)`.
    pub fn run(
        &self,
        trial: u64,
        mut trace: Option<&mut Vec<TraceStep>>,
    ) -> Result<ProtocolRunReport> {
        let mut attempts = Vec::new();
        for k in 0..self.config.max_attempts {
            let mut rng = attempt_rng(self.config.seed, trial, k as u64);
            let result = self.run_attempt(k + 1, &mut rng, trace.as_deref_mut())?;
            if result.kind == AttemptKind::Failure && result.post_fidelity < 1.0 - R::FIDELITY_TOL {
                return Err(Error::ModelViolation(format!(
                    "attempt {} failed without preserving the message (fidelity {})",
                    k + 1,
                    result.post_fidelity
                )));
            }
            let done = result.kind == AttemptKind::Success;
            attempts.push(result);
            if done {
                break;
            }
        }
        let success = attempts
            .last()
            .is_some_and(|a| a.kind == AttemptKind::Success);
        Ok(ProtocolRunReport {
            attempts_used: attempts.len(),
            attempts,
            success,
        })
    }

    /// Projects the detection state onto `pattern` (and onto `atomic` on C1
    /// when given), without sampling.
    pub fn resolve(
        &self,
        pattern: Pattern,
        atomic: Option<AtomOutcome>,
    ) -> Result<ResolvedRecord<R>> {
        let group = classify(pattern);
        let mut state = self.detection_state().clone();
        let mut probability = 1.0;
        let impossible = |probability| ResolvedRecord {
            record: DetectionRecord { pattern, atomic },
            group,
            probability,
            state: None,
        };
        for (k, &mode) in DETECTOR_MODES.iter().enumerate() {
            let branch = state.project_threshold(mode, pattern.0[k])?;
            probability *= branch.probability;
            if !branch.is_possible() {
                return Ok(impossible(probability));
            }
            state = branch.state;
        }
        if let Some(outcome) = atomic {
            let branch = state.project_atom(ATOM_C1, outcome)?;
            probability *= branch.probability;
            if !branch.is_possible() {
                return Ok(impossible(probability));
            }
            state = branch.state;
        }
        Ok(ResolvedRecord {
            record: DetectionRecord { pattern, atomic },
            group,
            probability,
            state: Some(state),
        })
    }

    /// All 16 optical patterns; Group I patterns are split by the atomic
    /// outcome and carry the post-correction fidelity of C2, Group II carry
    /// the C1⊗C2 preservation fidelity.
    pub fn enumerate(&self) -> Result<OutcomeAudit> {
        let mut records = Vec::new();
        let (mut group_i, mut group_ii, mut invalid) = (0.0, 0.0, 0.0);
        for pattern in Pattern::all() {
            match classify(pattern) {
                Group::GroupI => {
                    for outcome in AtomOutcome::BOTH {
                        let r = self.resolve(pattern, Some(outcome))?;
                        let correction = correction_for(pattern, outcome)?;
                        let fidelity = match &r.state {
                            Some(s) => Some(self.success_fidelity(s, correction)?),
                            None => None,
                        };
                        group_i += r.probability;
                        records.push(AuditRecord {
                            record: r.record,
                            group: r.group,
                            probability: r.probability,
                            correction: Some(correction),
                            fidelity,
                        });
                    }
                }
                group => {
                    let r = self.resolve(pattern, None)?;
                    let fidelity = match (&r.state, group) {
                        (Some(s), Group::GroupII(_)) => Some(self.failure_fidelity(s)?),
                        _ => None,
                    };
                    if group == Group::Invalid {
                        invalid += r.probability;
                    } else {
                        group_ii += r.probability;
                    }
                    records.push(AuditRecord {
                        record: r.record,
                        group,
                        probability: r.probability,
                        correction: None,
                        fidelity,
                    });
                }
            }
        }
        Ok(OutcomeAudit {
            records,
            group_i,
            group_ii,
            invalid,
        })
    }
}

/// Runs one trial (trial index 0) of `config` on the configured backend.
pub fn run_protocol(
    config: &ProtocolConfig,
    trace: Option<&mut Vec<TraceStep>>,
) -> Result<ProtocolRunReport> {
    match config.backend {
        BackendKind::Exact => Teleporter::<HybridState>::new(config, &())?.run(0, trace),
        BackendKind::Fock => {
            Teleporter::<FockVector>::new(config, &config.effective_cutoff())?.run(0, trace)
        }
    }
}

/// Exhaustive audit on the configured backend.
pub fn enumerate_outcomes(config: &ProtocolConfig) -> Result<OutcomeAudit> {
    match config.backend {
        BackendKind::Exact => Teleporter::<HybridState>::new(config, &())?.enumerate(),
        BackendKind::Fock => {
            Teleporter::<FockVector>::new(config, &config.effective_cutoff())?.enumerate()
        }
    }
}
