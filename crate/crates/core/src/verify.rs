// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Cross-checks between the two backends, the closed forms and the
//! correction table.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytics;
use crate::cat_algebra::HybridState;
use crate::fock::FockVector;
use crate::protocol::{
    correction_for, Group, MessageState, Pattern, ProtocolConfig, Teleporter, Tolerances, ATOM_C2,
    DETECTOR_MODES, DETECTOR_NAMES, FOCK_ALPHA_SQ_LIMIT, INVALID_TOL,
};
use crate::{AtomOutcome, Pauli, Register, Result, Threshold};

/// Stage overlaps between the backends must reach `1 − EQUIVALENCE_TOL`.
pub const EQUIVALENCE_TOL: f64 = 1e-6;
/// Single-detector OFF probabilities must agree to this.
pub const OFF_PROB_TOL: f64 = 1e-7;
/// Enumerated totals must match the closed forms to this.
pub const AUDIT_TOL: f64 = 1e-9;

const ON: Threshold = Threshold::On;
const OFF: Threshold = Threshold::Off;

/// A printed correction table row: detector pattern, C1 outcome, unitary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrintedRow {
    pub pattern: Pattern,
    pub atomic: AtomOutcome,
    pub unitary: Pauli,
}

/// Correction table as printed, row order preserved. Row 7
/// lists σ_Z although its own post-measurement column reads σ_X M.
pub const PRINTED_TABLE: [PrintedRow; 8] = [
    PrintedRow {
        pattern: Pattern([ON, OFF, ON, OFF]),
        atomic: AtomOutcome::Plus,
        unitary: Pauli::I,
    },
    PrintedRow {
        pattern: Pattern([ON, OFF, ON, OFF]),
        atomic: AtomOutcome::Minus,
        unitary: Pauli::Z,
    },
    PrintedRow {
        pattern: Pattern([OFF, ON, OFF, ON]),
        atomic: AtomOutcome::Plus,
        unitary: Pauli::I,
    },
    PrintedRow {
        pattern: Pattern([OFF, ON, OFF, ON]),
        atomic: AtomOutcome::Minus,
        unitary: Pauli::Z,
    },
    PrintedRow {
        pattern: Pattern([ON, OFF, OFF, ON]),
        atomic: AtomOutcome::Plus,
        unitary: Pauli::X,
    },
    PrintedRow {
        pattern: Pattern([ON, OFF, OFF, ON]),
        atomic: AtomOutcome::Minus,
        unitary: Pauli::IY,
    },
    PrintedRow {
        pattern: Pattern([OFF, ON, ON, OFF]),
        atomic: AtomOutcome::Plus,
        unitary: Pauli::Z,
    },
    PrintedRow {
        pattern: Pattern([OFF, ON, ON, OFF]),
        atomic: AtomOutcome::Minus,
        unitary: Pauli::IY,
    },
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageOverlap {
    pub stage: String,
    pub overlap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BackendEquivalence {
    pub alpha_sq: f64,
    pub cutoff: usize,
    pub stages: Vec<StageOverlap>,
    pub min_overlap: f64,
    pub off_exact: [f64; 4],
    pub off_fock: [f64; 4],
    pub max_off_diff: f64,
    pub passed: bool,
}

/// Evolves the full circuit in both backends and compares every stage.
pub fn backend_equivalence(
    alpha_sq: f64,
    cutoff: Option<usize>,
    message: MessageState,
) -> Result<BackendEquivalence> {
    let mut config = ProtocolConfig::new(alpha_sq, message);
    config.cutoff = cutoff;
    let cutoff = config.effective_cutoff();
    let exact = Teleporter::<HybridState>::new(&config, &())?;
    let fock = Teleporter::<FockVector>::new(&config, &cutoff)?;

    let mut stages = Vec::new();
    for ((name, e), (_, f)) in exact.stages().iter().zip(fock.stages()) {
        let expanded = FockVector::from_hybrid(e, cutoff)?.normalize()?;
        let overlap = expanded.inner(&f.normalize()?)?.norm();
        stages.push(StageOverlap {
            stage: name.to_string(),
            overlap,
        });
    }
    let min_overlap = stages
        .iter()
        .map(|s| s.overlap)
        .fold(f64::INFINITY, f64::min);

    let mut off_exact = [0.0; 4];
    let mut off_fock = [0.0; 4];
    for (k, &mode) in DETECTOR_MODES.iter().enumerate() {
        off_exact[k] = exact
            .detection_state()
            .project_threshold(mode, OFF)?
            .probability;
        off_fock[k] = fock.detection_state().vacuum_probability(mode)?;
    }
    let max_off_diff = off_exact
        .iter()
        .zip(&off_fock)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(BackendEquivalence {
        alpha_sq,
        cutoff,
        stages,
        min_overlap,
        off_exact,
        off_fock,
        max_off_diff,
        passed: min_overlap >= 1.0 - EQUIVALENCE_TOL && max_off_diff <= OFF_PROB_TOL,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityAudit {
    pub alpha_sq: f64,
    pub group_i: f64,
    pub group_ii: f64,
    pub invalid: f64,
    pub expected_success: f64,
    pub expected_fail: f64,
    pub passed: bool,
}

/// Exhaustive enumeration (exact backend) against the closed forms.
pub fn probability_audit(alpha_sq: f64, message: MessageState) -> Result<ProbabilityAudit> {
    let t = Teleporter::<HybridState>::new(&ProtocolConfig::new(alpha_sq, message), &())?;
    let audit = t.enumerate()?;
    let expected_success = analytics::p_success(alpha_sq);
    let expected_fail = analytics::p_fail(alpha_sq);
    let passed = (audit.group_i - expected_success).abs() <= AUDIT_TOL
        && (audit.group_ii - expected_fail).abs() <= AUDIT_TOL
        && audit.invalid < INVALID_TOL
        && (audit.total() - 1.0).abs() <= AUDIT_TOL;
    Ok(ProbabilityAudit {
        alpha_sq,
        group_i: audit.group_i,
        group_ii: audit.group_ii,
        invalid: audit.invalid,
        expected_success,
        expected_fail,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub row: usize,
    pub pattern: Pattern,
    pub atomic: AtomOutcome,
    /// Correction that maximizes the C2 fidelity in simulation.
    pub derived: Pauli,
    pub fidelity: f64,
    pub printed: Pauli,
    /// What [`correction_for`] returns.
    pub tabulated: Pauli,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub alpha_sq: f64,
    pub rows: Vec<TableRow>,
    /// Human-readable notes for rows where the printed unitary disagrees.
    pub discrepancies: Vec<String>,
    /// Derived and tabulated agree on every row with unit fidelity.
    pub passed: bool,
}

/// Regenerates the correction table from the simulated post-measurement
/// states: for each Group I record, the Pauli that best restores a generic
/// message on C2.
pub fn regenerate_table<R: Register + Tolerances>(
    teleporter: &Teleporter<R>,
) -> Result<TableReport> {
    let message = teleporter.config().message.amplitudes();
    let mut rows = Vec::new();
    let mut discrepancies = Vec::new();
    let mut passed = true;
    for (i, printed) in PRINTED_TABLE.iter().enumerate() {
        let resolved = teleporter.resolve(printed.pattern, Some(printed.atomic))?;
        let state = match resolved.state {
            Some(s) => s,
            None => {
                passed = false;
                discrepancies.push(format!("row {}: record has zero probability", i + 1));
                continue;
            }
        };
        let mut best = (Pauli::I, f64::NEG_INFINITY);
        for op in Pauli::ALL {
            let f = state
                .apply_pauli(ATOM_C2, op)?
                .reduced_atoms(&[ATOM_C2])?
                .fidelity_with(&message);
            if f > best.1 {
                best = (op, f);
            }
        }
        let tabulated = correction_for(printed.pattern, printed.atomic)?;
        if tabulated != best.0 || best.1 < 1.0 - R::FIDELITY_TOL {
            passed = false;
        }
        if printed.unitary != best.0 {
            discrepancies.push(format!(
                "Table 1 row {}: derived σ{}, printed σ{}",
                i + 1,
                pauli_symbol(best.0),
                pauli_symbol(printed.unitary)
            ));
        }
        rows.push(TableRow {
            row: i + 1,
            pattern: printed.pattern,
            atomic: printed.atomic,
            derived: best.0,
            fidelity: best.1,
            printed: printed.unitary,
            tabulated,
        });
    }
    Ok(TableReport {
        alpha_sq: teleporter.config().alpha_sq,
        rows,
        discrepancies,
        passed,
    })
}

fn pauli_symbol(p: Pauli) -> &'static str {
    match p {
        Pauli::I => "I",
        Pauli::Z => "Z",
        Pauli::X => "X",
        Pauli::IY => "iY",
    }
}

/// Message whose images under I, Z, X, iY are pairwise distinguishable.
pub fn generic_message() -> MessageState {
    MessageState::from_bloch(1.0, 0.3)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MessageIndependence {
    pub alpha_sq: f64,
    pub samples: usize,
    pub group_i_min: f64,
    pub group_i_max: f64,
    pub expected_success: f64,
    pub max_deviation: f64,
    pub min_success_fidelity: f64,
    pub min_failure_fidelity: f64,
    pub passed: bool,
}

/// Random Bloch-sphere messages: Group I total must not depend on the
/// message, every success must restore it exactly and every failure must
/// leave `|M⟩⊗|+⟩` intact.
pub fn message_independence(
    alpha_sq: f64,
    samples: usize,
    seed: u64,
) -> Result<MessageIndependence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let expected_success = analytics::p_success(alpha_sq);
    let mut group_i_min = f64::INFINITY;
    let mut group_i_max = f64::NEG_INFINITY;
    let mut min_success_fidelity = 1.0f64;
    let mut min_failure_fidelity = 1.0f64;
    for _ in 0..samples {
        let message = MessageState::random(&mut rng);
        let t = Teleporter::<HybridState>::new(&ProtocolConfig::new(alpha_sq, message), &())?;
        let audit = t.enumerate()?;
        group_i_min = group_i_min.min(audit.group_i);
        group_i_max = group_i_max.max(audit.group_i);
        for r in &audit.records {
            match (r.group, r.fidelity) {
                (Group::GroupI, Some(f)) => min_success_fidelity = min_success_fidelity.min(f),
                (Group::GroupII(_), Some(f)) => min_failure_fidelity = min_failure_fidelity.min(f),
                _ => {}
            }
        }
    }
    let max_deviation = (group_i_max - expected_success)
        .abs()
        .max((group_i_min - expected_success).abs());
    let tol = HybridState::FIDELITY_TOL;
    Ok(MessageIndependence {
        alpha_sq,
        samples,
        group_i_min,
        group_i_max,
        expected_success,
        max_deviation,
        min_success_fidelity,
        min_failure_fidelity,
        passed: max_deviation <= AUDIT_TOL
            && group_i_max - group_i_min <= AUDIT_TOL
            && min_success_fidelity >= 1.0 - tol
            && min_failure_fidelity >= 1.0 - tol,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub alpha_sq_list: Vec<f64>,
    pub equivalence: Vec<BackendEquivalence>,
    /// Values above the Fock limit, where the cross-backend check is skipped.
    pub equivalence_skipped: Vec<f64>,
    pub audits: Vec<ProbabilityAudit>,
    pub table: TableReport,
    pub independence: Vec<MessageIndependence>,
    pub failures: Vec<String>,
    pub passed: bool,
}

pub const INDEPENDENCE_SAMPLES: usize = 50;

/// Runs every check for each `alpha_sq` in the list.
pub fn run_all(alpha_sq_list: &[f64], cutoff: Option<usize>, seed: u64) -> Result<VerifyReport> {
    let mut failures = Vec::new();
    let mut equivalence = Vec::new();
    let mut equivalence_skipped = Vec::new();
    let mut audits = Vec::new();
    let mut independence = Vec::new();

    for &alpha_sq in alpha_sq_list {
        if alpha_sq <= FOCK_ALPHA_SQ_LIMIT {
            let eq = backend_equivalence(alpha_sq, cutoff, generic_message())?;
            if !eq.passed {
                failures.push(format!(
                    "backend equivalence at alpha_sq={alpha_sq}: min overlap {:.12}, max OFF diff {:e}",
                    eq.min_overlap, eq.max_off_diff
                ));
            }
            equivalence.push(eq);
        } else {
            equivalence_skipped.push(alpha_sq);
        }

        let audit = probability_audit(alpha_sq, generic_message())?;
        if !audit.passed {
            failures.push(format!(
                "probability audit at alpha_sq={alpha_sq}: group I {} (want {}), group II {} (want {}), invalid {:e}",
                audit.group_i, audit.expected_success, audit.group_ii, audit.expected_fail, audit.invalid
            ));
        }
        audits.push(audit);

        let ind = message_independence(alpha_sq, INDEPENDENCE_SAMPLES, seed)?;
        if !ind.passed {
            failures.push(format!(
                "message independence at alpha_sq={alpha_sq}: deviation {:e}, min success fidelity {}, min failure fidelity {}",
                ind.max_deviation, ind.min_success_fidelity, ind.min_failure_fidelity
            ));
        }
        independence.push(ind);
    }

    // Corrections do not depend on alpha; derive them where Group I records exist.
    let table_alpha = alpha_sq_list
        .iter()
        .copied()
        .find(|&a| a > 0.0)
        .unwrap_or(1.0);
    let t =
        Teleporter::<HybridState>::new(&ProtocolConfig::new(table_alpha, generic_message()), &())?;
    let table = regenerate_table(&t)?;
    if !table.passed {
        failures
            .push("correction table regeneration disagrees with the tabulated corrections".into());
    }

    Ok(VerifyReport {
        alpha_sq_list: alpha_sq_list.to_vec(),
        equivalence,
        equivalence_skipped,
        audits,
        table,
        independence,
        passed: failures.is_empty(),
        failures,
    })
}

impl VerifyReport {
    /// Plain-text rendering for terminals.
    pub fn render(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "== backend equivalence (exact vs fock) ==");
        for e in &self.equivalence {
            let _ = writeln!(
                out,
                "[{}] alpha_sq={} cutoff={} min stage overlap={:.12} max OFF diff={:.3e}",
                mark(e.passed),
                e.alpha_sq,
                e.cutoff,
                e.min_overlap,
                e.max_off_diff
            );
            for (k, name) in DETECTOR_NAMES.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "       P({name}=OFF) exact={:.12} fock={:.12}",
                    e.off_exact[k], e.off_fock[k]
                );
            }
        }
        for a in &self.equivalence_skipped {
            let _ = writeln!(out, "[SKIP] alpha_sq={a} above the fock limit");
        }
        let _ = writeln!(
            out,
            "== probability audit (16 patterns x atomic outcomes) =="
        );
        for a in &self.audits {
            let _ = writeln!(
                out,
                "[{}] alpha_sq={} group I={:.12} (closed form {:.12}) group II={:.12} (closed form {:.12}) invalid={:.3e}",
                mark(a.passed),
                a.alpha_sq,
                a.group_i,
                a.expected_success,
                a.group_ii,
                a.expected_fail,
                a.invalid
            );
        }
        let _ = writeln!(
            out,
            "== correction table (derived at alpha_sq={}) ==",
            self.table.alpha_sq
        );
        let _ = writeln!(out, "row  D7  D8  C1  D9  D10  derived  printed  fidelity");
        for r in &self.table.rows {
            let on = |t: Threshold| if t.is_on() { "ON " } else { "OFF" };
            let p = r.pattern.0;
            let _ = writeln!(
                out,
                "{:<4} {} {} {:<3} {} {}  {:<8} {:<8} {:.12}",
                r.row,
                on(p[0]),
                on(p[1]),
                r.atomic.to_string(),
                on(p[2]),
                on(p[3]),
                r.derived.to_string(),
                r.printed.to_string(),
                r.fidelity
            );
        }
        for d in &self.table.discrepancies {
            let _ = writeln!(out, "note: {d}");
        }
        let _ = writeln!(out, "[{}] table regeneration", mark(self.table.passed));
        let _ = writeln!(out, "== message independence ==");
        for m in &self.independence {
            let _ = writeln!(
                out,
                "[{}] alpha_sq={} samples={} group I in [{:.12}, {:.12}] min success fidelity={:.12} min failure fidelity={:.12}",
                mark(m.passed),
                m.alpha_sq,
                m.samples,
                m.group_i_min,
                m.group_i_max,
                m.min_success_fidelity,
                m.min_failure_fidelity
            );
        }
        let _ = writeln!(out, "overall: {}", mark(self.passed));
        for f in &self.failures {
            let _ = writeln!(out, "failed: {f}");
        }
        out
    }
}
