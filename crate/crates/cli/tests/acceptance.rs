// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ecs_teleport::montecarlo::run_trials;
use ecs_teleport::protocol::{OutcomeAudit, Teleporter};
use ecs_teleport::verify::{backend_equivalence, generic_message, regenerate_table};
use ecs_teleport::{analytics, rng, Group, HybridState, MessageState, ProtocolConfig};

const ENUM_ALPHAS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 2.5];
const MESSAGES: usize = 50;
const MESSAGE_SEED: u64 = 2026;

// Closed forms evaluated independently of the library.
fn oracle_success(alpha_sq: f64) -> f64 {
    let x2 = (-2.0 * alpha_sq).exp();
    (1.0 - x2).powi(2) / (1.0 + x2 * x2)
}

fn oracle_fail(alpha_sq: f64) -> f64 {
    let x2 = (-2.0 * alpha_sq).exp();
    2.0 * x2 / (1.0 + x2 * x2)
}

fn oracle_within(alpha_sq: f64, n: u32) -> f64 {
    1.0 - oracle_fail(alpha_sq).powi(n as i32)
}

// Frozen six-digit values of the closed form at the spot points.
const SPOT_1_1: f64 = 0.734_198;
const SPOT_1_3: f64 = 0.981_221;
const SPOT_2P5_1: f64 = 0.986_525;

type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn enumerate(alpha_sq: f64, message: MessageState) -> OutcomeAudit {
    Teleporter::<HybridState>::new(&ProtocolConfig::new(alpha_sq, message), &())
        .and_then(|t| t.enumerate())
        .expect("enumeration")
}

fn random_messages() -> Vec<MessageState> {
    let mut r = rng::attempt_rng(MESSAGE_SEED, 0, 0);
    (0..MESSAGES)
        .map(|_| MessageState::random(&mut r))
        .collect()
}

fn enumeration_group_i() -> Verdict {
    let mut worst: f64 = 0.0;
    for a in ENUM_ALPHAS {
        let audit = enumerate(a, generic_message());
        worst = worst.max((audit.group_i - oracle_success(a)).abs());
    }
    verdict(
        worst <= 1e-9,
        format!("max |group I - (1-x^2)^2/(1+x^4)| = {worst:.2e} over alpha_sq {ENUM_ALPHAS:?}"),
    )
}

fn enumeration_group_ii() -> Verdict {
    let (mut worst_ii, mut worst_total, mut worst_invalid): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for a in ENUM_ALPHAS {
        let audit = enumerate(a, generic_message());
        worst_ii = worst_ii.max((audit.group_ii - oracle_fail(a)).abs());
        worst_total = worst_total.max((audit.total() - 1.0).abs());
        worst_invalid = worst_invalid.max(audit.invalid);
    }
    verdict(
        worst_ii <= 1e-9 && worst_total <= 1e-9 && worst_invalid < 1e-9,
        format!(
            "max |group II - 2x^2/(1+x^4)| = {worst_ii:.2e}, max |I+II+invalid-1| = {worst_total:.2e}, max invalid = {worst_invalid:.2e}"
        ),
    )
}

fn sweep_csv(dir: &Path) -> Verdict {
    let status = Command::new(env!("CARGO_BIN_EXE_ecs-teleport"))
        .args(["sweep", "--out-dir"])
        .arg(dir)
        .output()
        .expect("spawn sweep");
    if !status.status.success() {
        return verdict(false, format!("sweep exited with {}", status.status));
    }
    let mut reader = csv::Reader::from_path(dir.join("sweep.csv")).expect("sweep.csv");
    let header: Vec<String> = reader
        .headers()
        .expect("header")
        .iter()
        .map(str::to_string)
        .collect();
    if header != ["alpha_sq", "n", "p_analytic", "p_empirical", "trials"] {
        return verdict(false, format!("unexpected header {header:?}"));
    }
    let mut rows: Vec<(f64, u32, f64)> = Vec::new();
    for rec in reader.records() {
        let rec = rec.expect("row");
        rows.push((
            rec[0].parse().unwrap(),
            rec[1].parse().unwrap(),
            rec[2].parse().unwrap(),
        ));
    }
    let worst = rows
        .iter()
        .map(|&(a, n, p)| (p - oracle_within(a, n)).abs())
        .fold(0.0, f64::max);
    let lookup = |a: f64, n: u32| {
        rows.iter()
            .find(|r| (r.0 - a).abs() < 1e-12 && r.1 == n)
            .map(|r| r.2)
            .unwrap_or(f64::NAN)
    };
    let spots = [(1.0, 1, SPOT_1_1), (1.0, 3, SPOT_1_3), (2.5, 1, SPOT_2P5_1)];
    let spots_ok = spots
        .iter()
        .all(|&(a, n, want)| (lookup(a, n) - want).abs() <= 5e-7);

    let ns = [1u32, 2, 3, 5];
    let alphas: Vec<f64> = (0..=80).map(|k| k as f64 * 0.05).collect();
    let complete = rows.len() == alphas.len() * ns.len()
        && alphas
            .iter()
            .all(|&a| ns.iter().all(|&n| lookup(a, n).is_finite()));
    let mono_alpha = ns
        .iter()
        .all(|&n| alphas.windows(2).all(|w| lookup(w[1], n) > lookup(w[0], n)));
    let mono_n = alphas
        .iter()
        .all(|&a| ns.windows(2).all(|w| lookup(a, w[1]) >= lookup(a, w[0])))
        && alphas[1..]
            .iter()
            .all(|&a| ns.windows(2).all(|w| lookup(a, w[1]) > lookup(a, w[0])));
    verdict(
        worst <= 1e-9 && spots_ok && complete && mono_alpha && mono_n,
        format!(
            "{} rows, max |p - (1-P_f^n)| = {worst:.2e}; p(1,1)={:.6} p(1,3)={:.6} p(2.5,1)={:.6}; monotone in alpha_sq: {mono_alpha}, in n: {mono_n}",
            rows.len(),
            lookup(1.0, 1),
            lookup(1.0, 3),
            lookup(2.5, 1)
        ),
    )
}

fn qualitative_claims() -> Verdict {
    let high: Vec<f64> = (0..=150).map(|k| 2.5 + k as f64 * 0.05).collect();
    let min_high = high
        .iter()
        .map(|&a| analytics::p_success_n(a, 1))
        .fold(f64::INFINITY, f64::min);
    let p13 = analytics::p_success_n(1.0, 3);
    let p12 = analytics::p_success_n(1.0, 2);
    verdict(
        min_high >= 0.986 && p13 >= 0.98,
        format!(
            "min p(alpha_sq in [2.5, 10], 1) = {min_high:.6} >= 0.986; p(1,3) = {p13:.6} >= 0.98; \
             excluded: the two-attempt figure 0.8 at alpha_sq=1 disagrees with the closed form p(1,2) = {p12:.6}"
        ),
    )
}

fn success_fidelity(messages: &[MessageState]) -> Verdict {
    let mut min_f: f64 = 1.0;
    let mut records = 0;
    for (k, m) in messages.iter().enumerate() {
        let a = ENUM_ALPHAS[k % ENUM_ALPHAS.len()];
        for r in enumerate(a, *m).records {
            if r.group == Group::GroupI {
                if let Some(f) = r.fidelity {
                    min_f = min_f.min(f);
                    records += 1;
                }
            }
        }
    }
    let t = Teleporter::<HybridState>::new(&ProtocolConfig::new(1.0, generic_message()), &())
        .expect("teleporter");
    let table = regenerate_table(&t).expect("table");
    let row7 = table.discrepancies == ["Table 1 row 7: derived σX, printed σZ"];
    verdict(
        records == messages.len() * 8 && min_f >= 1.0 - 1e-9 && table.passed && row7,
        format!(
            "{records} group I records over {} messages, min fidelity {min_f:.12}; table regenerated, discrepancies: {:?}",
            messages.len(),
            table.discrepancies
        ),
    )
}

fn failure_preserves(messages: &[MessageState]) -> Verdict {
    let mut min_f: f64 = 1.0;
    let mut records = 0;
    for (k, m) in messages.iter().enumerate() {
        let a = ENUM_ALPHAS[k % ENUM_ALPHAS.len()];
        for r in enumerate(a, *m).records {
            if let (Group::GroupII(_), Some(f)) = (r.group, r.fidelity) {
                min_f = min_f.min(f);
                records += 1;
            }
        }
    }
    verdict(
        records == messages.len() * 5 && min_f >= 1.0 - 1e-9,
        format!(
            "{records} group II records over {} messages, min fidelity with |M>|+> {min_f:.12}",
            messages.len()
        ),
    )
}

fn backend_agreement() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        let eq = backend_equivalence(a, None, generic_message()).expect("equivalence");
        ok &= eq.min_overlap >= 1.0 - 1e-6 && eq.max_off_diff <= 1e-7;
        parts.push(format!(
            "alpha_sq={a} cutoff={} min overlap {:.10} max OFF diff {:.1e}",
            eq.cutoff, eq.min_overlap, eq.max_off_diff
        ));
    }
    verdict(ok, parts.join("; "))
}

fn monte_carlo() -> Verdict {
    const TRIALS: u64 = 100_000;
    let config = ProtocolConfig::new(1.0, generic_message());
    let first = run_trials(&config, TRIALS).expect("trials");
    let successes = first.iter().filter(|o| o.success).count();
    let rate = successes as f64 / TRIALS as f64;
    let p = oracle_success(1.0);
    let sigma = (p * (1.0 - p) / TRIALS as f64).sqrt();
    let z = (rate - p).abs() / sigma;
    let again = run_trials(&config, TRIALS).expect("trials");
    let deterministic = first == again;
    verdict(
        z <= 3.0 && deterministic,
        format!(
            "{successes}/{TRIALS} = {rate:.6} vs {p:.6}, sigma {sigma:.5}, deviation {z:.2} sigma; identical rerun: {deterministic}"
        ),
    )
}

fn main() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let messages = random_messages();
    let criteria: Vec<Criterion> = vec![
        (
            "group I total by exhaustive enumeration",
            Duration::from_secs(5),
            Box::new(enumeration_group_i),
        ),
        (
            "group II total and probability closure",
            Duration::from_secs(5),
            Box::new(enumeration_group_ii),
        ),
        (
            "sweep CSV against the repeat-until-success law",
            Duration::from_secs(1),
            Box::new(|| sweep_csv(tmp.path())),
        ),
        (
            "high-alpha and three-attempt success levels",
            Duration::from_secs(1),
            Box::new(qualitative_claims),
        ),
        (
            "unit fidelity after correction",
            Duration::from_secs(10),
            Box::new(|| success_fidelity(&messages)),
        ),
        (
            "failure leaves the message intact",
            Duration::from_secs(10),
            Box::new(|| failure_preserves(&messages)),
        ),
        (
            "exact and fock backends agree",
            Duration::from_secs(60),
            Box::new(backend_agreement),
        ),
        (
            "Monte Carlo success rate at alpha_sq=1",
            Duration::from_secs(60),
            Box::new(monte_carlo),
        ),
    ];

    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        // The Monte Carlo budget covers one run; the determinism rerun is extra.
        let within = if i == 7 {
            elapsed / 2 <= *budget
        } else {
            elapsed <= *budget
        };
        let passed = v.passed && within;
        if !passed {
            failed += 1;
        }
        println!(
            "[{}] {}. {name}: {} ({:.2}s, budget {}s)",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
