// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! The four subcommands. Each returns the process exit code.

use std::path::PathBuf;

use ecs_teleport::montecarlo::{self, TrialOutcome};
use ecs_teleport::protocol::{run_protocol, TraceStep};
use ecs_teleport::{
    analytics, rng, verify, AtomOutcome, AttemptKind, AttemptResult, BackendKind, Error,
    ProtocolConfig,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{MonteCarloArgs, SweepArgs, TeleportArgs, VerifyArgs};
use crate::output::{ensure_dir, write_csv, write_json, RunManifest};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_EXHAUSTED: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_INTERNAL: u8 = 70;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_)
            | Error::InvalidMessage { .. }
            | Error::CutoffTooSmall { .. }
            | Error::RegisterTooLarge { .. } => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: format!("writing output: {e}"),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn describe(config: &ProtocolConfig) -> String {
    let mut s = format!(
        "alpha_sq={} backend={} max_attempts={} seed={}",
        config.alpha_sq, config.backend, config.max_attempts, config.seed
    );
    if config.backend == BackendKind::Fock {
        s.push_str(&format!(" cutoff={}", config.effective_cutoff()));
    }
    let [a, b] = config.message.amplitudes();
    s.push_str(&format!(
        " message=({:.6}{:+.6}i)|g> + ({:.6}{:+.6}i)|f>",
        a.re, a.im, b.re, b.im
    ));
    s
}

fn atomic_symbol(a: Option<AtomOutcome>) -> &'static str {
    match a {
        Some(AtomOutcome::Plus) => "+",
        Some(AtomOutcome::Minus) => "-",
        None => "",
    }
}

fn attempt_line(r: &AttemptResult) -> String {
    let mut s = format!(
        "attempt {}: {:<7} record={} p={:.9}",
        r.attempt, r.kind, r.record, r.probability
    );
    match r.kind {
        AttemptKind::Success => s.push_str(&format!(
            " correction={} fidelity={:.12}",
            r.correction.map(|c| c.to_string()).unwrap_or_default(),
            r.post_fidelity
        )),
        AttemptKind::Failure => s.push_str(&format!(
            " message-preserved-fidelity={:.12}",
            r.post_fidelity
        )),
        AttemptKind::Invalid => s.push_str(" (outside both groups)"),
    }
    s
}

pub fn teleport(args: &TeleportArgs) -> CmdResult {
    let config = args.run.protocol_config();
    config.validate()?;
    println!("{}", describe(&config));
    let mut trace: Vec<TraceStep> = Vec::new();
    let report = run_protocol(&config, Some(&mut trace))?;
    let mut attempt = 0;
    for step in &trace {
        if step.step.starts_with("prepare") {
            attempt += 1;
            println!("-- attempt {attempt} --");
        }
        println!("  {step}");
    }
    for r in &report.attempts {
        println!("{}", attempt_line(r));
    }
    if args.verbose {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| Failure {
                code: EXIT_INTERNAL,
                message: e.to_string(),
            })?
        );
    }
    if report.success {
        println!("result: success on attempt {}", report.attempts_used);
        Ok(EXIT_OK)
    } else {
        println!("result: no success in {} attempt(s)", report.attempts_used);
        Ok(EXIT_EXHAUSTED)
    }
}

#[derive(Serialize)]
struct TrialRow {
    trial: u64,
    success: bool,
    attempts_used: usize,
    last_kind: String,
    last_pattern: String,
    last_atomic: &'static str,
    last_correction: String,
    last_probability: f64,
    last_fidelity: Option<f64>,
}

impl From<&TrialOutcome> for TrialRow {
    fn from(o: &TrialOutcome) -> Self {
        TrialRow {
            trial: o.trial,
            success: o.success,
            attempts_used: o.attempts_used,
            last_kind: o.last.kind.to_string(),
            last_pattern: o.last.record.pattern.code(),
            last_atomic: atomic_symbol(o.last.record.atomic),
            last_correction: o.last.correction.map(|c| c.to_string()).unwrap_or_default(),
            last_probability: o.last.probability,
            last_fidelity: Some(o.last.post_fidelity).filter(|f| f.is_finite()),
        }
    }
}

pub fn montecarlo(args: &MonteCarloArgs) -> CmdResult {
    if args.trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let config = args.run.protocol_config();
    config.validate()?;
    let outcomes = montecarlo::run_trials(&config, args.trials)?;
    let summary = montecarlo::summarize(&config, &outcomes);

    ensure_dir(&args.out_dir)?;
    let csv_path = args.out_dir.join("montecarlo_trials.csv");
    let summary_path = args.out_dir.join("montecarlo_summary.json");
    write_csv(&csv_path, outcomes.iter().map(TrialRow::from))?;
    write_json(&summary_path, &summary)?;
    let echo = json!({ "flags": args, "protocol": config });
    let outputs = [csv_path, summary_path];
    write_json(
        &args.out_dir.join("montecarlo_manifest.json"),
        &RunManifest::new("montecarlo", &echo, &outputs),
    )?;

    println!("{}", describe(&config));
    println!(
        "trials={} successes={} empirical={:.6} wilson95=[{:.6}, {:.6}]",
        summary.trials,
        summary.successes,
        summary.empirical_rate,
        summary.wilson_low,
        summary.wilson_high
    );
    println!(
        "analytic={:.6} sigma={:.6} deviation={:.2} sigma",
        summary.analytic, summary.sigma, summary.deviation_sigma
    );
    for p in &outputs {
        println!("wrote {}", p.display());
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SweepRow {
    alpha_sq: f64,
    n: u32,
    p_analytic: f64,
    p_empirical: Option<f64>,
    trials: Option<u64>,
}

pub fn sweep(args: &SweepArgs) -> CmdResult {
    if args.n_list.is_empty() || args.n_list.contains(&0) {
        return Err(Failure::usage("--n-list needs attempt counts >= 1"));
    }
    if !args.alpha_sq_min.is_finite() || args.alpha_sq_min < 0.0 || !args.alpha_sq_max.is_finite() {
        return Err(Failure::usage(
            "--alpha-sq-min must be >= 0 and --alpha-sq-max finite",
        ));
    }
    if args.trials == Some(0) {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let grid = analytics::grid(args.alpha_sq_min, args.alpha_sq_max, args.alpha_sq_step);
    if grid.is_empty() {
        return Err(Failure::usage(format!(
            "empty grid: min={} max={} step={}",
            args.alpha_sq_min, args.alpha_sq_max, args.alpha_sq_step
        )));
    }

    let points = analytics::sweep(&grid, &args.n_list);
    let max_n = *args.n_list.iter().max().expect("non-empty");
    let mut empirical: Vec<Option<f64>> = vec![None; points.len()];
    if let Some(trials) = args.trials {
        for (g, &alpha_sq) in grid.iter().enumerate() {
            let mut config = ProtocolConfig::new(alpha_sq, args.message.message());
            config.max_attempts = max_n as usize;
            config.backend = args.backend.into();
            config.cutoff = args.cutoff;
            config.seed = rng::stream_seed(args.seed, g as u64, u64::MAX);
            config.validate()?;
            let outcomes = montecarlo::run_trials(&config, trials)?;
            for (k, &n) in args.n_list.iter().enumerate() {
                empirical[g * args.n_list.len() + k] =
                    Some(montecarlo::success_rate_within(&outcomes, n as usize));
            }
        }
    }

    let rows: Vec<SweepRow> = points
        .iter()
        .zip(&empirical)
        .map(|(p, e)| SweepRow {
            alpha_sq: p.alpha_sq,
            n: p.n,
            p_analytic: p.p_success_n,
            p_empirical: *e,
            trials: e.and(args.trials),
        })
        .collect();

    ensure_dir(&args.out_dir)?;
    let csv_path = args.out_dir.join("sweep.csv");
    write_csv(&csv_path, &rows)?;
    let outputs = [csv_path];
    write_json(
        &args.out_dir.join("sweep_manifest.json"),
        &RunManifest::new("sweep", args, &outputs),
    )?;

    println!(
        "grid: {} value(s) of alpha_sq in [{}, {}], n in {:?}",
        grid.len(),
        grid[0],
        grid[grid.len() - 1],
        args.n_list
    );
    if let Some(trials) = args.trials {
        let worst = rows
            .iter()
            .map(|r| {
                let diff = (r.p_empirical.unwrap_or(f64::NAN) - r.p_analytic).abs();
                let sigma = (r.p_analytic * (1.0 - r.p_analytic) / trials as f64).sqrt();
                let z = if sigma > 0.0 {
                    diff / sigma
                } else if diff == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                (z, diff, r.alpha_sq, r.n)
            })
            .fold((-1.0, 0.0, 0.0, 0), |a, b| if b.0 > a.0 { b } else { a });
        println!(
            "empirical overlay: {trials} trials per point, worst deviation {:.6} ({:.2} sigma) at alpha_sq={} n={}",
            worst.1, worst.0, worst.2, worst.3
        );
    }
    for p in &outputs {
        println!("wrote {}", p.display());
    }
    Ok(EXIT_OK)
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    if args.alpha_sq_list.is_empty()
        || args
            .alpha_sq_list
            .iter()
            .any(|a| !a.is_finite() || *a < 0.0)
    {
        return Err(Failure::usage("--alpha-sq-list needs finite values >= 0"));
    }
    let report = verify::run_all(&args.alpha_sq_list, args.cutoff, args.seed)?;
    print!("{}", report.render());
    if args.verbose {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| Failure {
                code: EXIT_INTERNAL,
                message: e.to_string(),
            })?
        );
    }

    ensure_dir(&args.out_dir)?;
    let json_path: PathBuf = args.out_dir.join("verify_report.json");
    write_json(&json_path, &report)?;
    let outputs = [json_path];
    write_json(
        &args.out_dir.join("verify_manifest.json"),
        &RunManifest::new("verify", args, &outputs),
    )?;
    for p in &outputs {
        println!("wrote {}", p.display());
    }
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
