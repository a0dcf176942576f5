// Copyright 2026 The ecs-teleport Authors
// SPDX-License-Identifier: Apache-2.0

//! Flag definitions and `--config` file handling.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use ecs_teleport::{BackendKind, MessageState, ProtocolConfig};
use serde::Serialize;

const EXIT_CODES: &str = "\
Exit codes:
  0   success (teleport succeeded, command completed, all checks passed)
  1   verification failure (verify)
  2   protocol exhausted its attempts without success (teleport)
  64  usage error (bad flags, bad config file, invalid parameters)
  70  internal error or model violation";

#[derive(Parser, Debug)]
#[command(
    name = "ecs-teleport",
    version,
    about = "Simulate atomic teleportation over an entangled coherent state channel",
    after_help = EXIT_CODES,
    args_override_self = true
)]
pub struct Cli {
    /// Flat key=value file supplying flag defaults; command-line flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the protocol once and print the step-by-step trace.
    #[command(args_override_self = true, after_help = EXIT_CODES)]
    Teleport(TeleportArgs),
    /// Run many independent seeded trials and compare with the closed form.
    #[command(args_override_self = true, after_help = EXIT_CODES)]
    Montecarlo(MonteCarloArgs),
    /// Tabulate the success probability over a grid of |alpha|^2 and attempts.
    #[command(args_override_self = true, after_help = EXIT_CODES)]
    Sweep(SweepArgs),
    /// Cross-check backends, closed forms and the correction table.
    #[command(args_override_self = true, after_help = EXIT_CODES)]
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Fock,
}

impl From<Backend> for BackendKind {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Exact => BackendKind::Exact,
            Backend::Fock => BackendKind::Fock,
        }
    }
}

/// Message qubit `cos(θ/2)|g⟩ + e^{iφ} sin(θ/2)|f⟩`.
#[derive(Args, Clone, Debug, Serialize)]
pub struct MessageArgs {
    /// Polar angle of the message on the Bloch sphere.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Azimuthal angle of the message on the Bloch sphere.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
}

impl MessageArgs {
    pub fn message(&self) -> MessageState {
        MessageState::from_bloch(self.theta, self.phi)
    }
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct RunArgs {
    /// Mean photon number |alpha|^2 of each channel mode.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha_sq: f64,
    #[command(flatten)]
    pub message: MessageArgs,
    /// Master seed for all random streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Backend::Exact)]
    pub backend: Backend,
    /// Attempts before the protocol gives up.
    #[arg(long, default_value_t = 1)]
    pub max_attempts: usize,
    /// Photon-number cutoff per mode (fock backend); defaults to a leakage-bounded rule.
    #[arg(long)]
    pub cutoff: Option<usize>,
}

impl RunArgs {
    pub fn protocol_config(&self) -> ProtocolConfig {
        let mut c = ProtocolConfig::new(self.alpha_sq, self.message.message());
        c.max_attempts = self.max_attempts;
        c.backend = self.backend.into();
        c.cutoff = self.cutoff;
        c.seed = self.seed;
        c
    }
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct TeleportArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Also print the full run report as JSON.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct MonteCarloArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Number of independent trials.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Directory receiving the CSV, summary and manifest.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_sq_min: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub alpha_sq_max: f64,
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub alpha_sq_step: f64,
    /// Attempt counts, comma separated.
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "1,2,3,5")]
    pub n_list: Vec<u32>,
    /// Trials per grid point for an empirical overlay.
    #[arg(long)]
    pub trials: Option<u64>,
    #[command(flatten)]
    pub message: MessageArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Backend::Exact)]
    pub backend: Backend,
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct VerifyArgs {
    /// Values of |alpha|^2 to check, comma separated.
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "0.5,1,2", allow_negative_numbers = true)]
    pub alpha_sq_list: Vec<f64>,
    /// Photon-number cutoff for the fock backend.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Seed for the random message sample.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also print the report as JSON.
    #[arg(long)]
    pub verbose: bool,
}

/// Flags that take no value; `key = true` in a config file enables them.
const SWITCHES: [&str; 1] = ["verbose"];

fn long_names(sub: &clap::Command) -> BTreeSet<String> {
    sub.get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect()
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Splices the entries of the `--config` file (if any) in right after the
/// subcommand name, ahead of the user's own flags, so the latter win.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;

    let cmd = Cli::command();
    let subs: Vec<&clap::Command> = cmd.get_subcommands().collect();
    let Some((pos, sub)) = args
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, a)| subs.iter().find(|s| a == s.get_name()).map(|s| (i, *s)))
    else {
        return Ok(args);
    };
    let accepted = long_names(sub);
    let known: BTreeSet<String> = subs.iter().flat_map(|s| long_names(s)).collect();

    let mut injected = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(format!(
                "{}:{}: config files cannot nest",
                path.display(),
                lineno + 1
            ));
        }
        if !known.contains(&key) {
            return Err(format!(
                "{}:{}: unknown key '{key}'",
                path.display(),
                lineno + 1
            ));
        }
        if !accepted.contains(&key) {
            // belongs to another subcommand
            continue;
        }
        if SWITCHES.contains(&key.as_str()) {
            match value {
                "true" => injected.push(OsString::from(format!("--{key}"))),
                "false" => {}
                _ => {
                    return Err(format!(
                        "{}:{}: '{key}' expects true or false",
                        path.display(),
                        lineno + 1
                    ))
                }
            }
        } else {
            injected.push(OsString::from(format!("--{key}={value}")));
        }
    }

    let mut out = args[..=pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}
