//! Run manifests: what was run, on what, with which seed, and how long it took.
//! Replaying one re-runs the recorded arguments and compares output bytes.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use serde::{Deserialize, Serialize};

use crate::commands::{run, violation_error};
use crate::{Cli, Common, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, verbatim.
    pub args: Vec<String>,
    /// Directory the arguments are relative to.
    pub cwd: PathBuf,
    pub inputs: Vec<PathBuf>,
    pub seed: u64,
    pub budget_configs: u64,
    /// The parsed subcommand, for reading rather than replay.
    pub sweep: String,
    pub outputs: Vec<PathBuf>,
    pub timing_ms: u128,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn command_name(cli: &Cli) -> String {
    let dbg = format!("{:?}", cli.command.as_ref().expect("checked"));
    let head = dbg.split([' ', '{', '(']).next().unwrap_or_default();
    // GenKai -> gen-kai
    let mut name = String::new();
    for (i, ch) in head.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            name.push('-');
        }
        name.push(ch.to_ascii_lowercase());
    }
    name
}

pub fn run_and_record(cli: &Cli, args: &[String]) -> Result<()> {
    let Some(command) = &cli.command else {
        return Err(kpebble::Error::Input("no subcommand given (see --help)".into()).into());
    };
    let started = Instant::now();
    let outcome = run(command, &cli.common)?;
    let timing_ms = started.elapsed().as_millis();
    match &cli.common.out {
        Some(out) => {
            std::fs::write(out, &outcome.text).with_context(|| format!("writing {}", out.display()))?;
            let manifest = RunManifest {
                command: command_name(cli),
                args: args.to_vec(),
                cwd: std::env::current_dir()?,
                inputs: outcome.inputs.clone(),
                seed: cli.common.seed,
                budget_configs: cli.common.budget,
                sweep: format!("{command:?}"),
                outputs: vec![out.clone()],
                timing_ms,
            };
            let path = manifest_path(out);
            std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{}", outcome.text),
    }
    violation_error(&outcome).map_or(Ok(()), Err)
}

/// Re-runs a manifest in its recorded directory. Differing output bytes are
/// a property violation; the recorded outputs are left untouched.
pub fn replay(path: &Path, common: &Common) -> Result<()> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let manifest: RunManifest = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let argv = std::iter::once("kpebble".to_string()).chain(manifest.args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| kpebble::Error::Input(format!("recorded arguments: {e}")))?;
    let Some(command) = &cli.command else {
        return Err(kpebble::Error::Input("manifest records no subcommand".into()).into());
    };
    let mut rerun_common = cli.common.clone();
    rerun_common.sequential |= common.sequential;
    std::env::set_current_dir(&manifest.cwd).with_context(|| format!("entering {}", manifest.cwd.display()))?;
    let outcome = run(command, &rerun_common)?;
    let out = manifest.outputs.first().ok_or_else(|| kpebble::Error::Input("manifest records no output".into()))?;
    let recorded = std::fs::read(out).with_context(|| format!("reading {}", out.display()))?;
    if recorded != outcome.text.as_bytes() {
        return Err(Violation(format!("replayed output differs from {}", out.display())).into());
    }
    eprintln!("replay: {} identical", out.display());
    Ok(())
}
