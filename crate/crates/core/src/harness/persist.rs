//! Sweep output directory layout:
//!
//! ```text
//! out/
//!   config.json                 resolved configuration
//!   trials.json                 one TrialResult JSON object per line
//!   summary.json                SweepSummary
//!   timings.json                one {"trial_id", "wall_time_secs"} per line
//!   eigenvalues/<id>-<est>.csv  d ascending values, no header (raw_spectra)
//! ```
//!
//! Every file is written to a temporary sibling and renamed into place.

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::sweep::{SweepOutcome, SweepSummary};
use super::trial::TrialResult;
use crate::error::{Error, Result};
use crate::formats::format_eigenvalue_lines;

pub const TRIALS_FILE: &str = "trials.json";
pub const SUMMARY_FILE: &str = "summary.json";
pub const TIMINGS_FILE: &str = "timings.json";
pub const CONFIG_FILE: &str = "config.json";
pub const SPECTRA_DIR: &str = "eigenvalues";

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::io(path, std::io::Error::other("path has no file name")))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// JSON Lines encoding of `trials`.
pub fn trials_to_jsonl<'a>(trials: impl IntoIterator<Item = &'a TrialResult>) -> String {
    let mut out = String::new();
    for t in trials {
        out.push_str(&serde_json::to_string(t).expect("trial serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_trial_line(line: &str) -> Result<TrialResult> {
    serde_json::from_str(line).map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })
}

/// Parses a `trials.json` body; blank lines are skipped.
pub fn parse_trials(text: &str) -> Result<Vec<TrialResult>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn read_trials(path: &Path) -> Result<Vec<TrialResult>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trials(&text)
}

pub fn read_summary(path: &Path) -> Result<SweepSummary> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

#[derive(Serialize)]
struct TimingLine<'a> {
    trial_id: &'a str,
    wall_time_secs: f64,
}

/// Persists a sweep under `dir`, creating it if needed.
pub fn write_results(
    outcome: &SweepOutcome,
    cfg: Option<&ExperimentConfig>,
    dir: &Path,
    raw_spectra: bool,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    atomic_write(
        &dir.join(TRIALS_FILE),
        trials_to_jsonl(outcome.results()).as_bytes(),
    )?;
    let summary = serde_json::to_string_pretty(&outcome.summary).expect("summary serializes");
    atomic_write(&dir.join(SUMMARY_FILE), format!("{summary}\n").as_bytes())?;

    let mut timings = String::new();
    for run in &outcome.runs {
        let line = TimingLine {
            trial_id: &run.result.trial_id,
            wall_time_secs: run.wall_time.as_secs_f64(),
        };
        timings.push_str(&serde_json::to_string(&line).expect("timing serializes"));
        timings.push('\n');
    }
    atomic_write(&dir.join(TIMINGS_FILE), timings.as_bytes())?;

    if let Some(cfg) = cfg {
        atomic_write(
            &dir.join(CONFIG_FILE),
            format!("{}\n", cfg.to_json_pretty()).as_bytes(),
        )?;
    }

    if raw_spectra {
        let spectra_dir = dir.join(SPECTRA_DIR);
        fs::create_dir_all(&spectra_dir).map_err(|e| Error::io(&spectra_dir, e))?;
        for run in &outcome.runs {
            for (kind, esd) in &run.spectra {
                let file = spectra_dir.join(format!("{}-{}.csv", run.result.trial_id, kind.name()));
                atomic_write(&file, format_eigenvalue_lines(esd).as_bytes())?;
            }
        }
    }
    Ok(())
}
