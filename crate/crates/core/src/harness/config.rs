//! Experiment configuration (JSON).
//!
//! ```json
//! {
//!   "population": { "radial": "scaled-f-root", "p": 1, "coupling": "independent" },
//!   "schedule": { "preset": "semicircle", "dims": [16, 32, 64] },
//!   "replicates": 20,
//!   "estimators": ["covariance", "tyler"],
//!   "standardized": true,
//!   "reference": { "law": "semicircle" },
//!   "max_moment": 6,
//!   "seed": 42
//! }
//! ```
//!
//! `schedule` is either an explicit list of `[d, n]` pairs or a preset:
//! `semicircle` uses `n = 100·d`, `mp` uses `n = 4·d`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::TylerConfig;
use crate::laws::ReferenceLaw;
use crate::sampling::{CouplingMode, PopulationSpec, RadialLaw};

/// Largest supported moment order in summaries.
pub const MAX_MOMENT_ORDER: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Covariance,
    Tyler,
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Covariance => "covariance",
            EstimatorKind::Tyler => "tyler",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialKind {
    Chi,
    ScaledFRoot,
    Constant,
    SignedChi,
}

impl std::str::FromStr for RadialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chi" => Ok(RadialKind::Chi),
            "scaled-f-root" => Ok(RadialKind::ScaledFRoot),
            "constant" => Ok(RadialKind::Constant),
            "signed-chi" => Ok(RadialKind::SignedChi),
            other => Err(Error::Config(format!("unknown radial law {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CouplingKind {
    #[default]
    #[serde(rename = "independent")]
    Independent,
    #[serde(rename = "sign-u1")]
    SignU1,
}

impl From<CouplingKind> for CouplingMode {
    fn from(c: CouplingKind) -> Self {
        match c {
            CouplingKind::Independent => CouplingMode::Independent,
            CouplingKind::SignU1 => CouplingMode::SignOfFirstCoordinate,
        }
    }
}

/// Population family; the dimension comes from the schedule and the seed
/// from the trial.
///
/// `df` defaults to the dimension for `chi`, `signed-chi` and
/// `scaled-f-root`; `p` is required for `scaled-f-root` and `c` for
/// `constant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationTemplate {
    pub radial: RadialKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default)]
    pub coupling: CouplingKind,
}

impl PopulationTemplate {
    pub fn radial_law(&self, d: usize) -> Result<RadialLaw> {
        let df = match self.df {
            Some(k) => k,
            None => u32::try_from(d)
                .map_err(|_| Error::Config(format!("dimension {d} too large for a chi law")))?,
        };
        let law = match self.radial {
            RadialKind::Chi => RadialLaw::Chi(df),
            RadialKind::SignedChi => RadialLaw::SignedChi(df),
            RadialKind::ScaledFRoot => RadialLaw::ScaledFRoot {
                df,
                p: self
                    .p
                    .ok_or_else(|| Error::Config("scaled-f-root needs \"p\"".into()))?,
            },
            RadialKind::Constant => RadialLaw::Constant(
                self.c
                    .ok_or_else(|| Error::Config("constant radial law needs \"c\"".into()))?,
            ),
        };
        law.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(law)
    }

    pub fn at(&self, d: usize, seed: u64) -> Result<PopulationSpec> {
        PopulationSpec::new(d, self.radial_law(d)?, self.coupling.into(), seed)
            .map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `n = 100·d`, i.e. `d/n = 0.01`.
    Semicircle,
    /// `n = 4·d`, i.e. `y = 0.25`.
    Mp,
}

impl Preset {
    pub fn sample_size(&self, d: usize) -> Option<usize> {
        match self {
            Preset::Semicircle => d.checked_mul(100),
            Preset::Mp => d.checked_mul(4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Schedule {
    Pairs(Vec<[usize; 2]>),
    Preset { preset: Preset, dims: Vec<usize> },
}

impl Schedule {
    pub fn pairs(&self) -> Result<Vec<(usize, usize)>> {
        match self {
            Schedule::Pairs(p) => Ok(p.iter().map(|&[d, n]| (d, n)).collect()),
            Schedule::Preset { preset, dims } => {
                dims.iter()
                    .map(|&d| {
                        preset.sample_size(d).map(|n| (d, n)).ok_or_else(|| {
                            Error::Config(format!("sample size overflows for d = {d}"))
                        })
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub population: PopulationTemplate,
    pub schedule: Schedule,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    pub estimators: Vec<EstimatorKind>,
    /// Summarize `√(n/d)(A − I)` instead of `A`.
    #[serde(default = "default_true")]
    pub standardized: bool,
    pub reference: ReferenceLaw,
    #[serde(default = "default_max_moment")]
    pub max_moment: u32,
    /// Base seed; trial seeds are derived with [`crate::rng::mix_seed`].
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tyler: TylerConfig,
    /// Also write each trial's eigenvalues under `eigenvalues/`.
    #[serde(default)]
    pub raw_spectra: bool,
    /// Worker threads for the sweep; the global rayon pool when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn default_replicates() -> usize {
    1
}

fn default_true() -> bool {
    true
}

fn default_max_moment() -> u32 {
    6
}

impl ExperimentConfig {
    /// Parses and validates a JSON config.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let pairs = self.schedule.pairs()?;
        if pairs.is_empty() {
            return Err(Error::Config("schedule is empty".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be >= 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("at least one estimator is required".into()));
        }
        let mut sorted = self.estimators.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.estimators.len() {
            return Err(Error::Config("estimators are listed twice".into()));
        }
        if self.max_moment == 0 || self.max_moment > MAX_MOMENT_ORDER {
            return Err(Error::Config(format!(
                "max_moment must be in 1..={MAX_MOMENT_ORDER}"
            )));
        }
        self.tyler
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        let uses_tyler = self.estimators.contains(&EstimatorKind::Tyler);
        for &(d, n) in &pairs {
            if d == 0 || n == 0 {
                return Err(Error::Config(format!("invalid pair (d = {d}, n = {n})")));
            }
            if uses_tyler && n < d {
                return Err(Error::Config(format!(
                    "Tyler's estimator needs n >= d, got (d = {d}, n = {n})"
                )));
            }
            self.population.radial_law(d)?;
        }
        Ok(())
    }

    pub fn pairs(&self) -> Result<Vec<(usize, usize)>> {
        self.schedule.pairs()
    }

    pub fn total_trials(&self) -> Result<usize> {
        Ok(self.pairs()?.len() * self.replicates)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "population": { "radial": "scaled-f-root", "p": 1, "coupling": "independent" },
        "schedule": { "preset": "semicircle", "dims": [16, 32, 64] },
        "replicates": 20,
        "estimators": ["covariance", "tyler"],
        "reference": { "law": "semicircle" },
        "seed": 42
    }"#;

    #[test]
    fn parses_preset_schedule() {
        let cfg = ExperimentConfig::from_json_str(EXAMPLE).unwrap();
        assert_eq!(
            cfg.pairs().unwrap(),
            vec![(16, 1600), (32, 3200), (64, 6400)]
        );
        assert!(cfg.standardized);
        assert_eq!(cfg.max_moment, 6);
        assert_eq!(cfg.tyler, TylerConfig::default());
        assert_eq!(
            cfg.population.radial_law(16).unwrap(),
            RadialLaw::ScaledFRoot { df: 16, p: 1 }
        );
        assert_eq!(cfg.total_trials().unwrap(), 60);
    }

    #[test]
    fn parses_explicit_pairs_and_mp() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"population":{"radial":"chi","coupling":"sign-u1"},
                "schedule":[[100,400]],
                "estimators":["tyler"],
                "standardized":false,
                "reference":{"law":"mp","y":0.25}}"#,
        )
        .unwrap();
        assert_eq!(cfg.pairs().unwrap(), vec![(100, 400)]);
        assert_eq!(
            cfg.population.at(100, 1).unwrap().coupling,
            CouplingMode::SignOfFirstCoordinate
        );
    }

    #[test]
    fn round_trips_through_json() {
        let cfg = ExperimentConfig::from_json_str(EXAMPLE).unwrap();
        let again = ExperimentConfig::from_json_str(&cfg.to_json_pretty()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            // n < d with Tyler
            r#"{"population":{"radial":"chi"},"schedule":[[10,5]],"estimators":["tyler"],"reference":{"law":"semicircle"}}"#,
            // unknown field
            r#"{"population":{"radial":"chi"},"schedule":[[2,5]],"estimators":["tyler"],"reference":{"law":"semicircle"},"bogus":1}"#,
            // missing p
            r#"{"population":{"radial":"scaled-f-root"},"schedule":[[2,5]],"estimators":["tyler"],"reference":{"law":"semicircle"}}"#,
            // zero replicates
            r#"{"population":{"radial":"chi"},"schedule":[[2,5]],"replicates":0,"estimators":["tyler"],"reference":{"law":"semicircle"}}"#,
            // duplicated estimator
            r#"{"population":{"radial":"chi"},"schedule":[[2,5]],"estimators":["tyler","tyler"],"reference":{"law":"semicircle"}}"#,
            // empty schedule
            r#"{"population":{"radial":"chi"},"schedule":[],"estimators":["tyler"],"reference":{"law":"semicircle"}}"#,
            // constant zero
            r#"{"population":{"radial":"constant","c":0},"schedule":[[2,5]],"estimators":["tyler"],"reference":{"law":"semicircle"}}"#,
            // bad law
            r#"{"population":{"radial":"chi"},"schedule":[[2,5]],"estimators":["tyler"],"reference":{"law":"mp","y":0}}"#,
            "not json",
        ];
        for c in cases {
            assert!(
                matches!(ExperimentConfig::from_json_str(c), Err(Error::Config(_))),
                "accepted: {c}"
            );
        }
    }

    #[test]
    fn covariance_only_allows_n_below_d() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"population":{"radial":"chi"},"schedule":[[10,5]],"estimators":["covariance"],"reference":{"law":"mp","y":2}}"#,
        );
        assert!(cfg.is_ok());
    }
}
