use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::config::{EstimatorKind, ExperimentConfig};
use crate::error::{Error, Result};
use crate::estimators::{sample_covariance, tyler, TylerReport};
use crate::matrix::SymmetricMatrix;
use crate::metrics::{summarize, SpectralSummary};
use crate::rng::mix_seed;
use crate::sampling::sample_population;
use crate::spectral::{spectral_norm, standardize, symmetric_eigenvalues, SpectrumESD};

/// Version tag written into every persisted trial and summary.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TylerDiagnostics {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub boundary_regime: bool,
    pub jittered: bool,
}

impl From<&TylerReport> for TylerDiagnostics {
    fn from(r: &TylerReport) -> Self {
        Self {
            iterations: r.iterations,
            residual: r.residual,
            converged: r.converged,
            boundary_regime: r.boundary_regime,
            jittered: r.jittered,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateRecord {
    pub estimator: EstimatorKind,
    pub summary: SpectralSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tyler: Option<TylerDiagnostics>,
}

/// One persisted trial. Wall time lives in [`TrialRun`] so that identical
/// configurations produce byte-identical records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialResult {
    pub schema_version: u32,
    pub trial_id: String,
    pub pair_index: usize,
    pub replicate_index: usize,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub standardized: bool,
    pub estimates: Vec<EstimateRecord>,
    /// `‖T* − S*‖₂` when both estimators ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standardized_gap: Option<f64>,
    /// Set when sampling or estimation failed; `estimates` is then empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TrialResult {
    pub fn is_failed(&self) -> bool {
        self.error.is_some()
    }

    pub fn estimate(&self, kind: EstimatorKind) -> Option<&EstimateRecord> {
        self.estimates.iter().find(|e| e.estimator == kind)
    }
}

/// A trial together with its run-time byproducts.
#[derive(Debug, Clone)]
pub struct TrialRun {
    pub result: TrialResult,
    /// Spectra of the summarized matrices, in estimator order.
    pub spectra: Vec<(EstimatorKind, SpectrumESD)>,
    pub wall_time: Duration,
}

pub fn trial_id(pair_index: usize, replicate_index: usize) -> String {
    format!("p{pair_index:03}-r{replicate_index:04}")
}

struct Computed {
    estimates: Vec<EstimateRecord>,
    spectra: Vec<(EstimatorKind, SpectrumESD)>,
    gap: Option<f64>,
}

fn compute(cfg: &ExperimentConfig, d: usize, n: usize, seed: u64) -> Result<Computed> {
    let spec = cfg.population.at(d, seed)?;
    let x = sample_population(&spec, n)?;
    let mut estimates = Vec::with_capacity(cfg.estimators.len());
    let mut spectra = Vec::with_capacity(cfg.estimators.len());
    let mut starred: Vec<(EstimatorKind, SymmetricMatrix)> = Vec::new();
    for &kind in &cfg.estimators {
        let (matrix, diagnostics) = match kind {
            EstimatorKind::Covariance => (sample_covariance(&x), None),
            EstimatorKind::Tyler => {
                let report = tyler(&x, &cfg.tyler)?;
                let diag = TylerDiagnostics::from(&report);
                (report.estimate, Some(diag))
            }
        };
        let star = standardize(&matrix, n);
        let target = if cfg.standardized { &star } else { &matrix };
        let esd = symmetric_eigenvalues(target)?;
        let summary = summarize(&esd, &cfg.reference, cfg.max_moment)?;
        estimates.push(EstimateRecord {
            estimator: kind,
            summary,
            tyler: diagnostics,
        });
        spectra.push((kind, esd));
        starred.push((kind, star));
    }
    let find = |k| starred.iter().find(|(kind, _)| *kind == k).map(|(_, m)| m);
    let gap = match (find(EstimatorKind::Tyler), find(EstimatorKind::Covariance)) {
        (Some(t), Some(s)) => Some(spectral_norm(&t.difference(s)?)?),
        _ => None,
    };
    Ok(Computed {
        estimates,
        spectra,
        gap,
    })
}

/// Runs trial `(pair_index, replicate_index)` of `cfg`.
///
/// Numerical and sampling failures are recorded in the returned
/// [`TrialResult::error`]; only out-of-range indices or an invalid config
/// produce `Err`.
pub fn run_trial(
    cfg: &ExperimentConfig,
    pair_index: usize,
    replicate_index: usize,
) -> Result<TrialRun> {
    let pairs = cfg.pairs()?;
    let &(d, n) = pairs
        .get(pair_index)
        .ok_or_else(|| Error::Config(format!("pair index {pair_index} out of range")))?;
    if replicate_index >= cfg.replicates {
        return Err(Error::Config(format!(
            "replicate index {replicate_index} out of range"
        )));
    }
    // Fail on population errors before timing anything.
    cfg.population.radial_law(d)?;
    let seed = mix_seed(cfg.seed, pair_index as u64, replicate_index as u64);
    let start = Instant::now();
    let computed = compute(cfg, d, n, seed);
    let wall_time = start.elapsed();
    let mut result = TrialResult {
        schema_version: SCHEMA_VERSION,
        trial_id: trial_id(pair_index, replicate_index),
        pair_index,
        replicate_index,
        d,
        n,
        seed,
        standardized: cfg.standardized,
        estimates: Vec::new(),
        standardized_gap: None,
        error: None,
    };
    let spectra = match computed {
        Ok(c) => {
            result.estimates = c.estimates;
            result.standardized_gap = c.gap;
            c.spectra
        }
        Err(e) => {
            result.error = Some(e.to_string());
            Vec::new()
        }
    };
    Ok(TrialRun {
        result,
        spectra,
        wall_time,
    })
}
