use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{EstimatorKind, ExperimentConfig};
use super::trial::{run_trial, TrialResult, TrialRun, SCHEMA_VERSION};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorAggregate {
    pub estimator: EstimatorKind,
    pub median_ks: f64,
    pub median_lambda_min: f64,
    pub median_lambda_max: f64,
    pub median_spectral_norm: f64,
    pub median_moments: Vec<f64>,
    pub mean_moments: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub median_iterations: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapAggregate {
    pub median: f64,
    pub mean: f64,
    /// Sample variance across replicates (`None` below two values).
    pub variance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub pair_index: usize,
    pub d: usize,
    pub n: usize,
    pub trials: usize,
    pub failed: usize,
    pub estimators: Vec<EstimatorAggregate>,
    /// Statistics of `‖T* − S*‖₂` over successful replicates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standardized_gap: Option<GapAggregate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimVariance {
    pub d: usize,
    pub replicates: usize,
    pub variance: f64,
}

/// `var(‖T* − S*‖₂)` per dimension and the least-squares slope of
/// `ln var` against `ln d`. Exploratory output without a pass/fail rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceProbe {
    pub per_dim: Vec<DimVariance>,
    pub log_log_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub schema_version: u32,
    pub total_trials: usize,
    pub failed_trials: usize,
    pub pairs: Vec<PairSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance_probe: Option<VarianceProbe>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Sorted by `(pair_index, replicate_index)`.
    pub runs: Vec<TrialRun>,
    pub summary: SweepSummary,
}

impl SweepOutcome {
    pub fn results(&self) -> impl Iterator<Item = &TrialResult> {
        self.runs.iter().map(|r| &r.result)
    }

    pub fn all_failed(&self) -> bool {
        !self.runs.is_empty() && self.runs.iter().all(|r| r.result.is_failed())
    }
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Unbiased sample variance.
pub fn sample_variance(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    Some(values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64)
}

/// Least-squares slope of `ys` on `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let mx = mean(xs)?;
    let my = mean(ys)?;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if xs.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

fn aggregate_estimator(kind: EstimatorKind, ok: &[&TrialResult]) -> Option<EstimatorAggregate> {
    let records: Vec<_> = ok.iter().filter_map(|t| t.estimate(kind)).collect();
    if records.is_empty() {
        return None;
    }
    let pick = |f: &dyn Fn(&super::trial::EstimateRecord) -> f64| -> f64 {
        median(&records.iter().map(|r| f(r)).collect::<Vec<_>>()).expect("non-empty")
    };
    let orders = records[0].summary.moments.len();
    let column = |m: usize| -> Vec<f64> { records.iter().map(|r| r.summary.moments[m]).collect() };
    let diagnostics: Vec<_> = records.iter().filter_map(|r| r.tyler.as_ref()).collect();
    Some(EstimatorAggregate {
        estimator: kind,
        median_ks: pick(&|r| r.summary.ks),
        median_lambda_min: pick(&|r| r.summary.lambda_min),
        median_lambda_max: pick(&|r| r.summary.lambda_max),
        median_spectral_norm: pick(&|r| r.summary.spectral_norm),
        median_moments: (0..orders)
            .map(|m| median(&column(m)).expect("non-empty"))
            .collect(),
        mean_moments: (0..orders)
            .map(|m| mean(&column(m)).expect("non-empty"))
            .collect(),
        converged: (!diagnostics.is_empty())
            .then(|| diagnostics.iter().filter(|t| t.converged).count()),
        median_iterations: median(
            &diagnostics
                .iter()
                .map(|t| t.iterations as f64)
                .collect::<Vec<_>>(),
        ),
    })
}

impl SweepSummary {
    /// Aggregates `results`, skipping failed trials. `estimators` fixes the
    /// order of the per-estimator blocks.
    pub fn from_results(results: &[TrialResult], estimators: &[EstimatorKind]) -> Self {
        let mut pair_indices: Vec<usize> = results.iter().map(|t| t.pair_index).collect();
        pair_indices.sort_unstable();
        pair_indices.dedup();

        let pairs: Vec<PairSummary> = pair_indices
            .into_iter()
            .map(|p| {
                let all: Vec<&TrialResult> = results.iter().filter(|t| t.pair_index == p).collect();
                let ok: Vec<&TrialResult> =
                    all.iter().copied().filter(|t| !t.is_failed()).collect();
                let gaps: Vec<f64> = ok.iter().filter_map(|t| t.standardized_gap).collect();
                PairSummary {
                    pair_index: p,
                    d: all[0].d,
                    n: all[0].n,
                    trials: all.len(),
                    failed: all.len() - ok.len(),
                    estimators: estimators
                        .iter()
                        .filter_map(|&k| aggregate_estimator(k, &ok))
                        .collect(),
                    standardized_gap: median(&gaps).map(|med| GapAggregate {
                        median: med,
                        mean: mean(&gaps).expect("non-empty"),
                        variance: sample_variance(&gaps),
                    }),
                }
            })
            .collect();

        let variance_probe = Self::variance_probe(results);
        SweepSummary {
            schema_version: SCHEMA_VERSION,
            total_trials: results.len(),
            failed_trials: results.iter().filter(|t| t.is_failed()).count(),
            pairs,
            variance_probe,
        }
    }

    fn variance_probe(results: &[TrialResult]) -> Option<VarianceProbe> {
        let mut dims: Vec<usize> = results
            .iter()
            .filter(|t| t.standardized_gap.is_some())
            .map(|t| t.d)
            .collect();
        dims.sort_unstable();
        dims.dedup();
        let per_dim: Vec<DimVariance> = dims
            .into_iter()
            .filter_map(|d| {
                let gaps: Vec<f64> = results
                    .iter()
                    .filter(|t| t.d == d && !t.is_failed())
                    .filter_map(|t| t.standardized_gap)
                    .collect();
                sample_variance(&gaps).map(|variance| DimVariance {
                    d,
                    replicates: gaps.len(),
                    variance,
                })
            })
            .collect();
        if per_dim.is_empty() {
            return None;
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = per_dim
            .iter()
            .filter(|v| v.variance > 0.0)
            .map(|v| ((v.d as f64).ln(), v.variance.ln()))
            .unzip();
        Some(VarianceProbe {
            log_log_slope: ols_slope(&xs, &ys),
            per_dim,
        })
    }

    pub fn pair(&self, d: usize, n: usize) -> Option<&PairSummary> {
        self.pairs.iter().find(|p| p.d == d && p.n == n)
    }
}

impl PairSummary {
    pub fn estimator(&self, kind: EstimatorKind) -> Option<&EstimatorAggregate> {
        self.estimators.iter().find(|e| e.estimator == kind)
    }
}

/// Runs every `(pair, replicate)` trial of `cfg`, in parallel when the
/// thread pool allows. Results are ordered by `(pair, replicate)` regardless
/// of scheduling.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let pairs = cfg.pairs()?;
    let jobs: Vec<(usize, usize)> = (0..pairs.len())
        .flat_map(|p| (0..cfg.replicates).map(move |r| (p, r)))
        .collect();
    let execute = || -> Result<Vec<TrialRun>> {
        jobs.par_iter()
            .map(|&(p, r)| run_trial(cfg, p, r))
            .collect()
    };
    let mut runs = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?
            .install(execute)?,
        None => execute()?,
    };
    runs.sort_by_key(|r| (r.result.pair_index, r.result.replicate_index));
    let results: Vec<TrialResult> = runs.iter().map(|r| r.result.clone()).collect();
    let summary = SweepSummary::from_results(&results, &cfg.estimators);
    Ok(SweepOutcome { runs, summary })
}
