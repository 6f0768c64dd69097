//! Distances and moments of an ESD against a reference law.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::ReferenceLaw;
use crate::spectral::SpectrumESD;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSummary {
    /// Kolmogorov-Smirnov distance to the reference law.
    pub ks: f64,
    /// `(1/d) Σ λ_i^m` for `m = 1..=M`.
    pub moments: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub spectral_norm: f64,
}

/// `sup_x |F(x) − G(x)|` with `G` the law's cdf (atom included).
///
/// On each gap between jumps `F` is constant and `G` is nondecreasing, so the
/// supremum is reached at a jump. For each distinct eigenvalue `v` this
/// compares `F(v)` with `G(v)` and `F(v−)` with the left limit `G(v−)`; the
/// left limit matters when eigenvalues sit on the Marčenko-Pastur atom.
pub fn ks_distance(f: &SpectrumESD, law: &ReferenceLaw) -> f64 {
    let values = f.eigenvalues();
    let d = values.len() as f64;
    let mut sup = 0.0f64;
    let mut first = 0;
    while first < values.len() {
        let v = values[first];
        let mut past = first + 1;
        while past < values.len() && values[past] == v {
            past += 1;
        }
        let at = (past as f64 / d - law.cdf(v)).abs();
        let before = (first as f64 / d - law.cdf_left_limit(v)).abs();
        sup = sup.max(at).max(before);
        first = past;
    }
    sup.clamp(0.0, 1.0)
}

/// `(1/d) Σ λ_i^m`, accumulated with Neumaier compensated summation.
pub fn esd_moment(f: &SpectrumESD, m: u32) -> Result<f64> {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for &l in f.eigenvalues() {
        let term = powu(l, m);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            compensation += (sum - t) + term;
        } else {
            compensation += (term - t) + sum;
        }
        sum = t;
    }
    let value = (sum + compensation) / f.len() as f64;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::MomentOverflow { order: m })
    }
}

fn powu(x: f64, m: u32) -> f64 {
    match i32::try_from(m) {
        Ok(e) => x.powi(e),
        Err(_) => x.powf(f64::from(m)),
    }
}

/// KS distance, moments `1..=max_moment` and extreme eigenvalues.
pub fn summarize(f: &SpectrumESD, law: &ReferenceLaw, max_moment: u32) -> Result<SpectralSummary> {
    let moments = (1..=max_moment)
        .map(|m| esd_moment(f, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralSummary {
        ks: ks_distance(f, law),
        moments,
        lambda_min: f.min(),
        lambda_max: f.max(),
        spectral_norm: f.spectral_norm(),
    })
}
