//! Sample covariance and Tyler's M-estimator of scatter (center fixed at 0).
//!
//! Tyler's estimator `T` is the positive definite solution of
//!
//! ```text
//! T = (d/n) · Σ_j X_j X_jᵗ / (X_jᵗ T⁻¹ X_j),      tr(T) = d.
//! ```
//!
//! It is computed by the fixed-point scheme starting at `Ω₀ = I`; every step
//! applies the right-hand side and rescales the result to trace `d`.
//! Iteration stops once the relative Frobenius change between consecutive
//! iterates drops to `tol`.

use nalgebra::{Cholesky, DMatrix, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, MatrixRole, SymmetricMatrix};

/// Shape matrices with a larger eigenvalue ratio are treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// `S = (1/n) · Σ_j X_j X_jᵗ`.
pub fn sample_covariance(x: &DataMatrix) -> SymmetricMatrix {
    let data = x.as_matrix();
    let mut s = data * data.transpose();
    s /= x.n() as f64;
    SymmetricMatrix::from_lower(s, MatrixRole::Scatter).expect("d x d product is square")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TylerConfig {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_tol() -> f64 {
    1e-9
}

fn default_max_iter() -> usize {
    1000
}

impl Default for TylerConfig {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            max_iter: default_max_iter(),
        }
    }
}

impl TylerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid("tyler tol must be positive and finite"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("tyler max_iter must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TylerReport {
    /// Trace-`d` shape estimate.
    pub estimate: SymmetricMatrix,
    /// Number of fixed-point updates performed.
    pub iterations: usize,
    /// Fixed-point residual of `estimate`, see [`tyler_residual`].
    pub residual: f64,
    pub converged: bool,
    /// `n == d`: the estimator exists but convergence may be slow.
    pub boundary_regime: bool,
    /// Whether the diagonal jitter fallback was used.
    pub jittered: bool,
    /// Residual of every iterate `Ω₀, Ω₁, …`, the last entry being `residual`.
    pub residual_history: Vec<f64>,
}

/// `(d/n) · Σ_j X_j X_jᵗ / (X_jᵗ Ω⁻¹ X_j)` using a Cholesky factor of `Ω`.
fn fixed_point_map(x: &DataMatrix, chol: &Cholesky<f64, Dyn>) -> Result<DMatrix<f64>> {
    let data = x.as_matrix();
    let (d, n) = (x.dim(), x.n());
    let whitened = chol
        .l_dirty()
        .solve_lower_triangular(data)
        .ok_or(Error::SingularShape {
            condition: f64::INFINITY,
        })?;
    let scale = d as f64 / n as f64;
    let mut weighted = data.clone();
    for (j, mut col) in weighted.column_iter_mut().enumerate() {
        let q = whitened.column(j).norm_squared();
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::SingularShape {
                condition: f64::INFINITY,
            });
        }
        col *= scale / q;
    }
    Ok(weighted * data.transpose())
}

fn check_sample(x: &DataMatrix) -> Result<()> {
    let (d, n) = (x.dim(), x.n());
    if n < d {
        return Err(Error::DimensionExceedsSample { d, n });
    }
    if let Some(index) = x
        .as_matrix()
        .column_iter()
        .position(|c| c.iter().all(|&v| v == 0.0))
    {
        return Err(Error::ZeroColumn { index });
    }
    Ok(())
}

fn factor(omega: &DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    Cholesky::new(omega.clone())
}

fn rescale_to_trace(m: &mut DMatrix<f64>, d: usize) {
    let tr = m.trace();
    *m *= d as f64 / tr;
}

/// Tyler's M-estimator of scatter with trace normalization `tr(T) = d`.
///
/// Returns [`Error::NoConvergence`] carrying the last iterate when
/// `cfg.max_iter` updates were not enough, or when the Cholesky factorization
/// failed twice (once before and once after the diagonal jitter).
pub fn tyler(x: &DataMatrix, cfg: &TylerConfig) -> Result<TylerReport> {
    cfg.validate()?;
    check_sample(x)?;
    let d = x.dim();
    let mut omega = DMatrix::<f64>::identity(d, d);
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let mut jittered = false;
    let mut broke_down = false;
    let mut final_residual = None;

    while iterations < cfg.max_iter {
        let chol = match factor(&omega) {
            Some(c) => c,
            None if !jittered => {
                jittered = true;
                for i in 0..d {
                    omega[(i, i)] += 1e-12 * d as f64;
                }
                match factor(&omega) {
                    Some(c) => c,
                    None => {
                        broke_down = true;
                        break;
                    }
                }
            }
            None => {
                broke_down = true;
                break;
            }
        };
        let mut next = match fixed_point_map(x, &chol) {
            Ok(m) => m,
            Err(_) => {
                broke_down = true;
                break;
            }
        };
        history.push((&next - &omega).norm());
        rescale_to_trace(&mut next, d);
        // Keep the iterate exactly symmetric.
        next = SymmetricMatrix::from_lower(next, MatrixRole::Scatter)?.into_inner();
        let change = (&next - &omega).norm() / omega.norm();
        omega = next;
        iterations += 1;
        if !change.is_finite() {
            broke_down = true;
            break;
        }
        if change <= cfg.tol {
            // Confirm with the residual; keep iterating in the rare case the
            // small step still leaves the fixed-point equation unresolved.
            rescale_to_trace(&mut omega, d);
            let check = SymmetricMatrix::from_lower(omega.clone(), MatrixRole::Scatter)?;
            let residual = tyler_residual(x, &check).unwrap_or(f64::INFINITY);
            if residual <= 10.0 * cfg.tol * d as f64 {
                final_residual = Some(residual);
                converged = true;
                break;
            }
        }
    }

    rescale_to_trace(&mut omega, d);
    let estimate = SymmetricMatrix::from_lower(omega, MatrixRole::Scatter)?;
    let residual = match final_residual {
        Some(r) => r,
        None if broke_down => f64::INFINITY,
        None => tyler_residual(x, &estimate).unwrap_or(f64::INFINITY),
    };
    history.push(residual);
    let report = TylerReport {
        estimate,
        iterations,
        residual,
        converged: converged && !broke_down,
        boundary_regime: x.n() == d,
        jittered,
        residual_history: history,
    };
    if report.converged {
        Ok(report)
    } else {
        Err(Error::NoConvergence(Box::new(report)))
    }
}

/// `‖ (d/n) · Σ_j X_j X_jᵗ / (X_jᵗ Ω⁻¹ X_j) − Ω ‖_F`, zero exactly at a fixed point.
pub fn tyler_residual(x: &DataMatrix, omega: &SymmetricMatrix) -> Result<f64> {
    if omega.order() != x.dim() {
        return Err(Error::invalid(format!(
            "shape order {} does not match data dimension {}",
            omega.order(),
            x.dim()
        )));
    }
    if !omega.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let eig = omega.as_matrix().clone().symmetric_eigenvalues();
    let lo = eig.min();
    let hi = eig.max();
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > SINGULAR_CONDITION {
        return Err(Error::SingularShape { condition });
    }
    let chol = factor(omega.as_matrix()).ok_or(Error::SingularShape { condition })?;
    let mapped = fixed_point_map(x, &chol)?;
    Ok((mapped - omega.as_matrix()).norm())
}
