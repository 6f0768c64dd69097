//! Eigenvalues, spectral norm, standardization and empirical spectral distributions.

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{MatrixRole, SymmetricMatrix};

/// Eigenvalues `λ₁ ≤ … ≤ λ_d` of a symmetric matrix, read as the empirical
/// spectral distribution `F(x) = #{i : λ_i ≤ x} / d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SpectrumESD {
    eigenvalues: Vec<f64>,
}

impl SpectrumESD {
    /// Sorts `values` ascending. Ties are kept.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid(
                "spectrum must contain at least one eigenvalue",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        values.sort_by(f64::total_cmp);
        Ok(Self {
            eigenvalues: values,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Order `d`.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `max(|λ₁|, |λ_d|)`.
    pub fn spectral_norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Right-continuous step function `F(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let count = self.eigenvalues.partition_point(|&l| l <= x);
        count as f64 / self.len() as f64
    }
}

impl TryFrom<Vec<f64>> for SpectrumESD {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<SpectrumESD> for Vec<f64> {
    fn from(s: SpectrumESD) -> Self {
        s.eigenvalues
    }
}

/// All eigenvalues of `a`, ascending (nalgebra's symmetric QR algorithm).
pub fn symmetric_eigenvalues(a: &SymmetricMatrix) -> Result<SpectrumESD> {
    if !a.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let values = SymmetricEigen::new(a.as_matrix().clone()).eigenvalues;
    SpectrumESD::new(values.iter().copied().collect())
}

/// `‖A‖₂ = max(|λ₁|, |λ_d|)`.
pub fn spectral_norm(a: &SymmetricMatrix) -> Result<f64> {
    Ok(symmetric_eigenvalues(a)?.spectral_norm())
}

/// `√(n/d) · (A − I)` with `d` the order of `a`.
pub fn standardize(a: &SymmetricMatrix, n: usize) -> SymmetricMatrix {
    let d = a.order();
    let factor = (n as f64 / d as f64).sqrt();
    let mut m = a.as_matrix().clone();
    for i in 0..d {
        m[(i, i)] -= 1.0;
    }
    m *= factor;
    SymmetricMatrix::from_lower(m, MatrixRole::Standardized).expect("order preserved")
}

/// `F(x) = #{i : λ_i ≤ x} / d`.
pub fn esd_eval(f: &SpectrumESD, x: f64) -> f64 {
    f.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn sym(rows: &[&[f64]]) -> SymmetricMatrix {
        let d = rows.len();
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        SymmetricMatrix::from_lower(DMatrix::from_row_slice(d, d, &flat), MatrixRole::General)
            .unwrap()
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let a = SymmetricMatrix::from_diagonal(&[3.0, 1.0, 2.0], MatrixRole::General).unwrap();
        assert_eq!(
            symmetric_eigenvalues(&a).unwrap().eigenvalues(),
            &[1.0, 2.0, 3.0]
        );
    }

    #[test]
    fn two_by_two_cases() {
        let swap = sym(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = symmetric_eigenvalues(&swap).unwrap();
        assert!((e.eigenvalues()[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues()[1] - 1.0).abs() < 1e-15);
        assert!((spectral_norm(&swap).unwrap() - 1.0).abs() < 1e-15);

        // det([[2−λ, 1], [1, 2−λ]]) = (λ − 1)(λ − 3)
        let e = symmetric_eigenvalues(&sym(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert!((e.eigenvalues()[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues()[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_cases() {
        let a = SymmetricMatrix::from_diagonal(&[3.0, -5.0], MatrixRole::General).unwrap();
        assert_eq!(spectral_norm(&a).unwrap(), 5.0);
        assert_eq!(
            spectral_norm(&SymmetricMatrix::zeros(3, MatrixRole::General)).unwrap(),
            0.0
        );
    }

    #[test]
    fn non_finite_rejected() {
        let a = SymmetricMatrix::from_diagonal(&[1.0, f64::NAN], MatrixRole::General).unwrap();
        assert!(matches!(
            symmetric_eigenvalues(&a),
            Err(Error::NonFiniteEntry)
        ));
    }

    #[test]
    fn standardize_cases() {
        let z = standardize(&SymmetricMatrix::identity(4, MatrixRole::Scatter), 40);
        assert_eq!(z.role(), MatrixRole::Standardized);
        assert_eq!(z.as_matrix().amax(), 0.0);

        let a = SymmetricMatrix::from_diagonal(&[1.1, 0.9], MatrixRole::Scatter).unwrap();
        let s = standardize(&a, 8);
        assert!((s.get(0, 0) - 0.2).abs() < 1e-15);
        assert!((s.get(1, 1) + 0.2).abs() < 1e-15);
        assert_eq!(s.get(0, 1), 0.0);
    }

    #[test]
    fn esd_step_function() {
        let f = SpectrumESD::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert!((esd_eval(&f, 2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(esd_eval(&f, 0.5), 0.0);
        assert_eq!(esd_eval(&f, 3.0), 1.0);
        assert_eq!(esd_eval(&f, 2.999), 2.0 / 3.0);
    }

    #[test]
    fn spectrum_serializes_as_plain_array() {
        let f = SpectrumESD::new(vec![0.5, -1.0]).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, "[-1.0,0.5]");
        assert_eq!(serde_json::from_str::<SpectrumESD>(&json).unwrap(), f);
        assert!(serde_json::from_str::<SpectrumESD>("[]").is_err());
    }

    fn symmetric_strategy(max_d: usize) -> impl Strategy<Value = SymmetricMatrix> {
        (1..=max_d).prop_flat_map(|d| {
            proptest::collection::vec(-10.0f64..10.0, d * d).prop_map(move |v| {
                SymmetricMatrix::from_lower(DMatrix::from_vec(d, d, v), MatrixRole::General)
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn eigenvalues_sum_to_trace(a in symmetric_strategy(12)) {
            let e = symmetric_eigenvalues(&a).unwrap();
            let sum: f64 = e.eigenvalues().iter().sum();
            let d = a.order() as f64;
            let scale = e.spectral_norm().max(1.0);
            prop_assert!((sum - a.trace()).abs() <= 1e-9 * d * scale);
            prop_assert!(e.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn standardize_is_affine_exact(a in symmetric_strategy(8), n in 1usize..500) {
            let s = standardize(&a, n);
            let c = (n as f64 / a.order() as f64).sqrt();
            let d = a.order();
            for i in 0..d {
                for j in 0..d {
                    let id = if i == j { 1.0 } else { 0.0 };
                    let back = s.get(i, j) + c * id - c * a.get(i, j);
                    prop_assert!(back.abs() <= 4.0 * f64::EPSILON * c * (a.get(i, j).abs() + 1.0));
                }
            }
        }

        #[test]
        fn esd_is_monotone(values in proptest::collection::vec(-5.0f64..5.0, 1..40),
                           mut xs in proptest::collection::vec(-6.0f64..6.0, 2..20)) {
            let f = SpectrumESD::new(values).unwrap();
            xs.sort_by(f64::total_cmp);
            let ys: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
            prop_assert!(ys.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(f.eval(f.max()), 1.0);
            prop_assert_eq!(f.eval(f.min() - 1e-9), 0.0);
        }
    }
}
