//! Dense data and symmetric matrix containers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A `d × n` sample: column `j` is observation `X_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    data: DMatrix<f64>,
}

impl DataMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::invalid(
                "data matrix must have d >= 1 rows and n >= 1 columns",
            ));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(Self { data })
    }

    /// Builds a `d × n` matrix from `n` observation vectors of length `d`.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let d = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != d) {
            return Err(Error::invalid("observations have different lengths"));
        }
        let data = DMatrix::from_fn(d, columns.len(), |i, j| columns[j][i]);
        Self::new(data)
    }

    /// Dimension `d`.
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Sample size `n`.
    pub fn n(&self) -> usize {
        self.data.ncols()
    }

    pub fn column(&self, j: usize) -> DVector<f64> {
        self.data.column(j).into_owned()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.data
    }

    /// `X · diag(c)`.
    pub fn scale_columns(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.n() {
            return Err(Error::invalid("one scale factor per column required"));
        }
        let mut data = self.data.clone();
        for (mut col, &c) in data.column_iter_mut().zip(factors) {
            col *= c;
        }
        Self::new(data)
    }

    /// `Q · X` for a `d × d` matrix `Q`.
    pub fn left_multiply(&self, q: &DMatrix<f64>) -> Result<Self> {
        if q.nrows() != self.dim() || q.ncols() != self.dim() {
            return Err(Error::invalid("left factor must be d x d"));
        }
        Self::new(q * &self.data)
    }
}

/// What a symmetric matrix stands for; informational, never changes the arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixRole {
    /// Positive semidefinite scatter or shape estimate (`S`, `T`).
    Scatter,
    /// `√(n/d)(A − I)`; indefinite.
    Standardized,
    General,
}

/// Dense real symmetric matrix.
///
/// Only the lower triangle of the input is read; the upper triangle is a
/// mirror, so `A[(i, j)] == A[(j, i)]` holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    entries: DMatrix<f64>,
    role: MatrixRole,
}

impl SymmetricMatrix {
    pub fn from_lower(mut entries: DMatrix<f64>, role: MatrixRole) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::invalid(format!(
                "symmetric matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let d = entries.nrows();
        for j in 0..d {
            for i in (j + 1)..d {
                entries[(j, i)] = entries[(i, j)];
            }
        }
        Ok(Self { entries, role })
    }

    /// Accepts a full square matrix after checking it is symmetric to within
    /// `rel_tol · max|a_ij|`.
    pub fn from_full(entries: DMatrix<f64>, role: MatrixRole, rel_tol: f64) -> Result<Self> {
        if entries.is_square() {
            let scale = entries.amax();
            let d = entries.nrows();
            for j in 0..d {
                for i in (j + 1)..d {
                    if (entries[(i, j)] - entries[(j, i)]).abs() > rel_tol * scale {
                        return Err(Error::invalid(format!(
                            "matrix is not symmetric at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Self::from_lower(entries, role)
    }

    pub fn identity(d: usize, role: MatrixRole) -> Self {
        Self {
            entries: DMatrix::identity(d, d),
            role,
        }
    }

    pub fn from_diagonal(diag: &[f64], role: MatrixRole) -> Result<Self> {
        Self::from_lower(
            DMatrix::from_diagonal(&DVector::from_column_slice(diag)),
            role,
        )
    }

    pub fn zeros(d: usize, role: MatrixRole) -> Self {
        Self {
            entries: DMatrix::zeros(d, d),
            role,
        }
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn role(&self) -> MatrixRole {
        self.role
    }

    pub fn with_role(mut self, role: MatrixRole) -> Self {
        self.role = role;
        self
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// `self − other` as a general symmetric matrix.
    pub fn difference(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        if self.order() != other.order() {
            return Err(Error::invalid("orders differ"));
        }
        Self::from_lower(&self.entries - &other.entries, MatrixRole::General)
    }

    /// `Q A Qᵗ`, keeping the role.
    pub fn congruence(&self, q: &DMatrix<f64>) -> Result<SymmetricMatrix> {
        if q.nrows() != self.order() || q.ncols() != self.order() {
            return Err(Error::invalid("transform must match the matrix order"));
        }
        Self::from_lower(q * &self.entries * q.transpose(), self.role)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &SymmetricMatrix) -> f64 {
        (&self.entries - &other.entries).amax()
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }
}
