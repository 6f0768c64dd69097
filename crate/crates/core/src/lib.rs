//! Tyler's M-estimator of scatter together with the random-matrix tooling
//! needed to study its spectrum: generalized spherical samplers, empirical
//! spectral distributions, the semicircle and Marčenko-Pastur reference laws,
//! spectral distances, and a seeded Monte Carlo harness.
//!
//! The central object is the standardized estimator `√(n/d)(T − I)`, whose
//! empirical spectral distribution approaches the semicircle law on `[−2, 2]`
//! when `d, n → ∞` with `d/n → 0`, for any generalized spherical population
//! (heavy tails, negative or `U`-dependent radii included).
//!
//! ```
//! use tyler_rmt::prelude::*;
//!
//! let spec = PopulationSpec::new(8, RadialLaw::Chi(8), CouplingMode::Independent, 7).unwrap();
//! let x = sample_population(&spec, 800).unwrap();
//! let report = tyler(&x, &TylerConfig::default()).unwrap();
//! let t_star = standardize(&report.estimate, x.n());
//! let esd = symmetric_eigenvalues(&t_star).unwrap();
//! let ks = ks_distance(&esd, &ReferenceLaw::Semicircle);
//! assert!(ks < 1.0);
//! ```

pub mod error;
pub mod estimators;
pub mod formats;
pub mod harness;
pub mod laws;
pub mod matrix;
pub mod metrics;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::estimators::{
        sample_covariance, tyler, tyler_residual, TylerConfig, TylerReport,
    };
    pub use crate::laws::{semicircle_moment, MarchenkoPastur, ReferenceLaw};
    pub use crate::matrix::{DataMatrix, MatrixRole, SymmetricMatrix};
    pub use crate::metrics::{esd_moment, ks_distance, summarize, SpectralSummary};
    pub use crate::rng::{mix_seed, rng_from_seed, SeededRng};
    pub use crate::sampling::{
        sample_population, sample_radius, sample_unit_sphere, CouplingMode, PopulationSpec,
        RadialLaw,
    };
    pub use crate::spectral::{spectral_norm, standardize, symmetric_eigenvalues, SpectrumESD};
}
