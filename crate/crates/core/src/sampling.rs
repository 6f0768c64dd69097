//! Generalized spherical populations `X = R · U`.
//!
//! `U` is uniform on the unit sphere `S^{d−1}` and `R` is a nonzero scalar
//! that may be negative, heavy tailed, or a function of `U`. The center is
//! always the origin.
//!
//! Draw order per observation is fixed: `d` normals for `U`, then the radial
//! draws, then (for [`RadialLaw::SignedChi`]) the sign. Together with the
//! seeded [`SeededRng`] this makes [`sample_population`] bit-reproducible.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::rng::{rng_from_seed, SeededRng};

/// Largest degrees of freedom sampled as an explicit sum of squared normals;
/// above it chi-square draws come from `Gamma(k/2, 2)`.
pub const CHI_SQUARE_EXPLICIT_MAX_DF: u32 = 64;

const MAX_REDRAWS: usize = 100;
const MIN_NORMAL_NORM: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialLaw {
    /// `R = √χ²_k`; with `k = d` the population is `N(0, I)`.
    Chi(u32),
    /// `R = √(k · F_{k,p})`; with `k = d` the population is multivariate
    /// t with `p` degrees of freedom, and `p = 1` is the multivariate Cauchy.
    ScaledFRoot {
        df: u32,
        p: u32,
    },
    Constant(f64),
    /// `±√χ²_k` with an independent fair sign.
    SignedChi(u32),
}

impl RadialLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RadialLaw::Chi(k) | RadialLaw::SignedChi(k) if k == 0 => {
                Err(Error::invalid("chi radial law needs df >= 1"))
            }
            RadialLaw::ScaledFRoot { df, p } if df == 0 || p == 0 => Err(Error::invalid(
                "scaled-f-root radial law needs df >= 1 and p >= 1",
            )),
            RadialLaw::Constant(c) if c == 0.0 || !c.is_finite() => {
                Err(Error::invalid("constant radius must be finite and nonzero"))
            }
            _ => Ok(()),
        }
    }

    /// Name used in config files and on the command line.
    pub fn kind_name(&self) -> &'static str {
        match self {
            RadialLaw::Chi(_) => "chi",
            RadialLaw::ScaledFRoot { .. } => "scaled-f-root",
            RadialLaw::Constant(_) => "constant",
            RadialLaw::SignedChi(_) => "signed-chi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingMode {
    #[default]
    Independent,
    /// Final radius `R₀ · (1 + ½ · sign(U₁))`, so the radius is 1.5·R₀ or
    /// 0.5·R₀ depending on the hemisphere of `U`. `sign(0)` counts as `+1`.
    SignOfFirstCoordinate,
}

impl CouplingMode {
    pub fn multiplier(&self, u: &DVector<f64>) -> f64 {
        match self {
            CouplingMode::Independent => 1.0,
            CouplingMode::SignOfFirstCoordinate => {
                if u[0] >= 0.0 {
                    1.5
                } else {
                    0.5
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationSpec {
    pub d: usize,
    pub radial: RadialLaw,
    pub coupling: CouplingMode,
    pub seed: u64,
}

impl PopulationSpec {
    pub fn new(d: usize, radial: RadialLaw, coupling: CouplingMode, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("population dimension must be >= 1"));
        }
        radial.validate()?;
        Ok(Self {
            d,
            radial,
            coupling,
            seed,
        })
    }
}

/// Uniform draw from `S^{d−1}`: a standard normal vector divided by its norm.
pub fn sample_unit_sphere(d: usize, rng: &mut SeededRng) -> Result<DVector<f64>> {
    if d == 0 {
        return Err(Error::invalid("sphere dimension must be >= 1"));
    }
    for _ in 0..MAX_REDRAWS {
        let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm >= MIN_NORMAL_NORM && norm.is_finite() {
            return Ok(v / norm);
        }
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_REDRAWS,
    })
}

fn chi_square(df: u32, rng: &mut SeededRng) -> f64 {
    if df <= CHI_SQUARE_EXPLICIT_MAX_DF {
        (0..df)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                z * z
            })
            .sum()
    } else {
        // df >= 65 so the shape is positive and the constructor cannot fail.
        Gamma::new(f64::from(df) / 2.0, 2.0)
            .expect("valid gamma parameters")
            .sample(rng)
    }
}

fn positive_chi_square(df: u32, rng: &mut SeededRng) -> Result<f64> {
    for _ in 0..MAX_REDRAWS {
        let v = chi_square(df, rng);
        if v > 0.0 {
            return Ok(v);
        }
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_REDRAWS,
    })
}

/// Draws the radius for direction `u`, applying the coupling multiplier last.
pub fn sample_radius(
    law: &RadialLaw,
    u: &DVector<f64>,
    coupling: CouplingMode,
    rng: &mut SeededRng,
) -> Result<f64> {
    law.validate()?;
    let base = match *law {
        RadialLaw::Chi(k) => positive_chi_square(k, rng)?.sqrt(),
        RadialLaw::ScaledFRoot { df, p } => {
            // √(k · (χ²_k/k) / (χ²_p/p)) = √(χ²_k · p / χ²_p)
            let num = positive_chi_square(df, rng)?;
            let den = positive_chi_square(p, rng)?;
            (num * f64::from(p) / den).sqrt()
        }
        RadialLaw::Constant(c) => c,
        RadialLaw::SignedChi(k) => {
            let r = positive_chi_square(k, rng)?.sqrt();
            if rng.random::<bool>() {
                r
            } else {
                -r
            }
        }
    };
    if base == 0.0 || !base.is_finite() {
        return Err(Error::DegenerateDraw { attempts: 1 });
    }
    Ok(base * coupling.multiplier(u))
}

/// `n` i.i.d. observations from `spec`; column `j` is `R_j · U_j`.
pub fn sample_population(spec: &PopulationSpec, n: usize) -> Result<DataMatrix> {
    if n == 0 {
        return Err(Error::invalid("sample size must be >= 1"));
    }
    let spec = PopulationSpec::new(spec.d, spec.radial, spec.coupling, spec.seed)?;
    let mut rng = rng_from_seed(spec.seed);
    let mut data = DMatrix::zeros(spec.d, n);
    for mut col in data.column_iter_mut() {
        let u = sample_unit_sphere(spec.d, &mut rng)?;
        let r = sample_radius(&spec.radial, &u, spec.coupling, &mut rng)?;
        col.copy_from(&(u * r));
    }
    DataMatrix::new(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::sample_covariance;
    use crate::spectral::symmetric_eigenvalues;

    #[test]
    fn one_dimensional_sphere_is_plus_minus_one() {
        let mut rng = rng_from_seed(3);
        let mut plus = 0usize;
        let draws = 20_000;
        for _ in 0..draws {
            let u = sample_unit_sphere(1, &mut rng).unwrap();
            assert!(u[0] == 1.0 || u[0] == -1.0);
            if u[0] > 0.0 {
                plus += 1;
            }
        }
        let frac = plus as f64 / draws as f64;
        assert!((frac - 0.5).abs() < 0.02, "fraction of +1: {frac}");
    }

    #[test]
    fn sphere_draws_have_unit_norm() {
        let mut rng = rng_from_seed(11);
        for _ in 0..1000 {
            let u = sample_unit_sphere(3, &mut rng).unwrap();
            assert!((u.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn circle_moments_match_exact_sphere_moments() {
        // E u₁ = 0 and E u₁² = 1/d on S^{d−1}.
        let mut rng = rng_from_seed(5);
        let draws = 100_000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..draws {
            let u = sample_unit_sphere(2, &mut rng).unwrap();
            m1 += u[0];
            m2 += u[0] * u[0];
        }
        m1 /= draws as f64;
        m2 /= draws as f64;
        assert!(m1.abs() <= 0.02, "mean u1 = {m1}");
        assert!((m2 - 0.5).abs() <= 0.02, "mean u1^2 = {m2}");
    }

    #[test]
    fn constant_radius_is_exact() {
        let mut rng = rng_from_seed(0);
        let u = sample_unit_sphere(4, &mut rng).unwrap();
        let r = sample_radius(
            &RadialLaw::Constant(2.0),
            &u,
            CouplingMode::Independent,
            &mut rng,
        )
        .unwrap();
        assert_eq!(r, 2.0);
    }

    #[test]
    fn chi_radius_second_moment_is_df() {
        let mut rng = rng_from_seed(21);
        let u = sample_unit_sphere(4, &mut rng).unwrap();
        let draws = 100_000;
        let mean_sq: f64 = (0..draws)
            .map(|_| {
                let r = sample_radius(&RadialLaw::Chi(4), &u, CouplingMode::Independent, &mut rng)
                    .unwrap();
                r * r
            })
            .sum::<f64>()
            / draws as f64;
        assert!((mean_sq - 4.0).abs() <= 0.02 * 4.0, "E R^2 = {mean_sq}");
    }

    #[test]
    fn gamma_branch_matches_chi_square_mean() {
        let mut rng = rng_from_seed(8);
        let df = 100;
        let draws = 20_000;
        let mean: f64 = (0..draws).map(|_| chi_square(df, &mut rng)).sum::<f64>() / draws as f64;
        assert!((mean - 100.0).abs() < 1.0, "mean = {mean}");
    }

    #[test]
    fn signed_chi_is_fair() {
        let mut rng = rng_from_seed(77);
        let u = sample_unit_sphere(3, &mut rng).unwrap();
        let draws = 100_000;
        let negative = (0..draws)
            .filter(|_| {
                sample_radius(
                    &RadialLaw::SignedChi(3),
                    &u,
                    CouplingMode::Independent,
                    &mut rng,
                )
                .unwrap()
                    < 0.0
            })
            .count();
        let frac = negative as f64 / draws as f64;
        assert!((frac - 0.5).abs() <= 0.01, "negative fraction {frac}");
    }

    #[test]
    fn coupling_multiplier_depends_on_hemisphere() {
        let mut rng = rng_from_seed(1);
        let up = DVector::from_vec(vec![1.0, 0.0]);
        let down = DVector::from_vec(vec![-1.0, 0.0]);
        let law = RadialLaw::Constant(2.0);
        let c = CouplingMode::SignOfFirstCoordinate;
        assert_eq!(sample_radius(&law, &up, c, &mut rng).unwrap(), 3.0);
        assert_eq!(sample_radius(&law, &down, c, &mut rng).unwrap(), 1.0);
    }

    #[test]
    fn constant_population_has_unit_columns() {
        let spec =
            PopulationSpec::new(2, RadialLaw::Constant(1.0), CouplingMode::Independent, 4).unwrap();
        let x = sample_population(&spec, 3).unwrap();
        for j in 0..3 {
            assert!((x.column(j).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_population_covariance_near_identity() {
        let spec =
            PopulationSpec::new(5, RadialLaw::Chi(5), CouplingMode::Independent, 12).unwrap();
        let x = sample_population(&spec, 10_000).unwrap();
        let eig = symmetric_eigenvalues(&sample_covariance(&x)).unwrap();
        for &l in eig.eigenvalues() {
            assert!((0.7..=1.3).contains(&l), "eigenvalue {l}");
        }
    }

    #[test]
    fn gaussian_population_entries_centered() {
        let spec =
            PopulationSpec::new(10, RadialLaw::Chi(10), CouplingMode::Independent, 99).unwrap();
        let x = sample_population(&spec, 10_000).unwrap();
        let mean = x.as_matrix().mean();
        assert!(mean.abs() <= 0.02, "mean entry {mean}");
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let spec = PopulationSpec::new(
            6,
            RadialLaw::ScaledFRoot { df: 6, p: 1 },
            CouplingMode::SignOfFirstCoordinate,
            2024,
        )
        .unwrap();
        let a = sample_population(&spec, 50).unwrap();
        let b = sample_population(&spec, 50).unwrap();
        assert_eq!(a, b);
        let other = PopulationSpec { seed: 2025, ..spec };
        assert_ne!(a, sample_population(&other, 50).unwrap());
    }

    #[test]
    fn invalid_laws_are_rejected() {
        assert!(RadialLaw::Constant(0.0).validate().is_err());
        assert!(RadialLaw::Chi(0).validate().is_err());
        assert!(RadialLaw::ScaledFRoot { df: 3, p: 0 }.validate().is_err());
        assert!(PopulationSpec::new(0, RadialLaw::Chi(1), CouplingMode::Independent, 0).is_err());
    }
}
