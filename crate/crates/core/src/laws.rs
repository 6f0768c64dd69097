//! Reference spectral laws.
//!
//! * Semicircle: density `√(4 − x²) / (2π)` on `[−2, 2]`.
//! * Marčenko-Pastur with ratio `y`: density
//!   `√((a₊ − x)(x − a₋)) / (2π x y)` on `[a₋, a₊]`, `a± = (1 ± √y)²`, plus
//!   an atom of mass `(1 − 1/y)⁺` at zero. The atom is never folded into the
//!   density; [`ReferenceLaw::point_mass_at_zero`] reports it separately and
//!   [`ReferenceLaw::cdf`] adds it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Absolute tolerance of the Marčenko-Pastur cdf quadrature.
pub const MP_CDF_ABS_TOL: f64 = 1e-10;

/// Marčenko-Pastur parameters; `y > 0` is enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchenkoPastur {
    y: f64,
}

impl MarchenkoPastur {
    pub fn new(y: f64) -> Result<Self> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::invalid(format!(
                "Marchenko-Pastur ratio must be positive and finite, got {y}"
            )));
        }
        Ok(Self { y })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn a_minus(&self) -> f64 {
        (1.0 - self.y.sqrt()).powi(2)
    }

    pub fn a_plus(&self) -> f64 {
        (1.0 + self.y.sqrt()).powi(2)
    }

    pub fn point_mass_at_zero(&self) -> f64 {
        (1.0 - 1.0 / self.y).max(0.0)
    }

    fn density(&self, x: f64) -> f64 {
        let (lo, hi) = (self.a_minus(), self.a_plus());
        if x <= lo || x >= hi {
            return 0.0;
        }
        ((hi - x) * (x - lo)).sqrt() / (2.0 * PI * x * self.y)
    }

    /// Mass of the continuous part on `[a₋, x]`.
    ///
    /// Substituting `x = a₋ + 2r·sin²(φ/2)`, `r = (a₊ − a₋)/2 = 2√y`, turns
    /// the square-root edges into the smooth integrand
    /// `r² sin²φ / (2π y x(φ))` on `[0, φ_x]`.
    fn continuous_mass_below(&self, x: f64) -> f64 {
        let (lo, hi) = (self.a_minus(), self.a_plus());
        let continuous_total = 1.0 - self.point_mass_at_zero();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return continuous_total;
        }
        let r = 0.5 * (hi - lo);
        let y = self.y;
        let upper = (((x - lo) / (2.0 * r)).sqrt().min(1.0)).asin() * 2.0;
        let g = move |phi: f64| {
            let s = (0.5 * phi).sin();
            let xp = lo + 2.0 * r * s * s;
            let sp = phi.sin();
            r * r * sp * sp / (2.0 * PI * y * xp)
        };
        integrate(g, 0.0, upper, MP_CDF_ABS_TOL)
            .value
            .clamp(0.0, continuous_total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LawRepr", into = "LawRepr")]
pub enum ReferenceLaw {
    Semicircle,
    MarchenkoPastur(MarchenkoPastur),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case", deny_unknown_fields)]
enum LawRepr {
    Semicircle,
    #[serde(alias = "marchenko-pastur")]
    Mp {
        y: f64,
    },
}

impl TryFrom<LawRepr> for ReferenceLaw {
    type Error = Error;

    fn try_from(r: LawRepr) -> Result<Self> {
        match r {
            LawRepr::Semicircle => Ok(ReferenceLaw::Semicircle),
            LawRepr::Mp { y } => ReferenceLaw::marchenko_pastur(y),
        }
    }
}

impl From<ReferenceLaw> for LawRepr {
    fn from(l: ReferenceLaw) -> Self {
        match l {
            ReferenceLaw::Semicircle => LawRepr::Semicircle,
            ReferenceLaw::MarchenkoPastur(mp) => LawRepr::Mp { y: mp.y },
        }
    }
}

impl ReferenceLaw {
    pub fn marchenko_pastur(y: f64) -> Result<Self> {
        Ok(ReferenceLaw::MarchenkoPastur(MarchenkoPastur::new(y)?))
    }

    pub fn point_mass_at_zero(&self) -> f64 {
        match self {
            ReferenceLaw::Semicircle => 0.0,
            ReferenceLaw::MarchenkoPastur(mp) => mp.point_mass_at_zero(),
        }
    }

    /// Support of the continuous part.
    pub fn support(&self) -> (f64, f64) {
        match self {
            ReferenceLaw::Semicircle => (-2.0, 2.0),
            ReferenceLaw::MarchenkoPastur(mp) => (mp.a_minus(), mp.a_plus()),
        }
    }

    /// Density of the continuous part, 0 outside the support.
    ///
    /// Fails for Marčenko-Pastur with `y ≥ 1` at `x = 0`, which is where the
    /// atom sits (for `y > 1`) or the density diverges (`y = 1`).
    pub fn pdf(&self, x: f64) -> Result<f64> {
        match self {
            ReferenceLaw::Semicircle => Ok(if x.abs() < 2.0 {
                (4.0 - x * x).sqrt() / (2.0 * PI)
            } else {
                0.0
            }),
            ReferenceLaw::MarchenkoPastur(mp) => {
                if x == 0.0 && mp.y >= 1.0 {
                    return Err(Error::invalid(
                        "Marchenko-Pastur density is undefined at 0 when y >= 1 (point mass location)",
                    ));
                }
                Ok(mp.density(x))
            }
        }
    }

    /// Distribution function including any atom at zero.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            ReferenceLaw::Semicircle => semicircle_cdf(x),
            ReferenceLaw::MarchenkoPastur(mp) => {
                if x.is_nan() {
                    return f64::NAN;
                }
                let atom = if x >= 0.0 {
                    mp.point_mass_at_zero()
                } else {
                    0.0
                };
                if x >= mp.a_plus() {
                    return 1.0;
                }
                (atom + mp.continuous_mass_below(x)).clamp(0.0, 1.0)
            }
        }
    }

    /// Left limit `G(x−)`. Differs from [`cdf`](Self::cdf) only at the atom.
    pub fn cdf_left_limit(&self, x: f64) -> f64 {
        match self {
            ReferenceLaw::MarchenkoPastur(mp) if x == 0.0 => {
                (self.cdf(x) - mp.point_mass_at_zero()).max(0.0)
            }
            _ => self.cdf(x),
        }
    }
}

/// `½ + x√(4 − x²)/(4π) + arcsin(x/2)/π` on `[−2, 2]`.
fn semicircle_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    (0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (0.5 * x).asin() / PI).clamp(0.0, 1.0)
}

/// `m`-th moment of the semicircle law: 0 for odd `m`, the Catalan number
/// `C_{m/2}` for even `m`.
pub fn semicircle_moment(m: u32) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    // C_{k+1} = C_k · 2(2k + 1)/(k + 2)
    (0..m / 2).fold(1.0, |c, k| {
        c * 2.0 * f64::from(2 * k + 1) / f64::from(k + 2)
    })
}
