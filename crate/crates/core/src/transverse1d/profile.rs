use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    /// `w(u) = max(1 - (|u|/a)^exponent, 0)`
    PolyWell { exponent: u32 },
    /// `w(u) = 1` on `(-a, a)`
    SquareWell,
    /// Point interaction of strength `alpha` at the origin.
    DeltaPoint,
}

/// Attractive transverse profile; the potential is `-depth * w(u)`.
///
/// For [`ProfileKind::DeltaPoint`] the depth is the coupling `alpha` and the
/// half-width is unused.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransverseProfile {
    kind: ProfileKind,
    a: f64,
    depth: f64,
}

impl TransverseProfile {
    pub fn poly_well(exponent: u32, a: f64, depth: f64) -> Result<Self> {
        if exponent < 2 || exponent % 2 != 0 {
            return Err(Error::domain(format!(
                "polynomial exponent must be an even integer >= 2, got {exponent}"
            )));
        }
        Self::regular(ProfileKind::PolyWell { exponent }, a, depth)
    }

    pub fn square_well(a: f64, depth: f64) -> Result<Self> {
        Self::regular(ProfileKind::SquareWell, a, depth)
    }

    pub fn delta_point(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!(
                "delta strength must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            kind: ProfileKind::DeltaPoint,
            a: 0.0,
            depth: alpha,
        })
    }

    fn regular(kind: ProfileKind, a: f64, depth: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain(format!(
                "half-width must be positive, got {a}"
            )));
        }
        if !(depth >= 0.0 && depth.is_finite()) {
            return Err(Error::domain(format!(
                "depth must be nonnegative, got {depth}"
            )));
        }
        Ok(Self { kind, a, depth })
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn is_regular(&self) -> bool {
        self.kind != ProfileKind::DeltaPoint
    }

    pub fn with_depth(&self, depth: f64) -> Result<Self> {
        match self.kind {
            ProfileKind::DeltaPoint => Self::delta_point(depth),
            kind => Self::regular(kind, self.a, depth),
        }
    }

    pub(crate) fn require_regular(&self) -> Result<()> {
        if self.is_regular() {
            Ok(())
        } else {
            Err(Error::Kind(
                "a point interaction has no pointwise profile".into(),
            ))
        }
    }

    /// Centered well shape `w(u)` in `[0, 1]`.
    pub fn shape(&self, u: f64) -> Result<f64> {
        self.require_regular()?;
        Ok(self.shape_unchecked(u))
    }

    pub(crate) fn shape_unchecked(&self, u: f64) -> f64 {
        let t = u.abs() / self.a;
        match self.kind {
            ProfileKind::PolyWell { exponent } => {
                if t >= 1.0 {
                    0.0
                } else {
                    1.0 - t.powi(exponent as i32)
                }
            }
            ProfileKind::SquareWell => {
                if t < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            ProfileKind::DeltaPoint => 0.0,
        }
    }

    /// `int w(u) du` over the support.
    pub fn shape_integral(&self) -> Result<f64> {
        self.require_regular()?;
        Ok(match self.kind {
            ProfileKind::PolyWell { exponent } => {
                let p = exponent as f64;
                2.0 * self.a * p / (p + 1.0)
            }
            _ => 2.0 * self.a,
        })
    }
}

/// Centered well shape of a regular profile; errors for point interactions.
pub fn eval_profile(p: &TransverseProfile, u: f64) -> Result<f64> {
    p.shape(u)
}
