//! The bookcover curve family and its parallel (Fermi) coordinates.
//!
//! The curve consists of two half-lines symmetric about the x axis, starting
//! at `(0, ±rho)` and opening to the right with half-angle `beta/2`, joined on
//! the left by a circular arc tangent to both. Arc length `s` runs from the
//! lower half-line (`s -> -inf`) through the arc (`|s| < s0`, leftmost point
//! at `s = 0`) to the upper half-line (`s -> +inf`).
//!
//! The normal is `N(s) = (-T_2, T_1)` with `T` the unit tangent. With the
//! orientation above it points away from the arc center, so `u > 0` selects
//! the outer side of the bend and the outer side (away from the x axis) of
//! each half-line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Parallel coordinates: arc length `s` and signed normal distance `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FermiCoords {
    pub s: f64,
    pub u: f64,
}

/// Which piece of the curve a point projects onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Arc,
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    rho: f64,
    beta: f64,
    tail_length: f64,
    arc_radius: f64,
    arc_center: Point2,
    s0: f64,
    // cos(beta/2), sin(beta/2)
    cos_half: f64,
    sin_half: f64,
}

impl Curve {
    /// Builds the bookcover curve with half-separation `rho` and opening
    /// parameter `beta`. The arc radius is `rho * sec(beta/2)`.
    pub fn bookcover(rho: f64, beta: f64, tail_length: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::domain(format!("rho must be positive, got {rho}")));
        }
        if !(0.0..PI / 2.0).contains(&beta) {
            return Err(Error::domain(format!(
                "beta must lie in [0, pi/2), got {beta}"
            )));
        }
        if !(tail_length > 0.0) || !tail_length.is_finite() {
            return Err(Error::domain(format!(
                "tail_length must be positive, got {tail_length}"
            )));
        }
        let (sin_half, cos_half) = (0.5 * beta).sin_cos();
        let arc_radius = rho / cos_half;
        Ok(Self {
            rho,
            beta,
            tail_length,
            arc_radius,
            arc_center: Point2::new(rho * (0.5 * beta).tan(), 0.0),
            s0: 0.5 * arc_radius * (PI - beta),
            cos_half,
            sin_half,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tail_length(&self) -> f64 {
        self.tail_length
    }

    pub fn arc_radius(&self) -> f64 {
        self.arc_radius
    }

    pub fn arc_center(&self) -> Point2 {
        self.arc_center
    }

    /// Half-length of the arc; the straight parts start at `|s| = s0`.
    pub fn s0(&self) -> f64 {
        self.s0
    }

    /// x coordinate of the leftmost point of the curve (`s = 0`).
    pub fn leftmost_x(&self) -> f64 {
        self.arc_center.x - self.arc_radius
    }

    /// Same curve with a different tail length.
    pub fn with_tail_length(&self, tail_length: f64) -> Result<Self> {
        Curve::bookcover(self.rho, self.beta, tail_length)
    }

    /// Curvature `1/R` on the closed arc `|s| <= s0`, zero on the half-lines.
    pub fn curvature(&self, s: f64) -> f64 {
        if s.abs() <= self.s0 {
            1.0 / self.arc_radius
        } else {
            0.0
        }
    }

    pub fn tangent(&self, s: f64) -> Point2 {
        if s > self.s0 {
            Point2::new(self.cos_half, self.sin_half)
        } else if s < -self.s0 {
            Point2::new(-self.cos_half, self.sin_half)
        } else {
            let phi = PI - s / self.arc_radius;
            Point2::new(phi.sin(), -phi.cos())
        }
    }

    pub fn normal(&self, s: f64) -> Point2 {
        let t = self.tangent(s);
        Point2::new(-t.y, t.x)
    }

    /// Cartesian point `Gamma(s) + u N(s)`.
    pub fn point_at(&self, s: f64, u: f64) -> Point2 {
        if s > self.s0 {
            let t = s - self.s0;
            Point2::new(
                t * self.cos_half - u * self.sin_half,
                self.rho + t * self.sin_half + u * self.cos_half,
            )
        } else if s < -self.s0 {
            let t = -s - self.s0;
            Point2::new(
                t * self.cos_half - u * self.sin_half,
                -self.rho - t * self.sin_half - u * self.cos_half,
            )
        } else {
            let phi = PI - s / self.arc_radius;
            let r = self.arc_radius + u;
            Point2::new(
                self.arc_center.x + r * phi.cos(),
                self.arc_center.y + r * phi.sin(),
            )
        }
    }

    /// Nearest-point parallel coordinates of `p` without a width limit. The
    /// returned `u` satisfies `|u| = dist(p, Gamma)`.
    ///
    /// Points inside the wedge at the arc center spanned by the arc (boundary
    /// rays included) project onto the arc, all others onto the nearer
    /// half-line.
    pub fn nearest(&self, p: Point2) -> (FermiCoords, Piece) {
        let c = self.arc_center;
        let (dx, dy) = (p.x - c.x, p.y - c.y);
        let phi_top = 0.5 * (PI + self.beta);
        let phi_bot = 0.5 * (3.0 * PI - self.beta);
        let mut phi = dy.atan2(dx);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        let r = dx.hypot(dy);
        if r > 0.0 && phi >= phi_top && phi <= phi_bot {
            let s = self.arc_radius * (PI - phi);
            return (
                FermiCoords {
                    s,
                    u: r - self.arc_radius,
                },
                Piece::Arc,
            );
        }

        let (ch, sh) = (self.cos_half, self.sin_half);
        // upper half-line from (0, rho) along (ch, sh), normal (-sh, ch)
        let (ux, uy) = (p.x, p.y - self.rho);
        let t_up = ux * ch + uy * sh;
        let u_up = -ux * sh + uy * ch;
        // lower half-line from (0, -rho) along (ch, -sh), normal (-sh, -ch)
        let (lx, ly) = (p.x, p.y + self.rho);
        let t_lo = lx * ch - ly * sh;
        let u_lo = -lx * sh - ly * ch;

        let up = (t_up >= 0.0).then_some((t_up, u_up));
        let lo = (t_lo >= 0.0).then_some((t_lo, u_lo));
        match (up, lo) {
            (Some((t, u)), Some((_, ul))) if u.abs() <= ul.abs() => {
                (FermiCoords { s: self.s0 + t, u }, Piece::Upper)
            }
            (_, Some((t, u))) => (FermiCoords { s: -self.s0 - t, u }, Piece::Lower),
            (Some((t, u)), None) => (FermiCoords { s: self.s0 + t, u }, Piece::Upper),
            (None, None) => {
                // Only reachable for r == 0 (the arc center itself).
                (
                    FermiCoords {
                        s: 0.0,
                        u: -self.arc_radius,
                    },
                    Piece::Arc,
                )
            }
        }
    }

    /// Parallel coordinates of `p` if it lies in the open strip
    /// `dist(p, Gamma) < a`, `None` otherwise.
    pub fn fermi_project(&self, p: Point2, a: f64) -> Result<Option<FermiCoords>> {
        self.check_halfwidth(a)?;
        let (fc, _) = self.nearest(p);
        Ok((fc.u.abs() < a).then_some(fc))
    }

    /// As [`Curve::fermi_project`] but on the closed strip `dist <= a`.
    pub fn fermi_project_closed(&self, p: Point2, a: f64) -> Result<Option<FermiCoords>> {
        self.check_halfwidth(a)?;
        let (fc, _) = self.nearest(p);
        Ok((fc.u.abs() <= a).then_some(fc))
    }

    pub(crate) fn check_halfwidth(&self, a: f64) -> Result<()> {
        if !(a > 0.0) || a >= self.rho {
            return Err(Error::domain(format!(
                "strip halfwidth a = {a} must satisfy 0 < a < rho = {}",
                self.rho
            )));
        }
        Ok(())
    }

    /// Arc length of the part of the curve with `x <= x_max`, assuming
    /// `x_max >= 0`.
    pub fn length_left_of(&self, x_max: f64) -> f64 {
        2.0 * self.s0 + 2.0 * x_max.max(0.0) / self.cos_half
    }
}
