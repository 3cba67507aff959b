use serde::{Deserialize, Serialize};

use super::grid::Grid2D;
use crate::error::{Error, Result};
use crate::geometry::{Curve, Point2};
use crate::transverse1d::TransverseProfile;

/// A curve (or line) whose tubular neighbourhood carries the profile.
pub trait Tube: Sync {
    /// Signed normal offset `u` of the nearest point, `|u| = dist(p, tube axis)`.
    fn offset(&self, p: Point2) -> f64;

    /// Rejects half-widths for which the parallel coordinates are not a
    /// diffeomorphism.
    fn check_halfwidth(&self, a: f64) -> Result<()>;
}

impl Tube for Curve {
    fn offset(&self, p: Point2) -> f64 {
        self.nearest(p).0.u
    }

    fn check_halfwidth(&self, a: f64) -> Result<()> {
        Curve::check_halfwidth(self, a)
    }
}

/// The horizontal line `y = y0`, traversed toward `+x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StraightLine {
    pub y0: f64,
}

impl Tube for StraightLine {
    fn offset(&self, p: Point2) -> f64 {
        p.y - self.y0
    }

    fn check_halfwidth(&self, a: f64) -> Result<()> {
        if a > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "strip halfwidth must be positive, got {a}"
            )))
        }
    }
}

/// Well depth `depth * w(u)` at the grid nodes; the potential is its negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialField {
    pub grid: Grid2D,
    pub depth: f64,
    pub values: Vec<f64>,
    /// Nodes inside the open strip `dist < a`.
    pub support_mask: Vec<bool>,
}

impl PotentialField {
    pub fn zero(grid: Grid2D) -> Self {
        Self {
            grid,
            depth: 0.0,
            values: vec![0.0; grid.len()],
            support_mask: vec![false; grid.len()],
        }
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `hx hy sum values`
    pub fn integral(&self) -> f64 {
        self.grid.hx() * self.grid.hy() * self.values.iter().sum::<f64>()
    }

    /// Values of column `ix` (fixed x), bottom to top.
    pub fn column(&self, ix: usize) -> Vec<f64> {
        (0..self.grid.ny)
            .map(|iy| self.values[self.grid.index(ix, iy)])
            .collect()
    }
}

/// Samples `depth * w(u)` at every node inside the open strip of half-width
/// `p.a()` around `tube`.
pub fn sample_potential<T: Tube + ?Sized>(
    tube: &T,
    p: &TransverseProfile,
    depth: f64,
    grid: &Grid2D,
) -> Result<PotentialField> {
    p.require_regular()?;
    tube.check_halfwidth(p.a())?;
    if !(depth >= 0.0 && depth.is_finite()) {
        return Err(Error::domain(format!(
            "depth must be nonnegative, got {depth}"
        )));
    }
    let a = p.a();
    let mut values = vec![0.0; grid.len()];
    let mut support_mask = vec![false; grid.len()];
    for (i, (v, m)) in values.iter_mut().zip(support_mask.iter_mut()).enumerate() {
        let u = tube.offset(grid.node(i));
        if u.abs() < a {
            *m = true;
            *v = depth * p.shape_unchecked(u);
        }
    }
    Ok(PotentialField {
        grid: *grid,
        depth,
        values,
        support_mask,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn on_axis_and_far_nodes() {
        let c = Curve::bookcover(1.0, 0.0, 5.0).unwrap();
        let p = TransverseProfile::poly_well(2, 0.2, 1.0).unwrap();
        let g = Grid2D::new(-2.0, 6.0, -2.0, 2.0, 81, 41).unwrap();
        let f = sample_potential(&c, &p, 7.0, &g).unwrap();
        // (0, 1) is node (20, 30)
        assert_eq!(f.values[g.index(20, 30)], 7.0);
        // (5, 0): between the channels
        assert_eq!(f.values[g.index(70, 20)], 0.0);
        assert!(f.values.iter().all(|&v| (0.0..=7.0).contains(&v)));
        assert!(f
            .values
            .iter()
            .zip(&f.support_mask)
            .all(|(&v, &m)| m || v == 0.0));
    }

    #[test]
    fn integral_matches_length_times_profile_integral() {
        let (rho, a, xmax) = (1.0, 0.1, 3.0);
        let c = Curve::bookcover(rho, 0.0, xmax).unwrap();
        let p = TransverseProfile::poly_well(2, a, 1.0).unwrap();
        let h = a / 40.0;
        // stop the grid at x = xmax so the channels are cut cleanly
        let g = Grid2D::with_spacing(-1.5, xmax, -1.5, 1.5, h).unwrap();
        let f = sample_potential(&c, &p, 1.0, &g).unwrap();
        // trapezoid weight on the cut column
        let cut: f64 = f.column(g.nx - 1).iter().sum::<f64>() * h * h * 0.5;
        let approx = f.integral() - cut;
        // int w = 4a/3 per unit length; the arc Jacobian 1 + u/R integrates
        // to one against the even profile
        let exact = c.length_left_of(xmax) * p.shape_integral().unwrap();
        assert!((approx - exact).abs() / exact < 0.02, "{approx} vs {exact}");
    }

    #[test]
    fn wide_profile_rejected() {
        let c = Curve::bookcover(0.25, 0.0, 1.0).unwrap();
        let p = TransverseProfile::poly_well(2, 0.3, 1.0).unwrap();
        let g = Grid2D::new(-1.0, 1.0, -1.0, 1.0, 11, 11).unwrap();
        assert!(sample_potential(&c, &p, 1.0, &g).is_err());
        let d = TransverseProfile::delta_point(1.0).unwrap();
        assert!(sample_potential(&c, &d, 1.0, &g).is_err());
    }
}
