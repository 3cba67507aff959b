use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Rectangular vertex grid. Node `(ix, iy)` has flat index `iy * nx + ix`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid2D {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(xmax > xmin && ymax > ymin) || nx < 2 || ny < 2 {
            return Err(Error::domain(format!(
                "degenerate grid [{xmin}, {xmax}] x [{ymin}, {ymax}] with {nx} x {ny} nodes"
            )));
        }
        Ok(Self {
            xmin,
            xmax,
            ymin,
            ymax,
            nx,
            ny,
        })
    }

    /// Grid with spacing exactly `h` starting at `(xmin, ymin)`; the upper
    /// bounds are rounded up to the next node.
    pub fn with_spacing(xmin: f64, xmax: f64, ymin: f64, ymax: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::domain("grid spacing must be positive"));
        }
        let cx = ((xmax - xmin) / h - 1e-9).ceil().max(1.0) as usize;
        let cy = ((ymax - ymin) / h - 1e-9).ceil().max(1.0) as usize;
        Self::new(
            xmin,
            xmin + cx as f64 * h,
            ymin,
            ymin + cy as f64 * h,
            cx + 1,
            cy + 1,
        )
    }

    pub fn hx(&self) -> f64 {
        (self.xmax - self.xmin) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.ymax - self.ymin) / (self.ny - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.xmin + ix as f64 * self.hx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.ymin + iy as f64 * self.hy()
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }

    pub fn node(&self, index: usize) -> Point2 {
        let (ix, iy) = self.coords(index);
        Point2::new(self.x(ix), self.y(iy))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}
