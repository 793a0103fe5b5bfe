use crate::error::{Error, Result};

/// Uniform mesh `x_i = x_left + i * dx`, `i = 0..=n_x`.
///
/// Node 0 sits on the left edge of the domain. Solvers keep unknowns on
/// nodes `1..=n_x`; node 0 carries the boundary (ghost) state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_left: f64,
    extent: f64,
    n_x: usize,
    dx: f64,
}

impl Grid1D {
    pub fn new(x_left: f64, extent: f64, n_x: usize) -> Result<Self> {
        if !(extent > 0.0) || !extent.is_finite() || !x_left.is_finite() {
            return Err(Error::Config(format!(
                "grid extent must be positive and finite, got {extent}"
            )));
        }
        if n_x < 2 {
            return Err(Error::Config(format!(
                "grid needs at least 2 cells, got {n_x}"
            )));
        }
        Ok(Self {
            x_left,
            extent,
            n_x,
            dx: extent / n_x as f64,
        })
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_left + self.extent
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Coordinate of node `i`. Computed from the index, never accumulated.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        if i == self.n_x {
            return self.x_right();
        }
        self.x_left + i as f64 * self.dx
    }

    /// Coordinates of the unknowns, nodes `1..=n_x`.
    pub fn interior(&self) -> Vec<f64> {
        (1..=self.n_x).map(|i| self.x(i)).collect()
    }

    /// Index of the node closest to `x`, if it lies on the grid within `tol * dx`.
    pub fn node_at(&self, x: f64, tol: f64) -> Option<usize> {
        let s = (x - self.x_left) / self.dx;
        let i = s.round();
        if i < 0.0 || i > self.n_x as f64 || (s - i).abs() > tol {
            return None;
        }
        Some(i as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_interval_grid() {
        let g = Grid1D::new(0.0, 5.0, 100).unwrap();
        assert_eq!(g.dx(), 0.05);
        assert_eq!(g.x(0), 0.0);
        assert_eq!(g.x(100), 5.0);
    }

    #[test]
    fn symmetric_reference_grid_hits_origin() {
        let g = Grid1D::new(-10.0, 20.0, 3600).unwrap();
        assert_eq!(g.dx(), 20.0 / 3600.0);
        assert_eq!(g.x(1800), 0.0);
        assert_eq!(g.node_at(-8.0, 1e-9), Some(360));
    }

    #[test]
    fn degenerate_grids_rejected() {
        assert!(matches!(Grid1D::new(0.0, 5.0, 1), Err(Error::Config(_))));
        assert!(matches!(Grid1D::new(0.0, 0.0, 10), Err(Error::Config(_))));
        assert!(matches!(Grid1D::new(0.0, -1.0, 10), Err(Error::Config(_))));
    }

    #[test]
    fn nodes_strictly_increasing_without_drift() {
        let g = Grid1D::new(-5.0, 10.0, 3600).unwrap();
        for i in 1..=g.n_x() {
            assert!(g.x(i) > g.x(i - 1));
            let exact = -5.0 + i as f64 * (10.0 / 3600.0);
            assert!((g.x(i) - exact).abs() <= f64::EPSILON * exact.abs().max(1.0));
        }
    }
}
