//! Uniform time grids.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniform grid `start, start + dt, …` up to and including `end` (seconds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    start: f64,
    end: f64,
    dt: f64,
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, dt: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && dt.is_finite()) {
            return Err(Error::InvalidParameter("time grid bounds must be finite"));
        }
        if dt <= 0.0 {
            return Err(Error::InvalidParameter("time step must be positive"));
        }
        if end < start {
            return Err(Error::InvalidParameter("end time precedes start time"));
        }
        Ok(Self { start, end, dt })
    }

    /// 0 to 1000 ps in 10 ps steps.
    pub fn picosecond_default() -> Self {
        Self {
            start: 0.0,
            end: 1000e-12,
            dt: 10e-12,
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        // relative slack keeps 1000/10 from landing on 99.999…
        libm::floor((self.end - self.start) / self.dt + 1e-9) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.start + i as f64 * self.dt)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_101_points() {
        let g = TimeGrid::picosecond_default();
        let pts = g.points();
        assert_eq!(pts.len(), 101);
        assert_eq!(pts[0], 0.0);
        assert!((pts[100] - 1e-9).abs() < 1e-21);
    }

    #[test]
    fn degenerate_grid_is_single_point() {
        assert_eq!(
            TimeGrid::new(0.0, 0.0, 1e-11).unwrap().points(),
            alloc::vec![0.0]
        );
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeGrid::new(0.0, 1.0, 0.0).is_err());
        assert!(TimeGrid::new(1.0, 0.0, 0.1).is_err());
        assert!(TimeGrid::new(0.0, f64::INFINITY, 0.1).is_err());
    }
}
