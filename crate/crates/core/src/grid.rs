//! Uniform integration grids anchored at a matching point.

use crate::error::{Error, Result};

/// A uniform grid `x_j = x0 + j*h` for `j` in `-n_left..=n_right`.
///
/// Points are always produced from the integer index, never by accumulating
/// `h`, so long grids carry no drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x0: f64,
    h: f64,
    n_left: usize,
    n_right: usize,
}

impl Grid {
    pub fn new(x0: f64, h: f64, n_left: usize, n_right: usize) -> Result<Self> {
        if !x0.is_finite() {
            return Err(Error::InvalidGrid(format!("x0 must be finite, got {x0}")));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidGrid(format!("step must be positive, got {h}")));
        }
        if n_left + n_right < 2 {
            return Err(Error::InvalidGrid(format!(
                "grid needs at least two steps, got n_left = {n_left}, n_right = {n_right}"
            )));
        }
        Ok(Grid { x0, h, n_left, n_right })
    }

    /// Grid covering `[lo, hi]` with the anchor at `x0`; all three must sit on
    /// a common lattice of spacing `h` (to within 1e-9 of a step).
    pub fn spanning(lo: f64, hi: f64, x0: f64, h: f64) -> Result<Self> {
        if !(lo <= x0 && x0 <= hi) {
            return Err(Error::InvalidGrid(format!("anchor {x0} is outside [{lo}, {hi}]")));
        }
        let steps = |d: f64| -> Result<usize> {
            let n = (d / h).round();
            if ((d / h) - n).abs() > 1e-9 * n.max(1.0) {
                return Err(Error::InvalidGrid(format!(
                    "distance {d} is not a whole number of steps of size {h}"
                )));
            }
            Ok(n as usize)
        };
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive, got {h}")));
        }
        Grid::new(x0, h, steps(x0 - lo)?, steps(hi - x0)?)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    /// Coordinate of the signed index `j`.
    #[inline]
    pub fn point(&self, j: isize) -> f64 {
        self.x0 + j as f64 * self.h
    }

    pub fn x_left(&self) -> f64 {
        self.point(-(self.n_left as isize))
    }

    pub fn x_right(&self) -> f64 {
        self.point(self.n_right as isize)
    }

    pub fn len(&self) -> usize {
        self.n_left + self.n_right + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All points in increasing order.
    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let first = -(self.n_left as isize);
        (0..self.len()).map(move |i| self.point(first + i as isize))
    }

    /// Same anchor and extent with the step divided by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidGrid("refinement factor must be positive".into()));
        }
        Grid::new(
            self.x0,
            self.h / factor as f64,
            self.n_left * factor,
            self.n_right * factor,
        )
    }
}

/// Build a grid; see [`Grid::new`].
pub fn make_grid(x0: f64, h: f64, n_left: usize, n_right: usize) -> Result<Grid> {
    Grid::new(x0, h, n_left, n_right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn half_line_grid() {
        let g = make_grid(0.0, 0.01, 0, 500).unwrap();
        assert_eq!(g.x_left(), 0.0);
        assert!((g.x_right() - 5.0).abs() < 1e-12);
        assert_eq!(g.len(), 501);
    }

    #[test]
    fn small_grid_points() {
        let g = make_grid(0.5, 0.25, 2, 2).unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn symmetric_grid() {
        let g = make_grid(0.0, 0.1, 50, 50).unwrap();
        assert_eq!(g.points().len(), 101);
        assert!((g.x_left() + 5.0).abs() < 1e-12);
        assert!((g.x_right() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_step_and_extent() {
        assert!(matches!(make_grid(0.0, 0.0, 5, 5), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(0.0, -0.1, 5, 5), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(0.0, f64::NAN, 5, 5), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(0.0, 0.1, 0, 0), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(0.0, 0.1, 1, 0), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn spanning_rounds_to_lattice() {
        let g = Grid::spanning(0.0, 1.0, 0.25, 0.001).unwrap();
        assert_eq!((g.n_left(), g.n_right()), (250, 750));
        assert!(Grid::spanning(0.0, 1.0, 0.25, 0.02).is_err());
    }

    proptest! {
        #[test]
        fn points_strictly_increasing_and_uniform(
            x0 in -10.0f64..10.0,
            h in 1e-4f64..0.5,
            nl in 0usize..200,
            nr in 2usize..200,
        ) {
            let g = make_grid(x0, h, nl, nr).unwrap();
            let pts: Vec<f64> = g.points().collect();
            prop_assert_eq!(pts.len(), nl + nr + 1);
            for w in pts.windows(2) {
                prop_assert!(w[1] > w[0]);
                let tol = 4.0 * f64::EPSILON * (x0.abs() + (nl + nr) as f64 * h).max(1.0);
                prop_assert!((w[1] - w[0] - h).abs() <= tol);
            }
            prop_assert_eq!(pts[nl], x0);
        }
    }
}
