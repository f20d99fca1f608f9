//! Fourth-order Runge–Kutta propagation of `phi'' = 2 (v(x) - eps) phi`.

use crate::asymptotic::Point;
use crate::grid::Grid;
use crate::potential::{Domain, PotentialSpec};

/// Magnitude beyond which propagation stops and flags truncation.
pub const DEFAULT_OVERFLOW_CAP: f64 = 1e280;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Leftward,
    Rightward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Leftward => -1.0,
            Direction::Rightward => 1.0,
        }
    }
}

/// Samples `(y, y')` in traversal order, starting at the anchor.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<Point>,
    /// Set when `|y|` or `|y'|` exceeded the cap before the grid end; `points`
    /// then stops at the last finite step below the cap.
    pub truncated: bool,
}

/// Integrate from `x0` to the grid end in `direction` with steps of size `h`.
pub fn propagate(
    potential: &PotentialSpec,
    energy: f64,
    grid: &Grid,
    start: Point,
    direction: Direction,
) -> Trajectory {
    propagate_capped(potential, energy, grid, start, direction, DEFAULT_OVERFLOW_CAP)
}

pub fn propagate_capped(
    potential: &PotentialSpec,
    energy: f64,
    grid: &Grid,
    start: Point,
    direction: Direction,
    cap: f64,
) -> Trajectory {
    let steps = match direction {
        Direction::Leftward => grid.n_left(),
        Direction::Rightward => grid.n_right(),
    };
    let sign = direction.sign();
    let s = sign * grid.step();
    let half = 0.5 * s;
    let x0 = grid.x0();
    let h = grid.step();
    let g = |x: f64| 2.0 * (potential.eval(x) - energy);

    let mut points = Vec::with_capacity(steps + 1);
    points.push(start);
    let (mut y, mut p) = (start.value, start.slope);
    let mut g0 = g(x0);
    for j in 0..steps {
        let jf = j as f64;
        let gm = g(x0 + sign * (jf + 0.5) * h);
        let g1 = g(x0 + sign * (jf + 1.0) * h);

        let (k1y, k1p) = (p, g0 * y);
        let (k2y, k2p) = (p + half * k1p, gm * (y + half * k1y));
        let (k3y, k3p) = (p + half * k2p, gm * (y + half * k2y));
        let (k4y, k4p) = (p + s * k3p, g1 * (y + s * k3y));

        let ny = y + s / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        let np = p + s / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if !(ny.abs() <= cap && np.abs() <= cap) {
            return Trajectory { points, truncated: true };
        }
        y = ny;
        p = np;
        g0 = g1;
        points.push(Point::new(y, p));
    }
    Trajectory { points, truncated: false }
}

/// Canonical solutions at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalSample {
    pub x: f64,
    pub c: Point,
    pub s: Point,
}

impl CanonicalSample {
    /// `W(C, S)`, identically 1 for exact canonical functions.
    pub fn wronskian(&self) -> f64 {
        self.c.wronskian(&self.s)
    }

    /// Values at `-x` for an even potential with anchor at the origin:
    /// `C(-x) = C(x)`, `S(-x) = -S(x)`.
    pub fn reflected(&self) -> CanonicalSample {
        CanonicalSample {
            x: -self.x,
            c: Point::new(self.c.value, -self.c.slope),
            s: Point::new(-self.s.value, self.s.slope),
        }
    }
}

/// `C` and `S` sampled on a grid at one energy.
#[derive(Debug, Clone)]
pub struct CanonicalPair {
    grid: Grid,
    energy: f64,
    /// Increasing `x`, covering what was actually integrated.
    samples: Vec<CanonicalSample>,
    anchor: usize,
    mirrored: bool,
    truncated: bool,
}

impl CanonicalPair {
    /// Wrap externally computed samples (for example closed forms). The
    /// anchor is the sample nearest `grid.x0()`.
    pub fn from_samples(grid: Grid, energy: f64, samples: Vec<CanonicalSample>, mirrored: bool) -> Self {
        let anchor = samples
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1.x - grid.x0()).abs().total_cmp(&(b.1.x - grid.x0()).abs())
            })
            .map_or(0, |(i, _)| i);
        CanonicalPair { grid, energy, samples, anchor, mirrored, truncated: false }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Integrated samples only (no reflected half).
    pub fn samples(&self) -> &[CanonicalSample] {
        &self.samples
    }

    pub fn anchor(&self) -> &CanonicalSample {
        &self.samples[self.anchor]
    }

    /// True when the left half comes from reflection rather than integration.
    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Samples at `x >= x0`.
    pub fn right_half(&self) -> &[CanonicalSample] {
        &self.samples[self.anchor..]
    }

    /// Every sample over the full interval, reflecting when mirrored.
    pub fn full_samples(&self) -> Vec<CanonicalSample> {
        if !self.mirrored {
            return self.samples.clone();
        }
        let right = self.right_half();
        let mut out: Vec<CanonicalSample> =
            right.iter().skip(1).rev().map(CanonicalSample::reflected).collect();
        out.extend_from_slice(right);
        out
    }

    /// Quadruple at the left end actually reached.
    pub fn left_end(&self) -> CanonicalSample {
        if self.mirrored {
            self.samples[self.samples.len() - 1].reflected()
        } else {
            self.samples[0]
        }
    }

    /// Quadruple at the right end actually reached.
    pub fn right_end(&self) -> CanonicalSample {
        self.samples[self.samples.len() - 1]
    }

    /// Divide every value and derivative by `factor`. Ratios `C/S`, `C'/S'`
    /// and the roots of every characteristic function are unchanged; `W(C, S)`
    /// becomes `1/factor^2`.
    pub fn rescale(&mut self, factor: f64) {
        let inv = 1.0 / factor;
        for s in &mut self.samples {
            s.c = s.c.scale(inv);
            s.s = s.s.scale(inv);
        }
    }

    /// Largest `|W(C, S) - 1|` over the integrated samples.
    pub fn max_wronskian_drift(&self) -> f64 {
        self.samples.iter().map(|s| (s.wronskian() - 1.0).abs()).fold(0.0, f64::max)
    }
}

fn mirrors(potential: &PotentialSpec, grid: &Grid) -> bool {
    potential.is_parity_invariant()
        && potential.domain() == Domain::FullLine
        && grid.x0() == 0.0
        && grid.n_left() == 0
}

/// Integrate `C` (start `(1, 0)`) and `S` (start `(0, 1)`) from `x0` in both
/// directions. Even potentials anchored at the origin with no left steps are
/// only integrated rightward.
pub fn canonical_pair(potential: &PotentialSpec, energy: f64, grid: &Grid) -> CanonicalPair {
    let one_zero = Point::new(1.0, 0.0);
    let zero_one = Point::new(0.0, 1.0);
    let run = |dir| {
        let c = propagate(potential, energy, grid, one_zero, dir);
        let s = propagate(potential, energy, grid, zero_one, dir);
        let n = c.points.len().min(s.points.len());
        (c, s, n)
    };

    let (cr, sr, nr) = run(Direction::Rightward);
    let (cl, sl, nl) = if grid.n_left() > 0 {
        run(Direction::Leftward)
    } else {
        (
            Trajectory { points: vec![one_zero], truncated: false },
            Trajectory { points: vec![zero_one], truncated: false },
            1,
        )
    };

    let mut samples = Vec::with_capacity(nl + nr - 1);
    for j in (1..nl).rev() {
        samples.push(CanonicalSample {
            x: grid.point(-(j as isize)),
            c: cl.points[j],
            s: sl.points[j],
        });
    }
    for j in 0..nr {
        samples.push(CanonicalSample {
            x: grid.point(j as isize),
            c: cr.points[j],
            s: sr.points[j],
        });
    }
    CanonicalPair {
        grid: *grid,
        energy,
        samples,
        anchor: nl - 1,
        mirrored: mirrors(potential, grid),
        truncated: cr.truncated || sr.truncated || cl.truncated || sl.truncated,
    }
}
