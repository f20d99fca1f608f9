//! Low-tech reference solvers that share no code with the Wronskian or
//! ratio engines.

use rayon::prelude::*;

use crate::asymptotic::{Boundary, Point};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::wronskian;

/// Discrete box eigenvalue `(1 - cos(2 n pi h)) / (4 h^2)` of the naive
/// three-term scheme.
pub fn fd_box_dispersion(n: usize, h: f64) -> Result<f64> {
    if n == 0 || !(h > 0.0) || n as f64 * h >= 1.0 {
        return Err(Error::UnresolvableMode { n, h });
    }
    let theta = 2.0 * std::f64::consts::PI * n as f64 * h;
    Ok((1.0 - theta.cos()) / (4.0 * h * h))
}

/// `phi_j` for even `j = 0, 2, ..., N` from `phi_0 = 0`, `phi_2 = 1` and
/// `phi_{j+2} = (2 - 8 h^2 eps) phi_j - phi_{j-2}`, `h = 1/N`.
pub fn fd_box_recurrence_mode(n_points: usize, energy: f64) -> Vec<f64> {
    let h = 1.0 / n_points as f64;
    let g = 2.0 - 8.0 * h * h * energy;
    let m = n_points / 2;
    let mut phi = Vec::with_capacity(m + 1);
    phi.push(0.0);
    phi.push(1.0);
    for i in 1..m {
        let next = g * phi[i] - phi[i - 1];
        phi.push(next);
    }
    phi
}

/// Sign changes of the shooting sequence, which count the discrete levels
/// below `energy`.
fn sturm_count(n_points: usize, energy: f64) -> usize {
    let phi = fd_box_recurrence_mode(n_points, energy);
    let mut last = phi[1];
    let mut count = 0;
    for &p in &phi[2..] {
        if p != 0.0 {
            if p.signum() != last.signum() {
                count += 1;
            }
            last = p;
        }
    }
    count
}

/// The lowest `n_max` eigenvalues of the three-term recurrence with
/// `phi_0 = phi_N = 0`, found by shooting on the even sublattice.
///
/// The sublattice has `N/2 - 1` interior points, so only levels
/// `n <= N/2 - 1` are distinct.
pub fn fd_box_recurrence_eigenvalues(n_points: usize, n_max: usize) -> Result<Vec<f64>> {
    if n_points < 4 || n_points % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "recurrence needs an even N >= 4, got {n_points}"
        )));
    }
    let h = 1.0 / n_points as f64;
    if n_max > n_points / 2 - 1 {
        return Err(Error::UnresolvableMode { n: n_max, h });
    }
    let top = 1.0 / (2.0 * h * h);
    Ok((1..=n_max)
        .into_par_iter()
        .map(|n| {
            // The count steps from n - 1 to n exactly where phi_N changes
            // sign at the n-th level.
            let (mut lo, mut hi) = (0.0, top);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(n_points, mid) < n {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect())
}

/// A dense RK4 march from `x_left` to `x_right` with `steps` steps.
fn march(problem: &Problem, energy: f64, start: Point, x_left: f64, x_right: f64, steps: usize) -> Point {
    let h = (x_right - x_left) / steps as f64;
    let f = |x: f64| 2.0 * (problem.potential.eval(x) - energy);
    let (mut y, mut p) = (start.value, start.slope);
    for j in 0..steps {
        let x = x_left + j as f64 * h;
        let (q0, q1, q2) = (f(x), f(x + 0.5 * h), f(x + h));
        let (k1y, k1p) = (p, q0 * y);
        let (k2y, k2p) = (p + 0.5 * h * k1p, q1 * (y + 0.5 * h * k1y));
        let (k3y, k3p) = (p + 0.5 * h * k2p, q1 * (y + 0.5 * h * k2y));
        let (k4y, k4p) = (p + h * k3p, q2 * (y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        let m = y.abs().max(p.abs());
        if m > 1e100 {
            y /= m;
            p /= m;
        }
    }
    Point::new(y, p)
}

fn mismatch(problem: &Problem, energy: f64, steps: usize) -> f64 {
    let (xl, xr) = (problem.x_left(), problem.x_right());
    let start = match &problem.asymptotics.left {
        Boundary::Dirichlet => Point::new(0.0, 1.0),
        Boundary::Asymptotic { convergent, .. } => convergent.at(energy, xl),
    };
    let end = march(problem, energy, start, xl, xr, steps);
    match &problem.asymptotics.right {
        Boundary::Dirichlet => end.value,
        Boundary::Asymptotic { convergent, .. } => {
            let rc = convergent.at(energy, xr);
            wronskian(rc.value, rc.slope, end.value, end.slope)
        }
    }
}

/// Bisection shooting across the whole interval at a quarter of the
/// problem's step, from the convergent start on the left to the endpoint
/// Wronskian with the convergent form on the right.
pub fn shooting_reference(problem: &Problem, range: (f64, f64), tol: f64) -> Result<Vec<f64>> {
    problem.validate()?;
    let (lo, hi) = range;
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("range {range:?}, tol {tol}")));
    }
    let (xl, xr) = (problem.x_left(), problem.x_right());
    let h = problem.grid.step() / 4.0;
    let steps = ((xr - xl) / h).round().max(1.0) as usize;
    let n_probe = crate::roots::default_probes(range);
    let probe_step = (hi - lo) / n_probe as f64;
    let values: Vec<(f64, f64)> = (0..=n_probe)
        .into_par_iter()
        .map(|i| {
            let e = if i == n_probe { hi } else { lo + i as f64 * probe_step };
            (e, mismatch(problem, e, steps))
        })
        .collect();
    if let Some((e, _)) = values.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { energy: *e });
    }
    let roots = values
        .windows(2)
        .filter(|w| w[0].1 * w[1].1 < 0.0 || w[1].1 == 0.0)
        .map(|w| (w[0], w[1]))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|((mut a, mut fa), (mut b, fb))| {
            if fb == 0.0 {
                return b;
            }
            while b - a > tol {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = mismatch(problem, m, steps);
                if fm == 0.0 {
                    return m;
                }
                if (fm > 0.0) == (fa > 0.0) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        })
        .collect();
    Ok(roots)
}
