//! Built-in potentials with their boundary models and, where known, exact
//! spectra.

use std::f64::consts::PI;

use crate::asymptotic::{exponential_pair, AsymptoticModel, Boundary, Point, SolutionForm};
use crate::error::{Error, Result, Side};
use crate::grid::Grid;
use crate::potential::{Domain, PotentialSpec};
use crate::problem::Problem;

/// Unit box with walls at 0 and 1, anchored at `x0` on a grid of step `h`.
pub fn infinite_well_with(x0: f64, h: f64) -> Result<Problem> {
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::InvalidArgument(format!("box anchor {x0} must lie inside (0, 1)")));
    }
    let v = PotentialSpec::new("box", |_| 0.0).with_domain(Domain::FiniteInterval(0.0, 1.0));
    let grid = Grid::spanning(0.0, 1.0, x0, h)?;
    Problem::new(v, grid, AsymptoticModel::dirichlet(), (0.0, 125.0))
}

/// Unit box, `x0 = 1/8`, `h = 0.001`, searching the first five levels.
///
/// The ratio route loses every level with `sin(n pi x0) = 0`, where `S`
/// vanishes at both walls; `1/8` keeps the first seven visible.
pub fn infinite_well() -> Problem {
    infinite_well_with(0.125, 0.001).expect("default box grid is valid")
}

/// `n^2 pi^2 / 2`.
pub fn infinite_well_energy(n: usize) -> f64 {
    let n = n as f64;
    n * n * PI * PI / 2.0
}

/// Levels `n = 1..=n_max`.
pub fn infinite_well_exact(n_max: usize) -> Vec<f64> {
    (1..=n_max).map(infinite_well_energy).collect()
}

fn check_strength(v0: f64) -> Result<()> {
    if !(v0 > 0.0) || !v0.is_finite() {
        return Err(Error::InvalidPotential(format!("well depth v0 = {v0} must be positive")));
    }
    Ok(())
}

/// `-v0 / cosh^2(x)` with parity and decay declared.
pub fn poschl_teller_potential(v0: f64) -> Result<PotentialSpec> {
    check_strength(v0)?;
    Ok(PotentialSpec::new("poschl-teller", move |x: f64| -v0 / x.cosh().powi(2))
        .with_parity(true)
        .decaying()
        .with_parameter("v0", v0))
}

/// Pöschl–Teller well on the mirrored grid `x0 = 0`, `h = 0.01`, `N_R = 500`.
pub fn poschl_teller(v0: f64) -> Result<Problem> {
    poschl_teller_with(v0, 0.01, 5.0)
}

pub fn poschl_teller_with(v0: f64, h: f64, x_right: f64) -> Result<Problem> {
    let v = poschl_teller_potential(v0)?;
    let grid = Grid::new(0.0, h, 0, steps(x_right, h)?)?;
    let asym = AsymptoticModel::new(exponential_pair(Side::Left), exponential_pair(Side::Right));
    Problem::new(v, grid, asym, (-v0, 0.0))
}

/// `lambda = (1 + sqrt(1 + 8 v0)) / 2`.
pub fn poschl_teller_lambda(v0: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 8.0 * v0).sqrt())
}

/// `-(lambda - 1 - n)^2 / 2` for every `n < lambda - 1`; a marginal level at
/// zero energy is not a bound state and is left out.
pub fn poschl_teller_exact(v0: f64) -> Result<Vec<f64>> {
    check_strength(v0)?;
    let top = poschl_teller_lambda(v0) - 1.0;
    Ok((0..)
        .map(|n| top - n as f64)
        .take_while(|&d| d > 0.0)
        .map(|d| -0.5 * d * d)
        .collect())
}

/// Depths `n (n + 1) / 2` at which the `n`-th level appears.
pub fn critical_strengths(count: usize) -> Vec<f64> {
    (0..count).map(|n| (n * (n + 1)) as f64 / 2.0).collect()
}

/// `v2 x^2 + v4 x^4` with energies searched up to `eps_max`; the grid ends
/// where the potential reaches `50 |eps_max|`.
pub fn anharmonic_with(v2: f64, v4: f64, eps_max: f64, h: f64) -> Result<Problem> {
    if !(v4 > 0.0) || !v4.is_finite() || !v2.is_finite() {
        return Err(Error::InvalidPotential(format!("quartic coefficient v4 = {v4} must be positive")));
    }
    let v = PotentialSpec::new("anharmonic", move |x: f64| {
        let x2 = x * x;
        v2 * x2 + v4 * x2 * x2
    })
    .with_parity(true)
    .with_parameter("v2", v2)
    .with_parameter("v4", v4);

    let floor = if v2 < 0.0 { -v2 * v2 / (4.0 * v4) } else { 0.0 };
    if !(eps_max > floor) {
        return Err(Error::InvalidArgument(format!(
            "eps_max = {eps_max} lies below the potential minimum {floor}"
        )));
    }
    // Solve v2 y + v4 y^2 = target for y = x^2.
    let target = 50.0 * eps_max.abs().max(1.0);
    let y = (-v2 + (v2 * v2 + 4.0 * v4 * target).sqrt()) / (2.0 * v4);
    let x_right = y.sqrt();

    let a = (2.0 * v4).sqrt() / 3.0;
    // Left forms are the reflections of the right ones.
    let form = |sign: f64| {
        SolutionForm::new(move |_e, x: f64| {
            let v = (sign * a * x * x * x).exp();
            Point::new(v, sign * 3.0 * a * x * x * v)
        })
    };
    let asym = AsymptoticModel::new(
        Boundary::asymptotic(form(1.0), form(-1.0)),
        Boundary::asymptotic(form(-1.0), form(1.0)),
    );
    let grid = Grid::new(0.0, h, 0, steps(x_right, h)?.max(1))?;
    Problem::new(v, grid, asym, (floor, eps_max))
}

/// Quartic oscillator searched up to `eps = 10` at `h = 0.01`.
pub fn anharmonic(v2: f64, v4: f64) -> Result<Problem> {
    anharmonic_with(v2, v4, 10.0, 0.01)
}

/// `r^(l+1)` and `r^(-l)` (`1` for `l = 0`).
pub fn origin_pair(l: u32) -> Boundary {
    let l = l as i32;
    let conv = SolutionForm::new(move |_e, r: f64| Point::new(r.powi(l + 1), (l + 1) as f64 * r.powi(l)));
    let div = SolutionForm::new(move |_e, r: f64| {
        if l == 0 {
            Point::new(1.0, 0.0)
        } else {
            Point::new(r.powi(-l), -(l as f64) * r.powi(-l - 1))
        }
    });
    Boundary::asymptotic(conv, div)
}

/// `r^2 |v(r)|` must shrink toward the origin.
fn check_origin(inner: &PotentialSpec) -> Result<()> {
    let strength = |r: f64| (r * r * inner.eval(r)).abs();
    let (a6, a8) = (strength(1e-6), strength(1e-8));
    if !a6.is_finite() || !a8.is_finite() || (a6 > 0.0 && !(a8 < a6 * (1.0 - 1e-9))) {
        return Err(Error::InvalidPotential(format!(
            "r^2 v(r) does not vanish at the origin: |r^2 v| = {a6:e} at 1e-6, {a8:e} at 1e-8"
        )));
    }
    Ok(())
}

/// Half-line problem for angular momentum `l` on `(r_min, r_max)`.
///
/// The grid starts at the origin when `l = 0` and the inner potential is
/// finite there (the `r` model then reduces to a wall), otherwise at
/// `10 h`. Both directions are integrated from an anchor near `r = 1`.
pub fn radial_with(inner: PotentialSpec, l: u32, h: f64, r_max: f64) -> Result<Problem> {
    check_origin(&inner)?;
    if !(h > 0.0) || !(r_max > 20.0 * h) {
        return Err(Error::InvalidGrid(format!("radial grid h = {h}, r_max = {r_max}")));
    }
    let n_total = steps(r_max, h)?;
    let r_min_steps = if l == 0 && inner.eval(0.0).is_finite() { 0 } else { 10 };
    let anchor = ((1.0 / h).round() as usize).clamp(r_min_steps + 1, n_total - 1);
    let decaying = inner.is_decaying();
    let centrifugal = (l * (l + 1)) as f64 / 2.0;
    let name = format!("radial-{}", inner.name());
    let params: Vec<(String, f64)> = inner.parameters().to_vec();
    let f = move |r: f64| {
        if centrifugal == 0.0 {
            inner.eval(r)
        } else {
            centrifugal / (r * r) + inner.eval(r)
        }
    };
    let mut v = PotentialSpec::new(name, f).with_domain(Domain::HalfLine).with_parameter("l", l as f64);
    for (k, x) in params {
        v = v.with_parameter(k, x);
    }
    let right = if decaying {
        v = v.decaying();
        exponential_pair(Side::Right)
    } else {
        Boundary::Dirichlet
    };
    let grid = Grid::new(anchor as f64 * h, h, anchor - r_min_steps, n_total - anchor)?;
    let floor = Problem::default_energy_floor(&v, &grid);
    let hi = if decaying { 0.0 } else { floor + 50.0 };
    Problem::new(v, grid, AsymptoticModel::new(origin_pair(l), right), (floor, hi))
}

/// Radial problem at `h = 0.01`, `r_max = 10`.
pub fn radial(inner: PotentialSpec, l: u32) -> Result<Problem> {
    radial_with(inner, l, 0.01, 10.0)
}

/// `-v0 / cosh^2(r)` on the half line.
pub fn radial_poschl_teller(v0: f64, l: u32) -> Result<Problem> {
    let inner = poschl_teller_potential(v0)?.with_parity(false).with_domain(Domain::HalfLine);
    radial(inner, l)
}

/// `v = 0` on the mirrored grid with exponential boundary models: every
/// endpoint Wronskian ratio is exact.
pub fn flat(x_right: f64, h: f64) -> Result<Problem> {
    let v = PotentialSpec::new("flat", |_| 0.0).with_parity(true).decaying();
    let grid = Grid::new(0.0, h, 0, steps(x_right, h)?)?;
    let asym = AsymptoticModel::new(exponential_pair(Side::Left), exponential_pair(Side::Right));
    Problem::new(v, grid, asym, (-1.0, 0.0))
}

fn steps(extent: f64, h: f64) -> Result<usize> {
    if !(h > 0.0) || !(extent > 0.0) || !(extent / h).is_finite() {
        return Err(Error::InvalidGrid(format!("extent {extent} with step {h}")));
    }
    Ok((extent / h - 1e-9).ceil() as usize)
}
