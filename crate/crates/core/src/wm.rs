//! Wronskian-method quantization.
//!
//! For a trial energy the canonical pair is integrated once and paired with
//! the convergent asymptotic solutions at each endpoint. Square
//! integrability demands that the divergent coefficients vanish:
//!
//! ```text
//! B1 W(Lc, Ld)- = A2 W(Lc, C)- + B2 W(Lc, S)-
//! B3 W(Rc, Rd)+ = A2 W(Rc, C)+ + B2 W(Rc, S)+
//! ```
//!
//! so the energies are the zeros of the 2x2 determinant of the right-hand
//! sides.

use crate::asymptotic::{Boundary, Point, SolutionForm};
use crate::characteristic::{CharacteristicFunction, Eval};
use crate::error::{Error, Result, Side};
use crate::grid::Grid;
use crate::integrate::{canonical_pair, CanonicalPair, CanonicalSample};
use crate::potential::PotentialSpec;
use crate::problem::{EigenResult, Parity, Problem, WaveSample};
use crate::asymptotic::AsymptoticModel;

/// Endpoint Wronskians of the canonical pair against the boundary models.
///
/// Dirichlet sides store the boundary values `C`, `S` in place of the
/// Wronskians and leave the pair Wronskian empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WmEndpointData {
    /// `W(Lc, C)-`
    pub left_c: f64,
    /// `W(Lc, S)-`
    pub left_s: f64,
    /// `W(Lc, Ld)-`
    pub left_pair: Option<f64>,
    /// `W(Rc, C)+`
    pub right_c: f64,
    /// `W(Rc, S)+`
    pub right_s: f64,
    /// `W(Rc, Rd)+`
    pub right_pair: Option<f64>,
}

impl WmEndpointData {
    pub fn determinant(&self) -> f64 {
        self.left_c * self.right_s - self.right_c * self.left_s
    }

    /// Divergent coefficients `(B1, B3)` for `phi = A2 C + B2 S`.
    pub fn divergent(&self, a2: f64, b2: f64) -> (f64, f64) {
        let b1 = a2 * self.left_c + b2 * self.left_s;
        let b3 = a2 * self.right_c + b2 * self.right_s;
        (
            self.left_pair.map_or(b1, |w| b1 / w),
            self.right_pair.map_or(b3, |w| b3 / w),
        )
    }
}

pub(crate) fn endpoint_rows(
    pair: &CanonicalPair,
    asym: &AsymptoticModel,
) -> ((f64, f64), (f64, f64)) {
    let e = pair.energy();
    let l = pair.left_end();
    let r = pair.right_end();
    (asym.left.row(e, l.x, l.c, l.s), asym.right.row(e, r.x, r.c, r.s))
}

/// Endpoint Wronskians with linear-independence checks on both pairs.
pub fn wm_endpoint_data(pair: &CanonicalPair, asym: &AsymptoticModel) -> Result<WmEndpointData> {
    let e = pair.energy();
    let ((left_c, left_s), (right_c, right_s)) = endpoint_rows(pair, asym);
    let l = pair.left_end();
    let r = pair.right_end();
    asym.check_independent(e, l.x, r.x)?;
    Ok(WmEndpointData {
        left_c,
        left_s,
        left_pair: asym.left.pair_wronskian(e, l.x),
        right_c,
        right_s,
        right_pair: asym.right.pair_wronskian(e, r.x),
    })
}

/// `eps -> W(Lc,C)- W(Rc,S)+ - W(Rc,C)+ W(Lc,S)-`, one integration per call.
pub fn wm_characteristic(problem: &Problem) -> CharacteristicFunction {
    let problem = problem.clone();
    CharacteristicFunction::new("wm", move |e| {
        let pair = canonical_pair(&problem.potential, e, &problem.grid);
        if pair.is_truncated() {
            return Eval::Overflow;
        }
        let ((lc, ls), (rc, rs)) = endpoint_rows(&pair, &problem.asymptotics);
        Eval::from_f64(lc * rs - rc * ls)
    })
}

/// Rightward-only grid with the same step and right extent.
pub(crate) fn half_grid(problem: &Problem) -> Result<Grid> {
    if !problem.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let g = problem.grid;
    Grid::new(0.0, g.step(), 0, g.n_right())
}

/// Even states: `eps -> W(Rc, C)+`; odd states: `eps -> W(Rc, S)+`.
pub fn wm_characteristic_symmetric(problem: &Problem, parity: Parity) -> Result<CharacteristicFunction> {
    let grid = half_grid(problem)?;
    let potential = problem.potential.clone();
    let right = problem.asymptotics.right.clone();
    let label = match parity {
        Parity::Even => "wm-even",
        Parity::Odd => "wm-odd",
    };
    Ok(CharacteristicFunction::new(label, move |e| {
        let pair = canonical_pair(&potential, e, &grid);
        if pair.is_truncated() {
            return Eval::Overflow;
        }
        let r = pair.right_end();
        let (rc, rs) = right.row(e, r.x, r.c, r.s);
        Eval::from_f64(match parity {
            Parity::Even => rc,
            Parity::Odd => rs,
        })
    }))
}

/// How the coefficients `(A2, B2)` are picked at a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Coefficients {
    /// Null vector of the larger-norm endpoint row.
    Nullspace,
    /// `phi = C`.
    Even,
    /// `phi = S`.
    Odd,
}

/// Endpoint rows `(left, right)` whose common null vector gives `(A2, B2)`.
pub(crate) type Rows = ((f64, f64), (f64, f64));

/// Unit null vectors of the left and right rows, the left one sign-aligned
/// with the right one. Each side of the anchor is built from its own row so
/// that the divergent component there cancels to round-off, however large
/// the canonical functions grow. A vanishing row borrows the other side's
/// vector.
pub(crate) fn side_vectors(rows: Rows, energy: f64) -> Result<((f64, f64), (f64, f64))> {
    let ((lc, ls), (rc, rs)) = rows;
    let unit = |a: f64, b: f64| {
        let n = a.hypot(b);
        (n > 0.0 && n.is_finite()).then(|| (a / n, b / n))
    };
    match (unit(ls, -lc), unit(rs, -rc)) {
        (Some(l), Some(r)) => {
            let s = if l.0 * r.0 + l.1 * r.1 < 0.0 { -1.0 } else { 1.0 };
            Ok(((s * l.0, s * l.1), r))
        }
        (Some(v), None) | (None, Some(v)) => Ok((v, v)),
        (None, None) => Err(Error::DegenerateRoot { energy }),
    }
}

/// Right-row null vector, which is `C` (even) or `S` (odd) up to the
/// round-off admixture that keeps the tail from diverging, and its mirror
/// image for `x < 0`.
fn parity_vectors((rc, rs): (f64, f64), rule: Coefficients) -> ((f64, f64), (f64, f64)) {
    let nominal = if rule == Coefficients::Even { (1.0, 0.0) } else { (0.0, 1.0) };
    let n = rc.hypot(rs);
    let mut r = if n > 0.0 && n.is_finite() { (rs / n, -rc / n) } else { nominal };
    if r.0 * nominal.0 + r.1 * nominal.1 < 0.0 {
        r = (-r.0, -r.1);
    }
    // C(-x) = C(x), S(-x) = -S(x)
    let l = if rule == Coefficients::Even { (r.0, -r.1) } else { (-r.0, r.1) };
    (l, r)
}

/// Build an eigenstate from a converged root.
pub fn wm_eigenfunction(problem: &Problem, root: f64) -> Result<EigenResult> {
    let pair = canonical_pair(&problem.potential, root, &problem.grid);
    if pair.is_truncated() {
        return Err(Error::Overflow { x: pair.right_end().x, energy: root });
    }
    let rows = endpoint_rows(&pair, &problem.asymptotics);
    let residual = {
        let ((lc, ls), (rc, rs)) = rows;
        (lc * rs - rc * ls).abs()
    };
    assemble(problem, &pair, rows, Coefficients::Nullspace, residual)
}

pub(crate) fn assemble(
    problem: &Problem,
    pair: &CanonicalPair,
    rows: Rows,
    rule: Coefficients,
    residual: f64,
) -> Result<EigenResult> {
    let energy = pair.energy();
    let (left, (mut a2, mut b2)) = match rule {
        Coefficients::Nullspace => side_vectors(rows, energy)?,
        Coefficients::Even | Coefficients::Odd => parity_vectors(rows.1, rule),
    };

    let x0 = pair.grid().x0();
    let samples = pair.full_samples();
    let mut wave: Vec<WaveSample> = samples
        .iter()
        .map(|s| {
            let (a, b) = if s.x < x0 { left } else { (a2, b2) };
            WaveSample {
                x: s.x,
                phi: a * s.c.value + b * s.s.value,
                dphi: a * s.c.slope + b * s.s.slope,
            }
        })
        .collect();

    trim_tail(&mut wave, &problem.potential, &problem.asymptotics.right, energy, Side::Right);
    trim_tail(&mut wave, &problem.potential, &problem.asymptotics.left, energy, Side::Left);

    // Divide by the peak first so the squares cannot overflow.
    let peak = wave.iter().map(|w| w.phi.abs()).fold(0.0, f64::max);
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::DegenerateRoot { energy });
    }
    for w in &mut wave {
        w.phi /= peak;
        w.dphi /= peak;
    }
    let norm = trapezoid_norm(&wave).sqrt();
    let lead = wave.iter().find(|w| w.phi.abs() > 1e-3).map_or(1.0, |w| w.phi.signum());
    let scale = lead / norm;
    for w in &mut wave {
        w.phi *= scale;
        w.dphi *= scale;
    }
    a2 *= scale / peak;
    b2 *= scale / peak;

    let data = endpoint_data_unchecked(pair, &problem.asymptotics);
    let parity = if problem.is_symmetric() {
        Some(match rule {
            Coefficients::Even => Parity::Even,
            Coefficients::Odd => Parity::Odd,
            Coefficients::Nullspace if a2.abs() >= b2.abs() => Parity::Even,
            Coefficients::Nullspace => Parity::Odd,
        })
    } else {
        None
    };

    Ok(EigenResult {
        energy,
        index: 0,
        parity,
        residual,
        node_count: count_nodes(&wave),
        wavefunction: wave,
        coefficients: (a2, b2),
        divergent: data.divergent(a2, b2),
    })
}

fn endpoint_data_unchecked(pair: &CanonicalPair, asym: &AsymptoticModel) -> WmEndpointData {
    let e = pair.energy();
    let ((left_c, left_s), (right_c, right_s)) = endpoint_rows(pair, asym);
    let nonzero = |w: Option<f64>| w.filter(|w| w.abs() > 1e-300);
    WmEndpointData {
        left_c,
        left_s,
        left_pair: nonzero(asym.left.pair_wronskian(e, pair.left_end().x)),
        right_c,
        right_s,
        right_pair: nonzero(asym.right.pair_wronskian(e, pair.right_end().x)),
    }
}

/// Replace a contaminated tail toward an asymptotic boundary with the
/// convergent form.
///
/// Deep in the forbidden region each sample is a small difference of large
/// canonical values, so round-off (or the residual of the root) shows up as
/// a divergent admixture. Beyond the outermost turning point the convergent
/// solution decays monotonically without changing sign, so the first sample
/// that breaks this (walking outward) marks the contamination. The
/// convergent form is matched well inside that point and replaces
/// everything outward.
fn trim_tail(wave: &mut [WaveSample], potential: &PotentialSpec, boundary: &Boundary, energy: f64, side: Side) {
    let Boundary::Asymptotic { convergent, .. } = boundary else {
        return;
    };
    let n = wave.len();
    // Index sequence walking inward from the boundary.
    let idx = |i: usize| match side {
        Side::Right => n - 1 - i,
        Side::Left => i,
    };
    let mag = |wave: &[WaveSample], i: usize| wave[idx(i)].phi.abs();
    let forbidden = (0..n).take_while(|&i| potential.eval(wave[idx(i)].x) > energy).count();
    if forbidden < 2 || forbidden >= n {
        return;
    }
    let start = forbidden - 1;
    let sign = wave[idx(start)].phi.signum();
    if wave[idx(start)].phi == 0.0 {
        return;
    }
    let Some(bad) = (0..start).rev().find(|&i| {
        let (cur, inner) = (wave[idx(i)].phi, wave[idx(i + 1)].phi);
        cur * sign <= 0.0 || cur.abs() > inner.abs()
    }) else {
        return;
    };
    let target = 1e3 * mag(wave, bad + 1);
    let mut a = bad + 1;
    while a < start && mag(wave, a) < target {
        a += 1;
    }
    match_tail(wave, convergent, energy, &idx, a);
}

/// Overwrite samples `0..a` (in boundary-first order) with the convergent
/// form scaled to agree with sample `a`.
fn match_tail(
    wave: &mut [WaveSample],
    convergent: &SolutionForm,
    energy: f64,
    idx: &dyn Fn(usize) -> usize,
    a: usize,
) {
    let anchor = wave[idx(a)];
    let base: Point = convergent.at(energy, anchor.x);
    if base.value == 0.0 || !base.value.is_finite() {
        return;
    }
    let r = anchor.phi / base.value;
    for i in 0..a {
        let w = &mut wave[idx(i)];
        let f = convergent.at(energy, w.x);
        w.phi = r * f.value;
        w.dphi = r * f.slope;
    }
}

/// Trapezoid-rule `integral of phi^2` over the (possibly non-uniform) samples.
pub fn trapezoid_norm(wave: &[WaveSample]) -> f64 {
    wave.windows(2)
        .map(|w| 0.5 * (w[1].x - w[0].x) * (w[0].phi * w[0].phi + w[1].phi * w[1].phi))
        .sum()
}

/// Sign changes between consecutive samples, skipping samples below
/// `1e-6` of the peak so that wall values and deep tails at round-off level
/// do not count.
pub fn count_nodes(wave: &[WaveSample]) -> usize {
    let floor = 1e-6 * wave.iter().map(|w| w.phi.abs()).fold(0.0, f64::max);
    let mut last = 0.0f64;
    let mut nodes = 0;
    for w in wave {
        if w.phi.abs() <= floor {
            continue;
        }
        if last != 0.0 && (w.phi > 0.0) != (last > 0.0) {
            nodes += 1;
        }
        last = w.phi;
    }
    nodes
}

/// `W(Rc, C)` and `W(Rc, S)` at every integrated point to the right of `x0`.
pub fn wronskian_profile(pair: &CanonicalPair, right: &Boundary) -> Vec<(f64, f64, f64)> {
    let e = pair.energy();
    pair.right_half()
        .iter()
        .map(|s: &CanonicalSample| {
            let (wc, ws) = right.row(e, s.x, s.c, s.s);
            (s.x, wc, ws)
        })
        .collect()
}
