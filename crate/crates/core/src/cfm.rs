//! Canonical-function characteristic functions and the saturation profiler.
//!
//! In the ratio formulation the eigenvalues are the zeros of
//! `F(eps) = l+(eps) - l-(eps)` with `l± = lim C(x)/S(x)` at either end. The
//! ratios tend to `b3/b3'` and `b1/b1'`, the ratios of the divergent
//! coefficients of `C` and `S`, which the Wronskian route gives directly as
//! `W(C, Rc)/W(S, Rc)`.

use crate::asymptotic::Boundary;
use crate::characteristic::{ratio, CharacteristicFunction, Eval};
use crate::error::{Error, Result};
use crate::integrate::{canonical_pair, CanonicalPair, CanonicalSample};
use crate::problem::{Parity, Problem};
use crate::wm::half_grid;

/// `(l-, l+)` from values `C/S`, or from derivatives `C'/S'`.
pub fn cfm_l_ratios(pair: &CanonicalPair, use_derivatives: bool) -> (Eval, Eval) {
    let r = |s: CanonicalSample| {
        if use_derivatives {
            ratio(s.c.slope, s.s.slope)
        } else {
            ratio(s.c.value, s.s.value)
        }
    };
    (r(pair.left_end()), r(pair.right_end()))
}

/// `eps -> l+ - l-`. Poles of either ratio come back as [`Eval::Pole`].
pub fn cfm_characteristic(problem: &Problem) -> CharacteristicFunction {
    let problem = problem.clone();
    CharacteristicFunction::new("cfm", move |e| {
        let pair = canonical_pair(&problem.potential, e, &problem.grid);
        if pair.is_truncated() {
            return Eval::Overflow;
        }
        match cfm_l_ratios(&pair, false) {
            (Eval::Value(lm), Eval::Value(lp)) => Eval::from_f64(lp - lm),
            _ => Eval::Pole,
        }
    })
}

/// Parity split with the anchor at the centre of symmetry: even states are
/// zeros of `C(xR)/S(xR)`, odd states zeros of `S(xR)/C(xR)`.
///
/// With `x0 = 0` the ratio form `l+ - l-` reduces to `2 C(xR)/S(xR)`, which
/// has the odd levels as poles rather than zeros; the inverted ratio
/// recovers them.
pub fn cfm_characteristic_symmetric(problem: &Problem, parity: Parity) -> Result<CharacteristicFunction> {
    let grid = half_grid(problem)?;
    let potential = problem.potential.clone();
    let label = match parity {
        Parity::Even => "cfm-even",
        Parity::Odd => "cfm-odd",
    };
    Ok(CharacteristicFunction::new(label, move |e| {
        let pair = canonical_pair(&potential, e, &grid);
        if pair.is_truncated() {
            return Eval::Overflow;
        }
        let r = pair.right_end();
        match parity {
            Parity::Even => ratio(r.c.value, r.s.value),
            Parity::Odd => ratio(r.s.value, r.c.value),
        }
    }))
}

/// `C(xL) S(xR) - C(xR) S(xL)` from the two endpoint quadruples.
pub fn dirichlet_determinant_of(pair: &CanonicalPair) -> f64 {
    let l = pair.left_end();
    let r = pair.right_end();
    l.c.value * r.s.value - r.c.value * l.s.value
}

/// Pole-free characteristic for `phi(xL) = phi(xR) = 0`.
pub fn dirichlet_determinant(problem: &Problem) -> Result<CharacteristicFunction> {
    if !(problem.asymptotics.left.is_dirichlet() && problem.asymptotics.right.is_dirichlet()) {
        return Err(Error::NotDirichlet);
    }
    let problem = problem.clone();
    Ok(CharacteristicFunction::new("dirichlet", move |e| {
        let pair = canonical_pair(&problem.potential, e, &problem.grid);
        if pair.is_truncated() {
            return Eval::Overflow;
        }
        Eval::from_f64(dirichlet_determinant_of(&pair))
    }))
}

/// Closed-form `F(eps)` for the unit box with walls at 0 and 1:
/// `-k sin(k) / (sin(k x0) sin(k (1 - x0)))`, `k = sqrt(2 eps)`.
pub fn box_characteristic_analytic(energy: f64, x0: f64) -> Result<Eval> {
    if !(0.0 < x0 && x0 < 1.0) {
        return Err(Error::InvalidArgument(format!("anchor must lie in (0, 1), got {x0}")));
    }
    if !(energy > 0.0) {
        return Err(Error::InvalidArgument(format!("energy must be positive, got {energy}")));
    }
    let k = (2.0 * energy).sqrt();
    let den = (k * x0).sin() * (k * (1.0 - x0)).sin();
    Ok(ratio(-k * k.sin(), den))
}

/// The box closed form as a characteristic function; energies at or below
/// zero evaluate as poles.
pub fn box_characteristic(x0: f64) -> Result<CharacteristicFunction> {
    box_characteristic_analytic(1.0, x0)?;
    Ok(CharacteristicFunction::new(format!("box-analytic(x0={x0})"), move |e| {
        box_characteristic_analytic(e, x0).unwrap_or(Eval::Pole)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationRow {
    pub x: f64,
    pub c: f64,
    pub s: f64,
    /// `W(Rc, C)(x)`
    pub w_c: f64,
    /// `W(Rc, S)(x)`
    pub w_s: f64,
    /// `C(x)/S(x)`; `None` at a pole.
    pub cfm: Option<f64>,
    /// `W(C, Rc)(x)/W(S, Rc)(x)`; `None` at a pole.
    pub wm: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SaturationProfile {
    pub energy: f64,
    pub rows: Vec<SaturationRow>,
    /// Value of the Wronskian ratio at `xR`.
    pub limit: f64,
    pub saturation_cfm: Option<f64>,
    pub saturation_wm: Option<f64>,
}

impl SaturationProfile {
    pub fn final_cfm(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.cfm)
    }

    pub fn final_wm(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.wm)
    }
}

/// Smallest `x` beyond which every non-pole value stays within
/// `tol * max(1, |value at xR|)` of the value at `xR`.
pub fn saturation_point(xs: &[f64], values: &[Option<f64>], tol: f64) -> Option<f64> {
    let last = (*values.last()?)?;
    let band = tol * last.abs().max(1.0);
    let mut first = xs.len() - 1;
    for i in (0..xs.len()).rev() {
        match values[i] {
            Some(v) if (v - last).abs() >= band => break,
            _ => first = i,
        }
    }
    Some(xs[first])
}

/// Tabulate `C/S` and `W(C,Rc)/W(S,Rc)` from `x0` to `xR` and locate where
/// each one settles. Saturation is measured against the value at `xR`.
pub fn saturation_profile(problem: &Problem, energy: f64, tol: f64) -> Result<SaturationProfile> {
    let convergent = match &problem.asymptotics.right {
        Boundary::Asymptotic { convergent, .. } => convergent.clone(),
        Boundary::Dirichlet => {
            return Err(Error::InvalidProblem(
                "saturation needs an asymptotic right boundary".into(),
            ))
        }
    };
    let pair = canonical_pair(&problem.potential, energy, &problem.grid);
    if pair.is_truncated() {
        return Err(Error::Overflow { x: pair.right_end().x, energy });
    }
    let rows: Vec<SaturationRow> = pair
        .right_half()
        .iter()
        .map(|s| {
            let rc = convergent.at(energy, s.x);
            let w_c = rc.wronskian(&s.c);
            let w_s = rc.wronskian(&s.s);
            SaturationRow {
                x: s.x,
                c: s.c.value,
                s: s.s.value,
                w_c,
                w_s,
                cfm: ratio(s.c.value, s.s.value).value(),
                wm: ratio(w_c, w_s).value(),
            }
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
    let cfm: Vec<Option<f64>> = rows.iter().map(|r| r.cfm).collect();
    let wm: Vec<Option<f64>> = rows.iter().map(|r| r.wm).collect();
    Ok(SaturationProfile {
        energy,
        limit: rows.last().and_then(|r| r.wm).unwrap_or(f64::NAN),
        saturation_cfm: saturation_point(&xs, &cfm, tol),
        saturation_wm: saturation_point(&xs, &wm, tol),
        rows,
    })
}
