//! Bracketing, refinement and the eigenvalue driver.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cfm::{cfm_characteristic, cfm_characteristic_symmetric, dirichlet_determinant};
use crate::characteristic::{CharacteristicFunction, Eval};
use crate::error::{Error, Result};
use crate::integrate::canonical_pair;
use crate::problem::{EigenResult, Parity, Problem};
use crate::wm::{
    assemble, endpoint_rows, wm_characteristic, wm_characteristic_symmetric, wm_eigenfunction, Coefficients,
};

/// Magnitude growth (relative to the bracket entry) that marks a pole.
pub const POLE_GROWTH: f64 = 1e3;

/// Sub-intervals used to re-probe a gap of flagged evaluations.
const GAP_SUBDIVISIONS: usize = 10;

/// Energies with a verified sign change, `f_lo * f_hi < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    /// `|F|` grew toward the sign change from both sides, as it does at a
    /// pole.
    pub pole_suspect: bool,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidArgument(format!("bracket [{lo}, {hi}] is empty")));
        }
        if !(f_lo * f_hi < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "no sign change on [{lo}, {hi}]: F = {f_lo}, {f_hi}"
            )));
        }
        Ok(Bracket { lo, hi, f_lo, f_hi, pole_suspect: false })
    }

    fn entry_magnitude(&self) -> f64 {
        self.f_lo.abs().max(self.f_hi.abs())
    }
}

/// Result of a probe scan.
#[derive(Debug, Clone, Default)]
pub struct Scan {
    pub brackets: Vec<Bracket>,
    /// Sign changes classified as poles.
    pub rejected: Vec<Bracket>,
    /// Number of probes that came back flagged.
    pub flagged: usize,
    pub diagnostic: Option<String>,
}

/// `n_probe` intervals (so `n_probe + 1` evaluations) across `range`.
pub fn scan_brackets(f: &CharacteristicFunction, range: (f64, f64), n_probe: usize) -> Scan {
    let mut scan = Scan::default();
    if n_probe < 2 || !(range.0 < range.1) {
        scan.diagnostic = Some(format!("nothing to scan: range {range:?}, {n_probe} probes"));
        return scan;
    }
    let probes = probe(f, range, n_probe);
    scan.flagged = probes.iter().filter(|p| p.1.is_flagged()).count();
    if scan.flagged == probes.len() {
        scan.diagnostic = Some(format!("all {} evaluations were flagged", probes.len()));
        return scan;
    }
    collect_sign_changes(f, &probes, 0, &mut scan.brackets);

    let classified: Vec<(Bracket, bool)> = scan
        .brackets
        .par_iter()
        .map(|b| {
            if b.pole_suspect {
                (*b, closes_on_pole(f, b))
            } else {
                (*b, false)
            }
        })
        .collect();
    scan.brackets.clear();
    for (b, pole) in classified {
        if pole {
            scan.rejected.push(b);
        } else {
            scan.brackets.push(b);
        }
    }
    scan
}

fn probe(f: &CharacteristicFunction, (lo, hi): (f64, f64), n: usize) -> Vec<(f64, Eval)> {
    let step = (hi - lo) / n as f64;
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let e = if i == n { hi } else { lo + i as f64 * step };
            let v = f.eval(e);
            // An exact zero has no sign; look just inside the range instead.
            if v == Eval::Value(0.0) {
                let nudge = if i == n { -1e-7 * step } else { 1e-7 * step };
                return (e + nudge, f.eval(e + nudge));
            }
            (e, v)
        })
        .collect()
}

fn collect_sign_changes(f: &CharacteristicFunction, probes: &[(f64, Eval)], depth: usize, out: &mut Vec<Bracket>) {
    let finite: Vec<(usize, f64, f64)> = probes
        .iter()
        .enumerate()
        .filter_map(|(i, (e, v))| v.value().map(|v| (i, *e, v)))
        .collect();
    for w in 0..finite.len().saturating_sub(1) {
        let (i, e0, f0) = finite[w];
        let (j, e1, f1) = finite[w + 1];
        if f0 * f1 >= 0.0 {
            continue;
        }
        if j > i + 1 {
            // Flagged probes in between: re-probe the gap more finely.
            if depth < 3 {
                let sub = probe(f, (e0, e1), GAP_SUBDIVISIONS);
                collect_sign_changes(f, &sub, depth + 1, out);
            }
            continue;
        }
        let before = (w > 0 && finite[w - 1].0 + 1 == i).then(|| finite[w - 1].2.abs());
        let after = (w + 2 < finite.len() && finite[w + 2].0 == j + 1).then(|| finite[w + 2].2.abs());
        let grows = |outer: Option<f64>, inner: f64| outer.is_some_and(|o| inner > o);
        let suspect = grows(before, f0.abs()) && grows(after, f1.abs());
        if let Ok(mut b) = Bracket::new(e0, e1, f0, f1) {
            b.pole_suspect = suspect;
            out.push(b);
        }
    }
}

/// Bisect a suspect bracket down to round-off and compare `|F|` at the end
/// with its entry magnitude.
fn closes_on_pole(f: &CharacteristicFunction, b: &Bracket) -> bool {
    match refine(f, b, 0.0, 200) {
        Ok(r) => r.is_pole(b),
        Err(Error::Pole { .. }) => true,
        Err(_) => false,
    }
}

/// Final state of a refinement.
#[derive(Debug, Clone, Copy)]
pub struct Refined {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub iterations: usize,
}

impl Refined {
    fn is_pole(&self, entry: &Bracket) -> bool {
        self.f_lo.abs().min(self.f_hi.abs()) > POLE_GROWTH * entry.entry_magnitude()
    }
}

/// Secant steps kept inside the bracket, bisection otherwise.
pub fn refine_root(f: &CharacteristicFunction, bracket: &Bracket, tol_e: f64, max_iter: usize) -> Result<f64> {
    refine(f, bracket, tol_e, max_iter).map(|r| r.root)
}

pub fn refine(f: &CharacteristicFunction, bracket: &Bracket, tol_e: f64, max_iter: usize) -> Result<Refined> {
    let (mut a, mut fa, mut b, mut fb) = (bracket.lo, bracket.f_lo, bracket.hi, bracket.f_hi);
    let scale = bracket.entry_magnitude();
    let (mut x_prev, mut f_prev, mut x_cur, mut f_cur) = (a, fa, b, fb);
    let mut widths = [b - a, b - a];
    let done = |a: f64, b: f64, fa: f64, fb: f64, it: usize, root: f64| Refined {
        root,
        lo: a,
        hi: b,
        f_lo: fa,
        f_hi: fb,
        iterations: it,
    };

    for it in 0..max_iter {
        let mid = 0.5 * (a + b);
        if b - a <= tol_e || mid <= a || mid >= b {
            return Ok(done(a, b, fa, fb, it, mid));
        }
        let stalled = (b - a) > 0.5 * widths[0];
        let secant = if f_cur != f_prev {
            x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev)
        } else {
            f64::NAN
        };
        let x = if !stalled && secant > a && secant < b { secant } else { mid };
        let fx = match f.eval(x) {
            Eval::Value(v) => v,
            _ if x != mid => match f.eval(mid) {
                Eval::Value(v) => {
                    // Fall back to the midpoint.
                    step(&mut a, &mut fa, &mut b, &mut fb, mid, v);
                    x_prev = x_cur;
                    f_prev = f_cur;
                    x_cur = mid;
                    f_cur = v;
                    widths = [widths[1], b - a];
                    continue;
                }
                _ => return Err(Error::Pole { lo: a, hi: b }),
            },
            _ => return Err(Error::Pole { lo: a, hi: b }),
        };
        if fx == 0.0 || fx.abs() < 1e-12 * scale {
            return Ok(done(a, b, fa, fb, it + 1, x));
        }
        step(&mut a, &mut fa, &mut b, &mut fb, x, fx);
        x_prev = x_cur;
        f_prev = f_cur;
        x_cur = x;
        f_cur = fx;
        widths = [widths[1], b - a];
    }
    Err(Error::MaxIterations { iterations: max_iter, lo: a, hi: b })
}

fn step(a: &mut f64, fa: &mut f64, b: &mut f64, fb: &mut f64, x: f64, fx: f64) {
    if (fx > 0.0) == (*fa > 0.0) {
        *a = x;
        *fa = fx;
    } else {
        *b = x;
        *fb = fx;
    }
}

/// Which characteristic function drives the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Wm,
    WmEven,
    WmOdd,
    Cfm,
    Dirichlet,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Wm => "wm",
            Method::WmEven => "wm-even",
            Method::WmOdd => "wm-odd",
            Method::Cfm => "cfm",
            Method::Dirichlet => "dirichlet",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "wm" => Method::Wm,
            "wm-even" => Method::WmEven,
            "wm-odd" => Method::WmOdd,
            "cfm" => Method::Cfm,
            "dirichlet" => Method::Dirichlet,
            other => return Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Defaults to the problem's energy range.
    pub range: Option<(f64, f64)>,
    /// Defaults to [`default_probes`].
    pub n_probe: Option<usize>,
    pub tol_e: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { range: None, n_probe: None, tol_e: 1e-10, max_iter: 200 }
    }
}

/// 200 probes per 10 units of energy, at least 200.
pub fn default_probes((lo, hi): (f64, f64)) -> usize {
    ((20.0 * (hi - lo)).ceil() as usize).max(200)
}

#[derive(Debug, Clone, Default)]
pub struct EigenReport {
    /// Ascending in energy, indexed from zero.
    pub results: Vec<EigenResult>,
    /// Brackets whose refinement or assembly failed.
    pub failures: Vec<(Bracket, Error)>,
    /// Sign changes rejected as poles.
    pub poles: Vec<Bracket>,
    pub diagnostics: Vec<String>,
}

impl EigenReport {
    pub fn energies(&self) -> Vec<f64> {
        self.results.iter().map(|r| r.energy).collect()
    }
}

/// The characteristic functions a method scans, each with the coefficient
/// rule used to build eigenfunctions at its roots.
pub(crate) fn characteristics(problem: &Problem, method: Method) -> Result<Vec<(CharacteristicFunction, Coefficients)>> {
    Ok(match method {
        Method::Wm => vec![(wm_characteristic(problem), Coefficients::Nullspace)],
        Method::WmEven => vec![(wm_characteristic_symmetric(problem, Parity::Even)?, Coefficients::Even)],
        Method::WmOdd => vec![(wm_characteristic_symmetric(problem, Parity::Odd)?, Coefficients::Odd)],
        Method::Cfm if problem.is_symmetric() => vec![
            (cfm_characteristic_symmetric(problem, Parity::Even)?, Coefficients::Even),
            (cfm_characteristic_symmetric(problem, Parity::Odd)?, Coefficients::Odd),
        ],
        Method::Cfm => vec![(cfm_characteristic(problem), Coefficients::Nullspace)],
        Method::Dirichlet => vec![(dirichlet_determinant(problem)?, Coefficients::Nullspace)],
    })
}

/// Scan, refine and assemble every eigenstate the method finds in range.
pub fn find_eigenvalues(problem: &Problem, method: Method, opts: &SolveOptions) -> Result<EigenReport> {
    let range = opts.range.unwrap_or(problem.energy_range);
    if !(range.0 < range.1) {
        return Err(Error::InvalidArgument(format!("empty range {range:?}")));
    }
    let n_probe = opts.n_probe.unwrap_or_else(|| default_probes(range));
    let mut report = EigenReport::default();

    for (f, rule) in characteristics(problem, method)? {
        let scan = scan_brackets(&f, range, n_probe);
        if let Some(d) = scan.diagnostic {
            report.diagnostics.push(format!("{}: {d}", f.label()));
        }
        report.poles.extend(scan.rejected);
        let outcomes: Vec<(Bracket, Result<Option<EigenResult>>)> = scan
            .brackets
            .par_iter()
            .map(|b| (*b, solve_bracket(problem, method, &f, rule, b, opts)))
            .collect();
        for (b, out) in outcomes {
            match out {
                Ok(Some(r)) => report.results.push(r),
                Ok(None) => report.poles.push(b),
                Err(e) => report.failures.push((b, e)),
            }
        }
    }

    report.results.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    for (i, r) in report.results.iter_mut().enumerate() {
        r.index = i;
    }
    Ok(report)
}

fn solve_bracket(
    problem: &Problem,
    method: Method,
    f: &CharacteristicFunction,
    rule: Coefficients,
    b: &Bracket,
    opts: &SolveOptions,
) -> Result<Option<EigenResult>> {
    let refined = refine(f, b, opts.tol_e, opts.max_iter)?;
    if refined.is_pole(b) {
        return Ok(None);
    }
    let root = refined.root;
    let residual = f.eval(root).value().map_or(f64::INFINITY, f64::abs);
    if method == Method::Wm {
        let mut r = wm_eigenfunction(problem, root)?;
        r.residual = residual;
        return Ok(Some(r));
    }
    let pair = canonical_pair(&problem.potential, root, &problem.grid);
    if pair.is_truncated() {
        return Err(Error::Overflow { x: pair.right_end().x, energy: root });
    }
    // Ratio and Dirichlet routes satisfy phi = 0 at the ends, so the null
    // vector comes from the boundary values themselves.
    let rows = match method {
        Method::WmEven | Method::WmOdd => endpoint_rows(&pair, &problem.asymptotics),
        _ => {
            let (l, r) = (pair.left_end(), pair.right_end());
            ((l.c.value, l.s.value), (r.c.value, r.s.value))
        }
    };
    assemble(problem, &pair, rows, rule, residual).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfm::box_characteristic;
    use std::f64::consts::PI;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;

    fn linear(slope: f64, root: f64) -> CharacteristicFunction {
        CharacteristicFunction::new("lin", move |e| Eval::Value(slope * (e - root)))
    }

    #[test]
    fn bracket_requires_sign_change() {
        assert!(Bracket::new(0.0, 1.0, 1.0, 2.0).is_err());
        assert!(Bracket::new(1.0, 0.0, -1.0, 2.0).is_err());
        assert!(Bracket::new(0.0, 1.0, -1.0, 2.0).is_ok());
    }

    #[test]
    fn linear_converges_immediately() {
        let f = linear(3.0, 0.3719);
        let b = Bracket::new(0.0, 1.0, -3.0 * 0.3719, 3.0 * (1.0 - 0.3719)).unwrap();
        let r = refine(&f, &b, 1e-10, 200).unwrap();
        assert!(r.iterations <= 3);
        assert!((r.root - 0.3719).abs() < 1e-12);
    }

    #[test]
    fn refinement_stays_inside_bracket() {
        let calls = Arc::new(AtomicUsize::new(0));
        let c = calls.clone();
        let f = CharacteristicFunction::new("cubic", move |e: f64| {
            c.fetch_add(1, Ordering::Relaxed);
            assert!((0.5..=2.0).contains(&e), "evaluated outside bracket at {e}");
            Eval::Value(e.powi(3) - 2.0)
        });
        let b = Bracket::new(0.5, 2.0, 0.125 - 2.0, 6.0).unwrap();
        let root = refine_root(&f, &b, 1e-13, 200).unwrap();
        assert!((root - 2f64.cbrt()).abs() < 1e-12);
        assert!(calls.load(Ordering::Relaxed) < 60);
    }

    #[test]
    fn max_iterations_reports_bracket() {
        let f = linear(1.0, 0.123456789);
        let b = Bracket::new(0.0, 1.0, -0.123456789, 0.876543211).unwrap();
        let g = CharacteristicFunction::new("sq", move |e: f64| {
            // stays far from zero relative to scale until very close
            let v = f.eval(e).value().unwrap();
            Eval::Value(v.signum() * v.abs().sqrt())
        });
        match refine(&g, &b, 1e-15, 3) {
            Err(Error::MaxIterations { iterations: 3, lo, hi }) => assert!(lo < hi),
            other => panic!("expected MaxIterations, got {other:?}"),
        }
    }

    #[test]
    fn monotone_function_has_no_brackets() {
        let scan = scan_brackets(&linear(1.0, -5.0), (0.0, 10.0), 100);
        assert!(scan.brackets.is_empty());
        assert!(scan.rejected.is_empty());
    }

    #[test]
    fn all_flagged_gives_diagnostic() {
        let f = CharacteristicFunction::new("poles", |_| Eval::Pole);
        let scan = scan_brackets(&f, (0.0, 1.0), 10);
        assert!(scan.brackets.is_empty());
        assert_eq!(scan.flagged, 11);
        assert!(scan.diagnostic.is_some());
    }

    #[test]
    fn box_closed_form_one_root_below_ten() {
        let f = box_characteristic(0.25).unwrap();
        let scan = scan_brackets(&f, (0.0, 10.0), 400);
        assert_eq!(scan.brackets.len(), 1, "{:?}", scan.brackets);
        let b = scan.brackets[0];
        assert!(b.lo < PI * PI / 2.0 && PI * PI / 2.0 < b.hi);
        // the pole at k = 4 pi / 3 is rejected
        assert!(!scan.rejected.is_empty());
        let pole = 0.5 * (4.0 * PI / 3.0f64).powi(2);
        assert!(scan.rejected.iter().any(|r| r.lo <= pole && pole <= r.hi));
        let root = refine_root(&f, &b, 1e-10, 200).unwrap();
        assert!((root - PI * PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn gap_of_flagged_probes_is_reprobed() {
        // Flag a window around the root; the scanner must look inside it.
        let f = CharacteristicFunction::new("gappy", |e: f64| {
            let on_coarse_lattice = ((e * 100.0).round() - e * 100.0).abs() < 1e-6;
            if (0.45..0.56).contains(&e) && on_coarse_lattice {
                Eval::Pole
            } else {
                Eval::Value(e - 0.503)
            }
        });
        let scan = scan_brackets(&f, (0.0, 1.0), 100);
        assert_eq!(scan.brackets.len(), 1);
        assert!(scan.brackets[0].lo <= 0.503 && 0.503 <= scan.brackets[0].hi);
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Wm, Method::WmEven, Method::WmOdd, Method::Cfm, Method::Dirichlet] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("numerov".parse::<Method>().is_err());
    }
}
