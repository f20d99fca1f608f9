//! The four subcommands. Each returns the CSV text; `main` does the I/O.

use std::path::PathBuf;

use wronski::potentials;
use wronski::roots::default_probes;
use wronski::{
    box_characteristic, cfm_characteristic, cfm_characteristic_symmetric, dirichlet_determinant, fd_box_recurrence_eigenvalues,
    find_eigenvalues, saturation_profile, shooting_reference, wm_characteristic, wm_characteristic_symmetric,
    CharacteristicFunction, Eval, Parity, Problem, SolveOptions,
};

use crate::config::{Config, PotentialKind};
use crate::table::{num, Table};
use crate::CliError;

pub struct Output {
    pub csv: String,
    /// An extra file requested by the run.
    pub side: Option<(PathBuf, String)>,
    /// Set when the table was produced but the run still counts as failed.
    pub failure: Option<String>,
}

impl Output {
    fn table(t: Table) -> Self {
        Output { csv: t.into_string(), side: None, failure: None }
    }
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

/// Closed-form levels covering the energies of interest, if the potential
/// has them.
fn exact_levels(cfg: &Config, top: f64) -> Option<Vec<f64>> {
    match cfg.potential {
        PotentialKind::Box => {
            let n = ((2.0 * top.max(0.0)).sqrt() / std::f64::consts::PI).ceil() as usize + 1;
            Some(potentials::infinite_well_exact(n))
        }
        PotentialKind::PoschlTeller => potentials::poschl_teller_exact(cfg.v0?).ok(),
        // phi(0) = 0 keeps the odd states of the full line.
        PotentialKind::Radial if cfg.l == 0 => {
            potentials::poschl_teller_exact(cfg.v0?).ok().map(|v| v.into_iter().skip(1).step_by(2).collect())
        }
        _ => None,
    }
}

fn nearest(levels: &[f64], e: f64) -> Option<f64> {
    levels.iter().copied().min_by(|a, b| (a - e).abs().total_cmp(&(b - e).abs()))
}

fn options(cfg: &Config, problem: &Problem) -> SolveOptions {
    SolveOptions {
        range: Some(problem.energy_range),
        n_probe: cfg.probes,
        tol_e: cfg.tol.unwrap_or(1e-10),
        ..SolveOptions::default()
    }
}

pub fn solve(cfg: &Config) -> Result<Output, CliError> {
    cfg.anchor()?;
    let problem = cfg.problem()?;
    let mut t = Table::new(
        &cfg.describe("solve"),
        &header(&["index", "parity", "energy", "residual", "nodes", "exact_error"]),
    );
    if problem.energy_range.0 >= problem.energy_range.1 {
        return Ok(Output { failure: Some("empty energy range".into()), ..Output::table(t) });
    }
    let report = find_eigenvalues(&problem, cfg.method, &options(cfg, &problem)).map_err(CliError::core)?;
    let exact = exact_levels(cfg, problem.energy_range.1);
    for r in &report.results {
        let parity = match r.parity {
            Some(p) => p.as_str().to_string(),
            None if problem.is_symmetric() => if r.node_count % 2 == 0 { "even" } else { "odd" }.to_string(),
            None => String::new(),
        };
        let err = exact.as_deref().and_then(|x| nearest(x, r.energy)).map(|x| (r.energy - x).abs());
        t.row(&[
            r.index.to_string(),
            parity,
            num(Some(r.energy)),
            num(Some(r.residual)),
            r.node_count.to_string(),
            num(err),
        ]);
    }
    let mut failure = None;
    if !report.failures.is_empty() {
        let msgs: Vec<String> = report.failures.iter().map(|(b, e)| format!("[{}, {}]: {e}", b.lo, b.hi)).collect();
        failure = Some(format!("refinement failed on {} bracket(s): {}", msgs.len(), msgs.join("; ")));
    } else if report.results.is_empty() {
        let mut msg = format!("no eigenvalues in {:?}", problem.energy_range);
        if !report.diagnostics.is_empty() {
            msg.push_str(&format!(" ({})", report.diagnostics.join("; ")));
        }
        failure = Some(msg);
    }

    let side = cfg.wavefunctions.as_ref().filter(|_| !report.results.is_empty()).map(|path| {
        let mut cols = vec!["x".to_string()];
        cols.extend(report.results.iter().map(|r| format!("phi_{}", r.index)));
        let mut w = Table::new(&cfg.describe("solve"), &cols);
        let n = report.results[0].wavefunction.len();
        for i in 0..n {
            let mut row = vec![num(Some(report.results[0].wavefunction[i].x))];
            row.extend(report.results.iter().map(|r| num(r.wavefunction.get(i).map(|s| s.phi))));
            w.row(&row);
        }
        (path.clone(), w.into_string())
    });
    Ok(Output { csv: t.into_string(), side, failure })
}

fn scan_columns(cfg: &Config, problem: &Problem) -> Result<Vec<(String, CharacteristicFunction)>, CliError> {
    let mut cols = Vec::new();
    if cfg.potential == PotentialKind::Box {
        for &x0 in &cfg.x0 {
            cols.push((format!("F_box_analytic[x0={x0}]"), box_characteristic(x0).map_err(CliError::core)?));
        }
        cols.push(("F_dirichlet".into(), dirichlet_determinant(problem).map_err(CliError::core)?));
        cols.push(("F_cfm".into(), cfm_characteristic(problem)));
        return Ok(cols);
    }
    cfg.anchor()?;
    if problem.is_symmetric() {
        let sym = |p| -> Result<_, CliError> {
            Ok((
                wm_characteristic_symmetric(problem, p).map_err(CliError::core)?,
                cfm_characteristic_symmetric(problem, p).map_err(CliError::core)?,
            ))
        };
        let (we, ce) = sym(Parity::Even)?;
        let (wo, co) = sym(Parity::Odd)?;
        cols.push(("F_wm_even".into(), we));
        cols.push(("F_wm_odd".into(), wo));
        cols.push(("F_cfm_even".into(), ce));
        cols.push(("F_cfm_odd".into(), co));
    } else {
        cols.push(("F_wm".into(), wm_characteristic(problem)));
    }
    cols.push(("F_cfm".into(), cfm_characteristic(problem)));
    Ok(cols)
}

pub fn scan(cfg: &Config) -> Result<Output, CliError> {
    let problem = cfg.problem()?;
    let cols = scan_columns(cfg, &problem)?;
    let mut names = vec!["epsilon".to_string()];
    names.extend(cols.iter().map(|c| c.0.clone()));
    names.push("flags".into());
    let mut t = Table::new(&cfg.describe("scan"), &names);

    let (lo, hi) = cfg.range.map_or(problem.energy_range, |r| (r.0, r.1));
    if lo < hi {
        let n = cfg.probes.unwrap_or_else(|| default_probes((lo, hi)));
        let step = (hi - lo) / n as f64;
        for i in 0..=n {
            let e = if i == n { hi } else { lo + i as f64 * step };
            let mut row = vec![num(Some(e))];
            let mut flags = Vec::new();
            for (name, f) in &cols {
                let v = f.eval(e);
                match v {
                    Eval::Value(x) => row.push(num(Some(x))),
                    Eval::Pole => {
                        row.push(String::new());
                        flags.push(format!("{name}=pole"));
                    }
                    Eval::Overflow => {
                        row.push(String::new());
                        flags.push(format!("{name}=overflow"));
                    }
                }
            }
            row.push(flags.join(";"));
            t.row(&row);
        }
    }
    Ok(Output::table(t))
}

pub fn saturate(cfg: &Config) -> Result<Output, CliError> {
    cfg.anchor()?;
    let energy = cfg.energy.ok_or_else(|| crate::config::ConfigError::field("energy", "required by saturate"))?;
    let problem = cfg.problem()?;
    let prof = saturation_profile(&problem, energy, cfg.tol.unwrap_or(1e-6)).map_err(CliError::core)?;
    let mut preamble = cfg.describe("saturate");
    preamble.push(("energy".into(), energy.to_string()));
    let mut t = Table::new(
        &preamble,
        &header(&["x", "C", "S", "W_Rc_C", "W_Rc_S", "ratio_cfm", "ratio_wm"]),
    );
    for r in &prof.rows {
        t.row(&[num(Some(r.x)), num(Some(r.c)), num(Some(r.s)), num(Some(r.w_c)), num(Some(r.w_s)), num(r.cfm), num(r.wm)]);
    }
    let show = |v: Option<f64>| v.map_or("none".to_string(), |x| format!("{x:.16e}"));
    t.footer(&format!(
        "saturation_x wm = {}, cfm = {}; final ratio wm = {}, cfm = {}",
        show(prof.saturation_wm),
        show(prof.saturation_cfm),
        show(prof.final_wm()),
        show(prof.final_cfm()),
    ));
    Ok(Output::table(t))
}

/// Observed order from errors at successive steps.
fn orders(hs: &[f64], errs: &[Option<f64>]) -> Vec<Option<f64>> {
    (1..hs.len())
        .map(|i| match (errs[i - 1], errs[i]) {
            (Some(a), Some(b)) if a != 0.0 && b != 0.0 => Some((a.abs() / b.abs()).ln() / (hs[i - 1] / hs[i]).ln()),
            _ => None,
        })
        .collect()
}

pub fn oracle(cfg: &Config) -> Result<Output, CliError> {
    let x0 = cfg.anchor()?;
    let mut t = Table::new(
        &cfg.describe("oracle"),
        &header(&[
            "h",
            "level",
            "exact",
            "engine",
            "shooting",
            "fd",
            "engine_error",
            "engine_minus_shooting",
            "fd_error",
        ]),
    );
    let mut failures = Vec::new();
    let mut engine_err = vec![vec![None; cfg.hs.len()]; cfg.levels];
    let mut fd_err = vec![vec![None; cfg.hs.len()]; cfg.levels];
    for (k, &h) in cfg.hs.iter().enumerate() {
        let problem = cfg.problem_at(x0, h)?;
        let report = find_eigenvalues(&problem, cfg.method, &options(cfg, &problem)).map_err(CliError::core)?;
        for (b, e) in &report.failures {
            failures.push(format!("h = {h}: [{}, {}]: {e}", b.lo, b.hi));
        }
        let engine: Vec<f64> = report.energies().into_iter().take(cfg.levels).collect();
        if engine.len() < cfg.levels {
            failures.push(format!("h = {h}: {} of {} levels found", engine.len(), cfg.levels));
        }
        let shoot = shooting_reference(&problem, problem.energy_range, 1e-12).map_err(CliError::core)?;
        let exact = exact_levels(cfg, problem.energy_range.1);
        let fd = if cfg.potential == PotentialKind::Box {
            let n_points = (1.0 / h).round() as usize;
            fd_box_recurrence_eigenvalues(n_points, cfg.levels).ok()
        } else {
            None
        };
        for (i, &e) in engine.iter().enumerate() {
            let ex = exact.as_deref().and_then(|x| nearest(x, e));
            let sh = nearest(&shoot, e);
            let f = fd.as_ref().and_then(|v| v.get(i).copied());
            let ee = ex.map(|x| e - x);
            let fe = f.zip(ex).map(|(f, x)| f - x);
            engine_err[i][k] = ee;
            fd_err[i][k] = fe;
            t.row(&[
                num(Some(h)),
                i.to_string(),
                num(ex),
                num(Some(e)),
                num(sh),
                num(f),
                num(ee),
                num(sh.map(|s| e - s)),
                num(fe),
            ]);
        }
    }
    for (label, errs) in [("engine", &engine_err), ("fd", &fd_err)] {
        for (i, row) in errs.iter().enumerate() {
            let q = orders(&cfg.hs, row);
            if q.iter().any(Option::is_some) {
                let cells: Vec<String> = q.iter().map(|o| o.map_or("none".into(), |x| format!("{x:.4}"))).collect();
                t.footer(&format!("order {label} level {i}: {}", cells.join(",")));
            }
        }
    }
    let failure = (!failures.is_empty()).then(|| failures.join("; "));
    Ok(Output { failure, ..Output::table(t) })
}
