//! Run configuration: flags over an optional `key = value` file over
//! per-potential defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use thiserror::Error;

use wronski::potentials;
use wronski::{exponential_pair, AsymptoticModel, Domain, Grid, Method, PotentialSpec, Problem, Side};

use crate::inline::Expr;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {msg}")]
    Line { path: String, line: usize, msg: String },
    #[error("{field}: {msg}")]
    Field { field: &'static str, msg: String },
    #[error("{0}")]
    Problem(#[from] wronski::Error),
}

impl ConfigError {
    pub fn field(field: &'static str, msg: impl Into<String>) -> Self {
        ConfigError::Field { field, msg: msg.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Box,
    PoschlTeller,
    Anharmonic,
    Radial,
    Inline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Asymptotics {
    /// `exp(-k |x|)` at both ends; needs `v -> 0`.
    Exponential,
    /// `phi = 0` at both ends.
    Dirichlet,
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range(pub f64, pub f64);

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
        let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        let r = Range(p(lo)?, p(hi)?);
        if !(r.0.is_finite() && r.1.is_finite()) || r.0 > r.1 {
            return Err(format!("range {s} must be finite with lo <= hi"));
        }
        Ok(r)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.0, self.1)
    }
}

/// Comma-separated floats.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<f64>);

impl FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty list".into());
        }
        Ok(List(v))
    }
}

impl fmt::Display for List {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: wronski::Error| e.to_string())
}

/// Every setting, as given on the command line. Unset fields fall back to
/// the config file and then to the potential's defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// Catalog potential or `inline` with --expr.
    #[arg(long, value_enum)]
    pub potential: Option<PotentialKind>,
    /// Pöschl–Teller depth (also the inner well for `radial`).
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Quadratic coefficient of the anharmonic well.
    #[arg(long, allow_negative_numbers = true)]
    pub v2: Option<f64>,
    /// Quartic coefficient of the anharmonic well.
    #[arg(long, allow_negative_numbers = true)]
    pub v4: Option<f64>,
    /// Angular momentum for `radial`.
    #[arg(long)]
    pub l: Option<u32>,
    /// wm, wm-even, wm-odd, cfm or dirichlet.
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    /// Anchor; a comma list for box scans.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<List>,
    /// Grid step.
    #[arg(long)]
    pub h: Option<f64>,
    /// Steps left of the anchor.
    #[arg(long)]
    pub nl: Option<usize>,
    /// Steps right of the anchor (radial: steps from the origin to r_max).
    #[arg(long)]
    pub nr: Option<usize>,
    /// Energy window `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<Range>,
    /// Probe intervals across the range.
    #[arg(long)]
    pub probes: Option<usize>,
    /// Root tolerance in energy (solve, oracle) or saturation band (saturate).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Trial energy for `saturate`.
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    /// Potential in `x` for `inline`, e.g. `-10.0 / math::cosh(x)^2`.
    #[arg(long, allow_hyphen_values = true)]
    pub expr: Option<String>,
    /// Boundary model for `inline`.
    #[arg(long, value_enum)]
    pub asymptotics: Option<Asymptotics>,
    /// Declare the inline potential even in `x`.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub symmetric: Option<bool>,
    /// Step ladder for `oracle`.
    #[arg(long)]
    pub hs: Option<List>,
    /// Number of levels compared by `oracle`.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Write eigenfunctions from `solve` to this CSV.
    #[arg(long)]
    pub wavefunctions: Option<PathBuf>,
}

fn parse<T: FromStr>(key: &'static str, v: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    v.parse::<T>().map_err(|e| format!("field `{key}`: {e}"))
}

impl Settings {
    /// Read a `key = value` file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, crate::CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::CliError::Io(path.display().to_string(), e))?;
        Self::parse_text(&text, &path.display().to_string()).map_err(crate::CliError::Config)
    }

    pub fn parse_text(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ConfigError::Line { path: origin.to_string(), line: i + 1, msg };
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
            s.set(k.trim(), v.trim()).map_err(err)?;
        }
        Ok(s)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        let enum_value = |key: &'static str, v: &str| format!("field `{key}`: unknown value '{v}'");
        match key {
            "potential" => {
                self.potential = Some(PotentialKind::from_str(v, false).map_err(|_| enum_value("potential", v))?)
            }
            "v0" => self.v0 = Some(parse("v0", v)?),
            "v2" => self.v2 = Some(parse("v2", v)?),
            "v4" => self.v4 = Some(parse("v4", v)?),
            "l" => self.l = Some(parse("l", v)?),
            "method" => self.method = Some(parse_method(v).map_err(|e| format!("field `method`: {e}"))?),
            "x0" => self.x0 = Some(parse("x0", v)?),
            "h" => self.h = Some(parse("h", v)?),
            "nl" => self.nl = Some(parse("nl", v)?),
            "nr" => self.nr = Some(parse("nr", v)?),
            "range" => self.range = Some(parse("range", v)?),
            "probes" => self.probes = Some(parse("probes", v)?),
            "tol" => self.tol = Some(parse("tol", v)?),
            "energy" => self.energy = Some(parse("energy", v)?),
            "expr" => self.expr = Some(v.to_string()),
            "asymptotics" => {
                self.asymptotics = Some(Asymptotics::from_str(v, false).map_err(|_| enum_value("asymptotics", v))?)
            }
            "symmetric" => self.symmetric = Some(parse("symmetric", v)?),
            "hs" => self.hs = Some(parse("hs", v)?),
            "levels" => self.levels = Some(parse("levels", v)?),
            "wavefunctions" => self.wavefunctions = Some(PathBuf::from(v)),
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Fields set here win over `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            potential: self.potential.or(base.potential),
            v0: self.v0.or(base.v0),
            v2: self.v2.or(base.v2),
            v4: self.v4.or(base.v4),
            l: self.l.or(base.l),
            method: self.method.or(base.method),
            x0: self.x0.or(base.x0),
            h: self.h.or(base.h),
            nl: self.nl.or(base.nl),
            nr: self.nr.or(base.nr),
            range: self.range.or(base.range),
            probes: self.probes.or(base.probes),
            tol: self.tol.or(base.tol),
            energy: self.energy.or(base.energy),
            expr: self.expr.or(base.expr),
            asymptotics: self.asymptotics.or(base.asymptotics),
            symmetric: self.symmetric.or(base.symmetric),
            hs: self.hs.or(base.hs),
            levels: self.levels.or(base.levels),
            wavefunctions: self.wavefunctions.or(base.wavefunctions),
        }
    }
}

/// Settings with every default filled in and checked.
#[derive(Debug, Clone)]
pub struct Config {
    pub potential: PotentialKind,
    pub v0: Option<f64>,
    pub v2: f64,
    pub v4: Option<f64>,
    pub l: u32,
    pub method: Method,
    pub x0: Vec<f64>,
    pub h: f64,
    pub nl: Option<usize>,
    pub nr: Option<usize>,
    pub range: Option<Range>,
    pub probes: Option<usize>,
    pub tol: Option<f64>,
    pub energy: Option<f64>,
    pub expr: Option<Expr>,
    pub asymptotics: Asymptotics,
    pub symmetric: bool,
    pub hs: Vec<f64>,
    pub levels: usize,
    pub wavefunctions: Option<PathBuf>,
}

fn positive(field: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::field(field, format!("must be positive, got {v}")))
    }
}

impl Config {
    pub fn resolve(s: Settings) -> Result<Self, ConfigError> {
        let potential = s.potential.ok_or_else(|| ConfigError::field("potential", "required"))?;
        let is_box = potential == PotentialKind::Box;
        let method = s.method.unwrap_or(if is_box { Method::Dirichlet } else { Method::Wm });
        let x0 = s.x0.map(|l| l.0).unwrap_or_else(|| vec![if is_box { 0.125 } else { 0.0 }]);
        let h = positive("h", s.h.unwrap_or(if is_box { 0.001 } else { 0.01 }))?;
        let tol = s.tol.map(|t| positive("tol", t)).transpose()?;
        let hs = s.hs.map(|l| l.0).unwrap_or_else(|| vec![0.02, 0.01, 0.005]);
        for &x in &hs {
            positive("hs", x)?;
        }
        if x0.iter().any(|x| !x.is_finite()) {
            return Err(ConfigError::field("x0", "must be finite"));
        }
        match potential {
            PotentialKind::PoschlTeller | PotentialKind::Radial if s.v0.is_none() => {
                return Err(ConfigError::field("v0", "required for this potential"));
            }
            PotentialKind::Anharmonic if s.v4.is_none() => {
                return Err(ConfigError::field("v4", "required for the anharmonic potential"));
            }
            PotentialKind::Inline if s.expr.is_none() => {
                return Err(ConfigError::field("expr", "required for an inline potential"));
            }
            PotentialKind::Box if s.nl.is_some() || s.nr.is_some() => {
                return Err(ConfigError::field("nl", "the box grid is fixed by x0 and h"));
            }
            _ => {}
        }
        if s.probes == Some(0) {
            return Err(ConfigError::field("probes", "must be at least 1"));
        }
        let expr = s.expr.as_deref().map(Expr::parse).transpose()?;
        Ok(Config {
            potential,
            v0: s.v0,
            v2: s.v2.unwrap_or(0.0),
            v4: s.v4,
            l: s.l.unwrap_or(0),
            method,
            x0,
            h,
            nl: s.nl,
            nr: s.nr,
            range: s.range,
            probes: s.probes,
            tol,
            energy: s.energy,
            expr,
            asymptotics: s.asymptotics.unwrap_or(Asymptotics::Exponential),
            symmetric: s.symmetric.unwrap_or(false),
            hs,
            levels: s.levels.unwrap_or(5),
            wavefunctions: s.wavefunctions,
        })
    }

    /// The single anchor of a non-scan run.
    pub fn anchor(&self) -> Result<f64, ConfigError> {
        match self.x0.as_slice() {
            [x] => Ok(*x),
            _ => Err(ConfigError::field("x0", "a list of anchors is only accepted by a box scan")),
        }
    }

    /// The problem at the configured step.
    pub fn problem(&self) -> Result<Problem, ConfigError> {
        self.problem_at(self.x0[0], self.h)
    }

    pub fn problem_at(&self, x0: f64, h: f64) -> Result<Problem, ConfigError> {
        let mut p = match self.potential {
            PotentialKind::Box => {
                if !(0.0 < x0 && x0 < 1.0) {
                    return Err(ConfigError::field("x0", format!("box anchor must lie in (0, 1), got {x0}")));
                }
                potentials::infinite_well_with(x0, h)?
            }
            PotentialKind::PoschlTeller => {
                let nr = self.nr.unwrap_or(500);
                let p = potentials::poschl_teller_with(self.v0.unwrap_or_default(), h, nr as f64 * h)?;
                self.regrid(p, x0, h, nr)?
            }
            PotentialKind::Anharmonic => {
                let eps_max = self.range.map_or(10.0, |r| r.1);
                let p = potentials::anharmonic_with(self.v2, self.v4.unwrap_or_default(), eps_max, h)?;
                let nr = self.nr.unwrap_or(p.grid.n_right());
                self.regrid(p, x0, h, nr)?
            }
            PotentialKind::Radial => {
                let inner = potentials::poschl_teller_potential(self.v0.unwrap_or_default())?
                    .with_parity(false)
                    .with_domain(Domain::HalfLine);
                let r_max = self.nr.map_or(10.0, |n| n as f64 * h);
                potentials::radial_with(inner, self.l, h, r_max)?
            }
            PotentialKind::Inline => self.inline_problem(x0, h)?,
        };
        if let Some(r) = self.range {
            if r.0 < r.1 {
                p = p.with_energy_range(r.0, r.1)?;
            }
        }
        Ok(p)
    }

    /// Replace a catalog grid when the anchor or extents were overridden.
    fn regrid(&self, p: Problem, x0: f64, h: f64, nr: usize) -> Result<Problem, ConfigError> {
        let nl = self.nl.unwrap_or_else(|| default_nl(x0, h, nr, true));
        if x0 == 0.0 && nl == 0 && nr == p.grid.n_right() {
            return Ok(p);
        }
        Ok(p.with_grid(Grid::new(x0, h, nl, nr)?)?)
    }

    fn inline_problem(&self, x0: f64, h: f64) -> Result<Problem, ConfigError> {
        let expr = self.expr.clone().expect("resolve checks expr");
        let source = expr.source().to_string();
        let mut v = PotentialSpec::new(format!("inline({source})"), move |x| expr.eval(x)).with_parity(self.symmetric);
        let asym = match self.asymptotics {
            Asymptotics::Exponential => {
                v = v.decaying();
                AsymptoticModel::new(exponential_pair(Side::Left), exponential_pair(Side::Right))
            }
            Asymptotics::Dirichlet => AsymptoticModel::dirichlet(),
        };
        let nr = self.nr.unwrap_or(500);
        let nl = self.nl.unwrap_or_else(|| default_nl(x0, h, nr, self.symmetric));
        let grid = Grid::new(x0, h, nl, nr)?;
        v.validate_on(grid.points())?;
        let floor = Problem::default_energy_floor(&v, &grid);
        let hi = match self.asymptotics {
            Asymptotics::Exponential => 0.0,
            Asymptotics::Dirichlet => floor + 50.0,
        };
        // A potential with no well still gets a window, which holds no levels.
        let lo = if floor < hi { floor } else { hi - 1.0 };
        Ok(Problem::new(v, grid, asym, (lo, hi))?)
    }

    /// `(key, value)` pairs for the CSV preamble, in a fixed order.
    pub fn describe(&self, command: &str) -> Vec<(String, String)> {
        let mut out = vec![
            ("wronski".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("command".to_string(), command.to_string()),
            ("potential".to_string(), value_name(&self.potential)),
        ];
        let mut push = |k: &str, v: String| out.push((k.to_string(), v));
        match self.potential {
            PotentialKind::PoschlTeller => push("v0", fmt_f(self.v0)),
            PotentialKind::Radial => {
                push("v0", fmt_f(self.v0));
                push("l", self.l.to_string());
            }
            PotentialKind::Anharmonic => {
                push("v2", self.v2.to_string());
                push("v4", fmt_f(self.v4));
            }
            PotentialKind::Inline => {
                push("expr", self.expr.as_ref().map(|e| e.source().to_string()).unwrap_or_default());
                push("asymptotics", value_name(&self.asymptotics));
                push("symmetric", self.symmetric.to_string());
            }
            PotentialKind::Box => {}
        }
        push("method", self.method.to_string());
        push("x0", List(self.x0.clone()).to_string());
        push("h", self.h.to_string());
        if let Some(t) = self.tol {
            push("tol", t.to_string());
        }
        if let Some(r) = self.range {
            push("range", r.to_string());
        }
        if let Some(p) = self.probes {
            push("probes", p.to_string());
        }
        if let Some(n) = self.nl {
            push("nl", n.to_string());
        }
        if let Some(n) = self.nr {
            push("nr", n.to_string());
        }
        out
    }
}

fn fmt_f(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Mirrored grids need no left steps; otherwise the interval defaults to
/// one symmetric about the origin.
fn default_nl(x0: f64, h: f64, nr: usize, even: bool) -> usize {
    if even && x0 == 0.0 {
        0
    } else {
        (nr as isize + (2.0 * x0 / h).round() as isize).max(0) as usize
    }
}
