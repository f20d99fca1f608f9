use crate::asymptotic::AsymptoticModel;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::{Domain, PotentialSpec};

/// A complete eigenvalue problem: potential, grid, boundary models and the
/// energy window to search.
#[derive(Debug, Clone)]
pub struct Problem {
    pub potential: PotentialSpec,
    pub grid: Grid,
    pub asymptotics: AsymptoticModel,
    pub energy_range: (f64, f64),
}

impl Problem {
    /// Build and validate. Use [`Problem::default_energy_floor`] when no
    /// lower bound is known.
    pub fn new(
        potential: PotentialSpec,
        grid: Grid,
        asymptotics: AsymptoticModel,
        energy_range: (f64, f64),
    ) -> Result<Self> {
        let p = Problem { potential, grid, asymptotics, energy_range };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.energy_range;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidProblem(format!("empty energy range ({lo}, {hi})")));
        }
        if self.potential.is_decaying() && hi > 0.0 {
            return Err(Error::InvalidProblem(format!(
                "bound states of a decaying potential lie below zero; range ends at {hi}"
            )));
        }
        self.potential.validate_on(self.grid.points())?;
        if self.is_mirrored() && self.asymptotics.left.is_dirichlet() != self.asymptotics.right.is_dirichlet() {
            return Err(Error::InvalidProblem(
                "mirrored problem needs the same boundary kind on both sides".into(),
            ));
        }
        Ok(())
    }

    /// Full-line problem whose left half is obtained by reflection: parity
    /// invariant potential, anchor at the origin, no left steps.
    pub fn is_mirrored(&self) -> bool {
        self.is_symmetric() && self.grid.n_left() == 0
    }

    /// Parity-invariant potential anchored at `x0 = 0`.
    pub fn is_symmetric(&self) -> bool {
        self.potential.is_parity_invariant()
            && self.grid.x0() == 0.0
            && self.potential.domain() == Domain::FullLine
    }

    /// Left endpoint, accounting for reflection.
    pub fn x_left(&self) -> f64 {
        if self.is_mirrored() {
            -self.grid.x_right()
        } else {
            self.grid.x_left()
        }
    }

    pub fn x_right(&self) -> f64 {
        self.grid.x_right()
    }

    /// Lowest potential value over the grid; no eigenvalue lies below it.
    pub fn default_energy_floor(potential: &PotentialSpec, grid: &Grid) -> f64 {
        grid.points().map(|x| potential.eval(x)).fold(f64::INFINITY, f64::min)
    }

    pub fn with_grid(mut self, grid: Grid) -> Result<Self> {
        self.grid = grid;
        self.validate()?;
        Ok(self)
    }

    pub fn with_energy_range(mut self, lo: f64, hi: f64) -> Result<Self> {
        self.energy_range = (lo, hi);
        self.validate()?;
        Ok(self)
    }

    pub fn with_asymptotics(mut self, asymptotics: AsymptoticModel) -> Result<Self> {
        self.asymptotics = asymptotics;
        self.validate()?;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// One wavefunction sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub x: f64,
    pub phi: f64,
    pub dphi: f64,
}

/// A converged eigenstate.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub energy: f64,
    pub index: usize,
    pub parity: Option<Parity>,
    /// `|F(eps)|` at the returned energy.
    pub residual: f64,
    pub node_count: usize,
    /// L2-normalized samples in increasing `x`.
    pub wavefunction: Vec<WaveSample>,
    /// `(A2, B2)` with `phi = A2 C + B2 S`, in the normalization of
    /// `wavefunction`.
    pub coefficients: (f64, f64),
    /// Divergent-coefficient residuals `(B1, B3)`; for Dirichlet walls the
    /// boundary value of `phi` stands in.
    pub divergent: (f64, f64),
}
