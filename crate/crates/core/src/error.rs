use std::fmt;

use thiserror::Error;

/// Which end of the integration interval an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("asymptotic pair is degenerate on the {side} side at energy {energy}")]
    DegenerateAsymptotics { side: Side, energy: f64 },

    #[error("parity-split method requires a parity-invariant potential with x0 = 0")]
    NotSymmetric,

    #[error("method requires hard Dirichlet walls on both sides")]
    NotDirichlet,

    #[error("integration overflowed at x = {x} (energy {energy})")]
    Overflow { x: f64, energy: f64 },

    #[error("characteristic function is not finite at energy {energy}")]
    NonFinite { energy: f64 },

    #[error("refinement did not converge in {iterations} iterations; best bracket [{lo}, {hi}]")]
    MaxIterations { iterations: usize, lo: f64, hi: f64 },

    #[error("bracket [{lo}, {hi}] closes on a pole, not a root")]
    Pole { lo: f64, hi: f64 },

    #[error("eigenvector coefficients vanish at energy {energy}; root is degenerate")]
    DegenerateRoot { energy: f64 },

    #[error("mode n = {n} is not resolvable with step h = {h}")]
    UnresolvableMode { n: usize, h: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
