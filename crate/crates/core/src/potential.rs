use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Where the coordinate lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    FullLine,
    /// `r > 0`, for radial problems.
    HalfLine,
    FiniteInterval(f64, f64),
}

/// A scalar potential `v(x)` in dimensionless energy units.
///
/// The parity flag is declared, not detected: the even/odd split is only
/// valid when `v(-x) = v(x)` holds exactly.
#[derive(Clone)]
pub struct PotentialSpec {
    name: String,
    evaluate: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    domain: Domain,
    parity_invariant: bool,
    decaying: bool,
    parameters: Vec<(String, f64)>,
}

impl PotentialSpec {
    /// A user potential on the full line; parity defaults to `false`.
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PotentialSpec {
            name: name.into(),
            evaluate: Arc::new(f),
            domain: Domain::FullLine,
            parity_invariant: false,
            decaying: false,
            parameters: Vec::new(),
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_parity(mut self, parity_invariant: bool) -> Self {
        self.parity_invariant = parity_invariant;
        self
    }

    /// Mark `v(x) -> 0` as `|x| -> infinity`, so the spectrum above zero is
    /// continuous.
    pub fn decaying(mut self) -> Self {
        self.decaying = true;
        self
    }

    pub fn with_parameter(mut self, name: impl Into<String>, value: f64) -> Self {
        self.parameters.push((name.into(), value));
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluate)(x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_parity_invariant(&self) -> bool {
        self.parity_invariant
    }

    pub fn is_decaying(&self) -> bool {
        self.decaying
    }

    pub fn parameters(&self) -> &[(String, f64)] {
        &self.parameters
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    /// Check finiteness at every point (and parity, when declared).
    pub fn validate_on(&self, points: impl IntoIterator<Item = f64>) -> Result<()> {
        for x in points {
            let v = self.eval(x);
            if !v.is_finite() {
                return Err(Error::InvalidPotential(format!(
                    "{} is not finite at x = {x}",
                    self.name
                )));
            }
            if self.parity_invariant {
                let m = self.eval(-x);
                if (m - v).abs() > 1e-12 * v.abs().max(1.0) {
                    return Err(Error::InvalidPotential(format!(
                        "{} is declared parity invariant but v({x}) = {v} and v({}) = {m}",
                        self.name, -x
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("parity_invariant", &self.parity_invariant)
            .field("decaying", &self.decaying)
            .field("parameters", &self.parameters)
            .finish()
    }
}
