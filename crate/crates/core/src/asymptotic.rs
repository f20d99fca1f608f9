//! Convergent and divergent boundary solutions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result, Side};
use crate::wronskian;

/// A value and its first derivative at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub value: f64,
    pub slope: f64,
}

impl Point {
    pub fn new(value: f64, slope: f64) -> Self {
        Point { value, slope }
    }

    /// `W(self, other)`.
    pub fn wronskian(&self, other: &Point) -> f64 {
        wronskian(self.value, self.slope, other.value, other.slope)
    }

    pub fn scale(&self, factor: f64) -> Point {
        Point::new(self.value * factor, self.slope * factor)
    }
}

/// An evaluable solution form `(energy, x) -> (value, derivative)`.
///
/// Energy is always an argument; energy-independent forms ignore it.
#[derive(Clone)]
pub struct SolutionForm(Arc<dyn Fn(f64, f64) -> Point + Send + Sync>);

impl SolutionForm {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> Point + Send + Sync + 'static,
    {
        SolutionForm(Arc::new(f))
    }

    #[inline]
    pub fn at(&self, energy: f64, x: f64) -> Point {
        (self.0)(energy, x)
    }

    /// The same form multiplied by a constant.
    pub fn scaled(&self, factor: f64) -> SolutionForm {
        let inner = self.0.clone();
        SolutionForm::new(move |e, x| inner(e, x).scale(factor))
    }
}

impl fmt::Debug for SolutionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SolutionForm(..)")
    }
}

/// Boundary treatment on one side of the interval.
#[derive(Debug, Clone)]
pub enum Boundary {
    /// `phi = 0` at the endpoint.
    Dirichlet,
    /// The wavefunction tends to a combination of a convergent and a
    /// divergent solution; square integrability kills the divergent one.
    Asymptotic {
        convergent: SolutionForm,
        divergent: SolutionForm,
    },
}

impl Boundary {
    pub fn asymptotic(convergent: SolutionForm, divergent: SolutionForm) -> Self {
        Boundary::Asymptotic { convergent, divergent }
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, Boundary::Dirichlet)
    }

    /// The row `(W(c, C), W(c, S))` of the quantization determinant at an
    /// endpoint. For Dirichlet walls the row is the boundary values
    /// `(C, S)` themselves, which is what `W(x - x_wall, .)` reduces to up to
    /// sign.
    pub fn row(&self, energy: f64, x: f64, c: Point, s: Point) -> (f64, f64) {
        match self {
            Boundary::Dirichlet => (c.value, s.value),
            Boundary::Asymptotic { convergent, .. } => {
                let rc = convergent.at(energy, x);
                (rc.wronskian(&c), rc.wronskian(&s))
            }
        }
    }

    /// `W(convergent, divergent)` at `x`; `None` for Dirichlet walls.
    pub fn pair_wronskian(&self, energy: f64, x: f64) -> Option<f64> {
        match self {
            Boundary::Dirichlet => None,
            Boundary::Asymptotic { convergent, divergent } => {
                Some(convergent.at(energy, x).wronskian(&divergent.at(energy, x)))
            }
        }
    }

    /// Multiply both members of the asymptotic pair by `factor`.
    pub fn scaled(&self, factor: f64) -> Boundary {
        match self {
            Boundary::Dirichlet => Boundary::Dirichlet,
            Boundary::Asymptotic { convergent, divergent } => Boundary::Asymptotic {
                convergent: convergent.scaled(factor),
                divergent: divergent.scaled(factor),
            },
        }
    }
}

/// Left and right boundary models (`L_c, L_d` and `R_c, R_d`).
#[derive(Debug, Clone)]
pub struct AsymptoticModel {
    pub left: Boundary,
    pub right: Boundary,
}

impl AsymptoticModel {
    pub fn new(left: Boundary, right: Boundary) -> Self {
        AsymptoticModel { left, right }
    }

    pub fn dirichlet() -> Self {
        AsymptoticModel::new(Boundary::Dirichlet, Boundary::Dirichlet)
    }

    pub fn side(&self, side: Side) -> &Boundary {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Linear independence of each asymptotic pair at the given endpoints.
    pub fn check_independent(&self, energy: f64, x_left: f64, x_right: f64) -> Result<()> {
        for (side, x) in [(Side::Left, x_left), (Side::Right, x_right)] {
            if let Some(w) = self.side(side).pair_wronskian(energy, x) {
                if !(w.abs() > 1e-300) || !w.is_finite() {
                    return Err(Error::DegenerateAsymptotics { side, energy });
                }
            }
        }
        Ok(())
    }
}

/// `k = sqrt(-2 eps)` for bound-state energies, zero otherwise.
#[inline]
pub fn decay_constant(energy: f64) -> f64 {
    if energy < 0.0 {
        (-2.0 * energy).sqrt()
    } else {
        0.0
    }
}

/// `e^{-k x}` and `e^{k x}` (right) or `e^{k x}` and `e^{-k x}` (left) for
/// potentials that vanish at infinity.
pub fn exponential_pair(side: Side) -> Boundary {
    let sign = match side {
        Side::Right => -1.0,
        Side::Left => 1.0,
    };
    let conv = SolutionForm::new(move |e, x| {
        let k = sign * decay_constant(e);
        let v = (k * x).exp();
        Point::new(v, k * v)
    });
    let div = SolutionForm::new(move |e, x| {
        let k = -sign * decay_constant(e);
        let v = (k * x).exp();
        Point::new(v, k * v)
    });
    Boundary::asymptotic(conv, div)
}
