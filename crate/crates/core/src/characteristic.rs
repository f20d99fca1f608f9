use std::fmt;
use std::sync::Arc;

/// One evaluation of a characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eval {
    Value(f64),
    /// A ratio hit a vanishing denominator.
    Pole,
    /// Integration overflowed before reaching the endpoint.
    Overflow,
}

impl Eval {
    /// Wrap a number, mapping non-finite results to `Pole`.
    pub fn from_f64(v: f64) -> Eval {
        if v.is_finite() {
            Eval::Value(v)
        } else {
            Eval::Pole
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Eval::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_flagged(self) -> bool {
        !matches!(self, Eval::Value(_))
    }
}

/// `a / b`, or `Pole` when `|b| < 1e-300`.
pub fn ratio(a: f64, b: f64) -> Eval {
    if b.abs() < 1e-300 {
        Eval::Pole
    } else {
        Eval::from_f64(a / b)
    }
}

/// An evaluable map `eps -> F(eps)` whose roots are eigenvalues.
#[derive(Clone)]
pub struct CharacteristicFunction {
    label: String,
    f: Arc<dyn Fn(f64) -> Eval + Send + Sync>,
}

impl CharacteristicFunction {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> Eval + Send + Sync + 'static,
    {
        CharacteristicFunction { label: label.into(), f: Arc::new(f) }
    }

    #[inline]
    pub fn eval(&self, energy: f64) -> Eval {
        (self.f)(energy)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for CharacteristicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharacteristicFunction({})", self.label)
    }
}
