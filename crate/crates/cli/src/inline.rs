//! User potentials written as expressions in `x`.

use evalexpr::{build_operator_tree, ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Node, Value};

use crate::config::ConfigError;

/// A compiled expression `v(x)`.
#[derive(Clone)]
pub struct Expr {
    source: String,
    tree: Node<DefaultNumericTypes>,
}

impl std::fmt::Debug for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_tuple("Expr").field(&self.source).finish()
    }
}

impl Expr {
    pub fn parse(source: &str) -> Result<Self, ConfigError> {
        let tree = build_operator_tree::<DefaultNumericTypes>(source)
            .map_err(|e| ConfigError::field("expr", format!("cannot parse '{source}': {e}")))?;
        let expr = Expr { source: source.to_string(), tree };
        // Catch unknown identifiers and non-numeric results up front.
        expr.try_eval(0.5).map_err(|e| ConfigError::field("expr", format!("'{source}' at x = 0.5: {e}")))?;
        Ok(expr)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    fn try_eval(&self, x: f64) -> Result<f64, evalexpr::EvalexprError<DefaultNumericTypes>> {
        let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
        ctx.set_value("x".into(), Value::Float(x))?;
        self.tree.eval_number_with_context(&ctx)
    }

    /// Evaluation failures become NaN, which potential validation rejects.
    pub fn eval(&self, x: f64) -> f64 {
        self.try_eval(x).unwrap_or(f64::NAN)
    }
}
