//! Double-precision evaluation. Pure; domain violations (division by zero,
//! sqrt of a negative or non-real value, non-finite results) are reported
//! with the evaluation point attached.

use std::fmt;

use num::complex::Complex64;

use super::{Expr, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    SqrtDomain,
    NonRealArgument(&'static str),
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub x: f64,
    pub y: f64,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            EvalErrorKind::DivisionByZero => "division by zero".into(),
            EvalErrorKind::SqrtDomain => "sqrt of a negative or non-real value".into(),
            EvalErrorKind::NonRealArgument(name) => format!("non-real argument to {name}"),
            EvalErrorKind::NonFinite => "non-finite intermediate value".into(),
        };
        write!(f, "{} at ({}, {})", what, self.x, self.y)
    }
}

impl std::error::Error for EvalError {}

/// k-th derivative of `u > 0 ? exp(-1/u) : 0`, evaluated at real `u`.
///
/// For u > 0 it equals `P_k(1/u) exp(-1/u)` with integer polynomials given by
/// `P_0 = 1`, `P_{k+1}(v) = v^2 (P_k(v) - P_k'(v))`.
pub(crate) fn glue_value(order: u32, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let v = 1.0 / u;
    // exp(-v) underflows to 0 long before P_k(v) can overflow.
    if v >= 745.0 {
        return 0.0;
    }
    // Coefficients of P_k, low degree first.
    let mut p = vec![1.0f64];
    for _ in 0..order {
        // q = P - P', then shift by v^2.
        let mut q = vec![0.0; p.len() + 2];
        for (d, &c) in p.iter().enumerate() {
            q[d + 2] += c;
            if d >= 1 {
                q[d + 1] -= c * d as f64;
            }
        }
        p = q;
    }
    let mut poly = 0.0;
    for &c in p.iter().rev() {
        poly = poly * v + c;
    }
    poly * (-v).exp()
}

impl Expr {
    /// Evaluate at the chart point `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Result<Complex64, EvalError> {
        let v = self.eval_inner(x, y)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(EvalError {
                kind: EvalErrorKind::NonFinite,
                x,
                y,
            });
        }
        Ok(v)
    }

    fn eval_inner(&self, x: f64, y: f64) -> Result<Complex64, EvalError> {
        let err = |kind| EvalError { kind, x, y };
        Ok(match &*self.0 {
            Node::Const(c) => c.value(),
            Node::Var(super::Var::X) => Complex64::new(x, 0.0),
            Node::Var(super::Var::Y) => Complex64::new(y, 0.0),
            Node::Add(a, b) => a.eval_inner(x, y)? + b.eval_inner(x, y)?,
            Node::Sub(a, b) => a.eval_inner(x, y)? - b.eval_inner(x, y)?,
            Node::Mul(a, b) => a.eval_inner(x, y)? * b.eval_inner(x, y)?,
            Node::Div(a, b) => {
                let den = b.eval_inner(x, y)?;
                if den == Complex64::new(0.0, 0.0) {
                    return Err(err(EvalErrorKind::DivisionByZero));
                }
                a.eval_inner(x, y)? / den
            }
            Node::Neg(a) => -a.eval_inner(x, y)?,
            Node::Pow(a, k) => {
                let base = a.eval_inner(x, y)?;
                if *k < 0 && base == Complex64::new(0.0, 0.0) {
                    return Err(err(EvalErrorKind::DivisionByZero));
                }
                base.powi(*k)
            }
            Node::Exp(a) => a.eval_inner(x, y)?.exp(),
            Node::Sqrt(a) => {
                let v = a.eval_inner(x, y)?;
                if v.im != 0.0 || v.re < 0.0 {
                    return Err(err(EvalErrorKind::SqrtDomain));
                }
                Complex64::new(v.re.sqrt(), 0.0)
            }
            Node::Atan2(a, b) => {
                let yy = a.eval_inner(x, y)?;
                let xx = b.eval_inner(x, y)?;
                if yy.im != 0.0 || xx.im != 0.0 {
                    return Err(err(EvalErrorKind::NonRealArgument("atan2")));
                }
                Complex64::new(yy.re.atan2(xx.re), 0.0)
            }
            Node::Glue(k, a) => {
                let u = a.eval_inner(x, y)?;
                if u.im != 0.0 {
                    return Err(err(EvalErrorKind::NonRealArgument("glue")));
                }
                Complex64::new(glue_value(*k, u.re), 0.0)
            }
        })
    }
}
