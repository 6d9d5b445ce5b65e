//! Exact symbolic differentiation. Total on well-formed expressions: the
//! derivative of every node type is again an expression.

use super::{Expr, Node, Var};

impl Expr {
    /// Exact partial derivative with respect to `v`.
    pub fn differentiate(&self, v: Var) -> Expr {
        match &*self.0 {
            Node::Const(_) => Expr::zero(),
            Node::Var(w) => {
                if *w == v {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(a, b) => Expr::add(&a.differentiate(v), &b.differentiate(v)),
            Node::Sub(a, b) => Expr::sub(&a.differentiate(v), &b.differentiate(v)),
            Node::Mul(a, b) => Expr::add(
                &Expr::mul(&a.differentiate(v), b),
                &Expr::mul(a, &b.differentiate(v)),
            ),
            Node::Div(a, b) => {
                // (a/b)' = (a'b - ab') / b^2
                let num = Expr::sub(
                    &Expr::mul(&a.differentiate(v), b),
                    &Expr::mul(a, &b.differentiate(v)),
                );
                Expr::div(&num, &b.powi(2))
            }
            Node::Neg(a) => Expr::neg(&a.differentiate(v)),
            Node::Pow(a, k) => {
                // d a^k = k a^(k-1) a'
                let factor = Expr::mul(&Expr::int(*k as i64), &a.powi(k - 1));
                Expr::mul(&factor, &a.differentiate(v))
            }
            Node::Exp(a) => Expr::mul(&self.clone(), &a.differentiate(v)),
            Node::Sqrt(a) => {
                // d sqrt(a) = a' / (2 sqrt(a))
                Expr::div(
                    &a.differentiate(v),
                    &Expr::mul(&Expr::int(2), &self.clone()),
                )
            }
            Node::Atan2(yy, xx) => {
                // d atan2(y, x) = (y' x - y x') / (x^2 + y^2)
                let num = Expr::sub(
                    &Expr::mul(&yy.differentiate(v), xx),
                    &Expr::mul(yy, &xx.differentiate(v)),
                );
                let den = Expr::add(&xx.powi(2), &yy.powi(2));
                Expr::div(&num, &den)
            }
            Node::Glue(k, a) => Expr::mul(&Expr::glue(k + 1, a), &a.differentiate(v)),
        }
    }
}
