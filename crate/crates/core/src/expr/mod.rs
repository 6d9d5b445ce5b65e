//! A small expression language for complex-valued functions of two real
//! chart coordinates `x`, `y`.
//!
//! Expressions are immutable trees shared through `Arc`, so they are cheap to
//! clone and safe to evaluate from many threads. Constants carry exact
//! rational real/imaginary parts; arithmetic on constants folds at
//! construction time. Differentiation is exact and closed: the derivative of
//! every node is again an expression.
//!
//! The smooth step `bump(t, a, b)` (0 for `t <= a`, 1 for `t >= b`, smooth
//! and monotone between) is built from the standard `exp(-1/t)` glue. The
//! glue and its derivatives are the primitive `glue(k, u)` — the k-th
//! derivative of `u > 0 ? exp(-1/u) : 0` — which keeps the whole language
//! closed under `differentiate`.

mod calculus;
mod eval;
mod parser;
mod printer;

use std::fmt;
use std::sync::Arc;

use num::complex::Complex64;
use num::{BigRational, ToPrimitive, Zero};

pub use eval::{EvalError, EvalErrorKind};
pub use parser::{ParseError, ParseErrorKind};

/// Chart coordinate. Charts on curves use only `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Y => write!(f, "y"),
        }
    }
}

/// Exact complex constant: rational real and imaginary part, with the f64
/// value cached so evaluation never touches bignum arithmetic.
#[derive(Debug, Clone)]
pub struct CVal {
    pub re: BigRational,
    pub im: BigRational,
    cached: Complex64,
}

impl CVal {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        let cached = Complex64::new(
            re.to_f64().unwrap_or(f64::NAN),
            im.to_f64().unwrap_or(f64::NAN),
        );
        CVal { re, im, cached }
    }

    pub fn value(&self) -> Complex64 {
        self.cached
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re == BigRational::from_integer(1.into())
    }
}

impl PartialEq for CVal {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}
impl Eq for CVal {}

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Const(CVal),
    Var(Var),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    /// Integer power; binds tightest in the grammar.
    Pow(Expr, i32),
    Exp(Expr),
    Sqrt(Expr),
    Atan2(Expr, Expr),
    /// k-th derivative of the glue `u > 0 ? exp(-1/u) : 0`.
    Glue(u32, Expr),
}

/// An immutable expression. Cloning is an `Arc` bump.
#[derive(Clone, PartialEq, Eq)]
pub struct Expr(pub(crate) Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl Expr {
    fn node(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn var(v: Var) -> Expr {
        Expr::node(Node::Var(v))
    }

    pub fn x() -> Expr {
        Expr::var(Var::X)
    }

    pub fn y() -> Expr {
        Expr::var(Var::Y)
    }

    pub fn constant(re: BigRational, im: BigRational) -> Expr {
        Expr::node(Node::Const(CVal::new(re, im)))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(rat(n), rat(0))
    }

    /// Exact rational constant `num/den`.
    pub fn ratio(num: i64, den: i64) -> Expr {
        assert!(den != 0, "zero denominator");
        Expr::constant(BigRational::new(num.into(), den.into()), rat(0))
    }

    /// The exact rational equal to an f64 (every finite f64 is rational).
    pub fn from_f64(v: f64) -> Expr {
        let r = BigRational::from_float(v).expect("finite float");
        Expr::constant(r, rat(0))
    }

    pub fn i() -> Expr {
        Expr::constant(rat(0), rat(1))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn as_const(&self) -> Option<&CVal> {
        match &*self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().map(|c| c.is_zero()).unwrap_or(false)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Number of nodes, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        match &*self.0 {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b)
            | Node::Atan2(a, b) => 1 + a.size() + b.size(),
            Node::Neg(a) | Node::Pow(a, _) | Node::Exp(a) | Node::Sqrt(a) | Node::Glue(_, a) => {
                1 + a.size()
            }
        }
    }

    pub fn add(a: &Expr, b: &Expr) -> Expr {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if let (Some(ca), Some(cb)) = (a.as_const(), b.as_const()) {
            return Expr::constant(&ca.re + &cb.re, &ca.im + &cb.im);
        }
        Expr::node(Node::Add(a.clone(), b.clone()))
    }

    pub fn sub(a: &Expr, b: &Expr) -> Expr {
        if b.is_zero() {
            return a.clone();
        }
        if a.is_zero() {
            return Expr::neg(b);
        }
        if let (Some(ca), Some(cb)) = (a.as_const(), b.as_const()) {
            return Expr::constant(&ca.re - &cb.re, &ca.im - &cb.im);
        }
        Expr::node(Node::Sub(a.clone(), b.clone()))
    }

    pub fn mul(a: &Expr, b: &Expr) -> Expr {
        if a.is_zero() || b.is_zero() {
            return Expr::zero();
        }
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        if let (Some(ca), Some(cb)) = (a.as_const(), b.as_const()) {
            return Expr::constant(
                &ca.re * &cb.re - &ca.im * &cb.im,
                &ca.re * &cb.im + &ca.im * &cb.re,
            );
        }
        Expr::node(Node::Mul(a.clone(), b.clone()))
    }

    pub fn div(a: &Expr, b: &Expr) -> Expr {
        if b.is_one() {
            return a.clone();
        }
        if let (Some(ca), Some(cb)) = (a.as_const(), b.as_const()) {
            let den = &cb.re * &cb.re + &cb.im * &cb.im;
            if !den.is_zero() {
                return Expr::constant(
                    (&ca.re * &cb.re + &ca.im * &cb.im) / &den,
                    (&ca.im * &cb.re - &ca.re * &cb.im) / &den,
                );
            }
        }
        Expr::node(Node::Div(a.clone(), b.clone()))
    }

    pub fn neg(a: &Expr) -> Expr {
        if let Some(c) = a.as_const() {
            return Expr::constant(-&c.re, -&c.im);
        }
        if let Node::Neg(inner) = &*a.0 {
            return inner.clone();
        }
        Expr::node(Node::Neg(a.clone()))
    }

    pub fn powi(&self, k: i32) -> Expr {
        if k == 0 {
            return Expr::one();
        }
        if k == 1 {
            return self.clone();
        }
        if let Some(c) = self.as_const() {
            if !(c.is_zero() && k < 0) {
                let v = Expr::constant(c.re.clone(), c.im.clone());
                let mut acc = Expr::one();
                for _ in 0..k.unsigned_abs() {
                    acc = Expr::mul(&acc, &v);
                }
                if k < 0 {
                    acc = Expr::div(&Expr::one(), &acc);
                }
                return acc;
            }
        }
        Expr::node(Node::Pow(self.clone(), k))
    }

    pub fn exp(&self) -> Expr {
        Expr::node(Node::Exp(self.clone()))
    }

    pub fn sqrt(&self) -> Expr {
        Expr::node(Node::Sqrt(self.clone()))
    }

    pub fn atan2(y: &Expr, x: &Expr) -> Expr {
        Expr::node(Node::Atan2(y.clone(), x.clone()))
    }

    pub fn glue(order: u32, arg: &Expr) -> Expr {
        Expr::node(Node::Glue(order, arg.clone()))
    }

    /// Smooth step: 0 for `t <= a`, 1 for `t >= b`, strictly increasing and
    /// smooth in between. Expanded to `g(s) / (g(s) + g(1-s))` with
    /// `s = (t-a)/(b-a)` and `g` the glue primitive.
    pub fn bump(t: &Expr, a: &Expr, b: &Expr) -> Expr {
        let s = Expr::div(&Expr::sub(t, a), &Expr::sub(b, a));
        let gs = Expr::glue(0, &s);
        let gns = Expr::glue(0, &Expr::sub(&Expr::one(), &s));
        Expr::div(&gs, &Expr::add(&gs, &gns))
    }

    /// Plateau bump in one variable: supported on `(a, d)`, identically 1 on
    /// `[b, c]`. Requires `a < b <= c < d`.
    pub fn plateau(t: &Expr, a: &Expr, b: &Expr, c: &Expr, d: &Expr) -> Expr {
        let up = Expr::bump(t, a, b);
        let down = Expr::sub(&Expr::one(), &Expr::bump(t, c, d));
        Expr::mul(&up, &down)
    }

    /// Replace `x` and `y` by the given expressions.
    pub fn substitute(&self, sx: &Expr, sy: &Expr) -> Expr {
        match &*self.0 {
            Node::Const(_) => self.clone(),
            Node::Var(Var::X) => sx.clone(),
            Node::Var(Var::Y) => sy.clone(),
            Node::Add(a, b) => Expr::add(&a.substitute(sx, sy), &b.substitute(sx, sy)),
            Node::Sub(a, b) => Expr::sub(&a.substitute(sx, sy), &b.substitute(sx, sy)),
            Node::Mul(a, b) => Expr::mul(&a.substitute(sx, sy), &b.substitute(sx, sy)),
            Node::Div(a, b) => Expr::div(&a.substitute(sx, sy), &b.substitute(sx, sy)),
            Node::Neg(a) => Expr::neg(&a.substitute(sx, sy)),
            Node::Pow(a, k) => a.substitute(sx, sy).powi(*k),
            Node::Exp(a) => a.substitute(sx, sy).exp(),
            Node::Sqrt(a) => a.substitute(sx, sy).sqrt(),
            Node::Atan2(a, b) => Expr::atan2(&a.substitute(sx, sy), &b.substitute(sx, sy)),
            Node::Glue(k, a) => Expr::glue(*k, &a.substitute(sx, sy)),
        }
    }
}

impl std::ops::Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}
impl std::ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}
impl std::ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}
impl std::ops::Div for &Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        Expr::div(self, rhs)
    }
}
impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}
