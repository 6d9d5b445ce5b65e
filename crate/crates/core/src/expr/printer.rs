//! Pretty-printer. Output is valid grammar input and parses back to an equal
//! AST (after the parser's constant folding), with minimal parentheses.

use std::fmt;

use num::{BigRational, One, Signed, Zero};

use super::{CVal, Expr, Node};

fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn const_str(c: &CVal) -> String {
    let re_zero = c.re.is_zero();
    let im_zero = c.im.is_zero();
    if im_zero {
        return rational_str(&c.re);
    }
    let im_part = |im: &BigRational| -> String {
        if im.is_one() {
            "i".into()
        } else {
            format!("{}*i", rational_str(im))
        }
    };
    if re_zero {
        if c.im.is_negative() {
            return format!("-{}", im_part(&-&c.im));
        }
        return im_part(&c.im);
    }
    if c.im.is_negative() {
        format!("({} - {})", rational_str(&c.re), im_part(&-&c.im))
    } else {
        format!("({} + {})", rational_str(&c.re), im_part(&c.im))
    }
}

/// Precedence level the printed form occupies: 1 add/sub, 2 mul/div/neg,
/// 3 power, 4 atom.
fn level(e: &Expr) -> u8 {
    match &*e.0 {
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) | Node::Neg(..) => 2,
        Node::Pow(..) => 3,
        Node::Var(_) | Node::Exp(_) | Node::Sqrt(_) | Node::Atan2(..) | Node::Glue(..) => 4,
        Node::Const(c) => {
            let s = const_str(c);
            if s.starts_with('-') {
                2
            } else if s.contains('/') || s.contains('*') {
                2
            } else {
                4
            }
        }
    }
}

fn write_at(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(e) < min {
        write!(f, "(")?;
        write_raw(e, f)?;
        write!(f, ")")
    } else {
        write_raw(e, f)
    }
}

fn write_raw(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &*e.0 {
        Node::Const(c) => write!(f, "{}", const_str(c)),
        Node::Var(v) => write!(f, "{v}"),
        Node::Add(a, b) => {
            write_at(a, 1, f)?;
            write!(f, " + ")?;
            write_at(b, 2, f)
        }
        Node::Sub(a, b) => {
            write_at(a, 1, f)?;
            write!(f, " - ")?;
            write_at(b, 2, f)
        }
        Node::Mul(a, b) => {
            write_at(a, 2, f)?;
            write!(f, "*")?;
            write_at(b, 3, f)
        }
        Node::Div(a, b) => {
            write_at(a, 2, f)?;
            write!(f, "/")?;
            write_at(b, 3, f)
        }
        Node::Neg(a) => {
            write!(f, "-")?;
            write_at(a, 3, f)
        }
        Node::Pow(a, k) => {
            write_at(a, 4, f)?;
            write!(f, "^{k}")
        }
        Node::Exp(a) => {
            write!(f, "exp(")?;
            write_raw(a, f)?;
            write!(f, ")")
        }
        Node::Sqrt(a) => {
            write!(f, "sqrt(")?;
            write_raw(a, f)?;
            write!(f, ")")
        }
        Node::Atan2(a, b) => {
            write!(f, "atan2(")?;
            write_raw(a, f)?;
            write!(f, ", ")?;
            write_raw(b, f)?;
            write!(f, ")")
        }
        Node::Glue(k, a) => {
            write!(f, "glue({k}, ")?;
            write_raw(a, f)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_raw(self, f)
    }
}
