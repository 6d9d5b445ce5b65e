//! Chart-local differential forms with expression coefficients, and matrices
//! of them. Coordinate monomials are kept normalized: in two dimensions the
//! component order is `[dx, dy]` in degree 1 and `[dx^dy]` in degree 2; any
//! degree above the chart dimension is identically zero and carries no
//! components.

use num::complex::Complex64;

use crate::expr::{EvalError, Expr, Var};
use crate::linalg::CMat;

fn comp_count(dim: usize, degree: usize) -> usize {
    match (dim, degree) {
        (_, 0) => 1,
        (1, 1) => 1,
        (2, 1) => 2,
        (2, 2) => 1,
        _ => 0,
    }
}

/// A differential form of fixed degree on one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct DForm {
    pub dim: usize,
    pub degree: usize,
    /// One coefficient per basis monomial, in the normalized order.
    pub comps: Vec<Expr>,
}

impl DForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        DForm {
            dim,
            degree,
            comps: vec![Expr::zero(); comp_count(dim, degree)],
        }
    }

    pub fn scalar(dim: usize, e: Expr) -> Self {
        DForm {
            dim,
            degree: 0,
            comps: vec![e],
        }
    }

    pub fn one_form(dim: usize, comps: Vec<Expr>) -> Self {
        assert_eq!(comps.len(), comp_count(dim, 1));
        DForm {
            dim,
            degree: 1,
            comps,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    pub fn add(&self, other: &DForm) -> DForm {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        DForm {
            dim: self.dim,
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| Expr::add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> DForm {
        DForm {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().map(|a| Expr::neg(a)).collect(),
        }
    }

    pub fn scale(&self, e: &Expr) -> DForm {
        DForm {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().map(|a| Expr::mul(e, a)).collect(),
        }
    }

    /// Wedge product; anticommutativity of the coordinate monomials is folded
    /// into the component formulas.
    pub fn wedge(&self, other: &DForm) -> DForm {
        assert_eq!(self.dim, other.dim);
        let dim = self.dim;
        let degree = self.degree + other.degree;
        if degree > dim {
            return DForm::zero(dim, degree);
        }
        match (self.degree, other.degree) {
            (0, _) => other.scale(&self.comps[0]),
            (_, 0) => self.scale(&other.comps[0]),
            (1, 1) => {
                // (a dx + b dy) ^ (c dx + d dy) = (a d - b c) dx^dy
                let ad = Expr::mul(&self.comps[0], &other.comps[1]);
                let bc = Expr::mul(&self.comps[1], &other.comps[0]);
                DForm {
                    dim,
                    degree,
                    comps: vec![Expr::sub(&ad, &bc)],
                }
            }
            _ => unreachable!("degree > dim handled above"),
        }
    }

    /// Exterior derivative, taken symbolically.
    pub fn d(&self) -> DForm {
        let dim = self.dim;
        let degree = self.degree + 1;
        if degree > dim {
            return DForm::zero(dim, degree);
        }
        match self.degree {
            0 => {
                let f = &self.comps[0];
                let comps = if dim == 1 {
                    vec![f.differentiate(Var::X)]
                } else {
                    vec![f.differentiate(Var::X), f.differentiate(Var::Y)]
                };
                DForm {
                    dim,
                    degree,
                    comps,
                }
            }
            1 => {
                // d(P dx + Q dy) = (dQ/dx - dP/dy) dx^dy
                let p = &self.comps[0];
                let q = &self.comps[1];
                DForm {
                    dim,
                    degree,
                    comps: vec![Expr::sub(
                        &q.differentiate(Var::X),
                        &p.differentiate(Var::Y),
                    )],
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<Vec<Complex64>, EvalError> {
        self.comps.iter().map(|c| c.eval(x, y)).collect()
    }
}

/// A square matrix of forms of one degree on one chart.
#[derive(Debug, Clone)]
pub struct FormMat {
    pub n: usize,
    pub dim: usize,
    pub degree: usize,
    entries: Vec<DForm>,
}

impl FormMat {
    pub fn zero(n: usize, dim: usize, degree: usize) -> Self {
        FormMat {
            n,
            dim,
            degree,
            entries: vec![DForm::zero(dim, degree); n * n],
        }
    }

    pub fn from_entries(n: usize, dim: usize, degree: usize, entries: Vec<DForm>) -> Self {
        assert_eq!(entries.len(), n * n);
        assert!(entries
            .iter()
            .all(|e| e.dim == dim && e.degree == degree));
        FormMat {
            n,
            dim,
            degree,
            entries,
        }
    }

    /// Scalar matrix (degree 0) from expressions.
    pub fn from_exprs(n: usize, dim: usize, exprs: Vec<Expr>) -> Self {
        FormMat::from_entries(
            n,
            dim,
            0,
            exprs.into_iter().map(|e| DForm::scalar(dim, e)).collect(),
        )
    }

    pub fn entry(&self, i: usize, j: usize) -> &DForm {
        &self.entries[i * self.n + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut DForm {
        &mut self.entries[i * self.n + j]
    }

    pub fn add(&self, other: &FormMat) -> FormMat {
        assert_eq!((self.n, self.degree), (other.n, other.degree));
        FormMat {
            n: self.n,
            dim: self.dim,
            degree: self.degree,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    /// Matrix product with wedge products of entries.
    pub fn mul(&self, other: &FormMat) -> FormMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let degree = self.degree + other.degree;
        let mut out = FormMat::zero(n, self.dim, degree);
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.entry(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.wedge(b);
                    *out.entry_mut(i, j) = out.entry(i, j).add(&prod);
                }
            }
        }
        out
    }

    /// Entrywise exterior derivative.
    pub fn d(&self) -> FormMat {
        FormMat {
            n: self.n,
            dim: self.dim,
            degree: self.degree + 1,
            entries: self.entries.iter().map(DForm::d).collect(),
        }
    }

    pub fn trace(&self) -> DForm {
        let mut acc = DForm::zero(self.dim, self.degree);
        for i in 0..self.n {
            acc = acc.add(self.entry(i, i));
        }
        acc
    }

    pub fn scale_expr(&self, e: &Expr) -> FormMat {
        FormMat {
            n: self.n,
            dim: self.dim,
            degree: self.degree,
            entries: self.entries.iter().map(|a| a.scale(e)).collect(),
        }
    }

    /// Left-multiply by a matrix of plain expressions.
    pub fn left_mul_exprs(&self, a: &[Expr]) -> FormMat {
        assert_eq!(a.len(), self.n * self.n);
        let n = self.n;
        let mut out = FormMat::zero(n, self.dim, self.degree);
        for i in 0..n {
            for k in 0..n {
                let coeff = &a[i * n + k];
                if coeff.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let term = self.entry(k, j).scale(coeff);
                    *out.entry_mut(i, j) = out.entry(i, j).add(&term);
                }
            }
        }
        out
    }

    /// Evaluate all entries; returns one complex matrix per form component.
    pub fn eval(&self, x: f64, y: f64) -> Result<Vec<CMat>, EvalError> {
        let comps = comp_count(self.dim, self.degree);
        let mut out = vec![CMat::zeros(self.n); comps];
        for i in 0..self.n {
            for j in 0..self.n {
                let vals = self.entries[i * self.n + j].eval(x, y)?;
                for (c, v) in vals.into_iter().enumerate() {
                    out[c][(i, j)] = v;
                }
            }
        }
        Ok(out)
    }
}

/// A matrix-valued form given per chart.
#[derive(Debug, Clone)]
pub struct MatrixForm {
    pub n: usize,
    pub degree: usize,
    pub charts: Vec<FormMat>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::x()
    }
    fn y() -> Expr {
        Expr::y()
    }

    #[test]
    fn d_squared_vanishes_numerically() {
        let f = Expr::parse("exp(x*y) + x^3*y").unwrap();
        let ddf = DForm::scalar(2, f).d().d();
        for &(px, py) in &[(0.3, 0.4), (-0.9, 1.2)] {
            let v = ddf.eval(px, py).unwrap();
            assert!(v[0].norm() < 1e-12);
        }
    }

    #[test]
    fn wedge_is_antisymmetric_on_one_forms() {
        let a = DForm::one_form(2, vec![x(), Expr::zero()]);
        let b = DForm::one_form(2, vec![Expr::zero(), y()]);
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        let v = ab.add(&ba).eval(0.7, 1.3).unwrap();
        assert!(v[0].norm() < 1e-15);
        // x dx ^ y dy = x*y dx^dy
        assert!((ab.eval(0.7, 1.3).unwrap()[0].re - 0.91).abs() < 1e-12);
    }

    #[test]
    fn degree_past_dimension_collapses_to_zero() {
        let a = DForm::one_form(1, vec![x()]);
        let w = a.wedge(&a);
        assert_eq!(w.comps.len(), 0);
        assert!(w.is_zero() || w.comps.is_empty());
    }
}
