//! Connections assembled from a cocycle and a partition of unity by the
//! barycenter of Maurer-Cartan pullbacks,
//!
//!   Gamma_i = sum_k alpha_k g_ik d g_ki,
//!
//! their gluing law, the curvature R_i = d Gamma_i + Gamma_i^2, and its
//! tensorial transformation under chart changes. All derivatives are
//! symbolic, so the residuals measure transport and algebra, not
//! differentiation error.

use std::sync::Arc;

use num::complex::Complex64;
use rayon::prelude::*;

use crate::cocycle::{eval_matrix, Cocycle};
use crate::error::CoreError;
use crate::expr::Expr;
use crate::forms::{DForm, FormMat, MatrixForm};
use crate::geometry::{Atlas, PartitionOfUnity};
use crate::linalg::CMat;
use crate::report::{thresholds, GluingReport, TensorialityReport};

#[derive(Debug, Clone)]
pub struct Connection {
    pub gamma: MatrixForm,
    pub cocycle: Arc<Cocycle>,
    pub partition: Arc<PartitionOfUnity>,
}

#[derive(Debug, Clone)]
pub struct Curvature {
    pub r: MatrixForm,
    pub cocycle: Arc<Cocycle>,
    pub partition: Arc<PartitionOfUnity>,
}

/// Entrywise exterior derivative of a matrix of scalar expressions.
fn d_matrix(exprs: &[Expr], n: usize, dim: usize) -> FormMat {
    let entries = exprs
        .iter()
        .map(|e| DForm::scalar(dim, e.clone()).d())
        .collect();
    FormMat::from_entries(n, dim, 1, entries)
}

/// Assemble the barycenter connection. Each term alpha_k g_ik d g_ki is
/// built as the masked pullback of (rho_k g_ik) from chart k — which
/// vanishes identically outside the overlap because the bump does — divided
/// by the chart-i bump sum, then multiplied into the symbolic derivative of
/// g_ki, which is already written in chart-i coordinates.
pub fn connection_from_partition(
    atlas: &Atlas,
    cocycle: &Arc<Cocycle>,
    partition: &Arc<PartitionOfUnity>,
) -> Result<Connection, CoreError> {
    let n = cocycle.rank;
    let dim = atlas.dim;
    let mut charts = Vec::with_capacity(atlas.n_charts());
    for i in 0..atlas.n_charts() {
        let mut gamma_i = FormMat::zero(n, dim, 1);
        for k in 0..atlas.n_charts() {
            if k == i || !atlas.overlaps.contains_key(&(i, k)) {
                continue;
            }
            let (Some(t_ik), Some(t_ki)) = (cocycle.matrix(i, k), cocycle.matrix(k, i)) else {
                return Err(CoreError::MissingTransition { a: i, b: k });
            };
            let rho_k = &partition.rho[k][k];
            let masked: Vec<Expr> = t_ik.iter().map(|e| Expr::mul(rho_k, e)).collect();
            let pulled = atlas.pull_supported_matrix(k, i, &masked);
            let coeff: Vec<Expr> = pulled
                .iter()
                .map(|e| Expr::div(e, &partition.denom[i]))
                .collect();
            let dt = d_matrix(&t_ki, n, dim);
            gamma_i = gamma_i.add(&dt.left_mul_exprs(&coeff));
        }
        charts.push(gamma_i);
    }
    Ok(Connection {
        gamma: MatrixForm {
            n,
            degree: 1,
            charts,
        },
        cocycle: Arc::clone(cocycle),
        partition: Arc::clone(partition),
    })
}

fn eval_comps(m: &FormMat, p: [f64; 2]) -> Result<Vec<CMat>, CoreError> {
    Ok(m.eval(p[0], p[1])?)
}

/// Max overlap residual of Gamma_i = g_ij Gamma_j g_ji + g_ij d g_ji, with
/// the chart-j one-form components transported through the overlap map's
/// Jacobian.
pub fn verify_gluing(
    atlas: &Atlas,
    cocycle: &Cocycle,
    conn: &Connection,
) -> Result<GluingReport, CoreError> {
    let n = cocycle.rank;
    let dim = atlas.dim;
    let mut max_residual = 0.0f64;
    let mut points = 0usize;
    for (&(i, j), _) in atlas.overlaps.iter() {
        let (Some(t_ij), Some(t_ji)) = (cocycle.matrix(i, j), cocycle.matrix(j, i)) else {
            return Err(CoreError::MissingTransition { a: i, b: j });
        };
        let dt_ji = d_matrix(&t_ji, n, dim);
        let results: Vec<Result<Option<f64>, CoreError>> = atlas.charts[i]
            .points
            .par_iter()
            .map(|p| {
                let Some((q, jac)) = atlas.map_with_jacobian(i, j, *p) else {
                    return Ok(None);
                };
                let lhs = eval_comps(&conn.gamma.charts[i], *p)?;
                let gamma_j = eval_comps(&conn.gamma.charts[j], q)?;
                let m_ij = eval_matrix(&t_ij, n, q)?;
                let m_ji = eval_matrix(&t_ji, n, *p)?;
                let dt = eval_comps(&dt_ji, *p)?;
                let mut resid = 0.0f64;
                for a in 0..dim {
                    // Pull back the chart-j component: sum_r Gamma_j^r Jac[r][a].
                    let mut pulled = CMat::zeros(n);
                    for (r, g) in gamma_j.iter().enumerate() {
                        let f = jac[r * dim + a];
                        if f != 0.0 {
                            pulled = pulled.add_scaled(g, f);
                        }
                    }
                    let rhs = m_ij
                        .mul(&pulled)
                        .mul(&m_ji)
                        .add_scaled(&m_ij.mul(&dt[a]), 1.0);
                    resid = resid.max(lhs[a].sub(&rhs).norm_inf());
                }
                Ok(Some(resid))
            })
            .collect();
        for r in results {
            if let Some(v) = r? {
                points += 1;
                max_residual = max_residual.max(v);
            }
        }
    }
    Ok(GluingReport {
        max_residual,
        points,
        pass: max_residual < thresholds::GLUING,
    })
}

/// R_i = d Gamma_i + Gamma_i ^ Gamma_i, computed symbolically per chart.
pub fn curvature(atlas: &Atlas, conn: &Connection) -> Curvature {
    let n = conn.gamma.n;
    let charts = conn
        .gamma
        .charts
        .iter()
        .map(|g| g.d().add(&g.mul(g)))
        .collect();
    let _ = atlas;
    Curvature {
        r: MatrixForm {
            n,
            degree: 2,
            charts,
        },
        cocycle: Arc::clone(&conn.cocycle),
        partition: Arc::clone(&conn.partition),
    }
}

/// Max overlap residual of the conjugation law R_i = g_ij R_j g_ji, the
/// two-form components transported by the Jacobian determinant. Trivially
/// zero on curves, where every two-form vanishes identically.
pub fn verify_tensoriality(
    atlas: &Atlas,
    cocycle: &Cocycle,
    curv: &Curvature,
) -> Result<TensorialityReport, CoreError> {
    let n = cocycle.rank;
    let dim = atlas.dim;
    let mut max_residual = 0.0f64;
    let mut points = 0usize;
    if dim >= 2 {
        for (&(i, j), _) in atlas.overlaps.iter() {
            let (Some(t_ij), Some(t_ji)) = (cocycle.matrix(i, j), cocycle.matrix(j, i)) else {
                return Err(CoreError::MissingTransition { a: i, b: j });
            };
            let results: Vec<Result<Option<f64>, CoreError>> = atlas.charts[i]
                .points
                .par_iter()
                .map(|p| {
                    let Some((q, jac)) = atlas.map_with_jacobian(i, j, *p) else {
                        return Ok(None);
                    };
                    let det = jac[0] * jac[3] - jac[1] * jac[2];
                    let lhs = &eval_comps(&curv.r.charts[i], *p)?[0];
                    let r_j = &eval_comps(&curv.r.charts[j], q)?[0];
                    let m_ij = eval_matrix(&t_ij, n, q)?;
                    let m_ji = eval_matrix(&t_ji, n, *p)?;
                    let rhs = m_ij.mul(&r_j.scale(Complex64::new(det, 0.0))).mul(&m_ji);
                    Ok(Some(lhs.sub(&rhs).norm_inf()))
                })
                .collect();
            for r in results {
                if let Some(v) = r? {
                    points += 1;
                    max_residual = max_residual.max(v);
                }
            }
        }
    }
    Ok(TensorialityReport {
        max_residual,
        points,
        pass: max_residual < thresholds::TENSORIALITY,
    })
}

#[cfg(test)]
mod tests;
