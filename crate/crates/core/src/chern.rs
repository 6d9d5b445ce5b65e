//! Chern character forms by two independent routes: the curvature trace
//! (1/(2 i pi)^p p!) Tr(R^p) and the projector trace
//! (1/(2 i pi)^p p!) Tr(Q (dQ)^{2p}), together with closedness,
//! chart-independence, integrality and route-agreement checks.
//!
//! The transcendental normalization is kept out of the symbolic forms and
//! applied as a complex scalar at evaluation and integration time.

use std::sync::Arc;

use num::complex::Complex64;
use rayon::prelude::*;

use crate::cocycle::{eval_matrix, Cocycle};
use crate::connection::Curvature;
use crate::error::CoreError;
use crate::expr::Expr;
use crate::forms::{DForm, FormMat};
use crate::geometry::{integrate, Atlas, PartitionOfUnity};
use crate::linalg::CMat;
use crate::report::{
    thresholds, ChernFormChecks, ChernNumber, InvarianceReport, ProjectorReport,
};

#[derive(Debug, Clone)]
pub struct ChernForm {
    pub p: u32,
    pub rank: usize,
    /// Per-chart scalar 2p-forms, without the normalization factor.
    pub forms: Vec<DForm>,
    /// 1 / ((2 i pi)^p p!), applied at evaluation time.
    pub norm: Complex64,
    pub partition: Arc<PartitionOfUnity>,
}

fn normalization(p: u32) -> Complex64 {
    // (2 i pi)^p p! = product over k of (2 i pi) k.
    let two_i_pi = Complex64::new(0.0, std::f64::consts::TAU);
    let mut denom = Complex64::new(1.0, 0.0);
    for k in 1..=p {
        denom *= two_i_pi * k as f64;
    }
    Complex64::new(1.0, 0.0) / denom
}

/// Tr(R^p) with normalization tag; p = 0 gives the constant rank.
pub fn chern_form(atlas: &Atlas, curv: &Curvature, p: u32) -> ChernForm {
    let dim = atlas.dim;
    let n = curv.r.n;
    let forms = curv
        .r
        .charts
        .iter()
        .map(|r| {
            if p == 0 {
                DForm::scalar(dim, Expr::int(n as i64))
            } else {
                let mut power = r.clone();
                for _ in 1..p {
                    power = power.mul(r);
                }
                power.trace()
            }
        })
        .collect();
    ChernForm {
        p,
        rank: n,
        forms,
        norm: normalization(p),
        partition: Arc::clone(&curv.partition),
    }
}

/// The projector presentation: an N x N idempotent matrix of expressions per
/// chart, N = (number of charts) * rank, with blocks beta_i beta_j g_ij.
#[derive(Debug, Clone)]
pub struct ProjectorField {
    pub rank: usize,
    pub big_n: usize,
    /// Per chart, a row-major big_n x big_n matrix of expressions in that
    /// chart's coordinates.
    pub mats: Vec<Vec<Expr>>,
    pub partition: Arc<PartitionOfUnity>,
}

/// Assemble Q with blocks beta_i beta_j g_ij. Each off-diagonal block is
/// built in chart j as rho_i rho_j g_ij (which vanishes outside the (i, j)
/// overlap), pulled to the target chart, and divided by the bump square sum
/// there; this is exactly beta_i beta_j g_ij because the alpha-denominator
/// cancels in beta.
pub fn build_projector(
    atlas: &Atlas,
    cocycle: &Cocycle,
    partition: &Arc<PartitionOfUnity>,
) -> Result<ProjectorField, CoreError> {
    let r = atlas.n_charts();
    let n = cocycle.rank;
    let big_n = r * n;

    // Charts whose bumps meet must have transition data.
    for i in 0..r {
        for j in i + 1..r {
            if atlas.overlaps.contains_key(&(i, j)) {
                continue;
            }
            for c in 0..r {
                let prod = Expr::mul(&partition.rho[i][c], &partition.rho[j][c]);
                for p in &atlas.charts[c].points {
                    if prod.eval(p[0], p[1])?.norm() > 1e-12 {
                        return Err(CoreError::SupportMismatch { i, j });
                    }
                }
            }
        }
    }

    let mut mats = Vec::with_capacity(r);
    for c in 0..r {
        let s2 = &partition.sum_sq[c];
        let mut q = vec![Expr::zero(); big_n * big_n];
        for i in 0..r {
            for j in 0..r {
                let block: Vec<Expr> = if i == j {
                    let diag = Expr::div(&partition.rho[i][c].powi(2), s2);
                    let mut b = vec![Expr::zero(); n * n];
                    for a in 0..n {
                        b[a * n + a] = diag.clone();
                    }
                    b
                } else if let Some(t_ij) = cocycle.matrix(i, j) {
                    let weight = Expr::mul(&partition.rho[i][j], &partition.rho[j][j]);
                    let masked: Vec<Expr> =
                        t_ij.iter().map(|e| Expr::mul(&weight, e)).collect();
                    atlas
                        .pull_supported_matrix(j, c, &masked)
                        .iter()
                        .map(|e| Expr::div(e, s2))
                        .collect()
                } else {
                    vec![Expr::zero(); n * n]
                };
                for a in 0..n {
                    for b in 0..n {
                        q[(i * n + a) * big_n + (j * n + b)] = block[a * n + b].clone();
                    }
                }
            }
        }
        mats.push(q);
    }
    Ok(ProjectorField {
        rank: n,
        big_n,
        mats,
        partition: Arc::clone(partition),
    })
}

/// |Q^2 - Q| and |Tr Q - n| over every sample point of every chart.
pub fn verify_projector(
    atlas: &Atlas,
    proj: &ProjectorField,
) -> Result<ProjectorReport, CoreError> {
    let big_n = proj.big_n;
    let n = proj.rank as f64;
    let mut max_idem = 0.0f64;
    let mut max_trace = 0.0f64;
    let mut points = 0usize;
    for (c, chart) in atlas.charts.iter().enumerate() {
        let results: Vec<Result<(f64, f64), CoreError>> = chart
            .points
            .par_iter()
            .map(|p| {
                let q = eval_matrix(&proj.mats[c], big_n, *p)?;
                let idem = q.mul(&q).sub(&q).norm_inf();
                let tr = (q.trace() - Complex64::new(n, 0.0)).norm();
                Ok((idem, tr))
            })
            .collect();
        for r in results {
            let (i, t) = r?;
            points += 1;
            max_idem = max_idem.max(i);
            max_trace = max_trace.max(t);
        }
    }
    Ok(ProjectorReport {
        max_idempotency_residual: max_idem,
        max_trace_residual: max_trace,
        points,
        pass: max_idem < thresholds::IDEMPOTENCY && max_trace < thresholds::TRACE,
    })
}

/// Tr(Q (dQ)^{2p}) with the normalization tag; p = 0 gives Tr(Q) = n.
pub fn chern_from_projector(atlas: &Atlas, proj: &ProjectorField, p: u32) -> ChernForm {
    let dim = atlas.dim;
    let big_n = proj.big_n;
    let forms = proj
        .mats
        .iter()
        .map(|q| {
            if p == 0 {
                let mut tr = Expr::zero();
                for a in 0..big_n {
                    tr = Expr::add(&tr, &q[a * big_n + a]);
                }
                DForm::scalar(dim, tr)
            } else {
                let entries = q
                    .iter()
                    .map(|e| DForm::scalar(dim, e.clone()).d())
                    .collect();
                let dq = FormMat::from_entries(big_n, dim, 1, entries);
                let mut power = dq.mul(&dq);
                for _ in 1..p {
                    power = power.mul(&dq).mul(&dq);
                }
                power.left_mul_exprs(q).trace()
            }
        })
        .collect();
    ChernForm {
        p,
        rank: proj.rank,
        forms,
        norm: normalization(p),
        partition: Arc::clone(&proj.partition),
    }
}

/// Integrate a top-degree Chern form; also reports the distance to the
/// nearest integer. Forms of degree above the manifold dimension are
/// identically zero and integrate to zero exactly.
pub fn chern_number(atlas: &Atlas, chf: &ChernForm) -> Result<ChernNumber, CoreError> {
    let deg = 2 * chf.p as usize;
    let integral = if deg > atlas.dim {
        Complex64::new(0.0, 0.0)
    } else if deg == atlas.dim {
        integrate(atlas, &chf.partition, &chf.forms)? * chf.norm
    } else {
        return Err(CoreError::DegreeMismatch {
            degree: deg,
            dim: atlas.dim,
        });
    };
    let nearest = integral.re.round();
    let distance = (integral - Complex64::new(nearest, 0.0)).norm();
    Ok(ChernNumber {
        integral_re: integral.re,
        integral_im: integral.im,
        nearest_integer: nearest as i64,
        integrality_distance: distance,
    })
}

/// Closedness (symbolic d, evaluated) and chart independence on overlaps.
pub fn verify_chern_form(atlas: &Atlas, chf: &ChernForm) -> Result<ChernFormChecks, CoreError> {
    let scale = chf.norm.norm();
    let mut closedness = 0.0f64;
    for (c, f) in chf.forms.iter().enumerate() {
        let df = f.d();
        if df.comps.is_empty() {
            continue;
        }
        let vals: Vec<Result<f64, CoreError>> = atlas.charts[c]
            .points
            .par_iter()
            .map(|p| {
                let v = df.eval(p[0], p[1])?;
                Ok(v.iter().map(|z| z.norm()).fold(0.0, f64::max))
            })
            .collect();
        for v in vals {
            closedness = closedness.max(v? * scale);
        }
    }

    let deg = 2 * chf.p as usize;
    let mut independence = 0.0f64;
    if deg <= atlas.dim {
        for (&(i, j), _) in atlas.overlaps.iter() {
            let vals: Vec<Result<Option<f64>, CoreError>> = atlas.charts[i]
                .points
                .par_iter()
                .map(|p| {
                    let Some((q, jac)) = atlas.map_with_jacobian(i, j, *p) else {
                        return Ok(None);
                    };
                    let here = chf.forms[i].eval(p[0], p[1])?;
                    let there = chf.forms[j].eval(q[0], q[1])?;
                    let factor = match deg {
                        0 => 1.0,
                        2 => jac[0] * jac[3] - jac[1] * jac[2],
                        _ => unreachable!("only even degrees occur"),
                    };
                    Ok(Some(if here.is_empty() {
                        0.0
                    } else {
                        (here[0] - there[0] * factor).norm() * scale
                    }))
                })
                .collect();
            for v in vals {
                if let Some(v) = v? {
                    independence = independence.max(v);
                }
            }
        }
    }

    Ok(ChernFormChecks {
        closedness_residual: closedness,
        chart_independence_residual: independence,
        pass: closedness < thresholds::CLOSEDNESS
            && independence < thresholds::CHART_INDEPENDENCE,
    })
}

/// Chart independence plus the class-level connection-independence check:
/// two partitions give two connections whose Chern integrals must agree.
pub fn verify_chern_invariance(
    atlas: &Atlas,
    cocycle: &Arc<Cocycle>,
    p: u32,
    part1: &Arc<PartitionOfUnity>,
    part2: &Arc<PartitionOfUnity>,
) -> Result<InvarianceReport, CoreError> {
    use crate::connection::{connection_from_partition, curvature};
    let mut chart_independence = 0.0f64;
    let mut integrals = Vec::new();
    for part in [part1, part2] {
        let conn = connection_from_partition(atlas, cocycle, part)?;
        let curv = curvature(atlas, &conn);
        let chf = chern_form(atlas, &curv, p);
        let checks = verify_chern_form(atlas, &chf)?;
        chart_independence = chart_independence.max(checks.chart_independence_residual);
        if 2 * p as usize == atlas.dim {
            let num = chern_number(atlas, &chf)?;
            integrals.push(Complex64::new(num.integral_re, num.integral_im));
        }
    }
    let integral_delta = match integrals.as_slice() {
        [a, b] => Some((a - b).norm()),
        _ => None,
    };
    let pass = chart_independence < thresholds::CHART_INDEPENDENCE
        && integral_delta.map_or(true, |d| d < thresholds::PARTITION_INDEPENDENCE);
    Ok(InvarianceReport {
        chart_independence,
        integral_delta,
        pass,
    })
}

#[cfg(test)]
mod tests;

#[cfg(test)]
pub(crate) fn projector_from_mats(
    rank: usize,
    big_n: usize,
    mats: Vec<Vec<Expr>>,
    partition: &Arc<PartitionOfUnity>,
) -> ProjectorField {
    ProjectorField {
        rank,
        big_n,
        mats,
        partition: Arc::clone(partition),
    }
}

/// Kept with the projector code because the eval path is shared.
pub(crate) fn eval_projector(
    proj: &ProjectorField,
    chart: usize,
    p: [f64; 2],
) -> Result<CMat, CoreError> {
    eval_matrix(&proj.mats[chart], proj.big_n, p)
}
