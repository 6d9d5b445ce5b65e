//! Partitions of unity and their squared variants.
//!
//! Bumps are supplied per chart in that chart's own coordinates. Internally
//! every bump is expressed on every chart through the masked pullback, and
//! the normalizations
//!
//!   alpha_k = rho_k / sum_j rho_j        (partition of unity)
//!   beta_k  = rho_k / sqrt(sum_j rho_j^2) (squared partition; the common
//!                                          denominator of alpha cancels)
//!
//! are formed chart by chart, so alpha and beta stay exact expressions that
//! differentiate symbolically.

use num::complex::Complex64;
use rayon::prelude::*;

use crate::error::CoreError;
use crate::expr::Expr;

use super::Atlas;

#[derive(Debug, Clone)]
pub struct PartitionOfUnity {
    pub n_charts: usize,
    /// `rho[k][c]`: bump of chart `k` expressed on chart `c`.
    pub rho: Vec<Vec<Expr>>,
    /// `alpha[k][c]`.
    pub alpha: Vec<Vec<Expr>>,
    /// `beta[k][c]`.
    pub beta: Vec<Vec<Expr>>,
    /// Per chart, `sum_k rho_k` and `sum_k rho_k^2`.
    pub denom: Vec<Expr>,
    pub sum_sq: Vec<Expr>,
}

impl PartitionOfUnity {
    /// Normalize per-chart bumps into a partition of unity.
    ///
    /// Checks, on the sample grids: each bump is nonnegative on its own
    /// chart, and the bumps have no common zero.
    pub fn build(atlas: &Atlas, bumps: &[Expr]) -> Result<PartitionOfUnity, CoreError> {
        let n = atlas.n_charts();
        if bumps.len() != n {
            return Err(CoreError::BumpCount {
                expected: n,
                got: bumps.len(),
            });
        }
        for (k, bump) in bumps.iter().enumerate() {
            for p in &atlas.charts[k].points {
                let v = bump.eval(p[0], p[1])?;
                if v.im != 0.0 || v.re < -1e-12 {
                    return Err(CoreError::NegativeBump {
                        chart: k,
                        x: p[0],
                        y: p[1],
                        value: v.re,
                    });
                }
            }
        }

        let mut rho = vec![Vec::with_capacity(n); n];
        for k in 0..n {
            for c in 0..n {
                rho[k].push(atlas.pull_supported(k, c, &bumps[k]));
            }
        }
        let mut denom = Vec::with_capacity(n);
        let mut sum_sq = Vec::with_capacity(n);
        for c in 0..n {
            let mut d = Expr::zero();
            let mut s2 = Expr::zero();
            for rk in rho.iter() {
                d = Expr::add(&d, &rk[c]);
                s2 = Expr::add(&s2, &rk[c].powi(2));
            }
            denom.push(d);
            sum_sq.push(s2);
        }

        for (c, chart) in atlas.charts.iter().enumerate() {
            for p in &chart.points {
                let v = denom[c].eval(p[0], p[1])?;
                if v.re <= 1e-12 {
                    return Err(CoreError::CommonZero {
                        chart: c,
                        x: p[0],
                        y: p[1],
                    });
                }
            }
        }

        let mut alpha = vec![Vec::with_capacity(n); n];
        let mut beta = vec![Vec::with_capacity(n); n];
        for k in 0..n {
            for c in 0..n {
                alpha[k].push(Expr::div(&rho[k][c], &denom[c]));
                beta[k].push(Expr::div(&rho[k][c], &sum_sq[c].sqrt()));
            }
        }
        Ok(PartitionOfUnity {
            n_charts: n,
            rho,
            alpha,
            beta,
            denom,
            sum_sq,
        })
    }

    /// The catalog partition for a manifold.
    pub fn standard(atlas: &Atlas) -> Result<PartitionOfUnity, CoreError> {
        let id = atlas
            .id
            .ok_or_else(|| CoreError::UnknownManifold(atlas.name.clone()))?;
        PartitionOfUnity::build(atlas, &super::catalog::standard_bumps(id))
    }

    /// A second catalog partition, distinct from `standard`.
    pub fn alternate(atlas: &Atlas) -> Result<PartitionOfUnity, CoreError> {
        let id = atlas
            .id
            .ok_or_else(|| CoreError::UnknownManifold(atlas.name.clone()))?;
        PartitionOfUnity::build(atlas, &super::catalog::alternate_bumps(id))
    }

    pub fn named(atlas: &Atlas, name: &str) -> Result<PartitionOfUnity, CoreError> {
        match name {
            "standard" => PartitionOfUnity::standard(atlas),
            "alternate" => PartitionOfUnity::alternate(atlas),
            other => Err(CoreError::UnknownManifold(format!(
                "unknown partition `{other}`"
            ))),
        }
    }

    /// Max over all sample points of |sum_k alpha_k - 1|, |sum_k beta_k^2 - 1|,
    /// and the most negative alpha value seen (as a nonnegative residual).
    pub fn identity_residuals(&self, atlas: &Atlas) -> Result<PartitionResiduals, CoreError> {
        let mut sum_alpha = 0.0f64;
        let mut sum_beta_sq = 0.0f64;
        let mut negativity = 0.0f64;
        for (c, chart) in atlas.charts.iter().enumerate() {
            let per_point: Vec<Result<(f64, f64, f64), CoreError>> = chart
                .points
                .par_iter()
                .map(|p| {
                    let mut sa = Complex64::new(0.0, 0.0);
                    let mut sb = Complex64::new(0.0, 0.0);
                    let mut neg = 0.0f64;
                    for k in 0..self.n_charts {
                        let a = self.alpha[k][c].eval(p[0], p[1])?;
                        let b = self.beta[k][c].eval(p[0], p[1])?;
                        sa += a;
                        sb += b * b;
                        neg = neg.max(-a.re);
                    }
                    Ok((
                        (sa - Complex64::new(1.0, 0.0)).norm(),
                        (sb - Complex64::new(1.0, 0.0)).norm(),
                        neg,
                    ))
                })
                .collect();
            for r in per_point {
                let (a, b, neg) = r?;
                sum_alpha = sum_alpha.max(a);
                sum_beta_sq = sum_beta_sq.max(b);
                negativity = negativity.max(neg);
            }
        }
        Ok(PartitionResiduals {
            sum_alpha,
            sum_beta_sq,
            negativity,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PartitionResiduals {
    pub sum_alpha: f64,
    pub sum_beta_sq: f64,
    pub negativity: f64,
}
