//! Quadrature of top-degree forms over a catalog manifold.
//!
//! The partition of unity is the Cech-style localizer: the integral is
//! sum_k of the chart-k quadrature of alpha_k times the form, so overlaps are
//! not double counted. The reduction order is fixed, so results are
//! bit-identical run to run regardless of thread count.

use num::complex::Complex64;
use rayon::prelude::*;

use crate::error::CoreError;
use crate::forms::DForm;

use super::{Atlas, PartitionOfUnity};

pub fn integrate(
    atlas: &Atlas,
    partition: &PartitionOfUnity,
    form: &[DForm],
) -> Result<Complex64, CoreError> {
    if form.len() != atlas.n_charts() {
        return Err(CoreError::ChartCount {
            expected: atlas.n_charts(),
            got: form.len(),
        });
    }
    for f in form {
        if f.degree != atlas.dim {
            return Err(CoreError::DegreeMismatch {
                degree: f.degree,
                dim: atlas.dim,
            });
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (c, chart) in atlas.charts.iter().enumerate() {
        let coeff = &form[c].comps[0];
        let alpha = &partition.alpha[c][c];
        let vals: Vec<Result<Complex64, CoreError>> = chart
            .points
            .par_iter()
            .zip(chart.weights.par_iter())
            .map(|(p, w)| {
                let a = alpha.eval(p[0], p[1])?;
                let v = coeff.eval(p[0], p[1])?;
                Ok(a * v * Complex64::new(*w, 0.0))
            })
            .collect();
        for v in vals {
            total += v?;
        }
    }
    Ok(total)
}
