//! Transition-function cocycles, the cocycle condition, cohomologous
//! equivalence, and refinement.
//!
//! A cocycle stores, for each ordered pair of overlapping charts `(a, b)`,
//! the frame change from chart `b` to chart `a` as an n x n matrix of
//! expressions in chart-`b` coordinates, with the composition convention
//!
//!   t[(c, a)] = t[(c, b)] * t[(b, a)]   on triple overlaps.
//!
//! Bundles are represented only by their cocycles; verification is by
//! sampling on the atlas grids, and residual thresholds are the contract.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::CoreError;
use crate::expr::Expr;
use crate::geometry::{Atlas, Domain, ManifoldId, OverlapMap, Piece, Point};
use crate::linalg::CMat;
use crate::report::{thresholds, CocycleReport, CohomologousReport};

#[derive(Debug, Clone)]
pub struct Cocycle {
    pub rank: usize,
    /// Row-major n x n expression matrices, keyed by (to, from), written in
    /// the source (`from`) chart's coordinates.
    pub trans: BTreeMap<(usize, usize), Vec<Expr>>,
}

pub fn identity_exprs(n: usize) -> Vec<Expr> {
    let mut m = vec![Expr::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = Expr::one();
    }
    m
}

pub(crate) fn eval_matrix(
    exprs: &[Expr],
    n: usize,
    p: Point,
) -> Result<CMat, CoreError> {
    let mut m = CMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = exprs[i * n + j].eval(p[0], p[1])?;
        }
    }
    Ok(m)
}

impl Cocycle {
    /// The transition matrix `from -> to` in `from`-chart coordinates;
    /// the identity when `to == from`.
    pub fn matrix(&self, to: usize, from: usize) -> Option<Vec<Expr>> {
        if to == from {
            return Some(identity_exprs(self.rank));
        }
        self.trans.get(&(to, from)).cloned()
    }

    pub fn eval(&self, to: usize, from: usize, p: Point) -> Result<Option<CMat>, CoreError> {
        match self.matrix(to, from) {
            Some(m) => Ok(Some(eval_matrix(&m, self.rank, p)?)),
            None => Ok(None),
        }
    }

    /// The constant identity cocycle on every overlapping pair.
    pub fn trivial(atlas: &Atlas, rank: usize) -> Cocycle {
        let mut trans = BTreeMap::new();
        for &(a, b) in atlas.overlaps.keys() {
            trans.insert((b, a), identity_exprs(rank));
        }
        Cocycle { rank, trans }
    }

    /// The rank-1 clutching cocycle of degree `k` on the sphere:
    /// g_21 = (x + i y)^k on the overlap annulus, which excludes the origin,
    /// so negative `k` is allowed. By the symmetry of w = 1/z the opposite
    /// direction has the same expression in its own chart.
    pub fn clutching(atlas: &Atlas, degree: i32) -> Result<Cocycle, CoreError> {
        if atlas.id != Some(ManifoldId::Sphere2) {
            return Err(CoreError::WrongManifold {
                expected: "sphere2".into(),
                got: atlas.name.clone(),
            });
        }
        let z = Expr::add(&Expr::x(), &Expr::mul(&Expr::i(), &Expr::y()));
        let g = z.powi(degree);
        let mut trans = BTreeMap::new();
        trans.insert((1usize, 0usize), vec![g.clone()]);
        trans.insert((0, 1), vec![g]);
        Ok(Cocycle { rank: 1, trans })
    }

    /// A flat rank-1 cocycle on the three-arc circle with holonomy
    /// `exp(i theta)`. The transitions touching the short arc are constant 1;
    /// the (0,2) transition is 1 on the overlap component that meets the
    /// short arc (where the cocycle condition forces it) and `exp(i theta)`
    /// on the component clear of it, joined by a smooth ramp supported in
    /// the gap between the two components.
    pub fn flat_circle(atlas: &Atlas, theta: f64) -> Result<Cocycle, CoreError> {
        if atlas.id != Some(ManifoldId::Circle3) {
            return Err(CoreError::WrongManifold {
                expected: "circle3".into(),
                got: atlas.name.clone(),
            });
        }
        let one = identity_exprs(1);
        let theta = Expr::from_f64(theta);
        let it = Expr::mul(&Expr::i(), &theta);
        // Chart-0 coordinates: component A = (7/6, 3/2) gets 1, component
        // B = (-3/2, 1/6) gets exp(i theta).
        let ramp0 = Expr::bump(&Expr::x(), &Expr::ratio(1, 6), &Expr::ratio(7, 6));
        let g20 = Expr::mul(&it, &Expr::sub(&Expr::one(), &ramp0)).exp();
        // Chart-2 coordinates: A = (7/6, 3/2), B = (5/2, 25/6).
        let ramp2 = Expr::bump(&Expr::x(), &Expr::ratio(3, 2), &Expr::ratio(5, 2));
        let g02 = Expr::mul(&Expr::neg(&it), &ramp2).exp();
        let mut trans = BTreeMap::new();
        trans.insert((1usize, 0usize), one.clone());
        trans.insert((0, 1), one.clone());
        trans.insert((2, 1), one.clone());
        trans.insert((1, 2), one);
        trans.insert((2, 0), vec![g20]);
        trans.insert((0, 2), vec![g02]);
        Ok(Cocycle { rank: 1, trans })
    }

    /// Block-diagonal direct sum; both summands must live on the same atlas.
    pub fn direct_sum(&self, other: &Cocycle) -> Cocycle {
        let n1 = self.rank;
        let n2 = other.rank;
        let n = n1 + n2;
        let mut trans = BTreeMap::new();
        let mut keys: Vec<_> = self.trans.keys().chain(other.trans.keys()).collect();
        keys.sort();
        keys.dedup();
        for &&(a, b) in &keys {
            let ma = self.matrix(a, b).unwrap_or_else(|| identity_exprs(n1));
            let mb = other.matrix(a, b).unwrap_or_else(|| identity_exprs(n2));
            let mut m = vec![Expr::zero(); n * n];
            for i in 0..n1 {
                for j in 0..n1 {
                    m[i * n + j] = ma[i * n1 + j].clone();
                }
            }
            for i in 0..n2 {
                for j in 0..n2 {
                    m[(n1 + i) * n + (n1 + j)] = mb[i * n2 + j].clone();
                }
            }
            trans.insert((a, b), m);
        }
        Cocycle { rank: n, trans }
    }

    /// Build from explicit expression matrices. Every ordered overlapping
    /// pair present in the atlas must be supplied.
    pub fn from_matrices(
        atlas: &Atlas,
        rank: usize,
        mats: BTreeMap<(usize, usize), Vec<Expr>>,
    ) -> Result<Cocycle, CoreError> {
        for &(a, b) in atlas.overlaps.keys() {
            if !mats.contains_key(&(b, a)) {
                return Err(CoreError::MissingTransition { a: b, b: a });
            }
        }
        Ok(Cocycle { rank, trans: mats })
    }
}

/// CoboundaryWitness: per-chart invertible matrices relating two cocycles by
/// h_ji = lambda_j^-1 g_ji lambda_i.
#[derive(Debug, Clone)]
pub struct CoboundaryWitness {
    pub rank: usize,
    /// Row-major n x n matrices, one per chart, in that chart's coordinates.
    pub lambda: Vec<Vec<Expr>>,
}

impl CoboundaryWitness {
    pub fn identity(n_charts: usize, rank: usize) -> CoboundaryWitness {
        CoboundaryWitness {
            rank,
            lambda: vec![identity_exprs(rank); n_charts],
        }
    }
}

/// Check the inverse and cocycle conditions and the invertibility margin on
/// every overlap sample point.
pub fn verify_cocycle(atlas: &Atlas, c: &Cocycle) -> Result<CocycleReport, CoreError> {
    let n = c.rank;
    let mut max_inverse = 0.0f64;
    let mut max_cocycle = 0.0f64;
    let mut min_det = f64::INFINITY;
    let mut pair_points = 0usize;
    let mut triple_points = 0usize;
    let charts = atlas.n_charts();

    for a in 0..charts {
        for b in 0..charts {
            if a == b {
                continue;
            }
            let Some(t_ab) = c.matrix(a, b) else { continue };
            let Some(t_ba) = c.matrix(b, a) else {
                return Err(CoreError::MissingTransition { a: b, b: a });
            };
            let results: Vec<Result<Option<(f64, f64)>, CoreError>> = atlas.charts[b]
                .points
                .par_iter()
                .map(|p| {
                    let Some((q, _)) = atlas.apply_map(b, a, *p) else {
                        return Ok(None);
                    };
                    let m_ab = eval_matrix(&t_ab, n, *p)?;
                    let m_ba = eval_matrix(&t_ba, n, q)?;
                    let resid = m_ab.mul(&m_ba).sub(&CMat::identity(n)).norm_inf();
                    Ok(Some((resid, m_ab.det().norm())))
                })
                .collect();
            for r in results {
                if let Some((resid, det)) = r? {
                    pair_points += 1;
                    max_inverse = max_inverse.max(resid);
                    min_det = min_det.min(det);
                }
            }
        }
    }

    // Cocycle condition t_ca = t_cb t_ba on triple overlaps, sampled in
    // chart a.
    for a in 0..charts {
        for b in 0..charts {
            for cc in 0..charts {
                if a == b || b == cc || a == cc {
                    continue;
                }
                let (Some(t_ca), Some(t_ba), Some(t_cb)) =
                    (c.matrix(cc, a), c.matrix(b, a), c.matrix(cc, b))
                else {
                    continue;
                };
                let results: Vec<Result<Option<f64>, CoreError>> = atlas.charts[a]
                    .points
                    .par_iter()
                    .map(|p| {
                        let Some((qb, _)) = atlas.apply_map(a, b, *p) else {
                            return Ok(None);
                        };
                        if !atlas.in_overlap(a, cc, *p) {
                            return Ok(None);
                        }
                        let m_ca = eval_matrix(&t_ca, n, *p)?;
                        let m_ba = eval_matrix(&t_ba, n, *p)?;
                        let m_cb = eval_matrix(&t_cb, n, qb)?;
                        Ok(Some(m_ca.sub(&m_cb.mul(&m_ba)).norm_inf()))
                    })
                    .collect();
                for r in results {
                    if let Some(resid) = r? {
                        triple_points += 1;
                        max_cocycle = max_cocycle.max(resid);
                    }
                }
            }
        }
    }

    let pass = max_inverse < thresholds::COCYCLE
        && max_cocycle < thresholds::COCYCLE
        && min_det > 1e-10;
    Ok(CocycleReport {
        max_cocycle_residual: max_cocycle,
        max_inverse_residual: max_inverse,
        min_det,
        pair_points,
        triple_points,
        pass,
    })
}

/// Residual of h_ji = lambda_j^-1 g_ji lambda_i over overlap sample points.
pub fn verify_cohomologous(
    atlas: &Atlas,
    g: &Cocycle,
    h: &Cocycle,
    w: &CoboundaryWitness,
) -> Result<CohomologousReport, CoreError> {
    if g.rank != h.rank {
        return Err(CoreError::RankMismatch {
            a: g.rank,
            b: h.rank,
        });
    }
    if g.rank != w.rank {
        return Err(CoreError::RankMismatch {
            a: g.rank,
            b: w.rank,
        });
    }
    let n = g.rank;
    let mut max_residual = 0.0f64;
    let mut points = 0usize;
    for (&(a, b), g_ab) in &g.trans {
        let Some(h_ab) = h.matrix(a, b) else {
            return Err(CoreError::MissingTransition { a, b });
        };
        let results: Vec<Result<Option<f64>, CoreError>> = atlas.charts[b]
            .points
            .par_iter()
            .map(|p| {
                let Some((q, _)) = atlas.apply_map(b, a, *p) else {
                    return Ok(None);
                };
                let lam_b = eval_matrix(&w.lambda[b], n, *p)?;
                let lam_a = eval_matrix(&w.lambda[a], n, q)?;
                let lam_a_inv = lam_a.inverse().ok_or(CoreError::SingularWitness {
                    chart: a,
                    x: q[0],
                    y: q[1],
                })?;
                let rhs = lam_a_inv.mul(&eval_matrix(g_ab, n, *p)?).mul(&lam_b);
                let lhs = eval_matrix(&h_ab, n, *p)?;
                Ok(Some(lhs.sub(&rhs).norm_inf()))
            })
            .collect();
        for r in results {
            if let Some(resid) = r? {
                points += 1;
                max_residual = max_residual.max(resid);
            }
        }
    }
    Ok(CohomologousReport {
        max_residual,
        points,
        pass: max_residual < thresholds::COCYCLE,
    })
}

/// A finer patch: a box inside a parent chart, using the parent's
/// coordinates.
#[derive(Debug, Clone)]
pub struct RefinePatch {
    pub parent: usize,
    pub domain: Domain,
}

fn contained(inner: &Domain, outer: &Domain) -> bool {
    match (inner, outer) {
        (Domain::Interval { lo, hi }, Domain::Interval { lo: olo, hi: ohi }) => {
            lo >= olo && hi <= ohi
        }
        (Domain::Rect { x0, x1, y0, y1 }, Domain::Rect { x0: a, x1: b, y0: c, y1: d }) => {
            x0 >= a && x1 <= b && y0 >= c && y1 <= d
        }
        (Domain::Rect { x0, x1, y0, y1 }, Domain::Disk { radius }) => {
            let corners = [(*x0, *y0), (*x0, *y1), (*x1, *y0), (*x1, *y1)];
            corners
                .iter()
                .all(|(cx, cy)| cx * cx + cy * cy <= radius * radius)
        }
        _ => false,
    }
}

/// Restrict a cocycle to a finer cover. Each new transition is the parent
/// transition `g_{i(beta) i(alpha)}`, already written in the assigned
/// chart's coordinates, so only the atlas changes. Returns the refined
/// atlas together with the restricted cocycle.
pub fn refine_cocycle(
    atlas: &Atlas,
    c: &Cocycle,
    patches: &[RefinePatch],
) -> Result<(Atlas, Cocycle), CoreError> {
    use crate::geometry::Chart;
    for (idx, patch) in patches.iter().enumerate() {
        if patch.parent >= atlas.n_charts()
            || !contained(&patch.domain, &atlas.charts[patch.parent].domain)
        {
            return Err(CoreError::Containment { patch: idx });
        }
    }
    let charts: Vec<Chart> = patches
        .iter()
        .enumerate()
        .map(|(idx, p)| Chart::new(format!("patch{idx}"), p.domain.clone(), atlas.resolution))
        .collect();
    let mut overlaps = BTreeMap::new();
    let mut trans = BTreeMap::new();
    let dim = atlas.dim;
    for (alpha, pa) in patches.iter().enumerate() {
        for (beta, pb) in patches.iter().enumerate() {
            if alpha == beta {
                continue;
            }
            if pa.parent == pb.parent {
                let ident = Piece::new(
                    dim,
                    if dim == 1 {
                        vec![Expr::x()]
                    } else {
                        vec![Expr::x(), Expr::y()]
                    },
                );
                overlaps.insert(
                    (alpha, beta),
                    OverlapMap {
                        pieces: vec![ident],
                    },
                );
                trans.insert((beta, alpha), identity_exprs(c.rank));
            } else if let Some(om) = atlas.overlaps.get(&(pa.parent, pb.parent)) {
                overlaps.insert((alpha, beta), om.clone());
                let Some(t) = c.matrix(pb.parent, pa.parent) else {
                    return Err(CoreError::MissingTransition {
                        a: pb.parent,
                        b: pa.parent,
                    });
                };
                trans.insert((beta, alpha), t);
            }
        }
    }
    let refined = Atlas {
        name: format!("{}-refined", atlas.name),
        id: None,
        dim,
        resolution: atlas.resolution,
        charts,
        overlaps,
    };
    Ok((
        refined,
        Cocycle {
            rank: c.rank,
            trans,
        },
    ))
}
