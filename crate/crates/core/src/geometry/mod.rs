//! Catalog atlases with overlap maps, sample grids, partitions of unity and
//! quadrature of differential forms.
//!
//! Charts are fixed boxes, intervals or disks with built-in closed-form
//! coordinate changes. An overlap map between two charts is a list of
//! *pieces*: candidate closed-form maps of which, at any given source point,
//! at most one lands inside the target chart's domain. This covers both the
//! single rational transition of the two-chart sphere and the multi-component
//! translation overlaps of periodic manifolds (circle and torus use period 4,
//! so every built-in constant is an exact rational).
//!
//! Grids are midpoint grids: they avoid chart boundaries and coordinate
//! singular points (polar grids never sample r = 0), and the midpoint rule on
//! smooth integrands that vanish near the chart boundary converges faster
//! than any power of the step.

mod catalog;
mod integrate;
mod partition;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;
use crate::expr::{Expr, Var};

pub use integrate::integrate;
pub use partition::PartitionOfUnity;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldId {
    /// Circle covered by three arcs; one pair of arcs overlaps in two
    /// components and the triple overlap is nonempty.
    Circle3,
    /// Round sphere with two stereographic disk charts, transition w = 1/z.
    Sphere2,
    /// Torus with four periodic box patches.
    Torus4,
}

impl ManifoldId {
    pub fn dim(&self) -> usize {
        match self {
            ManifoldId::Circle3 => 1,
            ManifoldId::Sphere2 => 2,
            ManifoldId::Torus4 => 2,
        }
    }

    pub fn all() -> [ManifoldId; 3] {
        [ManifoldId::Circle3, ManifoldId::Sphere2, ManifoldId::Torus4]
    }
}

impl fmt::Display for ManifoldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ManifoldId::Circle3 => "circle3",
            ManifoldId::Sphere2 => "sphere2",
            ManifoldId::Torus4 => "torus4",
        };
        write!(f, "{s}")
    }
}

impl FromStr for ManifoldId {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s {
            "circle3" => Ok(ManifoldId::Circle3),
            "sphere2" => Ok(ManifoldId::Sphere2),
            "torus4" => Ok(ManifoldId::Torus4),
            other => Err(CoreError::UnknownManifold(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Interval { lo: f64, hi: f64 },
    Disk { radius: f64 },
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
}

impl Domain {
    /// Strict interior membership.
    pub fn contains(&self, p: Point) -> bool {
        match self {
            Domain::Interval { lo, hi } => *lo < p[0] && p[0] < *hi,
            Domain::Disk { radius } => p[0] * p[0] + p[1] * p[1] < radius * radius,
            Domain::Rect { x0, x1, y0, y1 } => {
                *x0 < p[0] && p[0] < *x1 && *y0 < p[1] && p[1] < *y1
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub label: String,
    pub domain: Domain,
    /// Midpoint sample grid.
    pub points: Vec<Point>,
    /// Quadrature weight per sample point, including the parametrization
    /// factor (r for polar grids).
    pub weights: Vec<f64>,
}

impl Chart {
    pub fn new(label: impl Into<String>, domain: Domain, resolution: u32) -> Chart {
        let res = resolution as usize;
        let (points, weights) = match &domain {
            Domain::Interval { lo, hi } => {
                let h = (hi - lo) / res as f64;
                let pts = (0..res)
                    .map(|k| [lo + (k as f64 + 0.5) * h, 0.0])
                    .collect::<Vec<_>>();
                (pts, vec![h; res])
            }
            Domain::Disk { radius } => {
                let dr = radius / res as f64;
                let dt = std::f64::consts::TAU / res as f64;
                let mut pts = Vec::with_capacity(res * res);
                let mut ws = Vec::with_capacity(res * res);
                for m in 0..res {
                    let r = (m as f64 + 0.5) * dr;
                    // Gregory-type endpoint correction at the polar center:
                    // the radial integrand r*f does not vanish to second
                    // order at r = 0, so plain midpoint weights leave an
                    // O(h^2) defect there. Adjusting the first three radial
                    // layers cancels it; the factors are exactly 1 + c/24
                    // for c = 2, -3, 1.
                    let corr = match m {
                        0 => 1.0 + 2.0 / 24.0,
                        1 => 1.0 - 3.0 / 24.0,
                        2 => 1.0 + 1.0 / 24.0,
                        _ => 1.0,
                    };
                    for l in 0..res {
                        let t = (l as f64 + 0.5) * dt;
                        pts.push([r * t.cos(), r * t.sin()]);
                        ws.push(r * dr * dt * corr);
                    }
                }
                (pts, ws)
            }
            Domain::Rect { x0, x1, y0, y1 } => {
                let hx = (x1 - x0) / res as f64;
                let hy = (y1 - y0) / res as f64;
                let mut pts = Vec::with_capacity(res * res);
                for m in 0..res {
                    for l in 0..res {
                        pts.push([x0 + (m as f64 + 0.5) * hx, y0 + (l as f64 + 0.5) * hy]);
                    }
                }
                (pts, vec![hx * hy; res * res])
            }
        };
        Chart {
            label: label.into(),
            domain,
            points,
            weights,
        }
    }
}

/// One closed-form candidate map between two charts' coordinates.
#[derive(Debug, Clone)]
pub struct Piece {
    /// Component expressions, in source-chart coordinates.
    pub map: Vec<Expr>,
    /// Row-major Jacobian entries, differentiated symbolically at build time.
    pub jac: Vec<Expr>,
}

impl Piece {
    pub fn new(dim: usize, map: Vec<Expr>) -> Piece {
        assert_eq!(map.len(), dim);
        let vars = [Var::X, Var::Y];
        let mut jac = Vec::with_capacity(dim * dim);
        for comp in &map {
            for v in vars.iter().take(dim) {
                jac.push(comp.differentiate(*v));
            }
        }
        Piece { map, jac }
    }
}

#[derive(Debug, Clone)]
pub struct OverlapMap {
    pub pieces: Vec<Piece>,
}

#[derive(Debug, Clone)]
pub struct Atlas {
    pub name: String,
    pub id: Option<ManifoldId>,
    pub dim: usize,
    pub resolution: u32,
    pub charts: Vec<Chart>,
    /// Keyed by (source, target); expressions in source coordinates.
    pub overlaps: BTreeMap<(usize, usize), OverlapMap>,
}

pub const MIN_RESOLUTION: u32 = 8;

impl Atlas {
    /// Build a catalog atlas with `resolution` sample points per axis.
    pub fn build(id: ManifoldId, resolution: u32) -> Result<Atlas, CoreError> {
        if resolution < MIN_RESOLUTION {
            return Err(CoreError::ResolutionTooSmall {
                given: resolution,
                min: MIN_RESOLUTION,
            });
        }
        Ok(match id {
            ManifoldId::Sphere2 => catalog::sphere2(resolution),
            ManifoldId::Circle3 => catalog::circle3(resolution),
            ManifoldId::Torus4 => catalog::torus4(resolution),
        })
    }

    /// Parse-and-build, for config-driven callers.
    pub fn build_named(name: &str, resolution: u32) -> Result<Atlas, CoreError> {
        Atlas::build(name.parse()?, resolution)
    }

    pub fn n_charts(&self) -> usize {
        self.charts.len()
    }

    /// Apply the coordinate change `from -> to` at a source point. Returns
    /// the target coordinates and the index of the piece used, or `None`
    /// when the point is not in the overlap.
    pub fn apply_map(&self, from: usize, to: usize, p: Point) -> Option<(Point, usize)> {
        if from == to {
            return Some((p, usize::MAX));
        }
        let om = self.overlaps.get(&(from, to))?;
        for (k, piece) in om.pieces.iter().enumerate() {
            let mut q = [0.0; 2];
            let mut ok = true;
            for (c, comp) in piece.map.iter().enumerate() {
                match comp.eval(p[0], p[1]) {
                    Ok(v) if v.im == 0.0 => q[c] = v.re,
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.charts[to].domain.contains(q) {
                return Some((q, k));
            }
        }
        None
    }

    pub fn in_overlap(&self, a: usize, b: usize, p: Point) -> bool {
        self.apply_map(a, b, p).is_some()
    }

    /// Jacobian of the coordinate change `from -> to` at `p`, as a dense
    /// row-major dim x dim matrix. `None` off the overlap.
    pub fn map_with_jacobian(&self, from: usize, to: usize, p: Point) -> Option<(Point, Vec<f64>)> {
        if from == to {
            let mut jac = vec![0.0; self.dim * self.dim];
            for d in 0..self.dim {
                jac[d * self.dim + d] = 1.0;
            }
            return Some((p, jac));
        }
        let (q, k) = self.apply_map(from, to, p)?;
        let piece = &self.overlaps[&(from, to)].pieces[k];
        let mut jac = Vec::with_capacity(self.dim * self.dim);
        for e in piece.jac.iter().take(self.dim * self.dim) {
            jac.push(e.eval(p[0], p[1]).ok()?.re);
        }
        Some((q, jac))
    }

    /// Express a function given on chart `from` in the coordinates of chart
    /// `to` by summing its composition with every overlap piece.
    ///
    /// This is exact for functions that vanish identically outside the
    /// overlap (partition bumps and anything carrying a bump factor): on each
    /// overlap component exactly one piece contributes the true value and the
    /// other compositions evaluate to zero. Charts without an overlap give
    /// the zero expression.
    pub fn pull_supported(&self, from: usize, to: usize, f: &Expr) -> Expr {
        if from == to {
            return f.clone();
        }
        let Some(om) = self.overlaps.get(&(to, from)) else {
            return Expr::zero();
        };
        let mut acc = Expr::zero();
        for piece in &om.pieces {
            let sy = piece.map.get(1).cloned().unwrap_or_else(Expr::zero);
            acc = Expr::add(&acc, &f.substitute(&piece.map[0], &sy));
        }
        acc
    }

    /// Same masked pullback for a matrix of expressions.
    pub fn pull_supported_matrix(&self, from: usize, to: usize, m: &[Expr]) -> Vec<Expr> {
        m.iter()
            .map(|e| self.pull_supported(from, to, e))
            .collect()
    }
}

pub use catalog::{
    circle_length_form, sphere_area_form, sphere_global_one_form, torus_area_form,
};

#[cfg(test)]
mod tests;
