//! The built-in manifolds and their catalog forms.
//!
//! Circle and torus use coordinates of period 4 (angles measured in quarter
//! turns), so chart endpoints, translation shifts and bump breakpoints are
//! exact rationals. The sphere uses two stereographic disk charts of radius
//! 2 with the rational transition w = z-bar / |z|^2, i.e. 1/z.

use std::collections::BTreeMap;

use crate::expr::Expr;
use crate::forms::DForm;

use super::{Atlas, Chart, Domain, ManifoldId, OverlapMap, Piece};

fn r(n: i64, d: i64) -> Expr {
    Expr::ratio(n, d)
}

pub(super) fn sphere2(resolution: u32) -> Atlas {
    let charts = vec![
        Chart::new("north", Domain::Disk { radius: 2.0 }, resolution),
        Chart::new("south", Domain::Disk { radius: 2.0 }, resolution),
    ];
    // w = (x - i y) / (x^2 + y^2) in real coordinates, its own inverse.
    let x = Expr::x();
    let y = Expr::y();
    let r2 = Expr::add(&x.powi(2), &y.powi(2));
    let inv = vec![Expr::div(&x, &r2), Expr::neg(&Expr::div(&y, &r2))];
    let mut overlaps = BTreeMap::new();
    overlaps.insert(
        (0usize, 1usize),
        OverlapMap {
            pieces: vec![Piece::new(2, inv.clone())],
        },
    );
    overlaps.insert(
        (1, 0),
        OverlapMap {
            pieces: vec![Piece::new(2, inv)],
        },
    );
    Atlas {
        name: "sphere2".into(),
        id: Some(ManifoldId::Sphere2),
        dim: 2,
        resolution,
        charts,
        overlaps,
    }
}

fn shift_piece(dim: usize, sx: &Expr, sy: &Expr) -> Piece {
    let map = if dim == 1 {
        vec![Expr::add(&Expr::x(), sx)]
    } else {
        vec![Expr::add(&Expr::x(), sx), Expr::add(&Expr::y(), sy)]
    };
    Piece::new(dim, map)
}

pub(super) fn circle3(resolution: u32) -> Atlas {
    // Arc 0 and arc 2 are long and together cover the circle, so their
    // overlap has two components; arc 1 is short and sits over one of them,
    // which makes the triple overlap nonempty while the other component of
    // the (0,2) overlap stays clear of arc 1.
    let charts = vec![
        Chart::new(
            "arc0",
            Domain::Interval { lo: -1.5, hi: 1.5 },
            resolution,
        ),
        Chart::new(
            "arc1",
            Domain::Interval {
                lo: 1.0,
                hi: 5.0 / 3.0,
            },
            resolution,
        ),
        Chart::new(
            "arc2",
            Domain::Interval {
                lo: 7.0 / 6.0,
                hi: 25.0 / 6.0,
            },
            resolution,
        ),
    ];
    let id = |dim| shift_piece(dim, &Expr::zero(), &Expr::zero());
    let plus4 = shift_piece(1, &Expr::int(4), &Expr::zero());
    let minus4 = shift_piece(1, &Expr::int(-4), &Expr::zero());
    let mut overlaps = BTreeMap::new();
    overlaps.insert((0usize, 1usize), OverlapMap { pieces: vec![id(1)] });
    overlaps.insert((1, 0), OverlapMap { pieces: vec![id(1)] });
    overlaps.insert((1, 2), OverlapMap { pieces: vec![id(1)] });
    overlaps.insert((2, 1), OverlapMap { pieces: vec![id(1)] });
    overlaps.insert(
        (0, 2),
        OverlapMap {
            pieces: vec![id(1), plus4],
        },
    );
    overlaps.insert(
        (2, 0),
        OverlapMap {
            pieces: vec![id(1), minus4],
        },
    );
    Atlas {
        name: "circle3".into(),
        id: Some(ManifoldId::Circle3),
        dim: 1,
        resolution,
        charts,
        overlaps,
    }
}

pub(super) fn torus4(resolution: u32) -> Atlas {
    let centers: [(f64, f64); 4] = [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)];
    let half = 1.5;
    let charts = centers
        .iter()
        .enumerate()
        .map(|(k, (cu, cv))| {
            Chart::new(
                format!("patch{k}"),
                Domain::Rect {
                    x0: cu - half,
                    x1: cu + half,
                    y0: cv - half,
                    y1: cv + half,
                },
                resolution,
            )
        })
        .collect::<Vec<_>>();
    let mut overlaps = BTreeMap::new();
    let shifts = [-4i64, 0, 4];
    for a in 0..4 {
        for b in 0..4 {
            if a == b {
                continue;
            }
            let (au, av) = centers[a];
            let (bu, bv) = centers[b];
            let mut pieces = Vec::new();
            for &sx in &shifts {
                for &sy in &shifts {
                    // Keep a piece only if the shifted source box meets the
                    // target box.
                    let dx = (au + sx as f64 - bu).abs();
                    let dy = (av + sy as f64 - bv).abs();
                    if dx < 2.0 * half && dy < 2.0 * half {
                        pieces.push(shift_piece(2, &Expr::int(sx), &Expr::int(sy)));
                    }
                }
            }
            if !pieces.is_empty() {
                overlaps.insert((a, b), OverlapMap { pieces });
            }
        }
    }
    Atlas {
        name: "torus4".into(),
        id: Some(ManifoldId::Torus4),
        dim: 2,
        resolution,
        charts,
        overlaps,
    }
}

/// Per-axis plateau bumps of the catalog partitions.
pub(super) fn standard_bumps(id: ManifoldId) -> Vec<Expr> {
    let x = Expr::x();
    let y = Expr::y();
    match id {
        ManifoldId::Sphere2 => {
            // 1 on r <= 1, 0 from r >= 1.9, in both charts; the wide ramp
            // keeps the glue well resolved by the grids on both sides of the
            // overlap.
            let r2 = Expr::add(&x.powi(2), &y.powi(2));
            let rho = Expr::sub(&Expr::one(), &Expr::bump(&r2, &Expr::one(), &r(361, 100)));
            vec![rho.clone(), rho]
        }
        ManifoldId::Circle3 => vec![
            Expr::plateau(&x, &r(-7, 5), &r(-4, 5), &r(4, 5), &r(7, 5)),
            Expr::plateau(&x, &r(21, 20), &r(23, 20), &r(3, 2), &r(8, 5)),
            Expr::plateau(&x, &r(19, 15), &r(2, 1), &r(10, 3), &r(61, 15)),
        ],
        ManifoldId::Torus4 => {
            let plat = |t: &Expr| Expr::plateau(t, &r(-7, 5), &r(-21, 20), &r(21, 20), &r(7, 5));
            let centers = [(0i64, 0i64), (2, 0), (0, 2), (2, 2)];
            centers
                .iter()
                .map(|(cu, cv)| {
                    let u = Expr::sub(&x, &Expr::int(*cu));
                    let v = Expr::sub(&y, &Expr::int(*cv));
                    Expr::mul(&plat(&u), &plat(&v))
                })
                .collect()
        }
    }
}

/// A second, distinct partition for connection-independence checks.
pub(super) fn alternate_bumps(id: ManifoldId) -> Vec<Expr> {
    let x = Expr::x();
    let y = Expr::y();
    match id {
        ManifoldId::Sphere2 => {
            let r2 = Expr::add(&x.powi(2), &y.powi(2));
            let rho = Expr::sub(&Expr::one(), &Expr::bump(&r2, &r(121, 100), &r(324, 100)));
            let sq = rho.powi(2);
            vec![sq.clone(), sq]
        }
        ManifoldId::Circle3 => vec![
            Expr::plateau(&x, &r(-29, 20), &r(-9, 10), &r(9, 10), &r(29, 20)).powi(2),
            Expr::plateau(&x, &r(21, 20), &r(6, 5), &r(29, 20), &r(31, 20)).powi(2),
            Expr::plateau(&x, &r(73, 60), &r(53, 30), &r(107, 30), &r(247, 60)).powi(2),
        ],
        ManifoldId::Torus4 => {
            let plat = |t: &Expr| {
                Expr::plateau(t, &r(-29, 20), &r(-11, 10), &r(11, 10), &r(29, 20)).powi(2)
            };
            let centers = [(0i64, 0i64), (2, 0), (0, 2), (2, 2)];
            centers
                .iter()
                .map(|(cu, cv)| {
                    let u = Expr::sub(&x, &Expr::int(*cu));
                    let v = Expr::sub(&y, &Expr::int(*cv));
                    Expr::mul(&plat(&u), &plat(&v))
                })
                .collect()
        }
    }
}

/// Round area form on the sphere, total area 4 pi: 4 / (1 + r^2)^2 dx^dy in
/// both stereographic charts.
pub fn sphere_area_form() -> Vec<DForm> {
    let r2 = Expr::add(&Expr::x().powi(2), &Expr::y().powi(2));
    let coeff = Expr::div(&Expr::int(4), &Expr::add(&Expr::one(), &r2).powi(2));
    let f = DForm {
        dim: 2,
        degree: 2,
        comps: vec![coeff],
    };
    vec![f.clone(), f]
}

/// The global length form dx on the period-4 circle (transitions are
/// translations, so the same expression works on every arc). Integral 4.
pub fn circle_length_form() -> Vec<DForm> {
    let f = DForm::one_form(1, vec![Expr::one()]);
    vec![f.clone(), f.clone(), f]
}

/// The flat area form dx^dy on the period-4 torus. Integral 16.
pub fn torus_area_form() -> Vec<DForm> {
    let f = DForm {
        dim: 2,
        degree: 2,
        comps: vec![Expr::one()],
    };
    vec![f; 4]
}

/// A globally defined smooth 1-form on the sphere:
/// (x dy - y dx) / (1 + r^2)^2 on the north chart and its negative shape on
/// the south chart. Its exterior derivative integrates to zero.
pub fn sphere_global_one_form() -> Vec<DForm> {
    let x = Expr::x();
    let y = Expr::y();
    let den = Expr::add(&Expr::one(), &Expr::add(&x.powi(2), &y.powi(2))).powi(2);
    let north = DForm::one_form(
        2,
        vec![
            Expr::neg(&Expr::div(&y, &den)),
            Expr::div(&x, &den),
        ],
    );
    let south = north.neg();
    vec![north, south]
}
