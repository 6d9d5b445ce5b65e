use num::complex::Complex64;
use std::sync::Arc;

use super::*;
use crate::cocycle::verify_cocycle;
use crate::geometry::ManifoldId;

fn sphere(res: u32) -> Atlas {
    Atlas::build(ManifoldId::Sphere2, res).unwrap()
}

fn standard(atlas: &Atlas) -> Arc<PartitionOfUnity> {
    Arc::new(PartitionOfUnity::standard(atlas).unwrap())
}

/// rho_1 = 1 (north), rho_2 = |z|^2 given as 1/|w|^2 on the south chart.
fn algebraic_partition(atlas: &Atlas) -> Arc<PartitionOfUnity> {
    let inv = Expr::parse("1/(x^2+y^2)").unwrap();
    Arc::new(PartitionOfUnity::build(atlas, &[Expr::one(), inv]).unwrap())
}

#[test]
fn trivial_cocycle_gives_the_zero_connection() {
    let atlas = Atlas::build(ManifoldId::Torus4, 16).unwrap();
    let c = Arc::new(Cocycle::trivial(&atlas, 2));
    let part = standard(&atlas);
    let conn = connection_from_partition(&atlas, &c, &part).unwrap();
    for chart in &conn.gamma.charts {
        for i in 0..2 {
            for j in 0..2 {
                assert!(chart.entry(i, j).is_zero());
            }
        }
    }
    let rep = verify_gluing(&atlas, &c, &conn).unwrap();
    assert_eq!(rep.max_residual, 0.0);
    assert!(rep.pass);
}

#[test]
fn clutching_connection_matches_the_barycenter_formula() {
    // With rho_1 = 1 and rho_2 = |z|^2, the north-chart connection form is
    // Gamma_1 = k alpha_2 d(x+iy)/(x+iy), a 1x1 matrix.
    let atlas = sphere(24);
    for k in [1i32, 3, -2] {
        let c = Arc::new(Cocycle::clutching(&atlas, k).unwrap());
        let part = algebraic_partition(&atlas);
        let conn = connection_from_partition(&atlas, &c, &part).unwrap();
        let gamma = &conn.gamma.charts[0];
        for &(x, y) in &[(0.4, 0.2), (-0.8, 0.9), (1.2, -0.3)] {
            let r2 = x * x + y * y;
            let alpha2 = r2 / (1.0 + r2);
            let z = Complex64::new(x, y);
            let coeff = Complex64::new(k as f64 * alpha2, 0.0) / z;
            let comps = gamma.entry(0, 0).eval(x, y).unwrap();
            assert!((comps[0] - coeff).norm() < 1e-12, "k={k} dx");
            assert!((comps[1] - coeff * Complex64::i()).norm() < 1e-12, "k={k} dy");
        }
    }
}

#[test]
fn gluing_law_holds_and_perturbations_fail() {
    let atlas = sphere(40);
    let c = Arc::new(Cocycle::clutching(&atlas, 1).unwrap());
    assert!(verify_cocycle(&atlas, &c).unwrap().pass);
    let part = standard(&atlas);
    let mut conn = connection_from_partition(&atlas, &c, &part).unwrap();
    let rep = verify_gluing(&atlas, &c, &conn).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(rep.points > 100);

    // Adding dx on one chart breaks the gluing law with residual about 1.
    let bump = crate::forms::DForm::one_form(2, vec![Expr::one(), Expr::zero()]);
    let e = conn.gamma.charts[0].entry(0, 0).add(&bump);
    *conn.gamma.charts[0].entry_mut(0, 0) = e;
    let rep = verify_gluing(&atlas, &c, &conn).unwrap();
    assert!(!rep.pass);
    assert!(rep.max_residual > 0.5, "{rep:?}");
}

#[test]
fn gluing_holds_for_rank_two_and_flat_circle() {
    let atlas = sphere(32);
    let c = Arc::new(
        Cocycle::clutching(&atlas, 1)
            .unwrap()
            .direct_sum(&Cocycle::clutching(&atlas, 2).unwrap()),
    );
    let part = standard(&atlas);
    let conn = connection_from_partition(&atlas, &c, &part).unwrap();
    assert!(verify_gluing(&atlas, &c, &conn).unwrap().pass);

    let circle = Atlas::build(ManifoldId::Circle3, 96).unwrap();
    let c = Arc::new(Cocycle::flat_circle(&circle, 0.7).unwrap());
    let part = standard(&circle);
    let conn = connection_from_partition(&circle, &c, &part).unwrap();
    let rep = verify_gluing(&circle, &c, &conn).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(rep.points > 0);
}

#[test]
fn curvature_of_line_bundle_is_d_gamma() {
    let atlas = sphere(24);
    let c = Arc::new(Cocycle::clutching(&atlas, 1).unwrap());
    let part = standard(&atlas);
    let conn = connection_from_partition(&atlas, &c, &part).unwrap();
    let curv = curvature(&atlas, &conn);
    for chart in 0..2 {
        let dg = conn.gamma.charts[chart].d();
        for &(x, y) in &[(0.9, 0.3), (-1.2, 0.8), (0.2, -1.5)] {
            let a = curv.r.charts[chart].entry(0, 0).eval(x, y).unwrap();
            let b = dg.entry(0, 0).eval(x, y).unwrap();
            assert!((a[0] - b[0]).norm() < 1e-12);
        }
    }
}

#[test]
fn curvature_matches_finite_differences_of_the_connection() {
    let atlas = sphere(24);
    let c = Arc::new(Cocycle::clutching(&atlas, 1).unwrap());
    let part = standard(&atlas);
    let conn = connection_from_partition(&atlas, &c, &part).unwrap();
    let curv = curvature(&atlas, &conn);
    let gamma = &conn.gamma.charts[0];
    let h = 1e-5;
    for &(x, y) in &[(1.1, 0.4), (0.8, -1.0), (-1.3, 0.6)] {
        // dx^dy coefficient of d Gamma = d(Q)/dx - d(P)/dy by central
        // differences of the 1-form components.
        let qx = (gamma.entry(0, 0).eval(x + h, y).unwrap()[1]
            - gamma.entry(0, 0).eval(x - h, y).unwrap()[1])
            / Complex64::new(2.0 * h, 0.0);
        let py = (gamma.entry(0, 0).eval(x, y + h).unwrap()[0]
            - gamma.entry(0, 0).eval(x, y - h).unwrap()[0])
            / Complex64::new(2.0 * h, 0.0);
        let fd = qx - py;
        let exact = curv.r.charts[0].entry(0, 0).eval(x, y).unwrap()[0];
        assert!((fd - exact).norm() < 1e-6, "({x},{y}): {fd} vs {exact}");
    }
}

#[test]
fn tensoriality_holds_and_scaling_fails() {
    let atlas = sphere(40);
    let c = Arc::new(Cocycle::clutching(&atlas, 2).unwrap());
    let part = standard(&atlas);
    let conn = connection_from_partition(&atlas, &c, &part).unwrap();
    let mut curv = curvature(&atlas, &conn);
    let rep = verify_tensoriality(&atlas, &c, &curv).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(rep.points > 100);

    let scaled = curv.r.charts[0].scale_expr(&Expr::int(2));
    curv.r.charts[0] = scaled;
    let rep = verify_tensoriality(&atlas, &c, &curv).unwrap();
    assert!(!rep.pass, "{rep:?}");
}

#[test]
fn flat_curvature_is_zero_and_tensoriality_is_trivial_on_curves() {
    let circle = Atlas::build(ManifoldId::Circle3, 64).unwrap();
    let c = Arc::new(Cocycle::flat_circle(&circle, 1.1).unwrap());
    let part = standard(&circle);
    let conn = connection_from_partition(&circle, &c, &part).unwrap();
    let curv = curvature(&circle, &conn);
    // Degree-2 forms on a curve have no components at all.
    assert!(curv.r.charts.iter().all(|m| m.entry(0, 0).comps.is_empty()));
    let rep = verify_tensoriality(&circle, &c, &curv).unwrap();
    assert_eq!(rep.max_residual, 0.0);
    assert!(rep.pass);
}

#[test]
fn gamma_squared_equals_half_graded_self_commutator() {
    let atlas = sphere(16);
    let c = Arc::new(
        Cocycle::clutching(&atlas, 1)
            .unwrap()
            .direct_sum(&Cocycle::clutching(&atlas, -1).unwrap()),
    );
    let part = standard(&atlas);
    let conn = connection_from_partition(&atlas, &c, &part).unwrap();
    for chart in &conn.gamma.charts {
        let sq = chart.mul(chart);
        // Graded commutator of two odd forms: [a, b] = a^b + b^a.
        let comm = chart.mul(chart).add(&chart.mul(chart));
        for &(x, y) in &[(0.7, 0.7), (-1.0, 0.2)] {
            for i in 0..2 {
                for j in 0..2 {
                    let a = sq.entry(i, j).eval(x, y).unwrap()[0];
                    let b = comm.entry(i, j).eval(x, y).unwrap()[0] * 0.5;
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn bianchi_identity_degree_collapses_on_surfaces() {
    // dR and R Gamma - Gamma R are degree-3 forms; on the catalog surfaces
    // they vanish identically, and the machinery must agree exactly.
    let atlas = sphere(16);
    let c = Arc::new(Cocycle::clutching(&atlas, 1).unwrap());
    let part = standard(&atlas);
    let conn = connection_from_partition(&atlas, &c, &part).unwrap();
    let curv = curvature(&atlas, &conn);
    for (r, g) in curv.r.charts.iter().zip(&conn.gamma.charts) {
        let dr = r.d();
        let rhs = r.mul(g).add(&g.mul(r).scale_expr(&Expr::int(-1)));
        assert!(dr.entry(0, 0).comps.is_empty());
        assert!(rhs.entry(0, 0).comps.is_empty());
    }
}
