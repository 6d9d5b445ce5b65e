use num::complex::Complex64;
use std::sync::Arc;

use super::*;
use crate::connection::{connection_from_partition, curvature};
use crate::geometry::ManifoldId;

fn sphere(res: u32) -> Atlas {
    Atlas::build(ManifoldId::Sphere2, res).unwrap()
}

fn standard(atlas: &Atlas) -> Arc<PartitionOfUnity> {
    Arc::new(PartitionOfUnity::standard(atlas).unwrap())
}

fn clutching_curvature(atlas: &Atlas, k: i32) -> (Arc<Cocycle>, Curvature) {
    let c = Arc::new(Cocycle::clutching(atlas, k).unwrap());
    let part = standard(atlas);
    let conn = connection_from_partition(atlas, &c, &part).unwrap();
    let curv = curvature(atlas, &conn);
    (c, curv)
}

#[test]
fn p_zero_is_the_rank() {
    let atlas = sphere(16);
    let (_, curv) = clutching_curvature(&atlas, 1);
    let chf = chern_form(&atlas, &curv, 0);
    assert_eq!(chf.norm, Complex64::new(1.0, 0.0));
    for f in &chf.forms {
        assert!((f.eval(0.3, 0.2).unwrap()[0].re - 1.0).abs() < 1e-15);
    }
}

#[test]
fn flat_bundles_have_vanishing_chern_forms() {
    let atlas = Atlas::build(ManifoldId::Torus4, 16).unwrap();
    let c = Arc::new(Cocycle::trivial(&atlas, 2));
    let part = standard(&atlas);
    let conn = connection_from_partition(&atlas, &c, &part).unwrap();
    let curv = curvature(&atlas, &conn);
    let chf = chern_form(&atlas, &curv, 1);
    let num = chern_number(&atlas, &chf).unwrap();
    assert!(num.integral_re.abs() < 1e-12 && num.integral_im.abs() < 1e-12);
}

#[test]
fn chern_one_is_the_normalized_curvature_trace() {
    let atlas = sphere(24);
    let (_, curv) = clutching_curvature(&atlas, 1);
    let chf = chern_form(&atlas, &curv, 1);
    assert!((chf.norm - Complex64::new(1.0, 0.0) / Complex64::new(0.0, std::f64::consts::TAU))
        .norm()
        .abs()
        < 1e-15);
    for &(x, y) in &[(0.9, 0.5), (-1.2, 0.7)] {
        let a = chf.forms[0].eval(x, y).unwrap()[0];
        let b = curv.r.charts[0].trace().eval(x, y).unwrap()[0];
        assert!((a - b).norm() < 1e-13);
    }
}

#[test]
fn higher_p_collapses_to_zero_on_surfaces() {
    let atlas = sphere(16);
    let (_, curv) = clutching_curvature(&atlas, 2);
    let chf = chern_form(&atlas, &curv, 2);
    assert!(chf.forms.iter().all(|f| f.comps.is_empty()));
    let num = chern_number(&atlas, &chf).unwrap();
    assert_eq!(num.integral_re, 0.0);
}

#[test]
fn chern_number_needs_top_degree() {
    let atlas = sphere(16);
    let (_, curv) = clutching_curvature(&atlas, 1);
    let chf = chern_form(&atlas, &curv, 0);
    assert!(matches!(
        chern_number(&atlas, &chf),
        Err(CoreError::DegreeMismatch { .. })
    ));
}

#[test]
fn chern_form_checks_pass_for_catalog_degrees() {
    let atlas = sphere(40);
    for k in [-2, 1, 3] {
        let (_, curv) = clutching_curvature(&atlas, k);
        let chf = chern_form(&atlas, &curv, 1);
        let checks = verify_chern_form(&atlas, &chf).unwrap();
        assert!(checks.pass, "k={k}: {checks:?}");
        assert!(checks.chart_independence_residual < 1e-9);
    }
}

#[test]
fn trivial_projector_blocks_are_beta_products() {
    let atlas = sphere(24);
    let part = standard(&atlas);
    let c = Cocycle::trivial(&atlas, 1);
    let proj = build_projector(&atlas, &c, &part).unwrap();
    assert_eq!(proj.big_n, 2);
    for (chart_idx, chart) in atlas.charts.iter().enumerate() {
        for p in chart.points.iter().step_by(17) {
            let q = eval_projector(&proj, chart_idx, *p).unwrap();
            let b: Vec<Complex64> = (0..2)
                .map(|k| part.beta[k][chart_idx].eval(p[0], p[1]).unwrap())
                .collect();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((q[(i, j)] - b[i] * b[j]).norm() < 1e-13);
                }
            }
        }
    }
    let rep = verify_projector(&atlas, &proj).unwrap();
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn projector_is_idempotent_across_the_catalog() {
    // Sphere clutching, rank 1.
    let atlas = sphere(32);
    let part = standard(&atlas);
    for k in [-2, 1, 3] {
        let c = Cocycle::clutching(&atlas, k).unwrap();
        let proj = build_projector(&atlas, &c, &part).unwrap();
        let rep = verify_projector(&atlas, &proj).unwrap();
        assert!(rep.pass, "k={k}: {rep:?}");
    }

    // Flat circle, three charts.
    let circle = Atlas::build(ManifoldId::Circle3, 64).unwrap();
    let cpart = standard(&circle);
    let c = Cocycle::flat_circle(&circle, 0.9).unwrap();
    let proj = build_projector(&circle, &c, &cpart).unwrap();
    assert_eq!(proj.big_n, 3);
    let rep = verify_projector(&circle, &proj).unwrap();
    assert!(rep.pass, "{rep:?}");

    // Noncommuting rank-2 flat cocycle: exercises block composition order.
    let a = vec![Expr::one(), Expr::one(), Expr::zero(), Expr::one()];
    let a_inv = vec![Expr::one(), Expr::int(-1), Expr::zero(), Expr::one()];
    let b = vec![Expr::one(), Expr::zero(), Expr::one(), Expr::one()];
    let b_inv = vec![Expr::one(), Expr::zero(), Expr::int(-1), Expr::one()];
    let ba = vec![Expr::one(), Expr::one(), Expr::one(), Expr::int(2)];
    let ba_inv = vec![Expr::int(2), Expr::int(-1), Expr::int(-1), Expr::one()];
    let mut trans = std::collections::BTreeMap::new();
    trans.insert((1usize, 0usize), a);
    trans.insert((0, 1), a_inv);
    trans.insert((2, 1), b);
    trans.insert((1, 2), b_inv);
    trans.insert((2, 0), ba);
    trans.insert((0, 2), ba_inv);
    let c = Cocycle { rank: 2, trans };
    let proj = build_projector(&circle, &c, &cpart).unwrap();
    assert_eq!(proj.big_n, 6);
    let rep = verify_projector(&circle, &proj).unwrap();
    assert!(rep.pass, "noncommuting: {rep:?}");

    // Torus, trivial rank 1, four charts.
    let torus = Atlas::build(ManifoldId::Torus4, 16).unwrap();
    let tpart = standard(&torus);
    let c = Cocycle::trivial(&torus, 1);
    let proj = build_projector(&torus, &c, &tpart).unwrap();
    assert_eq!(proj.big_n, 4);
    let rep = verify_projector(&torus, &proj).unwrap();
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn missing_transitions_with_meeting_supports_are_rejected() {
    let circle = Atlas::build(ManifoldId::Circle3, 48).unwrap();
    let part = standard(&circle);
    let mut c = Cocycle::trivial(&circle, 1);
    c.trans.remove(&(2, 0));
    c.trans.remove(&(0, 2));
    assert!(matches!(
        build_projector(&circle, &c, &part),
        Err(CoreError::SupportMismatch { .. })
    ));
}

#[test]
fn constant_projector_has_zero_higher_chern() {
    let atlas = sphere(16);
    let part = standard(&atlas);
    // Q = diag(1, 0) on both charts: a constant idempotent.
    let mats = vec![
        vec![Expr::one(), Expr::zero(), Expr::zero(), Expr::zero()],
        vec![Expr::one(), Expr::zero(), Expr::zero(), Expr::zero()],
    ];
    let proj = projector_from_mats(1, 2, mats, &part);
    let chf = chern_from_projector(&atlas, &proj, 1);
    assert!(chf.forms.iter().all(|f| f.comps[0].is_zero()));
    let tr = chern_from_projector(&atlas, &proj, 0);
    assert!((tr.forms[0].eval(0.5, 0.5).unwrap()[0].re - 1.0).abs() < 1e-15);
}

#[test]
fn projector_route_p_zero_is_the_rank() {
    let atlas = sphere(24);
    let part = standard(&atlas);
    let c = Cocycle::clutching(&atlas, 2).unwrap();
    let proj = build_projector(&atlas, &c, &part).unwrap();
    let chf = chern_from_projector(&atlas, &proj, 0);
    for p in atlas.charts[0].points.iter().step_by(23) {
        let v = chf.forms[0].eval(p[0], p[1]).unwrap()[0];
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn both_routes_give_the_clutching_degree() {
    let atlas = sphere(96);
    let part = standard(&atlas);
    for k in [1i32, -2] {
        let c = Arc::new(Cocycle::clutching(&atlas, k).unwrap());
        let conn = connection_from_partition(&atlas, &c, &part).unwrap();
        let curv = curvature(&atlas, &conn);
        let conn_num = chern_number(&atlas, &chern_form(&atlas, &curv, 1)).unwrap();
        assert!(
            (conn_num.integral_re - k as f64).abs() < 1e-3 && conn_num.integral_im.abs() < 1e-6,
            "k={k}: connection route gave {} + {}i",
            conn_num.integral_re,
            conn_num.integral_im
        );

        let proj = build_projector(&atlas, &c, &part).unwrap();
        let proj_num =
            chern_number(&atlas, &chern_from_projector(&atlas, &proj, 1)).unwrap();
        let delta = ((conn_num.integral_re - proj_num.integral_re).powi(2)
            + (conn_num.integral_im - proj_num.integral_im).powi(2))
        .sqrt();
        assert!(
            delta < 1e-4,
            "k={k}: route delta {delta} (proj {} conn {})",
            proj_num.integral_re,
            conn_num.integral_re
        );
    }
}

#[test]
fn direct_sum_chern_number_is_additive() {
    let atlas = sphere(96);
    let part = standard(&atlas);
    let c = Arc::new(
        Cocycle::clutching(&atlas, 1)
            .unwrap()
            .direct_sum(&Cocycle::clutching(&atlas, 2).unwrap()),
    );
    let conn = connection_from_partition(&atlas, &c, &part).unwrap();
    let curv = curvature(&atlas, &conn);
    let num = chern_number(&atlas, &chern_form(&atlas, &curv, 1)).unwrap();
    assert!(
        (num.integral_re - 3.0).abs() < 2e-3,
        "diag(z, z^2) gave {}",
        num.integral_re
    );
}

#[test]
fn connection_independence_via_two_partitions() {
    let atlas = sphere(96);
    let c = Arc::new(Cocycle::clutching(&atlas, 1).unwrap());
    let p1 = standard(&atlas);
    let p2 = Arc::new(PartitionOfUnity::alternate(&atlas).unwrap());
    let rep = verify_chern_invariance(&atlas, &c, 1, &p1, &p2).unwrap();
    let delta = rep.integral_delta.unwrap();
    assert!(delta < 1e-4, "partition delta {delta}");
    assert!(rep.chart_independence < 1e-9);

    // Same partition twice gives delta exactly zero.
    let rep = verify_chern_invariance(&atlas, &c, 1, &p1, &p1).unwrap();
    assert_eq!(rep.integral_delta.unwrap(), 0.0);
}

#[test]
fn cohomologous_cocycles_share_chern_numbers() {
    let atlas = sphere(96);
    let part = standard(&atlas);
    let g = Arc::new(Cocycle::clutching(&atlas, 1).unwrap());
    // Twist by an invertible scalar on the north chart.
    let lam0 = Expr::parse("1 + (x^2+y^2)/10").unwrap();
    let lam0_south = lam0.substitute(
        &Expr::parse("x/(x^2+y^2)").unwrap(),
        &Expr::parse("-y/(x^2+y^2)").unwrap(),
    );
    let mut trans = std::collections::BTreeMap::new();
    let z = Expr::parse("x + i*y").unwrap();
    trans.insert((1usize, 0usize), vec![Expr::div(&z, &lam0)]);
    trans.insert((0, 1), vec![Expr::mul(&z, &lam0_south)]);
    let h = Arc::new(Cocycle { rank: 1, trans });
    assert!(crate::cocycle::verify_cocycle(&atlas, &h).unwrap().pass);

    let num_g = {
        let conn = connection_from_partition(&atlas, &g, &part).unwrap();
        chern_number(&atlas, &chern_form(&atlas, &curvature(&atlas, &conn), 1)).unwrap()
    };
    let num_h = {
        let conn = connection_from_partition(&atlas, &h, &part).unwrap();
        chern_number(&atlas, &chern_form(&atlas, &curvature(&atlas, &conn), 1)).unwrap()
    };
    assert!(
        (num_g.integral_re - num_h.integral_re).abs() < 1e-4,
        "{} vs {}",
        num_g.integral_re,
        num_h.integral_re
    );
}
