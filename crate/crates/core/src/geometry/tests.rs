use num::complex::Complex64;

use super::*;
use crate::error::CoreError;
use crate::forms::DForm;
use crate::geometry::integrate;

#[test]
fn build_atlas_catalog_contract() {
    let s = Atlas::build(ManifoldId::Sphere2, 100).unwrap();
    assert_eq!(s.n_charts(), 2);
    assert_eq!(s.charts[0].points.len(), 100 * 100);
    assert!(matches!(s.charts[0].domain, Domain::Disk { radius } if radius == 2.0));

    let c = Atlas::build(ManifoldId::Circle3, 50).unwrap();
    assert_eq!(c.n_charts(), 3);
    assert_eq!(c.dim, 1);
    assert_eq!(c.charts[0].points.len(), 50);

    let t = Atlas::build(ManifoldId::Torus4, 16).unwrap();
    assert_eq!(t.n_charts(), 4);
}

#[test]
fn unknown_manifold_and_small_resolution_fail() {
    assert!(matches!(
        Atlas::build_named("klein", 10),
        Err(CoreError::UnknownManifold(_))
    ));
    assert!(matches!(
        Atlas::build(ManifoldId::Sphere2, 7),
        Err(CoreError::ResolutionTooSmall { .. })
    ));
}

#[test]
fn sphere_overlap_map_is_an_involution() {
    let atlas = Atlas::build(ManifoldId::Sphere2, 40).unwrap();
    let mut seen = 0;
    for p in &atlas.charts[0].points {
        if let Some((q, _)) = atlas.apply_map(0, 1, *p) {
            let (back, _) = atlas.apply_map(1, 0, q).expect("round trip stays in overlap");
            let d = ((back[0] - p[0]).powi(2) + (back[1] - p[1]).powi(2)).sqrt();
            assert!(d < 1e-13, "round trip moved {d}");
            seen += 1;
        }
    }
    assert!(seen > 100, "overlap should contain many sample points");
}

#[test]
fn torus_overlap_maps_compose_coherently() {
    let atlas = Atlas::build(ManifoldId::Torus4, 24).unwrap();
    let mut seen = 0;
    for p in &atlas.charts[0].points {
        let (Some((qb, _)), Some((qc, _))) = (atlas.apply_map(0, 1, *p), atlas.apply_map(0, 3, *p))
        else {
            continue;
        };
        // 0 -> 1 -> 3 must agree with 0 -> 3.
        let (via, _) = atlas.apply_map(1, 3, qb).expect("triple overlap coherence");
        assert!((via[0] - qc[0]).abs() < 1e-13 && (via[1] - qc[1]).abs() < 1e-13);
        seen += 1;
    }
    assert!(seen > 10);
}

#[test]
fn circle3_overlap_structure() {
    let atlas = Atlas::build(ManifoldId::Circle3, 200).unwrap();
    // The (0,2) overlap has two components: one inside arc 1, one clear of it.
    let mut in_triple = 0;
    let mut in_other_component = 0;
    for p in &atlas.charts[0].points {
        if !atlas.in_overlap(0, 2, *p) {
            continue;
        }
        if atlas.in_overlap(0, 1, *p) {
            in_triple += 1;
        } else {
            in_other_component += 1;
        }
    }
    assert!(in_triple > 5, "triple overlap must contain sample points");
    assert!(
        in_other_component > 5,
        "second overlap component must be clear of arc 1"
    );
    // Points of the second component map through the +4 shift.
    let p = [-1.0, 0.0];
    let (q, _) = atlas.apply_map(0, 2, p).unwrap();
    assert!((q[0] - 3.0).abs() < 1e-15);
}

#[test]
fn masked_pullback_matches_pointwise_composition() {
    let atlas = Atlas::build(ManifoldId::Circle3, 64).unwrap();
    let bumps = super::catalog::standard_bumps(ManifoldId::Circle3);
    let pulled = atlas.pull_supported(0, 2, &bumps[0]);
    for p in &atlas.charts[2].points {
        let direct = match atlas.apply_map(2, 0, *p) {
            Some((q, _)) => bumps[0].eval(q[0], q[1]).unwrap(),
            None => Complex64::new(0.0, 0.0),
        };
        let via = pulled.eval(p[0], p[1]).unwrap();
        assert!((direct - via).norm() < 1e-14);
    }
}

#[test]
fn partitions_satisfy_their_identities() {
    for id in ManifoldId::all() {
        let atlas = Atlas::build(id, 32).unwrap();
        for part in [
            PartitionOfUnity::standard(&atlas).unwrap(),
            PartitionOfUnity::alternate(&atlas).unwrap(),
        ] {
            let res = part.identity_residuals(&atlas).unwrap();
            assert!(res.sum_alpha < 1e-12, "{id}: sum alpha residual {}", res.sum_alpha);
            assert!(
                res.sum_beta_sq < 1e-12,
                "{id}: sum beta^2 residual {}",
                res.sum_beta_sq
            );
            assert!(res.negativity < 1e-12);
        }
    }
}

#[test]
fn catalog_partition_supports_stay_inside_their_charts() {
    for id in ManifoldId::all() {
        let atlas = Atlas::build(id, 24).unwrap();
        let part = PartitionOfUnity::standard(&atlas).unwrap();
        for c in 0..atlas.n_charts() {
            for k in 0..atlas.n_charts() {
                if k == c {
                    continue;
                }
                for p in &atlas.charts[c].points {
                    if !atlas.in_overlap(c, k, *p) {
                        let v = part.alpha[k][c].eval(p[0], p[1]).unwrap();
                        assert!(
                            v.norm() == 0.0,
                            "{id}: alpha_{k} leaks outside overlap on chart {c}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn sphere_algebraic_partition_normalizes_as_expected() {
    // rho_1 = 1 on the north chart, rho_2 = |z|^2 given as 1/|w|^2 on the
    // south chart; alpha_2 on the north chart is r^2 / (1 + r^2).
    let atlas = Atlas::build(ManifoldId::Sphere2, 24).unwrap();
    let inv_w2 = Expr::parse("1/(x^2+y^2)").unwrap();
    let part = PartitionOfUnity::build(&atlas, &[Expr::one(), inv_w2]).unwrap();
    for p in &atlas.charts[0].points {
        let r2 = p[0] * p[0] + p[1] * p[1];
        let want = r2 / (1.0 + r2);
        let got = part.alpha[1][0].eval(p[0], p[1]).unwrap();
        assert!((got.re - want).abs() < 1e-12 && got.im == 0.0);
    }
    let res = part.identity_residuals(&atlas).unwrap();
    assert!(res.sum_alpha < 1e-12 && res.sum_beta_sq < 1e-12);
}

#[test]
fn degenerate_bumps_are_rejected() {
    let atlas = Atlas::build(ManifoldId::Sphere2, 16).unwrap();
    let zero = Expr::zero();
    assert!(matches!(
        PartitionOfUnity::build(&atlas, &[zero.clone(), zero]),
        Err(CoreError::CommonZero { .. })
    ));
    assert!(matches!(
        PartitionOfUnity::build(&atlas, &[Expr::int(-1), Expr::one()]),
        Err(CoreError::NegativeBump { .. })
    ));
    assert!(matches!(
        PartitionOfUnity::build(&atlas, &[Expr::one()]),
        Err(CoreError::BumpCount { .. })
    ));
}

#[test]
fn sphere_area_is_4_pi() {
    let atlas = Atlas::build(ManifoldId::Sphere2, 200).unwrap();
    let part = PartitionOfUnity::standard(&atlas).unwrap();
    let area = integrate(&atlas, &part, &sphere_area_form()).unwrap();
    let want = 4.0 * std::f64::consts::PI;
    assert!(
        (area.re - want).abs() < 1e-4 && area.im.abs() < 1e-12,
        "area {} vs {}",
        area.re,
        want
    );
}

#[test]
fn quadrature_converges_with_resolution() {
    let want = 4.0 * std::f64::consts::PI;
    let mut errs = Vec::new();
    for res in [25, 50, 100] {
        let atlas = Atlas::build(ManifoldId::Sphere2, res).unwrap();
        let part = PartitionOfUnity::standard(&atlas).unwrap();
        let area = integrate(&atlas, &part, &sphere_area_form()).unwrap();
        errs.push((area.re - want).abs());
    }
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "errors {errs:?}");
}

#[test]
fn circle_and_torus_volumes() {
    let atlas = Atlas::build(ManifoldId::Circle3, 256).unwrap();
    let part = PartitionOfUnity::standard(&atlas).unwrap();
    let len = integrate(&atlas, &part, &circle_length_form()).unwrap();
    assert!((len.re - 4.0).abs() < 1e-5, "circumference {}", len.re);

    let atlas = Atlas::build(ManifoldId::Torus4, 96).unwrap();
    let part = PartitionOfUnity::standard(&atlas).unwrap();
    let area = integrate(&atlas, &part, &torus_area_form()).unwrap();
    assert!((area.re - 16.0).abs() < 1e-10, "area {}", area.re);
}

#[test]
fn zero_form_integrates_to_zero_exactly() {
    let atlas = Atlas::build(ManifoldId::Sphere2, 16).unwrap();
    let part = PartitionOfUnity::standard(&atlas).unwrap();
    let zero = vec![
        DForm {
            dim: 2,
            degree: 2,
            comps: vec![Expr::zero()],
        };
        2
    ];
    let v = integrate(&atlas, &part, &zero).unwrap();
    assert_eq!(v, Complex64::new(0.0, 0.0));
}

#[test]
fn stokes_exact_forms_integrate_to_zero() {
    // The one-form is globally defined: check the transport consistency of
    // its two chart expressions, then integrate its exterior derivative.
    let atlas = Atlas::build(ManifoldId::Sphere2, 200).unwrap();
    let part = PartitionOfUnity::standard(&atlas).unwrap();
    let eta = sphere_global_one_form();

    let mut max_mismatch = 0.0f64;
    for p in atlas.charts[0].points.iter().step_by(7) {
        let Some((q, jac)) = atlas.map_with_jacobian(0, 1, *p) else {
            continue;
        };
        let north = eta[0].eval(p[0], p[1]).unwrap();
        let south = eta[1].eval(q[0], q[1]).unwrap();
        // Pull the south expression back: comp_i = sum_r south_r * d q_r / d x_i.
        for i in 0..2 {
            let pulled = south[0] * jac[i] + south[1] * jac[2 + i];
            max_mismatch = max_mismatch.max((north[i] - pulled).norm());
        }
    }
    assert!(max_mismatch < 1e-12, "one-form is not global: {max_mismatch}");

    let d_eta: Vec<DForm> = eta.iter().map(DForm::d).collect();
    let v = integrate(&atlas, &part, &d_eta).unwrap();
    assert!(v.norm() < 1e-6, "Stokes residual {}", v.norm());
}

#[test]
fn integrate_rejects_mismatched_input() {
    let atlas = Atlas::build(ManifoldId::Sphere2, 16).unwrap();
    let part = PartitionOfUnity::standard(&atlas).unwrap();
    let wrong_degree = vec![DForm::one_form(2, vec![Expr::one(), Expr::zero()]); 2];
    assert!(matches!(
        integrate(&atlas, &part, &wrong_degree),
        Err(CoreError::DegreeMismatch { .. })
    ));
    assert!(matches!(
        integrate(&atlas, &part, &sphere_area_form()[..1].to_vec()),
        Err(CoreError::ChartCount { .. })
    ));
}
