mod common;

use common::{example_matrix, q, tangency_matrix};
use quatisom_core::checks::{mixed_sample, random_conjugator};
use quatisom_core::{
    classify, fixed_points, mobius_apply, normal_form_action, region_of, sample_indexed, sp11_inverse, CaseTag, Error,
    IsometryClass, Location, QMatrix2, QuarticCoeffs, Quaternion, Region, SamplerKind, Tolerance, Verdict,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn example_is_a_screw_parabolic_fixing_minus_one() {
    let r = classify(&example_matrix(), tol()).unwrap();
    assert_eq!((r.tau, r.rho), (0.0, 2.0));
    assert_eq!(r.region, Region::ParabolaArc);
    assert_eq!(r.eigenvalues.case_tag, CaseTag::V);
    assert!(!r.diagonalizable);
    assert!(matches!(r.verdict, IsometryClass::Parabolic { lambda } if (lambda.im - 1.0).abs() < 1e-12));
    assert_eq!(r.fixed_points.points.len(), 1);
    let x = r.fixed_points.points[0].x.unwrap();
    assert_eq!(r.fixed_points.points[0].location, Location::Boundary);
    assert!((x + Quaternion::ONE).norm() < 1e-12);
}

#[test]
fn tangency_example_is_a_translation() {
    let r = classify(&tangency_matrix(), tol()).unwrap();
    assert_eq!((r.tau, r.rho), (2.0, 6.0));
    assert_eq!(r.region, Region::TangencyPoint);
    assert_eq!(r.eigenvalues.case_tag, CaseTag::I);
    assert!(matches!(r.verdict, IsometryClass::Parabolic { lambda } if lambda.im == 0.0 && lambda.re == 1.0));
    assert_eq!(r.fixed_points.count(Location::Boundary), 1);
}

#[test]
fn identities() {
    let id = classify(&QMatrix2::identity(), tol()).unwrap();
    assert_eq!(id.verdict.verdict(), Verdict::Identity);
    assert!(id.fixed_points.points.is_empty());
    let minus = classify(&QMatrix2::identity().left_scale(Quaternion::real(-1.0)), tol()).unwrap();
    assert_eq!(minus.verdict.verdict(), Verdict::MinusIdentity);
    assert!(matches!(fixed_points(&QMatrix2::identity(), tol()), Err(Error::PlusMinusIdentity)));
}

#[test]
fn boost_is_a_real_loxodromic() {
    let t = 0.7;
    let r = classify(&QMatrix2::boost(t), tol()).unwrap();
    assert_eq!(r.region, Region::ParabolaOuter);
    assert_eq!(r.eigenvalues.case_tag, CaseTag::III);
    let IsometryClass::Loxodromic { r: radius, theta } = r.verdict else { panic!("{:?}", r.verdict) };
    assert!((radius - t.exp()).abs() < 1e-12 && theta == 0.0);
    let mut pts: Vec<_> = r.fixed_points.boundary().map(|f| f.x.unwrap().re()).collect();
    pts.sort_by(f64::total_cmp);
    assert!((pts[0] + 1.0).abs() < 1e-12 && (pts[1] - 1.0).abs() < 1e-12);
}

#[test]
fn rotation_fixes_the_origin() {
    let u = Quaternion::exp_imaginary(q(0.0, 1.0, 0.0, 0.0), 0.4);
    let v = Quaternion::exp_imaginary(q(0.0, 0.0, 1.0, 0.0), 1.1);
    let p = QMatrix2::diag(u, v);
    let r = classify(&p, tol()).unwrap();
    assert_eq!(r.verdict.verdict(), Verdict::Elliptic);
    let x = r.fixed_points.interior().next().unwrap().x.unwrap();
    assert!(x.norm() < 1e-12);
    // the normal form rotates a ball point by the reported angles
    let y = Quaternion::new(0.1, 0.2, 0.0, 0.0);
    let image = normal_form_action(&r.verdict, y).unwrap();
    assert!((image.norm() - y.norm()).abs() < 1e-12);
}

#[test]
fn non_members_are_refused() {
    let shear = QMatrix2::new(Quaternion::ONE, Quaternion::ONE, Quaternion::ZERO, Quaternion::ONE);
    assert!(matches!(classify(&shear, tol()), Err(Error::NotInSp11)));
    assert!(matches!(sp11_inverse(&shear, tol()), Err(Error::NotInSp11)));
}

#[test]
fn documented_region_points() {
    let at = |t, r| region_of(&QuarticCoeffs::new(t, r), tol());
    assert_eq!(at(0.0, 2.0), Region::ParabolaArc);
    assert_eq!(at(2.0, 6.0), Region::TangencyPoint);
    assert_eq!(at(-2.0, 6.0), Region::TangencyPoint);
    assert_eq!(at(0.0, -2.0), Region::R1LineBoundary);
    assert_eq!(at(3.0, 10.5), Region::Unrealizable);
    assert_eq!(at(3.0, 11.0), Region::ParabolaOuter);
    assert_eq!(at(0.0, 0.0), Region::R1Interior);
    assert_eq!(at(0.0, 3.0), Region::R2Interior);
}

#[test]
fn every_sampler_kind_is_consistent() {
    for kind in SamplerKind::ALL {
        for i in 0..2000 {
            let p = sample_indexed(99, i, kind);
            let r = classify(&p, tol()).unwrap_or_else(|e| panic!("{kind} #{i}: {e}"));
            if kind == SamplerKind::Boundary {
                assert!(matches!(r.verdict.verdict(), Verdict::Elliptic | Verdict::Identity | Verdict::MinusIdentity));
            }
        }
    }
}

#[test]
fn conjugated_example_keeps_its_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = example_matrix();
    for _ in 0..200 {
        let g = random_conjugator(&mut rng);
        let c = g * p * sp11_inverse(&g, tol()).unwrap();
        let r = classify(&c, tol()).unwrap();
        assert_eq!(r.verdict.verdict(), Verdict::Parabolic);
        let x = r.fixed_points.boundary().next().unwrap().x.unwrap();
        let expected = mobius_apply(&g, -Quaternion::ONE, tol()).unwrap();
        assert!((x - expected).norm() < 1e-8);
    }
}

#[test]
fn fixed_point_counts_match_verdicts() {
    for i in 0..3000 {
        let r = classify(&mixed_sample(17, i), tol()).unwrap();
        let (interior, boundary) = (r.fixed_points.count(Location::Interior), r.fixed_points.count(Location::Boundary));
        match r.verdict.verdict() {
            Verdict::Elliptic => assert!(interior >= 1 && boundary == 0),
            Verdict::Parabolic => assert_eq!((interior, boundary), (0, 1)),
            Verdict::Loxodromic => assert_eq!((interior, boundary), (0, 2)),
            Verdict::Identity | Verdict::MinusIdentity => {}
        }
    }
}
