use super::*;
use crate::kernels::{cauchy_kernel, FieldKind, MultiIndex};
use std::f64::consts::PI;

fn q(x0: f64, x1: f64, x2: f64, x3: f64) -> Quaternion {
    Quaternion::new(x0, x1, x2, x3)
}

fn unit_chain(center: Quaternion) -> CycleChain {
    CycleChain::sphere(center, 1.0, Resolution::default()).unwrap()
}

#[test]
fn sphere_area_and_radius() {
    let s = SphereCycle::new(Quaternion::ZERO, 1.0, Resolution::uniform(16)).unwrap();
    assert!((s.area() / (2.0 * PI * PI) - 1.0).abs() < 1e-6);
    let c = q(0.5, -1.0, 2.0, 0.0);
    let s = SphereCycle::new(c, 2.0, Resolution::default()).unwrap();
    assert!((s.area() / (16.0 * PI * PI) - 1.0).abs() < 1e-6);
    assert!(s.nodes().iter().all(|n| ((n.point - c).norm() - 2.0).abs() < 1e-12));
    assert_eq!(SphereCycle::new(c, 0.0, Resolution::default()).unwrap_err(), Error::BadRadius(0.0));
    assert!(matches!(SphereCycle::new(c, 1.0, Resolution::uniform(3)), Err(Error::BadResolution(_))));
}

#[test]
fn surface_integral_examples() {
    let q0f = FueterField::cauchy_kernel(Quaternion::ZERO);
    let v = surface_integral(&q0f, &unit_chain(Quaternion::ZERO), MeasureSide::Left).unwrap();
    assert!((v.x0 / EIGHT_PI2 - 1.0).abs() < 1e-4 && v.vec().norm() < 1e-10);
    let c = FueterField::constant(q(1.0, 2.0, -1.0, 0.5));
    assert!(surface_integral(&c, &unit_chain(Quaternion::ONE), MeasureSide::Left).unwrap().norm() < 1e-10);
    let v1 = FueterField::fueter_polynomial(MultiIndex::new(1, 0, 0));
    assert!(surface_integral(&v1, &unit_chain(q(0.3, 0.1, 0.0, -0.2)), MeasureSide::Left).unwrap().norm() < 1e-10);
    let chain = unit_chain(Quaternion::E1);
    let on_node = FueterField::cauchy_kernel(chain.cycles[0].0.nodes()[7].point);
    assert!(matches!(surface_integral(&on_node, &chain, MeasureSide::Left), Err(Error::SingularOnContour(_))));
}

#[test]
fn right_mode_moves_the_measure() {
    // q₀ dσ and dσ q₀ both have residue 1; they differ for a non-real right factor
    let c = q(0.0, 1.0, 2.0, 0.0);
    let f = FueterField::new(FieldKind::RightMul(Box::new(FieldKind::CauchyKernel { center: Quaternion::ZERO }), c));
    let left = surface_integral(&f, &unit_chain(Quaternion::ZERO), MeasureSide::Left).unwrap() * (1.0 / EIGHT_PI2);
    assert!(left.max_abs_diff(&c) < 1e-4);
    // on the unit sphere f dσ ∝ conj(ν) c ν, whose average keeps only Sc(c)
    let right = surface_integral(&f, &unit_chain(Quaternion::ZERO), MeasureSide::Right).unwrap() * (1.0 / EIGHT_PI2);
    assert!(right.max_abs_diff(&Quaternion::real(c.x0)) < 1e-4);
}

#[test]
fn cauchy_formula_examples() {
    let one = FueterField::constant(Quaternion::ONE);
    let chain = unit_chain(Quaternion::ZERO);
    assert!((cauchy_eval(&one, &chain, q(0.2, 0.1, -0.3, 0.0)).unwrap() - Quaternion::ONE).norm() < 1e-4);
    assert!(cauchy_eval(&one, &chain, q(2.0, 0.0, 0.0, 0.0)).unwrap().norm() < 1e-4);
    let p = q(3.0, 0.5, 0.0, 0.0);
    let f = FueterField::cauchy_kernel(p);
    let z = q(0.1, 0.2, 0.3, -0.1);
    let oracle = cauchy_kernel(z - p).unwrap();
    assert!(cauchy_eval(&f, &chain, z).unwrap().max_abs_diff(&oracle) < 1e-4);
    for m in MultiIndex::up_to(2) {
        let v = FueterField::fueter_polynomial(m);
        let got = cauchy_eval(&v, &chain, z).unwrap();
        assert!(got.max_abs_diff(&crate::kernels::fueter_polynomial(m, z)) < 1e-4, "{m:?}");
    }
    assert_eq!(cauchy_eval(&one, &chain, Quaternion::E2), Err(Error::PointOnContour));
}

#[test]
fn winding_numbers() {
    let chain = unit_chain(Quaternion::ZERO);
    let inside = winding_number(&chain, Quaternion::ZERO).unwrap();
    assert!((inside.value - 1.0).abs() < 1e-3 && inside.rounded() == 1);
    assert!(winding_number(&chain, Quaternion::real(2.0)).unwrap().value.abs() < 1e-3);
    let mut two = unit_chain(Quaternion::ZERO);
    two.push(SphereCycle::new(Quaternion::ZERO, 0.5, Resolution::default()).unwrap(), 1.0).unwrap();
    assert!((winding_number(&two, Quaternion::ZERO).unwrap().value - 2.0).abs() < 1e-3);
    let mut annulus = unit_chain(Quaternion::ZERO);
    annulus.push(SphereCycle::new(Quaternion::ZERO, 0.5, Resolution::default()).unwrap(), -1.0).unwrap();
    assert!(winding_number(&annulus, Quaternion::ZERO).unwrap().value.abs() < 1e-3);
    assert!((winding_number(&annulus, q(0.0, 0.75, 0.0, 0.0)).unwrap().value - 1.0).abs() < 1e-3);
    assert!(annulus.push(SphereCycle::new(Quaternion::ZERO, 0.1, Resolution::default()).unwrap(), 2.0).is_err());
}

#[test]
fn residue_examples() {
    let r = residue(&FueterField::cauchy_kernel(Quaternion::ZERO), Quaternion::ZERO, 1.0, Resolution::default()).unwrap();
    assert!((r - Quaternion::ONE).norm() < 1e-4);
    for eps in [0.5, 2.0] {
        let s = residue(&FueterField::cauchy_kernel(Quaternion::ZERO), Quaternion::ZERO, eps, Resolution::default()).unwrap();
        assert!((s - r).norm() < 1e-5);
    }
    let p = q(1.0, -2.0, 0.5, 0.0);
    let c = q(0.5, 0.0, -1.0, 2.0);
    let f = FueterField::new(FieldKind::RightMul(Box::new(FieldKind::CauchyKernel { center: p }), c));
    assert!(residue(&f, p, 0.3, Resolution::default()).unwrap().max_abs_diff(&c) < 1e-4);
    let v = FueterField::fueter_polynomial(MultiIndex::new(1, 1, 0));
    assert!(residue(&v, p, 0.3, Resolution::default()).unwrap().norm() < 1e-10);
}

#[test]
fn residue_quadrature_converges() {
    let f = FueterField::cauchy_kernel(q(0.05, 0.02, 0.0, 0.0));
    let err = |n| (residue(&f, Quaternion::ZERO, 0.5, Resolution::uniform(n)).unwrap() - Quaternion::ONE).norm();
    let (e8, e16) = (err(8), err(16));
    assert!(e16 < e8 / 4.0, "{e8} -> {e16}");
}

#[test]
fn cofactor_of_diagonal_and_cross_product() {
    let j = [[2.0, 0.0, 0.0, 0.0], [0.0, 3.0, 0.0, 0.0], [0.0, 0.0, 5.0, 0.0], [0.0, 0.0, 0.0, 7.0]];
    let c = cofactor(&j);
    assert_eq!([c[0][0], c[1][1], c[2][2], c[3][3]], [105.0, 70.0, 42.0, 30.0]);
    let n = cross4(Quaternion::E1, Quaternion::E2, Quaternion::E3);
    assert_eq!(n.dot(&Quaternion::ONE).abs(), 1.0);
    assert!(n.dot(&Quaternion::E1).abs() < 1e-15);
}

#[test]
fn argument_principle_examples() {
    let res = Resolution::default();
    let id = |z: Quaternion| Ok(z);
    let o = ord_euclidean(&id, Quaternion::ZERO, 1.0, res).unwrap();
    assert!((o.value - 1.0).abs() < 1e-3);
    let p = q(0.5, -0.5, 1.0, 0.0);
    let shift = move |z: Quaternion| Ok(z - p);
    assert!((ord_euclidean(&shift, p, 0.5, res).unwrap().value - 1.0).abs() < 1e-3);
    let a = q(0.7, -1.1, 0.4, 2.0);
    let scaled = move |z: Quaternion| Ok(a * z);
    let o = ord_euclidean(&scaled, Quaternion::ZERO, 0.8, res).unwrap();
    assert!((o.value - 1.0).abs() < 1e-3);
    // image-cycle oracle for the same map
    let cycle = SphereCycle::new(Quaternion::ZERO, 0.8, res).unwrap();
    let kernel = |w: Quaternion| cauchy_kernel(w);
    let image = image_cycle_integral(&scaled, &kernel, &cycle).unwrap();
    assert!((image.x0 - o.value).abs() < 1e-6);
    assert!(matches!(ord_euclidean(&id, Quaternion::ONE, 0.5, res), Err(Error::NotAZero(_))));
    let far = move |z: Quaternion| Ok(z - Quaternion::real(5.0));
    assert!(matches!(ord_euclidean(&far, Quaternion::ZERO, 1.0, res), Err(Error::NotAZero(_))));
}

#[test]
fn conjugation_reverses_orientation() {
    // z ↦ conj(z) is orientation reversing on ℝ⁴
    let res = Resolution::default();
    let conj = |z: Quaternion| Ok(z.conj());
    assert!((ord_euclidean(&conj, Quaternion::ZERO, 1.0, res).unwrap().value + 1.0).abs() < 1e-3);
}

#[test]
fn zero_on_contour_is_reported() {
    let res = Resolution::uniform(8);
    // f vanishes on the whole sphere |z| = 1 besides at 0
    let f = |z: Quaternion| Ok(z * (z.norm2() - 1.0));
    assert!(matches!(ord_euclidean(&f, Quaternion::ZERO, 1.0, res), Err(Error::ZeroOnContour(_))));
}

#[test]
fn quadrature_is_deterministic_across_thread_counts() {
    let f = FueterField::cauchy_kernel(q(0.1, 0.2, 0.0, 0.0));
    let chain = unit_chain(Quaternion::ZERO);
    let run = |n| {
        rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(|| surface_integral(&f, &chain, MeasureSide::Left).unwrap())
    };
    assert_eq!(run(1), run(4));
}
