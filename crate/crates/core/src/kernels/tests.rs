use super::*;
use proptest::prelude::*;

fn q(x0: f64, x1: f64, x2: f64, x3: f64) -> Quaternion {
    Quaternion::new(x0, x1, x2, x3)
}

fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    a.max_abs_diff(&b) <= tol
}

/// Central difference of `f` along `mu`.
fn fd(f: &dyn Fn(Quaternion) -> Quaternion, z: Quaternion, mu: usize, h: f64) -> Quaternion {
    let e = Quaternion::basis(mu) * h;
    (f(z + e) - f(z - e)) * (0.5 / h)
}

#[test]
fn cauchy_kernel_examples() {
    assert_eq!(cauchy_kernel(Quaternion::ONE).unwrap(), Quaternion::ONE);
    assert!(close(cauchy_kernel(Quaternion::E1 * 2.0).unwrap(), Quaternion::E1 * (-1.0 / 8.0), 1e-16));
    assert!(close(cauchy_kernel(q(1.0, 1.0, 1.0, 1.0)).unwrap(), q(1.0, -1.0, -1.0, -1.0) * (1.0 / 16.0), 1e-16));
    assert_eq!(cauchy_kernel(Quaternion::ZERO), Err(Error::SingularPoint(Quaternion::ZERO)));
}

#[test]
fn kernel_derivative_matches_finite_differences() {
    assert_eq!(kernel_derivative(MultiIndex::ZERO, Quaternion::ONE).unwrap(), Quaternion::ONE);
    let f = |z: Quaternion| cauchy_kernel(z).unwrap();
    let d = kernel_derivative(MultiIndex::new(1, 0, 0), Quaternion::E2).unwrap();
    assert!(close(d, fd(&f, Quaternion::E2, 1, 1e-4), 1e-6));
    let z = q(1.0, 1.0, 0.0, 0.0);
    let d2 = kernel_derivative(MultiIndex::new(0, 1, 1), z).unwrap();
    let h = 1e-3;
    let inner = |w: Quaternion| fd(&f, w, 3, h);
    assert!(close(d2, fd(&inner, z, 2, h), 1e-5));
    assert_eq!(kernel_derivative(MultiIndex::new(2, 1, 1), z), Err(Error::UnsupportedOrder(4)));
    assert!(matches!(kernel_derivative(MultiIndex::new(1, 0, 0), Quaternion::ZERO), Err(Error::SingularPoint(_))));
}

#[test]
fn fueter_polynomial_examples() {
    assert_eq!(fueter_polynomial(MultiIndex::ZERO, q(3.0, -1.0, 2.0, 5.0)), Quaternion::ONE);
    assert_eq!(fueter_polynomial(MultiIndex::new(1, 0, 0), q(2.0, 3.0, 0.0, 0.0)), q(3.0, -2.0, 0.0, 0.0));
    let z = q(1.0, 1.0, 1.0, 0.0);
    let z1 = zeta(z, 1);
    let z2 = zeta(z, 2);
    let brute = (z1 * z2 + z2 * z1) * 0.5;
    assert!(close(fueter_polynomial(MultiIndex::new(1, 1, 0), z), brute, 1e-15));
}

#[test]
fn fueter_polynomials_are_left_monogenic() {
    let mut rng = 0x2545F4914F6CDD1Du64;
    let mut next = || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        (rng >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for m in MultiIndex::up_to(3) {
        let f = FueterField::fueter_polynomial(m);
        let fdf = f.clone().with_jet_mode(JetMode::fd(1e-4));
        for _ in 0..100 {
            let z = q(next(), next(), next(), next());
            assert!(apply_d(&f, z).unwrap().norm() < 1e-12, "{m:?}");
            assert!(apply_d(&fdf, z).unwrap().norm() < 1e-4, "{m:?}");
        }
    }
}

#[test]
fn operator_examples() {
    let z = q(1.0, 1.0, 0.0, 0.0);
    assert!(apply_d(&FueterField::cauchy_kernel(Quaternion::ZERO), z).unwrap().norm() < 1e-10);
    let c = FueterField::constant(q(1.0, 2.0, 3.0, 4.0));
    assert_eq!(apply_d(&c, z).unwrap(), Quaternion::ZERO);
    assert_eq!(apply_dbar(&c, z).unwrap(), Quaternion::ZERO);
    assert_eq!(apply_ddelta(&c, z).unwrap(), Quaternion::ZERO);
    let id = FueterField::new(FieldKind::Identity);
    assert!(close(apply_dbar(&id, z).unwrap(), Quaternion::real(4.0), 1e-14));
    let inv = FueterField::new(FieldKind::Power(-1));
    assert!(close(apply_delta(&inv, Quaternion::ONE).unwrap(), Quaternion::real(-4.0), 1e-12));
    assert!(apply_ddelta(&inv, z).unwrap().norm() < 1e-12);
    let harmonic = FueterField::custom(|z| Quaternion::real(z.x0 * z.x0 - z.x1 * z.x1));
    assert!(apply_delta(&harmonic, z).unwrap().norm() < 1e-6);
    let q0f = FueterField::cauchy_kernel(Quaternion::ZERO);
    assert!(apply_delta(&q0f, q(0.0, 2.0, 0.0, 0.0)).unwrap().norm() < 1e-12);
}

#[test]
fn dbar_then_d_equals_laplacian_by_finite_differences() {
    // composition oracle: D applied to a finite-difference D̄ field
    let f = FueterField::new(FieldKind::Power(3));
    let z = q(0.3, -0.2, 0.5, 0.1);
    let dbar = |w: Quaternion| apply_dbar(&f, w).unwrap();
    let h = 1e-4;
    let composed: Quaternion = (0..4).map(|mu| Quaternion::basis(mu) * fd(&dbar, z, mu, h)).sum();
    assert!(close(composed, apply_delta(&f, z).unwrap(), 1e-6));
}

#[test]
fn integer_powers_are_fueter_holomorphic() {
    let z = q(0.4, -0.7, 0.2, 0.9);
    for n in [-3, -2, -1, 1, 2, 3, 4] {
        let f = FueterField::new(FieldKind::Power(n));
        assert!(apply_ddelta(&f, z).unwrap().norm() < 1e-11, "z^{n}");
    }
}

#[test]
fn induced_fields() {
    let z = q(1.0, 2.0, 0.0, 0.0);
    assert!(close(InducedField::power(1).eval(z).unwrap(), z, 1e-15));
    let z = q(1.0, 1.0, 0.0, 0.0);
    assert!(close(InducedField::power(2).eval(z).unwrap(), q(0.0, 2.0, 0.0, 0.0), 1e-14));
    let z = q(0.3, -1.2, 0.4, 0.8);
    assert!(close(InducedField::power(-1).eval(z).unwrap(), z.inverse().unwrap(), 1e-15));
    // real axis: F(w) = w has v = 0 there, F(w) = i w does not
    assert!(close(InducedField::power(2).eval(Quaternion::real(3.0)).unwrap(), Quaternion::real(9.0), 1e-14));
    let rotated = InducedField::new("iw", |w: num_complex::Complex64| Ok(w * num_complex::Complex64::i()));
    assert!(matches!(rotated.eval(Quaternion::real(2.0)), Err(Error::AxisSingularity(_))));
    assert!(matches!(InducedField::power(-1).eval(Quaternion::ZERO), Err(Error::DomainError(_))));
}

#[test]
fn induced_fields_are_fueter_holomorphic() {
    // nested differences with h = 1e-2, as for any field without analytic jets
    let f = FueterField::induced(InducedField::exp()).with_jet_mode(JetMode::fd(1e-2));
    for z in [q(0.2, 0.5, -0.3, 0.4), q(-0.5, 0.1, 0.9, -0.2), q(0.1, -0.8, 0.3, 0.6)] {
        assert!(apply_ddelta(&f, z).unwrap().norm() < 1e-3);
    }
}

#[test]
fn rational_pole_sum_examples() {
    let one = PoleSum::at_locations(&[Quaternion::ZERO]);
    assert!(close(rational_pole_sum(&one, Quaternion::E1).unwrap(), -Quaternion::E1, 1e-16));
    let two = PoleSum::at_locations(&[Quaternion::ZERO, Quaternion::ONE]);
    assert!(close(rational_pole_sum(&two, Quaternion::real(2.0)).unwrap(), Quaternion::real(0.5 + 1.0), 1e-15));
    let f = FueterField::poles(one);
    assert!(apply_ddelta(&f, q(0.3, 0.2, -0.9, 0.4)).unwrap().norm() < 1e-12);
    assert!(matches!(f.eval(Quaternion::ZERO), Err(Error::SingularPoint(_))));
}

#[test]
fn non_real_conjugators_leave_the_kernel_of_d_delta() {
    let a = q(0.3, 0.5, -0.2, 0.7);
    let f = FueterField::poles(PoleSum::new(vec![Pole { shift: q(0.1, 1.0, 0.2, -0.3), conjugator: Some(a) }]));
    assert!(apply_ddelta(&f, q(0.4, -0.3, 0.9, 0.2)).unwrap().norm() > 1e-3);
    let real = FueterField::poles(PoleSum::new(vec![Pole::weighted(Quaternion::E2, 2.5)]));
    assert!(apply_ddelta(&real, q(0.4, -0.3, 0.9, 0.2)).unwrap().norm() < 1e-12);
}

#[test]
fn analytic_and_finite_difference_jets_agree() {
    let f = FueterField::poles(PoleSum::at_locations(&[Quaternion::ZERO, q(1.0, 0.5, 0.0, 0.0)]));
    let g = f.clone().with_jet_mode(JetMode::FiniteDifference(FdSteps::default()));
    let z = q(0.4, -0.3, 0.9, 0.2);
    let (a, b) = (f.jet(z, 3).unwrap(), g.jet(z, 3).unwrap());
    assert!(close(a.d(), b.d(), 1e-7));
    assert!(close(a.laplacian(), b.laplacian(), 1e-5));
    assert!(close(a.d_laplacian(), b.d_laplacian(), 1e-3));
    assert!(close(a.d_laplacian(), a.laplacian_d(), 1e-10));
}

#[test]
fn singular_points_and_order_limits() {
    let f = FueterField::cauchy_kernel(Quaternion::E3);
    assert!(matches!(f.eval(Quaternion::E3 + Quaternion::real(1e-9)), Err(Error::SingularPoint(_))));
    assert_eq!(f.jet(Quaternion::ONE, 4).unwrap_err(), Error::UnsupportedOrder(4));
}

fn point() -> impl Strategy<Value = Quaternion> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c, d)| q(a, b, c, d))
}

fn shell_point() -> impl Strategy<Value = Quaternion> {
    (point(), 0.5..2.0f64).prop_filter_map("nonzero direction", |(z, r)| {
        let n = z.norm();
        (n > 1e-3).then(|| z * (r / n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cauchy_kernel_is_monogenic_and_harmonic(z in shell_point()) {
        let f = FueterField::cauchy_kernel(Quaternion::ZERO);
        prop_assert!(apply_d(&f, z).unwrap().norm() < 1e-8);
        prop_assert!(apply_delta(&f, z).unwrap().norm() < 1e-8);
    }

    #[test]
    fn laplacian_factorizes(z in shell_point()) {
        for f in [FueterField::cauchy_kernel(q(0.1, 0.0, 0.0, 0.0)), FueterField::new(FieldKind::Power(-2)), FueterField::new(FieldKind::Power(3))] {
            let j = f.jet(z, 2).unwrap();
            prop_assert!(close(j.laplacian(), j.d_dbar(), 1e-6 * (1.0 + j.laplacian().norm())));
        }
    }

    #[test]
    fn inverse_laplacian_identity(z in shell_point()) {
        let inv = FueterField::new(FieldKind::Power(-1));
        let lhs = apply_delta(&inv, z).unwrap() + cauchy_kernel(z).unwrap() * 4.0;
        prop_assert!(lhs.norm() < 1e-6);
    }

    #[test]
    fn pole_sums_are_fueter_holomorphic(z in shell_point(), b in point()) {
        let f = FueterField::poles(PoleSum::at_locations(&[Quaternion::ZERO, b]));
        prop_assume!(f.singular_distance(z) > 0.2);
        prop_assert!(apply_ddelta(&f, z).unwrap().norm() < 1e-6);
    }
}
