use super::*;

fn hopf(kind: HopfKind, truncation: usize) -> HopfKernel {
    HopfKernel::new(HopfConfig { m: 2.0, truncation }, q(0.8, 0.3, -0.2, 0.1), kind).unwrap()
}

#[test]
fn untruncated_hopf_kernel_is_the_base_kernel() {
    let z = q(0.4, 0.1, 0.7, -0.3);
    let h = hopf(HopfKind::D, 0);
    assert!(h.eval(z).unwrap().max_abs_diff(&crate::kernels::cauchy_kernel(z - h.y).unwrap()) < 1e-15);
    let h = hopf(HopfKind::DDelta, 0);
    assert!(h.eval(z).unwrap().max_abs_diff(&(z - h.y).inverse().unwrap()) < 1e-15);
    assert!(matches!(h.eval(Quaternion::ZERO), Err(Error::SingularPoint(_))));
    assert!(matches!(HopfKernel::new(HopfConfig { m: 1.0, truncation: 3 }, Quaternion::ONE, HopfKind::D), Err(Error::NonConvergent(_))));
}

#[test]
fn inverted_terms_equal_orbit_terms() {
    let z = q(0.4, 0.1, 0.7, -0.3);
    for kind in [HopfKind::D, HopfKind::DDelta] {
        let h = hopf(kind, 5);
        for k in -3..=5 {
            let t: Quaternion = h.term(k, z);
            let o = h.orbit_term(k, z);
            assert!(t.max_abs_diff(&o) < 1e-12 * o.norm().max(1.0), "{kind:?} k = {k}");
        }
    }
}

#[test]
fn hopf_kernels_solve_their_equations() {
    let z = q(0.4, 0.1, 0.7, -0.3);
    let d = FueterField::new(FieldKind::Hopf(hopf(HopfKind::D, 12)));
    assert!(apply_d(&d, z).unwrap().norm() < 1e-9);
    let dd = FueterField::new(FieldKind::Hopf(hopf(HopfKind::DDelta, 12)));
    assert!(apply_ddelta(&dd, z).unwrap().norm() < 1e-9);
    // Δ x⁻¹ = -4 q₀(x) term by term on the untruncated kernels
    let d0 = hopf(HopfKind::D, 0);
    let dd0 = FueterField::new(FieldKind::Hopf(hopf(HopfKind::DDelta, 0)));
    assert!((apply_delta(&dd0, z).unwrap() + d0.eval(z).unwrap() * 4.0).norm() < 1e-9);
}

#[test]
fn automorphy_holds_up_to_the_tail() {
    let z = q(0.4, 0.1, 0.7, -0.3);
    for kind in [HopfKind::D, HopfKind::DDelta] {
        let h = hopf(kind, 30);
        let shifted = h.eval(z * h.config.m).unwrap();
        let expected = h.eval(z).unwrap() * h.config.m.powf(-kind.weight());
        let scale = 10.0 * (h.tail_estimate(z) + h.tail_estimate(z * h.config.m)) + 1e-12;
        assert!(shifted.max_abs_diff(&expected) < scale, "{kind:?}: {}", shifted.max_abs_diff(&expected));
    }
}

#[test]
fn tail_shrinks_with_truncation() {
    let z = q(0.4, 0.1, 0.7, -0.3);
    for kind in [HopfKind::D, HopfKind::DDelta] {
        assert!(hopf(kind, 20).tail_estimate(z) < hopf(kind, 10).tail_estimate(z) / 10.0);
    }
    let d = hopf(HopfKind::D, 30).diagnostics(z).unwrap();
    assert!(d.cauchy_satisfied, "{}", d.relative_increment);
}

#[test]
fn hopf_order_routes_agree() {
    let res = Resolution::default();
    let c = q(1.0, 0.2, 0.0, 0.0);
    let id = |z: Quaternion| Ok(z);
    let o = ord_hopf(&id, c, 0.2, HopfConfig::default(), res).unwrap();
    assert!((o.pullback.value - 1.0).abs() < 1e-3, "{o:?}");
    assert!((o.image_cycle.value - o.pullback.value).abs() < 1e-3);
    assert_eq!(o.target, c);
    let a = q(0.5, -1.0, 0.3, 0.2);
    let lin = move |z: Quaternion| Ok(a * z);
    assert_eq!(ord_hopf(&lin, c, 0.2, HopfConfig::default(), res).unwrap().pullback.rounded(), 1);
    assert!(matches!(ord_hopf(&id, c, 0.6, HopfConfig::default(), res), Err(Error::BallTooLarge { .. })));
    let origin = |z: Quaternion| Ok(z - c);
    assert!(matches!(ord_hopf(&origin, c, 0.2, HopfConfig::default(), res), Err(Error::InvalidParameter(_))));
}

#[test]
fn level_subgroup_enumeration() {
    assert!(gamma_pn_enumerate(4, 3, 2).is_err());
    assert!(gamma_pn_enumerate(2, 2, 2).is_err());
    assert!(gamma_pn_enumerate(2, 3, 0).is_err());
    let ball = gamma_p_ball(2, 2);
    assert_eq!(ball[0], GroupElement::identity());
    assert!(ball.iter().all(|g| g.matrix.validate()));
    let mut last = 0;
    for l in 1..=6 {
        let elems = gamma_pn_enumerate(2, 3, l).unwrap();
        assert!(elems.len() >= last);
        assert!(elems.iter().all(|g| g.is_level(3) && g.word_length() <= l && g.matrix.validate()));
        assert!(elems.contains(&GroupElement::identity()));
        last = elems.len();
    }
    // T_1³ is the shortest nontrivial translation in Γ_2[3]
    assert_eq!(gamma_pn_enumerate(2, 3, 2).unwrap().len(), 1);
    assert!(gamma_pn_enumerate(2, 3, 3).unwrap().len() > 1);
}

#[test]
fn poincare_series_terms() {
    let y = q(0.5, 0.2, 0.0, 0.0);
    let z = q(1.2, 0.3, -0.4, 0.1);
    let single = PoincareSeries::new(PoincareConfig { word_length: 1, ..Default::default() }, y).unwrap();
    assert_eq!(single.elements().len(), 1);
    assert!(single.eval(z).unwrap().max_abs_diff(&(z - y).inverse().unwrap()) < 1e-15);
    let s = Arc::new(PoincareSeries::new(PoincareConfig { word_length: 4, ..Default::default() }, y).unwrap());
    let sums = s.partial_sums(z, &[1, 2, 3, 4]).unwrap();
    assert!(sums[0].max_abs_diff(&(z - y).inverse().unwrap()) < 1e-15);
    assert!(sums[3].max_abs_diff(&s.eval(z).unwrap()) < 1e-12);
    let f = FueterField::new(FieldKind::Poincare(s.clone()));
    assert!(apply_ddelta(&f, z).unwrap().norm() < 1e-8);
    assert!(matches!(s.eval(q(-0.1, 0.3, 0.0, 0.0)), Err(Error::OutsideHalfSpace(_))));
    let height = PoincareConfig { word_length: 4, weight: PoincareWeight::HeightWeighted { height_index: 0 }, ..Default::default() };
    assert!(PoincareSeries::new(height, y).unwrap().eval(z).unwrap().is_finite());
    assert!(PoincareSeries::new(PoincareConfig { height_index: 4, ..Default::default() }, y).is_err());
}
