use super::*;
use crate::kernels::{FieldKind, FueterField, Pole};

fn q(x0: f64, x1: f64, x2: f64, x3: f64) -> Quaternion {
    Quaternion::new(x0, x1, x2, x3)
}

fn sample_points(n: usize, seed: u64) -> Vec<Quaternion> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| q(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect()
}

fn poles(locs: &[Quaternion]) -> FueterField {
    FueterField::poles(PoleSum::at_locations(locs))
}

#[test]
fn potential_is_imaginary_and_vanishes_with_laplacian() {
    let f = poles(&[Quaternion::ZERO, q(1.0, 0.5, 0.0, 0.0)]);
    let a = gauge_potential(&f, q(0.3, -0.4, 0.2, 0.9)).unwrap();
    assert!(a.a.iter().all(|x| x.x0 == 0.0));
    // Δz = 0, so the identity field generates the trivial connection
    let id = FueterField::new(FieldKind::Identity);
    assert!(gauge_potential(&id, q(0.3, 0.1, 0.0, 0.0)).unwrap().a.iter().all(|x| x.norm() == 0.0));
    let c = FueterField::constant(Quaternion::E1);
    assert!(matches!(gauge_potential(&c, Quaternion::ONE), Err(Error::DegenerateDF(_))));
}

#[test]
fn potential_of_inverse_matches_finite_difference_oracle() {
    let inv = FueterField::new(FieldKind::Power(-1));
    let z = Quaternion::ONE;
    let h = 1e-5;
    let f = |w: Quaternion| w.inverse().unwrap();
    let df: Quaternion = (0..4)
        .map(|mu| Quaternion::basis(mu) * ((f(z + Quaternion::basis(mu) * h) - f(z - Quaternion::basis(mu) * h)) * (0.5 / h)))
        .sum();
    let a = gauge_potential(&inv, z).unwrap();
    for mu in 0..4 {
        let oracle = (Quaternion::basis(mu) * Quaternion::real(-4.0) * df.inverse().unwrap()).vec() * 0.5;
        assert!(a.a[mu].max_abs_diff(&oracle) < 1e-8);
    }
}

#[test]
fn radial_profile_is_symmetric_along_the_real_axis() {
    let f = poles(&[Quaternion::ZERO]);
    for t in [0.3, 0.7, 1.5] {
        let norm = |z| gauge_potential(&f, z).unwrap().a.iter().map(|x| x.norm2()).sum::<f64>().sqrt();
        assert!((norm(Quaternion::real(t)) - norm(Quaternion::real(-t))).abs() < 1e-12);
    }
}

#[test]
fn hodge_dual_examples() {
    let mut f = [[Quaternion::ZERO; 4]; 4];
    f[0][1] = Quaternion::E3;
    f[1][0] = -Quaternion::E3;
    let d = hodge_dual(&f);
    assert_eq!(d[2][3], Quaternion::E3 * HODGE_ORIENTATION);
    assert_eq!(d[3][2], -Quaternion::E3 * HODGE_ORIENTATION);
    assert_eq!(hodge_dual(&d), f);
    let s = FieldStrengthSample::from_tensor(f);
    for m in 0..4 {
        for n in 0..4 {
            assert_eq!(s.sd[m][n] + s.asd[m][n], f[m][n] * 2.0);
        }
    }
}

#[test]
fn double_dual_is_identity_on_random_tensors() {
    let pts = sample_points(6, 3);
    let mut f = [[Quaternion::ZERO; 4]; 4];
    let mut k = 0;
    for m in 0..4 {
        for n in m + 1..4 {
            f[m][n] = pts[k].vec();
            f[n][m] = -pts[k].vec();
            k += 1;
        }
    }
    let back = hodge_dual(&hodge_dual(&f));
    for m in 0..4 {
        for n in 0..4 {
            assert!(back[m][n].max_abs_diff(&f[m][n]) < 1e-15);
        }
    }
    // a self-dual seed has no anti-self-dual part
    let sd = FieldStrengthSample::from_tensor(f).sd;
    assert!(FieldStrengthSample::from_tensor(sd).asd_ratio() < 1e-15);
}

#[test]
fn pole_sums_are_self_dual() {
    let configs = [
        vec![Quaternion::ZERO, q(1.0, 0.5, 0.0, 0.0)],
        vec![q(0.1, 0.2, 0.0, -0.3), q(-1.0, 0.0, 0.7, 0.2), q(0.4, -0.9, -0.5, 0.6)],
    ];
    for locs in configs {
        let f = poles(&locs);
        for z in sample_points(20, 11) {
            if f.singular_distance(z) < 0.1 {
                continue;
            }
            let s = field_strength(&f, z, FIELD_STRENGTH_STEP).unwrap();
            assert!(s.asd_ratio() < 1e-3, "{locs:?} at {z:?}: {}", s.asd_ratio());
            assert!(s.f.iter().flatten().all(|x| x.x0.abs() < 1e-8));
            assert!(chern_density(&s) > 0.0);
        }
    }
}

#[test]
fn single_pole_is_pure_gauge() {
    let f = poles(&[q(0.1, 0.0, 0.2, 0.0)]);
    for z in sample_points(10, 5) {
        let s = field_strength(&f, z, FIELD_STRENGTH_STEP).unwrap();
        assert!(s.norm() < 1e-8, "{}", s.norm());
        assert!(s.asd_defect() < 1e-3);
    }
}

#[test]
fn non_fueter_negative_control_is_not_self_dual() {
    let control = FieldKind::Sum(vec![
        FieldKind::Custom(std::sync::Arc::new(|z: Quaternion| z.conj() * z.norm2())),
        FieldKind::RationalPoleSum(PoleSum::at_locations(&[q(1.0, 0.5, 0.0, 0.0)])),
    ]);
    let f = FueterField::new(control).with_jet_mode(crate::kernels::JetMode::FiniteDifference(Default::default()));
    let worst = sample_points(20, 9)
        .into_iter()
        .filter_map(|z| field_strength(&f, z, FIELD_STRENGTH_STEP).ok())
        .map(|s| s.asd_ratio())
        .fold(0.0, f64::max);
    assert!(worst > 1e-1, "{worst}");
}

#[test]
fn density_signs() {
    let zero = FieldStrengthSample::from_tensor([[Quaternion::ZERO; 4]; 4]);
    assert_eq!(chern_density(&zero), 0.0);
    let mut f = [[Quaternion::ZERO; 4]; 4];
    f[0][1] = Quaternion::E1;
    f[1][0] = -Quaternion::E1;
    let sd = FieldStrengthSample::from_tensor(FieldStrengthSample::from_tensor(f).sd);
    let asd = FieldStrengthSample::from_tensor(FieldStrengthSample::from_tensor(f).asd);
    assert!(chern_density(&sd) > 0.0);
    assert!(chern_density(&asd) < 0.0);
    assert!((chern_density(&sd) + chern_density(&asd)).abs() < 1e-14);
}

#[test]
fn density_is_invariant_under_constant_gauge_rotations() {
    let f = poles(&[Quaternion::ZERO, q(1.0, 0.5, 0.0, 0.0)]);
    let s = field_strength(&f, q(0.3, -0.2, 0.6, 0.1), FIELD_STRENGTH_STEP).unwrap();
    let g = q(0.3, -0.5, 0.7, 0.2);
    let g = g * (1.0 / g.norm());
    let gi = g.inverse().unwrap();
    let rotated: Tensor = std::array::from_fn(|m| std::array::from_fn(|n| gi * s.f[m][n] * g));
    let p = chern_density(&s);
    assert!((chern_density(&FieldStrengthSample::from_tensor(rotated)) - p).abs() < 1e-10 * p.abs().max(1.0));
}

#[test]
fn residue_route_counts_instantons() {
    let res = crate::contour::Resolution::uniform(16);
    let two = PoleSum::at_locations(&[Quaternion::ZERO, q(1.0, 0.5, 0.0, 0.0)]);
    let r = chern_number_residues(&two, 0.1, res).unwrap();
    assert_eq!((r.poles, r.n), (2, 1));
    assert!((r.c2_residue.value - 1.0).abs() < 1e-4);
    assert!((r.c2_surface.value - 1.0).abs() < 1e-4);
    let four = PoleSum::at_locations(&[q(0.1, 0.0, 0.0, 0.0), q(1.5, 0.0, 0.0, 0.0), q(0.0, 1.5, 0.2, 0.0), q(0.0, -0.3, 1.5, -1.0)]);
    let r = chern_number_residues(&four, 0.1, res).unwrap();
    assert!((r.c2_residue.value - 3.0).abs() < 1e-4 && (r.c2_surface.value - 3.0).abs() < 1e-4);
    let none = chern_number_residues(&PoleSum::default(), 0.1, res).unwrap();
    assert_eq!(none.c2_residue.value, 0.0);
    let close = PoleSum::at_locations(&[Quaternion::ZERO, q(0.1, 0.0, 0.0, 0.0)]);
    assert!(matches!(chern_number_residues(&close, 0.1, res), Err(Error::PoleCollision(..))));
}

#[test]
fn weights_do_not_change_the_count() {
    let weighted = PoleSum::new(vec![Pole::weighted(Quaternion::ZERO, 2.0), Pole::weighted(Quaternion::E1, 0.5)]);
    let r = chern_number_residues(&weighted, 0.1, crate::contour::Resolution::uniform(16)).unwrap();
    assert!((r.c2_residue.value - 1.0).abs() < 1e-4);
}

#[test]
fn volume_route_small_grid() {
    // pure gauge: no charge anywhere
    let f = poles(&[q(0.05, 0.1, -0.07, 0.03)]);
    let c = chern_number_volume(&f, Box4::cube(2.0), 9, FIELD_STRENGTH_STEP).unwrap();
    assert!(c.value.abs() < 1e-4, "{}", c.value);
    assert!(matches!(chern_number_volume(&f, Box4::cube(2.0), 8, 1e-3), Err(Error::BadResolution(_))));
    let on_grid = poles(&[Quaternion::ZERO, Quaternion::ONE]);
    assert!(matches!(chern_number_volume(&on_grid, Box4::cube(2.0), 9, 1e-3), Err(Error::PoleOnGrid(_))));
}
