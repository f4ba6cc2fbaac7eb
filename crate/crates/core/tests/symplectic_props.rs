mod common;

use maslov_core::linalg;
use maslov_core::symplectic::{
    annihilator, intersection_dim, principal_angles, relative_phases, same_subspace, LagrangianPlane, SymplecticSpace,
};
use maslov_core::{CMatrix, Error, C64};
use proptest::prelude::*;

fn sorted_negated(phases: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = phases.iter().map(|p| linalg::wrap_angle(-p)).collect();
    out.sort_by(f64::total_cmp);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = common::rng(seed);
        let x = SymplecticSpace::standard(n);
        let u = common::haar_unitary(&mut rng, n);
        let plane = LagrangianPlane::from_graph(&x, &u).unwrap();
        prop_assert!(linalg::spectral_norm(&(plane.graph_unitary().unwrap() - &u)) <= 1e-10);
        prop_assert!(plane.isotropy_residual() <= 1e-10);
    }

    #[test]
    fn plane_is_its_own_annihilator(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = common::rng(seed);
        let x = SymplecticSpace::standard(n);
        let f = common::random_plane(&mut rng, &x);
        let ann = annihilator(&x, f.basis()).unwrap();
        prop_assert!(same_subspace(&ann, f.basis(), 1e-10));
    }

    #[test]
    fn swapping_planes_negates_phases(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = common::rng(seed);
        let x = SymplecticSpace::standard(n);
        let f = common::random_plane(&mut rng, &x);
        let z = common::random_plane(&mut rng, &x);
        let fz = relative_phases(&f, &z).unwrap();
        let zf = sorted_negated(&relative_phases(&z, &f).unwrap());
        for (a, b) in fz.iter().zip(&zf) {
            prop_assert!(linalg::angle_diff(*a, *b).abs() < 1e-10);
        }
    }

    #[test]
    fn principal_angles_are_half_phases(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = common::rng(seed);
        let x = SymplecticSpace::standard(n);
        let f = common::random_plane(&mut rng, &x);
        let z = common::random_plane(&mut rng, &x);
        let mut halves: Vec<f64> = relative_phases(&f, &z).unwrap().iter().map(|p| 0.5 * p.abs()).collect();
        halves.sort_by(f64::total_cmp);
        for (a, b) in halves.iter().zip(principal_angles(&f, &z)) {
            prop_assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn gap_is_a_metric_on_samples(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = common::rng(seed);
        let x = SymplecticSpace::standard(n);
        let f = common::random_plane(&mut rng, &x);
        let g = common::random_plane(&mut rng, &x);
        let h = common::random_plane(&mut rng, &x);
        prop_assert!(f.gap(&f) < 1e-12);
        prop_assert!((f.gap(&g) - g.gap(&f)).abs() < 1e-12);
        prop_assert!(f.gap(&g) <= 1.0 + 1e-12);
        prop_assert!(f.gap(&h) <= f.gap(&g) + g.gap(&h) + 1e-12);
    }

    #[test]
    fn direct_sum_meets_diagonal_in_full(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::rng(seed);
        let x = SymplecticSpace::standard(n);
        let doubled = x.doubled();
        let f = common::random_plane(&mut rng, &x);
        let z = common::random_plane(&mut rng, &x);
        let diagonal = SymplecticSpace::diagonal_in(&doubled).unwrap();
        let ff = f.direct_sum(&f, &doubled).unwrap();
        prop_assert!(ff.isotropy_residual() < 1e-10);
        prop_assert_eq!(intersection_dim(&ff, &diagonal, 1e-8).unwrap(), n);
        let fz = f.direct_sum(&z, &doubled).unwrap();
        prop_assert_eq!(
            intersection_dim(&fz, &diagonal, 1e-8).unwrap(),
            intersection_dim(&f, &z, 1e-8).unwrap()
        );
    }

    #[test]
    fn unitary_change_of_structure(seed in any::<u64>(), n in 1usize..=3) {
        // S J S^* is again a complex structure; S maps Lagrangian planes to Lagrangian planes.
        let mut rng = common::rng(seed);
        let x = SymplecticSpace::standard(n);
        let s = common::haar_unitary(&mut rng, 2 * n);
        let moved = SymplecticSpace::from_structure(&s * x.structure() * s.adjoint()).unwrap();
        let f = common::random_plane(&mut rng, &x);
        let image = LagrangianPlane::from_basis(&moved, &(&s * f.basis())).unwrap();
        prop_assert!(image.isotropy_residual() < 1e-10);
        let ann = annihilator(&moved, image.basis()).unwrap();
        prop_assert!(same_subspace(&ann, image.basis(), 1e-10));
    }
}

#[test]
fn structure_of_standard_space() {
    for p in 1..=4 {
        let x = SymplecticSpace::standard(p);
        let j = x.structure();
        let id = CMatrix::identity(2 * p, 2 * p);
        assert!(linalg::max_abs(&(j * j + &id)) <= 1e-12);
        assert!(linalg::max_abs(&(j.adjoint() + j)) <= 1e-12);
        let i = C64::i();
        assert!(linalg::max_abs(&(j * x.ker_j_plus_i() + x.ker_j_plus_i() * i)) < 1e-12);
        assert!(linalg::max_abs(&(j * x.ker_j_minus_i() - x.ker_j_minus_i() * i)) < 1e-12);
    }
}

#[test]
fn identity_graph_returns_identity() {
    let x = SymplecticSpace::standard(3);
    let id = CMatrix::identity(3, 3);
    let plane = LagrangianPlane::from_graph(&x, &id).unwrap();
    let rebuilt = LagrangianPlane::from_basis(&x, &(plane.basis() * C64::new(0.0, 2.0))).unwrap();
    assert!(linalg::max_abs(&(rebuilt.graph_unitary().unwrap() - id)) < 1e-12);
}

#[test]
fn rejects_malformed_inputs() {
    let x = SymplecticSpace::standard(2);
    let wrong_width = CMatrix::identity(4, 1);
    assert!(matches!(LagrangianPlane::from_basis(&x, &wrong_width), Err(Error::NotHalfDimensional { .. })));
    // span{e1, e3} is not isotropic: omega(e3, e1) = 1
    let mut b = CMatrix::zeros(4, 2);
    b[(0, 0)] = C64::new(1.0, 0.0);
    b[(2, 1)] = C64::new(1.0, 0.0);
    assert!(matches!(LagrangianPlane::from_basis(&x, &b), Err(Error::NotIsotropic { .. })));
    let mut rank_one = CMatrix::zeros(4, 2);
    rank_one[(0, 0)] = C64::new(1.0, 0.0);
    rank_one[(0, 1)] = C64::new(2.0, 0.0);
    assert!(matches!(LagrangianPlane::from_basis(&x, &rank_one), Err(Error::RankDeficient { .. })));
    let not_structure = CMatrix::identity(4, 4);
    assert!(SymplecticSpace::from_structure(not_structure).is_err());
}
