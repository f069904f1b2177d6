//! Property tests for the algebraic invariants.

use kfold_core::hc::{hciz_exact, weyl_sum, HcizProblem};
use kfold_core::perm::Permutation;
use kfold_core::spectra::{entanglement_spectrum, invariant_word_trace, spacing_ratios, WordSpec};
use kfold_core::tensor::{
    adjoint_action_matrix, kron_power, leg_permutation_map, partial_trace, permutation_operator, unvec_h,
    vec_h_unchecked, TensorOperator,
};
use kfold_core::{CMat, CVec, RVec, C64};
use proptest::prelude::*;

fn perm(k: usize) -> impl Strategy<Value = Permutation> {
    Just((0..k).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
}

fn complex_matrix(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n)
        .prop_map(move |v| CMat::from_iterator(n, n, v.into_iter().map(|(a, b)| C64::new(a, b))))
}

fn hermitian(n: usize) -> impl Strategy<Value = CMat> {
    complex_matrix(n).prop_map(|m| (&m + m.adjoint()) * C64::new(0.5, 0.0))
}

fn unitary(n: usize) -> impl Strategy<Value = CMat> {
    complex_matrix(n).prop_map(|m| m.qr().q())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permutation_group_laws(a in perm(5), b in perm(5)) {
        prop_assert_eq!(a.then(&b).inverse(), b.inverse().then(&a.inverse()));
        prop_assert_eq!(a.then(&b).sign(), a.sign() * b.sign());
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(a.cycle_type().weight(), 5);
    }

    #[test]
    fn leg_maps_compose(a in perm(3), b in perm(3)) {
        let ma = leg_permutation_map(&a, 2).unwrap();
        let mb = leg_permutation_map(&b, 2).unwrap();
        let mab = leg_permutation_map(&a.then(&b), 2).unwrap();
        for i in 0..8 {
            prop_assert_eq!(mab[i], ma[mb[i]]);
        }
    }

    #[test]
    fn permutation_operators_are_unitary_with_cycle_trace(a in perm(3)) {
        let p = permutation_operator(&a, 3).unwrap();
        let m = p.matrix();
        prop_assert!((m.adjoint() * m - CMat::identity(27, 27)).norm() < 1e-12);
        prop_assert!((p.trace().re - 3f64.powi(a.cycle_count() as i32)).abs() < 1e-12);
    }

    #[test]
    fn hermitian_coordinates_round_trip(h in hermitian(4)) {
        let v = vec_h_unchecked(&h);
        prop_assert!((v.norm() - h.norm()).abs() < 1e-12);
        prop_assert!((unvec_h(&v).unwrap() - &h).norm() < 1e-12);
    }

    #[test]
    fn adjoint_action_is_orthogonal(u in unitary(3), h in hermitian(3)) {
        let r = adjoint_action_matrix(&u).unwrap();
        prop_assert!((r.transpose() * &r - kfold_core::RMat::identity(9, 9)).norm() < 1e-10);
        let lhs = &r * vec_h_unchecked(&h);
        let rhs = vec_h_unchecked(&(&u * &h * u.adjoint()));
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn partial_trace_of_product(a in complex_matrix(2), b in complex_matrix(3)) {
        // Legs share one local dimension, so embed A into a 3-dim leg.
        let mut a3 = CMat::zeros(3, 3);
        a3.view_mut((0, 0), (2, 2)).copy_from(&a);
        let op = TensorOperator::new(a3.kronecker(&b), 3, 2).unwrap();
        let kept = partial_trace(&op, &[0]).unwrap();
        prop_assert!((kept.matrix() - &a3 * b.trace()).norm() < 1e-10 * (1.0 + a3.norm() * b.norm()));
    }

    #[test]
    fn entanglement_spectrum_is_normalized(re in prop::collection::vec(-1.0f64..1.0, 12), im in prop::collection::vec(-1.0f64..1.0, 12)) {
        let v = CVec::from_iterator(12, re.iter().zip(&im).map(|(a, b)| C64::new(*a, *b)));
        prop_assume!(v.norm() > 1e-3);
        let v = &v / C64::new(v.norm(), 0.0);
        let s = entanglement_spectrum(&v, 3, 4).unwrap();
        prop_assert!((s.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn spacing_ratios_lie_in_unit_interval(mut e in prop::collection::vec(-10.0f64..10.0, 3..40)) {
        e.sort_by(f64::total_cmp);
        if let Ok(r) = spacing_ratios(&e) {
            prop_assert!(r.ratios.iter().all(|x| (0.0..=1.0).contains(x)));
            prop_assert!((0.0..=1.0).contains(&r.mean));
        }
    }

    #[test]
    fn words_of_degree_four_are_two_fold_invariant(h in hermitian(4), v in unitary(2), text in prop::sample::select(vec![
        "(12)^2*e^2", "(12)*e*(12)*e", "(12)^4", "e^4", "(12)*e^3", "(12)^3*e", "(12)*e^2*(12)",
    ])) {
        let w = WordSpec::parse(2, text).unwrap();
        let op = TensorOperator::new(h.clone(), 2, 2).unwrap();
        let vv = kron_power(&v, 2).unwrap();
        let moved = TensorOperator::new(&vv * &h * vv.adjoint(), 2, 2).unwrap();
        let a = invariant_word_trace(&op, &w).unwrap();
        let b = invariant_word_trace(&moved, &w).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
    }

    #[test]
    fn weyl_sum_is_antisymmetric(x in prop::collection::vec(-1.0f64..1.0, 3), y in prop::collection::vec(-1.0f64..1.0, 3), p in perm(3)) {
        let px: Vec<f64> = (0..3).map(|i| x[p.image(i)]).collect();
        let a = weyl_sum(&x, &y).unwrap();
        let b = weyl_sum(&px, &y).unwrap();
        prop_assert!((b - p.sign() as f64 * a).abs() < 1e-12);
    }

    #[test]
    fn hciz_is_symmetric(a in prop::collection::vec(-1.0f64..1.0, 3), b in prop::collection::vec(-1.0f64..1.0, 3), t in -1.5f64..1.5, p in perm(3)) {
        let base = hciz_exact(&HcizProblem::new(a.clone(), b.clone(), t).unwrap()).unwrap().value;
        let pa: Vec<f64> = (0..3).map(|i| a[p.image(i)]).collect();
        let swapped = hciz_exact(&HcizProblem::new(b.clone(), pa, t).unwrap()).unwrap().value;
        prop_assert!(base > 0.0);
        prop_assert!((base - swapped).abs() < 1e-6 * base);
    }
}

#[test]
fn hermitian_coordinate_vector_has_expected_length() {
    let h = CMat::identity(5, 5);
    assert_eq!(vec_h_unchecked(&h), RVec::from_fn(25, |i, _| if i < 5 { 1.0 } else { 0.0 }));
}
