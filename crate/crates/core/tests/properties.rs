//! Property tests for the structural invariants: homogeneity of the
//! differentials, definiteness of the quasinorm, bilinearity and parity of
//! the forms, and permutation compatibility.

use proptest::prelude::*;

use rochsym::{
    interleave_permutation, kp_differential, omega_bar, omega_n, roch_quasinorm, z2_quasinorm,
    RochVector, SymplecticForm, TruncatedVector,
};

fn finite_coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, dim)
}

fn tuple(order: usize, dim: usize) -> impl Strategy<Value = RochVector> {
    prop::collection::vec(finite_coords(dim), order).prop_map(|layers| {
        RochVector::new(
            layers.into_iter().map(|c| TruncatedVector::new(c).unwrap()).collect(),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn differential_exactly_homogeneous(
        coords in finite_coords(6),
        lambda in prop::sample::select(vec![-4.0, -1.5, -0.3, 0.2, 0.8, 3.0]),
        k in 1u32..=4,
    ) {
        let v = TruncatedVector::new(coords).unwrap();
        let left = kp_differential(&v.scale(lambda), k);
        let right = kp_differential(&v, k).scale(lambda);
        let scale = right.norm().max(1.0);
        prop_assert!(left.sub(&right).unwrap().norm() <= 1e-12 * scale);
    }

    #[test]
    fn quasinorm_zero_iff_zero(coords_w in finite_coords(5), coords_x in finite_coords(5)) {
        let w = TruncatedVector::new(coords_w).unwrap();
        let x = TruncatedVector::new(coords_x).unwrap();
        let q = z2_quasinorm(&w, &x).unwrap();
        prop_assert_eq!(q == 0.0, w.is_zero() && x.is_zero());
    }

    #[test]
    fn roch_quasinorm_absolutely_homogeneous(v in tuple(3, 4), lambda in -5.0f64..5.0) {
        prop_assume!(lambda != 0.0);
        let scaled = roch_quasinorm(&v.scale(lambda));
        let expected = lambda.abs() * roch_quasinorm(&v);
        prop_assert!((scaled - expected).abs() <= 1e-10 * expected.max(1.0));
    }

    #[test]
    fn omega_is_bilinear(x in tuple(3, 4), y in tuple(3, 4), z in tuple(3, 4), a in -3.0f64..3.0) {
        let lhs = omega_n(&x, &y.add(&z.scale(a)).unwrap()).unwrap();
        let rhs = omega_n(&x, &y).unwrap() + a * omega_n(&x, &z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn omega_parity(x in tuple(2, 4), w in tuple(3, 4)) {
        // even order: alternating; odd order: symmetric
        prop_assert!(omega_n(&x, &x).unwrap().abs() <= 1e-10);
        let ab = omega_n(&w, &w).unwrap();
        let ba = omega_n(&w, &w).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-10);
    }

    #[test]
    fn twisted_pairing_alternates(x in tuple(3, 4)) {
        let scale = roch_quasinorm(&x).max(1.0);
        prop_assert!(omega_bar(&x, &x).unwrap().abs() <= 1e-9 * scale * scale);
    }

    #[test]
    fn permutation_conjugation_preserves_antisymmetry(n in 2usize..6) {
        let f = SymplecticForm::new(2, n, false).unwrap();
        let p = interleave_permutation(n);
        let conjugated = p.matrix().transpose() * f.gram() * p.matrix();
        prop_assert_eq!((&conjugated + conjugated.transpose()).amax(), 0.0);
        // the permutation is a bijection of basis vectors
        let pp = p.matrix() * p.matrix().transpose();
        prop_assert_eq!((pp - nalgebra::DMatrix::<f64>::identity(2 * n, 2 * n)).amax(), 0.0);
    }

    #[test]
    fn quasinorm_triangle_modulus_is_recorded(
        a in tuple(2, 5),
        b in tuple(2, 5),
    ) {
        // quasinorm axiom sampling: the modulus is reported, never pinned
        let qa = roch_quasinorm(&a);
        let qb = roch_quasinorm(&b);
        prop_assume!(qa + qb > 1e-6);
        let qsum = roch_quasinorm(&a.add(&b).unwrap());
        let modulus = qsum / (qa + qb);
        prop_assert!(modulus.is_finite());
    }
}
