use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cliffpair::clifford::{Blade, Multivector, C64};
use cliffpair::gamma::{build_rep, RepKind};
use cliffpair::sample;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense below dimension 6, sparse above.
fn element(n: usize, r: &mut ChaCha8Rng) -> Multivector {
    if n <= 5 {
        sample::multivector(n, r)
    } else {
        sample::sparse_multivector(n, 24, r)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_anticommute(n in 1usize..=10, mu in 0usize..10, nu in 0usize..10) {
        prop_assume!(mu < n && nu < n);
        let a = Multivector::basis_vector(n, mu);
        let b = Multivector::basis_vector(n, nu);
        let expect = if mu == nu { -2.0 } else { 0.0 };
        prop_assert_eq!(a.anticommutator(&b), Multivector::scalar(n, expect));
    }

    #[test]
    fn product_is_associative_and_distributive(n in 1usize..=8, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (element(n, &mut r), element(n, &mut r), element(n, &mut r));
        prop_assert!(((&a * &b) * &c - &a * (&b * &c)).max_abs() <= 1e-12);
        prop_assert!((&a * (&b + &c) - (&a * &b + &a * &c)).max_abs() <= 1e-12);
        prop_assert!(((&a + &b) * &c - (&a * &c + &b * &c)).max_abs() <= 1e-12);
    }

    #[test]
    fn involutions(n in 1usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (sample::multivector(n, &mut r), sample::multivector(n, &mut r));
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!(a.tilde().tilde(), a.clone());
        prop_assert!(((&a * &b).bar() - a.bar() * b.bar()).max_abs() <= 1e-12);
        prop_assert!(((&a * &b).tilde() - b.tilde() * a.tilde()).max_abs() <= 1e-12);
    }

    #[test]
    fn grade_projections_sum_to_element(n in 1usize..=8, seed in any::<u64>()) {
        let a = element(n, &mut rng(seed));
        let mut sum = Multivector::zero(n);
        for k in 0..=n {
            sum += &a.grade_project(k);
        }
        prop_assert!((sum - a).max_abs() == 0.0);
    }

    #[test]
    fn representation_is_multiplicative(n in 2usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let rep = build_rep(n, RepKind::Faithful).unwrap();
        let (a, b) = (sample::multivector(n, &mut r), sample::multivector(n, &mut r));
        let diff = rep.represent(&(&a * &b)) - rep.represent(&a) * rep.represent(&b);
        prop_assert!(diff.norm() <= 1e-10 * a.norm() * b.norm());
    }
}

#[test]
fn volume_element_squares_to_one() {
    for n in 1..=10 {
        let g = Multivector::volume_element(n);
        assert_eq!(&g * &g, Multivector::scalar(n, 1.0), "n = {n}");
    }
}

#[test]
fn odd_irreducibles_differ_by_chirality() {
    for n in [1usize, 3, 5, 7] {
        let g = Multivector::volume_element(n);
        let irr = build_rep(n, RepKind::Irreducible).unwrap();
        let s = irr.size();
        let id = DMatrix::<C64>::identity(s, s);
        assert!((irr.represent(&g) - &id).norm() < 1e-12, "n = {n}");
        let faithful = build_rep(n, RepKind::Faithful).unwrap();
        let m = faithful.represent(&g);
        assert!((m.view((0, 0), (s, s)) - &id).norm() < 1e-12);
        assert!((m.view((s, s), (s, s)) + &id).norm() < 1e-12);
        if n >= 3 {
            // the two summands agree on even blades without the last generator
            let even = Multivector::from_blade(n, Blade::from_indices(&[0, 1]), 1.0);
            let e = faithful.represent(&even);
            assert!((e.view((0, 0), (s, s)) - e.view((s, s), (s, s))).norm() < 1e-12);
        }
    }
}
