use cliffverify::integrate::divergence_check;
use cliffverify::radial::RadialForm;
use cliffverify::scalar::int;
use cliffverify::spaces::{check_monogenic, harmonic_basis, Projector, Side};
use cliffverify::{Blade, MVPolynomial, Monomial, Multivector, VarGroup};
use proptest::prelude::*;

fn multivector(m: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec((0u16..(1 << m), -3i64..=3), 0..6).prop_map(move |terms| {
        Multivector::from_terms(m, terms.into_iter().map(|(b, c)| (Blade(b), int(c))))
    })
}

fn triple() -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    (1usize..=6).prop_flat_map(|m| (multivector(m), multivector(m), multivector(m)))
}

fn polynomial(m: usize, g: VarGroup) -> impl Strategy<Value = MVPolynomial> {
    prop::collection::vec((prop::collection::vec(0u8..=3, m), multivector(m)), 1..5).prop_map(move |terms| {
        let mut p = MVPolynomial::zero(m);
        for (exps, c) in terms {
            p = &p + &MVPolynomial::term(Monomial::from_exponents(g, &exps), c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn reverse_and_conjugate_are_anti_involutions((a, b, _) in triple()) {
        prop_assert_eq!((&a * &b).reverse(), &b.reverse() * &a.reverse());
        prop_assert_eq!((&a * &b).conjugate(), &b.conjugate() * &a.conjugate());
        prop_assert_eq!(a.reverse().reverse(), a.clone());
        prop_assert_eq!(a.conjugate().conjugate(), a);
    }

    #[test]
    fn generators_anticommute(m in 1usize..=12, i in 1usize..=12, j in 1usize..=12) {
        prop_assume!(i <= m && j <= m);
        let (ei, ej) = (Multivector::generator(m, i), Multivector::generator(m, j));
        let expected = Multivector::from_int(m, if i == j { -2 } else { 0 });
        prop_assert_eq!(&(&ei * &ej) + &(&ej * &ei), expected);
    }

    #[test]
    fn dirac_squares_to_minus_laplacian(p in (2usize..=4).prop_flat_map(|m| polynomial(m, VarGroup::X))) {
        let g = VarGroup::X;
        prop_assert!((&p.dirac_left(g).dirac_left(g) + &p.laplacian(g)).is_zero());
        prop_assert!((&p.dirac_right(g).dirac_right(g) + &p.laplacian(g)).is_zero());
    }

    #[test]
    fn vector_inverse_is_inverse(coords in prop::collection::vec(-5i64..=5, 1..=6)) {
        let m = coords.len();
        let v = Multivector::vector(m, &coords.iter().map(|&c| int(c)).collect::<Vec<_>>());
        prop_assume!(!v.is_zero());
        prop_assert_eq!(&v * &v.vector_inverse().unwrap(), Multivector::one(m));
    }

    #[test]
    fn divergence_theorem_on_the_ball(field in (2usize..=4).prop_flat_map(|m| prop::collection::vec(polynomial(m, VarGroup::X), m))) {
        let (volume, flux) = divergence_check(&field).unwrap();
        prop_assert_eq!(volume, flux);
    }

    #[test]
    fn projection_is_idempotent_and_monogenic(
        (m, k, picks) in (3usize..=4, 1u32..=2).prop_flat_map(|(m, k)| (Just(m), Just(k), prop::collection::vec((0usize..64, multivector(m)), 1..4)))
    ) {
        let basis = harmonic_basis(m, k).unwrap();
        let mut h = MVPolynomial::zero(m);
        for (i, c) in picks {
            let b = &basis.elements[i % basis.elements.len()];
            h = &h + &(b * &MVPolynomial::constant(c));
        }
        let proj = Projector::new(m, k);
        for side in [Side::Left, Side::Right] {
            let p = proj.apply(&h, side).unwrap();
            prop_assert!(check_monogenic(&p, k, side, VarGroup::U).is_ok());
            prop_assert_eq!(proj.apply(&p, side).unwrap(), p);
        }
    }
}

#[test]
fn cauchy_kernel_is_monogenic_away_from_the_origin() {
    for m in 2..=6 {
        let g = RadialForm::cauchy_kernel(m, VarGroup::Y);
        assert!(g.dirac_left_radial().is_zero(), "m = {m}");
        assert!(g.dirac_right_radial().is_zero(), "m = {m}");
    }
}
