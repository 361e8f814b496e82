use proptest::prelude::*;
use reflexa_core::bialgebra::{
    dual_bialgebra, fixture_morphisms, fixtures, group_bialgebra, is_bialgebra_morphism,
    transpose_bialgebra_morphism, GroupTable, FIXTURE_GROUPS,
};
use reflexa_core::{random, Field};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(7))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dual_is_an_involution(f in field(), seed in any::<u64>()) {
        let b = random::bialgebra(&mut random::rng(seed), f, 4).unwrap();
        let d = dual_bialgebra(&b).unwrap();
        prop_assert_eq!(dual_bialgebra(&d).unwrap(), b.clone());
        prop_assert_eq!(d.is_commutative(), b.is_cocommutative());
        prop_assert_eq!(d.is_cocommutative(), b.is_commutative());
    }

    #[test]
    fn change_of_basis_is_an_isomorphism(f in field(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let b = random::bialgebra(&mut rng, f, 4).unwrap();
        let p = random::invertible(&mut rng, f, b.dim());
        let c = b.change_basis(&p).unwrap();
        prop_assert!(is_bialgebra_morphism(&c, &b, &p).unwrap());
    }
}

#[test]
fn fixture_duals_swap_commutativity() {
    for f in [Field::Rational, Field::Prime(2), Field::Prime(3)] {
        for fx in fixtures(f).unwrap() {
            let d = dual_bialgebra(&fx.bialgebra).unwrap();
            assert_eq!(d.is_commutative(), fx.bialgebra.is_cocommutative(), "{}", fx.name);
            assert_eq!(d.is_cocommutative(), fx.bialgebra.is_commutative(), "{}", fx.name);
            assert_eq!(dual_bialgebra(&d).unwrap(), fx.bialgebra);
        }
    }
}

#[test]
fn group_bialgebras_are_cocommutative() {
    for name in FIXTURE_GROUPS {
        let g = GroupTable::by_name(name).unwrap();
        let b = group_bialgebra(Field::Rational, &g).unwrap();
        assert!(b.is_cocommutative());
        assert_eq!(b.is_commutative(), g.is_abelian());
    }
}

#[test]
fn transpose_is_involutive_on_fixture_morphisms() {
    for f in [Field::Rational, Field::Prime(2)] {
        for m in fixture_morphisms(f).unwrap() {
            let t = transpose_bialgebra_morphism(&m.source, &m.target, &m.map).unwrap();
            let ad = dual_bialgebra(&m.source).unwrap();
            assert!(is_bialgebra_morphism(&m.target, &ad, &t).unwrap(), "{}", m.name);
            assert_eq!(transpose_bialgebra_morphism(&m.target, &m.source, &t).unwrap(), m.map, "{}", m.name);
        }
    }
}
