use std::sync::Arc;

use proptest::prelude::*;
use reflexa_core::adjunction::verify_adjunction;
use reflexa_core::criteria::{module_morphism_criterion, submodule_criterion, AlgebraModule};
use reflexa_core::nat::{check_reflexive, compose_families, is_natural, nat_hom_space, restriction_to_base};
use reflexa_core::{random, FinAlgebra, FinModule, Field, FunctorOnUniverse, QuasiCoherent, TestAlgebra, Universe};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(3)), Just(Field::Prime(7))]
}

fn qc(u: &Arc<Universe>, r: usize) -> FunctorOnUniverse {
    FunctorOnUniverse::quasicoherent(&FinModule::new(u.field(), r), u).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quasicoherent_hom_dimension(f in field(), a in 0usize..=3, b in 0usize..=3) {
        let u = Arc::new(Universe::reference(f).unwrap());
        let space = nat_hom_space(&qc(&u, a), &qc(&u, b)).unwrap();
        prop_assert_eq!(space.dim(), a * b);
        prop_assert_eq!(restriction_to_base(&space).unwrap().rank(), a * b);
    }

    #[test]
    fn quasicoherent_is_reflexive(f in field(), r in 0usize..=2, enlarged in any::<bool>()) {
        let mut u = Universe::reference(f).unwrap();
        if enlarged {
            u = u.enlarge(4).unwrap();
        }
        let u = Arc::new(u);
        prop_assert!(check_reflexive(&qc(&u, r)).unwrap().reflexive);
    }

    #[test]
    fn solved_families_compose(f in field(), a in 1usize..=2, b in 1usize..=2, c in 1usize..=2, seed in any::<u64>()) {
        let u = Arc::new(Universe::reference(f).unwrap());
        let (fa, fb, fc) = (qc(&u, a), qc(&u, b), qc(&u, c));
        let first = nat_hom_space(&fa, &fb).unwrap();
        let second = nat_hom_space(&fb, &fc).unwrap();
        let through = nat_hom_space(&fa, &fc).unwrap();
        let mut rng = random::rng(seed);
        let x = first.family(&random::vector(&mut rng, f, first.dim()));
        let y = second.family(&random::vector(&mut rng, f, second.dim()));
        let z = compose_families(&y, &x).unwrap();
        prop_assert!(is_natural(&fa, &fc, &z).unwrap());
        prop_assert!(through.contains(&z).unwrap());
        // scalars from End(K) act on the space
        let scalars = nat_hom_space(&qc(&u, 1), &qc(&u, 1)).unwrap();
        prop_assert_eq!(scalars.dim(), 1);
    }

    #[test]
    fn submodule_criterion_agrees(f in field(), k in 1usize..=3, gens in 0usize..=3, seed in any::<u64>()) {
        let u = Universe::reference(f).unwrap();
        let a = FinAlgebra::truncated_polynomial(f, k).unwrap();
        let m = AlgebraModule::regular(&a);
        let mut rng = random::rng(seed);
        let g: Vec<_> = (0..gens).map(|_| random::vector(&mut rng, f, k)).collect();
        prop_assert!(submodule_criterion(&m, &g, &u).unwrap().agree);
        let h = random::matrix(&mut rng, f, k, k);
        prop_assert!(module_morphism_criterion(&m, &m, &h, &u).unwrap().agree);
    }

    #[test]
    fn adjunction_maps_are_inverse(f in field(), a in 1usize..=2, b in 0usize..=2) {
        let u = Arc::new(Universe::reference(f).unwrap());
        let s = TestAlgebra::truncated_polynomial(f, 2).unwrap();
        let v = verify_adjunction(&u, &s, &QuasiCoherent::of_rank(f, a), &QuasiCoherent::of_rank(f, b)).unwrap();
        prop_assert!(v.holds);
        prop_assert_eq!(v.left_dim, v.right_dim);
    }
}
