use proptest::prelude::*;
use reflexa_core::tower::{
    completed_tensor, count_tensor_morphisms, count_truncated_morphisms, dual_tower, kernel_tower,
    product_decomposition, reflexivity_roundtrip, stabilized_images, AlgebraTower,
};
use reflexa_core::{random, FinAlgebra, Field, Matrix};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(5))]
}

proptest! {
    #[test]
    fn stabilization_is_surjective_and_idempotent(f in field(), seed in any::<u64>()) {
        let t = random::tower(&mut random::rng(seed), f, 6, 5);
        let s = stabilized_images(&t).unwrap().tower;
        prop_assert!(s.is_surjective());
        let again = stabilized_images(&s).unwrap();
        prop_assert_eq!(again.tower, s);
        prop_assert!(again.inclusions.iter().all(Matrix::is_identity));
    }

    #[test]
    fn decomposition_bookkeeping(f in field(), seed in any::<u64>()) {
        let t = random::surjective_tower(&mut random::rng(seed), f, 6, 5);
        let d = product_decomposition(&t).unwrap();
        for k in 0..=t.depth() {
            prop_assert_eq!(d.dims[..=k].iter().sum::<usize>(), t.rank(k));
            prop_assert!(d.isos[k].is_invertible());
        }
        for n in 0..t.depth() {
            let truncated = d.isos[n].hstack(&Matrix::zeros(f, t.rank(n), d.dims[n + 1])).unwrap();
            prop_assert_eq!(t.map(n).mul(&d.isos[n + 1]).unwrap(), truncated);
            prop_assert!(t.map(n).mul(&d.sections[n]).unwrap().is_identity());
        }
    }

    #[test]
    fn dual_system_is_injective_and_reflexive(f in field(), seed in any::<u64>()) {
        let t = random::surjective_tower(&mut random::rng(seed), f, 6, 5);
        prop_assert!(dual_tower(&t).unwrap().is_injective());
        prop_assert!(reflexivity_roundtrip(&t).unwrap());
        let back = dual_tower(&t).unwrap().dual().unwrap();
        prop_assert_eq!(back.maps(), t.maps());
    }

    #[test]
    fn kernel_splits_levelwise(f in field(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let t = random::surjective_tower(&mut rng, f, 5, 4);
        let mut fun = vec![random::vector(&mut rng, f, t.rank(0))];
        for n in 0..t.depth() {
            let next = t.map(n).transpose().mul_vec(&fun[n]).unwrap();
            fun.push(next);
        }
        let k = kernel_tower(&t, &fun).unwrap();
        prop_assert!(k.split.iter().all(|&b| b));
        let nonzero = fun[0].iter().any(|x| !x.is_zero());
        for n in 0..=t.depth() {
            let expect = if nonzero { t.rank(n) - 1 } else { t.rank(n) };
            prop_assert_eq!(k.quotient.rank(n), expect);
        }
    }
}

#[test]
fn completed_tensor_morphism_counts() {
    let f = Field::Prime(2);
    let t = completed_tensor(&AlgebraTower::power_series(f, 2), &AlgebraTower::power_series(f, 2)).unwrap();
    let targets = [
        FinAlgebra::truncated_polynomial(f, 2).unwrap(),
        FinAlgebra::truncated_polynomial(f, 3).unwrap(),
        FinAlgebra::split(f, 2),
        FinAlgebra::square_zero(f, 2),
    ];
    for c in &targets {
        for n in 0..=2 {
            let level = count_tensor_morphisms(n + 1, n + 1, c).unwrap();
            let factors = count_truncated_morphisms(n + 1, c).unwrap().pow(2);
            assert_eq!(level, factors);
            assert_eq!(t.algebras[n].dim(), (n + 1) * (n + 1));
        }
    }
}
