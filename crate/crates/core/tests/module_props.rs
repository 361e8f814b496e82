use proptest::prelude::*;
use reflexa_core::module::{
    double_dual_unit, dual_map, dual_module, hom_module, hom_to_tensor, snake, tensor_to_hom, FinModule,
};
use reflexa_core::random;
use reflexa_core::Field;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(7))]
}

proptest! {
    #[test]
    fn double_dual_conjugates_back(f in field(), a in 0usize..=8, b in 0usize..=8, seed in any::<u64>()) {
        let m = FinModule::new(f, a);
        let n = FinModule::new(f, b);
        let g = random::linear_map(&mut random::rng(seed), &m, &n);
        let um = double_dual_unit(&m);
        let un = double_dual_unit(&n);
        let ff = dual_map(&dual_map(&g));
        prop_assert_eq!(un.matrix.mul(&g.matrix).unwrap(), ff.matrix.mul(&um.matrix).unwrap());
        prop_assert_eq!(ff.matrix, g.matrix);
    }

    #[test]
    fn dual_map_is_contravariant(f in field(), a in 0usize..=4, b in 0usize..=4, c in 0usize..=4, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (l, m, n) = (FinModule::new(f, a), FinModule::new(f, b), FinModule::new(f, c));
        let g = random::linear_map(&mut rng, &l, &m);
        let h = random::linear_map(&mut rng, &m, &n);
        let lhs = dual_map(&h.compose(&g).unwrap());
        let rhs = dual_map(&g).compose(&dual_map(&h)).unwrap();
        prop_assert_eq!(lhs.matrix, rhs.matrix);
    }

    #[test]
    fn hom_tensor_round_trip(f in field(), a in 0usize..=5, b in 0usize..=5, seed in any::<u64>()) {
        let m = FinModule::new(f, a);
        let n = FinModule::new(f, b);
        let to = tensor_to_hom(&m, &n).unwrap();
        let back = hom_to_tensor(&m, &n).unwrap();
        prop_assert!(to.compose(&back).unwrap().matrix.is_identity());
        prop_assert!(back.compose(&to).unwrap().matrix.is_identity());
        let x = random::vector(&mut random::rng(seed), f, a * b);
        prop_assert_eq!(back.apply(&to.apply(&x).unwrap()).unwrap(), x);
        prop_assert_eq!(hom_module(&m, &n).unwrap().rank, a * b);
        prop_assert_eq!(dual_module(&m).rank, a);
    }

    #[test]
    fn snake_identity(f in field(), a in 0usize..=6) {
        prop_assert!(snake(&FinModule::new(f, a)).unwrap().matrix.is_identity());
    }
}
