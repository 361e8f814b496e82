use proptest::prelude::*;
use reflexa_core::findual::{Model, RecursiveFunctional};
use reflexa_core::{random, Field};

const TERMS: usize = 30;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(5)), Just(Field::Prime(7))]
}

fn model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::Grouplike), Just(Model::Primitive)]
}

fn triple(f: Field, m: Model, seed: u64) -> [RecursiveFunctional; 3] {
    let mut rng = random::rng(seed);
    [0, 1, 2].map(|_| random::functional(&mut rng, f, m, 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimize_preserves_values(f in field(), m in model(), seed in any::<u64>()) {
        let r = random::functional(&mut random::rng(seed), f, m, 4);
        let s = r.minimize();
        prop_assert!(s.degree() <= r.degree());
        prop_assert_eq!(s.sequence(TERMS), r.sequence(TERMS));
        prop_assert_eq!(s.minimize(), s);
    }

    #[test]
    fn product_is_commutative_and_associative(f in field(), m in model(), seed in any::<u64>()) {
        let [a, b, c] = triple(f, m, seed);
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(ab.sequence(TERMS), b.multiply(&a).unwrap().sequence(TERMS));
        let left = ab.multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left.sequence(TERMS), right.sequence(TERMS));
    }

    #[test]
    fn product_distributes(f in field(), m in model(), seed in any::<u64>()) {
        let [a, b, c] = triple(f, m, seed);
        let lhs = a.multiply(&b.add(&c).unwrap()).unwrap();
        let rhs = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs.sequence(TERMS), rhs.sequence(TERMS));
    }

    #[test]
    fn unit_and_degree_bound(f in field(), m in model(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let a = random::functional(&mut rng, f, m, 4);
        let b = random::functional(&mut rng, f, m, 4);
        let unit = RecursiveFunctional::unit(f, m);
        prop_assert_eq!(a.multiply(&unit).unwrap().sequence(20), a.sequence(20));
        prop_assert!(a.multiply(&b).unwrap().degree() <= a.degree() * b.degree());
    }
}

#[test]
fn units_have_expected_normal_form() {
    let q = Field::Rational;
    let g = RecursiveFunctional::unit(q, Model::Grouplike);
    assert_eq!(g.annihilator(), &[q.from_i64(-1), q.one()][..]);
    let p = RecursiveFunctional::unit(q, Model::Primitive);
    assert_eq!(p.annihilator(), &[q.zero(), q.one()][..]);
    assert_eq!(p.values(), &[q.one()][..]);
}
