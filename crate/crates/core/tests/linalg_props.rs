use proptest::prelude::*;
use reflexa_core::matrix::{kron_vec, Matrix};
use reflexa_core::{Field, Scalar};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(7))]
}

fn matrix(max: usize) -> impl Strategy<Value = Matrix> {
    field().prop_flat_map(move |f| matrix_over(f, max))
}

fn matrix_over(f: Field, max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-4i64..=4, r * c).prop_map(move |v| {
            let entries: Vec<Scalar> = v.into_iter().map(|x| f.from_i64(x)).collect();
            Matrix::new(f, r, c, entries).unwrap()
        })
    })
}

fn rational_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-6i64..=6, 1i64..=4), rows * cols).prop_map(move |v| {
        let q = Field::Rational;
        let entries = v.into_iter().map(|(n, d)| q.ratio(n, d).unwrap()).collect();
        Matrix::new(q, rows, cols, entries).unwrap()
    })
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in matrix(6)) {
        let (r, p) = m.rref();
        let (rr, pp) = r.rref();
        prop_assert_eq!(rr, r);
        prop_assert_eq!(pp, p);
    }

    #[test]
    fn rank_nullity(m in matrix(7)) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn kron_is_associative((a, b, c) in field().prop_flat_map(|f| (matrix_over(f, 3), matrix_over(f, 3), matrix_over(f, 2)))) {
        let left = a.kron(&b).unwrap().kron(&c).unwrap();
        let right = a.kron(&b.kron(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kron_acts_factorwise(a in rational_matrix(2, 2), b in rational_matrix(2, 3), x in prop::collection::vec(-5i64..5, 2), y in prop::collection::vec(-5i64..5, 3)) {
        let q = Field::Rational;
        let x: Vec<Scalar> = x.into_iter().map(|v| q.from_i64(v)).collect();
        let y: Vec<Scalar> = y.into_iter().map(|v| q.from_i64(v)).collect();
        let lhs = a.kron(&b).unwrap().mul_vec(&kron_vec(&x, &y)).unwrap();
        let rhs = kron_vec(&a.mul_vec(&x).unwrap(), &b.mul_vec(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_solve_is_exact(a in rational_matrix(4, 3), x in prop::collection::vec((-9i64..=9, 1i64..=5), 3)) {
        let q = Field::Rational;
        let x: Vec<Scalar> = x.into_iter().map(|(n, d)| q.ratio(n, d).unwrap()).collect();
        let b = a.mul_vec(&x).unwrap();
        let s = a.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.mul_vec(&s).unwrap(), b);
    }

    #[test]
    fn inverse_is_two_sided(m in (field(), 1usize..=5).prop_flat_map(|(f, n)| {
        prop::collection::vec(-3i64..=3, n * n)
            .prop_map(move |v| Matrix::new(f, n, n, v.into_iter().map(|x| f.from_i64(x)).collect()).unwrap())
    })) {
        if let Some(inv) = m.inverse() {
            prop_assert!(m.mul(&inv).unwrap().is_identity());
            prop_assert!(inv.mul(&m).unwrap().is_identity());
        } else {
            prop_assert!(m.rank() < m.rows());
        }
    }
}
