//! Seeded generators for random instances used by property checks and the
//! verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bialgebra::{function_bialgebra, group_bialgebra, FinBialgebra, GroupTable, FIXTURE_GROUPS};
use crate::error::Result;
use crate::findual::{Model, RecursiveFunctional};
use crate::matrix::{Matrix, Vector};
use crate::module::{FinModule, LinearMap};
use crate::scalar::{Field, Scalar};
use crate::tower::Tower;

pub const DEFAULT_SEED: u64 = 20_240_917;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `REFLEXA_SEED` if set and numeric, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("REFLEXA_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Small integers over `GF(p)`; over `Q` occasionally a fraction.
pub fn scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    match field {
        Field::Prime(p) => Scalar::modular(rng.gen_range(0..p), p),
        Field::Rational => {
            let n = rng.gen_range(-4i64..=4);
            if rng.gen_bool(0.2) {
                field.ratio(n, rng.gen_range(1..=3)).expect("nonzero denominator")
            } else {
                field.from_i64(n)
            }
        }
    }
}

pub fn nonzero_scalar(rng: &mut impl Rng, field: Field) -> Scalar {
    loop {
        let x = scalar(rng, field);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn vector(rng: &mut impl Rng, field: Field, len: usize) -> Vector {
    (0..len).map(|_| scalar(rng, field)).collect()
}

pub fn matrix(rng: &mut impl Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    Matrix::new(field, rows, cols, vector(rng, field, rows * cols)).expect("shape")
}

pub fn invertible(rng: &mut impl Rng, field: Field, n: usize) -> Matrix {
    loop {
        let m = matrix(rng, field, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A matrix of full row rank, so surjective as a map.
pub fn surjective(rng: &mut impl Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    assert!(rows <= cols, "a surjection needs rows <= cols");
    loop {
        let m = matrix(rng, field, rows, cols);
        if m.rank() == rows {
            return m;
        }
    }
}

pub fn module(rng: &mut impl Rng, field: Field, max_rank: usize) -> FinModule {
    FinModule::new(field, rng.gen_range(0..=max_rank))
}

pub fn linear_map(rng: &mut impl Rng, domain: &FinModule, codomain: &FinModule) -> LinearMap {
    let m = matrix(rng, domain.field, codomain.rank, domain.rank);
    LinearMap::new(domain.clone(), codomain.clone(), m).expect("shapes agree")
}

/// Arbitrary connecting maps, not necessarily surjective.
pub fn tower(rng: &mut impl Rng, field: Field, max_len: usize, max_dim: usize) -> Tower {
    let len = rng.gen_range(1..=max_len);
    let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_dim)).collect();
    let maps = (0..len - 1).map(|n| matrix(rng, field, ranks[n], ranks[n + 1])).collect();
    Tower::new(field, &ranks, maps).expect("shapes agree")
}

/// Nondecreasing ranks with surjective connecting maps.
pub fn surjective_tower(rng: &mut impl Rng, field: Field, max_len: usize, max_dim: usize) -> Tower {
    let len = rng.gen_range(1..=max_len);
    let mut ranks = vec![rng.gen_range(0..=max_dim.min(2))];
    for _ in 1..len {
        let last = *ranks.last().expect("nonempty");
        ranks.push(rng.gen_range(last..=max_dim.max(last)));
    }
    let maps = (0..len - 1).map(|n| surjective(rng, field, ranks[n], ranks[n + 1])).collect();
    Tower::new(field, &ranks, maps).expect("shapes agree")
}

/// Random annihilator and values with degree in `1..=max_degree`.
pub fn functional(rng: &mut impl Rng, field: Field, model: Model, max_degree: usize) -> RecursiveFunctional {
    let d = rng.gen_range(1..=max_degree);
    let mut annihilator = vector(rng, field, d);
    annihilator.push(field.one());
    RecursiveFunctional::new(field, model, annihilator, vector(rng, field, d)).expect("well formed")
}

/// A fixture group or function bialgebra of dimension at most `max_dim`,
/// written in a random basis.
pub fn bialgebra(rng: &mut impl Rng, field: Field, max_dim: usize) -> Result<FinBialgebra> {
    let groups: Vec<GroupTable> = std::iter::once(GroupTable::trivial())
        .chain(FIXTURE_GROUPS.iter().filter_map(|n| GroupTable::by_name(n)))
        .filter(|g| g.order() <= max_dim)
        .collect();
    let g = &groups[rng.gen_range(0..groups.len())];
    let b = if rng.gen_bool(0.5) {
        group_bialgebra(field, g)?
    } else {
        function_bialgebra(field, g)?
    };
    b.change_basis(&invertible(rng, field, b.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = matrix(&mut rng(3), Field::Rational, 3, 3);
        let b = matrix(&mut rng(3), Field::Rational, 3, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn generated_shapes() {
        let mut r = rng(1);
        for _ in 0..20 {
            let t = surjective_tower(&mut r, Field::Prime(7), 6, 5);
            assert!(t.is_surjective());
            assert!(invertible(&mut r, Field::Prime(2), 3).is_invertible());
            let f = functional(&mut r, Field::Rational, Model::Grouplike, 4);
            assert!(f.degree() <= 4);
        }
    }
}
