//! Extension and restriction of scalars along `K -> S`, checked as a
//! bijection between two solved spaces of natural families.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{check_algebra_morphism, FinAlgebra, TestAlgebra, Universe};
use crate::error::{Error, Result};
use crate::functor::{combine, on_universe, PresentedFunctor, Pushforward, QuasiCoherent};
use crate::matrix::{kron_vec, unit_vector, Matrix, Vector};
use crate::nat::{nat_hom_space, Family, NatSpace};

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionVerdict {
    /// Dimension of the families over `S`-algebras `S (x) T`.
    pub left_dim: usize,
    /// Dimension of the families `F -> i_* G` over the universe.
    pub right_dim: usize,
    pub left_then_right_identity: bool,
    pub right_then_left_identity: bool,
    pub holds: bool,
}

pub struct AdjunctionData {
    pub left: NatSpace,
    pub right: NatSpace,
    /// Coordinates of `w |-> phi`, one column per left basis vector.
    pub to_right: Matrix,
    /// Coordinates of `phi |-> w`, one column per right basis vector.
    pub to_left: Matrix,
}

fn columns_or_empty(field: crate::scalar::Field, rows: usize, cols: &[Vector]) -> Result<Matrix> {
    if cols.is_empty() {
        Ok(Matrix::zeros(field, rows, 0))
    } else {
        Matrix::from_columns(field, rows, cols)
    }
}

/// `w |-> phi` with `phi_R = w_{S (x) R} o F(R -> S (x) R)`.
fn restrict(
    u: &Universe,
    s: &FinAlgebra,
    f: &QuasiCoherent,
    w: &Family,
) -> Result<Family> {
    let field = u.field();
    u.algebras()
        .iter()
        .enumerate()
        .map(|(r, alg)| {
            let ra = alg.algebra();
            let sr = s.tensor_product(ra)?;
            let q = Matrix::from_columns(field, s.dim(), &[s.unit().clone()])?.kron(&Matrix::identity(field, ra.dim()))?;
            check_algebra_morphism(ra, &sr, &q)?;
            w[r].mul(&f.transition(ra, &sr, &q)?)
        })
        .collect()
}

/// `phi |-> w` with `w_{S'} = G(S (x) S' -> S') o phi_{S'}`, where `phi` is
/// extended to `S' = S (x) T` from its base component, which determines it
/// because the source is quasi-coherent.
fn extend(
    u: &Universe,
    s: &FinAlgebra,
    f: &QuasiCoherent,
    g: &dyn PresentedFunctor,
    phi: &Family,
) -> Result<Family> {
    let field = u.field();
    let m = f.module.rank;
    let phi_k = &phi[0];
    u.algebras()
        .iter()
        .map(|t| {
            let sp = s.tensor_product(t.algebra())?;
            let ssp = s.tensor_product(&sp)?;
            let dsp = sp.dim();
            let iota = Matrix::identity(field, s.dim())
                .kron(&Matrix::from_columns(field, dsp, &[sp.unit().clone()])?)?;
            let s_base = s.tensor_product(&FinAlgebra::base(field))?;
            check_algebra_morphism(&s_base, &ssp, &iota)?;
            let lift = g.transition(&s_base, &ssp, &iota)?;
            let value = g.value(&ssp)?;
            let mut cols = Vec::with_capacity(m * dsp);
            for i in 0..m {
                let base_image = lift.mul_vec(&phi_k.column(i))?;
                for b in 0..dsp {
                    let x = kron_vec(s.unit(), &unit_vector(field, dsp, b));
                    cols.push(combine(field, value.rank, &value.actions, &x).mul_vec(&base_image)?);
                }
            }
            let ext = columns_or_empty(field, value.rank, &cols)?;
            let p = s.mult_matrix().kron(&Matrix::identity(field, t.dim()))?;
            check_algebra_morphism(&ssp, &sp, &p)?;
            g.transition(&ssp, &sp, &p)?.mul(&ext)
        })
        .collect()
}

/// Builds both spaces and both assignment maps for the structural morphism
/// `K -> S`, with `F` quasi-coherent and `G` presented on `S`-algebras.
pub fn adjunction_data(
    u: &Arc<Universe>,
    s: &TestAlgebra,
    f: &QuasiCoherent,
    g: &dyn PresentedFunctor,
) -> Result<AdjunctionData> {
    let field = u.field();
    if u.algebra(0).dim() != 1 {
        return Err(Error::Closure("the base algebra of the universe must be the field itself".into()));
    }
    let v = Arc::new(u.base_change(s)?);
    let left = nat_hom_space(&f.on_universe(&v)?, &on_universe(g, &v)?)?;
    let push = Pushforward {
        inner: g,
        base: s.algebra().clone(),
    };
    let right = nat_hom_space(&f.on_universe(u)?, &push.on_universe(u)?)?;

    let to_right_cols = left
        .basis()
        .iter()
        .map(|w| {
            right
                .coordinates(&restrict(u, s.algebra(), f, w)?)?
                .ok_or_else(|| Error::Invariant("restricted family is not natural".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let to_left_cols = right
        .basis()
        .iter()
        .map(|phi| {
            left.coordinates(&extend(u, s.algebra(), f, g, phi)?)?
                .ok_or_else(|| Error::Invariant("extended family is not natural".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AdjunctionData {
        to_right: columns_or_empty(field, right.dim(), &to_right_cols)?,
        to_left: columns_or_empty(field, left.dim(), &to_left_cols)?,
        left,
        right,
    })
}

pub fn verify_adjunction(
    u: &Arc<Universe>,
    s: &TestAlgebra,
    f: &QuasiCoherent,
    g: &dyn PresentedFunctor,
) -> Result<AdjunctionVerdict> {
    let d = adjunction_data(u, s, f, g)?;
    let lr = d.left.dim() == d.right.dim() && d.to_left.mul(&d.to_right)?.is_identity();
    let rl = d.left.dim() == d.right.dim() && d.to_right.mul(&d.to_left)?.is_identity();
    Ok(AdjunctionVerdict {
        left_dim: d.left.dim(),
        right_dim: d.right.dim(),
        left_then_right_identity: lr,
        right_then_left_identity: rl,
        holds: lr && rl,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::ZeroFunctor;
    use crate::scalar::Field;

    const Q: Field = Field::Rational;

    #[test]
    fn base_field_gives_identities() {
        let u = Arc::new(Universe::reference(Q).unwrap());
        let s = TestAlgebra::base(Q);
        let d = adjunction_data(&u, &s, &QuasiCoherent::of_rank(Q, 2), &QuasiCoherent::of_rank(Q, 1)).unwrap();
        assert_eq!(d.left.dim(), 2);
        assert!(d.to_right.is_identity());
        assert!(d.to_left.is_identity());
    }

    #[test]
    fn dual_numbers_rank_one() {
        let u = Arc::new(Universe::reference(Q).unwrap());
        let s = TestAlgebra::truncated_polynomial(Q, 2).unwrap();
        let v = verify_adjunction(&u, &s, &QuasiCoherent::of_rank(Q, 1), &QuasiCoherent::of_rank(Q, 1)).unwrap();
        assert_eq!((v.left_dim, v.right_dim), (2, 2));
        assert!(v.holds);
    }

    #[test]
    fn zero_target() {
        let u = Arc::new(Universe::reference(Field::Prime(3)).unwrap());
        let s = TestAlgebra::truncated_polynomial(Field::Prime(3), 2).unwrap();
        let z = ZeroFunctor { field: Field::Prime(3) };
        let v = verify_adjunction(&u, &s, &QuasiCoherent::of_rank(Field::Prime(3), 2), &z).unwrap();
        assert_eq!((v.left_dim, v.right_dim), (0, 0));
        assert!(v.holds);
    }
}
