//! Submodule and module-morphism criteria: a condition on the base value is
//! compared against the same condition on the induced quasi-coherent data at
//! every algebra of a universe. Both sides are computed independently.

use serde::Serialize;

use crate::algebra::{FinAlgebra, Universe};
use crate::error::{Error, Result};
use crate::matrix::{span_basis, unit_vector, Matrix, Vector};
use crate::scalar::Scalar;

/// A module over a finite-dimensional algebra: `action[a]` is the matrix of
/// the `a`-th basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraModule {
    pub algebra: FinAlgebra,
    pub rank: usize,
    pub action: Vec<Matrix>,
}

impl AlgebraModule {
    pub fn new(algebra: FinAlgebra, rank: usize, action: Vec<Matrix>) -> Result<Self> {
        let m = AlgebraModule { algebra, rank, action };
        m.validate()?;
        Ok(m)
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(algebra: &FinAlgebra) -> Self {
        AlgebraModule {
            algebra: algebra.clone(),
            rank: algebra.dim(),
            action: (0..algebra.dim()).map(|a| algebra.left_basis_mult(a)).collect(),
        }
    }

    pub fn action_of(&self, x: &[Scalar]) -> Matrix {
        crate::functor::combine(self.algebra.field(), self.rank, &self.action, x)
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        if self.action.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                context: "module action matrices",
                expected: a.dim(),
                found: self.action.len(),
            });
        }
        for m in &self.action {
            a.field().check(m.field())?;
            if m.shape() != (self.rank, self.rank) {
                return Err(Error::InvalidStructure("action matrix has the wrong shape".into()));
            }
        }
        if !self.action_of(a.unit()).is_identity() {
            return Err(Error::InvalidStructure("module action is not unital".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if self.action[i].mul(&self.action[j])? != self.action_of(a.basis_product(i, j)) {
                    return Err(Error::InvalidStructure(format!("module action fails on basis pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionWitness {
    /// Name of the test algebra, `K` for the base-level check.
    pub algebra: String,
    /// Index of the acting basis element.
    pub element: usize,
    pub vector: Vector,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionVerdict {
    pub base_holds: bool,
    pub universe_holds: bool,
    pub agree: bool,
    pub base_witness: Option<CriterionWitness>,
    pub universe_witness: Option<CriterionWitness>,
}

impl CriterionVerdict {
    fn new(base: Option<CriterionWitness>, universe: Option<CriterionWitness>) -> Self {
        CriterionVerdict {
            base_holds: base.is_none(),
            universe_holds: universe.is_none(),
            agree: base.is_none() == universe.is_none(),
            base_witness: base,
            universe_witness: universe,
        }
    }
}

fn first_outside(field: crate::scalar::Field, dim: usize, basis: &[Vector], images: impl IntoIterator<Item = Vector>) -> Result<Option<Vector>> {
    let r = basis.len();
    for v in images {
        let mut all = basis.to_vec();
        all.push(v.clone());
        if span_basis(field, dim, &all)?.len() > r {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Whether the span of `generators` is a submodule, compared with stability
/// of `M' (x) S` under `A (x) S` at every algebra `S` of `u`.
pub fn submodule_criterion(m: &AlgebraModule, generators: &[Vector], u: &Universe) -> Result<CriterionVerdict> {
    let field = m.algebra.field();
    field.check(u.field())?;
    let n = m.rank;
    let basis = span_basis(field, n, generators)?;

    let mut base = None;
    'base: for (a, l) in m.action.iter().enumerate() {
        for b in &basis {
            let image = l.mul_vec(b)?;
            if let Some(v) = first_outside(field, n, &basis, [image])? {
                base = Some(CriterionWitness {
                    algebra: "K".into(),
                    element: a,
                    vector: v,
                });
                break 'base;
            }
        }
    }

    let mut universe = None;
    'outer: for s in u.algebras() {
        let ds = s.dim();
        let sub: Vec<Vector> = basis
            .iter()
            .flat_map(|b| (0..ds).map(move |j| (b, j)))
            .map(|(b, j)| crate::matrix::kron_vec(b, &unit_vector(field, ds, j)))
            .collect();
        for (a, l) in m.action.iter().enumerate() {
            for t in 0..ds {
                let op = l.kron(&s.algebra().left_basis_mult(t))?;
                let images = sub.iter().map(|v| op.mul_vec(v)).collect::<Result<Vec<_>>>()?;
                if let Some(v) = first_outside(field, n * ds, &sub, images)? {
                    universe = Some(CriterionWitness {
                        algebra: s.name().to_string(),
                        element: a * ds + t,
                        vector: v,
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(CriterionVerdict::new(base, universe))
}

/// Whether `f: M -> N` commutes with the action, compared with the same for
/// `f (x) id_S` against `A (x) S` at every algebra of `u`.
pub fn module_morphism_criterion(
    m: &AlgebraModule,
    n: &AlgebraModule,
    f: &Matrix,
    u: &Universe,
) -> Result<CriterionVerdict> {
    let field = m.algebra.field();
    if m.algebra != n.algebra {
        return Err(Error::InvalidStructure("modules over different algebras".into()));
    }
    if f.shape() != (n.rank, m.rank) {
        return Err(Error::DimensionMismatch {
            context: "module map shape",
            expected: n.rank * m.rank,
            found: f.rows() * f.cols(),
        });
    }
    let mut base = None;
    'base: for a in 0..m.algebra.dim() {
        let lhs = f.mul(&m.action[a])?;
        let rhs = n.action[a].mul(f)?;
        for j in 0..m.rank {
            if lhs.column(j) != rhs.column(j) {
                base = Some(CriterionWitness {
                    algebra: "K".into(),
                    element: a,
                    vector: unit_vector(field, m.rank, j),
                });
                break 'base;
            }
        }
    }
    let mut universe = None;
    'outer: for s in u.algebras() {
        let ds = s.dim();
        let fs = f.kron(&Matrix::identity(field, ds))?;
        for a in 0..m.algebra.dim() {
            for t in 0..ds {
                let ls = s.algebra().left_basis_mult(t);
                let lhs = fs.mul(&m.action[a].kron(&ls)?)?;
                let rhs = n.action[a].kron(&ls)?.mul(&fs)?;
                if let Some(j) = (0..m.rank * ds).find(|&j| lhs.column(j) != rhs.column(j)) {
                    universe = Some(CriterionWitness {
                        algebra: s.name().to_string(),
                        element: a * ds + t,
                        vector: unit_vector(field, m.rank * ds, j),
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(CriterionVerdict::new(base, universe))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    const Q: Field = Field::Rational;

    fn setup() -> (AlgebraModule, Universe) {
        let a = FinAlgebra::truncated_polynomial(Q, 2).unwrap();
        (AlgebraModule::regular(&a), Universe::reference(Q).unwrap())
    }

    #[test]
    fn trivial_subspaces_are_stable() {
        let (m, u) = setup();
        let all = vec![unit_vector(Q, 2, 0), unit_vector(Q, 2, 1)];
        for gens in [vec![], all] {
            let v = submodule_criterion(&m, &gens, &u).unwrap();
            assert!(v.base_holds && v.universe_holds && v.agree);
        }
    }

    #[test]
    fn ideal_is_stable() {
        let (m, u) = setup();
        // span(x), given with a redundant generator
        let gens = vec![unit_vector(Q, 2, 1), vec![Q.zero(), Q.from_i64(3)]];
        let v = submodule_criterion(&m, &gens, &u).unwrap();
        assert!(v.base_holds && v.universe_holds);
    }

    #[test]
    fn unit_line_is_unstable() {
        let (m, u) = setup();
        let v = submodule_criterion(&m, &[unit_vector(Q, 2, 0)], &u).unwrap();
        assert!(!v.base_holds && !v.universe_holds && v.agree);
        let w = v.base_witness.unwrap();
        // x * 1 = x
        assert_eq!(w.element, 1);
        assert_eq!(w.vector, unit_vector(Q, 2, 1));
    }

    #[test]
    fn morphisms() {
        let (m, u) = setup();
        let id = Matrix::identity(Q, 2);
        let zero = Matrix::zeros(Q, 2, 2);
        for f in [&id, &zero] {
            let v = module_morphism_criterion(&m, &m, f, &u).unwrap();
            assert!(v.base_holds && v.universe_holds);
        }
        // 1 |-> x, x |-> 1 does not commute with multiplication by x
        let swap = Matrix::from_i64(Q, &[&[0, 1], &[1, 0]]);
        let v = module_morphism_criterion(&m, &m, &swap, &u).unwrap();
        assert!(!v.base_holds && !v.universe_holds && v.agree);
        let w = v.base_witness.unwrap();
        assert_eq!(w.element, 1);
        let x = m.action[1].clone();
        let lhs = swap.mul(&x).unwrap().mul_vec(&w.vector).unwrap();
        let rhs = x.mul(&swap).unwrap().mul_vec(&w.vector).unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn bad_action_rejected() {
        let a = FinAlgebra::truncated_polynomial(Q, 2).unwrap();
        // x acting as the identity is not square-zero
        let r = AlgebraModule::new(a, 1, vec![Matrix::identity(Q, 1), Matrix::identity(Q, 1)]);
        assert!(r.is_err());
    }
}
