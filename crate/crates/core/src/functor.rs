//! Functors of modules, either as data on a universe or as a rule that can
//! be evaluated on any finite-dimensional commutative algebra.

use std::sync::Arc;

use crate::algebra::{FinAlgebra, Universe};
use crate::error::{Error, Result};
use crate::matrix::{coordinates_in, kron_vec, Matrix, Vector};
use crate::module::FinModule;
use crate::scalar::{Field, Scalar};

/// Value of a functor at one algebra `S`: a rank and, for every basis
/// element `e_a` of `S`, the matrix of `m |-> e_a m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleValue {
    pub rank: usize,
    pub actions: Vec<Matrix>,
}

/// A functor of modules given by a rule, so it can be evaluated outside any
/// fixed universe.
pub trait PresentedFunctor: Send + Sync {
    fn field(&self) -> Field;

    fn describe(&self) -> String;

    fn value(&self, s: &FinAlgebra) -> Result<ModuleValue>;

    /// The transition along the algebra morphism `map: source -> target`.
    fn transition(&self, source: &FinAlgebra, target: &FinAlgebra, map: &Matrix) -> Result<Matrix>;

    fn on_universe(&self, u: &Arc<Universe>) -> Result<FunctorOnUniverse>
    where
        Self: Sized,
    {
        on_universe(self, u)
    }
}

/// Evaluates a presented functor on every algebra and arrow of `u`.
pub fn on_universe(p: &dyn PresentedFunctor, u: &Arc<Universe>) -> Result<FunctorOnUniverse> {
    p.field().check(u.field())?;
    let mut ranks = Vec::with_capacity(u.len());
    let mut actions = Vec::with_capacity(u.len());
    for a in u.algebras() {
        let v = p.value(a.algebra())?;
        ranks.push(v.rank);
        actions.push(v.actions);
    }
    let transitions = u
        .arrows()
        .iter()
        .map(|a| p.transition(u.algebra(a.src).algebra(), u.algebra(a.dst).algebra(), &a.matrix))
        .collect::<Result<Vec<_>>>()?;
    FunctorOnUniverse::new(u.clone(), ranks, actions, transitions)
}

/// `S |-> M (x) S`, index `i * dim S + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiCoherent {
    pub module: FinModule,
}

impl QuasiCoherent {
    pub fn new(module: FinModule) -> Self {
        QuasiCoherent { module }
    }

    pub fn of_rank(field: Field, rank: usize) -> Self {
        QuasiCoherent {
            module: FinModule::new(field, rank),
        }
    }
}

impl PresentedFunctor for QuasiCoherent {
    fn field(&self) -> Field {
        self.module.field
    }

    fn describe(&self) -> String {
        format!("quasi-coherent rank {}", self.module.rank)
    }

    fn value(&self, s: &FinAlgebra) -> Result<ModuleValue> {
        self.module.field.check(s.field())?;
        let id = Matrix::identity(s.field(), self.module.rank);
        let actions = (0..s.dim())
            .map(|a| id.kron(&s.left_basis_mult(a)))
            .collect::<Result<_>>()?;
        Ok(ModuleValue {
            rank: self.module.rank * s.dim(),
            actions,
        })
    }

    fn transition(&self, _source: &FinAlgebra, _target: &FinAlgebra, map: &Matrix) -> Result<Matrix> {
        Matrix::identity(map.field(), self.module.rank).kron(map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroFunctor {
    pub field: Field,
}

impl PresentedFunctor for ZeroFunctor {
    fn field(&self) -> Field {
        self.field
    }

    fn describe(&self) -> String {
        "zero".into()
    }

    fn value(&self, s: &FinAlgebra) -> Result<ModuleValue> {
        Ok(ModuleValue {
            rank: 0,
            actions: vec![Matrix::zeros(self.field, 0, 0); s.dim()],
        })
    }

    fn transition(&self, _: &FinAlgebra, _: &FinAlgebra, _: &Matrix) -> Result<Matrix> {
        Ok(Matrix::zeros(self.field, 0, 0))
    }
}

/// `S |-> nil(S)`, the nilradical as an ideal of `S`. It vanishes on the
/// base field but not on `K[x]/(x^2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nilradical {
    pub field: Field,
}

impl PresentedFunctor for Nilradical {
    fn field(&self) -> Field {
        self.field
    }

    fn describe(&self) -> String {
        "nilradical".into()
    }

    fn value(&self, s: &FinAlgebra) -> Result<ModuleValue> {
        let basis = s.nilradical();
        let mut actions = Vec::with_capacity(s.dim());
        for a in 0..s.dim() {
            let l = s.left_basis_mult(a);
            let cols = basis
                .iter()
                .map(|b| {
                    coordinates_in(s.field(), s.dim(), &basis, &l.mul_vec(b)?)?
                        .ok_or_else(|| Error::Invariant("nilradical is not an ideal".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            actions.push(Matrix::from_columns(s.field(), basis.len(), &cols)?);
        }
        Ok(ModuleValue {
            rank: basis.len(),
            actions,
        })
    }

    fn transition(&self, source: &FinAlgebra, target: &FinAlgebra, map: &Matrix) -> Result<Matrix> {
        let from = source.nilradical();
        let to = target.nilradical();
        let cols = from
            .iter()
            .map(|b| {
                coordinates_in(target.field(), target.dim(), &to, &map.mul_vec(b)?)?
                    .ok_or_else(|| Error::Invariant("morphism does not preserve nilpotents".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(target.field(), to.len(), &cols)
    }
}

/// `R' |-> G(S (x) R')` with `R'` acting through `1 (x) r`.
pub struct Pushforward<'a> {
    pub inner: &'a dyn PresentedFunctor,
    pub base: FinAlgebra,
}

impl PresentedFunctor for Pushforward<'_> {
    fn field(&self) -> Field {
        self.base.field()
    }

    fn describe(&self) -> String {
        format!("pushforward of {} along a {}-dimensional algebra", self.inner.describe(), self.base.dim())
    }

    fn value(&self, r: &FinAlgebra) -> Result<ModuleValue> {
        let sr = self.base.tensor_product(r)?;
        let v = self.inner.value(&sr)?;
        let field = r.field();
        let actions = (0..r.dim())
            .map(|b| {
                let x = kron_vec(self.base.unit(), &crate::matrix::unit_vector(field, r.dim(), b));
                combine(field, v.rank, &v.actions, &x)
            })
            .collect();
        Ok(ModuleValue { rank: v.rank, actions })
    }

    fn transition(&self, source: &FinAlgebra, target: &FinAlgebra, map: &Matrix) -> Result<Matrix> {
        let id = Matrix::identity(self.base.field(), self.base.dim());
        self.inner.transition(
            &self.base.tensor_product(source)?,
            &self.base.tensor_product(target)?,
            &id.kron(map)?,
        )
    }
}

/// `sum_a x_a L_a`.
pub fn combine(field: Field, rank: usize, actions: &[Matrix], x: &[Scalar]) -> Matrix {
    let mut out = Matrix::zeros(field, rank, rank);
    for (c, l) in x.iter().zip(actions) {
        if !c.is_zero() {
            out = out.add(&l.scale(c)).expect("same shape");
        }
    }
    out
}

/// A functor of modules restricted to a universe: a module with an action at
/// every algebra and a transition along every arrow.
#[derive(Clone, Debug)]
pub struct FunctorOnUniverse {
    universe: Arc<Universe>,
    ranks: Vec<usize>,
    actions: Vec<Vec<Matrix>>,
    transitions: Vec<Matrix>,
}

impl FunctorOnUniverse {
    /// Validates shapes, module axioms, functoriality and semilinearity.
    pub fn new(
        universe: Arc<Universe>,
        ranks: Vec<usize>,
        actions: Vec<Vec<Matrix>>,
        transitions: Vec<Matrix>,
    ) -> Result<Self> {
        let f = FunctorOnUniverse {
            universe,
            ranks,
            actions,
            transitions,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn quasicoherent(m: &FinModule, u: &Arc<Universe>) -> Result<Self> {
        QuasiCoherent::new(m.clone()).on_universe(u)
    }

    pub fn zero(u: &Arc<Universe>) -> Self {
        ZeroFunctor { field: u.field() }
            .on_universe(u)
            .expect("zero functor is valid")
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn field(&self) -> Field {
        self.universe.field()
    }

    pub fn rank(&self, s: usize) -> usize {
        self.ranks[s]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Matrix of multiplication by the `a`-th basis element of algebra `s`.
    pub fn action(&self, s: usize, a: usize) -> &Matrix {
        &self.actions[s][a]
    }

    pub fn actions(&self, s: usize) -> &[Matrix] {
        &self.actions[s]
    }

    /// Matrix of multiplication by an arbitrary element of algebra `s`.
    pub fn action_of(&self, s: usize, x: &[Scalar]) -> Matrix {
        combine(self.field(), self.ranks[s], &self.actions[s], x)
    }

    pub fn transition(&self, arrow: usize) -> &Matrix {
        &self.transitions[arrow]
    }

    pub fn same_universe(&self, other: &FunctorOnUniverse) -> bool {
        Arc::ptr_eq(&self.universe, &other.universe) || *self.universe == *other.universe
    }

    /// Replaces one transition without validation; only for building
    /// deliberately broken inputs.
    pub fn with_transition_unchecked(mut self, arrow: usize, m: Matrix) -> Self {
        self.transitions[arrow] = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let u = &*self.universe;
        let field = u.field();
        if self.ranks.len() != u.len() || self.actions.len() != u.len() {
            return Err(Error::DimensionMismatch {
                context: "functor values vs algebras",
                expected: u.len(),
                found: self.ranks.len().min(self.actions.len()),
            });
        }
        if self.transitions.len() != u.arrows().len() {
            return Err(Error::DimensionMismatch {
                context: "functor transitions vs arrows",
                expected: u.arrows().len(),
                found: self.transitions.len(),
            });
        }
        for (s, alg) in u.algebras().iter().enumerate() {
            let a = alg.algebra();
            let r = self.ranks[s];
            if self.actions[s].len() != a.dim() {
                return Err(Error::DimensionMismatch {
                    context: "action matrices vs algebra dimension",
                    expected: a.dim(),
                    found: self.actions[s].len(),
                });
            }
            for l in &self.actions[s] {
                field.check(l.field())?;
                if l.shape() != (r, r) {
                    return Err(Error::InvalidStructure(format!("action at {} has the wrong shape", alg.name())));
                }
            }
            if !self.action_of(s, a.unit()).is_identity() {
                return Err(Error::InvalidStructure(format!("action at {} is not unital", alg.name())));
            }
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    let lhs = self.actions[s][i].mul(&self.actions[s][j])?;
                    if lhs != self.action_of(s, a.basis_product(i, j)) {
                        return Err(Error::InvalidStructure(format!(
                            "action at {} is not associative on basis pair ({i}, {j})",
                            alg.name()
                        )));
                    }
                }
            }
        }
        for (k, arrow) in u.arrows().iter().enumerate() {
            let t = &self.transitions[k];
            field.check(t.field())?;
            if t.shape() != (self.ranks[arrow.dst], self.ranks[arrow.src]) {
                return Err(Error::InvalidStructure(format!("transition {k} has the wrong shape")));
            }
            if u.is_identity(k) && !t.is_identity() {
                return Err(Error::InvalidStructure(format!("transition along identity arrow {k} is not the identity")));
            }
        }
        for &g in u.generators() {
            let ga = u.arrow(g);
            let src = u.algebra(ga.src).algebra();
            for a in 0..src.dim() {
                let image = ga.matrix.column(a);
                let lhs = self.transitions[g].mul(&self.actions[ga.src][a])?;
                let rhs = self.action_of(ga.dst, &image).mul(&self.transitions[g])?;
                if lhs != rhs {
                    return Err(Error::InvalidStructure(format!(
                        "transition {g} is not semilinear on basis element {a}"
                    )));
                }
            }
            for (w, wa) in u.arrows().iter().enumerate() {
                if wa.dst != ga.src {
                    continue;
                }
                let c = u.compose_indices(g, w)?;
                if self.transitions[c] != self.transitions[g].mul(&self.transitions[w])? {
                    return Err(Error::InvalidStructure(format!(
                        "transitions are not functorial on the composite of arrows {g} and {w}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The vector `swap(x)` for `x` in `A (x) B`, landing in `B (x) A`.
pub fn swap_tensor(x: &[Scalar], da: usize, db: usize) -> Vector {
    let mut out = x.to_vec();
    for i in 0..da {
        for j in 0..db {
            out[j * da + i] = x[i * db + j].clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Arrow;

    const Q: Field = Field::Rational;

    fn reference() -> Arc<Universe> {
        Arc::new(Universe::reference(Q).unwrap())
    }

    #[test]
    fn base_module_is_universe_itself() {
        let u = reference();
        let f = FunctorOnUniverse::quasicoherent(&FinModule::base(Q), &u).unwrap();
        for (s, a) in u.algebras().iter().enumerate() {
            assert_eq!(f.rank(s), a.dim());
            for i in 0..a.dim() {
                assert_eq!(f.action(s, i), &a.algebra().left_basis_mult(i));
            }
        }
        for (k, a) in u.arrows().iter().enumerate() {
            assert_eq!(f.transition(k), &a.matrix);
        }
    }

    #[test]
    fn evaluation_kills_x_component() {
        let u = reference();
        let f = FunctorOnUniverse::quasicoherent(&FinModule::new(Q, 2), &u).unwrap();
        assert_eq!(f.rank(1), 4);
        let eval = u
            .find(&Arrow {
                src: 1,
                dst: 0,
                matrix: Matrix::from_i64(Q, &[&[1, 0]]),
            })
            .unwrap();
        // (m_0 (x) 1, m_0 (x) x, m_1 (x) 1, m_1 (x) x) -> (m_0, m_1)
        assert_eq!(f.transition(eval), &Matrix::from_i64(Q, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]));
    }

    #[test]
    fn corrupted_transition_rejected() {
        let u = reference();
        let f = FunctorOnUniverse::quasicoherent(&FinModule::new(Q, 1), &u).unwrap();
        let g = u.generators()[0];
        let bad = f.transition(g).scale(&Q.from_i64(2));
        let broken = f.with_transition_unchecked(g, bad);
        assert!(broken.validate().is_err());
    }

    #[test]
    fn nilradical_functor_values() {
        for field in [Q, Field::Prime(3)] {
            let u = Arc::new(Universe::reference(field).unwrap());
            let n = Nilradical { field }.on_universe(&u).unwrap();
            assert_eq!(n.ranks(), &[0, 1, 2, 2, 0]);
        }
    }

    #[test]
    fn pushforward_of_quasicoherent() {
        let u = reference();
        let s = FinAlgebra::truncated_polynomial(Q, 2).unwrap();
        let qc = QuasiCoherent::of_rank(Q, 1);
        let p = Pushforward { inner: &qc, base: s };
        let f = p.on_universe(&u).unwrap();
        for (i, a) in u.algebras().iter().enumerate() {
            assert_eq!(f.rank(i), 2 * a.dim());
        }
    }

    #[test]
    fn swap_is_involutive() {
        let x: Vector = (0..6).map(|i| Q.from_i64(i)).collect();
        assert_eq!(swap_tensor(&swap_tensor(&x, 2, 3), 3, 2), x);
        assert_eq!(swap_tensor(&x, 2, 3)[1], Q.from_i64(3));
    }
}
