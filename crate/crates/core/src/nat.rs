//! Spaces of natural transformations between functors on a universe, and
//! the constructions built from them: dual functors, the unit into the
//! double dual, and the checks that compare a functor with its base value.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::Universe;
use crate::error::{Error, Result};
use crate::functor::{swap_tensor, FunctorOnUniverse, PresentedFunctor, QuasiCoherent};
use crate::matrix::{unit_vector, Matrix, RowReducer, Vector};
use crate::module::FinModule;
use crate::scalar::{Field, Scalar};

/// One matrix per algebra of the universe.
pub type Family = Vec<Matrix>;

fn flatten(f: &Family) -> Vector {
    f.iter().flat_map(|m| m.entries().iter().cloned()).collect()
}

pub fn compose_families(second: &Family, first: &Family) -> Result<Family> {
    second.iter().zip(first).map(|(a, b)| a.mul(b)).collect()
}

pub fn add_families(a: &Family, b: &Family) -> Result<Family> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn scale_family(a: &Family, c: &Scalar) -> Family {
    a.iter().map(|m| m.scale(c)).collect()
}

pub fn zero_family(f: &FunctorOnUniverse, g: &FunctorOnUniverse) -> Family {
    (0..f.universe().len())
        .map(|s| Matrix::zeros(f.field(), g.rank(s), f.rank(s)))
        .collect()
}

/// Direct check, independent of the solver: every component is linear over
/// its algebra and every naturality square commutes.
pub fn is_natural(f: &FunctorOnUniverse, g: &FunctorOnUniverse, family: &Family) -> Result<bool> {
    if !f.same_universe(g) {
        return Err(Error::UniverseMismatch);
    }
    let u = f.universe();
    if family.len() != u.len() {
        return Ok(false);
    }
    for (s, m) in family.iter().enumerate() {
        if m.shape() != (g.rank(s), f.rank(s)) {
            return Ok(false);
        }
        for a in 0..u.algebra(s).dim() {
            if m.mul(f.action(s, a))? != g.action(s, a).mul(m)? {
                return Ok(false);
            }
        }
    }
    for (k, a) in u.arrows().iter().enumerate() {
        if g.transition(k).mul(&family[a.src])? != family[a.dst].mul(f.transition(k))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A basis of natural families `F -> G` with a fast coordinate map.
#[derive(Clone, Debug)]
pub struct NatSpace {
    field: Field,
    source_ranks: Vec<usize>,
    target_ranks: Vec<usize>,
    basis: Vec<Family>,
    rows: Vec<usize>,
    pick_inverse: Matrix,
}

impl NatSpace {
    fn from_basis(field: Field, source_ranks: Vec<usize>, target_ranks: Vec<usize>, basis: Vec<Family>) -> Result<Self> {
        let flat: Vec<Vector> = basis.iter().map(flatten).collect();
        let n: usize = source_ranks.iter().zip(&target_ranks).map(|(a, b)| a * b).sum();
        let (rows, pick_inverse) = if flat.is_empty() {
            (Vec::new(), Matrix::zeros(field, 0, 0))
        } else {
            let m = Matrix::from_columns(field, n, &flat)?;
            let (_, rows) = m.transpose().rref();
            if rows.len() != flat.len() {
                return Err(Error::Invariant("natural family basis is dependent".into()));
            }
            let pick = m.select_rows(&rows);
            let inv = pick
                .inverse()
                .ok_or_else(|| Error::Invariant("coordinate block is singular".into()))?;
            (rows, inv)
        };
        Ok(NatSpace {
            field,
            source_ranks,
            target_ranks,
            basis,
            rows,
            pick_inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Family] {
        &self.basis
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source_ranks(&self) -> &[usize] {
        &self.source_ranks
    }

    pub fn target_ranks(&self) -> &[usize] {
        &self.target_ranks
    }

    /// `sum_k c_k B_k`.
    pub fn family(&self, c: &[Scalar]) -> Family {
        let mut out: Family = self
            .source_ranks
            .iter()
            .zip(&self.target_ranks)
            .map(|(&a, &b)| Matrix::zeros(self.field, b, a))
            .collect();
        for (ck, bk) in c.iter().zip(&self.basis) {
            if ck.is_zero() {
                continue;
            }
            out = add_families(&out, &scale_family(bk, ck)).expect("same shapes");
        }
        out
    }

    /// Coordinates of `family` in the basis, or `None` when it is not in
    /// the space.
    pub fn coordinates(&self, family: &Family) -> Result<Option<Vector>> {
        let v = flatten(family);
        let expected: usize = self.source_ranks.iter().zip(&self.target_ranks).map(|(a, b)| a * b).sum();
        if v.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "family size",
                expected,
                found: v.len(),
            });
        }
        if self.basis.is_empty() {
            return Ok(v.iter().all(Scalar::is_zero).then(Vec::new));
        }
        let picked: Vector = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.pick_inverse.mul_vec(&picked)?;
        Ok((flatten(&self.family(&c)) == v).then_some(c))
    }

    pub fn contains(&self, family: &Family) -> Result<bool> {
        Ok(self.coordinates(family)?.is_some())
    }

    /// The matrix sending coordinates to the flattened component at
    /// algebra `s` (row-major entries).
    pub fn component_matrix(&self, s: usize) -> Result<Matrix> {
        let n = self.source_ranks[s] * self.target_ranks[s];
        let cols: Vec<Vector> = self.basis.iter().map(|b| b[s].entries().to_vec()).collect();
        if cols.is_empty() {
            return Ok(Matrix::zeros(self.field, n, 0));
        }
        Matrix::from_columns(self.field, n, &cols)
    }
}

/// Solves for all natural families `F -> G`. Each component is first
/// restricted to the maps linear over its algebra; naturality is then
/// imposed along a generating set of arrows, which suffices because
/// composites of commuting squares commute.
pub fn nat_hom_space(f: &FunctorOnUniverse, g: &FunctorOnUniverse) -> Result<NatSpace> {
    if !f.same_universe(g) {
        return Err(Error::UniverseMismatch);
    }
    let u = f.universe();
    let field = u.field();

    let mut local: Vec<Vec<Matrix>> = Vec::with_capacity(u.len());
    for s in 0..u.len() {
        let (rf, rg) = (f.rank(s), g.rank(s));
        let mut red = RowReducer::new(field, rf * rg);
        for a in 0..u.algebra(s).dim() {
            let (lf, lg) = (f.action(s, a), g.action(s, a));
            for i in 0..rg {
                for j in 0..rf {
                    let mut terms = Vec::new();
                    for k in 0..rf {
                        let c = lf.get(k, j);
                        if !c.is_zero() {
                            terms.push((i * rf + k, c.clone()));
                        }
                    }
                    for k in 0..rg {
                        let c = lg.get(i, k);
                        if !c.is_zero() {
                            terms.push((k * rf + j, -c));
                        }
                    }
                    red.push_sparse(&terms);
                }
            }
        }
        let mats = red
            .kernel_basis()
            .into_iter()
            .map(|v| Matrix::new(field, rg, rf, v))
            .collect::<Result<Vec<_>>>()?;
        local.push(mats);
    }

    let mut offsets = Vec::with_capacity(u.len());
    let mut total = 0;
    for l in &local {
        offsets.push(total);
        total += l.len();
    }

    let mut red = RowReducer::new(field, total);
    for &k in u.generators() {
        let arrow = u.arrow(k);
        let (s, t) = (arrow.src, arrow.dst);
        if local[s].is_empty() && local[t].is_empty() {
            continue;
        }
        let (tf, tg) = (f.transition(k), g.transition(k));
        let left: Vec<Matrix> = local[s].iter().map(|b| tg.mul(b)).collect::<Result<_>>()?;
        let right: Vec<Matrix> = local[t].iter().map(|b| b.mul(tf)).collect::<Result<_>>()?;
        for i in 0..g.rank(t) {
            for j in 0..f.rank(s) {
                let mut terms = Vec::new();
                for (q, m) in left.iter().enumerate() {
                    let c = m.get(i, j);
                    if !c.is_zero() {
                        terms.push((offsets[s] + q, c.clone()));
                    }
                }
                for (q, m) in right.iter().enumerate() {
                    let c = m.get(i, j);
                    if !c.is_zero() {
                        terms.push((offsets[t] + q, -c));
                    }
                }
                red.push_sparse(&terms);
            }
        }
    }

    let basis: Vec<Family> = red
        .kernel_basis()
        .into_iter()
        .map(|c| {
            (0..u.len())
                .map(|s| {
                    let mut m = Matrix::zeros(field, g.rank(s), f.rank(s));
                    for (q, b) in local[s].iter().enumerate() {
                        let x = &c[offsets[s] + q];
                        if !x.is_zero() {
                            m = m.add(&b.scale(x)).expect("same shape");
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();
    NatSpace::from_basis(field, f.ranks().to_vec(), g.ranks().to_vec(), basis)
}

fn require_field_base(u: &Universe) -> Result<()> {
    if u.algebra(0).dim() != 1 {
        return Err(Error::Closure("the base algebra of the universe must be the field itself".into()));
    }
    Ok(())
}

/// `F*` on the universe together with the solved spaces
/// `F*(T) = Nat(F, T (x) -)` that give its coordinates.
#[derive(Clone, Debug)]
pub struct DualFunctor {
    pub functor: FunctorOnUniverse,
    pub spaces: Vec<NatSpace>,
}

/// Post-composes every component `F(R) -> T (x) R` with `m (x) id_R`.
fn post_compose(u: &Universe, family: &Family, m: &Matrix) -> Result<Family> {
    family
        .iter()
        .enumerate()
        .map(|(r, c)| m.kron(&Matrix::identity(u.field(), u.algebra(r).dim()))?.mul(c))
        .collect()
}

pub fn dual_on_universe(f: &FunctorOnUniverse) -> Result<DualFunctor> {
    let u = f.universe().clone();
    require_field_base(&u)?;
    let field = u.field();
    let mut spaces = Vec::with_capacity(u.len());
    for t in u.algebras() {
        let target = QuasiCoherent::of_rank(field, t.dim()).on_universe(&u)?;
        spaces.push(nat_hom_space(f, &target)?);
    }
    let ranks: Vec<usize> = spaces.iter().map(NatSpace::dim).collect();
    let mut actions = Vec::with_capacity(u.len());
    for (ti, t) in u.algebras().iter().enumerate() {
        let mut per = Vec::with_capacity(t.dim());
        for a in 0..t.dim() {
            let l = t.algebra().left_basis_mult(a);
            let cols = spaces[ti]
                .basis()
                .iter()
                .map(|b| {
                    let image = post_compose(&u, b, &l)?;
                    spaces[ti]
                        .coordinates(&image)?
                        .ok_or_else(|| Error::Invariant("dual action leaves the solved space".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            per.push(Matrix::from_columns(field, ranks[ti], &cols)?);
        }
        actions.push(per);
    }
    let mut transitions = Vec::with_capacity(u.arrows().len());
    for a in u.arrows() {
        let cols = spaces[a.src]
            .basis()
            .iter()
            .map(|b| {
                let image = post_compose(&u, b, &a.matrix)?;
                spaces[a.dst]
                    .coordinates(&image)?
                    .ok_or_else(|| Error::Invariant("dual transition leaves the solved space".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        transitions.push(Matrix::from_columns(field, ranks[a.dst], &cols)?);
    }
    let functor = FunctorOnUniverse::new(u, ranks, actions, transitions)?;
    Ok(DualFunctor { functor, spaces })
}

/// The unit `F -> F**` as one matrix per algebra, in the coordinates of
/// `dual` and `double_dual`: `x in F(S)` goes to the family
/// `w |-> swap(w_S(x))` on `F*`.
pub fn double_dual_unit_family(
    f: &FunctorOnUniverse,
    dual: &DualFunctor,
    double_dual: &DualFunctor,
) -> Result<Family> {
    let u = f.universe();
    let field = u.field();
    let mut unit = Vec::with_capacity(u.len());
    for (s, alg) in u.algebras().iter().enumerate() {
        let ds = alg.dim();
        let mut cols = Vec::with_capacity(f.rank(s));
        for i in 0..f.rank(s) {
            let x = unit_vector(field, f.rank(s), i);
            let family: Family = u
                .algebras()
                .iter()
                .enumerate()
                .map(|(r, ralg)| {
                    let dr = ralg.dim();
                    let cols = dual.spaces[r]
                        .basis()
                        .iter()
                        .map(|w| Ok(swap_tensor(&w[s].mul_vec(&x)?, dr, ds)))
                        .collect::<Result<Vec<_>>>()?;
                    if cols.is_empty() {
                        Ok(Matrix::zeros(field, ds * dr, 0))
                    } else {
                        Matrix::from_columns(field, ds * dr, &cols)
                    }
                })
                .collect::<Result<_>>()?;
            let c = double_dual.spaces[s]
                .coordinates(&family)?
                .ok_or_else(|| Error::Invariant("unit family is not natural".into()))?;
            cols.push(c);
        }
        let rows = double_dual.functor.rank(s);
        unit.push(if cols.is_empty() {
            Matrix::zeros(field, rows, 0)
        } else {
            Matrix::from_columns(field, rows, &cols)?
        });
    }
    Ok(unit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    Kernel,
    Cokernel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflexivityWitness {
    pub algebra: String,
    pub kind: WitnessKind,
    pub vector: Vector,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReflexivityVerdict {
    pub reflexive: bool,
    pub ranks: Vec<usize>,
    pub double_dual_ranks: Vec<usize>,
    pub bijective: Vec<bool>,
    pub witness: Option<ReflexivityWitness>,
}

/// Computes `F -> F**` on the universe and reports bijectivity at every
/// algebra, with a kernel or cokernel vector at the first failure.
pub fn check_reflexive(f: &FunctorOnUniverse) -> Result<ReflexivityVerdict> {
    f.validate()?;
    let dual = dual_on_universe(f)?;
    let double = dual_on_universe(&dual.functor)?;
    let unit = double_dual_unit_family(f, &dual, &double)?;
    if !is_natural(f, &double.functor, &unit)? {
        return Err(Error::Invariant("unit into the double dual is not natural".into()));
    }
    let u = f.universe();
    let mut bijective = Vec::with_capacity(u.len());
    let mut witness = None;
    for (s, m) in unit.iter().enumerate() {
        let ok = m.is_invertible();
        bijective.push(ok);
        if !ok && witness.is_none() {
            let kernel = m.kernel_basis();
            witness = Some(if let Some(v) = kernel.into_iter().next() {
                ReflexivityWitness {
                    algebra: u.algebra(s).name().to_string(),
                    kind: WitnessKind::Kernel,
                    vector: v,
                }
            } else {
                // Injective but not surjective: a vector orthogonal to the image.
                let v = m.transpose().kernel_basis().into_iter().next().unwrap_or_default();
                ReflexivityWitness {
                    algebra: u.algebra(s).name().to_string(),
                    kind: WitnessKind::Cokernel,
                    vector: v,
                }
            });
        }
    }
    Ok(ReflexivityVerdict {
        reflexive: bijective.iter().all(|&b| b),
        ranks: f.ranks().to_vec(),
        double_dual_ranks: double.functor.ranks().to_vec(),
        bijective,
        witness,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DpqcWitness {
    pub target_rank: usize,
    pub family: Family,
}

#[derive(Clone, Debug, Serialize)]
pub struct DpqcVerdict {
    pub passes: bool,
    pub rank_bound: usize,
    /// `dim Nat(F, K^r)` for `r = 1..=rank_bound`.
    pub dims: Vec<usize>,
    pub witness: Option<DpqcWitness>,
}

pub const DEFAULT_RANK_BOUND: usize = 4;

/// Injectivity of `Nat(F, N) -> Hom(F(K), N)` for `N = K^r`, `r <= bound`.
/// A failure comes with a nonzero natural family whose base component is 0.
pub fn check_d_proquasicoherent(f: &FunctorOnUniverse, rank_bound: usize) -> Result<DpqcVerdict> {
    let u = f.universe().clone();
    require_field_base(&u)?;
    let mut dims = Vec::with_capacity(rank_bound);
    for r in 1..=rank_bound {
        let target = QuasiCoherent::of_rank(u.field(), r).on_universe(&u)?;
        let space = nat_hom_space(f, &target)?;
        dims.push(space.dim());
        let restriction = space.component_matrix(0)?;
        if let Some(c) = restriction.kernel_basis().into_iter().next() {
            return Ok(DpqcVerdict {
                passes: false,
                rank_bound,
                dims,
                witness: Some(DpqcWitness {
                    target_rank: r,
                    family: space.family(&c),
                }),
            });
        }
    }
    Ok(DpqcVerdict {
        passes: true,
        rank_bound,
        dims,
        witness: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageFactorization {
    pub image: FinModule,
    /// Columns span the image of the base component inside `N`.
    pub inclusion: Matrix,
    pub epi: Family,
    pub mono: Family,
    /// Whether the epi component is surjective at each algebra.
    pub epi_surjective: Vec<bool>,
}

/// Factors a natural family `F -> N (x) -` through `N' (x) -`, where `N'` is
/// the image of its base component.
pub fn factor_through_image(
    f: &FunctorOnUniverse,
    n: &FinModule,
    family: &Family,
    rank_bound: usize,
) -> Result<ImageFactorization> {
    let u = f.universe().clone();
    let field = u.field();
    let verdict = check_d_proquasicoherent(f, rank_bound)?;
    if !verdict.passes {
        return Err(Error::Precondition("source is not D-proquasi-coherent".into()));
    }
    let target = QuasiCoherent::new(n.clone()).on_universe(&u)?;
    if !is_natural(f, &target, family)? {
        return Err(Error::Precondition("family is not natural".into()));
    }
    let image = family[0].image_basis();
    let r = image.len();
    let inclusion = if r == 0 {
        Matrix::zeros(field, n.rank, 0)
    } else {
        Matrix::from_columns(field, n.rank, &image)?
    };
    let mut epi = Vec::with_capacity(u.len());
    let mut mono = Vec::with_capacity(u.len());
    let mut epi_surjective = Vec::with_capacity(u.len());
    for (s, alg) in u.algebras().iter().enumerate() {
        let m = inclusion.kron(&Matrix::identity(field, alg.dim()))?;
        let e = if f.rank(s) == 0 {
            Matrix::zeros(field, r * alg.dim(), 0)
        } else if r == 0 {
            if !family[s].is_zero() {
                return Err(Error::Invariant("family does not factor through its base image".into()));
            }
            Matrix::zeros(field, 0, f.rank(s))
        } else {
            m.solve_matrix(&family[s])?
                .ok_or_else(|| Error::Invariant("family does not factor through its base image".into()))?
        };
        epi_surjective.push(e.is_surjective());
        epi.push(e);
        mono.push(m);
    }
    let image_module = FinModule::new(field, r);
    let middle = QuasiCoherent::new(image_module.clone()).on_universe(&u)?;
    if !is_natural(f, &middle, &epi)? || !is_natural(&middle, &target, &mono)? {
        return Err(Error::Invariant("factors are not natural".into()));
    }
    // Uniqueness: the epi is the only solution of mono o e = family, since
    // every mono component is injective; confirm it lies in the solved space.
    let space = nat_hom_space(f, &middle)?;
    if !space.contains(&epi)? || mono.iter().any(|m| !m.is_injective()) {
        return Err(Error::Invariant("factorization is not unique".into()));
    }
    Ok(ImageFactorization {
        image: image_module,
        inclusion,
        epi,
        mono,
        epi_surjective,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EnlargementStep {
    pub algebras: usize,
    pub added_degree: Option<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct EnlargementResult {
    pub universe: Arc<Universe>,
    pub steps: Vec<EnlargementStep>,
    pub stable: bool,
}

/// Adds `K[x]/(x^(N+1))` for increasing `N` until the dimension returned by
/// `solve` is unchanged by two consecutive additions, or `max_steps` is hit.
pub fn enlarge_until_stable(
    start: &Arc<Universe>,
    max_steps: usize,
    mut solve: impl FnMut(&Arc<Universe>) -> Result<usize>,
) -> Result<EnlargementResult> {
    let field = start.field();
    let mut u = start.clone();
    let mut steps = vec![EnlargementStep {
        algebras: u.len(),
        added_degree: None,
        dim: solve(&u)?,
    }];
    let mut unchanged = 0;
    let mut n = u
        .algebras()
        .iter()
        .filter_map(|a| {
            (2..=a.dim())
                .find(|&m| crate::algebra::TestAlgebra::truncated_polynomial(field, m).ok().as_ref() == Some(a))
        })
        .max()
        .unwrap_or(1)
        + 1;
    for _ in 0..max_steps {
        u = Arc::new(u.enlarge(n)?);
        let dim = solve(&u)?;
        let prev = steps.last().expect("nonempty").dim;
        steps.push(EnlargementStep {
            algebras: u.len(),
            added_degree: Some(n),
            dim,
        });
        unchanged = if dim == prev { unchanged + 1 } else { 0 };
        if unchanged >= 2 {
            return Ok(EnlargementResult {
                universe: u,
                steps,
                stable: true,
            });
        }
        n += 1;
    }
    Ok(EnlargementResult {
        universe: u,
        steps,
        stable: false,
    })
}

/// `Nat(F, N)` restricted to the base component, as a matrix whose columns
/// are the flattened base components of the basis.
pub fn restriction_to_base(space: &NatSpace) -> Result<Matrix> {
    space.component_matrix(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::{Nilradical, ZeroFunctor};

    const Q: Field = Field::Rational;

    fn reference(field: Field) -> Arc<Universe> {
        Arc::new(Universe::reference(field).unwrap())
    }

    fn qc(u: &Arc<Universe>, r: usize) -> FunctorOnUniverse {
        FunctorOnUniverse::quasicoherent(&FinModule::new(u.field(), r), u).unwrap()
    }

    #[test]
    fn scalars_on_base_module() {
        let u = reference(Q);
        let k = qc(&u, 1);
        let space = nat_hom_space(&k, &k).unwrap();
        assert_eq!(space.dim(), 1);
        assert!(is_natural(&k, &k, &space.basis()[0]).unwrap());
    }

    #[test]
    fn quasicoherent_hom_counts() {
        let u = reference(Field::Prime(7));
        for (a, b) in [(1, 2), (2, 2), (3, 1), (0, 3)] {
            let space = nat_hom_space(&qc(&u, a), &qc(&u, b)).unwrap();
            assert_eq!(space.dim(), a * b);
            let r = restriction_to_base(&space).unwrap();
            assert_eq!(r.rank(), a * b);
            for fam in space.basis() {
                assert!(is_natural(&qc(&u, a), &qc(&u, b), fam).unwrap());
            }
        }
    }

    #[test]
    fn dual_ranks() {
        let u = reference(Q);
        let d = dual_on_universe(&qc(&u, 2)).unwrap();
        for (s, a) in u.algebras().iter().enumerate() {
            assert_eq!(d.functor.rank(s), 2 * a.dim());
        }
        let k = dual_on_universe(&qc(&u, 1)).unwrap();
        assert_eq!(k.functor.ranks(), qc(&u, 1).ranks());
    }

    #[test]
    fn quasicoherent_is_reflexive() {
        let u = reference(Q);
        for r in 0..=2 {
            let v = check_reflexive(&qc(&u, r)).unwrap();
            assert!(v.reflexive, "rank {r}");
            assert_eq!(v.double_dual_ranks, v.ranks);
        }
    }

    #[test]
    fn zero_functor_checks() {
        let u = reference(Q);
        let z = ZeroFunctor { field: Q }.on_universe(&u).unwrap();
        assert!(check_reflexive(&z).unwrap().reflexive);
        assert!(check_d_proquasicoherent(&z, 2).unwrap().passes);
    }

    #[test]
    fn nilradical_fails_with_inclusion_witness() {
        let u = reference(Q);
        let n = Nilradical { field: Q }.on_universe(&u).unwrap();
        let v = check_d_proquasicoherent(&n, 2).unwrap();
        assert!(!v.passes);
        let w = v.witness.unwrap();
        assert_eq!(w.target_rank, 1);
        assert!(w.family[0].is_zero());
        assert!(w.family.iter().any(|m| !m.is_zero()));
        assert!(is_natural(&n, &qc(&u, 1), &w.family).unwrap());
    }

    #[test]
    fn composition_closure() {
        let u = reference(Field::Prime(5));
        let (a, b, c) = (qc(&u, 1), qc(&u, 2), qc(&u, 1));
        let ab = nat_hom_space(&a, &b).unwrap();
        let bc = nat_hom_space(&b, &c).unwrap();
        let ac = nat_hom_space(&a, &c).unwrap();
        for g in bc.basis() {
            for f in ab.basis() {
                assert!(ac.contains(&compose_families(g, f).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn factorization_of_zero_and_identity() {
        let u = reference(Q);
        let f = qc(&u, 2);
        let n = FinModule::new(Q, 2);
        let zero = zero_family(&f, &f);
        let z = factor_through_image(&f, &n, &zero, 1).unwrap();
        assert_eq!(z.image.rank, 0);
        let id: Family = f.ranks().iter().map(|&r| Matrix::identity(Q, r)).collect();
        let i = factor_through_image(&f, &n, &id, 1).unwrap();
        assert_eq!(i.image.rank, 2);
        assert!(i.epi_surjective.iter().all(|&b| b));
    }

    #[test]
    fn enlargement_stops_for_quasicoherent_source() {
        let u = reference(Q);
        let r = enlarge_until_stable(&u, 4, |v| nat_hom_space(&qc(v, 1), &qc(v, 2)).map(|s| s.dim())).unwrap();
        assert!(r.stable);
        assert!(r.steps.iter().all(|s| s.dim == 2));
        assert_eq!(r.steps.len(), 3);
    }
}
