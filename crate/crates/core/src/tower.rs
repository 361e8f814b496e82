//! Towers: finite prefixes of inverse systems `V_0 <- V_1 <- ... <- V_L` of
//! finite-rank modules or algebras.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{check_algebra_morphism, FinAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{span_basis, unit_vector, Matrix, Vector};
use crate::module::{double_dual_unit, FinModule};
use crate::scalar::{Field, Scalar};

/// Rule for materializing further levels of a built-in tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    PowerSeries,
    Constant { rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    field: Field,
    levels: Vec<FinModule>,
    maps: Vec<Matrix>,
    generator: Option<Generator>,
}

impl Tower {
    /// `maps[n]` goes from level `n + 1` to level `n`.
    pub fn new(field: Field, ranks: &[usize], maps: Vec<Matrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::EmptyTower);
        }
        if maps.len() + 1 != ranks.len() {
            return Err(Error::DimensionMismatch {
                context: "tower maps vs levels",
                expected: ranks.len() - 1,
                found: maps.len(),
            });
        }
        for (n, m) in maps.iter().enumerate() {
            field.check(m.field())?;
            if m.shape() != (ranks[n], ranks[n + 1]) {
                return Err(Error::InvalidStructure(format!(
                    "map into level {n} has shape {:?}, expected ({}, {})",
                    m.shape(),
                    ranks[n],
                    ranks[n + 1]
                )));
            }
        }
        Ok(Tower {
            field,
            levels: ranks.iter().map(|&r| FinModule::new(field, r)).collect(),
            maps,
            generator: None,
        })
    }

    /// `K^rank` at every level with identity maps, levels `0..=depth`.
    pub fn constant(field: Field, rank: usize, depth: usize) -> Self {
        let mut t = Tower::new(field, &vec![rank; depth + 1], vec![Matrix::identity(field, rank); depth]).expect("shapes");
        t.generator = Some(Generator::Constant { rank });
        t
    }

    pub fn zero(field: Field, depth: usize) -> Self {
        Tower::constant(field, 0, depth)
    }

    /// `K[x]/(x^(n+1))` at level `n` as modules, with truncation maps.
    pub fn power_series(field: Field, depth: usize) -> Self {
        let ranks: Vec<usize> = (1..=depth + 1).collect();
        let maps = (0..depth).map(|n| truncation(field, n + 1, n + 2)).collect();
        let mut t = Tower::new(field, &ranks, maps).expect("shapes");
        t.generator = Some(Generator::PowerSeries);
        t
    }

    /// A new tower with `extra` more levels, when a generator is attached.
    pub fn deepen(&self, extra: usize) -> Result<Tower> {
        let depth = self.depth() + extra;
        match &self.generator {
            Some(Generator::PowerSeries) => Ok(Tower::power_series(self.field, depth)),
            Some(Generator::Constant { rank }) => Ok(Tower::constant(self.field, *rank, depth)),
            None => Err(Error::Precondition("tower has no generator to deepen".into())),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn levels(&self) -> &[FinModule] {
        &self.levels
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.rank).collect()
    }

    pub fn rank(&self, n: usize) -> usize {
        self.levels[n].rank
    }

    /// The map from level `n + 1` to level `n`.
    pub fn map(&self, n: usize) -> &Matrix {
        &self.maps[n]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// Index of the deepest materialized level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }

    /// The composite `level m -> level n` for `m >= n`.
    pub fn composite(&self, m: usize, n: usize) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rank(m));
        for k in (n..m).rev() {
            acc = self.maps[k].mul(&acc).expect("chained shapes");
        }
        acc
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(Matrix::is_surjective)
    }

    fn first_non_surjective(&self) -> Option<usize> {
        self.maps.iter().position(|m| !m.is_surjective())
    }

    /// The first `len` levels.
    pub fn truncate(&self, len: usize) -> Tower {
        let len = len.clamp(1, self.levels.len());
        Tower {
            field: self.field,
            levels: self.levels[..len].to_vec(),
            maps: self.maps[..len - 1].to_vec(),
            generator: self.generator.clone(),
        }
    }
}

/// `K^big -> K^small` keeping the first coordinates.
pub fn truncation(field: Field, small: usize, big: usize) -> Matrix {
    let mut m = Matrix::zeros(field, small, big);
    for i in 0..small.min(big) {
        m.set(i, i, field.one());
    }
    m
}

#[derive(Serialize, Deserialize)]
struct TowerJson {
    levels: Vec<FinModule>,
    maps: Vec<Matrix>,
}

impl Serialize for Tower {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TowerJson {
            levels: self.levels.clone(),
            maps: self.maps.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tower {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TowerJson::deserialize(d)?;
        let field = raw.levels.first().map(|l| l.field).ok_or_else(|| D::Error::custom(Error::EmptyTower))?;
        let ranks: Vec<usize> = raw.levels.iter().map(|l| l.rank).collect();
        let maps = raw
            .maps
            .into_iter()
            .map(|m| if m.entries().is_empty() { Ok(Matrix::zeros(field, m.rows(), m.cols())) } else { m.into_field(field) })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        for l in &raw.levels {
            field.check(l.field).map_err(D::Error::custom)?;
        }
        Tower::new(field, &ranks, maps).map_err(D::Error::custom)
    }
}

/// Compatible coordinates `v_n` with `maps[n](v_{n+1}) = v_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerElement {
    pub coords: Vec<Vector>,
}

impl TowerElement {
    pub fn new(t: &Tower, coords: Vec<Vector>) -> Result<Self> {
        if coords.len() != t.levels.len() {
            return Err(Error::DimensionMismatch {
                context: "element levels",
                expected: t.levels.len(),
                found: coords.len(),
            });
        }
        for n in 0..t.depth() {
            if t.maps[n].mul_vec(&coords[n + 1])? != coords[n] {
                return Err(Error::InvalidStructure(format!("element is not compatible at level {n}")));
            }
        }
        Ok(TowerElement { coords })
    }

    /// The element determined by its deepest coordinate vector.
    pub fn from_deepest(t: &Tower, v: Vector) -> Result<Self> {
        let mut coords = vec![v];
        for n in (0..t.depth()).rev() {
            let next = t.maps[n].mul_vec(coords.last().expect("nonempty"))?;
            coords.push(next);
        }
        coords.reverse();
        Ok(TowerElement { coords })
    }
}

#[derive(Clone, Debug)]
pub struct Stabilized {
    pub tower: Tower,
    /// Columns: basis of the stable image inside the original level.
    pub inclusions: Vec<Matrix>,
    /// Whether the image ranks were already reached one level earlier.
    pub prefix_stable: bool,
    pub depth_used: usize,
}

fn image_ranks(t: &Tower, deepest: usize) -> Vec<usize> {
    (0..=deepest).map(|n| t.composite(deepest, n).rank()).collect()
}

/// Replaces level `n` by the image of the deepest level, with the restricted
/// maps. Bases are canonical, so the operation is idempotent.
pub fn stabilized_images(t: &Tower) -> Result<Stabilized> {
    let field = t.field;
    let deepest = t.depth();
    let mut inclusions = Vec::with_capacity(deepest + 1);
    for n in 0..=deepest {
        let c = t.composite(deepest, n);
        let basis = span_basis(field, t.rank(n), &c.columns())?;
        inclusions.push(if basis.is_empty() {
            Matrix::zeros(field, t.rank(n), 0)
        } else {
            Matrix::from_columns(field, t.rank(n), &basis)?
        });
    }
    let ranks: Vec<usize> = inclusions.iter().map(Matrix::cols).collect();
    let mut maps = Vec::with_capacity(deepest);
    for n in 0..deepest {
        let image = t.maps[n].mul(&inclusions[n + 1])?;
        let m = if ranks[n] == 0 || ranks[n + 1] == 0 {
            Matrix::zeros(field, ranks[n], ranks[n + 1])
        } else {
            inclusions[n]
                .solve_matrix(&image)?
                .ok_or_else(|| Error::Invariant("stable image is not preserved".into()))?
        };
        if !m.is_surjective() {
            return Err(Error::Invariant(format!("restricted map into level {n} is not surjective")));
        }
        maps.push(m);
    }
    let prefix_stable = deepest == 0 || image_ranks(t, deepest - 1) == ranks[..deepest];
    let mut tower = Tower::new(field, &ranks, maps)?;
    if ranks == t.ranks() && tower.maps == t.maps {
        tower.generator = t.generator.clone();
    }
    Ok(Stabilized {
        tower,
        inclusions,
        prefix_stable,
        depth_used: deepest,
    })
}

#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    /// Basis of `H_n` in the coordinates of level `n`.
    pub kernels: Vec<Vec<Vector>>,
    pub dims: Vec<usize>,
    /// `sections[n]`: level `n` to level `n + 1`, right inverse of `maps[n]`.
    pub sections: Vec<Matrix>,
    /// `isos[k]`: `H_0 + ... + H_k -> level k`, invertible.
    pub isos: Vec<Matrix>,
}

/// Splits a surjective tower as `level k = H_0 + ... + H_k` with
/// `H_n = ker(level n -> level n-1)`, so that the tower maps become
/// truncation of coordinates.
pub fn product_decomposition(t: &Tower) -> Result<ProductDecomposition> {
    if let Some(level) = t.first_non_surjective() {
        return Err(Error::NotSurjective { level });
    }
    let field = t.field;
    let mut kernels = vec![(0..t.rank(0)).map(|i| unit_vector(field, t.rank(0), i)).collect::<Vec<_>>()];
    let mut isos = vec![Matrix::identity(field, t.rank(0))];
    let mut sections = Vec::with_capacity(t.depth());
    for n in 0..t.depth() {
        let p = &t.maps[n];
        let section = p
            .solve_matrix(&Matrix::identity(field, t.rank(n)))?
            .ok_or(Error::NotSurjective { level: n })?;
        let h = p.kernel_basis();
        let lifted = section.mul(&isos[n])?;
        let iso = if h.is_empty() {
            lifted
        } else {
            lifted.hstack(&Matrix::from_columns(field, t.rank(n + 1), &h)?)?
        };
        if !iso.is_invertible() {
            return Err(Error::Invariant(format!("splitting of level {} is not invertible", n + 1)));
        }
        let expect = isos[n].hstack(&Matrix::zeros(field, t.rank(n), h.len()))?;
        if p.mul(&iso)? != expect {
            return Err(Error::Invariant(format!("splitting of level {} does not truncate", n + 1)));
        }
        kernels.push(h);
        sections.push(section);
        isos.push(iso);
    }
    let dims: Vec<usize> = kernels.iter().map(Vec::len).collect();
    for k in 0..=t.depth() {
        let total: usize = dims[..=k].iter().sum();
        if total != t.rank(k) {
            return Err(Error::Invariant(format!("kernel dimensions do not add up at level {k}")));
        }
    }
    Ok(ProductDecomposition {
        kernels,
        dims,
        sections,
        isos,
    })
}

/// `V_0* -> V_1* -> ...` with injective maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectSystem {
    pub levels: Vec<FinModule>,
    /// `maps[n]`: level `n` to level `n + 1`.
    pub maps: Vec<Matrix>,
}

impl DirectSystem {
    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(Matrix::is_injective)
    }

    /// Dualizes back to a tower.
    pub fn dual(&self) -> Result<Tower> {
        let field = self.levels.first().map(|l| l.field).ok_or(Error::EmptyTower)?;
        let ranks: Vec<usize> = self.levels.iter().map(|l| l.rank).collect();
        Tower::new(field, &ranks, self.maps.iter().map(Matrix::transpose).collect())
    }
}

pub fn dual_tower(t: &Tower) -> Result<DirectSystem> {
    if let Some(level) = t.first_non_surjective() {
        return Err(Error::NotSurjective { level });
    }
    Ok(DirectSystem {
        levels: t.levels.iter().map(crate::module::dual_module).collect(),
        maps: t.maps.iter().map(Matrix::transpose).collect(),
    })
}

/// Dualizing the dual system gives back the tower, level by level, once
/// each level is identified with its double dual.
pub fn reflexivity_roundtrip(t: &Tower) -> Result<bool> {
    let back = dual_tower(t)?.dual()?;
    if back.ranks() != t.ranks() {
        return Ok(false);
    }
    for n in 0..t.depth() {
        let u_small = double_dual_unit(&t.levels[n]).matrix;
        let u_big = double_dual_unit(&t.levels[n + 1]).matrix;
        if u_small.mul(&t.maps[n])? != back.maps[n].mul(&u_big)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct KernelTower {
    pub quotient: Tower,
    /// `None` when the functional is zero and the tower is returned as is.
    pub v: Option<TowerElement>,
    /// `projections[n]`: level `n` onto the quotient level.
    pub projections: Vec<Matrix>,
    /// Whether `V_n = ker f_n + K v_n` with `ker f_n -> quotient` bijective.
    pub split: Vec<bool>,
}

fn functional_is_zero(f: &[Vector]) -> bool {
    f.iter().all(|r| r.iter().all(Scalar::is_zero))
}

/// For a compatible functional `f = (f_n)` on a surjective tower, finds
/// `v` with `f(v) != 0` and returns the tower `V_n / K v_n`, which is
/// identified with `ker f` levelwise.
pub fn kernel_tower(t: &Tower, f: &[Vector]) -> Result<KernelTower> {
    let field = t.field;
    if f.len() != t.levels.len() {
        return Err(Error::DimensionMismatch {
            context: "functional levels",
            expected: t.levels.len(),
            found: f.len(),
        });
    }
    for (n, row) in f.iter().enumerate() {
        if row.len() != t.rank(n) {
            return Err(Error::InconsistentFunctional { level: n });
        }
    }
    for n in 0..t.depth() {
        let pulled = t.maps[n].transpose().mul_vec(&f[n])?;
        if pulled != f[n + 1] {
            return Err(Error::InconsistentFunctional { level: n });
        }
    }
    if let Some(level) = t.first_non_surjective() {
        return Err(Error::NotSurjective { level });
    }
    if functional_is_zero(f) {
        let projections = t.levels.iter().map(|l| Matrix::identity(field, l.rank)).collect();
        return Ok(KernelTower {
            quotient: t.clone(),
            v: None,
            projections,
            split: vec![true; t.levels.len()],
        });
    }
    let deep = t.depth();
    let j = f[deep]
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::Invariant("functional vanishes at the deepest level of a surjective tower".into()))?;
    let v = TowerElement::from_deepest(t, unit_vector(field, t.rank(deep), j))?;

    let mut drop = Vec::with_capacity(t.levels.len());
    let mut projections = Vec::with_capacity(t.levels.len());
    let mut split = Vec::with_capacity(t.levels.len());
    for (n, vn) in v.coords.iter().enumerate() {
        let d = t.rank(n);
        let p = vn.iter().position(|x| !x.is_zero()).ok_or_else(|| Error::Invariant("v vanishes at a level".into()))?;
        let inv = vn[p].inv().expect("nonzero");
        // x |-> x - (x_p / v_p) v, then forget coordinate p.
        let mut q = Matrix::zeros(field, d - 1, d);
        for col in 0..d {
            let mut x = unit_vector(field, d, col);
            let c = &x[p] * &inv;
            for (xi, vi) in x.iter_mut().zip(vn) {
                *xi -= &(&c * vi);
            }
            let kept: Vec<Scalar> = x.into_iter().enumerate().filter(|(i, _)| *i != p).map(|(_, y)| y).collect();
            for (row, y) in kept.into_iter().enumerate() {
                q.set(row, col, y);
            }
        }
        let fv = crate::matrix::dot(&f[n], vn);
        let ker = Matrix::new(field, 1, d, f[n].clone())?.kernel_basis();
        let ok = !fv.is_zero() && ker.len() + 1 == d && {
            let restricted = if ker.is_empty() {
                Matrix::zeros(field, d - 1, 0)
            } else {
                q.mul(&Matrix::from_columns(field, d, &ker)?)?
            };
            restricted.is_invertible() || (d == 1 && restricted.shape() == (0, 0))
        };
        split.push(ok);
        drop.push(p);
        projections.push(q);
    }
    let ranks: Vec<usize> = (0..=deep).map(|n| t.rank(n) - 1).collect();
    let mut maps = Vec::with_capacity(deep);
    for n in 0..deep {
        let d = t.rank(n + 1);
        let lift_cols: Vec<Vector> = (0..d)
            .filter(|&i| i != drop[n + 1])
            .map(|i| unit_vector(field, d, i))
            .collect();
        let lift = if lift_cols.is_empty() {
            Matrix::zeros(field, d, 0)
        } else {
            Matrix::from_columns(field, d, &lift_cols)?
        };
        maps.push(projections[n].mul(&t.maps[n])?.mul(&lift)?);
    }
    let quotient = Tower::new(field, &ranks, maps)?;
    for n in 0..deep {
        // The induced maps must commute with the projections.
        if quotient.maps[n].mul(&projections[n + 1])? != projections[n].mul(&t.maps[n])? {
            return Err(Error::Invariant(format!("quotient map into level {n} is not induced")));
        }
    }
    Ok(KernelTower {
        quotient,
        v: Some(v),
        projections,
        split,
    })
}

/// A tower of algebras with algebra morphisms between levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraTower {
    pub tower: Tower,
    pub algebras: Vec<FinAlgebra>,
}

impl AlgebraTower {
    pub fn new(algebras: Vec<FinAlgebra>, maps: Vec<Matrix>) -> Result<Self> {
        let field = algebras.first().map(FinAlgebra::field).ok_or(Error::EmptyTower)?;
        let ranks: Vec<usize> = algebras.iter().map(FinAlgebra::dim).collect();
        let tower = Tower::new(field, &ranks, maps)?;
        let t = AlgebraTower { tower, algebras };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.algebras {
            a.validate()?;
        }
        for n in 0..self.tower.depth() {
            check_algebra_morphism(&self.algebras[n + 1], &self.algebras[n], &self.tower.maps[n])?;
        }
        Ok(())
    }

    /// `K[x]/(x^(n+1))` at level `n`.
    pub fn power_series(field: Field, depth: usize) -> Self {
        let algebras = (1..=depth + 1)
            .map(|n| FinAlgebra::truncated_polynomial(field, n).expect("n >= 1"))
            .collect();
        AlgebraTower {
            tower: Tower::power_series(field, depth),
            algebras,
        }
    }

    pub fn constant(algebra: &FinAlgebra, depth: usize) -> Self {
        AlgebraTower {
            tower: Tower::constant(algebra.field(), algebra.dim(), depth),
            algebras: vec![algebra.clone(); depth + 1],
        }
    }
}

/// Levelwise tensor product along the diagonal: level `n` is
/// `A_n (x) B_n`, maps are tensor products of maps.
pub fn completed_tensor(a: &AlgebraTower, b: &AlgebraTower) -> Result<AlgebraTower> {
    a.tower.field.check(b.tower.field)?;
    let len = a.algebras.len().min(b.algebras.len());
    let algebras = (0..len)
        .map(|n| a.algebras[n].tensor_product(&b.algebras[n]))
        .collect::<Result<Vec<_>>>()?;
    let maps = (0..len - 1)
        .map(|n| a.tower.maps[n].kron(&b.tower.maps[n]))
        .collect::<Result<Vec<_>>>()?;
    AlgebraTower::new(algebras, maps)
}

/// All elements of `GF(p)^dim`.
fn all_elements(field: Field, dim: usize) -> Result<Vec<Vector>> {
    let p = match field {
        Field::Prime(p) => p,
        Field::Rational => return Err(Error::Precondition("enumeration needs a finite field".into())),
    };
    let total = (p as usize).checked_pow(dim as u32).filter(|&n| n <= 1 << 16).ok_or_else(|| {
        Error::Precondition("target algebra is too large to enumerate".into())
    })?;
    Ok((0..total)
        .map(|mut k| {
            (0..dim)
                .map(|_| {
                    let r = (k % p as usize) as u64;
                    k /= p as usize;
                    Scalar::modular(r, p)
                })
                .collect()
        })
        .collect())
}

/// Number of algebra morphisms `K[x]/(x^k) -> C`, by trying every image of `x`.
pub fn count_truncated_morphisms(k: usize, c: &FinAlgebra) -> Result<usize> {
    let field = c.field();
    let src = FinAlgebra::truncated_polynomial(field, k)?;
    let mut count = 0;
    for x in all_elements(field, c.dim())? {
        let cols: Vec<Vector> = (0..k).map(|i| c.pow(&x, i as u64)).collect();
        let m = Matrix::from_columns(field, c.dim(), &cols)?;
        if check_algebra_morphism(&src, c, &m).is_ok() {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of algebra morphisms `K[x]/(x^k) (x) K[y]/(y^l) -> C`, by trying
/// every pair of images of `x (x) 1` and `1 (x) y`.
pub fn count_tensor_morphisms(k: usize, l: usize, c: &FinAlgebra) -> Result<usize> {
    let field = c.field();
    let src = FinAlgebra::truncated_polynomial(field, k)?.tensor_product(&FinAlgebra::truncated_polynomial(field, l)?)?;
    let elems = all_elements(field, c.dim())?;
    let mut count = 0;
    for x in &elems {
        let xs: Vec<Vector> = (0..k).map(|i| c.pow(x, i as u64)).collect();
        for y in &elems {
            let ys: Vec<Vector> = (0..l).map(|j| c.pow(y, j as u64)).collect();
            let cols: Vec<Vector> = (0..k)
                .flat_map(|i| (0..l).map(move |j| (i, j)))
                .map(|(i, j)| c.mul(&xs[i], &ys[j]))
                .collect();
            let m = Matrix::from_columns(field, c.dim(), &cols)?;
            if check_algebra_morphism(&src, c, &m).is_ok() {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Truncated power series product, keeping `len` coefficients.
pub fn ps_mul(a: &[Scalar], b: &[Scalar], len: usize) -> Vector {
    let field = a.first().or(b.first()).map_or(Field::Rational, Scalar::field);
    let mut out = vec![field.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += &(x * y);
        }
    }
    out
}

/// Inverse of a power series with invertible constant term, to `len`
/// coefficients.
pub fn ps_invert(u: &[Scalar], len: usize) -> Result<Vector> {
    let c0 = u.first().ok_or(Error::NotUnit)?;
    let inv0 = c0.inv().ok_or(Error::NotUnit)?;
    let field = c0.field();
    let mut out: Vector = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            out.push(inv0.clone());
            continue;
        }
        let mut acc = field.zero();
        for k in 1..=n.min(u.len() - 1) {
            acc += &(&u[k] * &out[n - k]);
        }
        out.push(-(&acc * &inv0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn q(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn stabilization_examples() {
        let c = Tower::constant(Q, 2, 3);
        let s = stabilized_images(&c).unwrap();
        assert_eq!(s.tower, c);
        assert!(s.prefix_stable);
        let t = Tower::new(Q, &[1, 2, 3], vec![truncation(Q, 1, 2), truncation(Q, 2, 3)]).unwrap();
        assert_eq!(stabilized_images(&t).unwrap().tower.maps(), t.maps());
        // level 2 -> level 1 has rank 1, so level 1 and level 0 shrink.
        let r1 = Matrix::from_i64(Q, &[&[1, 0], &[0, 0]]);
        let t = Tower::new(Q, &[2, 2, 2], vec![Matrix::identity(Q, 2), r1]).unwrap();
        let s = stabilized_images(&t).unwrap();
        assert_eq!(s.tower.ranks(), vec![1, 1, 2]);
        assert!(s.tower.is_surjective());
        assert!(!s.prefix_stable);
    }

    #[test]
    fn decomposition_of_power_series_and_constant() {
        let d = product_decomposition(&Tower::power_series(Q, 5)).unwrap();
        assert_eq!(d.dims, vec![1; 6]);
        let d = product_decomposition(&Tower::constant(Q, 3, 4)).unwrap();
        assert_eq!(d.dims, vec![3, 0, 0, 0, 0]);
    }

    #[test]
    fn decomposition_rejects_non_surjective() {
        let t = Tower::new(Q, &[2, 1], vec![Matrix::from_i64(Q, &[&[1], &[0]])]).unwrap();
        assert_eq!(product_decomposition(&t).unwrap_err(), Error::NotSurjective { level: 0 });
    }

    #[test]
    fn dual_of_power_series() {
        let t = Tower::power_series(Q, 4);
        let d = dual_tower(&t).unwrap();
        assert_eq!(d.levels.iter().map(|l| l.rank).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        assert!(d.is_injective());
        assert_eq!(d.dual().unwrap().maps(), t.maps());
        assert!(reflexivity_roundtrip(&t).unwrap());
        assert!(reflexivity_roundtrip(&Tower::zero(Q, 3)).unwrap());
    }

    #[test]
    fn kernel_tower_examples() {
        let t = Tower::power_series(Q, 4);
        let zero: Vec<Vector> = t.levels().iter().map(|l| vec![Q.zero(); l.rank]).collect();
        assert_eq!(kernel_tower(&t, &zero).unwrap().quotient, t);

        let c = Tower::constant(Q, 1, 3);
        let id: Vec<Vector> = vec![q(&[1]); 4];
        let k = kernel_tower(&c, &id).unwrap();
        assert_eq!(k.quotient.ranks(), vec![0; 4]);
        assert!(k.split.iter().all(|&b| b));

        // constant-term evaluation on power series: the quotient is the
        // power-series tower shifted by one level.
        let f: Vec<Vector> = t.levels().iter().map(|l| unit_vector(Q, l.rank, 0)).collect();
        let k = kernel_tower(&t, &f).unwrap();
        assert_eq!(k.quotient.ranks(), vec![0, 1, 2, 3, 4]);
        let shifted = Tower::power_series(Q, 3);
        assert_eq!(&k.quotient.maps()[1..], shifted.maps());
        assert!(k.split.iter().all(|&b| b));
        assert_eq!(k.v.unwrap().coords[4], unit_vector(Q, 5, 0));
    }

    #[test]
    fn inconsistent_functional() {
        let t = Tower::power_series(Q, 2);
        let f = vec![q(&[1]), q(&[0, 1]), q(&[0, 1, 0])];
        assert_eq!(kernel_tower(&t, &f).unwrap_err(), Error::InconsistentFunctional { level: 0 });
    }

    #[test]
    fn power_series_arithmetic() {
        let inv = ps_invert(&q(&[1, -1]), 5).unwrap();
        assert_eq!(inv, q(&[1, 1, 1, 1, 1]));
        assert_eq!(ps_mul(&q(&[1, 1]), &q(&[1, -1]), 3), q(&[1, 0, -1]));
        let u = q(&[1, 1, 1]);
        let v = ps_invert(&u, 6).unwrap();
        assert_eq!(ps_mul(&u, &v, 6), q(&[1, 0, 0, 0, 0, 0]));
        assert_eq!(ps_invert(&q(&[0, 1]), 3).unwrap_err(), Error::NotUnit);
    }

    #[test]
    fn completed_tensor_dims() {
        let a = AlgebraTower::power_series(Q, 4);
        let t = completed_tensor(&a, &a).unwrap();
        assert_eq!(t.tower.ranks(), vec![1, 4, 9, 16, 25]);
        let k = AlgebraTower::constant(&FinAlgebra::base(Q), 4);
        assert_eq!(completed_tensor(&k, &a).unwrap().tower.maps(), a.tower.maps());
    }

    #[test]
    fn universal_counts_small() {
        let f = Field::Prime(2);
        let c = FinAlgebra::truncated_polynomial(f, 3).unwrap();
        let (a, b) = (count_truncated_morphisms(2, &c).unwrap(), count_truncated_morphisms(3, &c).unwrap());
        // x |-> 0, x^2 for k = 2; x |-> 0, x, x^2, x+x^2 for k = 3
        assert_eq!((a, b), (2, 4));
        assert_eq!(count_tensor_morphisms(2, 3, &c).unwrap(), a * b);
    }

    #[test]
    fn json_round_trip() {
        let t = Tower::power_series(Field::Prime(3), 3);
        let s = serde_json::to_string(&t).unwrap();
        let back: Tower = serde_json::from_str(&s).unwrap();
        assert_eq!(back.maps(), t.maps());
    }
}
