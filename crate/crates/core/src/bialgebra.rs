//! Finite-dimensional coalgebras and bialgebras by structure constants,
//! their duals, group and function bialgebras, and a sound isomorphism
//! search.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{check_algebra_morphism, FinAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{kron_vec, unit_vector, Matrix, Vector};
use crate::scalar::{Field, Rational, Scalar};

/// `comult[i]` lists `(j, k, c)` with `Delta(e_i) = sum c e_j (x) e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCoalgebra {
    field: Field,
    dim: usize,
    comult: Vec<Vec<(usize, usize, Scalar)>>,
    counit: Vector,
}

fn normalize_terms(terms: Vec<(usize, usize, Scalar)>) -> Vec<(usize, usize, Scalar)> {
    let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    for (j, k, c) in terms {
        match acc.get_mut(&(j, k)) {
            Some(x) => *x += &c,
            None => {
                acc.insert((j, k), c);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((j, k), c)| (j, k, c)).collect()
}

impl FinCoalgebra {
    pub fn new(field: Field, comult: Vec<Vec<(usize, usize, Scalar)>>, counit: Vector) -> Result<Self> {
        let dim = comult.len();
        if counit.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "counit length",
                expected: dim,
                found: counit.len(),
            });
        }
        for terms in &comult {
            for (j, k, c) in terms {
                field.check(c.field())?;
                if *j >= dim || *k >= dim {
                    return Err(Error::InvalidStructure("comultiplication index out of range".into()));
                }
            }
        }
        for c in &counit {
            field.check(c.field())?;
        }
        let c = FinCoalgebra {
            field,
            dim,
            comult: comult.into_iter().map(normalize_terms).collect(),
            counit,
        };
        c.validate()?;
        Ok(c)
    }

    /// From a `dim^2 x dim` matrix, column `i` being `Delta(e_i)`.
    pub fn from_matrix(comult: &Matrix, counit: Vector) -> Result<Self> {
        let dim = comult.cols();
        if comult.rows() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "comultiplication rows",
                expected: dim * dim,
                found: comult.rows(),
            });
        }
        let terms = (0..dim)
            .map(|i| {
                (0..dim * dim)
                    .filter(|&r| !comult.get(r, i).is_zero())
                    .map(|r| (r / dim, r % dim, comult.get(r, i).clone()))
                    .collect()
            })
            .collect();
        FinCoalgebra::new(comult.field(), terms, counit)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn counit(&self) -> &Vector {
        &self.counit
    }

    pub fn terms(&self, i: usize) -> &[(usize, usize, Scalar)] {
        &self.comult[i]
    }

    /// `Delta(x)` as a vector in `C (x) C`.
    pub fn apply(&self, x: &[Scalar]) -> Vector {
        let d = self.dim;
        let mut out = vec![self.field.zero(); d * d];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, k, c) in &self.comult[i] {
                out[j * d + k] += &(xi * c);
            }
        }
        out
    }

    pub fn comult_matrix(&self) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|i| self.apply(&unit_vector(self.field, self.dim, i)))
            .collect();
        if cols.is_empty() {
            return Matrix::zeros(self.field, 0, 0);
        }
        Matrix::from_columns(self.field, self.dim * self.dim, &cols).expect("shape")
    }

    pub fn counit_matrix(&self) -> Matrix {
        Matrix::new(self.field, 1, self.dim, self.counit.clone()).expect("shape")
    }

    pub fn is_cocommutative(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            let v = self.apply(&unit_vector(self.field, d, i));
            (0..d).all(|j| (0..d).all(|k| v[j * d + k] == v[k * d + j]))
        })
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            let mut left: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
            let mut right: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
            for (j, k, c) in &self.comult[i] {
                for (a, b, e) in &self.comult[*j] {
                    *left.entry((*a, *b, *k)).or_insert_with(|| self.field.zero()) += &(c * e);
                }
                for (a, b, e) in &self.comult[*k] {
                    *right.entry((*j, *a, *b)).or_insert_with(|| self.field.zero()) += &(c * e);
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            if left != right {
                return Err(Error::InvalidStructure(format!("coassociativity fails on basis vector {i}")));
            }
            let mut l = vec![self.field.zero(); d];
            let mut r = vec![self.field.zero(); d];
            for (j, k, c) in &self.comult[i] {
                l[*k] += &(&self.counit[*j] * c);
                r[*j] += &(&self.counit[*k] * c);
            }
            let e = unit_vector(self.field, d, i);
            if l != e || r != e {
                return Err(Error::InvalidStructure(format!("counit law fails on basis vector {i}")));
            }
        }
        Ok(())
    }
}

/// `C*` with the convolution product: `e*_i e*_j = sum_k [e_i (x) e_j] Delta(e_k) e*_k`.
pub fn dual_algebra(c: &FinCoalgebra) -> Result<FinAlgebra> {
    let d = c.dim;
    let mut table = vec![vec![c.field.zero(); d]; d * d];
    for k in 0..d {
        for (i, j, x) in &c.comult[k] {
            table[i * d + j][k] = x.clone();
        }
    }
    FinAlgebra::from_flat(c.field, d, table, c.counit.clone())
}

/// `A*` with `Delta(e*_k) = sum_{i,j} (e_i e_j)_k e*_i (x) e*_j`.
pub fn dual_coalgebra(a: &FinAlgebra) -> Result<FinCoalgebra> {
    let d = a.dim();
    let mut comult = vec![Vec::new(); d];
    for i in 0..d {
        for j in 0..d {
            for (k, x) in a.basis_product(i, j).iter().enumerate() {
                if !x.is_zero() {
                    comult[k].push((i, j, x.clone()));
                }
            }
        }
    }
    FinCoalgebra::new(a.field(), comult, a.unit().clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinBialgebra {
    algebra: FinAlgebra,
    coalgebra: FinCoalgebra,
}

impl FinBialgebra {
    pub fn new(algebra: FinAlgebra, coalgebra: FinCoalgebra) -> Result<Self> {
        let b = FinBialgebra { algebra, coalgebra };
        b.validate()?;
        Ok(b)
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.algebra
    }

    pub fn coalgebra(&self) -> &FinCoalgebra {
        &self.coalgebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn is_commutative(&self) -> bool {
        self.algebra.is_commutative()
    }

    pub fn is_cocommutative(&self) -> bool {
        self.coalgebra.is_cocommutative()
    }

    /// Compatibility: `Delta` and `epsilon` are algebra morphisms.
    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let c = &self.coalgebra;
        a.field().check(c.field)?;
        if a.dim() != c.dim {
            return Err(Error::DimensionMismatch {
                context: "algebra vs coalgebra dimension",
                expected: a.dim(),
                found: c.dim,
            });
        }
        a.validate()?;
        c.validate()?;
        let aa = a.tensor_product(a)?;
        check_algebra_morphism(a, &aa, &c.comult_matrix())
            .map_err(|e| Error::InvalidStructure(format!("comultiplication: {e}")))?;
        check_algebra_morphism(a, &FinAlgebra::base(a.field()), &c.counit_matrix())
            .map_err(|e| Error::InvalidStructure(format!("counit: {e}")))?;
        Ok(())
    }

    /// Transports the structure to the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<FinBialgebra> {
        let pi = p.inverse().ok_or_else(|| Error::Precondition("change of basis is not invertible".into()))?;
        let mult = pi.mul(&self.algebra.mult_matrix())?.mul(&p.kron(p)?)?;
        let unit = pi.mul_vec(self.algebra.unit())?;
        let comult = pi.kron(&pi)?.mul(&self.coalgebra.comult_matrix())?.mul(p)?;
        let counit = self.coalgebra.counit_matrix().mul(p)?.row(0).to_vec();
        FinBialgebra::new(FinAlgebra::from_matrix(&mult, unit)?, FinCoalgebra::from_matrix(&comult, counit)?)
    }

    pub fn tensor_product(&self, other: &FinBialgebra) -> Result<FinBialgebra> {
        let (d1, d2) = (self.dim(), other.dim());
        let algebra = self.algebra.tensor_product(&other.algebra)?;
        let d = d1 * d2;
        let mut comult = vec![Vec::new(); d];
        for i in 0..d1 {
            for k in 0..d2 {
                let mut terms = Vec::new();
                for (a, b, x) in self.coalgebra.terms(i) {
                    for (c, e, y) in other.coalgebra.terms(k) {
                        terms.push((a * d2 + c, b * d2 + e, x * y));
                    }
                }
                comult[i * d2 + k] = terms;
            }
        }
        let counit = kron_vec(&self.coalgebra.counit, &other.coalgebra.counit);
        FinBialgebra::new(algebra, FinCoalgebra::new(self.field(), comult, counit)?)
    }
}

/// Swaps algebra and coalgebra through transposition.
pub fn dual_bialgebra(b: &FinBialgebra) -> Result<FinBialgebra> {
    let algebra = dual_algebra(&b.coalgebra)?;
    let coalgebra = dual_coalgebra(&b.algebra)?;
    FinBialgebra::new(algebra, coalgebra).map_err(|e| Error::Invariant(format!("dual bialgebra: {e}")))
}

/// Whether `f: A -> B` (matrix `dim B x dim A`) preserves all structure.
pub fn is_bialgebra_morphism(a: &FinBialgebra, b: &FinBialgebra, f: &Matrix) -> Result<bool> {
    if f.shape() != (b.dim(), a.dim()) {
        return Ok(false);
    }
    if check_algebra_morphism(&a.algebra, &b.algebra, f).is_err() {
        return Ok(false);
    }
    let lhs = b.coalgebra.comult_matrix().mul(f)?;
    let rhs = f.kron(f)?.mul(&a.coalgebra.comult_matrix())?;
    if lhs != rhs {
        return Ok(false);
    }
    Ok(b.coalgebra.counit_matrix().mul(f)? == a.coalgebra.counit_matrix())
}

/// For a bialgebra morphism `f: A -> B*`, the morphism `B -> A*` given by
/// `b |-> (a |-> f(a)(b))`. In dual bases this is the transpose.
pub fn transpose_bialgebra_morphism(a: &FinBialgebra, b: &FinBialgebra, f: &Matrix) -> Result<Matrix> {
    let b_dual = dual_bialgebra(b)?;
    if !is_bialgebra_morphism(a, &b_dual, f)? {
        return Err(Error::NotAMorphism("input is not a bialgebra morphism into the dual".into()));
    }
    let t = f.transpose();
    let a_dual = dual_bialgebra(a)?;
    if !is_bialgebra_morphism(b, &a_dual, &t)? {
        return Err(Error::Invariant("transpose is not a bialgebra morphism".into()));
    }
    Ok(t)
}

/// A finite group by its Cayley table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct GroupTable {
    order: usize,
    table: Vec<Vec<usize>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<GroupJson> for GroupTable {
    type Error = Error;

    fn try_from(g: GroupJson) -> Result<Self> {
        GroupTable::new(g.order, g.table)
    }
}

impl From<GroupTable> for GroupJson {
    fn from(g: GroupTable) -> Self {
        GroupJson {
            order: g.order,
            table: g.table,
        }
    }
}

impl GroupTable {
    pub fn new(order: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        if order == 0 || table.len() != order || table.iter().any(|r| r.len() != order) {
            return Err(Error::NotAGroup("table must be order x order".into()));
        }
        if table.iter().flatten().any(|&x| x >= order) {
            return Err(Error::NotAGroup("entry out of range".into()));
        }
        for x in 0..order {
            if table[0][x] != x || table[x][0] != x {
                return Err(Error::NotAGroup("element 0 is not the identity".into()));
            }
            if !(0..order).any(|y| table[x][y] == 0 && table[y][x] == 0) {
                return Err(Error::NotAGroup(format!("element {x} has no inverse")));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!("associativity fails on ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(GroupTable { order, table })
    }

    pub fn trivial() -> Self {
        GroupTable::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable { order: n, table }
    }

    /// `Z/2 x Z/2` with `(a, b)` at index `2a + b`.
    pub fn klein() -> Self {
        let table = (0..4).map(|x: usize| (0..4).map(|y: usize| x ^ y).collect()).collect();
        GroupTable { order: 4, table }
    }

    /// Permutations of three letters, identity first, composed as functions.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        GroupTable { order: 6, table }
    }

    /// `Z2`, `Z3`, `Z2xZ2`, `S3`, or `Zn`.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "1" | "trivial" => Some(GroupTable::trivial()),
            "Z2xZ2" | "V4" | "klein" => Some(GroupTable::klein()),
            "S3" => Some(GroupTable::symmetric3()),
            _ => name
                .strip_prefix('Z')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| (1..=64).contains(&n))
                .map(GroupTable::cyclic),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// `K[G]`: basis the group elements, each grouplike.
pub fn group_bialgebra(field: Field, g: &GroupTable) -> Result<FinBialgebra> {
    let n = g.order;
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(unit_vector(field, n, g.mul(a, b)));
        }
    }
    let algebra = FinAlgebra::from_flat(field, n, table, unit_vector(field, n, 0))?;
    let comult = (0..n).map(|a| vec![(a, a, field.one())]).collect();
    let coalgebra = FinCoalgebra::new(field, comult, vec![field.one(); n])?;
    FinBialgebra::new(algebra, coalgebra)
}

/// `K^G`: pointwise product, `Delta(delta_g) = sum_{hk = g} delta_h (x) delta_k`.
pub fn function_bialgebra(field: Field, g: &GroupTable) -> Result<FinBialgebra> {
    let n = g.order;
    let algebra = FinAlgebra::split(field, n);
    let mut comult = vec![Vec::new(); n];
    for h in 0..n {
        for k in 0..n {
            comult[g.mul(h, k)].push((h, k, field.one()));
        }
    }
    let coalgebra = FinCoalgebra::new(field, comult, unit_vector(field, n, 0))?;
    FinBialgebra::new(algebra, coalgebra)
}

/// Grouplike elements: `Delta(g) = g (x) g`, `epsilon(g) = 1`. Every such
/// `g` is a common eigenvector of `T_i = (e*_i (x) id) Delta` with
/// eigenvalue `g_i`, so candidates come from eigenvalue choices. Returns
/// `None` when eigenvalues cannot be computed.
pub fn grouplikes(b: &FinBialgebra) -> Result<Option<Vec<Vector>>> {
    let field = b.field();
    let d = b.dim();
    let c = &b.coalgebra;
    let ops: Vec<Matrix> = (0..d)
        .map(|i| {
            let mut t = Matrix::zeros(field, d, d);
            for x in 0..d {
                for (j, k, coeff) in c.terms(x) {
                    if *j == i {
                        let cur = t.get(*k, x).clone();
                        t.set(*k, x, &cur + coeff);
                    }
                }
            }
            t
        })
        .collect();
    let mut roots = Vec::with_capacity(d);
    for t in &ops {
        match eigenvalues(t)? {
            Some(r) => roots.push(r),
            None => return Ok(None),
        }
    }
    let mut found = Vec::new();
    let mut choice: Vec<Scalar> = Vec::with_capacity(d);
    search_grouplikes(b, &ops, &roots, &mut choice, &mut found)?;
    Ok(Some(found))
}

fn search_grouplikes(
    b: &FinBialgebra,
    ops: &[Matrix],
    roots: &[Vec<Scalar>],
    choice: &mut Vec<Scalar>,
    found: &mut Vec<Vector>,
) -> Result<()> {
    let field = b.field();
    let d = b.dim();
    let i = choice.len();
    if i == d {
        let g = choice.clone();
        if b.coalgebra.apply(&g) == kron_vec(&g, &g) && crate::matrix::dot(&g, b.coalgebra.counit()).is_one() {
            found.push(g);
        }
        return Ok(());
    }
    for r in &roots[i] {
        // The candidate must stay in the common eigenspace chosen so far.
        choice.push(r.clone());
        let mut stacked: Option<Matrix> = None;
        for (k, lambda) in choice.iter().enumerate() {
            let m = ops[k].sub(&Matrix::identity(field, d).scale(lambda))?;
            stacked = Some(match stacked {
                None => m,
                Some(s) => s.vstack(&m)?,
            });
        }
        if !stacked.expect("nonempty").kernel_basis().is_empty() {
            search_grouplikes(b, ops, roots, choice, found)?;
        }
        choice.pop();
    }
    Ok(())
}

/// Distinct eigenvalues in the base field. Over `GF(p)` every element is
/// tried (for `p` up to 2^16); over `Q` the characteristic polynomial is
/// built by the Faddeev-LeVerrier recursion and its rational roots found.
pub fn eigenvalues(m: &Matrix) -> Result<Option<Vec<Scalar>>> {
    let field = m.field();
    let n = m.rows();
    match field {
        Field::Prime(p) => {
            if p > 1 << 16 {
                return Ok(None);
            }
            let id = Matrix::identity(field, n);
            Ok(Some(
                (0..p)
                    .map(|x| Scalar::modular(x, p))
                    .filter(|x| m.sub(&id.scale(x)).map(|s| s.rank() < n).unwrap_or(false))
                    .collect(),
            ))
        }
        Field::Rational => {
            let poly = characteristic_polynomial(m)?;
            Ok(Some(rational_roots(&poly)))
        }
    }
}

/// Monic characteristic polynomial, ascending coefficients.
pub fn characteristic_polynomial(m: &Matrix) -> Result<Vector> {
    let field = m.field();
    if field != Field::Rational {
        return Err(Error::Precondition("Faddeev-LeVerrier needs characteristic zero".into()));
    }
    let n = m.rows();
    let mut coeffs = vec![field.zero(); n + 1];
    coeffs[n] = field.one();
    let id = Matrix::identity(field, n);
    let mut mk = Matrix::zeros(field, n, n);
    for k in 1..=n {
        mk = m.mul(&mk)?.add(&id.scale(&coeffs[n + 1 - k]))?;
        let am = m.mul(&mk)?;
        let tr = (0..n).fold(field.zero(), |acc, i| &acc + am.get(i, i));
        coeffs[n - k] = -(&tr / &field.from_i64(k as i64));
    }
    Ok(coeffs)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rational roots of a polynomial with rational coefficients (ascending).
pub fn rational_roots(poly: &[Scalar]) -> Vec<Scalar> {
    let rats: Vec<Rational> = poly.iter().filter_map(|c| c.as_rational().cloned()).collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(&r.denom()));
    let mut ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let mut roots = Vec::new();
    let zeros = ints.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push(Field::Rational.zero());
        ints.drain(..zeros);
    }
    if ints.len() <= 1 {
        return roots;
    }
    let lead = ints.last().expect("nonempty").clone();
    let eval = |x: &Rational| -> bool {
        let mut acc = Scalar::Rational(Rational::from_integer(0));
        for c in ints.iter().rev() {
            acc = &(&acc * &Scalar::Rational(x.clone())) + &Scalar::Rational(Rational::from_bigints(c.clone(), BigInt::one()));
        }
        acc.is_zero()
    };
    let mut seen = std::collections::BTreeSet::new();
    for p in divisors(&ints[0]) {
        for q in divisors(&lead) {
            for sign in [1, -1] {
                let x = Rational::from_bigints(&p * sign, q.clone());
                if seen.insert(x.clone()) && eval(&x) {
                    roots.push(Scalar::Rational(x));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.as_rational().cmp(&b.as_rational()));
    roots
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

const MAX_PERMUTED_DIM: usize = 6;

/// Sound but incomplete search for a bialgebra isomorphism `b1 -> b2`:
/// the identity, then matchings of grouplike bases, then permutations of
/// the standard basis. Every returned map is verified.
pub fn bialgebra_isomorphic(b1: &FinBialgebra, b2: &FinBialgebra) -> Result<Option<Matrix>> {
    if b1.dim() != b2.dim() || b1.field() != b2.field() {
        return Ok(None);
    }
    let field = b1.field();
    let d = b1.dim();
    let accept = |m: &Matrix| -> Result<bool> { Ok(m.is_invertible() && is_bialgebra_morphism(b1, b2, m)?) };
    let id = Matrix::identity(field, d);
    if accept(&id)? {
        return Ok(Some(id));
    }
    if d > MAX_PERMUTED_DIM {
        return Ok(None);
    }
    if let (Some(g1), Some(g2)) = (grouplikes(b1)?, grouplikes(b2)?) {
        if g1.len() == d && g2.len() == d {
            let m1 = Matrix::from_columns(field, d, &g1)?;
            if let Some(inv1) = m1.inverse() {
                for p in permutations(d) {
                    let cols: Vec<Vector> = p.iter().map(|&i| g2[i].clone()).collect();
                    let m = Matrix::from_columns(field, d, &cols)?.mul(&inv1)?;
                    if accept(&m)? {
                        return Ok(Some(m));
                    }
                }
            }
        }
    }
    for p in permutations(d) {
        let mut m = Matrix::zeros(field, d, d);
        for (j, &i) in p.iter().enumerate() {
            m.set(i, j, field.one());
        }
        if accept(&m)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// A named bialgebra with the characteristics it is valid for. `gate`
/// names an integer that must be invertible in the field for the checks
/// attached to this fixture.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub bialgebra: FinBialgebra,
    pub gate: Option<u64>,
}

impl Fixture {
    pub fn applies_to(&self, field: Field) -> bool {
        self.gate.is_none_or(|n| field.is_invertible(n as i64))
    }
}

pub const FIXTURE_GROUPS: [&str; 4] = ["Z2", "Z3", "Z2xZ2", "S3"];

/// `K`, `K[G]` and `K^G` for `G` in Z2, Z3, Z2xZ2, S3.
pub fn fixtures(field: Field) -> Result<Vec<Fixture>> {
    let mut out = vec![Fixture {
        name: "K".into(),
        bialgebra: group_bialgebra(field, &GroupTable::trivial())?,
        gate: None,
    }];
    for name in FIXTURE_GROUPS {
        let g = GroupTable::by_name(name).expect("built-in group");
        out.push(Fixture {
            name: format!("K[{name}]"),
            bialgebra: group_bialgebra(field, &g)?,
            gate: None,
        });
        out.push(Fixture {
            name: format!("K^{name}"),
            bialgebra: function_bialgebra(field, &g)?,
            gate: None,
        });
    }
    Ok(out)
}

/// A morphism `source -> target*` between fixtures.
#[derive(Clone, Debug)]
pub struct FixtureMorphism {
    pub name: String,
    pub source: FinBialgebra,
    pub target: FinBialgebra,
    pub map: Matrix,
    pub gate: Option<u64>,
}

/// `a |-> epsilon(a) 1`, which is a morphism between any two bialgebras.
pub fn trivial_morphism(a: &FinBialgebra, b: &FinBialgebra) -> Result<Matrix> {
    let unit = Matrix::from_columns(a.field(), b.dim(), &[b.algebra().unit().clone()])?;
    unit.mul(&a.coalgebra().counit_matrix())
}

/// `K[G] -> K^G`, `g |-> (h |-> <g, h>)` for a bicharacter with values
/// `+-1`; for `Z2` this is the sign character.
fn sign_pairing(field: Field, g: &GroupTable, pairing: impl Fn(usize, usize) -> bool) -> Matrix {
    let n = g.order();
    let mut m = Matrix::zeros(field, n, n);
    for a in 0..n {
        for h in 0..n {
            m.set(h, a, if pairing(a, h) { -field.one() } else { field.one() });
        }
    }
    m
}

/// Morphisms `A -> B*` over all fixtures: the trivial morphism for every
/// pair, the identity of `K[G]` into its double dual, and the sign pairings
/// of `Z2` and `Z2xZ2`.
pub fn fixture_morphisms(field: Field) -> Result<Vec<FixtureMorphism>> {
    let fx = fixtures(field)?;
    let mut out = Vec::new();
    for a in &fx {
        for b in &fx {
            let bd = dual_bialgebra(&b.bialgebra)?;
            out.push(FixtureMorphism {
                name: format!("trivial {} -> ({})*", a.name, b.name),
                source: a.bialgebra.clone(),
                target: b.bialgebra.clone(),
                map: trivial_morphism(&a.bialgebra, &bd)?,
                gate: None,
            });
        }
    }
    for name in FIXTURE_GROUPS {
        let g = GroupTable::by_name(name).expect("built-in group");
        let kg = group_bialgebra(field, &g)?;
        out.push(FixtureMorphism {
            name: format!("identity K[{name}] -> (K[{name}]*)*"),
            source: kg.clone(),
            target: dual_bialgebra(&kg)?,
            map: Matrix::identity(field, g.order()),
            gate: None,
        });
    }
    let z2 = GroupTable::cyclic(2);
    out.push(FixtureMorphism {
        name: "sign K[Z2] -> (K[Z2])*".into(),
        source: group_bialgebra(field, &z2)?,
        target: group_bialgebra(field, &z2)?,
        map: sign_pairing(field, &z2, |a, h| a == 1 && h == 1),
        gate: None,
    });
    let v4 = GroupTable::klein();
    out.push(FixtureMorphism {
        name: "pairing K[Z2xZ2] -> (K[Z2xZ2])*".into(),
        source: group_bialgebra(field, &v4)?,
        target: group_bialgebra(field, &v4)?,
        map: sign_pairing(field, &v4, |a, h| ((a & h).count_ones() % 2) == 1),
        gate: None,
    });
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct BialgebraJson {
    dim: usize,
    mult: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
    comult: Vec<Vec<(usize, usize, Scalar)>>,
    counit: Vec<Scalar>,
}

impl Serialize for FinBialgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        BialgebraJson {
            dim: d,
            mult: (0..d)
                .map(|i| (0..d).map(|j| self.algebra.basis_product(i, j).clone()).collect())
                .collect(),
            unit: self.algebra.unit().clone(),
            comult: self.coalgebra.comult.clone(),
            counit: self.coalgebra.counit.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinBialgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BialgebraJson::deserialize(d)?;
        if raw.mult.len() != raw.dim {
            return Err(D::Error::custom(Error::DimensionMismatch {
                context: "bialgebra dim",
                expected: raw.dim,
                found: raw.mult.len(),
            }));
        }
        let field = raw.unit.first().map_or(Field::Rational, Scalar::field);
        let algebra = FinAlgebra::new(field, raw.mult, raw.unit).map_err(D::Error::custom)?;
        let coalgebra = FinCoalgebra::new(field, raw.comult, raw.counit).map_err(D::Error::custom)?;
        FinBialgebra::new(algebra, coalgebra).map_err(D::Error::custom)
    }
}

impl FinBialgebra {
    /// Moves every structure constant into `field`.
    pub fn into_field(&self, field: Field) -> Result<FinBialgebra> {
        let mult = self.algebra.mult_matrix().into_field(field)?;
        let unit = self.algebra.unit().iter().cloned().map(|x| x.into_field(field)).collect::<Result<Vec<_>>>()?;
        let comult = self.coalgebra.comult_matrix().into_field(field)?;
        let counit = self.coalgebra.counit.iter().cloned().map(|x| x.into_field(field)).collect::<Result<Vec<_>>>()?;
        FinBialgebra::new(FinAlgebra::from_matrix(&mult, unit)?, FinCoalgebra::from_matrix(&comult, counit)?)
    }
}
