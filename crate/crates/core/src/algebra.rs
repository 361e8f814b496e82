//! Finite-dimensional algebras by structure constants, commutative test
//! algebras, and finite universes of test algebras closed under composition.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{kron_vec, span_basis, unit_vector, Matrix, Vector};
use crate::module::FinModule;
use crate::scalar::{Field, Scalar};

/// An associative unital algebra. `table[i * dim + j]` is `e_i e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAlgebra {
    field: Field,
    dim: usize,
    table: Vec<Vector>,
    unit: Vector,
}

impl FinAlgebra {
    /// Builds and validates an algebra from `table[i][j] = e_i e_j`.
    pub fn new(field: Field, table: Vec<Vec<Vector>>, unit: Vector) -> Result<Self> {
        let dim = table.len();
        let mut flat = Vec::with_capacity(dim * dim);
        for row in table {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "multiplication table row",
                    expected: dim,
                    found: row.len(),
                });
            }
            flat.extend(row);
        }
        Self::from_flat(field, dim, flat, unit)
    }

    pub fn from_flat(field: Field, dim: usize, table: Vec<Vector>, unit: Vector) -> Result<Self> {
        if table.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "multiplication table",
                expected: dim * dim,
                found: table.len(),
            });
        }
        for v in table.iter().chain(std::iter::once(&unit)) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "structure constant vector",
                    expected: dim,
                    found: v.len(),
                });
            }
            for x in v {
                field.check(x.field())?;
            }
        }
        let a = FinAlgebra {
            field,
            dim,
            table,
            unit,
        };
        a.validate()?;
        Ok(a)
    }

    /// From a `dim x dim^2` multiplication matrix (column `i * dim + j` is `e_i e_j`).
    pub fn from_matrix(mult: &Matrix, unit: Vector) -> Result<Self> {
        let dim = mult.rows();
        if mult.cols() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "multiplication matrix columns",
                expected: dim * dim,
                found: mult.cols(),
            });
        }
        Self::from_flat(mult.field(), dim, mult.columns(), unit)
    }

    /// The base field as a one-dimensional algebra.
    pub fn base(field: Field) -> Self {
        FinAlgebra {
            field,
            dim: 1,
            table: vec![vec![field.one()]],
            unit: vec![field.one()],
        }
    }

    /// `K[x]/(x^n)` on the basis `1, x, ..., x^(n-1)`.
    pub fn truncated_polynomial(field: Field, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidStructure("K[x]/(x^0) is the zero ring".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(if i + j < n {
                    unit_vector(field, n, i + j)
                } else {
                    vec![field.zero(); n]
                });
            }
        }
        Ok(FinAlgebra {
            field,
            dim: n,
            table,
            unit: unit_vector(field, n, 0),
        })
    }

    /// `K[x_1..x_k]/(x_1..x_k)^2` on the basis `1, x_1, ..., x_k`.
    pub fn square_zero(field: Field, k: usize) -> Self {
        let n = k + 1;
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(match (i, j) {
                    (0, j) => unit_vector(field, n, j),
                    (i, 0) => unit_vector(field, n, i),
                    _ => vec![field.zero(); n],
                });
            }
        }
        FinAlgebra {
            field,
            dim: n,
            table,
            unit: unit_vector(field, n, 0),
        }
    }

    /// `K^n` with componentwise product on the idempotent basis.
    pub fn split(field: Field, n: usize) -> Self {
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(if i == j {
                    unit_vector(field, n, i)
                } else {
                    vec![field.zero(); n]
                });
            }
        }
        FinAlgebra {
            field,
            dim: n,
            table,
            unit: vec![field.one(); n],
        }
    }

    /// `A (x) B` with `(a (x) b)(a' (x) b') = aa' (x) bb'`.
    pub fn tensor_product(&self, other: &FinAlgebra) -> Result<FinAlgebra> {
        self.field.check(other.field)?;
        let (da, db) = (self.dim, other.dim);
        let n = da * db;
        let mut table = vec![Vec::new(); n * n];
        for i in 0..da {
            for k in 0..db {
                for j in 0..da {
                    for l in 0..db {
                        table[(i * db + k) * n + j * db + l] =
                            kron_vec(self.basis_product(i, j), other.basis_product(k, l));
                    }
                }
            }
        }
        Ok(FinAlgebra {
            field: self.field,
            dim: n,
            table,
            unit: kron_vec(&self.unit, &other.unit),
        })
    }

    /// `A x B` with componentwise product; basis of `A` first.
    pub fn direct_product(&self, other: &FinAlgebra) -> Result<FinAlgebra> {
        self.field.check(other.field)?;
        let (da, db) = (self.dim, other.dim);
        let n = da + db;
        let zero = vec![self.field.zero(); n];
        let mut table = vec![zero.clone(); n * n];
        for i in 0..da {
            for j in 0..da {
                let mut v = zero.clone();
                v[..da].clone_from_slice(self.basis_product(i, j));
                table[i * n + j] = v;
            }
        }
        for i in 0..db {
            for j in 0..db {
                let mut v = zero.clone();
                v[da..].clone_from_slice(other.basis_product(i, j));
                table[(da + i) * n + da + j] = v;
            }
        }
        let mut unit = self.unit.clone();
        unit.extend(other.unit.iter().cloned());
        Ok(FinAlgebra {
            field: self.field,
            dim: n,
            table,
            unit,
        })
    }

    /// The opposite multiplication `x * y = yx`.
    pub fn opposite(&self) -> FinAlgebra {
        let d = self.dim;
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                table.push(self.table[j * d + i].clone());
            }
        }
        FinAlgebra {
            field: self.field,
            dim: d,
            table,
            unit: self.unit.clone(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn module(&self) -> FinModule {
        FinModule::new(self.field, self.dim)
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.dim + j]
    }

    /// The `dim x dim^2` multiplication matrix.
    pub fn mult_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.dim, &self.table).expect("table shape")
    }

    pub fn unit_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.dim, std::slice::from_ref(&self.unit)).expect("unit shape")
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a * b;
                for (o, t) in out.iter_mut().zip(self.basis_product(i, j)) {
                    if !t.is_zero() {
                        *o += &(&c * t);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y |-> x y`.
    pub fn left_mult(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.mul(x, &unit_vector(self.field, self.dim, j)))
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square")
    }

    /// Matrix of `y |-> e_i y`.
    pub fn left_basis_mult(&self, i: usize) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.basis_product(i, j).clone()).collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square")
    }

    pub fn pow(&self, x: &[Scalar], e: u64) -> Vector {
        let mut acc = self.unit.clone();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| (i + 1..d).all(|j| self.table[i * d + j] == self.table[j * d + i]))
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        for j in 0..d {
            let e = unit_vector(self.field, d, j);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::InvalidStructure(format!("unit law fails on basis vector {j}")));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j);
                for k in 0..d {
                    let left = self.mul(ij, &unit_vector(self.field, d, k));
                    let right = self.mul(&unit_vector(self.field, d, i), self.basis_product(j, k));
                    if left != right {
                        return Err(Error::InvalidStructure(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical basis of the nilradical. Over `Q` it is the radical of the
    /// trace form; over `GF(p)` it is the kernel of a power of Frobenius.
    /// Only meaningful for commutative algebras.
    pub fn nilradical(&self) -> Vec<Vector> {
        let d = self.dim;
        let kernel = match self.field {
            Field::Rational => {
                let mut gram = Matrix::zeros(self.field, d, d);
                for i in 0..d {
                    for j in 0..d {
                        let l = self.left_mult(self.basis_product(i, j));
                        let tr = (0..d).fold(self.field.zero(), |acc, k| &acc + l.get(k, k));
                        gram.set(i, j, tr);
                    }
                }
                gram.kernel_basis()
            }
            Field::Prime(p) => {
                let cols: Vec<Vector> = (0..d)
                    .map(|i| self.pow(&unit_vector(self.field, d, i), p))
                    .collect();
                let frob = Matrix::from_columns(self.field, d, &cols).expect("square");
                let mut power = Matrix::identity(self.field, d);
                let mut reach = 1usize;
                while reach < d.max(1) {
                    power = frob.mul(&power).expect("square");
                    reach = reach.saturating_mul(p as usize);
                }
                if d > 0 {
                    power = frob.mul(&power).expect("square");
                }
                power.kernel_basis()
            }
        };
        span_basis(self.field, d, &kernel).expect("ambient dimension")
    }
}

/// Checks that `map` (rows = target dim, cols = source dim) is a unital
/// algebra morphism.
pub fn check_algebra_morphism(source: &FinAlgebra, target: &FinAlgebra, map: &Matrix) -> Result<()> {
    source.field.check(target.field)?;
    source.field.check(map.field())?;
    if map.shape() != (target.dim, source.dim) {
        return Err(Error::NotAMorphism(format!(
            "shape {:?}, expected ({}, {})",
            map.shape(),
            target.dim,
            source.dim
        )));
    }
    if map.mul_vec(&source.unit)? != target.unit {
        return Err(Error::NotAMorphism("unit is not preserved".into()));
    }
    let images = map.columns();
    for i in 0..source.dim {
        for j in 0..source.dim {
            let lhs = map.mul_vec(source.basis_product(i, j))?;
            let rhs = target.mul(&images[i], &images[j]);
            if lhs != rhs {
                return Err(Error::NotAMorphism(format!("product of basis pair ({i}, {j}) is not preserved")));
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    dim: usize,
    mult: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
}

fn infer_field<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> Field {
    it.into_iter().next().map_or(Field::Rational, Scalar::field)
}

impl FinAlgebra {
    fn to_json(&self, name: Option<String>) -> AlgebraJson {
        let d = self.dim;
        AlgebraJson {
            name,
            dim: d,
            mult: (0..d).map(|i| (0..d).map(|j| self.basis_product(i, j).clone()).collect()).collect(),
            unit: self.unit.clone(),
        }
    }

    fn from_json(raw: AlgebraJson) -> Result<Self> {
        if raw.mult.len() != raw.dim {
            return Err(Error::DimensionMismatch {
                context: "algebra dim",
                expected: raw.dim,
                found: raw.mult.len(),
            });
        }
        let field = infer_field(&raw.unit);
        FinAlgebra::new(field, raw.mult, raw.unit)
    }
}

impl Serialize for FinAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json(None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AlgebraJson::deserialize(d)?;
        FinAlgebra::from_json(raw).map_err(serde::de::Error::custom)
    }
}

/// A commutative algebra used as a test object, with a display name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TestAlgebra {
    name: String,
    algebra: FinAlgebra,
}

impl TestAlgebra {
    pub fn new(name: impl Into<String>, algebra: FinAlgebra) -> Result<Self> {
        if !algebra.is_commutative() {
            return Err(Error::InvalidStructure("test algebras must be commutative".into()));
        }
        Ok(TestAlgebra {
            name: name.into(),
            algebra,
        })
    }

    pub fn base(field: Field) -> Self {
        TestAlgebra {
            name: "K".into(),
            algebra: FinAlgebra::base(field),
        }
    }

    pub fn truncated_polynomial(field: Field, n: usize) -> Result<Self> {
        Ok(TestAlgebra {
            name: format!("K[x]/(x^{n})"),
            algebra: FinAlgebra::truncated_polynomial(field, n)?,
        })
    }

    pub fn square_zero(field: Field, k: usize) -> Self {
        let name = match k {
            1 => "K[x]/(x^2)".to_string(),
            2 => "K[x,y]/(x,y)^2".to_string(),
            k => format!("K[x1..x{k}]/(x)^2"),
        };
        TestAlgebra {
            name,
            algebra: FinAlgebra::square_zero(field, k),
        }
    }

    pub fn split(field: Field, n: usize) -> Self {
        let name = if n == 2 { "KxK".to_string() } else { format!("K^{n}") };
        TestAlgebra {
            name,
            algebra: FinAlgebra::split(field, n),
        }
    }

    pub fn tensor_product(&self, other: &TestAlgebra) -> Result<TestAlgebra> {
        Ok(TestAlgebra {
            name: format!("{}⊗{}", self.name, other.name),
            algebra: self.algebra.tensor_product(&other.algebra)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    /// The structural map `K -> S` as a `dim x 1` matrix.
    pub fn structural(&self) -> Matrix {
        self.algebra.unit_matrix()
    }
}

impl Serialize for TestAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.algebra.to_json(Some(self.name.clone())).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TestAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AlgebraJson::deserialize(d)?;
        let name = raw.name.clone().unwrap_or_else(|| format!("A{}", raw.dim));
        let algebra = FinAlgebra::from_json(raw).map_err(serde::de::Error::custom)?;
        TestAlgebra::new(name, algebra).map_err(serde::de::Error::custom)
    }
}

/// A validated algebra morphism between two explicitly given algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    pub source: FinAlgebra,
    pub target: FinAlgebra,
    pub map: Matrix,
}

impl AlgebraMorphism {
    pub fn new(source: FinAlgebra, target: FinAlgebra, map: Matrix) -> Result<Self> {
        check_algebra_morphism(&source, &target, &map)?;
        Ok(AlgebraMorphism { source, target, map })
    }

    pub fn identity(a: &FinAlgebra) -> Self {
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            map: Matrix::identity(a.field, a.dim),
        }
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if first.target != self.source {
            return Err(Error::NotAMorphism("composition of non-composable morphisms".into()));
        }
        Ok(AlgebraMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            map: self.map.mul(&first.map)?,
        })
    }
}

/// A morphism inside a universe, by algebra index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub matrix: Matrix,
}

const MAX_ARROWS: usize = 20_000;

/// A finite diagram of commutative test algebras. Algebra 0 is the base;
/// every algebra receives a structural morphism from it, identities are
/// present, and the arrow set is closed under composition.
#[derive(Clone, Debug)]
pub struct Universe {
    field: Field,
    algebras: Vec<TestAlgebra>,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    structural: Vec<usize>,
    generators: Vec<usize>,
    index: HashMap<Arrow, usize>,
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.algebras == other.algebras && self.arrows == other.arrows
    }
}

impl Eq for Universe {}

impl Universe {
    /// Closes `algebras` and `arrows` under composition. Identities are
    /// added; when the base is one-dimensional the structural morphisms are
    /// added too, otherwise they must be among the given arrows.
    pub fn close(algebras: Vec<TestAlgebra>, arrows: Vec<Arrow>) -> Result<Self> {
        let Some(base) = algebras.first() else {
            return Err(Error::Closure("a universe needs at least the base algebra".into()));
        };
        let field = base.field();
        for a in &algebras {
            field.check(a.field())?;
        }
        for (k, a) in arrows.iter().enumerate() {
            if a.src >= algebras.len() || a.dst >= algebras.len() {
                return Err(Error::Closure(format!("arrow {k} refers to a missing algebra")));
            }
            check_algebra_morphism(algebras[a.src].algebra(), algebras[a.dst].algebra(), &a.matrix)
                .map_err(|e| Error::NotAMorphism(format!("arrow {k}: {e}")))?;
        }
        let mut seeds: Vec<Arrow> = (0..algebras.len())
            .map(|s| Arrow {
                src: s,
                dst: s,
                matrix: Matrix::identity(field, algebras[s].dim()),
            })
            .collect();
        if base.dim() == 1 && base.algebra().unit()[0].is_one() {
            for (s, a) in algebras.iter().enumerate().skip(1) {
                seeds.push(Arrow {
                    src: 0,
                    dst: s,
                    matrix: a.structural(),
                });
            }
        }
        seeds.extend(arrows);

        let mut list: Vec<Arrow> = Vec::new();
        let mut index: HashMap<Arrow, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for a in seeds {
            if !index.contains_key(&a) {
                index.insert(a.clone(), list.len());
                queue.push_back(list.len());
                list.push(a);
            }
        }
        while let Some(k) = queue.pop_front() {
            let mut fresh = Vec::new();
            for j in 0..list.len() {
                let (a, b) = (&list[k], &list[j]);
                if b.dst == a.src {
                    fresh.push(Arrow {
                        src: b.src,
                        dst: a.dst,
                        matrix: a.matrix.mul(&b.matrix)?,
                    });
                }
                if a.dst == b.src {
                    fresh.push(Arrow {
                        src: a.src,
                        dst: b.dst,
                        matrix: b.matrix.mul(&a.matrix)?,
                    });
                }
            }
            for a in fresh {
                if !index.contains_key(&a) {
                    index.insert(a.clone(), list.len());
                    queue.push_back(list.len());
                    list.push(a);
                    if list.len() > MAX_ARROWS {
                        return Err(Error::Closure(format!("more than {MAX_ARROWS} arrows")));
                    }
                }
            }
        }

        let identities: Vec<usize> = (0..algebras.len()).map(|s| index[&list[s]]).collect();
        let mut structural = Vec::with_capacity(algebras.len());
        for s in 0..algebras.len() {
            let found = list
                .iter()
                .position(|a| a.src == 0 && a.dst == s && a.matrix.mul_vec(base.algebra().unit()).ok().as_ref() == Some(algebras[s].algebra().unit()));
            let hit = if s == 0 { Some(identities[0]) } else { found };
            match hit {
                Some(k) => structural.push(k),
                None => {
                    return Err(Error::Closure(format!(
                        "no structural morphism from the base to {}",
                        algebras[s].name()
                    )))
                }
            }
        }
        let mut u = Universe {
            field,
            algebras,
            arrows: list,
            identities,
            structural,
            generators: Vec::new(),
            index,
        };
        u.generators = u.minimal_generators()?;
        Ok(u)
    }

    /// Greedy generating set: non-identity arrows in list order, keeping an
    /// arrow only when it is not already a composite of the kept ones.
    fn minimal_generators(&self) -> Result<Vec<usize>> {
        let mut gens: Vec<usize> = Vec::new();
        let mut reached: HashSet<usize> = self.identities.iter().copied().collect();
        for k in 0..self.arrows.len() {
            if reached.contains(&k) {
                continue;
            }
            gens.push(k);
            reached = self.words(&gens)?;
        }
        Ok(gens)
    }

    fn words(&self, gens: &[usize]) -> Result<HashSet<usize>> {
        let mut seen: HashSet<usize> = self.identities.iter().copied().collect();
        let mut queue: VecDeque<usize> = self.identities.iter().copied().collect();
        while let Some(w) = queue.pop_front() {
            for &g in gens {
                let (a, b) = (&self.arrows[g], &self.arrows[w]);
                if b.dst != a.src {
                    continue;
                }
                let c = self.compose_indices(g, w)?;
                if seen.insert(c) {
                    queue.push_back(c);
                }
            }
        }
        Ok(seen)
    }

    /// The standard diagram `K, K[x]/(x^2), K[x]/(x^3), K[x,y]/(x,y)^2, KxK`.
    pub fn reference(field: Field) -> Result<Self> {
        let q = |rows: &[&[i64]]| Matrix::from_i64(field, rows);
        let algebras = vec![
            TestAlgebra::base(field),
            TestAlgebra::truncated_polynomial(field, 2)?,
            TestAlgebra::truncated_polynomial(field, 3)?,
            TestAlgebra::square_zero(field, 2),
            TestAlgebra::split(field, 2),
        ];
        let arrow = |src, dst, matrix| Arrow { src, dst, matrix };
        let arrows = vec![
            arrow(1, 0, q(&[&[1, 0]])),
            arrow(2, 0, q(&[&[1, 0, 0]])),
            arrow(3, 0, q(&[&[1, 0, 0]])),
            arrow(2, 1, q(&[&[1, 0, 0], &[0, 1, 0]])),
            arrow(1, 3, q(&[&[1, 0], &[0, 1], &[0, 0]])),
            arrow(1, 3, q(&[&[1, 0], &[0, 0], &[0, 1]])),
            arrow(3, 1, q(&[&[1, 0, 0], &[0, 1, 0]])),
            arrow(3, 1, q(&[&[1, 0, 0], &[0, 0, 1]])),
            arrow(4, 0, q(&[&[1, 0]])),
            arrow(4, 0, q(&[&[0, 1]])),
        ];
        Universe::close(algebras, arrows)
    }

    /// Only the base field.
    pub fn trivial(field: Field) -> Self {
        Universe::close(vec![TestAlgebra::base(field)], Vec::new()).expect("trivial universe")
    }

    /// Adds `K[x]/(x^n)` together with its evaluation, the quotient onto the
    /// largest truncated polynomial algebra already present, and
    /// `K[x]/(x^2) -> K[x]/(x^n)`, `x |-> x^(n-1)` when `K[x]/(x^2)` is present.
    pub fn enlarge(&self, n: usize) -> Result<Self> {
        let field = self.field;
        let new = TestAlgebra::truncated_polynomial(field, n)?;
        if self.algebras.iter().any(|a| a == &new) {
            return Ok(self.clone());
        }
        let idx = self.algebras.len();
        let mut algebras = self.algebras.clone();
        algebras.push(new);
        let mut arrows: Vec<Arrow> = self.arrows.clone();
        let mut eval = Matrix::zeros(field, 1, n);
        eval.set(0, 0, field.one());
        arrows.push(Arrow {
            src: idx,
            dst: 0,
            matrix: eval,
        });
        let largest = (2..n)
            .rev()
            .find_map(|m| {
                let t = TestAlgebra::truncated_polynomial(field, m).ok()?;
                self.algebras.iter().position(|a| a == &t).map(|i| (i, m))
            });
        if let Some((i, m)) = largest {
            let mut quot = Matrix::zeros(field, m, n);
            for k in 0..m {
                quot.set(k, k, field.one());
            }
            arrows.push(Arrow {
                src: idx,
                dst: i,
                matrix: quot,
            });
        }
        let d2 = TestAlgebra::truncated_polynomial(field, 2)?;
        if let Some(i) = self.algebras.iter().position(|a| a == &d2) {
            if n > 2 {
                let mut lift = Matrix::zeros(field, n, 2);
                lift.set(0, 0, field.one());
                lift.set(n - 1, 1, field.one());
                arrows.push(Arrow {
                    src: i,
                    dst: idx,
                    matrix: lift,
                });
            }
        }
        Universe::close(algebras, arrows)
    }

    /// The diagram of `S`-algebras `S (x) T`, with arrows `id (x) psi`.
    /// The base of the result is `S (x) K`, identified with `S`.
    pub fn base_change(&self, s: &TestAlgebra) -> Result<Self> {
        self.field.check(s.field())?;
        let algebras: Vec<TestAlgebra> = self
            .algebras
            .iter()
            .map(|t| s.tensor_product(t))
            .collect::<Result<_>>()?;
        let id = Matrix::identity(self.field, s.dim());
        let arrows: Vec<Arrow> = self
            .arrows
            .iter()
            .map(|a| {
                Ok(Arrow {
                    src: a.src,
                    dst: a.dst,
                    matrix: id.kron(&a.matrix)?,
                })
            })
            .collect::<Result<_>>()?;
        Universe::close(algebras, arrows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn algebras(&self) -> &[TestAlgebra] {
        &self.algebras
    }

    pub fn algebra(&self, s: usize) -> &TestAlgebra {
        &self.algebras[s]
    }

    pub fn len(&self) -> usize {
        self.algebras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebras.is_empty()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, k: usize) -> &Arrow {
        &self.arrows[k]
    }

    pub fn identity(&self, s: usize) -> usize {
        self.identities[s]
    }

    pub fn is_identity(&self, k: usize) -> bool {
        let a = &self.arrows[k];
        a.src == a.dst && self.identities[a.src] == k
    }

    /// Index of the structural arrow from the base into `s`.
    pub fn structural(&self, s: usize) -> usize {
        self.structural[s]
    }

    /// A generating set of arrows: every arrow is a composite of these.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn find(&self, a: &Arrow) -> Option<usize> {
        self.index.get(a).copied()
    }

    /// Index of `second o first`.
    pub fn compose_indices(&self, second: usize, first: usize) -> Result<usize> {
        let (a, b) = (&self.arrows[second], &self.arrows[first]);
        if b.dst != a.src {
            return Err(Error::Closure("arrows are not composable".into()));
        }
        let c = Arrow {
            src: b.src,
            dst: a.dst,
            matrix: a.matrix.mul(&b.matrix)?,
        };
        self.find(&c)
            .ok_or_else(|| Error::Closure("composite arrow missing from the universe".into()))
    }

    /// The user-supplied part of the universe (everything except identities
    /// and the automatically added structural maps is kept as given).
    pub fn to_json(&self) -> UniverseJson {
        UniverseJson {
            algebras: self.algebras.clone(),
            morphisms: self
                .arrows
                .iter()
                .enumerate()
                .filter(|(k, _)| self.generators.contains(k))
                .map(|(_, a)| a.clone())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UniverseJson {
    pub algebras: Vec<TestAlgebra>,
    pub morphisms: Vec<Arrow>,
}

impl Serialize for Universe {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Universe {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = UniverseJson::deserialize(d)?;
        Universe::close(raw.algebras, raw.morphisms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn constructors_validate() {
        for p in [Q, Field::Prime(2), Field::Prime(7)] {
            FinAlgebra::truncated_polynomial(p, 4).unwrap().validate().unwrap();
            FinAlgebra::square_zero(p, 2).validate().unwrap();
            FinAlgebra::split(p, 3).validate().unwrap();
            let t = FinAlgebra::truncated_polynomial(p, 2)
                .unwrap()
                .tensor_product(&FinAlgebra::split(p, 2))
                .unwrap();
            t.validate().unwrap();
            assert!(t.is_commutative());
        }
    }

    #[test]
    fn bad_table_rejected() {
        // e1 * e1 = e0 + e1 with e0 the unit is fine; e1 * e1 = e1 but e0 not a unit is not.
        let z = Q.zero();
        let o = Q.one();
        let table = vec![vec![vec![o.clone(), z.clone()], vec![z.clone(), z.clone()]], vec![vec![z.clone(), o.clone()], vec![z.clone(), o.clone()]]];
        assert!(FinAlgebra::new(Q, table, vec![o.clone(), z.clone()]).is_err());
    }

    #[test]
    fn nilradicals() {
        for f in [Q, Field::Prime(2), Field::Prime(3)] {
            let d3 = FinAlgebra::truncated_polynomial(f, 3).unwrap();
            assert_eq!(d3.nilradical().len(), 2);
            assert_eq!(FinAlgebra::split(f, 2).nilradical().len(), 0);
            assert_eq!(FinAlgebra::square_zero(f, 2).nilradical().len(), 2);
            assert_eq!(FinAlgebra::base(f).nilradical().len(), 0);
        }
    }

    #[test]
    fn morphism_check() {
        let d2 = FinAlgebra::truncated_polynomial(Q, 2).unwrap();
        let k = FinAlgebra::base(Q);
        assert!(check_algebra_morphism(&d2, &k, &Matrix::from_i64(Q, &[&[1, 0]])).is_ok());
        assert!(check_algebra_morphism(&d2, &k, &Matrix::from_i64(Q, &[&[1, 1]])).is_err());
        assert!(check_algebra_morphism(&d2, &k, &Matrix::from_i64(Q, &[&[0, 0]])).is_err());
    }

    #[test]
    fn reference_universe_is_closed() {
        let u = Universe::reference(Q).unwrap();
        assert_eq!(u.len(), 5);
        for (i, a) in u.arrows().iter().enumerate() {
            for (j, b) in u.arrows().iter().enumerate() {
                if b.dst == a.src {
                    u.compose_indices(i, j).unwrap();
                }
            }
        }
        for s in 0..u.len() {
            let st = u.arrow(u.structural(s));
            assert_eq!((st.src, st.dst), (0, s));
        }
        // every arrow is a word in the generators
        let words = u.words(u.generators()).unwrap();
        assert_eq!(words.len(), u.arrows().len());
        assert!(u.generators().len() < u.arrows().len());
    }

    #[test]
    fn universe_json_round_trip() {
        let u = Universe::reference(Field::Prime(5)).unwrap();
        let s = serde_json::to_string(&u).unwrap();
        let back: Universe = serde_json::from_str(&s).unwrap();
        assert_eq!(back.len(), u.len());
        assert_eq!(back.arrows().len(), u.arrows().len());
    }

    #[test]
    fn enlargement_and_base_change() {
        let u = Universe::reference(Q).unwrap();
        let e = u.enlarge(4).unwrap();
        assert_eq!(e.len(), 6);
        assert!(e.arrows().len() > u.arrows().len());
        let s = TestAlgebra::truncated_polynomial(Q, 2).unwrap();
        let v = u.base_change(&s).unwrap();
        assert_eq!(v.len(), u.len());
        assert_eq!(v.algebra(2).dim(), 6);
        assert_eq!(v.arrows().len(), u.arrows().len());
    }
}
