//! Dense exact matrices and the elimination kernel.
//!
//! Pivoting is deterministic everywhere: the leftmost column with a nonzero
//! entry at or below the current row is the next pivot column and the first
//! such row is swapped up. Kernel vectors come out in increasing order of
//! their free column, so every basis computed downstream is reproducible.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Column vectors are plain coordinate lists.
pub type Vector = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        for e in &entries {
            field.check(e.field())?;
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                context: "matrix row length",
                expected: c,
                found: bad.len(),
            });
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Small-integer literal helper, mostly for fixtures and tests.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged literal");
        let entries = rows.iter().flat_map(|row| row.iter().map(|&x| field.from_i64(x))).collect();
        Matrix {
            field,
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    context: "matrix column length",
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                field.check(x.field())?;
                m.entries[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        debug_assert_eq!(x.field(), self.field);
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.field.check(other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (a, x) in self.row(i).iter().zip(v) {
                if !a.is_zero() && !x.is_zero() {
                    self.field.check(x.field())?;
                    *o = &*o + &(a * x);
                }
            }
        }
        Ok(out)
    }

    fn same_shape(&self, other: &Matrix, context: &'static str) -> Result<()> {
        self.field.check(other.field)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other, "matrix sum")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(self.with_entries(entries))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other, "matrix difference")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(self.with_entries(entries))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let entries = self.entries.iter().map(|a| a * c).collect();
        self.with_entries(entries)
    }

    fn with_entries(&self, entries: Vec<Scalar>) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Kronecker product. The basis vector `e_i (x) e_j` sits at index
    /// `i * dim_b + j`, for both rows and columns.
    pub fn kron(&self, b: &Matrix) -> Result<Matrix> {
        self.field.check(b.field)?;
        let (r, c) = (self.rows * b.rows, self.cols * b.cols);
        let mut out = Matrix::zeros(self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        let x = b.get(k, l);
                        if !x.is_zero() {
                            out.entries[(i * b.rows + k) * c + j * b.cols + l] = a * x;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.field.check(other.field)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "horizontal stack",
                expected: self.rows,
                found: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols,
            entries,
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.field.check(other.field)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "vertical stack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.entries[i * idx.len() + k] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        Matrix {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Gauss-Jordan on the first `limit` columns; returns the pivot columns.
    fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.entries[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.entries.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.entries[r * cols + c].inv().expect("nonzero pivot");
            for j in c..cols {
                let x = &self.entries[r * cols + j];
                if !x.is_zero() {
                    self.entries[r * cols + j] = x * &inv;
                }
            }
            let support: Vec<usize> =
                (c..cols).filter(|&j| !self.entries[r * cols + j].is_zero()).collect();
            let pivot_row: Vec<Scalar> = support.iter().map(|&j| self.entries[r * cols + j].clone()).collect();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.entries[i * cols + c].clone();
                if f.is_zero() {
                    continue;
                }
                for (&j, x) in support.iter().zip(&pivot_row) {
                    let idx = i * cols + j;
                    self.entries[idx] = &self.entries[idx] - &(&f * x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null-space basis, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Column-space basis: the pivot columns of `self`.
    pub fn image_basis(&self) -> Vec<Vector> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&j| self.column(j)).collect()
    }

    /// A solution of `self * x = b` with every free variable set to zero,
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "right-hand side",
                expected: self.rows,
                found: b.len(),
            });
        }
        let rhs = Matrix::from_columns(self.field, self.rows, &[b.to_vec()])?;
        let mut aug = self.hstack(&rhs)?;
        let pivots = aug.rref_in_place(self.cols);
        let n = self.cols;
        for i in pivots.len()..self.rows {
            if !aug.get(i, n).is_zero() {
                return Ok(None);
            }
        }
        let mut x = vec![self.field.zero(); n];
        for (k, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(k, n).clone();
        }
        Ok(Some(x))
    }

    /// Solves `self * X = B` column by column; `None` if any column fails.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch {
                context: "right-hand side",
                expected: self.rows,
                found: b.rows,
            });
        }
        let mut aug = self.hstack(b)?;
        let pivots = aug.rref_in_place(self.cols);
        let n = self.cols;
        for i in pivots.len()..self.rows {
            if (n..aug.cols).any(|j| !aug.get(i, j).is_zero()) {
                return Ok(None);
            }
        }
        let mut x = Matrix::zeros(self.field, n, b.cols);
        for (k, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, aug.get(k, n + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_matrix(&Matrix::identity(self.field, self.rows)).ok()??;
        (self.rank() == self.rows).then_some(x)
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Moves every entry into `field` (rational entries reduce mod `p`).
    pub fn into_field(self, field: Field) -> Result<Matrix> {
        if self.field == field {
            return Ok(self);
        }
        let entries = self
            .entries
            .into_iter()
            .map(|x| x.into_field(field))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(field, self.rows, self.cols, entries)
    }
}

fn kernel_from_rref(r: &Matrix, pivots: &[usize]) -> Vec<Vector> {
    let field = r.field;
    let mut is_pivot = vec![false; r.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..r.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![field.zero(); r.cols];
            v[f] = field.one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(k, f);
            }
            v
        })
        .collect()
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Scalar>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows).map(|i| self.row(i).to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    /// The field is inferred from the entries: any `r mod p` entry puts the
    /// whole matrix in GF(p), otherwise it is rational.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatrixJson::deserialize(d)?;
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
            return Err(D::Error::custom(format!(
                "matrix entries do not match declared shape {}x{}",
                raw.rows, raw.cols
            )));
        }
        let field = raw
            .entries
            .iter()
            .flatten()
            .map(Scalar::field)
            .find(|f| *f != Field::Rational)
            .unwrap_or(Field::Rational);
        let entries = raw
            .entries
            .into_iter()
            .flatten()
            .map(|x| x.into_field(field))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Matrix::new(field, raw.rows, raw.cols, entries).map_err(D::Error::custom)
    }
}

/// Canonical basis of the span of `vectors`: the nonzero rows of the RREF
/// of the matrix whose rows are the vectors. Dependent input is fine.
pub fn span_basis(field: Field, dim: usize, vectors: &[Vector]) -> Result<Vec<Vector>> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let m = Matrix::from_columns(field, dim, vectors)?.transpose();
    let (r, pivots) = m.rref();
    Ok((0..pivots.len()).map(|i| r.row(i).to_vec()).collect())
}

/// Whether `v` lies in the span of `basis` (vectors of length `dim`).
pub fn in_span(field: Field, dim: usize, basis: &[Vector], v: &[Scalar]) -> Result<bool> {
    coordinates_in(field, dim, basis, v).map(|c| c.is_some())
}

/// Coordinates of `v` with respect to `basis`, when it lies in the span.
pub fn coordinates_in(field: Field, dim: usize, basis: &[Vector], v: &[Scalar]) -> Result<Option<Vector>> {
    if basis.is_empty() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "vector length",
                expected: dim,
                found: v.len(),
            });
        }
        return Ok(v.iter().all(Scalar::is_zero).then(Vec::new));
    }
    Matrix::from_columns(field, dim, basis)?.solve(v)
}

/// Intersection of subspaces of `K^dim`, each given by a spanning list.
/// Each pairwise step solves `U a = V b` through the kernel of `[U | -V]`.
pub fn intersect_subspaces(field: Field, dim: usize, bases: &[Vec<Vector>]) -> Result<Vec<Vector>> {
    for v in bases.iter().flatten() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "ambient dimension",
                expected: dim,
                found: v.len(),
            });
        }
    }
    let Some((first, rest)) = bases.split_first() else {
        let all: Vec<Vector> = (0..dim).map(|i| unit_vector(field, dim, i)).collect();
        return Ok(all);
    };
    let mut acc = span_basis(field, dim, first)?;
    for next in rest {
        let other = span_basis(field, dim, next)?;
        if acc.is_empty() || other.is_empty() {
            return Ok(Vec::new());
        }
        let u = Matrix::from_columns(field, dim, &acc)?;
        let v = Matrix::from_columns(field, dim, &other)?;
        let stacked = u.hstack(&v.scale(&-field.one()))?;
        let k = acc.len();
        let mut meet = Vec::new();
        for w in stacked.kernel_basis() {
            meet.push(u.mul_vec(&w[..k])?);
        }
        acc = span_basis(field, dim, &meet)?;
    }
    Ok(acc)
}

pub fn unit_vector(field: Field, dim: usize, i: usize) -> Vector {
    let mut v = vec![field.zero(); dim];
    v[i] = field.one();
    v
}

pub fn zero_vector(field: Field, dim: usize) -> Vector {
    vec![field.zero(); dim]
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Scalar], c: &Scalar) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let field = a.first().or(b.first()).map_or(Field::Rational, Scalar::field);
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| &acc + &(x * y))
}

/// `a (x) b` under the shared index convention `i * len(b) + j`.
pub fn kron_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Incremental Gauss-Jordan elimination for large homogeneous systems whose
/// equations arrive one at a time and are mostly sparse. The stored rows are
/// kept in reduced form at all times, so the final kernel is canonical and
/// independent of the order in which equations were pushed.
#[derive(Clone, Debug)]
pub struct RowReducer {
    field: Field,
    ncols: usize,
    rows: Vec<Vector>,
    pivot_cols: Vec<usize>,
    pivot_row_of: Vec<Option<usize>>,
}

impl RowReducer {
    pub fn new(field: Field, ncols: usize) -> Self {
        RowReducer {
            field,
            ncols,
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            pivot_row_of: vec![None; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds the equation `sum coeff * x_col = 0`, given sparsely. Repeated
    /// columns are summed. Returns whether the rank went up.
    pub fn push_sparse(&mut self, terms: &[(usize, Scalar)]) -> bool {
        if terms.iter().all(|(_, c)| c.is_zero()) {
            return false;
        }
        let mut row = vec![self.field.zero(); self.ncols];
        for (j, c) in terms {
            row[*j] = &row[*j] + c;
        }
        self.push(row)
    }

    pub fn push(&mut self, mut row: Vector) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        for (k, &c) in self.pivot_cols.iter().enumerate() {
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (j, x) in self.rows[k].iter().enumerate() {
                if !x.is_zero() {
                    row[j] = &row[j] - &(&f * x);
                }
            }
        }
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[p].inv().expect("nonzero");
        for x in row.iter_mut().skip(p) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let support: Vec<usize> = (p..self.ncols).filter(|&j| !row[j].is_zero()).collect();
        for existing in &mut self.rows {
            let f = existing[p].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &support {
                existing[j] = &existing[j] - &(&f * &row[j]);
            }
        }
        self.pivot_row_of[p] = Some(self.rows.len());
        self.pivot_cols.push(p);
        self.rows.push(row);
        true
    }

    /// Free columns in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&j| self.pivot_row_of[j].is_none()).collect()
    }

    /// Kernel basis: one vector per free column, in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![self.field.zero(); self.ncols];
                v[f] = self.field.one();
                for (k, &p) in self.pivot_cols.iter().enumerate() {
                    let x = &self.rows[k][f];
                    if !x.is_zero() {
                        v[p] = -x;
                    }
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rref_identity_and_rank_one() {
        let id = Matrix::identity(Q, 2);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1]));
        let m = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let (r, p) = m.rref();
        assert_eq!(r, Matrix::from_i64(Q, &[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_over_gf2_by_hand() {
        // [[1,1],[1,2]] = [[1,1],[1,0]] over GF(2). R2 += R1 gives [0,1];
        // R1 += R2 gives [1,0].
        let f = gf(2);
        let m = Matrix::from_i64(f, &[&[1, 1], &[1, 2]]);
        let (r, p) = m.rref();
        assert_eq!(r, Matrix::identity(f, 2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(Q, 3).kernel_basis().is_empty());
        let z = Matrix::zeros(Q, 2, 3);
        let k = z.kernel_basis();
        assert_eq!(k, (0..3).map(|i| unit_vector(Q, 3, i)).collect::<Vec<_>>());
        let m = Matrix::from_i64(Q, &[&[1, 2, 3]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn solve_examples() {
        let b = vec![Q.from_i64(3), Q.from_i64(-1)];
        assert_eq!(Matrix::identity(Q, 2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Matrix::zeros(Q, 2, 2).solve(&b).unwrap(), None);
        let d = Matrix::from_i64(Q, &[&[2, 0], &[0, 3]]);
        let x = d.solve(&[Q.one(), Q.one()]).unwrap().unwrap();
        assert_eq!(x, vec![Q.ratio(1, 2).unwrap(), Q.ratio(1, 3).unwrap()]);
        assert!(matches!(d.solve(&[Q.one()]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kron_examples() {
        let a = Matrix::from_i64(Q, &[&[2]]);
        let b = Matrix::from_i64(Q, &[&[3]]);
        assert_eq!(a.kron(&b).unwrap(), Matrix::from_i64(Q, &[&[6]]));
        let i6 = Matrix::identity(Q, 2).kron(&Matrix::identity(Q, 3)).unwrap();
        assert!(i6.is_identity() && i6.rows() == 6);
        assert!(matches!(a.kron(&Matrix::identity(gf(3), 1)), Err(Error::MixedFields(..))));
    }

    #[test]
    fn kron_places_blocks_row_major() {
        let a = Matrix::from_i64(Q, &[&[1, 2]]);
        let b = Matrix::from_i64(Q, &[&[1], &[10]]);
        let k = a.kron(&b).unwrap();
        assert_eq!(k, Matrix::from_i64(Q, &[&[1, 2], &[10, 20]]));
    }

    #[test]
    fn image_examples() {
        assert_eq!(Matrix::identity(Q, 2).image_basis(), vec![unit_vector(Q, 2, 0), unit_vector(Q, 2, 1)]);
        assert!(Matrix::zeros(Q, 2, 2).image_basis().is_empty());
        let m = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        assert_eq!(m.image_basis(), vec![vec![Q.from_i64(1), Q.from_i64(2)]]);
    }

    #[test]
    fn intersections() {
        let e = |i| unit_vector(Q, 3, i);
        let v = vec![e(0), e(1)];
        assert_eq!(intersect_subspaces(Q, 3, &[v.clone(), v.clone()]).unwrap(), v);
        assert!(intersect_subspaces(Q, 3, &[vec![e(0)], vec![e(1)]]).unwrap().is_empty());
        assert!(matches!(
            intersect_subspaces(Q, 2, &[vec![e(0)]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(Q, &[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn json_shape() {
        let m = Matrix::from_i64(gf(5), &[&[1, 2], &[3, 4]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"entries":[["1 mod 5","2 mod 5"],["3 mod 5","4 mod 5"]]}"#);
        let back: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let q: Matrix = serde_json::from_str(r#"{"rows":1,"cols":2,"entries":[["1/2", 3]]}"#).unwrap();
        assert_eq!(q.field(), Q);
        assert!(serde_json::from_str::<Matrix>(r#"{"rows":2,"cols":2,"entries":[["1"]]}"#).is_err());
    }

    #[test]
    fn row_reducer_matches_dense_kernel() {
        let m = Matrix::from_i64(Q, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 0, 1]]);
        let mut rr = RowReducer::new(Q, 4);
        for i in (0..3).rev() {
            rr.push(m.row(i).to_vec());
        }
        assert_eq!(rr.rank(), 2);
        assert_eq!(rr.kernel_basis(), m.kernel_basis());
    }
}
