//! Finite-rank free modules over the base field and the maps between them.
//!
//! A module is its rank; elements are coordinate vectors in the standard
//! basis, the dual carries the dual basis, and tensor products use the
//! `i * rank(n) + j` convention everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinModule {
    pub field: Field,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl FinModule {
    pub fn new(field: Field, rank: usize) -> Self {
        FinModule {
            field,
            rank,
            label: None,
        }
    }

    pub fn labeled(field: Field, rank: usize, label: impl Into<String>) -> Self {
        FinModule {
            field,
            rank,
            label: Some(label.into()),
        }
    }

    /// The base field as a rank-one module.
    pub fn base(field: Field) -> Self {
        Self::new(field, 1)
    }

    pub fn zero(field: Field) -> Self {
        Self::new(field, 0)
    }

    /// Modules are compared by field and rank; labels are cosmetic.
    pub fn same_shape(&self, other: &FinModule) -> bool {
        self.field == other.field && self.rank == other.rank
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMap {
    pub domain: FinModule,
    pub codomain: FinModule,
    pub matrix: Matrix,
}

impl LinearMap {
    pub fn new(domain: FinModule, codomain: FinModule, matrix: Matrix) -> Result<Self> {
        domain.field.check(codomain.field)?;
        domain.field.check(matrix.field())?;
        if matrix.rows() != codomain.rank {
            return Err(Error::DimensionMismatch {
                context: "linear map rows vs codomain rank",
                expected: codomain.rank,
                found: matrix.rows(),
            });
        }
        if matrix.cols() != domain.rank {
            return Err(Error::DimensionMismatch {
                context: "linear map columns vs domain rank",
                expected: domain.rank,
                found: matrix.cols(),
            });
        }
        Ok(LinearMap {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(m: &FinModule) -> Self {
        LinearMap {
            domain: m.clone(),
            codomain: m.clone(),
            matrix: Matrix::identity(m.field, m.rank),
        }
    }

    pub fn field(&self) -> Field {
        self.domain.field
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &LinearMap) -> Result<LinearMap> {
        if !first.codomain.same_shape(&self.domain) {
            return Err(Error::DimensionMismatch {
                context: "composition",
                expected: self.domain.rank,
                found: first.codomain.rank,
            });
        }
        LinearMap::new(first.domain.clone(), self.codomain.clone(), self.matrix.mul(&first.matrix)?)
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        self.matrix.mul_vec(v)
    }
}

fn star(m: &FinModule) -> Option<String> {
    m.label.as_ref().map(|l| format!("{l}*"))
}

/// `M* = Hom(M, K)`, with the dual basis of the standard basis.
pub fn dual_module(m: &FinModule) -> FinModule {
    FinModule {
        field: m.field,
        rank: m.rank,
        label: star(m),
    }
}

/// `f* : N* -> M*`; its matrix is the transpose.
pub fn dual_map(f: &LinearMap) -> LinearMap {
    LinearMap {
        domain: dual_module(&f.codomain),
        codomain: dual_module(&f.domain),
        matrix: f.matrix.transpose(),
    }
}

/// The canonical map `M -> M**`, `m |-> (w |-> w(m))`. Under the dual-basis
/// conventions it is the identity matrix.
pub fn double_dual_unit(m: &FinModule) -> LinearMap {
    let field = m.field;
    let dd = dual_module(&dual_module(m));
    // Column j: the functional on M* sending the dual basis vector eps_i to eps_i(e_j).
    let mut u = Matrix::zeros(field, m.rank, m.rank);
    for j in 0..m.rank {
        for i in 0..m.rank {
            let eps_i_of_e_j = if i == j { field.one() } else { field.zero() };
            u.set(i, j, eps_i_of_e_j);
        }
    }
    LinearMap {
        domain: m.clone(),
        codomain: dd,
        matrix: u,
    }
}

pub fn tensor(m: &FinModule, n: &FinModule) -> Result<FinModule> {
    m.field.check(n.field)?;
    let label = match (&m.label, &n.label) {
        (Some(a), Some(b)) => Some(format!("{a}⊗{b}")),
        _ => None,
    };
    Ok(FinModule {
        field: m.field,
        rank: m.rank * n.rank,
        label,
    })
}

pub fn tensor_map(f: &LinearMap, g: &LinearMap) -> Result<LinearMap> {
    Ok(LinearMap {
        domain: tensor(&f.domain, &g.domain)?,
        codomain: tensor(&f.codomain, &g.codomain)?,
        matrix: f.matrix.kron(&g.matrix)?,
    })
}

/// `Hom(M, N)`. An element is the row-major flattening of its
/// `rank(N) x rank(M)` matrix.
pub fn hom_module(m: &FinModule, n: &FinModule) -> Result<FinModule> {
    m.field.check(n.field)?;
    Ok(FinModule::new(m.field, m.rank * n.rank))
}

pub fn hom_element(matrix: &Matrix) -> Vector {
    matrix.entries().to_vec()
}

pub fn hom_element_matrix(m: &FinModule, n: &FinModule, v: &[Scalar]) -> Result<Matrix> {
    Matrix::new(m.field, n.rank, m.rank, v.to_vec())
}

/// The permutation sending index `i * b + j` to `j * a + i`.
fn commutation(field: Field, a: usize, b: usize) -> Matrix {
    let mut p = Matrix::zeros(field, a * b, a * b);
    for i in 0..a {
        for j in 0..b {
            p.set(j * a + i, i * b + j, field.one());
        }
    }
    p
}

/// `M* (x) N -> Hom(M, N)`, sending `w (x) v` to `u |-> w(u) v`.
pub fn tensor_to_hom(m: &FinModule, n: &FinModule) -> Result<LinearMap> {
    let field = m.field;
    field.check(n.field)?;
    // eps_i (x) f_j sits at i * rank(n) + j and maps to E_{j,i}, which sits
    // at j * rank(m) + i in Hom coordinates.
    LinearMap::new(
        tensor(&dual_module(m), n)?,
        hom_module(m, n)?,
        commutation(field, m.rank, n.rank),
    )
}

/// Inverse of [`tensor_to_hom`].
pub fn hom_to_tensor(m: &FinModule, n: &FinModule) -> Result<LinearMap> {
    let field = m.field;
    field.check(n.field)?;
    LinearMap::new(
        hom_module(m, n)?,
        tensor(&dual_module(m), n)?,
        commutation(field, n.rank, m.rank),
    )
}

/// `M (x) N -> Hom(M*, N)`, `m (x) v |-> (w |-> w(m) v)`.
pub fn hom_from_dual_source(m: &FinModule, n: &FinModule) -> Result<LinearMap> {
    let field = m.field;
    field.check(n.field)?;
    let mut mat = Matrix::zeros(field, m.rank * n.rank, m.rank * n.rank);
    for i in 0..m.rank {
        for j in 0..n.rank {
            // Image of e_i (x) f_j is the map eps_k |-> delta_{ik} f_j.
            let mut image = Matrix::zeros(field, n.rank, m.rank);
            for k in 0..m.rank {
                let w_of_m = if k == i { field.one() } else { field.zero() };
                image.set(j, k, w_of_m);
            }
            for (r, x) in hom_element(&image).into_iter().enumerate() {
                mat.set(r, i * n.rank + j, x);
            }
        }
    }
    LinearMap::new(tensor(m, n)?, hom_module(&dual_module(m), n)?, mat)
}

/// Evaluation pairing `M* (x) M -> K`.
pub fn evaluation(m: &FinModule) -> LinearMap {
    let field = m.field;
    let mut mat = Matrix::zeros(field, 1, m.rank * m.rank);
    for i in 0..m.rank {
        mat.set(0, i * m.rank + i, field.one());
    }
    LinearMap {
        domain: tensor(&dual_module(m), m).expect("same field"),
        codomain: FinModule::base(field),
        matrix: mat,
    }
}

/// Coevaluation `K -> M (x) M*`, `1 |-> sum e_i (x) eps_i`.
pub fn coevaluation(m: &FinModule) -> LinearMap {
    let field = m.field;
    let mut mat = Matrix::zeros(field, m.rank * m.rank, 1);
    for i in 0..m.rank {
        mat.set(i * m.rank + i, 0, field.one());
    }
    LinearMap {
        domain: FinModule::base(field),
        codomain: tensor(m, &dual_module(m)).expect("same field"),
        matrix: mat,
    }
}

/// `(id_M (x) ev) o (coev (x) id_M)`, which should be `id_M`.
pub fn snake(m: &FinModule) -> Result<LinearMap> {
    let id = LinearMap::identity(m);
    let first = tensor_map(&coevaluation(m), &id)?;
    let second = tensor_map(&id, &evaluation(m))?;
    // M -> (M (x) M*) (x) M = M (x) (M* (x) M) -> M; associativity of the
    // index convention makes the middle identification the identity.
    let mid = LinearMap::new(first.codomain.clone(), second.domain.clone(), Matrix::identity(m.field, m.rank.pow(3)))?;
    second.compose(&mid.compose(&first)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::unit_vector;

    const Q: Field = Field::Rational;

    #[test]
    fn dual_ranks() {
        for r in [0, 5] {
            let m = FinModule::new(Q, r);
            assert_eq!(dual_module(&m).rank, r);
            assert_eq!(dual_module(&dual_module(&m)).rank, r);
        }
    }

    #[test]
    fn dual_map_is_transpose() {
        let f = LinearMap::new(FinModule::new(Q, 2), FinModule::new(Q, 2), Matrix::from_i64(Q, &[&[1, 2], &[3, 4]])).unwrap();
        assert_eq!(dual_map(&f).matrix, Matrix::from_i64(Q, &[&[1, 3], &[2, 4]]));
        let id = LinearMap::identity(&FinModule::new(Q, 3));
        assert!(dual_map(&id).matrix.is_identity());
    }

    #[test]
    fn unit_is_identity() {
        assert!(double_dual_unit(&FinModule::new(Q, 3)).matrix.is_identity());
        let z = double_dual_unit(&FinModule::new(Q, 0));
        assert_eq!(z.matrix.shape(), (0, 0));
    }

    #[test]
    fn tensor_ranks() {
        let a = FinModule::new(Q, 2);
        assert_eq!(tensor(&a, &FinModule::new(Q, 3)).unwrap().rank, 6);
        assert_eq!(tensor(&a, &FinModule::new(Q, 0)).unwrap().rank, 0);
        assert!(tensor(&a, &FinModule::new(Field::Prime(2), 1)).is_err());
    }

    #[test]
    fn hom_ranks_and_inverse() {
        let m = FinModule::new(Q, 2);
        let n = FinModule::new(Q, 3);
        assert_eq!(hom_module(&m, &n).unwrap().rank, 6);
        let t = tensor_to_hom(&m, &n).unwrap();
        let h = hom_to_tensor(&m, &n).unwrap();
        assert!(h.compose(&t).unwrap().matrix.is_identity());
        assert!(t.compose(&h).unwrap().matrix.is_identity());
        // Hom(M, K) is M*.
        assert_eq!(hom_module(&m, &FinModule::base(Q)).unwrap().rank, dual_module(&m).rank);
    }

    #[test]
    fn tensor_to_hom_on_decomposable() {
        let m = FinModule::new(Q, 2);
        let n = FinModule::new(Q, 3);
        let t = tensor_to_hom(&m, &n).unwrap();
        // w = eps_1 + 2 eps_0, v = f_2
        let w = vec![Q.from_i64(2), Q.from_i64(1)];
        let v = unit_vector(Q, 3, 2);
        let x = crate::matrix::kron_vec(&w, &v);
        let f = hom_element_matrix(&m, &n, &t.apply(&x).unwrap()).unwrap();
        let u = vec![Q.from_i64(5), Q.from_i64(7)];
        let expect: Vec<_> = v.iter().map(|c| c * &Q.from_i64(2 * 5 + 7)).collect();
        assert_eq!(f.mul_vec(&u).unwrap(), expect);
    }

    #[test]
    fn dual_source_on_dual_basis() {
        let m = FinModule::new(Q, 2);
        let n = FinModule::new(Q, 2);
        let iso = hom_from_dual_source(&m, &n).unwrap();
        assert!(iso.matrix.is_invertible());
        let x = crate::matrix::kron_vec(&unit_vector(Q, 2, 0), &unit_vector(Q, 2, 0));
        let f = hom_element_matrix(&dual_module(&m), &n, &iso.apply(&x).unwrap()).unwrap();
        assert_eq!(f.mul_vec(&unit_vector(Q, 2, 0)).unwrap(), unit_vector(Q, 2, 0));
        assert!(f.mul_vec(&unit_vector(Q, 2, 1)).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn dual_source_with_base_field() {
        // M = K: e (x) v |-> (eps |-> v), the same as tensor_to_hom up to M = M*.
        let k = FinModule::base(Q);
        let n = FinModule::new(Q, 3);
        let a = hom_from_dual_source(&k, &n).unwrap();
        let b = tensor_to_hom(&k, &n).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn snake_identity() {
        for r in 0..=6 {
            assert!(snake(&FinModule::new(Q, r)).unwrap().matrix.is_identity(), "rank {r}");
        }
    }
}
