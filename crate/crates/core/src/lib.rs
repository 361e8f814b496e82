//! Exact duality calculus for functors of modules over finite-dimensional
//! test algebras, towers of modules, finite bialgebras and the finite dual
//! of `K[x]`, over `Q` and `GF(p)`.

pub mod adjunction;
pub mod algebra;
pub mod bialgebra;
pub mod criteria;
pub mod error;
pub mod findual;
pub mod functor;
pub mod matrix;
pub mod module;
pub mod nat;
pub mod random;
pub mod scalar;
pub mod suite;
pub mod tower;

pub use algebra::{FinAlgebra, TestAlgebra, Universe};
pub use bialgebra::{FinBialgebra, FinCoalgebra, GroupTable};
pub use error::{Error, Result};
pub use findual::{Model, RecursiveFunctional};
pub use functor::{FunctorOnUniverse, PresentedFunctor, QuasiCoherent};
pub use matrix::{Matrix, Vector};
pub use module::{FinModule, LinearMap};
pub use nat::NatSpace;
pub use scalar::{Field, Rational, Scalar};
pub use tower::Tower;
