//! Exact scalars, polynomials, rational functions and linear algebra.

pub mod linalg;
pub mod poly;
pub mod ratfn;
pub mod scalar;
pub mod var;

pub use linalg::{certified_rank, determinant, linear_solve, matrix_rank, nullspace, Matrix};
pub use poly::{Assignment, Monomial, PolyExpr};
pub use ratfn::RatExpr;
pub use scalar::Scalar;
pub use var::{Dir, Fiber, MultiIndex, Var};
