//! Exact arithmetic over finite fields, F_q[x] and F_q(x).

pub mod embedding;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod ratfunc;

pub use embedding::FieldEmbedding;
pub use factor::{poly_factor, roots};
pub use field::{FiniteField, FqElem};
pub use linalg::{solve_fp, solve_fqx, MatrixFp, Solution};
pub use poly::DensePoly;
pub use ratfunc::RatFunc;
