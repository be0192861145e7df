//! The p-Riccati equation f^(p-1) + f^p = a^p over algebraic function fields
//! of characteristic p, and the irreducibility and factorization of central
//! differential operators N(d^p) that it governs.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod function_field;
pub mod irreducibility;
pub mod local;
pub mod ore;
pub mod solver;

pub use error::{Error, Result};
pub use function_field::{CurveField, FFElem};
pub use irreducibility::{is_reducible, IrreducibilityReport, PlaceReport, Verdict};
pub use solver::{solve, solve_priccati, SolveOutcome};
