//! Places of K_N, Laurent expansions and local p-Riccati analysis.

pub mod newton;
pub mod place;
pub mod puiseux;
pub mod series;
pub mod system;
