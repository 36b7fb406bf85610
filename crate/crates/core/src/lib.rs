//! Permutation classes counted by Fibonacci numbers minus one: structure,
//! tiling bijections, the `inv` and `Fib` statistics, their bivariate
//! generating functions, and a checker for every closed form involved.

pub mod bijections;
pub mod classes;
pub mod error;
pub mod fib;
pub mod genfun;
pub mod perm;
pub mod poly;
pub mod stats;
pub mod verify;

pub use bijections::{phi, phi_inverse, rho, rho_inverse};
pub use classes::{compose, count, decompose, generate, ClassId, Decomposition};
pub use error::{Error, Result};
pub use fib::{fib_number, fib_stat, is_fibonacci, Tile, Tiling};
pub use perm::{brute_force_av, contains_pattern, inversions, PatternSet, Permutation};
pub use poly::BivariatePolynomial;
pub use stats::{Distribution, Stat, Tabulation, Variant};
pub use verify::{check_identity, IdentityId, IdentityReport, ParamRange, Status};
