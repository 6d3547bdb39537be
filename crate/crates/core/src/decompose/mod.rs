//! Certificates `(A, R)`: the finite-dimensional construction, the
//! symbol-level zero-sum check and the `Ξ₂` minimization.

pub mod certificate;
pub mod sum_of_norms;
pub mod theorem5;
pub mod xi2;

pub use certificate::{prop4_solve, prop4_solve_with_route, Certificate, Route};
pub use sum_of_norms::{convex_subproblem, AffineNorm, Domain, Solution, SolverOptions, SumOfNorms};
pub use theorem5::{semicommutator_certificates, theorem5_check, Theorem5Outcome};
pub use xi2::{xi2, Xi2Options, XiResult};
