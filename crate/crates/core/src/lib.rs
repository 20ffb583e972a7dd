//! Exact-arithmetic engine for Rankin-Cohen brackets and differential
//! symmetry breaking operators on the disk/upper half-plane.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere in this crate. The main pieces:
//!
//! - [`rational`]: exact scalars, Pochhammer symbols, generalized binomials
//! - [`poly`]: sparse multivariate polynomials with a canonical text form
//! - [`linalg`]: exact Gaussian elimination, kernels and linear solves
//! - [`bidiff`]: constant-coefficient bidifferential operators via symbols
//! - [`jacobi`]: Jacobi polynomials, their two-variable inflation, the
//!   Jacobi ODE and the exceptional parameter set where the family degenerates
//! - [`sl2`]: the infinitesimal sl(2) action, lowest-weight modules and the
//!   singular-vector solver
//! - [`rankin_cohen`]: bracket construction, covariance certification and a
//!   brute-force dimension oracle for symmetry breaking operators
//! - [`classify`]: the closed-form trichotomy for dim H(l', l'', l''') with
//!   the exceptional operators D1, D2, D3 and their factorizations
//! - [`un1`]: higher-dimensional bracket analogues for U(n,1)
//! - [`qexp`]: q-expansion arithmetic for modular-form sanity checks
//! - [`verify`]: grid-sweep verification suites behind the CLI

pub mod bidiff;
pub mod classify;
pub mod jacobi;
pub mod linalg;
pub mod poly;
pub mod qexp;
pub mod rankin_cohen;
pub mod rational;
pub mod sl2;
pub mod un1;
pub mod verify;

pub use bidiff::BiDiffOp;
pub use poly::Poly;
pub use rational::Rat;
