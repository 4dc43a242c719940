//! Numerical toolkit for entanglement in one-dimensional anyon chains.
//!
//! The crate is organised bottom-up:
//!
//! - [`category`]: unitary (pre)modular category data (fusion rules, quantum
//!   dimensions, F- and R-symbols, S-matrices) for SU(2)_k, Fibonacci and
//!   abelian Z_n anyons, plus pentagon/hexagon validation.
//! - [`fusion`]: fusion-tree bases of `L` identical anyons, fusion-space
//!   dimensions (integer matrix powers and the Verlinde formula), torus
//!   dimensions and the bipartite basis transform.
//! - [`entropy`]: states in a fixed total-charge sector, the partial quantum
//!   trace, anyonic entanglement entropy, Haar sampling and Monte-Carlo
//!   statistics.
//! - [`analytic`]: exact Haar averages and variances of the anyonic
//!   entanglement entropy, large-`L` asymptotics, the double-scaling crossover
//!   and q-deformed symmetry-resolved entropies.
//! - [`hamiltonian`]: the open golden chain with braided next-nearest-neighbour
//!   term, its reflection symmetry, exact diagonalisation, level-spacing
//!   statistics and eigenstate entanglement curves.
//!
//! All entropies are in nats.

pub mod analytic;
pub mod category;
pub mod entropy;
pub mod error;
pub mod fusion;
pub mod hamiltonian;
pub mod special;
pub mod tol;

pub use category::{AnyonModel, FMatrix, Label, ModelKind, ValidationReport};
pub use error::{Error, Result};
pub use fusion::{BipartiteDecomposition, FusionBasis};

pub use num_complex::Complex64;
