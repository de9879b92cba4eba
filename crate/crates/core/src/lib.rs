//! Resource estimation and logical compilation for double-factorized
//! qubitization of molecular Hamiltonians on a fusion-based architecture.
//!
//! The crate is organized around the pipeline stages:
//!
//! * [`factorize`]: two-level eigendecomposition of the electron-repulsion
//!   tensor, truncation, and the Hamiltonian norm `alpha`.
//! * [`cost`]: logical T-count / T-depth / qubit-count model of the
//!   qubitization walk, QROM space-time tuning, and error-budget splitting.
//! * [`overhead`]: fault-tolerant footprint and runtime under the
//!   surface-code / fusion-network model (code distance, RSG counts,
//!   distillation share, interleaving trade-offs).
//! * [`gizens`]: synthesis of linear-depth and log-depth fermionic basis
//!   change circuits with brute-force verification.
//! * [`ppm`]: Pauli product measurement circuits, Clifford frame tracking,
//!   Clifford+T compilation and execution, commuting-layer scheduling.
//! * [`sim`]: dense statevector oracle used by the verification suites.
//! * [`cli`]: batch front-end: molecule ingestion, estimate/overhead runs,
//!   CSV and table emission.

pub mod cli;
pub mod cost;
pub mod error;
pub mod factorize;
pub mod gizens;
pub mod overhead;
pub mod pauli;
pub mod ppm;
pub mod sim;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
