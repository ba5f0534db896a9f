//! Lattice-based integer factoring laboratory.
//!
//! The crate follows the data flow of Schnorr-style factoring end to end:
//!
//! 1. [`lattice`] builds the prime lattice and target vector for `n`, reduces
//!    the basis with exact LLL and runs Babai's nearest-plane algorithm.
//! 2. [`ising`] turns the Babai rounding problem into a diagonal Ising
//!    Hamiltonian whose bitstring energies are squared distances to the target.
//! 3. [`qaoa`] simulates (multi-angle) QAOA on that Hamiltonian.
//! 4. [`heuristics`] turns one lattice into a set of candidate lattice vectors
//!    (Babai only, exact minimization, hill climbing, QAOA, local search,
//!    random rounding).
//! 5. [`relations`] converts candidates into `(u, v)` pairs and keeps the
//!    smooth ones.
//! 6. [`solver`] runs the GF(2) processing and extracts factors, and drives
//!    the whole collection loop.
//!
//! [`analysis`] holds the Dickman-rho density machinery and scaling fits;
//! [`cli`] is the benchmark and reporting harness used by the `latfac` binary.

pub mod analysis;
pub mod cli;
mod error;
pub mod heuristics;
pub mod ising;
pub mod lattice;
pub mod numth;
pub mod qaoa;
pub mod record;
pub mod relations;
pub mod solver;

pub use error::{Error, Result};
