//! Quantum Stirling engine built on a dipolar-coupled two-spin working
//! medium.
//!
//! The working substance is a heteronuclear spin pair whose dipole-dipole
//! interaction is tuned through the orientation angle theta; sweeping the
//! angle between two values while alternating bath contact traces a Stirling
//! cycle. The crate provides:
//!
//! - [`operator`]: dense complex operator algebra with a deterministic
//!   Hermitian eigensolver sized for the 4-level problem,
//! - [`spin`]: the Zeeman + J + dipolar Hamiltonian in peV units,
//! - [`thermo`]: Gibbs states, internal energy, entropy, Uhlmann fidelity,
//! - [`cycle`]: quasistatic cycle evaluation and angle sweeps,
//! - [`lindblad`]: Davies dissipator, master-equation propagation, the
//!   stepwise finite-time isothermal protocol, and power estimation,
//! - [`config`], [`table`], [`runner`]: the key = value run configuration,
//!   CSV emission, and command dispatch behind the CLI.
//!
//! Units: energies in peV, times in ns, angles in rad, field in mT, and
//! temperatures given as k_B T in peV.

pub mod config;
pub mod cycle;
pub mod error;
pub mod lindblad;
pub mod operator;
pub mod runner;
pub mod spin;
pub mod table;
pub mod thermo;

pub use error::{Error, Result};
