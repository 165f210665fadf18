//! Compact uniform eigenfunctions of the H₂⁺ molecular ion.
//!
//! The library optimizes a seven-parameter separable trial function in
//! prolate spheroidal coordinates, builds first-order nonlinearization
//! corrections on top of it, computes the 1sσg→2pσu oscillator strength, and
//! checks everything against an independent shooting solver of the separated
//! equations. Energies are in Rydbergs and lengths in Bohr throughout.

pub mod cli;
pub mod error;
pub mod jet;
pub mod observables;
pub mod nonlinearization;
pub mod oracle;
pub mod presets;
pub mod prolate;
pub mod quadrature;
pub mod simplex;
pub mod trial;
pub mod variational;
pub mod verify;

pub use error::{Error, Result};
pub use prolate::{Geometry, Parity, ProlatePoint, SpectralPair, StateLabel};
pub use trial::TrialParams;
pub use variational::{energy_expectation, minimize, SolveResult, SolverConfig};
