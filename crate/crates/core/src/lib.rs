//! Finite-dimensional laboratory for quantum measurement models.
//!
//! The crate builds explicit von Neumann style measurement models on
//! `C^{d_s} ⊗ C^{d_e}`, defines apparatus configuration regions through the
//! Hilbert–Schmidt geometry of square roots of density operators, and runs
//! the verification suites showing that superposition inputs never reach a
//! definite configuration.

pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod par;
pub mod states;

pub use error::{LabError, Result};
pub use linalg::ComplexMatrix;
pub use measurement::{Classification, ConfigurationRegions, Label, MeasurementModel};
pub use states::{DensityOperator, StateVector};
