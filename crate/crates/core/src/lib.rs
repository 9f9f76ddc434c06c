//! Steady-state quantum resources of two qubits coupled through an ancilla.

pub mod analytic;
pub mod dissipator;
pub mod error;
pub mod linalg;
pub mod model;
pub mod resources;
pub mod selfcheck;
pub mod steady;
pub mod sweep;
pub mod tolerances;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use model::SystemParams;
pub use tolerances::Tolerances;
