use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Property of a density matrix that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityProperty {
    Square,
    Hermitian,
    UnitTrace,
    PositiveSemidefinite,
}

impl fmt::Display for DensityProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DensityProperty::Square => "square",
            DensityProperty::Hermitian => "hermitian",
            DensityProperty::UnitTrace => "unit trace",
            DensityProperty::PositiveSemidefinite => "positive semidefinite",
        };
        f.write_str(s)
    }
}

/// One disagreeing entry found by the closed-form audit.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryDiff {
    pub name: String,
    pub closed_form: Complex64,
    pub numeric: Complex64,
}

impl EntryDiff {
    pub fn deviation(&self) -> f64 {
        (self.closed_form - self.numeric).norm()
    }
}

impl fmt::Display for EntryDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: closed form {:.10e}{:+.10e}i, numeric {:.10e}{:+.10e}i (|diff| {:.3e})",
            self.name,
            self.closed_form.re,
            self.closed_form.im,
            self.numeric.re,
            self.numeric.im,
            self.deviation()
        )
    }
}

fn join_diffs(diffs: &[EntryDiff]) -> String {
    diffs
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not hermitian: ‖M − M†‖_F = {deviation:.3e} (‖M‖_F = {norm:.3e})")]
    NotHermitian { deviation: f64, norm: f64 },

    #[error("dimension mismatch in {context}: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid density matrix: not {property} (deviation {deviation:.3e})")]
    InvalidDensityMatrix {
        property: DensityProperty,
        deviation: f64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "steady state failed: residual {residual:.3e} after {method}, smallest singular values {smallest:?}"
    )]
    SteadyStateFailed {
        residual: f64,
        method: &'static str,
        smallest: [f64; 2],
    },

    #[error("steady state has eigenvalue {min_eigenvalue:.3e} below the clipping floor")]
    NotPositive { min_eigenvalue: f64 },

    #[error("no cube-root branch matches the spectrum: branches {branches:?}, eigenvalues {eigenvalues:?}")]
    NoRealBranch {
        branches: Vec<Complex64>,
        eigenvalues: Vec<f64>,
    },

    #[error("closed-form ground state overlap {overlap:.12} with the numeric eigenvector is too small")]
    GroundStateOverlap { overlap: f64 },

    #[error("closed-form reduced state disagrees with numeric pipeline: {}", join_diffs(.0))]
    AppendixMismatch(Vec<EntryDiff>),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
