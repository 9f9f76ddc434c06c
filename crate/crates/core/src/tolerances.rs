//! Numerical tolerances used across the crate.
//!
//! Every threshold lives here so that a single record can be passed to the
//! `*_with` variants of the solvers. [`Tolerances::default`] holds the
//! project defaults.

/// Tolerance configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Frobenius deviation from Hermiticity accepted by the eigensolver.
    pub hermitian: f64,
    /// Jacobi sweeps stop once the off-diagonal Frobenius norm falls below
    /// this fraction of the input norm.
    pub jacobi_offdiag: f64,
    /// Density-matrix validation (Hermiticity, trace, positivity).
    pub density: f64,
    /// Bohr frequencies closer than `degeneracy * ‖H‖_F` share a bin.
    pub degeneracy: f64,
    /// Bohr bins with a smaller Frobenius norm are dropped.
    pub bohr_drop: f64,
    /// Maximum accepted `‖L vec(ρ)‖` for a steady state.
    pub steady_residual: f64,
    /// Second-smallest singular value of the Liouvillian below which the
    /// kernel is treated as degenerate.
    pub uniqueness: f64,
    /// Eigenvalues of a steady state in `(-positivity_clip, 0)` are clipped.
    pub positivity_clip: f64,
    /// Residual at which time evolution is considered stalled.
    pub stall: f64,
    /// Fixed RK4 step as a fraction of `1 / ‖L‖_∞`.
    pub step_fraction: f64,
    /// Time horizon for the evolution fallback.
    pub max_time: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-12,
        jacobi_offdiag: 1e-13,
        density: 1e-9,
        degeneracy: 1e-9,
        bohr_drop: 1e-12,
        steady_residual: 1e-8,
        uniqueness: 1e-8,
        positivity_clip: 1e-9,
        stall: 1e-10,
        step_fraction: 0.1,
        max_time: 1e12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
