//! Liouvillian assembly and steady-state solvers.
//!
//! Superoperators act on column-stacked density matrices, so
//! `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.

use std::fmt;

use crate::dissipator::{mme_jumps, pme_jumps, JumpOperator};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, min_norm_null_vector, vec_norm, ComplexMatrix, C64, I, ZERO};
use crate::model::{hamiltonian_unchecked, validate_density, SystemParams};
use crate::tolerances::Tolerances;

/// Generator `L` of `vec(ρ̇) = L vec(ρ)`.
#[derive(Debug, Clone)]
pub struct Superoperator {
    matrix: ComplexMatrix,
    dim: usize,
}

impl Superoperator {
    /// Wraps a `d²×d²` matrix.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.rows();
        let dim = (n as f64).sqrt().round() as usize;
        if !matrix.is_square() || dim * dim != n {
            return Err(Error::DimensionMismatch {
                context: "superoperator",
                expected: (dim * dim, dim * dim),
                found: matrix.shape(),
            });
        }
        Ok(Self { matrix, dim })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::unvectorize(&self.matrix.mul_vec(&rho.vectorize()), self.dim)
    }

    /// `‖vec(I)† L‖`, zero for a trace-preserving generator.
    pub fn trace_preservation_residual(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for col in 0..n * n {
            let s: C64 = (0..n).map(|i| self.matrix[(i + n * i, col)]).sum();
            acc += s.norm_sqr();
        }
        acc.sqrt()
    }

    pub fn residual(&self, rho: &ComplexMatrix) -> f64 {
        vec_norm(&self.matrix.mul_vec(&rho.vectorize()))
    }
}

/// `L = −i(I⊗H − Hᵀ⊗I) + Σ_k [conj(O_k)⊗O_k − ½ I⊗O_k†O_k − ½ (O_k†O_k)ᵀ⊗I]`.
pub fn build_liouvillian(h: &ComplexMatrix, jumps: &[JumpOperator]) -> Result<Superoperator> {
    let d = h.rows();
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            context: "build_liouvillian hamiltonian",
            expected: (d, d),
            found: h.shape(),
        });
    }
    let norm = h.frobenius_norm();
    let deviation = h.hermitian_deviation();
    if deviation > Tolerances::DEFAULT.hermitian * norm {
        return Err(Error::NotHermitian { deviation, norm });
    }
    for j in jumps {
        if j.op.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                context: "build_liouvillian jump operator",
                expected: (d, d),
                found: j.op.shape(),
            });
        }
    }

    let id = ComplexMatrix::identity(d);
    let minus_i = -I;
    let mut l = (&kron(&id, h) - &kron(&h.transpose(), &id)).scale(minus_i);

    let mut decay = ComplexMatrix::zeros(d, d);
    for j in jumps {
        let jump_term = kron(&j.op.conj(), &j.op);
        l = &l + &jump_term;
        decay = &decay + &(&j.op.adjoint() * &j.op);
    }
    if !jumps.is_empty() {
        let anti = &kron(&id, &decay) + &kron(&decay.transpose(), &id);
        l = &l - &anti.scale_real(0.5);
    }
    Superoperator::from_matrix(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    NullSpace,
    TimeEvolution,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::NullSpace => "null-space",
            SolveMethod::TimeEvolution => "time-evolution",
        }
    }
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct SteadyStateReport {
    pub rho: ComplexMatrix,
    /// `‖L vec(ρ)‖` of the returned state.
    pub residual: f64,
    /// Two smallest singular values of `L`, ascending.
    pub smallest_singular: [f64; 2],
    /// Most negative eigenvalue of ρ before clipping.
    pub positivity_floor: f64,
    pub method: SolveMethod,
    /// False when the kernel of `L` looked degenerate.
    pub unique: bool,
}

impl SteadyStateReport {
    /// Second-smallest singular value of `L`.
    pub fn gap(&self) -> f64 {
        self.smallest_singular[1]
    }
}

/// Normalizes a candidate state: trace one, Hermitian, clipped positive.
/// Returns the state and the smallest eigenvalue before clipping.
fn clean_state(rho: &ComplexMatrix, tol: &Tolerances) -> Result<(ComplexMatrix, f64)> {
    let tr = rho.trace();
    let rho = rho.scale(tr.inv());
    let mut rho = rho.hermitian_part();
    let tr = rho.trace().re;
    rho = rho.scale_real(1.0 / tr);
    let eig = hermitian_eig(&rho)?;
    let floor = eig.values[0];
    if floor < -tol.positivity_clip {
        return Err(Error::NotPositive { min_eigenvalue: floor });
    }
    if floor < 0.0 {
        let clipped = eig.reconstruct_with(|x| x.max(0.0)).hermitian_part();
        let tr = clipped.trace().re;
        rho = clipped.scale_real(1.0 / tr);
    }
    Ok((rho, floor))
}

pub fn steady_state(l: &Superoperator) -> Result<SteadyStateReport> {
    steady_state_with(l, &Tolerances::DEFAULT)
}

/// Kernel of `L` via the minimum-norm right singular vector, with a
/// time-evolution fallback from the maximally mixed state when the kernel
/// is degenerate or the kernel vector fails the residual check.
pub fn steady_state_with(l: &Superoperator, tol: &Tolerances) -> Result<SteadyStateReport> {
    let d = l.dim();
    let null = min_norm_null_vector(l.matrix());
    let unique = null.smallest[1] >= tol.uniqueness;

    if unique {
        let candidate = ComplexMatrix::unvectorize(&null.vector, d);
        if candidate.trace().norm() > f64::EPSILON {
            let (rho, floor) = clean_state(&candidate, tol)?;
            let residual = l.residual(&rho);
            if residual <= tol.steady_residual {
                return Ok(SteadyStateReport {
                    rho,
                    residual,
                    smallest_singular: null.smallest,
                    positivity_floor: floor,
                    method: SolveMethod::NullSpace,
                    unique,
                });
            }
        }
    }

    let start = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    let evolved = evolve_with(l, &start, tol.max_time, tol.stall, tol)?;
    let (rho, floor) = clean_state(&evolved.rho, tol)?;
    let residual = l.residual(&rho);
    if residual > tol.steady_residual {
        return Err(Error::SteadyStateFailed {
            residual,
            method: SolveMethod::TimeEvolution.as_str(),
            smallest: null.smallest,
        });
    }
    Ok(SteadyStateReport {
        rho,
        residual,
        smallest_singular: null.smallest,
        positivity_floor: floor,
        method: SolveMethod::TimeEvolution,
        unique,
    })
}

/// One fixed RK4 step of `vec(ρ̇) = L vec(ρ)` as a matrix:
/// `P = I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24`.
#[derive(Debug, Clone)]
pub struct Rk4Propagator {
    pub step: f64,
    pub matrix: ComplexMatrix,
}

impl Rk4Propagator {
    pub fn new(l: &Superoperator, step: f64) -> Self {
        let n = l.matrix().rows();
        let hl = l.matrix().scale_real(step);
        // Horner: I + hL(I + hL/2(I + hL/3(I + hL/4)))
        let id = ComplexMatrix::identity(n);
        let mut acc = &id + &hl.scale_real(0.25);
        for k in [3.0, 2.0, 1.0] {
            acc = &id + &(&hl * &acc).scale_real(1.0 / k);
        }
        Self { step, matrix: acc }
    }

    /// Step `h = fraction / ‖L‖_∞`.
    pub fn with_fraction(l: &Superoperator, fraction: f64) -> Self {
        let norm = l.matrix().inf_norm();
        let step = if norm > 0.0 { fraction / norm } else { fraction };
        Self::new(l, step)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.mul_vec(v)
    }

    /// Propagator for twice as many steps.
    pub fn squared(&self) -> Self {
        Self {
            step: self.step * 2.0,
            matrix: &self.matrix * &self.matrix,
        }
    }
}

fn renormalize_trace(v: &mut [C64], d: usize) {
    let tr: C64 = (0..d).map(|i| v[i + d * i]).sum();
    if tr.norm() > 0.0 {
        let inv = tr.inv();
        for z in v.iter_mut() {
            *z *= inv;
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub rho: ComplexMatrix,
    pub time: f64,
    pub residual: f64,
    pub converged: bool,
}

pub fn evolve(
    l: &Superoperator,
    rho0: &ComplexMatrix,
    max_time: f64,
    stall_tol: f64,
) -> Result<Evolution> {
    evolve_with(l, rho0, max_time, stall_tol, &Tolerances::DEFAULT)
}

/// Fixed-step RK4 integration until `‖L vec(ρ)‖ < stall_tol` or `max_time`.
///
/// The step is `h = step_fraction / ‖L‖_∞`. Blocks of `2^k` steps are
/// applied with the squared one-step propagator, so the horizon doubles
/// after every check; the trace is renormalized after each block.
pub fn evolve_with(
    l: &Superoperator,
    rho0: &ComplexMatrix,
    max_time: f64,
    stall_tol: f64,
    tol: &Tolerances,
) -> Result<Evolution> {
    let d = l.dim();
    if rho0.shape() != (d, d) {
        return Err(Error::DimensionMismatch {
            context: "evolve initial state",
            expected: (d, d),
            found: rho0.shape(),
        });
    }
    validate_density(rho0, tol.density)?;

    let mut block = Rk4Propagator::with_fraction(l, tol.step_fraction);
    let mut state = rho0.vectorize();
    let mut time = 0.0;
    loop {
        let residual = vec_norm(&l.matrix().mul_vec(&state));
        if residual < stall_tol {
            return Ok(Evolution {
                rho: ComplexMatrix::unvectorize(&state, d).hermitian_part(),
                time,
                residual,
                converged: true,
            });
        }
        if time + block.step > max_time {
            return Ok(Evolution {
                rho: ComplexMatrix::unvectorize(&state, d).hermitian_part(),
                time,
                residual,
                converged: false,
            });
        }
        state = block.apply(&state);
        renormalize_trace(&mut state, d);
        time += block.step;
        block = block.squared();
    }
}

/// Integrates for (approximately) `duration` with fixed RK4 steps no larger
/// than `step_fraction / ‖L‖_∞`, renormalizing the trace after every step.
pub fn evolve_for(l: &Superoperator, rho0: &ComplexMatrix, duration: f64, step_fraction: f64) -> ComplexMatrix {
    let d = l.dim();
    let norm = l.matrix().inf_norm();
    let max_step = if norm > 0.0 { step_fraction / norm } else { duration.max(1.0) };
    let steps = (duration / max_step).ceil().max(1.0) as usize;
    let prop = Rk4Propagator::new(l, duration / steps as f64);
    let mut state = rho0.vectorize();
    for _ in 0..steps {
        state = prop.apply(&state);
        renormalize_trace(&mut state, d);
    }
    ComplexMatrix::unvectorize(&state, d)
}

/// Liouvillian of the local (phenomenological) model.
pub fn pme_liouvillian(p: &SystemParams) -> Result<Superoperator> {
    let jumps = pme_jumps(p)?;
    build_liouvillian(&hamiltonian_unchecked(p), &jumps)
}

/// Liouvillian of the global (microscopic) model.
pub fn mme_liouvillian(p: &SystemParams) -> Result<Superoperator> {
    let jumps = mme_jumps(p)?;
    build_liouvillian(&hamiltonian_unchecked(p), &jumps)
}

pub fn pme_steady_state(p: &SystemParams) -> Result<SteadyStateReport> {
    p.validate_dissipative()?;
    steady_state(&pme_liouvillian(p)?)
}

pub fn mme_steady_state(p: &SystemParams) -> Result<SteadyStateReport> {
    p.validate_dissipative()?;
    steady_state(&mme_liouvillian(p)?)
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    let diff = (rho - sigma).hermitian_part();
    let eig = hermitian_eig(&diff)?;
    Ok(0.5 * eig.values.iter().map(|x| x.abs()).sum::<f64>())
}

/// `⟨ψ|ρ|ψ⟩` for a unit vector ψ.
pub fn fidelity_with_pure(rho: &ComplexMatrix, psi: &[C64]) -> f64 {
    let rho_psi = rho.mul_vec(psi);
    psi.iter()
        .zip(&rho_psi)
        .map(|(a, b)| a.conj() * b)
        .fold(ZERO, |acc, z| acc + z)
        .re
}
