//! Three-qubit Hamiltonian, single-site embeddings and the partial trace
//! over the ancilla.
//!
//! Basis convention: sites are ordered (A, B, C) and each site uses index 0
//! for the excited state `|e⟩` (σ_z|e⟩ = +|e⟩) and index 1 for `|g⟩`.
//! The composite index is `4·i_A + 2·i_B + i_C`, so `|eee⟩` is index 0 and
//! `|ggg⟩` is index 7. With this ordering the closed-form ground state
//! (see [`crate::analytic`]) has support on indices {1, 2, 4, 7}, i.e.
//! `|eeg⟩, |ege⟩, |gee⟩, |ggg⟩`, which the numeric eigenvectors confirm.

use crate::error::{DensityProperty, Error, Result};
use crate::linalg::{hermitian_eig, kron, ComplexMatrix, C64};

/// Physical parameters (ħ = 1). Qubits A and B share `omega0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega0: f64,
    pub omega_c: f64,
    pub j: f64,
    pub j_c: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma_c: f64,
}

impl SystemParams {
    /// Parameters with the same dissipation rate on all three sites.
    pub fn uniform(omega0: f64, omega_c: f64, j: f64, j_c: f64, gamma: f64) -> Self {
        Self {
            omega0,
            omega_c,
            j,
            j_c,
            gamma_a: gamma,
            gamma_b: gamma,
            gamma_c: gamma,
        }
    }

    pub fn gamma(&self, site: Site) -> f64 {
        match site {
            Site::A => self.gamma_a,
            Site::B => self.gamma_b,
            Site::C => self.gamma_c,
        }
    }

    pub fn with_gamma_scaled(&self, factor: f64) -> Self {
        Self {
            gamma_a: self.gamma_a * factor,
            gamma_b: self.gamma_b * factor,
            gamma_c: self.gamma_c * factor,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega0,
            self.omega_c,
            self.j,
            self.j_c,
            self.gamma_a,
            self.gamma_b,
            self.gamma_c,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.omega0 <= 0.0 || self.omega_c <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "eigenfrequencies must be positive (omega0 = {}, omega_c = {})",
                self.omega0, self.omega_c
            )));
        }
        if self.gamma_a < 0.0 || self.gamma_b < 0.0 || self.gamma_c < 0.0 {
            return Err(Error::InvalidParams("dissipation rates must be non-negative".into()));
        }
        Ok(())
    }

    /// Validation for runs that include dissipation.
    pub fn validate_dissipative(&self) -> Result<()> {
        self.validate()?;
        if Site::ALL.iter().all(|&s| self.gamma(s) == 0.0) {
            return Err(Error::InvalidParams(
                "at least one dissipation rate must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    A,
    B,
    C,
}

impl Site {
    pub const ALL: [Site; 3] = [Site::A, Site::B, Site::C];
}

impl std::fmt::Display for Site {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Site::A => "A",
            Site::B => "B",
            Site::C => "C",
        };
        f.write_str(s)
    }
}

pub const DIM: usize = 8;

pub mod pauli {
    use crate::linalg::{ComplexMatrix, C64};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> ComplexMatrix {
        let z = C64::new(0.0, 0.0);
        ComplexMatrix::from_vec(2, 2, vec![z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    /// σ₋ = (σ_x − iσ_y)/2, so σ₋|e⟩ = |g⟩.
    pub fn lowering() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0])
    }

    pub fn raising() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0])
    }
}

/// Composite basis index of a product state; `true` means excited.
pub fn basis_index(a_excited: bool, b_excited: bool, c_excited: bool) -> usize {
    let bit = |excited: bool| usize::from(!excited);
    4 * bit(a_excited) + 2 * bit(b_excited) + bit(c_excited)
}

pub fn basis_state(index: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); DIM];
    v[index] = C64::new(1.0, 0.0);
    v
}

/// Embeds a single-qubit operator at `site`. Panics unless `op` is 2×2.
pub fn embed(op: &ComplexMatrix, site: Site) -> ComplexMatrix {
    assert_eq!(op.shape(), (2, 2), "single-site operator must be 2x2");
    let id = ComplexMatrix::identity(2);
    let factors: [&ComplexMatrix; 3] = match site {
        Site::A => [op, &id, &id],
        Site::B => [&id, op, &id],
        Site::C => [&id, &id, op],
    };
    kron(&kron(factors[0], factors[1]), factors[2])
}

/// `H = (ω₀/2)(σ_z^A + σ_z^B) + (ω_C/2)σ_z^C + J σ_x^A σ_x^B + J_C(σ_x^A σ_x^C + σ_x^B σ_x^C)`.
pub fn build_hamiltonian(p: &SystemParams) -> Result<ComplexMatrix> {
    p.validate()?;
    Ok(hamiltonian_unchecked(p))
}

pub(crate) fn hamiltonian_unchecked(p: &SystemParams) -> ComplexMatrix {
    let z = pauli::z();
    let x = pauli::x();
    let za = embed(&z, Site::A);
    let zb = embed(&z, Site::B);
    let zc = embed(&z, Site::C);
    let xa = embed(&x, Site::A);
    let xb = embed(&x, Site::B);
    let xc = embed(&x, Site::C);

    let free = &(&za + &zb).scale_real(p.omega0 / 2.0) + &zc.scale_real(p.omega_c / 2.0);
    let ab = (&xa * &xb).scale_real(p.j);
    let with_c = (&(&xa * &xc) + &(&xb * &xc)).scale_real(p.j_c);
    &free + &(&ab + &with_c)
}

/// Checks Hermiticity, unit trace and positivity of a density matrix.
pub fn validate_density(rho: &ComplexMatrix, tol: f64) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::InvalidDensityMatrix {
            property: DensityProperty::Square,
            deviation: f64::NAN,
        });
    }
    let herm = rho.hermitian_deviation();
    if herm > tol {
        return Err(Error::InvalidDensityMatrix {
            property: DensityProperty::Hermitian,
            deviation: herm,
        });
    }
    let trace_dev = (rho.trace() - C64::new(1.0, 0.0)).norm();
    if trace_dev > tol {
        return Err(Error::InvalidDensityMatrix {
            property: DensityProperty::UnitTrace,
            deviation: trace_dev,
        });
    }
    let eig = hermitian_eig(&rho.hermitian_part())?;
    let min = eig.values[0];
    if min < -tol {
        return Err(Error::InvalidDensityMatrix {
            property: DensityProperty::PositiveSemidefinite,
            deviation: -min,
        });
    }
    Ok(())
}

/// `Tr_C` of an 8×8 density matrix, leaving qubits (A, B) in the basis
/// `2·i_A + i_B`.
pub fn partial_trace_c(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.shape() != (DIM, DIM) {
        return Err(Error::DimensionMismatch {
            context: "partial_trace_c",
            expected: (DIM, DIM),
            found: rho.shape(),
        });
    }
    validate_density(rho, 1e-9)?;
    Ok(partial_trace_c_unchecked(rho))
}

/// Linear partial trace without density-matrix validation.
pub fn partial_trace_c_unchecked(rho: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)])
}
