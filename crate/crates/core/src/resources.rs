//! Entanglement, steering and Bell-nonlocality measures of two-qubit states.
//!
//! Steering and nonlocality are closed forms in the singular values of the
//! correlation matrix `T_mn = Tr(ρ σ_m⊗σ_n)`; for a diagonal `T` they reduce
//! to the `(c₁, c₂, c₃)` expressions in [`steering_from_diagonal`] and
//! [`bell_from_diagonal`].

use crate::error::Result;
use crate::linalg::{hermitian_eig, kron, svd_values, ComplexMatrix, C64};
use crate::model::{pauli, validate_density};
use crate::tolerances::Tolerances;

const SQRT3: f64 = 1.732_050_807_568_877_2;
const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Wootters concurrence.
///
/// With `Y = σ_y⊗σ_y`, `ρ̃ρ` is similar to `M M†` for `M = √ρ Y √ρ*`, so the
/// square roots of its eigenvalues are the singular values of `M`. Working
/// with `M` keeps genuinely small eigenvalues of `ρ̃ρ` instead of amplifying
/// their rounding noise through a square root.
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    concurrence_with(rho, &Tolerances::DEFAULT)
}

pub fn concurrence_with(rho: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    check_two_qubit(rho, tol)?;
    let rho = rho.hermitian_part();
    let yy = kron(&pauli::y(), &pauli::y());
    // eigenvalues of ρ at rounding level are treated as exact zeros
    let floor = 16.0 * f64::EPSILON * rho.trace().re;
    let sqrt_rho = hermitian_eig(&rho)?.reconstruct_with(|x| if x > floor { x.sqrt() } else { 0.0 });
    let m = &(&sqrt_rho * &yy) * &sqrt_rho.conj();
    let roots = svd_values(&m);
    let e = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(e.clamp(0.0, 1.0))
}

fn check_two_qubit(rho: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    if rho.shape() != (4, 4) {
        return Err(crate::error::Error::DimensionMismatch {
            context: "two-qubit state",
            expected: (4, 4),
            found: rho.shape(),
        });
    }
    validate_density(rho, tol.density)
}

/// Bloch form `ρ = ¼(1⊗1 + a·σ⊗1 + 1⊗b·σ + Σ_mn T_mn σ_m⊗σ_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitBloch {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

fn paulis() -> [ComplexMatrix; 3] {
    [pauli::x(), pauli::y(), pauli::z()]
}

fn expectation(rho: &ComplexMatrix, op: &ComplexMatrix) -> f64 {
    let n = rho.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho[(i, j)] * op[(j, i)];
        }
    }
    acc.re
}

impl TwoQubitBloch {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        let s = paulis();
        let mut out = ComplexMatrix::identity(4);
        for m in 0..3 {
            out = &out + &kron(&s[m], &id).scale_real(self.a[m]);
            out = &out + &kron(&id, &s[m]).scale_real(self.b[m]);
            for n in 0..3 {
                out = &out + &kron(&s[m], &s[n]).scale_real(self.t[m][n]);
            }
        }
        out.scale_real(0.25)
    }

    pub fn correlation_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(3, 3, |m, n| C64::new(self.t[m][n], 0.0))
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [self.t[0][0], self.t[1][1], self.t[2][2]]
    }

    /// Largest off-diagonal `|T_mn|`.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut max: f64 = 0.0;
        for m in 0..3 {
            for n in 0..3 {
                if m != n {
                    max = max.max(self.t[m][n].abs());
                }
            }
        }
        max
    }

    /// Singular values of `T`, descending.
    pub fn correlation_singular_values(&self) -> [f64; 3] {
        let s = svd_values(&self.correlation_matrix());
        [s[0], s[1], s[2]]
    }
}

pub fn bloch_decompose(rho: &ComplexMatrix) -> Result<TwoQubitBloch> {
    check_two_qubit(rho, &Tolerances::DEFAULT)?;
    Ok(bloch_unchecked(rho))
}

pub(crate) fn bloch_unchecked(rho: &ComplexMatrix) -> TwoQubitBloch {
    let id = ComplexMatrix::identity(2);
    let s = paulis();
    let mut out = TwoQubitBloch {
        a: [0.0; 3],
        b: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for m in 0..3 {
        out.a[m] = expectation(rho, &kron(&s[m], &id));
        out.b[m] = expectation(rho, &kron(&id, &s[m]));
        for n in 0..3 {
            out.t[m][n] = expectation(rho, &kron(&s[m], &s[n]));
        }
    }
    out
}

fn steering_from_singular(s: &[f64; 3]) -> f64 {
    let c = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    ((c - 1.0) / (SQRT3 - 1.0)).clamp(0.0, 1.0)
}

fn bell_from_singular(s: &[f64; 3]) -> f64 {
    let top_two = (s[0] * s[0] + s[1] * s[1]).sqrt();
    ((top_two - 1.0) / (SQRT2 - 1.0)).clamp(0.0, 1.0)
}

/// Three-measurement steering measure `max{0, (c − 1)/(√3 − 1)}` with
/// `c² = Σ s_i²` over the singular values of `T`.
pub fn steering_measure(rho: &ComplexMatrix) -> Result<f64> {
    let bloch = bloch_decompose(rho)?;
    Ok(steering_from_singular(&bloch.correlation_singular_values()))
}

/// CHSH nonlocality measure `max{0, (√(s₁² + s₂²) − 1)/(√2 − 1)}`.
pub fn bell_measure(rho: &ComplexMatrix) -> Result<f64> {
    let bloch = bloch_decompose(rho)?;
    Ok(bell_from_singular(&bloch.correlation_singular_values()))
}

/// Steering for a diagonal correlation matrix with entries `c`.
pub fn steering_from_diagonal(c: [f64; 3]) -> f64 {
    let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    ((norm - 1.0) / (SQRT3 - 1.0)).max(0.0)
}

/// Bell nonlocality for a diagonal correlation matrix, using
/// `√(c² − c_min²)` with `c_min = min |c_i|`.
pub fn bell_from_diagonal(c: [f64; 3]) -> f64 {
    let c2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
    let c_min = c.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    (((c2 - c_min * c_min).max(0.0).sqrt() - 1.0) / (SQRT2 - 1.0)).max(0.0)
}

/// All three measures of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resources {
    pub concurrence: f64,
    pub steering: f64,
    pub bell: f64,
}

impl Resources {
    /// `N > 0 ⟹ S > 0 ⟹ E > 0`.
    pub fn respects_hierarchy(&self) -> bool {
        (self.bell <= 0.0 || self.steering > 0.0) && (self.steering <= 0.0 || self.concurrence > 0.0)
    }
}

pub fn resources(rho: &ComplexMatrix) -> Result<Resources> {
    let concurrence = concurrence(rho)?;
    let s = bloch_unchecked(&rho.hermitian_part()).correlation_singular_values();
    Ok(Resources {
        concurrence,
        steering: steering_from_singular(&s),
        bell: bell_from_singular(&s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pure(amps: [f64; 4]) -> ComplexMatrix {
        let norm = amps.iter().map(|x| x * x).sum::<f64>().sqrt();
        let v: Vec<C64> = amps.iter().map(|&x| C64::new(x / norm, 0.0)).collect();
        ComplexMatrix::outer(&v, &v)
    }

    fn bell_state() -> ComplexMatrix {
        // (|ee⟩ + |gg⟩)/√2
        pure([1.0, 0.0, 0.0, 1.0])
    }

    /// ρ = ¼(1 + Σ t_i σ_i⊗σ_i)
    fn from_diagonal(t: [f64; 3]) -> ComplexMatrix {
        TwoQubitBloch {
            a: [0.0; 3],
            b: [0.0; 3],
            t: [[t[0], 0.0, 0.0], [0.0, t[1], 0.0], [0.0, 0.0, t[2]]],
        }
        .reconstruct()
    }

    #[test]
    fn bell_state_is_maximal() {
        let rho = bell_state();
        assert!((concurrence(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!((steering_measure(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!((bell_measure(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_states_have_no_concurrence() {
        // |e⟩ ⊗ (|e⟩ + 2|g⟩)/√5
        assert_eq!(concurrence(&pure([1.0, 2.0, 0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(concurrence(&ComplexMatrix::identity(4).scale_real(0.25)).unwrap(), 0.0);
        assert_eq!(concurrence(&pure([0.0, 0.0, 0.0, 1.0])).unwrap(), 0.0);
    }

    #[test]
    fn maximally_mixed_bloch() {
        let b = bloch_decompose(&ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        assert_eq!(b.a, [0.0; 3]);
        assert_eq!(b.b, [0.0; 3]);
        assert_eq!(b.t, [[0.0; 3]; 3]);
    }

    #[test]
    fn bell_state_bloch() {
        let b = bloch_decompose(&bell_state()).unwrap();
        for m in 0..3 {
            assert!(b.a[m].abs() < 1e-15 && b.b[m].abs() < 1e-15);
        }
        let expected = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        for (row, want) in b.t.iter().zip(&expected) {
            for (x, w) in row.iter().zip(want) {
                assert!((x - w).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn werner_half_is_unsteerable() {
        let rho = from_diagonal([-0.5, -0.5, -0.5]);
        assert_eq!(steering_measure(&rho).unwrap(), 0.0);
        assert_eq!(steering_from_diagonal([-0.5, -0.5, -0.5]), 0.0);
    }

    #[test]
    fn werner_bell_threshold() {
        let threshold = std::f64::consts::FRAC_1_SQRT_2;
        for p in [0.6, threshold - 1e-6, threshold + 1e-6, 0.8, 0.95] {
            let n = bell_measure(&from_diagonal([-p, -p, -p])).unwrap();
            assert_eq!(n > 0.0, p > threshold, "p = {p}, N = {n}");
        }
    }

    #[test]
    fn diagonal_formulas_agree_with_singular_value_route() {
        for t in [[-0.9, 0.85, 0.8], [0.3, -0.5, 0.6], [-0.99, -0.99, -0.98]] {
            let rho = from_diagonal(t);
            assert!((steering_measure(&rho).unwrap() - steering_from_diagonal(t)).abs() < 1e-9);
            assert!((bell_measure(&rho).unwrap() - bell_from_diagonal(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn tiny_eigenvalues_of_flipped_product_still_count() {
        // |ψ⟩ = a|ee⟩ + |gg⟩ mixed with a weak |eg⟩+|ge⟩ component; the second
        // eigenvalue of ρ̃ρ is ~5e-11 but shifts E by ~7e-6
        let a = -0.41238087 / 0.78273055;
        let w = 6.96e-6;
        let mut rho = ComplexMatrix::zeros(4, 4);
        let norm = 1.0 + a * a;
        rho[(0, 0)] = C64::new((1.0 - w) * a * a / norm, 0.0);
        rho[(0, 3)] = C64::new((1.0 - w) * a / norm, 0.0);
        rho[(3, 0)] = rho[(0, 3)];
        rho[(3, 3)] = C64::new((1.0 - w) / norm, 0.0);
        for (i, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            rho[(i, k)] = C64::new(w / 2.0, 0.0);
        }
        let x_form = 2.0 * (rho[(0, 3)].norm() - rho[(1, 1)].re);
        assert!((concurrence(&rho).unwrap() - x_form).abs() < 1e-10);
    }

    #[test]
    fn x_state_concurrence_matches_closed_form() {
        // X-state: E = 2 max(0, |ρ03| − √(ρ11ρ22), |ρ12| − √(ρ00ρ33))
        let mut rho = ComplexMatrix::zeros(4, 4);
        rho[(0, 0)] = C64::new(0.3, 0.0);
        rho[(1, 1)] = C64::new(0.1, 0.0);
        rho[(2, 2)] = C64::new(0.15, 0.0);
        rho[(3, 3)] = C64::new(0.45, 0.0);
        rho[(0, 3)] = C64::new(0.2, 0.25);
        rho[(3, 0)] = C64::new(0.2, -0.25);
        rho[(1, 2)] = C64::new(0.05, 0.0);
        rho[(2, 1)] = C64::new(0.05, 0.0);
        let expected = 2.0 * (0.2f64.hypot(0.25) - (0.1f64 * 0.15).sqrt()).max(0.0);
        assert!((concurrence(&rho).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_state() {
        assert!(concurrence(&ComplexMatrix::identity(4)).is_err());
        assert!(steering_measure(&ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
    }

    #[test]
    fn bloch_reconstructs() {
        let v = [C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.4, 0.0), C64::new(0.1, -0.6)];
        let n = crate::linalg::vec_norm(&v);
        let v: Vec<C64> = v.iter().map(|z| z / n).collect();
        let rho = ComplexMatrix::outer(&v, &v);
        let b = bloch_decompose(&rho).unwrap();
        assert!((&b.reconstruct() - &rho).frobenius_norm() < 1e-10);
    }
}
