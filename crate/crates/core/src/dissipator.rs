//! Jump operators for the two master equations.
//!
//! The local model uses one lowering operator per qubit, `√γ_j σ₋^j`.
//! The global model projects the coupling operator `σ_x^j` onto pairs of
//! eigenstates of the full Hamiltonian, groups the pieces by Bohr
//! frequency `ω = ε_k − ε_i` and weights each group with the Ohmic rate
//! `γ_j ω`. The baths are at zero temperature, so only emission (`ω > 0`)
//! survives.

use crate::error::Result;
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianEigen, C64};
use crate::model::{embed, hamiltonian_unchecked, pauli, Site, SystemParams};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpLabel {
    /// Local lowering operator on one site.
    Local { site: Site },
    /// Global operator for one Bohr frequency of the coupling on `site`.
    Bohr { site: Site, frequency: f64 },
}

/// A rate-weighted collapse operator: `op = √rate · unweighted`.
#[derive(Debug, Clone)]
pub struct JumpOperator {
    pub op: ComplexMatrix,
    pub label: JumpLabel,
    pub rate: f64,
}

impl JumpOperator {
    pub fn new(unweighted: &ComplexMatrix, rate: f64, label: JumpLabel) -> Self {
        debug_assert!(rate >= 0.0);
        Self {
            op: unweighted.scale_real(rate.sqrt()),
            label,
            rate,
        }
    }
}

/// One frequency group `A(ω)` of a coupling operator.
#[derive(Debug, Clone)]
pub struct BohrBin {
    pub frequency: f64,
    pub operator: ComplexMatrix,
}

#[derive(Debug, Clone, Default)]
pub struct BohrDecomposition {
    /// Sorted by ascending frequency.
    pub bins: Vec<BohrBin>,
}

impl BohrDecomposition {
    /// `‖Σ_ω A(ω) − A‖_F`.
    pub fn completeness_residual(&self, a: &ComplexMatrix) -> f64 {
        let mut sum = ComplexMatrix::zeros(a.rows(), a.cols());
        for bin in &self.bins {
            sum = &sum + &bin.operator;
        }
        (&sum - a).frobenius_norm()
    }

    /// Largest `‖[H, A(ω)] + ω A(ω)‖_F` over all bins.
    pub fn ladder_residual(&self, h: &ComplexMatrix) -> f64 {
        self.bins
            .iter()
            .map(|bin| {
                let comm = &(h * &bin.operator) - &(&bin.operator * h);
                (&comm + &bin.operator.scale_real(bin.frequency)).frobenius_norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn positive(&self) -> impl Iterator<Item = &BohrBin> {
        self.bins.iter().filter(|b| b.frequency > 0.0)
    }
}

/// Default absolute binning tolerance, `1e-9 · ‖H‖_F`.
pub fn default_degeneracy_tol(h: &ComplexMatrix) -> f64 {
    Tolerances::DEFAULT.degeneracy * h.frobenius_norm()
}

/// `√γ_j σ₋^j` for every site with `γ_j > 0`.
pub fn pme_jumps(p: &SystemParams) -> Result<Vec<JumpOperator>> {
    p.validate()?;
    let lowering = pauli::lowering();
    Ok(Site::ALL
        .iter()
        .filter(|&&site| p.gamma(site) > 0.0)
        .map(|&site| {
            JumpOperator::new(&embed(&lowering, site), p.gamma(site), JumpLabel::Local { site })
        })
        .collect())
}

/// Splits `a` into pieces `A(ω) = Σ_{ε_k−ε_i=ω} |ε_i⟩⟨ε_i|A|ε_k⟩⟨ε_k|`.
pub fn bohr_decompose(
    h: &ComplexMatrix,
    a: &ComplexMatrix,
    degeneracy_tol: f64,
) -> Result<BohrDecomposition> {
    let eig = hermitian_eig(h)?;
    Ok(decompose_in_eigenbasis(
        &eig,
        a,
        degeneracy_tol,
        Tolerances::DEFAULT.bohr_drop,
    ))
}

pub(crate) fn decompose_in_eigenbasis(
    eig: &HermitianEigen,
    a: &ComplexMatrix,
    degeneracy_tol: f64,
    drop_below: f64,
) -> BohrDecomposition {
    let n = eig.values.len();
    let v = &eig.vectors;
    let a_eig = &(&v.adjoint() * a) * v;

    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            pairs.push((eig.values[k] - eig.values[i], i, k));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut bins = Vec::new();
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= degeneracy_tol {
            end += 1;
        }
        let group = &pairs[start..end];
        let mut block = ComplexMatrix::zeros(n, n);
        for &(_, i, k) in group {
            block[(i, k)] = a_eig[(i, k)];
        }
        if block.frobenius_norm() >= drop_below {
            let frequency = group.iter().map(|g| g.0).sum::<f64>() / group.len() as f64;
            bins.push(BohrBin {
                frequency,
                operator: &(v * &block) * &v.adjoint(),
            });
        }
        start = end;
    }
    BohrDecomposition { bins }
}

/// Global jump operators `√(γ_j ω) A_j(ω)` for `ω > 0`, with `A_j = σ_x^j`.
pub fn mme_jumps(p: &SystemParams) -> Result<Vec<JumpOperator>> {
    mme_jumps_with(p, &Tolerances::DEFAULT)
}

pub fn mme_jumps_with(p: &SystemParams, tol: &Tolerances) -> Result<Vec<JumpOperator>> {
    p.validate()?;
    let h = hamiltonian_unchecked(p);
    let eig = hermitian_eig(&h)?;
    let degeneracy_tol = tol.degeneracy * h.frobenius_norm();
    let x = pauli::x();

    let mut jumps = Vec::new();
    for site in Site::ALL {
        let gamma = p.gamma(site);
        if gamma <= 0.0 {
            continue;
        }
        let decomposition =
            decompose_in_eigenbasis(&eig, &embed(&x, site), degeneracy_tol, tol.bohr_drop);
        for bin in decomposition.positive() {
            jumps.push(JumpOperator::new(
                &bin.operator,
                gamma * bin.frequency,
                JumpLabel::Bohr {
                    site,
                    frequency: bin.frequency,
                },
            ));
        }
    }
    Ok(jumps)
}

/// Applies `Σ_k [O ρ O† − ½{O†O, ρ}]`.
pub fn apply_dissipator(jumps: &[JumpOperator], rho: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for jump in jumps {
        let o = &jump.op;
        let od = o.adjoint();
        let odo = &od * o;
        let sandwich = &(o * rho) * &od;
        let anti = &(&odo * rho) + &(rho * &odo);
        out = &out + &(&sandwich - &anti.scale(C64::new(0.5, 0.0)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_norm;
    use crate::model::{basis_index, basis_state, build_hamiltonian};

    fn fig1() -> SystemParams {
        SystemParams::uniform(0.1, 5.0, 0.01, 0.8, 1e-3)
    }

    #[test]
    fn pme_operator_norms() {
        let jumps = pme_jumps(&SystemParams::uniform(0.1, 5.0, 0.1, 0.3, 1e-3)).unwrap();
        assert_eq!(jumps.len(), 3);
        for j in &jumps {
            let n2 = j.op.frobenius_norm().powi(2);
            assert!((n2 - 4e-3).abs() < 1e-15, "{n2}");
            assert_eq!(j.rate, 1e-3);
        }
    }

    #[test]
    fn pme_skips_zero_rates() {
        let mut p = SystemParams::uniform(0.1, 5.0, 0.1, 0.3, 1e-3);
        p.gamma_c = 0.0;
        let sites: Vec<_> = pme_jumps(&p).unwrap().iter().map(|j| j.label).collect();
        assert_eq!(
            sites,
            vec![JumpLabel::Local { site: Site::A }, JumpLabel::Local { site: Site::B }]
        );
    }

    #[test]
    fn all_ground_is_dark_for_pme() {
        let ggg = basis_state(basis_index(false, false, false));
        let rho = ComplexMatrix::outer(&ggg, &ggg);
        let jumps = pme_jumps(&fig1()).unwrap();
        assert_eq!(apply_dissipator(&jumps, &rho).frobenius_norm(), 0.0);
    }

    #[test]
    fn pme_operators_are_local() {
        let jumps = pme_jumps(&fig1()).unwrap();
        for j in &jumps {
            let JumpLabel::Local { site } = j.label else { unreachable!() };
            for other in Site::ALL.into_iter().filter(|&s| s != site) {
                for op in [pauli::x(), pauli::y(), pauli::z()] {
                    let e = embed(&op, other);
                    let comm = &(&j.op * &e) - &(&e * &j.op);
                    assert_eq!(comm.frobenius_norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn single_qubit_bohr_bins() {
        let h = pauli::z().scale_real(0.05);
        let d = bohr_decompose(&h, &pauli::x(), 1e-12).unwrap();
        assert_eq!(d.bins.len(), 2);
        assert!((d.bins[0].frequency + 0.1).abs() < 1e-15);
        assert!((d.bins[1].frequency - 0.1).abs() < 1e-15);
        assert!((&d.bins[0].operator - &pauli::raising()).frobenius_norm() < 1e-14);
        assert!((&d.bins[1].operator - &pauli::lowering()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn decoupled_bins_collapse_degenerate_transitions() {
        let p = SystemParams::uniform(0.1, 5.0, 0.0, 0.0, 1e-3);
        let h = build_hamiltonian(&p).unwrap();
        let xa = embed(&pauli::x(), Site::A);
        let d = bohr_decompose(&h, &xa, default_degeneracy_tol(&h)).unwrap();
        assert_eq!(d.bins.len(), 2);
        let up = &d.bins[0];
        let down = &d.bins[1];
        assert!((down.frequency - 0.1).abs() < 1e-12);
        assert!((up.frequency + 0.1).abs() < 1e-12);
        assert!((&down.operator - &embed(&pauli::lowering(), Site::A)).frobenius_norm() < 1e-12);
        assert!((&up.operator - &embed(&pauli::raising(), Site::A)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn fig1_completeness_and_ladder() {
        let h = build_hamiltonian(&fig1()).unwrap();
        for site in Site::ALL {
            let a = embed(&pauli::x(), site);
            let d = bohr_decompose(&h, &a, default_degeneracy_tol(&h)).unwrap();
            assert!(d.completeness_residual(&a) <= 1e-9);
            assert!(d.ladder_residual(&h) <= 1e-8 * h.frobenius_norm());
        }
    }

    #[test]
    fn decoupled_mme_single_site() {
        let p = SystemParams {
            gamma_b: 0.0,
            gamma_c: 0.0,
            ..SystemParams::uniform(0.1, 5.0, 0.0, 0.0, 2e-3)
        };
        let jumps = mme_jumps(&p).unwrap();
        assert_eq!(jumps.len(), 1);
        let expected = embed(&pauli::lowering(), Site::A).scale_real((2e-3f64 * 0.1).sqrt());
        assert!((&jumps[0].op - &expected).frobenius_norm() < 1e-14);
    }

    #[test]
    fn mme_jump_count_matches_enumeration() {
        let p = SystemParams::uniform(0.1, 5.0, 0.01, 0.4, 1e-3);
        let h = build_hamiltonian(&p).unwrap();
        let tol = default_degeneracy_tol(&h);
        let mut expected = 0;
        for site in Site::ALL {
            let d = bohr_decompose(&h, &embed(&pauli::x(), site), tol).unwrap();
            expected += d.positive().count();
        }
        assert!(expected > 0);
        assert_eq!(mme_jumps(&p).unwrap().len(), expected);
    }

    #[test]
    fn mme_jumps_annihilate_ground_state() {
        for p in [fig1(), SystemParams::uniform(0.7, 0.3, 1.2, 2.0, 1e-3)] {
            let h = build_hamiltonian(&p).unwrap();
            let ground = hermitian_eig(&h).unwrap().vector(0);
            for j in mme_jumps(&p).unwrap() {
                assert!(vec_norm(&j.op.mul_vec(&ground)) < 1e-12);
            }
        }
    }

    #[test]
    fn decoupled_models_share_operators() {
        let p = SystemParams::uniform(0.1, 5.0, 0.0, 0.0, 1e-3);
        let pme = pme_jumps(&p).unwrap();
        let mme = mme_jumps(&p).unwrap();
        assert_eq!(pme.len(), mme.len());
        for (a, b) in pme.iter().zip(&mme) {
            let ua = a.op.scale_real(1.0 / a.rate.sqrt());
            let ub = b.op.scale_real(1.0 / b.rate.sqrt());
            assert!((&ua - &ub).frobenius_norm() < 1e-12);
        }
    }
}
