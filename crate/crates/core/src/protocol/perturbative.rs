//! Weak-coupling readout of the probe, used as an oracle for the circuit.
//!
//! To first order in `H_PR`, with the probe starting in `|0⟩` and read in the
//! interaction picture,
//!
//! ```text
//! ⟨1|ρ_pr|0⟩ = -i Σ J_{l',l} conj(β_{l',l}) ∫₀^t e^{i(ω_pr − ω_{l,l'})s} ds
//! ⟨X_pr⟩ = 2 Re ⟨1|ρ_pr|0⟩,   ⟨Y_pr⟩ = 2 Im ⟨1|ρ_pr|0⟩
//! ```
//!
//! where `l'` lies one excitation below `l`. On resonance the integral is
//! `t`, giving `⟨Y_pr⟩ = −2t Σ J Re β` and `⟨X_pr⟩ = −2t Σ J Im β` for real
//! couplings.

use alloc::vec::Vec;

use super::bounds::adjacent_manifold_transitions;
use crate::error::{Error, Result};
use crate::evolve::DensityMatrix;
use crate::model::eigen::EigenStructure;
use crate::model::pauli::lowering;
use crate::model::spec::{ProbeSpec, SystemSpec};
use crate::model::units::{wavenumber_to_angular, SPEED_OF_LIGHT_CM_PER_FS};
use crate::{CMatrix, C64};

/// System state in its energy basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceVector {
    /// `β[(l', l)] = ⟨E_l'|ρ|E_l⟩`.
    pub beta: CMatrix,
    pub energies_cm: Vec<f64>,
    pub manifold_index: Option<Vec<usize>>,
}

impl CoherenceVector {
    pub fn beta(&self, l_prime: usize, l: usize) -> C64 {
        self.beta[(l_prime, l)]
    }

    /// `ω_{l,l'} = E_l − E_l'` in cm⁻¹.
    pub fn gap_cm(&self, l: usize, l_prime: usize) -> f64 {
        self.energies_cm[l] - self.energies_cm[l_prime]
    }
}

pub fn compute_coherence_vector(
    rho: &DensityMatrix,
    eig: &EigenStructure,
) -> Result<CoherenceVector> {
    if rho.has_probe() || rho.dim() != eig.eigenvectors.nrows() {
        return Err(Error::DimensionMismatch {
            expected: eig.eigenvectors.nrows(),
            actual: rho.dim(),
        });
    }
    let v = &eig.eigenvectors;
    Ok(CoherenceVector {
        beta: v.adjoint() * rho.matrix() * v,
        energies_cm: eig.energies.clone(),
        manifold_index: eig.manifold_index.clone(),
    })
}

/// `J_{l',l} = Σ_m J_m ⟨E_l'|a_m|E_l⟩` in cm⁻¹; entries between manifolds that
/// are not adjacent are set to zero.
pub fn effective_probe_couplings(
    spec: &SystemSpec,
    probe: &ProbeSpec,
    eig: &EigenStructure,
) -> Result<CMatrix> {
    probe.check_against(spec)?;
    let n = spec.n_qub();
    let dim = 1 << n;
    let mut a = CMatrix::zeros(dim, dim);
    for (m, &j) in probe.probe_couplings.iter().enumerate() {
        a += lowering(n, m) * C64::new(j, 0.0);
    }
    let v = &eig.eigenvectors;
    let full = v.adjoint() * a * v;
    Ok(match &eig.manifold_index {
        Some(labels) => CMatrix::from_fn(dim, dim, |lp, l| {
            if labels[l] == labels[lp] + 1 {
                full[(lp, l)]
            } else {
                C64::new(0.0, 0.0)
            }
        }),
        None => full,
    })
}

/// Default resonance window `2π/t₃` expressed in cm⁻¹.
pub fn default_tol_window_cm(t3_fs: f64) -> f64 {
    1.0 / (SPEED_OF_LIGHT_CM_PER_FS * t3_fs)
}

fn readout(rho10: C64) -> (f64, f64) {
    (2.0 * rho10.re, 2.0 * rho10.im)
}

fn pairs(cohs: &CoherenceVector) -> Vec<(usize, usize)> {
    let eig = EigenStructure {
        energies: cohs.energies_cm.clone(),
        eigenvectors: CMatrix::zeros(0, 0),
        manifold_index: cohs.manifold_index.clone(),
    };
    adjacent_manifold_transitions(&eig)
        .iter()
        .map(|t| (t.lower, t.upper))
        .collect()
}

/// Resonant first-order prediction `(⟨X_pr⟩, ⟨Y_pr⟩)`: only transitions with
/// `|ω_{l,l'} − ω_pr| < tol_window` contribute, each with weight `t₃`.
pub fn perturbative_prediction(
    cohs: &CoherenceVector,
    couplings: &CMatrix,
    omega_pr_cm: f64,
    t3_fs: f64,
    tol_window_cm: f64,
) -> (f64, f64) {
    let mut rho10 = C64::new(0.0, 0.0);
    for (lp, l) in pairs(cohs) {
        if (cohs.gap_cm(l, lp) - omega_pr_cm).abs() < tol_window_cm {
            let j = wavenumber_to_angular(1.0) * couplings[(lp, l)];
            rho10 += C64::new(0.0, -t3_fs) * j * cohs.beta(lp, l).conj();
        }
    }
    readout(rho10)
}

/// First-order prediction with every adjacent-manifold transition and the
/// exact time integral, including the off-resonant leakage.
pub fn first_order_expectations(
    cohs: &CoherenceVector,
    couplings: &CMatrix,
    omega_pr_cm: f64,
    t3_fs: f64,
) -> (f64, f64) {
    let mut rho10 = C64::new(0.0, 0.0);
    for (lp, l) in pairs(cohs) {
        let d = wavenumber_to_angular(omega_pr_cm - cohs.gap_cm(l, lp));
        let integral = if (d * t3_fs).abs() < 1e-12 {
            C64::new(t3_fs, 0.0)
        } else {
            (C64::new(0.0, d * t3_fs).exp() - 1.0) / C64::new(0.0, d)
        };
        let j = wavenumber_to_angular(1.0) * couplings[(lp, l)];
        rho10 += C64::new(0.0, -1.0) * j * cohs.beta(lp, l).conj() * integral;
    }
    readout(rho10)
}
