use nalgebra as na;

use crate::error::{invalid, Result};
use crate::evolve::density::{trace_product, DensityMatrix};
use crate::model::pauli::{pauli_string, Pauli};
use crate::{CMatrix, C64};

/// Emission weights of the one- and two-exciton manifolds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluorescenceSpec {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Default for FluorescenceSpec {
    fn default() -> Self {
        Self {
            gamma1: 1.0,
            gamma2: 2.0,
        }
    }
}

impl FluorescenceSpec {
    pub fn new(gamma1: f64, gamma2: f64) -> Result<Self> {
        let ok = |g: f64| g.is_finite() && g >= 0.0;
        if !(ok(gamma1) && ok(gamma2)) {
            return Err(invalid(
                "fluorescence",
                "weights must be finite and non-negative",
            ));
        }
        Ok(Self { gamma1, gamma2 })
    }

    fn weight(&self, excitations: u32) -> f64 {
        match excitations {
            1 => self.gamma1,
            2 => self.gamma2,
            _ => 0.0,
        }
    }

    /// Diagonal observable `Γ₁ P(M₁) + Γ₂ P(M₂)` on `n_qubits` system qubits.
    pub fn operator(&self, n_qubits: usize) -> CMatrix {
        let dim = 1 << n_qubits;
        CMatrix::from_diagonal(&na::DVector::from_fn(dim, |i, _| {
            C64::new(self.weight(i.count_ones()), 0.0)
        }))
    }
}

/// `Γ₁·P(M₁) + Γ₂·P(M₂)` read from the diagonal of the system state.
/// A probe qubit, if attached, is traced out first.
pub fn fluorescence_expectation(rho: &DensityMatrix, spec: &FluorescenceSpec) -> f64 {
    let shift = usize::from(rho.has_probe());
    (0..rho.dim())
        .map(|i| spec.weight((i >> shift).count_ones()) * rho.matrix()[(i, i)].re)
        .sum()
}

/// `X_pr` and `Y_pr` on a register whose last qubit is the probe.
pub fn probe_paulis(n_qubits: usize) -> (CMatrix, CMatrix) {
    let pr = n_qubits - 1;
    (
        pauli_string(n_qubits, &[(pr, Pauli::X)], 1.0),
        pauli_string(n_qubits, &[(pr, Pauli::Y)], 1.0),
    )
}

/// `(⟨X_pr⟩, ⟨Y_pr⟩)`.
pub fn probe_expectations(rho: &DensityMatrix) -> (f64, f64) {
    let (x, y) = probe_paulis(rho.n_qubits());
    (
        trace_product(&x, rho.matrix()).re,
        trace_product(&y, rho.matrix()).re,
    )
}
