use alloc::format;

use nalgebra as na;

use crate::error::{invalid, Error, Result};
use crate::model::hamiltonian::hermiticity_defect;
use crate::{CMatrix, C64};

pub const TRACE_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Mixed state of the system register, optionally with the probe qubit
/// appended as the last tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix,
    n_qubits: usize,
    has_probe: bool,
}

impl DensityMatrix {
    /// `|0…0⟩⟨0…0|` on `n_qubits` system qubits.
    pub fn ground(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut rho = CMatrix::zeros(dim, dim);
        rho[(0, 0)] = C64::new(1.0, 0.0);
        Self {
            rho,
            n_qubits,
            has_probe: false,
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalized system state vector.
    pub fn from_pure(psi: &na::DVector<C64>) -> Result<Self> {
        let rho = psi * psi.adjoint();
        Self::from_matrix(rho, false)
    }

    /// Wraps a matrix after checking trace, Hermiticity and dimension.
    /// Positivity is checked separately by [`DensityMatrix::validate`].
    pub fn from_matrix(rho: CMatrix, has_probe: bool) -> Result<Self> {
        let dim = rho.nrows();
        if rho.ncols() != dim || dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two(),
                actual: rho.ncols(),
            });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if has_probe && n_qubits < 2 {
            return Err(invalid(
                "density",
                "a probe needs at least one system qubit beside it",
            ));
        }
        let out = Self {
            rho,
            n_qubits,
            has_probe,
        };
        out.check_trace_hermitian()?;
        Ok(out)
    }

    fn check_trace_hermitian(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(invalid("density", format!("trace {tr} differs from 1")));
        }
        let h = hermiticity_defect(&self.rho);
        if h > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: h });
        }
        Ok(())
    }

    /// Checks trace, Hermiticity and numerical positivity.
    pub fn validate(&self) -> Result<()> {
        self.check_trace_hermitian()?;
        let lo = self.min_eigenvalue()?;
        if lo < -POSITIVITY_TOL {
            return Err(invalid("density", format!("negative eigenvalue {lo:e}")));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut CMatrix {
        &mut self.rho
    }

    pub fn into_matrix(self) -> CMatrix {
        self.rho
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Qubits belonging to the exciton system.
    pub fn n_system(&self) -> usize {
        self.n_qubits - usize::from(self.has_probe)
    }

    pub fn has_probe(&self) -> bool {
        self.has_probe
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let h = (&self.rho + self.rho.adjoint()) * C64::new(0.5, 0.0);
        let eig = na::SymmetricEigen::try_new(h, 1e-15, 10_000).ok_or(Error::Eigen)?;
        Ok(eig
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min))
    }

    /// `Tr(O ρ)`.
    pub fn expectation(&self, op: &CMatrix) -> Result<C64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: op.nrows(),
            });
        }
        Ok(trace_product(op, &self.rho))
    }

    /// `U ρ U†`.
    pub fn conjugate(&mut self, u: &CMatrix) {
        self.rho = u * &self.rho * u.adjoint();
    }

    /// `ρ ⊗ |0⟩⟨0|_pr`.
    pub fn attach_probe(&self) -> Result<Self> {
        if self.has_probe {
            return Err(invalid("density", "probe already attached"));
        }
        let dim = self.dim();
        let mut out = CMatrix::zeros(2 * dim, 2 * dim);
        for r in 0..dim {
            for c in 0..dim {
                out[(2 * r, 2 * c)] = self.rho[(r, c)];
            }
        }
        Ok(Self {
            rho: out,
            n_qubits: self.n_qubits + 1,
            has_probe: true,
        })
    }

    /// Reduced system state `Tr_pr ρ`.
    pub fn trace_out_probe(&self) -> Result<Self> {
        if !self.has_probe {
            return Err(Error::ProbeMissing);
        }
        let dim = self.dim() / 2;
        let out = CMatrix::from_fn(dim, dim, |r, c| {
            self.rho[(2 * r, 2 * c)] + self.rho[(2 * r + 1, 2 * c + 1)]
        });
        Ok(Self {
            rho: out,
            n_qubits: self.n_qubits - 1,
            has_probe: false,
        })
    }
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Trace distance `½‖ρ − σ‖₁`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let d = a.matrix() - b.matrix();
    let h = (&d + d.adjoint()) * C64::new(0.5, 0.0);
    let eig = na::SymmetricEigen::try_new(h, 1e-15, 10_000).ok_or(Error::Eigen)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_invariants() {
        let rho = DensityMatrix::ground(2);
        rho.validate().unwrap();
        assert_eq!(rho.purity(), 1.0);
        assert_eq!(rho.n_system(), 2);
    }

    #[test]
    fn probe_round_trip() {
        let psi = na::DVector::from_vec(alloc::vec![
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
            C64::new(0.5, 0.0),
            C64::new(-0.5, 0.0)
        ]);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let with = rho.attach_probe().unwrap();
        assert!(with.has_probe());
        assert_eq!(with.n_system(), 2);
        with.validate().unwrap();
        assert_eq!(with.trace_out_probe().unwrap(), rho);
        assert!(rho.trace_out_probe().is_err());
        assert!(with.attach_probe().is_err());
    }

    #[test]
    fn rejects_bad_trace() {
        let m = CMatrix::identity(2, 2);
        assert!(DensityMatrix::from_matrix(m, false).is_err());
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let a = DensityMatrix::ground(1);
        let mut m = CMatrix::zeros(2, 2);
        m[(1, 1)] = C64::new(1.0, 0.0);
        let b = DensityMatrix::from_matrix(m, false).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(trace_distance(&a, &a).unwrap(), 0.0);
    }
}
