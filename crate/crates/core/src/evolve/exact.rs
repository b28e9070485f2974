//! Matrix exponentials by eigendecomposition, used for fragment
//! exponentials and as the reference propagator in tests.

use nalgebra as na;

use super::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::model::hamiltonian::HermitianOperator;
use crate::model::spec::QubitCap;
use crate::{CMatrix, C64};

fn is_diagonal(h: &CMatrix) -> bool {
    (0..h.nrows()).all(|r| (0..h.ncols()).all(|c| r == c || h[(r, c)] == C64::new(0.0, 0.0)))
}

/// `exp(-i H t)` for Hermitian `H` in rad/fs and `t` in fs.
pub fn unitary_exp(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let n = h.nrows();
    if is_diagonal(h) {
        return Ok(CMatrix::from_diagonal(&na::DVector::from_fn(n, |i, _| {
            (C64::new(0.0, -h[(i, i)].re * t)).exp()
        })));
    }
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = na::SymmetricEigen::try_new(herm, 1e-15, 10_000).ok_or(Error::Eigen)?;
    let phases = na::DVector::from_fn(n, |i, _| C64::new(0.0, -eig.eigenvalues[i] * t).exp());
    let v = &eig.eigenvectors;
    Ok(v * CMatrix::from_diagonal(&phases) * v.adjoint())
}

/// `ρ ↦ e^{-iHt} ρ e^{iHt}` with the full propagator.
pub fn exact_evolve(
    rho: &DensityMatrix,
    h: &HermitianOperator,
    t: f64,
    cap: QubitCap,
) -> Result<DensityMatrix> {
    cap.check(h.n_qubits())?;
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: h.dim(),
        });
    }
    let u = unitary_exp(h.matrix(), t)?;
    let mut out = rho.clone();
    out.conjugate(&u);
    Ok(out)
}

/// Spectral norm (largest singular value).
pub fn operator_norm(m: &CMatrix) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `‖U†U − I‖` entrywise maximum.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let id = CMatrix::identity(u.nrows(), u.ncols());
    crate::model::pauli::max_abs_diff(&(u.adjoint() * u), &id)
}
