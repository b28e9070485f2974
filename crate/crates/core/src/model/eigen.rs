use alloc::vec::Vec;

use nalgebra as na;
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::hamiltonian::{excitation_number_defect, HermitianOperator};
use super::units::angular_to_wavenumber;
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;
const LABEL_TOL: f64 = 1e-8;

/// Spectral decomposition of a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenStructure {
    /// Ascending eigenvalues in cm⁻¹.
    pub energies: Vec<f64>,
    /// Eigenvectors as columns, in the order of `energies`.
    pub eigenvectors: CMatrix,
    /// Total excitation number of each eigenstate, when it is well defined.
    pub manifold_index: Option<Vec<usize>>,
}

impl EigenStructure {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Eigenvalues in rad/fs.
    pub fn angular_energies(&self) -> Vec<f64> {
        self.energies
            .iter()
            .map(|&e| super::units::wavenumber_to_angular(e))
            .collect()
    }

    /// Indices of the eigenstates in excitation manifold `p`.
    pub fn manifold(&self, p: usize) -> Vec<usize> {
        match &self.manifold_index {
            Some(labels) => (0..labels.len()).filter(|&i| labels[i] == p).collect(),
            None => Vec::new(),
        }
    }

    /// `V diag(E) V†` in rad/fs.
    pub fn reconstruct(&self) -> CMatrix {
        let d = na::DVector::from_iterator(
            self.len(),
            self.angular_energies()
                .into_iter()
                .map(|e| C64::new(e, 0.0)),
        );
        &self.eigenvectors * CMatrix::from_diagonal(&d) * self.eigenvectors.adjoint()
    }
}

fn diagonalize(m: CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let eig = na::SymmetricEigen::try_new(m, EIGEN_EPS, EIGEN_MAX_ITER).ok_or(Error::Eigen)?;
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Diagonalizes `h`, ordering eigenpairs by ascending energy.
///
/// When `h` commutes with the total excitation number the matrix is split
/// into excitation-number blocks first, so every eigenvector lives in one
/// manifold and carries an exact integer label.
pub fn eigendecompose(h: &HermitianOperator) -> Result<EigenStructure> {
    let n = h.n_qubits();
    let dim = h.dim();
    let m = h.matrix();
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);

    let mut pairs: Vec<(f64, na::DVector<C64>, Option<usize>)> = Vec::with_capacity(dim);
    if excitation_number_defect(h) <= 1e-12 * scale {
        for p in 0..=n {
            let idx: Vec<usize> = (0..dim).filter(|i| i.count_ones() as usize == p).collect();
            let block = CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
            let (vals, vecs) = diagonalize(block)?;
            for (k, &e) in vals.iter().enumerate() {
                let mut v = na::DVector::zeros(dim);
                for (r, &i) in idx.iter().enumerate() {
                    v[i] = vecs[(r, k)];
                }
                pairs.push((e, v, Some(p)));
            }
        }
    } else {
        let (vals, vecs) = diagonalize(m.clone())?;
        for (k, &e) in vals.iter().enumerate() {
            let v = vecs.column(k).into_owned();
            let occ: f64 = v
                .iter()
                .enumerate()
                .map(|(i, a)| a.norm_sqr() * i.count_ones() as f64)
                .sum();
            let label = occ.round();
            let exact = (occ - label).abs() < LABEL_TOL;
            pairs.push((e, v, exact.then_some(label as usize)));
        }
    }

    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
    let energies = pairs.iter().map(|p| angular_to_wavenumber(p.0)).collect();
    let labels: Option<Vec<usize>> = pairs.iter().map(|p| p.2).collect();
    let mut eigenvectors = CMatrix::zeros(dim, dim);
    for (k, (_, v, _)) in pairs.into_iter().enumerate() {
        eigenvectors.set_column(k, &v);
    }
    Ok(EigenStructure {
        energies,
        eigenvectors,
        manifold_index: labels,
    })
}
