use alloc::vec::Vec;

use nalgebra as na;

use super::density::DensityMatrix;
use crate::error::{invalid, Error, Result};
use crate::model::pauli::bit;
use crate::model::units::wavenumber_to_angular;
use crate::CMatrix;

/// Constant single-qubit dephasing acting on the system register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Rate in cm⁻¹; converted to rad/fs when turned into a probability.
    pub gamma_z_cm: f64,
    pub probe_noiseless: bool,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::noiseless()
    }
}

impl NoiseSpec {
    pub fn new(gamma_z_cm: f64) -> Result<Self> {
        if !(gamma_z_cm >= 0.0 && gamma_z_cm.is_finite()) {
            return Err(invalid(
                "gamma_z",
                "dephasing rate must be non-negative and finite",
            ));
        }
        Ok(Self {
            gamma_z_cm,
            probe_noiseless: true,
        })
    }

    pub fn noiseless() -> Self {
        Self {
            gamma_z_cm: 0.0,
            probe_noiseless: true,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.gamma_z_cm == 0.0
    }

    /// Per-layer error probability `γ_Z·Δt`.
    pub fn p_z(&self, dt_fs: f64) -> Result<f64> {
        let p = wavenumber_to_angular(self.gamma_z_cm) * dt_fs;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(p)
    }

    /// Qubits that dephase on a register of `n_qubits`, with or without probe.
    pub fn noisy_qubits(&self, n_qubits: usize, has_probe: bool) -> Vec<usize> {
        let n_sys = n_qubits - usize::from(has_probe);
        let upto = if has_probe && !self.probe_noiseless {
            n_qubits
        } else {
            n_sys
        };
        (0..upto).collect()
    }
}

/// Elementwise action of `⊗_q E_Z` on a density matrix.
///
/// `E_Z(ρ) = (1 − p/2)ρ + (p/2)ZρZ` leaves populations alone and scales a
/// coherence by `1 − p` for every listed qubit on which its row and column
/// indices differ. The channel is its own adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingMask {
    factors: na::DMatrix<f64>,
}

impl DephasingMask {
    pub fn new(n_qubits: usize, p: f64, qubits: &[usize]) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        if let Some(&q) = qubits.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        let dim = 1 << n_qubits;
        let keep = 1.0 - p;
        let factors = na::DMatrix::from_fn(dim, dim, |r, c| {
            let mut f = 1.0;
            for &q in qubits {
                if bit(r, q, n_qubits) != bit(c, q, n_qubits) {
                    f *= keep;
                }
            }
            f
        });
        Ok(Self { factors })
    }

    pub fn apply(&self, m: &mut CMatrix) {
        m.zip_apply(&self.factors, |z, f| *z *= f);
    }
}

/// Applies `E_Z` with probability `p_z` to each listed qubit.
pub fn apply_dephasing_channel(
    mut rho: DensityMatrix,
    p_z: f64,
    qubits: &[usize],
) -> Result<DensityMatrix> {
    let mask = DephasingMask::new(rho.n_qubits(), p_z, qubits)?;
    mask.apply(rho.matrix_mut());
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::pauli::{pauli_string, Pauli};
    use crate::C64;
    use proptest::prelude::*;

    fn random_density(n: usize, seed: &[f64]) -> DensityMatrix {
        let dim = 1 << n;
        let a = CMatrix::from_fn(dim, dim, |r, c| {
            let k = 2 * (r * dim + c);
            C64::new(seed[k % seed.len()], seed[(k + 1) % seed.len()])
        });
        let m = &a * a.adjoint();
        let tr = m.trace();
        DensityMatrix::from_matrix(m / tr, false).unwrap()
    }

    /// Direct Kraus form `(1 − p/2)ρ + (p/2) Z ρ Z`, one qubit at a time.
    fn kraus(rho: &CMatrix, n: usize, p: f64, qubits: &[usize]) -> CMatrix {
        let mut out = rho.clone();
        for &q in qubits {
            let z = pauli_string(n, &[(q, Pauli::Z)], 1.0);
            out = &out * C64::new(1.0 - p / 2.0, 0.0) + (&z * &out * &z) * C64::new(p / 2.0, 0.0);
        }
        out
    }

    #[test]
    fn zero_probability_is_identity() {
        let rho = random_density(2, &[0.3, -0.1, 0.7, 0.2, 0.9, -0.4]);
        let out = apply_dephasing_channel(rho.clone(), 0.0, &[0, 1]).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn full_dephasing_kills_coherence() {
        let psi = na::DVector::from_vec(alloc::vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)]);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let out = apply_dephasing_channel(rho, 1.0, &[0]).unwrap();
        assert_eq!(out.matrix()[(0, 1)], C64::new(0.0, 0.0));
        assert!((out.matrix()[(0, 0)].re - 0.36).abs() < 1e-15);
        assert!((out.matrix()[(1, 1)].re - 0.64).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let rho = DensityMatrix::ground(2);
        assert_eq!(
            apply_dephasing_channel(rho.clone(), 0.1, &[2]),
            Err(Error::QubitOutOfRange {
                index: 2,
                n_qubits: 2
            })
        );
        assert!(apply_dephasing_channel(rho, 1.5, &[0]).is_err());
        assert!(NoiseSpec::new(-1.0).is_err());
    }

    #[test]
    fn dimer_probability() {
        let p = NoiseSpec::new(4.0).unwrap().p_z(1.25).unwrap();
        assert!((p - 0.94e-3).abs() < 0.01e-3, "{p}");
    }

    #[test]
    fn noisy_qubit_sets() {
        let mut n = NoiseSpec::new(4.0).unwrap();
        assert_eq!(n.noisy_qubits(3, true), alloc::vec![0, 1]);
        assert_eq!(n.noisy_qubits(2, false), alloc::vec![0, 1]);
        n.probe_noiseless = false;
        assert_eq!(n.noisy_qubits(3, true), alloc::vec![0, 1, 2]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn mask_matches_kraus_and_preserves_trace(
            seed in prop::collection::vec(-1.0f64..1.0, 32),
            p in 0.0f64..=1.0,
            q0 in any::<bool>(),
            q1 in any::<bool>(),
        ) {
            let rho = random_density(2, &seed);
            let qubits: Vec<usize> = [(0, q0), (1, q1)].iter().filter(|x| x.1).map(|x| x.0).collect();
            let want = kraus(rho.matrix(), 2, p, &qubits);
            let out = apply_dephasing_channel(rho, p, &qubits).unwrap();
            prop_assert!(crate::model::pauli::max_abs_diff(out.matrix(), &want) < 1e-14);
            prop_assert!((out.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
            prop_assert!(crate::model::hamiltonian::hermiticity_defect(out.matrix()) < 1e-12);
        }
    }
}
