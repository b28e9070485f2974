//! Dense Pauli-string construction on the computational basis.
//!
//! Qubit `q` of an `n`-qubit register is tensor factor `q`, i.e. the bit at
//! position `n - 1 - q` of a basis index. The probe, when present, is the
//! last factor and therefore the least significant bit.

use nalgebra as na;

use crate::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

#[inline]
pub(crate) fn bit(index: usize, qubit: usize, n_qubits: usize) -> usize {
    (index >> (n_qubits - 1 - qubit)) & 1
}

#[inline]
pub(crate) fn flip(index: usize, qubit: usize, n_qubits: usize) -> usize {
    index ^ (1 << (n_qubits - 1 - qubit))
}

/// Dense matrix of `coeff · ⊗_q P_q` for the listed (qubit, Pauli) factors.
pub fn pauli_string(n_qubits: usize, factors: &[(usize, Pauli)], coeff: f64) -> CMatrix {
    let dim = 1usize << n_qubits;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut row = col;
        let mut amp = C64::new(coeff, 0.0);
        for &(q, p) in factors {
            let b = bit(row, q, n_qubits);
            match p {
                Pauli::X => row = flip(row, q, n_qubits),
                Pauli::Y => {
                    // Y|0> = i|1>, Y|1> = -i|0>
                    amp *= if b == 0 { C64::i() } else { -C64::i() };
                    row = flip(row, q, n_qubits);
                }
                Pauli::Z => {
                    if b == 1 {
                        amp = -amp;
                    }
                }
            }
        }
        out[(row, col)] += amp;
    }
    out
}

/// Total excitation-number operator `Σ_q |1⟩⟨1|_q` (diagonal).
pub fn number_operator(n_qubits: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    CMatrix::from_diagonal(&na::DVector::from_fn(dim, |i, _| {
        C64::new(i.count_ones() as f64, 0.0)
    }))
}

/// Single-site lowering operator `a_q = (X_q + iY_q)/2 = |0⟩⟨1|_q`.
pub fn lowering(n_qubits: usize, qubit: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        if bit(col, qubit, n_qubits) == 1 {
            out[(flip(col, qubit, n_qubits), col)] = C64::new(1.0, 0.0);
        }
    }
    out
}

/// Largest entry modulus of `A - B`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_paulis() {
        let x = pauli_string(1, &[(0, Pauli::X)], 1.0);
        let y = pauli_string(1, &[(0, Pauli::Y)], 1.0);
        let z = pauli_string(1, &[(0, Pauli::Z)], 1.0);
        assert_eq!(x[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(y[(0, 1)], C64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], C64::new(0.0, 1.0));
        assert_eq!(z[(1, 1)], C64::new(-1.0, 0.0));
        // XY = iZ
        let xy = &x * &y;
        assert!(max_abs_diff(&xy, &(z * C64::i())) < 1e-15);
    }

    #[test]
    fn lowering_matches_pauli_combination() {
        let n = 3;
        for q in 0..n {
            let x = pauli_string(n, &[(q, Pauli::X)], 0.5);
            let y = pauli_string(n, &[(q, Pauli::Y)], 0.5);
            let a = x + y * C64::i();
            assert!(max_abs_diff(&a, &lowering(n, q)) < 1e-15);
        }
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        // X on qubit 0 of two qubits maps |00> (index 0) to |10> (index 2)
        let x0 = pauli_string(2, &[(0, Pauli::X)], 1.0);
        assert_eq!(x0[(2, 0)], C64::new(1.0, 0.0));
    }
}
