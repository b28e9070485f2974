use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::C64;

/// Per-pulse phase lists and the signal-selection vector `p⃗`.
///
/// Combinations are enumerated as a mixed-radix number with pulse 1 the most
/// significant digit, so the default 3×3×3×1 scheme has index
/// `k = 9·i₁ + 3·i₂ + i₃`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCycleScheme {
    phases: [Vec<f64>; 4],
    p_vector: [u8; 4],
}

pub const REPHASING: [u8; 4] = [1, 0, 0, 1];
pub const NONREPHASING: [u8; 4] = [0, 1, 0, 1];

fn third_turns() -> Vec<f64> {
    alloc::vec![0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]
}

impl PhaseCycleScheme {
    pub fn new(phases: [Vec<f64>; 4], p_vector: [u8; 4]) -> Result<Self> {
        if phases.iter().any(|p| p.is_empty()) {
            return Err(invalid("phases", "every pulse needs at least one phase"));
        }
        if phases.iter().flatten().any(|p| !p.is_finite()) {
            return Err(invalid("phases", "phases must be finite"));
        }
        if p_vector.iter().any(|&b| b > 1) {
            return Err(invalid(
                "p_vector",
                format!("entries must be 0 or 1, got {p_vector:?}"),
            ));
        }
        Ok(Self { phases, p_vector })
    }

    /// `{0, 2π/3, 4π/3}` on pulses 1–3 and `{0}` on pulse 4.
    pub fn standard(p_vector: [u8; 4]) -> Self {
        Self::new(
            [
                third_turns(),
                third_turns(),
                third_turns(),
                alloc::vec![0.0],
            ],
            p_vector,
        )
        .expect("standard scheme is valid")
    }

    pub fn rephasing() -> Self {
        Self::standard(REPHASING)
    }

    pub fn nonrephasing() -> Self {
        Self::standard(NONREPHASING)
    }

    pub fn with_p_vector(&self, p_vector: [u8; 4]) -> Result<Self> {
        Self::new(self.phases.clone(), p_vector)
    }

    pub fn phases(&self) -> &[Vec<f64>; 4] {
        &self.phases
    }

    pub fn p_vector(&self) -> [u8; 4] {
        self.p_vector
    }

    /// Number of phase combinations.
    pub fn len(&self) -> usize {
        self.phases.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-pulse indices of combination `k`.
    pub fn digits(&self, k: usize) -> [usize; 4] {
        let mut out = [0; 4];
        let mut rest = k;
        for j in (0..4).rev() {
            let r = self.phases[j].len();
            out[j] = rest % r;
            rest /= r;
        }
        out
    }

    /// Phases `φ⃗_k`.
    pub fn combination(&self, k: usize) -> [f64; 4] {
        let d = self.digits(k);
        core::array::from_fn(|j| self.phases[j][d[j]])
    }

    /// Inverse-transform weight `exp{-i Σ_j (-1)^{p_j} φ_j}` divided by the
    /// number of combinations.
    pub fn weight(&self, k: usize) -> C64 {
        let phi = self.combination(k);
        let arg: f64 = (0..4)
            .map(|j| {
                if self.p_vector[j] == 1 {
                    -phi[j]
                } else {
                    phi[j]
                }
            })
            .sum();
        C64::new(0.0, -arg).exp() / self.len() as f64
    }
}

/// Phase-cycling inverse transform over a complete set of combination values.
///
/// `values[k]` is the measurement at combination `k`; `None` marks a gap.
pub fn phase_cycle_combine(values: &[Option<C64>], scheme: &PhaseCycleScheme) -> Result<C64> {
    let expected = scheme.len();
    let present = values.iter().take(expected).filter(|v| v.is_some()).count();
    if values.len() < expected || present < expected {
        return Err(Error::MissingCombinations {
            missing: expected - present,
            expected,
        });
    }
    Ok(values
        .iter()
        .take(expected)
        .enumerate()
        .map(|(k, v)| v.unwrap() * scheme.weight(k))
        .sum())
}

/// Same transform for real-valued data with no gaps.
pub fn combine_real(values: &[f64], scheme: &PhaseCycleScheme) -> Result<C64> {
    if values.len() < scheme.len() {
        return Err(Error::MissingCombinations {
            missing: scheme.len() - values.len(),
            expected: scheme.len(),
        });
    }
    Ok(values
        .iter()
        .enumerate()
        .take(scheme.len())
        .map(|(k, &v)| scheme.weight(k) * v)
        .sum())
}
