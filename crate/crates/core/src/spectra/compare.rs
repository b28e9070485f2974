//! Cross-protocol comparison of peak dynamics and probe-line amplitudes.

use alloc::vec::Vec;

use super::spectrum::{extract_peak_trace, trace_correlation, PeakTrace, Spectrum2D};
use crate::error::{invalid, Result};
use crate::model::eigen::EigenStructure;

/// Gaps from the ground state to every one-excitation eigenstate, highest first.
pub fn one_exciton_gaps(eig: &EigenStructure) -> Vec<f64> {
    let e0 = eig.energies[0];
    let mut gaps: Vec<f64> = eig
        .manifold(1)
        .iter()
        .map(|&i| eig.energies[i] - e0)
        .collect();
    gaps.sort_by(|a, b| b.total_cmp(a));
    gaps
}

/// Every `(ω₁, ω₃)` pair of the given energies, `ω₁`-major.
pub fn peak_grid(energies: &[f64]) -> Vec<(f64, f64)> {
    energies
        .iter()
        .flat_map(|&a| energies.iter().map(move |&b| (a, b)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakComparison {
    pub omega1_cm: f64,
    pub omega3_cm: f64,
    pub reference: PeakTrace,
    pub other: PeakTrace,
    pub correlation: f64,
}

/// Pearson correlation of the `t₂` traces of each peak in two spectra.
pub fn compare_peaks(
    reference: &Spectrum2D,
    other: &Spectrum2D,
    peaks: &[(f64, f64)],
) -> Result<Vec<PeakComparison>> {
    if reference.t2_fs != other.t2_fs {
        return Err(invalid("t2", "spectra sample different waiting times"));
    }
    peaks
        .iter()
        .map(|&(w1, w3)| {
            let a = extract_peak_trace(reference, w1, w3)?;
            let b = extract_peak_trace(other, w1, w3)?;
            Ok(PeakComparison {
                omega1_cm: w1,
                omega3_cm: w3,
                correlation: trace_correlation(&a, &b),
                reference: a,
                other: b,
            })
        })
        .collect()
}

/// Largest `|S|` on detection bin `omega3_cm` over the listed `ω₁` positions
/// and every waiting time.
pub fn line_amplitude(spec: &Spectrum2D, omega1_cm: &[f64], omega3_cm: f64) -> Result<f64> {
    let mut best = 0.0f64;
    for &w1 in omega1_cm {
        let tr = extract_peak_trace(spec, w1, omega3_cm)?;
        best = tr.values.iter().copied().fold(best, f64::max);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::eigen::eigendecompose;
    use crate::model::hamiltonian::build_system_hamiltonian;
    use crate::model::{presets, QubitCap};
    use crate::spectra::{AssembleOptions, DetectionAxis};
    use crate::C64;

    #[test]
    fn dimer_gaps() {
        let eig = eigendecompose(
            &build_system_hamiltonian(&presets::dimer(), QubitCap::default()).unwrap(),
        )
        .unwrap();
        let g = one_exciton_gaps(&eig);
        let (e1, e2) = presets::dimer_one_exciton();
        assert_eq!(g.len(), 2);
        assert!((g[0] - e1).abs() < 1e-8 && (g[1] - e2).abs() < 1e-8);
        assert_eq!(
            peak_grid(&g),
            [(g[0], g[0]), (g[0], g[1]), (g[1], g[0]), (g[1], g[1])]
        );
    }

    fn toy(scale: f64, wobble: f64) -> Spectrum2D {
        let values = (0..2 * 3 * 2)
            .map(|i| {
                let (w1, t2, w3) = (i / 6, (i / 2) % 3, i % 2);
                C64::new(
                    scale * (1.0 + w1 as f64 + w3 as f64 * (t2 as f64 + wobble)),
                    0.0,
                )
            })
            .collect();
        Spectrum2D::new(
            alloc::vec![100.0, 200.0],
            alloc::vec![0.0, 10.0, 20.0],
            alloc::vec![500.0, 600.0],
            values,
            DetectionAxis::ProbeLines,
            AssembleOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn correlation_ignores_scale() {
        let c = compare_peaks(&toy(1.0, 0.0), &toy(3.0, 0.5), &[(100.0, 600.0)]).unwrap();
        assert!((c[0].correlation - 1.0).abs() < 1e-12);
        assert!(compare_peaks(&toy(1.0, 0.0), &toy(1.0, 0.0), &[(260.0, 600.0)]).is_err());
        // line 600 at ω₁ = 200, t₂ = 20: 1 + 1 + 2
        assert_eq!(
            line_amplitude(&toy(1.0, 0.0), &[100.0, 200.0], 600.0).unwrap(),
            4.0
        );
    }
}
