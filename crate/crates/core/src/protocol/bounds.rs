use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::eigen::{eigendecompose, EigenStructure};
use crate::model::hamiltonian::build_system_hamiltonian;
use crate::model::spec::{ProbeSpec, QubitCap, SystemSpec};
use crate::model::units::SPEED_OF_LIGHT_CM_PER_FS;

/// Gaps closer than this to the probe gap count as the probed transition.
pub const DEFAULT_RESONANCE_TOL_CM: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T3Bounds {
    pub lower_fs: f64,
    pub upper_fs: f64,
    /// Distance from the probe gap to the nearest other transition, cm⁻¹.
    pub nearest_detuning_cm: f64,
}

impl T3Bounds {
    pub fn contains(&self, t3: f64) -> bool {
        t3 > self.lower_fs && t3 < self.upper_fs
    }
}

/// Transition `lower → upper` between adjacent excitation manifolds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub lower: usize,
    pub upper: usize,
    pub gap_cm: f64,
}

/// All transitions between manifolds `p` and `p + 1`.
pub fn adjacent_manifold_transitions(eig: &EigenStructure) -> Vec<Transition> {
    let Some(labels) = &eig.manifold_index else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (u, &pu) in labels.iter().enumerate() {
        for (l, &pl) in labels.iter().enumerate() {
            if pu == pl + 1 {
                out.push(Transition {
                    lower: l,
                    upper: u,
                    gap_cm: eig.energies[u] - eig.energies[l],
                });
            }
        }
    }
    out
}

/// Window `(1/(c·δ), 1/(c·n·max J))` on the probe interaction time, with `δ`
/// the detuning of the probe from the nearest non-resonant transition.
pub fn t3_bounds(spec: &SystemSpec, probe: &ProbeSpec, cap: QubitCap) -> Result<T3Bounds> {
    t3_bounds_with_tol(spec, probe, cap, DEFAULT_RESONANCE_TOL_CM)
}

pub fn t3_bounds_with_tol(
    spec: &SystemSpec,
    probe: &ProbeSpec,
    cap: QubitCap,
    tol_cm: f64,
) -> Result<T3Bounds> {
    probe.check_against(spec)?;
    let eig = eigendecompose(&build_system_hamiltonian(spec, cap)?)?;
    let delta = adjacent_manifold_transitions(&eig)
        .iter()
        .map(|t| (t.gap_cm - probe.omega_pr).abs())
        .filter(|&d| d > tol_cm)
        .fold(f64::INFINITY, f64::min);
    if !delta.is_finite() {
        return Err(Error::DegenerateProbeGap {
            omega_pr: probe.omega_pr,
        });
    }
    let jmax = probe.max_coupling();
    let upper = if jmax > 0.0 {
        1.0 / (SPEED_OF_LIGHT_CM_PER_FS * spec.n_qub() as f64 * jmax)
    } else {
        f64::INFINITY
    };
    Ok(T3Bounds {
        lower_fs: 1.0 / (SPEED_OF_LIGHT_CM_PER_FS * delta),
        upper_fs: upper,
        nearest_detuning_cm: delta,
    })
}
