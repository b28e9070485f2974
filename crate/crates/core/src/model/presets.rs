//! Parameter sets used throughout the numerical study.

use alloc::vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::spec::{ProbeSpec, PulseSpec, SystemSpec};

/// Site energies of the two-molecule system, cm⁻¹.
pub const DIMER_SITE_ENERGIES: [f64; 2] = [12_100.0, 11_900.0];
/// Intermolecular coupling, cm⁻¹.
pub const DIMER_COUPLING: f64 = 100.0;
/// Delta-kick amplitudes `α_m(0)` in cm⁻¹; the second site carries 0.8 of the first.
pub const DIMER_KICK: [f64; 2] = [-8.0e3, -6.4e3];
/// Probe-site coupling, one tenth of the intermolecular coupling.
pub const DIMER_PROBE_COUPLING: f64 = 10.0;
/// Single-qubit dephasing rate, cm⁻¹.
pub const GAMMA_Z: f64 = 4.0;

pub fn dimer() -> SystemSpec {
    SystemSpec::new(
        DIMER_SITE_ENERGIES.to_vec(),
        &[(0, 1, DIMER_COUPLING)],
        vec![],
    )
    .expect("preset is valid")
}

pub fn dimer_probe(omega_pr: f64) -> ProbeSpec {
    ProbeSpec::new(omega_pr, vec![DIMER_PROBE_COUPLING; 2]).expect("preset is valid")
}

pub fn dimer_delta_pulse(phase: f64) -> PulseSpec {
    PulseSpec::delta(DIMER_KICK.to_vec(), phase)
}

/// One-exciton eigenenergies `12000 ± √(100² + 100²)` as (upper, lower).
pub fn dimer_one_exciton() -> (f64, f64) {
    let mean = 0.5 * (DIMER_SITE_ENERGIES[0] + DIMER_SITE_ENERGIES[1]);
    let half = 0.5 * (DIMER_SITE_ENERGIES[0] - DIMER_SITE_ENERGIES[1]);
    let s = (half * half + DIMER_COUPLING * DIMER_COUPLING).sqrt();
    (mean + s, mean - s)
}
