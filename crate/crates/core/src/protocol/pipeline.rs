//! Literal circuit pipelines, one grid point at a time.

use alloc::vec::Vec;

use nalgebra as na;

use super::experiment::{Experiment, GridPoint};
use super::observables::{fluorescence_expectation, probe_expectations};
use crate::error::{invalid, Result};
use crate::evolve::{
    evolve_free, evolve_pulse, evolve_system_probe, trace_distance, DensityMatrix,
};
use crate::model::hamiltonian::{system_fragments, system_probe_fragments, Fragment};
use crate::model::spec::ProbeSpec;
use crate::model::units::wavenumber_to_angular;
use crate::{CMatrix, C64};

fn fragments(exp: &Experiment) -> Result<Vec<Fragment>> {
    system_fragments(&exp.system, exp.cap)
}

/// Ground state, pulse 1, `t₁`, pulse 2, `t₂`, pulse 3.
///
/// Both protocols start their detection stage from this state.
pub fn prepare_pre_detection(exp: &Experiment, point: &GridPoint) -> Result<DensityMatrix> {
    exp.check_point(point)?;
    let frags = fragments(exp)?;
    let pulse = |rho, j| {
        evolve_pulse(
            rho,
            &frags,
            &exp.system,
            &exp.pulse_for(j, point.phase),
            &exp.noise,
            exp.cap,
        )
    };
    let mut rho = DensityMatrix::ground(exp.system.n_qub());
    rho = pulse(rho, 0)?;
    rho = evolve_free(rho, &frags, &exp.t1.plan(exp.order, point.t1)?, &exp.noise)?;
    rho = pulse(rho, 1)?;
    rho = evolve_free(rho, &frags, &exp.t2.plan(exp.order, point.t2)?, &exp.noise)?;
    pulse(rho, 2)
}

/// Fluorescence `⟨F(t₁, t₂, t₃; φ⃗)⟩` after the full four-pulse circuit.
pub fn run_sqsp_point(exp: &Experiment, point: &GridPoint, t3_index: usize) -> Result<f64> {
    if t3_index >= exp.t3.samples {
        return Err(invalid(
            "t3",
            alloc::format!("index {t3_index} outside 0..{}", exp.t3.samples),
        ));
    }
    let frags = fragments(exp)?;
    let mut rho = prepare_pre_detection(exp, point)?;
    rho = evolve_free(rho, &frags, &exp.t3.plan(exp.order, t3_index)?, &exp.noise)?;
    rho = evolve_pulse(
        rho,
        &frags,
        &exp.system,
        &exp.pulse_for(3, point.phase),
        &exp.noise,
        exp.cap,
    )?;
    Ok(fluorescence_expectation(&rho, &exp.fluorescence))
}

/// `(⟨X_pr⟩, ⟨Y_pr⟩)` after three pulses and the probe interaction window.
pub fn run_pqp_point(exp: &Experiment, point: &GridPoint, probe: &ProbeSpec) -> Result<(f64, f64)> {
    let rho = prepare_pre_detection(exp, point)?;
    probe_readout(exp, rho, probe)
}

/// Attaches the probe in `|0⟩`, evolves under `H_S + H_PR` for the probe
/// window and reads the probe in the interaction picture.
pub fn probe_readout(
    exp: &Experiment,
    rho: DensityMatrix,
    probe: &ProbeSpec,
) -> Result<(f64, f64)> {
    let evolved = evolve_with_probe(exp, rho, probe)?;
    let t3 = exp.probe_window.duration_fs();
    Ok(probe_expectations(&interaction_picture(
        evolved,
        probe.omega_pr,
        t3,
    )))
}

pub(crate) fn evolve_with_probe(
    exp: &Experiment,
    rho: DensityMatrix,
    probe: &ProbeSpec,
) -> Result<DensityMatrix> {
    let frags = system_probe_fragments(&exp.system, probe, exp.cap)?;
    let rho = rho.attach_probe()?;
    evolve_system_probe(rho, &frags, &exp.probe_plan()?, &exp.noise)
}

/// Trace distance between the system state evolved with the probe attached
/// (then traced out) and the same state evolved freely for the probe window.
pub fn probe_back_action(exp: &Experiment, rho: &DensityMatrix, probe: &ProbeSpec) -> Result<f64> {
    let with = evolve_with_probe(exp, rho.clone(), probe)?.trace_out_probe()?;
    let plan = crate::evolve::TrotterPlan::new(
        exp.order,
        exp.probe_window.step_fs,
        exp.probe_window.layers,
    )?;
    let without = evolve_free(rho.clone(), &fragments(exp)?, &plan, &exp.noise)?;
    trace_distance(&with, &without)
}

/// `R = exp(-i (ω_pr t/2) Z_pr)`, which undoes the free probe precession.
pub fn interaction_rotation(n_qubits: usize, omega_pr_cm: f64, t_fs: f64) -> CMatrix {
    let half = 0.5 * wavenumber_to_angular(omega_pr_cm) * t_fs;
    CMatrix::from_diagonal(&na::DVector::from_fn(1 << n_qubits, |i, _| {
        // probe is the least significant bit; Z = +1 on |0⟩
        let z = if i & 1 == 0 { 1.0 } else { -1.0 };
        C64::new(0.0, -half * z).exp()
    }))
}

/// `ρ ↦ R ρ R†` with `R` from [`interaction_rotation`].
pub fn interaction_picture(mut rho: DensityMatrix, omega_pr_cm: f64, t_fs: f64) -> DensityMatrix {
    let r = interaction_rotation(rho.n_qubits(), omega_pr_cm, t_fs);
    rho.conjugate(&r);
    rho
}
