use alloc::vec::Vec;

use super::channel::{DephasingMask, NoiseSpec};
use super::density::DensityMatrix;
use super::exact::unitary_exp;
use super::trotter::{trotter_layer, TrotterOrder, TrotterPlan};
use crate::error::{Error, Result};
use crate::model::hamiltonian::{build_pulse_hamiltonian, Fragment};
use crate::model::spec::{PulseProfile, PulseSpec, QubitCap, SystemSpec};
use crate::model::units::{period_fs, wavenumber_to_angular};
use crate::CMatrix;

/// One noisy Trotter layer: a unitary together with its dephasing placement.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerChannel {
    unitary: CMatrix,
    mask: Option<DephasingMask>,
    order: TrotterOrder,
}

impl LayerChannel {
    pub fn new(
        fragments: &[Fragment],
        order: TrotterOrder,
        dt: f64,
        noise: &NoiseSpec,
        has_probe: bool,
    ) -> Result<Self> {
        let u = trotter_layer(fragments, order, dt)?;
        let n = fragments[0].op.n_qubits();
        Self::from_unitary(u, order, dt, noise, n, has_probe)
    }

    /// Wraps a precomputed layer unitary on `n_qubits`.
    pub fn from_unitary(
        unitary: CMatrix,
        order: TrotterOrder,
        dt: f64,
        noise: &NoiseSpec,
        n_qubits: usize,
        has_probe: bool,
    ) -> Result<Self> {
        let mask = if noise.is_noiseless() || dt == 0.0 {
            None
        } else {
            let p = noise.p_z(dt)?;
            Some(DephasingMask::new(
                n_qubits,
                p,
                &noise.noisy_qubits(n_qubits, has_probe),
            )?)
        };
        Ok(Self {
            unitary,
            mask,
            order,
        })
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    /// Schrödinger-picture action on a density matrix.
    ///
    /// Second-order layers are sandwiched between two dephasing channels,
    /// first-order layers are followed by one.
    pub fn apply(&self, rho: &mut CMatrix) {
        if let (TrotterOrder::Second, Some(m)) = (self.order, &self.mask) {
            m.apply(rho);
        }
        *rho = &self.unitary * &*rho * self.unitary.adjoint();
        if let Some(m) = &self.mask {
            m.apply(rho);
        }
    }

    /// Heisenberg-picture (adjoint) action on an observable, so that
    /// `Tr[O · L(ρ)] = Tr[L†(O) · ρ]`.
    pub fn apply_adjoint(&self, obs: &mut CMatrix) {
        if let Some(m) = &self.mask {
            m.apply(obs);
        }
        *obs = self.unitary.adjoint() * &*obs * &self.unitary;
        if let (TrotterOrder::Second, Some(m)) = (self.order, &self.mask) {
            m.apply(obs);
        }
    }

    pub fn apply_n(&self, rho: &mut CMatrix, n: usize) {
        for _ in 0..n {
            self.apply(rho);
        }
    }
}

/// A whole pulse as a sequence of layers.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseChannel {
    layers: Vec<LayerChannel>,
}

impl PulseChannel {
    /// Delta profile: a single noiseless kick `exp(-i Σ α_m cos φ X_m · area)`.
    /// Gaussian profile: `D_p` first-order layers `e^{-iH_S Δt_p} e^{-iH_I(dΔt_p) Δt_p}`,
    /// `d = 1..=D_p`, each followed by dephasing.
    pub fn new(
        system_fragments: &[Fragment],
        spec: &SystemSpec,
        pulse: &PulseSpec,
        noise: &NoiseSpec,
        cap: QubitCap,
    ) -> Result<Self> {
        pulse.validate(spec)?;
        let n = spec.n_qub();
        let layers = match pulse.profile {
            PulseProfile::Delta { area_fs } => {
                let h = build_pulse_hamiltonian(spec, pulse, 0.0, cap)?;
                let u = unitary_exp(h.matrix(), area_fs)?;
                let quiet = NoiseSpec::noiseless();
                alloc::vec![LayerChannel::from_unitary(
                    u,
                    TrotterOrder::First,
                    0.0,
                    &quiet,
                    n,
                    false
                )?]
            }
            PulseProfile::Gaussian { .. } => {
                let dt = pulse.step_fs();
                warn_if_coarse(spec, pulse, dt);
                let u_s = trotter_layer(system_fragments, TrotterOrder::First, dt)?;
                (1..=pulse.trotter_steps)
                    .map(|d| {
                        // clamp the last step onto the window edge against rounding
                        let t = (d as f64 * dt).min(pulse.duration_fs);
                        let h = build_pulse_hamiltonian(spec, pulse, t, cap)?;
                        let u = &u_s * unitary_exp(h.matrix(), dt)?;
                        LayerChannel::from_unitary(u, TrotterOrder::First, dt, noise, n, false)
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[LayerChannel] {
        &self.layers
    }

    pub fn apply(&self, rho: &mut CMatrix) {
        for l in &self.layers {
            l.apply(rho);
        }
    }

    pub fn apply_adjoint(&self, obs: &mut CMatrix) {
        for l in self.layers.iter().rev() {
            l.apply_adjoint(obs);
        }
    }
}

fn warn_if_coarse(spec: &SystemSpec, pulse: &PulseSpec, dt: f64) {
    let fastest = spec
        .site_energies()
        .iter()
        .fold(pulse.carrier_cm.abs(), |m, e| m.max(e.abs()));
    if fastest > 0.0 && dt > 0.25 * period_fs(fastest) {
        log::warn!(
            "pulse step {dt} fs is coarse against the {:.3} fs period of {fastest} cm^-1 (ω = {:.4} rad/fs)",
            period_fs(fastest),
            wavenumber_to_angular(fastest)
        );
    }
}

fn check_dims(rho: &DensityMatrix, fragments: &[Fragment]) -> Result<()> {
    let f = fragments.first().ok_or(Error::EmptyFragments)?;
    if f.op.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: f.op.dim(),
        });
    }
    Ok(())
}

fn run_plan(
    mut rho: DensityMatrix,
    fragments: &[Fragment],
    plan: &TrotterPlan,
    noise: &NoiseSpec,
) -> Result<DensityMatrix> {
    check_dims(&rho, fragments)?;
    if plan.layers == 0 {
        return Ok(rho);
    }
    let layer = LayerChannel::new(fragments, plan.order, plan.step_fs, noise, rho.has_probe())?;
    layer.apply_n(rho.matrix_mut(), plan.layers);
    Ok(rho)
}

/// Free evolution `U_S` over `plan.layers` layers of the system fragments.
pub fn evolve_free(
    rho: DensityMatrix,
    system_fragments: &[Fragment],
    plan: &TrotterPlan,
    noise: &NoiseSpec,
) -> Result<DensityMatrix> {
    run_plan(rho, system_fragments, plan, noise)
}

/// Applies one pulse to a system-only state.
pub fn evolve_pulse(
    mut rho: DensityMatrix,
    system_fragments: &[Fragment],
    spec: &SystemSpec,
    pulse: &PulseSpec,
    noise: &NoiseSpec,
    cap: QubitCap,
) -> Result<DensityMatrix> {
    check_dims(&rho, system_fragments)?;
    let ch = PulseChannel::new(system_fragments, spec, pulse, noise, cap)?;
    ch.apply(rho.matrix_mut());
    Ok(rho)
}

/// Joint evolution `U_SP` of system and probe under `H_S + H_PR`.
pub fn evolve_system_probe(
    rho: DensityMatrix,
    sp_fragments: &[Fragment],
    plan: &TrotterPlan,
    noise: &NoiseSpec,
) -> Result<DensityMatrix> {
    if !rho.has_probe() {
        return Err(Error::ProbeMissing);
    }
    run_plan(rho, sp_fragments, plan, noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::density::trace_product;
    use crate::evolve::exact::{exact_evolve, unitarity_defect};
    use crate::model::hamiltonian::{
        build_system_hamiltonian, build_system_probe_hamiltonian, system_fragments,
        system_probe_fragments,
    };
    use crate::model::pauli::{lowering, max_abs_diff, number_operator, pauli_string, Pauli};
    use crate::model::presets;
    use crate::model::spec::ProbeSpec;
    use crate::C64;

    fn kicked_dimer() -> DensityMatrix {
        let spec = presets::dimer();
        let frags = system_fragments(&spec, QubitCap::default()).unwrap();
        evolve_pulse(
            DensityMatrix::ground(2),
            &frags,
            &spec,
            &presets::dimer_delta_pulse(0.3),
            &NoiseSpec::noiseless(),
            QubitCap::default(),
        )
        .unwrap()
    }

    #[test]
    fn zero_layers_is_identity() {
        let spec = presets::dimer();
        let frags = system_fragments(&spec, QubitCap::default()).unwrap();
        let rho = kicked_dimer();
        let plan = TrotterPlan::new(TrotterOrder::Second, 1.25, 0).unwrap();
        let out = evolve_free(rho.clone(), &frags, &plan, &NoiseSpec::new(4.0).unwrap()).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn single_site_precession() {
        let e = 12_000.0;
        let spec = SystemSpec::new(alloc::vec![e], &[], Vec::new()).unwrap();
        let frags = system_fragments(&spec, QubitCap::default()).unwrap();
        let psi =
            nalgebra::DVector::from_element(2, C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0));
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let plan = TrotterPlan::new(TrotterOrder::Second, 1.25, 37).unwrap();
        let out = evolve_free(rho, &frags, &plan, &NoiseSpec::noiseless()).unwrap();
        // ρ_01 ∝ e^{+iEt}: the ket |0> sits at -E/2, the bra <1| at +E/2
        let want = C64::new(0.0, wavenumber_to_angular(e) * plan.total_time()).exp() * 0.5;
        assert!((out.matrix()[(0, 1)] - want).norm() < 1e-12);
    }

    #[test]
    fn noise_preserves_trace_and_positivity() {
        let spec = presets::dimer();
        let frags = system_fragments(&spec, QubitCap::default()).unwrap();
        let plan = TrotterPlan::new(TrotterOrder::Second, 1.25, 400).unwrap();
        let out =
            evolve_free(kicked_dimer(), &frags, &plan, &NoiseSpec::new(4.0).unwrap()).unwrap();
        out.validate().unwrap();
        assert!(out.purity() < 1.0);
    }

    #[test]
    fn noiseless_evolution_keeps_purity_and_excitations() {
        let spec = presets::dimer();
        let frags = system_fragments(&spec, QubitCap::default()).unwrap();
        let rho = kicked_dimer();
        let nop = number_operator(2);
        let before = trace_product(&nop, rho.matrix()).re;
        let plan = TrotterPlan::new(TrotterOrder::Second, 1.25, 400).unwrap();
        let out = evolve_free(rho, &frags, &plan, &NoiseSpec::noiseless()).unwrap();
        assert!((out.purity() - 1.0).abs() < 1e-9);
        assert!((trace_product(&nop, out.matrix()).re - before).abs() < 1e-9);
    }

    #[test]
    fn matches_exact_oracle_at_small_step() {
        let spec = presets::dimer();
        let cap = QubitCap::default();
        let frags = system_fragments(&spec, cap).unwrap();
        let h = build_system_hamiltonian(&spec, cap).unwrap();
        let rho = kicked_dimer();
        let plan = TrotterPlan::new(TrotterOrder::Second, 0.01, 10_000).unwrap();
        let tr = evolve_free(rho.clone(), &frags, &plan, &NoiseSpec::noiseless()).unwrap();
        let ex = exact_evolve(&rho, &h, plan.total_time(), cap).unwrap();
        let err = max_abs_diff(tr.matrix(), ex.matrix());
        assert!(err < 1e-8, "{err:e}");
    }

    #[test]
    fn zero_amplitude_pulse_is_free_evolution() {
        let spec = presets::dimer();
        let cap = QubitCap::default();
        let frags = system_fragments(&spec, cap).unwrap();
        let pulse = PulseSpec::gaussian(alloc::vec![0.0, 0.0], 12_422.0, 5.0, 6.93, 14.0, 42);
        let rho = kicked_dimer();
        let out = evolve_pulse(
            rho.clone(),
            &frags,
            &spec,
            &pulse,
            &NoiseSpec::noiseless(),
            cap,
        )
        .unwrap();
        let plan = TrotterPlan::new(TrotterOrder::First, 14.0 / 42.0, 42).unwrap();
        let free = evolve_free(rho, &frags, &plan, &NoiseSpec::noiseless()).unwrap();
        assert!(max_abs_diff(out.matrix(), free.matrix()) < 1e-12);
    }

    #[test]
    fn weak_kick_is_first_order() {
        // ρ' − ρ ≈ −iα[ΣX, ρ]; the remainder shrinks as α²
        let spec =
            SystemSpec::new(alloc::vec![12_000.0, 11_800.0], &[(0, 1, 50.0)], Vec::new()).unwrap();
        let cap = QubitCap::default();
        let frags = system_fragments(&spec, cap).unwrap();
        let rho0 = {
            let psi = nalgebra::DVector::from_vec(alloc::vec![
                C64::new(0.8, 0.0),
                C64::new(0.0, 0.6),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0)
            ]);
            DensityMatrix::from_pure(&psi).unwrap()
        };
        let sx = pauli_string(2, &[(0, Pauli::X)], 1.0) + pauli_string(2, &[(1, Pauli::X)], 1.0);
        let mut pts = Vec::new();
        for a in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let pulse = PulseSpec::delta(alloc::vec![a, a], 0.0);
            let out = evolve_pulse(
                rho0.clone(),
                &frags,
                &spec,
                &pulse,
                &NoiseSpec::noiseless(),
                cap,
            )
            .unwrap();
            let w = wavenumber_to_angular(a);
            let comm = &sx * rho0.matrix() - rho0.matrix() * &sx;
            let lin = rho0.matrix() - comm * C64::new(0.0, w);
            let diff = out.matrix() - rho0.matrix();
            let rem = max_abs_diff(out.matrix(), &lin);
            pts.push((
                w.ln(),
                diff.iter().map(|z| z.norm()).fold(0.0, f64::max).ln(),
            ));
            assert!(rem < 2.0 * w * w);
        }
        let slope = crate::fit::slope(&pts);
        assert!((slope - 1.0).abs() < 0.05, "{slope}");
    }

    #[test]
    fn kick_area_scales_the_rotation_angle() {
        // one uncoupled site: ⟨Z⟩ after the kick is cos(2θ) with θ = ω(α)·area
        let spec = SystemSpec::new(alloc::vec![12_000.0], &[], Vec::new()).unwrap();
        let cap = QubitCap::default();
        let frags = system_fragments(&spec, cap).unwrap();
        let z = pauli_string(1, &[(0, Pauli::Z)], 1.0);
        for (a, area) in [(-8_000.0, 1.0), (-8_000.0, 0.05), (-400.0, 1.0)] {
            let pulse = PulseSpec::delta_with_area(alloc::vec![a], 0.0, area);
            let out = evolve_pulse(
                DensityMatrix::ground(1),
                &frags,
                &spec,
                &pulse,
                &NoiseSpec::noiseless(),
                cap,
            )
            .unwrap();
            let theta = wavenumber_to_angular(a) * area;
            assert!((trace_product(&z, out.matrix()).re - (2.0 * theta).cos()).abs() < 1e-12);
        }
        assert!(PulseSpec::delta_with_area(alloc::vec![1.0], 0.0, 0.0)
            .validate(&spec)
            .is_err());
    }

    #[test]
    fn gaussian_layer_count() {
        let spec = presets::dimer();
        let cap = QubitCap::default();
        let frags = system_fragments(&spec, cap).unwrap();
        let pulse = PulseSpec::gaussian(alloc::vec![-100.0, -80.0], 12_422.0, 5.0, 6.93, 14.0, 42);
        let ch =
            PulseChannel::new(&frags, &spec, &pulse, &NoiseSpec::new(4.0).unwrap(), cap).unwrap();
        assert_eq!(ch.layers().len(), 42);
        assert!((pulse.step_fs() - 1.0 / 3.0).abs() < 1e-15);
        for l in ch.layers() {
            assert!(unitarity_defect(l.unitary()) < 1e-12);
        }
    }

    #[test]
    fn decoupled_probe_stays_in_ground() {
        let spec = presets::dimer();
        let cap = QubitCap::default();
        let probe = ProbeSpec::new(12_141.4, alloc::vec![0.0, 0.0]).unwrap();
        let frags = system_probe_fragments(&spec, &probe, cap).unwrap();
        let rho = kicked_dimer().attach_probe().unwrap();
        let plan = TrotterPlan::new(TrotterOrder::Second, 1.25, 580).unwrap();
        let out = evolve_system_probe(rho, &frags, &plan, &NoiseSpec::new(4.0).unwrap()).unwrap();
        let a = lowering(3, 2);
        assert!(trace_product(&a, out.matrix()).norm() < 1e-14);
        let p1 = (0..8)
            .filter(|i| i & 1 == 1)
            .map(|i| out.matrix()[(i, i)].re)
            .sum::<f64>();
        assert!(p1.abs() < 1e-14);
    }

    #[test]
    fn probe_evolution_requires_probe() {
        let spec = presets::dimer();
        let probe = presets::dimer_probe(12_141.4);
        let frags = system_probe_fragments(&spec, &probe, QubitCap::default()).unwrap();
        let plan = TrotterPlan::new(TrotterOrder::Second, 1.25, 1).unwrap();
        assert_eq!(
            evolve_system_probe(
                DensityMatrix::ground(2),
                &frags,
                &plan,
                &NoiseSpec::noiseless()
            ),
            Err(Error::ProbeMissing)
        );
    }

    #[test]
    fn system_probe_layers_are_unitary_and_converge() {
        let spec = presets::dimer();
        let cap = QubitCap::default();
        let probe = presets::dimer_probe(12_141.4);
        let frags = system_probe_fragments(&spec, &probe, cap).unwrap();
        let layer = LayerChannel::new(
            &frags,
            TrotterOrder::Second,
            1.25,
            &NoiseSpec::noiseless(),
            true,
        )
        .unwrap();
        let mut u = CMatrix::identity(8, 8);
        for _ in 0..580 {
            u = layer.unitary() * u;
        }
        assert!(unitarity_defect(&u) < 1e-10);
        let h = build_system_probe_hamiltonian(&spec, &probe, cap).unwrap();
        let rho = kicked_dimer().attach_probe().unwrap();
        let plan = TrotterPlan::new(TrotterOrder::Second, 0.05, 2000).unwrap();
        let tr = evolve_system_probe(rho.clone(), &frags, &plan, &NoiseSpec::noiseless()).unwrap();
        let ex = exact_evolve(&rho, &h, 100.0, cap).unwrap();
        assert!(max_abs_diff(tr.matrix(), ex.matrix()) < 1e-6);
    }

    #[test]
    fn adjoint_is_dual() {
        let spec = presets::dimer();
        let frags = system_fragments(&spec, QubitCap::default()).unwrap();
        let noise = NoiseSpec::new(40.0).unwrap();
        let obs = number_operator(2) + pauli_string(2, &[(0, Pauli::X), (1, Pauli::Y)], 0.3);
        for order in [TrotterOrder::First, TrotterOrder::Second] {
            let layer = LayerChannel::new(&frags, order, 1.25, &noise, false).unwrap();
            let mut rho = kicked_dimer().into_matrix();
            let mut o = obs.clone();
            let before = trace_product(&obs, &{
                let mut r = rho.clone();
                layer.apply(&mut r);
                r
            });
            layer.apply_adjoint(&mut o);
            let after = trace_product(&o, &rho);
            assert!((before - after).norm() < 1e-14);
            layer.apply(&mut rho);
        }
    }
}
