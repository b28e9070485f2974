//! Whole-block evaluation of a sweep.
//!
//! A block is every measurement sharing one phase combination and one `t₁`
//! sample. The state is carried forward through the waiting-time samples, and
//! the detection stage is folded into Heisenberg-picture observables computed
//! once per context, so each `t₂` sample costs one trace per readout.

use alloc::vec::Vec;

use super::experiment::{Experiment, GridPoint};
use super::pipeline::interaction_rotation;
use crate::error::{invalid, Result};
use crate::evolve::density::trace_product;
use crate::evolve::{DensityMatrix, LayerChannel, PulseChannel};
use crate::ledger::{LedgerShape, MeasurementLedger};
use crate::model::hamiltonian::{system_fragments, system_probe_fragments};
use crate::model::pauli::{pauli_string, Pauli};
use crate::model::spec::ProbeSpec;
use crate::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    Sqsp,
    Pqp,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Sqsp => "sqsp",
            Protocol::Pqp => "pqp",
        }
    }

    pub fn observables(self) -> &'static [Observable] {
        match self {
            Protocol::Sqsp => &[Observable::F],
            Protocol::Pqp => &[Observable::XPr, Observable::YPr],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    F,
    XPr,
    YPr,
}

impl Observable {
    pub fn tag(self) -> &'static str {
        match self {
            Observable::F => "F",
            Observable::XPr => "X_pr",
            Observable::YPr => "Y_pr",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "F" => Some(Observable::F),
            "X_pr" => Some(Observable::XPr),
            "Y_pr" => Some(Observable::YPr),
            _ => None,
        }
    }
}

/// Values of one (phase, `t₁`) block, laid out as `[t₂][slot][observable]`.
/// A slot is a `t₃` sample for the standard protocol and a probe line for
/// the probe protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub phase: usize,
    pub t1: usize,
    pub n_t2: usize,
    pub n_slots: usize,
    pub n_obs: usize,
    pub values: Vec<f64>,
}

impl Block {
    pub fn value(&self, t2: usize, slot: usize, obs: usize) -> f64 {
        self.values[(t2 * self.n_slots + slot) * self.n_obs + obs]
    }
}

#[derive(Debug, Clone)]
pub struct SweepContext {
    exp: Experiment,
    protocol: Protocol,
    free1: LayerChannel,
    free2: LayerChannel,
    /// `pulses[j][i]`: pulse `j` with the `i`-th phase of its list.
    pulses: [Vec<PulseChannel>; 4],
    /// SQSP: `[φ₄ index][t₃]` fluorescence observables.
    /// PQP: `[line][X, Y]` effective probe observables on the system.
    readout: Vec<Vec<CMatrix>>,
    probes: Vec<ProbeSpec>,
}

impl SweepContext {
    pub fn sqsp(exp: &Experiment) -> Result<Self> {
        let mut ctx = Self::common(exp, Protocol::Sqsp, Vec::new())?;
        let frags = system_fragments(&exp.system, exp.cap)?;
        let free3 = LayerChannel::new(&frags, exp.order, exp.t3.step_fs, &exp.noise, false)?;
        let f = exp.fluorescence.operator(exp.system.n_qub());
        ctx.readout = ctx.pulses[3]
            .iter()
            .map(|k4| {
                let mut o = f.clone();
                k4.apply_adjoint(&mut o);
                let mut out = Vec::with_capacity(exp.t3.samples);
                for _ in 0..exp.t3.samples {
                    out.push(o.clone());
                    free3.apply_adjoint(&mut o);
                }
                out
            })
            .collect();
        Ok(ctx)
    }

    pub fn pqp(exp: &Experiment, probes: &[ProbeSpec]) -> Result<Self> {
        if probes.is_empty() {
            return Err(invalid(
                "probe_gaps",
                "the probe protocol needs at least one line",
            ));
        }
        let mut ctx = Self::common(exp, Protocol::Pqp, probes.to_vec())?;
        let n = exp.system.n_qub() + 1;
        let t3 = exp.probe_window.duration_fs();
        let mut readout = Vec::with_capacity(probes.len());
        for probe in probes {
            let frags = system_probe_fragments(&exp.system, probe, exp.cap)?;
            let layer = LayerChannel::new(
                &frags,
                exp.order,
                exp.probe_window.step_fs,
                &exp.noise,
                true,
            )?;
            let r = interaction_rotation(n, probe.omega_pr, t3);
            let line = [Pauli::X, Pauli::Y]
                .iter()
                .map(|&p| {
                    let o = pauli_string(n, &[(n - 1, p)], 1.0);
                    let mut o = r.adjoint() * o * &r;
                    for _ in 0..exp.probe_window.layers {
                        layer.apply_adjoint(&mut o);
                    }
                    // ⟨0|_pr · |0⟩_pr: the probe starts in its ground state
                    let d = 1 << (n - 1);
                    CMatrix::from_fn(d, d, |a, b| o[(2 * a, 2 * b)])
                })
                .collect();
            readout.push(line);
        }
        ctx.readout = readout;
        Ok(ctx)
    }

    fn common(exp: &Experiment, protocol: Protocol, probes: Vec<ProbeSpec>) -> Result<Self> {
        exp.validate()?;
        let frags = system_fragments(&exp.system, exp.cap)?;
        let free1 = LayerChannel::new(&frags, exp.order, exp.t1.step_fs, &exp.noise, false)?;
        let free2 = LayerChannel::new(&frags, exp.order, exp.t2.step_fs, &exp.noise, false)?;
        let phases = exp.scheme.phases();
        let mut pulses: [Vec<PulseChannel>; 4] = Default::default();
        for j in 0..4 {
            pulses[j] = phases[j]
                .iter()
                .map(|&phi| {
                    PulseChannel::new(
                        &frags,
                        &exp.system,
                        &exp.pulse.with_phase(phi),
                        &exp.noise,
                        exp.cap,
                    )
                })
                .collect::<Result<_>>()?;
        }
        Ok(Self {
            exp: exp.clone(),
            protocol,
            free1,
            free2,
            pulses,
            readout: Vec::new(),
            probes,
        })
    }

    pub fn experiment(&self) -> &Experiment {
        &self.exp
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol
    }

    pub fn probes(&self) -> &[ProbeSpec] {
        &self.probes
    }

    pub fn n_slots(&self) -> usize {
        match self.protocol {
            Protocol::Sqsp => self.exp.t3.samples,
            Protocol::Pqp => self.probes.len(),
        }
    }

    pub fn ledger_shape(&self) -> LedgerShape {
        LedgerShape {
            protocol: self.protocol,
            n_phase: self.exp.scheme.len(),
            n_t1: self.exp.t1.samples,
            n_t2: self.exp.t2.samples,
            n_slots: self.n_slots(),
        }
    }

    /// Every block in canonical order on the calling thread.
    pub fn run_serial(&self) -> Result<MeasurementLedger> {
        let mut ledger = MeasurementLedger::new(self.ledger_shape());
        for phase in 0..self.exp.scheme.len() {
            for t1 in 0..self.exp.t1.samples {
                ledger.insert_block(&self.block(phase, t1)?)?;
            }
        }
        Ok(ledger)
    }

    /// States right after pulse 3 for every `t₂` sample of one block.
    pub fn pre_detection(&self, phase: usize, t1: usize) -> Result<Vec<DensityMatrix>> {
        let mut out = Vec::with_capacity(self.exp.t2.samples);
        self.walk(phase, t1, |rho| {
            out.push(DensityMatrix::from_matrix(rho.clone(), false)?);
            Ok(())
        })?;
        Ok(out)
    }

    fn walk(
        &self,
        phase: usize,
        t1: usize,
        mut visit: impl FnMut(&CMatrix) -> Result<()>,
    ) -> Result<()> {
        self.exp.check_point(&GridPoint { phase, t1, t2: 0 })?;
        let d = self.exp.scheme.digits(phase);
        let n = self.exp.system.n_qub();
        let mut rho = DensityMatrix::ground(n).into_matrix();
        self.pulses[0][d[0]].apply(&mut rho);
        self.free1.apply_n(&mut rho, self.exp.t1.layers_at(t1));
        self.pulses[1][d[1]].apply(&mut rho);
        for j in 0..self.exp.t2.samples {
            if j > 0 {
                self.free2.apply_n(&mut rho, self.exp.t2.layers_per_sample);
            }
            let mut rho3 = rho.clone();
            self.pulses[2][d[2]].apply(&mut rho3);
            visit(&rho3)?;
        }
        Ok(())
    }

    /// Every measurement of one (phase, `t₁`) block.
    pub fn block(&self, phase: usize, t1: usize) -> Result<Block> {
        let n_obs = self.protocol.observables().len();
        let n_slots = self.n_slots();
        let mut values = Vec::with_capacity(self.exp.t2.samples * n_slots * n_obs);
        let readout: &[Vec<CMatrix>] = match self.protocol {
            Protocol::Sqsp => {
                core::slice::from_ref(&self.readout[self.exp.scheme.digits(phase)[3]])
            }
            Protocol::Pqp => &self.readout,
        };
        self.walk(phase, t1, |rho3| {
            match self.protocol {
                Protocol::Sqsp => {
                    values.extend(readout[0].iter().map(|o| trace_product(o, rho3).re));
                }
                Protocol::Pqp => {
                    for line in readout {
                        values.extend(line.iter().map(|o| trace_product(o, rho3).re));
                    }
                }
            }
            Ok(())
        })?;
        Ok(Block {
            phase,
            t1,
            n_t2: self.exp.t2.samples,
            n_slots,
            n_obs,
            values,
        })
    }
}
