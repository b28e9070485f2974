use alloc::format;
use alloc::vec::Vec;

use super::observables::FluorescenceSpec;
use super::phase_cycle::PhaseCycleScheme;
use crate::error::{invalid, Result};
use crate::evolve::{NoiseSpec, TrotterOrder, TrotterPlan};
use crate::model::presets;
use crate::model::spec::{ProbeSpec, PulseSpec, QubitCap, SystemSpec};

/// Uniform sampling of one time axis by repeated Trotter layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleAxis {
    pub samples: usize,
    pub step_fs: f64,
    /// Layers applied between consecutive samples.
    pub layers_per_sample: usize,
}

impl SampleAxis {
    pub fn new(samples: usize, step_fs: f64, layers_per_sample: usize) -> Result<Self> {
        let axis = Self {
            samples,
            step_fs,
            layers_per_sample,
        };
        axis.validate("axis")?;
        Ok(axis)
    }

    fn validate(&self, field: &'static str) -> Result<()> {
        if !(self.step_fs > 0.0 && self.step_fs.is_finite()) {
            return Err(invalid(field, "step must be positive and finite"));
        }
        if self.layers_per_sample == 0 {
            return Err(invalid(field, "at least one layer per sample"));
        }
        Ok(())
    }

    pub fn layers_at(&self, i: usize) -> usize {
        i * self.layers_per_sample
    }

    pub fn time_at(&self, i: usize) -> f64 {
        self.layers_at(i) as f64 * self.step_fs
    }

    /// Time between samples in fs.
    pub fn spacing_fs(&self) -> f64 {
        self.layers_per_sample as f64 * self.step_fs
    }

    pub fn plan(&self, order: TrotterOrder, i: usize) -> Result<TrotterPlan> {
        TrotterPlan::new(order, self.step_fs, self.layers_at(i))
    }
}

/// Fixed system-probe interaction window of the probe protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeWindow {
    pub step_fs: f64,
    pub layers: usize,
}

impl ProbeWindow {
    pub fn duration_fs(&self) -> f64 {
        self.step_fs * self.layers as f64
    }
}

/// Everything that defines one simulated 2DES experiment, shared read-only
/// by all grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub system: SystemSpec,
    /// Pulse template; each of the four pulses gets its phase from the scheme.
    pub pulse: PulseSpec,
    pub noise: NoiseSpec,
    pub order: TrotterOrder,
    pub fluorescence: FluorescenceSpec,
    pub cap: QubitCap,
    pub scheme: PhaseCycleScheme,
    pub t1: SampleAxis,
    pub t2: SampleAxis,
    /// Detection axis of the standard protocol.
    pub t3: SampleAxis,
    pub probe_window: ProbeWindow,
}

/// Grid coordinates shared by both protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub phase: usize,
    pub t1: usize,
    pub t2: usize,
}

impl Experiment {
    pub fn validate(&self) -> Result<()> {
        self.pulse.validate(&self.system)?;
        self.cap.check(self.system.n_qub() + 1)?;
        self.t1.validate("t1")?;
        self.t2.validate("t2")?;
        self.t3.validate("t3")?;
        if !(self.probe_window.step_fs > 0.0 && self.probe_window.step_fs.is_finite()) {
            return Err(invalid("probe_t3", "step must be positive and finite"));
        }
        Ok(())
    }

    pub fn check_point(&self, p: &GridPoint) -> Result<()> {
        let bad = |what: &'static str, i: usize, n: usize| {
            invalid(what, format!("index {i} outside 0..{n}"))
        };
        if p.phase >= self.scheme.len() {
            return Err(bad("phase", p.phase, self.scheme.len()));
        }
        if p.t1 >= self.t1.samples {
            return Err(bad("t1", p.t1, self.t1.samples));
        }
        if p.t2 >= self.t2.samples {
            return Err(bad("t2", p.t2, self.t2.samples));
        }
        Ok(())
    }

    /// Pulse `j` (0-based) of phase combination `k`.
    pub fn pulse_for(&self, j: usize, k: usize) -> PulseSpec {
        self.pulse.with_phase(self.scheme.combination(k)[j])
    }

    pub fn probe_plan(&self) -> Result<TrotterPlan> {
        TrotterPlan::new(
            self.order,
            self.probe_window.step_fs,
            self.probe_window.layers,
        )
    }

    /// Two-molecule study with delta pulses, dephasing and the full grids:
    /// 400 × 1.25 fs along t₁ and t₃, 20 waiting times 30 fs apart, and a
    /// 725 fs probe window.
    pub fn dimer() -> Self {
        Self {
            system: presets::dimer(),
            pulse: presets::dimer_delta_pulse(0.0),
            noise: NoiseSpec::new(presets::GAMMA_Z).expect("valid rate"),
            order: TrotterOrder::Second,
            fluorescence: FluorescenceSpec::default(),
            cap: QubitCap::default(),
            scheme: PhaseCycleScheme::rephasing(),
            t1: SampleAxis {
                samples: 400,
                step_fs: 1.25,
                layers_per_sample: 1,
            },
            t2: SampleAxis {
                samples: 20,
                step_fs: 1.0,
                layers_per_sample: 30,
            },
            t3: SampleAxis {
                samples: 400,
                step_fs: 1.25,
                layers_per_sample: 1,
            },
            probe_window: ProbeWindow {
                step_fs: 1.25,
                layers: 580,
            },
        }
    }

    /// Same physics on a coarser sweep (200 t₁ samples, 10 waiting times).
    /// The probe window keeps its length so `J·t₃` is unchanged.
    pub fn dimer_reduced() -> Self {
        let mut e = Self::dimer();
        e.t1.samples = 200;
        e.t2.samples = 10;
        e.t3.samples = 200;
        e
    }
}

/// Resonant lines at the two one-exciton energies plus one line 500 cm⁻¹
/// below the upper one.
pub fn dimer_probe_lines() -> Vec<ProbeSpec> {
    let (e1, e2) = presets::dimer_one_exciton();
    [e1, e2, e1 - 500.0]
        .iter()
        .map(|&w| presets::dimer_probe(w))
        .collect()
}
