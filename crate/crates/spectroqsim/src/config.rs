//! Run configuration: TOML on disk, validated into core types.
//!
//! Every section except `probe`, `grids.t3` and `resources` falls back to the
//! two-molecule study when omitted. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use spectroqsim_core::evolve::{NoiseSpec, TrotterOrder};
use spectroqsim_core::model::presets;
use spectroqsim_core::model::spec::{
    ProbeSpec, PulseSpec, QubitCap, SystemSpec, DEFAULT_QUBIT_CAP,
};
use spectroqsim_core::protocol::{
    Experiment, FluorescenceSpec, PhaseCycleScheme, ProbeWindow, Protocol, SampleAxis,
};
use spectroqsim_core::resources::{DepthModel, ResourceInputs, ShotMode};
use spectroqsim_core::spectra::ShotNoiseSpec;

use crate::error::{config_err, io_err, Error, Result};

/// Overrides the qubit-count cap of every loaded configuration.
pub const DIM_CAP_ENV: &str = "SPECTROQSIM_DIM_CAP";

const BUNDLED: &[(&str, &str)] = &[
    ("paper-2site", include_str!("../configs/paper-2site.toml")),
    (
        "paper-2site-reduced",
        include_str!("../configs/paper-2site-reduced.toml"),
    ),
    (
        "fmo-appendixE",
        include_str!("../configs/fmo-appendixE.toml"),
    ),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolName {
    Sqsp,
    Pqp,
}

impl From<ProtocolName> for Protocol {
    fn from(p: ProtocolName) -> Self {
        match p {
            ProtocolName::Sqsp => Protocol::Sqsp,
            ProtocolName::Pqp => Protocol::Pqp,
        }
    }
}

impl From<Protocol> for ProtocolName {
    fn from(p: Protocol) -> Self {
        match p {
            Protocol::Sqsp => ProtocolName::Sqsp,
            Protocol::Pqp => ProtocolName::Pqp,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolName>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub pulse: PulseConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
    #[serde(default)]
    pub fluorescence: FluorescenceConfig,
    #[serde(default)]
    pub phase_cycle: PhaseCycleConfig,
    #[serde(default)]
    pub grids: GridsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeConfig>,
    #[serde(default)]
    pub shot_noise: ShotNoiseConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resources: Option<ResourcesConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    pub sites: [usize; 2],
    pub j_cm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemConfig {
    pub site_energies_cm: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dipole_scales: Option<Vec<f64>>,
    pub couplings: Vec<CouplingConfig>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            site_energies_cm: presets::DIMER_SITE_ENERGIES.to_vec(),
            dipole_scales: None,
            couplings: vec![CouplingConfig {
                sites: [0, 1],
                j_cm: presets::DIMER_COUPLING,
            }],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Delta,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseConfig {
    pub profile: ProfileName,
    pub amplitudes_cm: Vec<f64>,
    /// Effective duration of a delta kick.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier_cm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delay_fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trotter_steps: Option<usize>,
}

impl Default for PulseConfig {
    fn default() -> Self {
        Self {
            profile: ProfileName::Delta,
            amplitudes_cm: presets::DIMER_KICK.to_vec(),
            area_fs: None,
            carrier_cm: None,
            tau_fs: None,
            delay_fs: None,
            duration_fs: None,
            trotter_steps: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub gamma_z_cm: f64,
    pub probe_noiseless: bool,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            gamma_z_cm: presets::GAMMA_Z,
            probe_noiseless: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub trotter_order: usize,
    pub qubit_cap: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            trotter_order: 2,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluorescenceConfig {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Default for FluorescenceConfig {
    fn default() -> Self {
        let f = FluorescenceSpec::default();
        Self {
            gamma1: f.gamma1,
            gamma2: f.gamma2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhaseCycleConfig {
    pub p_vector: [u8; 4],
    /// Per-pulse phase lists in radians; the 3×3×3×1 grid when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phases: Option<[Vec<f64>; 4]>,
}

impl Default for PhaseCycleConfig {
    fn default() -> Self {
        Self {
            p_vector: spectroqsim_core::protocol::REPHASING,
            phases: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub samples: usize,
    pub step_fs: f64,
    pub layers_per_sample: usize,
}

impl AxisConfig {
    fn to_axis(self, field: &str) -> Result<SampleAxis> {
        SampleAxis::new(self.samples, self.step_fs, self.layers_per_sample)
            .map_err(|e| config_err(field, e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridsConfig {
    pub t1: AxisConfig,
    pub t2: AxisConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t3: Option<AxisConfig>,
}

impl Default for GridsConfig {
    fn default() -> Self {
        let e = Experiment::dimer();
        let ax = |a: SampleAxis| AxisConfig {
            samples: a.samples,
            step_fs: a.step_fs,
            layers_per_sample: a.layers_per_sample,
        };
        Self {
            t1: ax(e.t1),
            t2: ax(e.t2),
            t3: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaps_cm: Option<Vec<f64>>,
    /// `J_m^(pr)` per site; one tenth of the dimer coupling on every site when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings_cm: Option<Vec<f64>>,
    #[serde(default = "default_window_step")]
    pub window_step_fs: f64,
    #[serde(default = "default_window_layers")]
    pub window_layers: usize,
}

fn default_window_step() -> f64 {
    Experiment::dimer().probe_window.step_fs
}

fn default_window_layers() -> usize {
    Experiment::dimer().probe_window.layers
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShotNoiseConfig {
    pub eps: f64,
    pub seed: u64,
}

impl ShotNoiseConfig {
    pub fn spec(&self) -> Result<ShotNoiseSpec> {
        ShotNoiseSpec::new(self.eps, self.seed)
            .map_err(|e| config_err("shot_noise.eps", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShotModeName {
    Relative,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthModelName {
    Sampling,
    Trotter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResourcesConfig {
    pub n_qub: usize,
    pub delta_omega1_cm: f64,
    pub dt1_fs: f64,
    pub dt3_fs: f64,
    pub n2: u64,
    pub n_freq: u64,
    pub pulse_layers: u64,
    pub alpha_c: f64,
    pub alpha_pqp: f64,
    pub cycle_size: u64,
    pub shot_mode: ShotModeName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub depth_model: DepthModelName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_trot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trotter_orders: Option<[u32; 3]>,
    pub dw3_min_cm: f64,
    pub dw3_max_cm: f64,
    pub dw3_points: usize,
}

impl Default for ResourcesConfig {
    fn default() -> Self {
        let f = ResourceInputs::fmo(40.0);
        Self {
            n_qub: f.n_qub,
            delta_omega1_cm: f.delta_omega1_cm,
            dt1_fs: f.dt1_fs,
            dt3_fs: f.dt3_fs,
            n2: f.n2,
            n_freq: f.n_freq,
            pulse_layers: f.pulse_layers,
            alpha_c: f.alpha_c,
            alpha_pqp: f.alpha_pqp,
            cycle_size: f.cycle_size,
            shot_mode: ShotModeName::Relative,
            eps: None,
            depth_model: DepthModelName::Sampling,
            eps_trot: None,
            trotter_orders: None,
            dw3_min_cm: 10.0,
            dw3_max_cm: 60.0,
            dw3_points: 51,
        }
    }
}

impl ResourcesConfig {
    /// Core inputs at detection resolution `dw3`.
    pub fn inputs(&self, dw3: f64) -> Result<ResourceInputs> {
        let shots = match self.shot_mode {
            ShotModeName::Relative => ShotMode::Relative,
            ShotModeName::Absolute => ShotMode::Absolute {
                eps: self.eps.ok_or_else(|| {
                    config_err("resources.eps", "required for absolute shot mode")
                })?,
            },
        };
        let depth = match self.depth_model {
            DepthModelName::Sampling => DepthModel::Sampling,
            DepthModelName::Trotter => DepthModel::Trotter {
                eps_trot: self.eps_trot.ok_or_else(|| {
                    config_err("resources.eps_trot", "required for the trotter depth model")
                })?,
                orders: self.trotter_orders.unwrap_or([2, 2, 2]),
            },
        };
        Ok(ResourceInputs {
            n_qub: self.n_qub,
            delta_omega1_cm: self.delta_omega1_cm,
            delta_omega3_cm: dw3,
            dt1_fs: self.dt1_fs,
            dt3_fs: self.dt3_fs,
            n2: self.n2,
            n_freq: self.n_freq,
            pulse_layers: self.pulse_layers,
            alpha_c: self.alpha_c,
            alpha_pqp: self.alpha_pqp,
            cycle_size: self.cycle_size,
            shots,
            depth,
        })
    }

    fn validate(&self) -> Result<()> {
        if !(self.dw3_min_cm > 0.0 && self.dw3_min_cm <= self.dw3_max_cm) || self.dw3_points == 0 {
            return Err(config_err(
                "resources.dw3",
                "need 0 < dw3_min_cm <= dw3_max_cm and dw3_points >= 1",
            ));
        }
        let inputs = self.inputs(self.dw3_min_cm)?;
        spectroqsim_core::resources::ResourcePlan::new(inputs)
            .map_err(|e| config_err("resources", e.to_string()))?;
        Ok(())
    }
}

fn core_err(field: &str) -> impl FnOnce(spectroqsim_core::Error) -> Error + '_ {
    move |e| config_err(field, e.to_string())
}

impl RunConfig {
    pub fn protocol(&self) -> Result<Protocol> {
        self.protocol
            .map(Protocol::from)
            .ok_or_else(|| config_err("protocol", "set `protocol = \"sqsp\"` or `\"pqp\"`"))
    }

    /// Same configuration for the other protocol.
    pub fn with_protocol(&self, p: Protocol) -> Self {
        Self {
            protocol: Some(p.into()),
            ..self.clone()
        }
    }

    /// The qubit cap, overridden by `SPECTROQSIM_DIM_CAP` when set.
    pub fn cap(&self) -> Result<QubitCap> {
        match std::env::var(DIM_CAP_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .map(QubitCap)
                .map_err(|_| config_err(DIM_CAP_ENV, format!("`{v}` is not a qubit count"))),
            Err(_) => Ok(QubitCap(self.simulation.qubit_cap)),
        }
    }

    pub fn system_spec(&self) -> Result<SystemSpec> {
        let s = &self.system;
        let couplings: Vec<(usize, usize, f64)> = s
            .couplings
            .iter()
            .map(|c| (c.sites[0], c.sites[1], c.j_cm))
            .collect();
        SystemSpec::new(
            s.site_energies_cm.clone(),
            &couplings,
            s.dipole_scales.clone().unwrap_or_default(),
        )
        .map_err(core_err("system"))
    }

    pub fn pulse_spec(&self) -> Result<PulseSpec> {
        let p = &self.pulse;
        let gaussian_only = [
            ("pulse.carrier_cm", p.carrier_cm.is_some()),
            ("pulse.tau_fs", p.tau_fs.is_some()),
            ("pulse.delay_fs", p.delay_fs.is_some()),
            ("pulse.duration_fs", p.duration_fs.is_some()),
            ("pulse.trotter_steps", p.trotter_steps.is_some()),
        ];
        match p.profile {
            ProfileName::Delta => {
                if let Some((f, _)) = gaussian_only.iter().find(|(_, set)| *set) {
                    return Err(config_err(*f, "only applies to gaussian pulses"));
                }
                let area = p
                    .area_fs
                    .unwrap_or(spectroqsim_core::model::spec::DELTA_UNIT_AREA_FS);
                Ok(PulseSpec::delta_with_area(
                    p.amplitudes_cm.clone(),
                    0.0,
                    area,
                ))
            }
            ProfileName::Gaussian => {
                if p.area_fs.is_some() {
                    return Err(config_err("pulse.area_fs", "only applies to delta pulses"));
                }
                let need = |v: Option<f64>, f: &str| {
                    v.ok_or_else(|| config_err(f, "required for gaussian pulses"))
                };
                Ok(PulseSpec::gaussian(
                    p.amplitudes_cm.clone(),
                    need(p.carrier_cm, "pulse.carrier_cm")?,
                    need(p.tau_fs, "pulse.tau_fs")?,
                    need(p.delay_fs, "pulse.delay_fs")?,
                    need(p.duration_fs, "pulse.duration_fs")?,
                    p.trotter_steps.ok_or_else(|| {
                        config_err("pulse.trotter_steps", "required for gaussian pulses")
                    })?,
                ))
            }
        }
    }

    pub fn noise_spec(&self) -> Result<NoiseSpec> {
        let mut n = NoiseSpec::new(self.noise.gamma_z_cm).map_err(core_err("noise.gamma_z_cm"))?;
        n.probe_noiseless = self.noise.probe_noiseless;
        Ok(n)
    }

    pub fn scheme(&self) -> Result<PhaseCycleScheme> {
        let pc = &self.phase_cycle;
        match &pc.phases {
            Some(ph) => {
                PhaseCycleScheme::new(ph.clone(), pc.p_vector).map_err(core_err("phase_cycle"))
            }
            None => PhaseCycleScheme::rephasing()
                .with_p_vector(pc.p_vector)
                .map_err(core_err("phase_cycle.p_vector")),
        }
    }

    /// Probe lines of the probe protocol, in configured order.
    pub fn probes(&self) -> Result<Vec<ProbeSpec>> {
        let probe = self.probe.as_ref().ok_or_else(|| {
            config_err(
                "probe.gaps_cm",
                "the probe protocol needs a [probe] section with gaps_cm",
            )
        })?;
        let gaps = probe
            .gaps_cm
            .as_ref()
            .filter(|g| !g.is_empty())
            .ok_or_else(|| {
                config_err(
                    "probe.gaps_cm",
                    "the probe protocol needs at least one probe gap",
                )
            })?;
        let n = self.system.site_energies_cm.len();
        let couplings = probe
            .couplings_cm
            .clone()
            .unwrap_or_else(|| vec![presets::DIMER_PROBE_COUPLING; n]);
        gaps.iter()
            .map(|&g| ProbeSpec::new(g, couplings.clone()).map_err(core_err("probe")))
            .collect()
    }

    /// Core experiment description. The standard protocol needs `grids.t3`;
    /// without it a one-sample placeholder is used.
    pub fn experiment(&self) -> Result<Experiment> {
        let order = TrotterOrder::from_k(self.simulation.trotter_order)
            .map_err(core_err("simulation.trotter_order"))?;
        let fluorescence =
            FluorescenceSpec::new(self.fluorescence.gamma1, self.fluorescence.gamma2)
                .map_err(core_err("fluorescence"))?;
        let t3 = match self.grids.t3 {
            Some(t3) => t3.to_axis("grids.t3")?,
            None => SampleAxis::new(1, self.grids.t1.step_fs, 1).map_err(core_err("grids.t1"))?,
        };
        let window = match &self.probe {
            Some(p) => ProbeWindow {
                step_fs: p.window_step_fs,
                layers: p.window_layers,
            },
            None => Experiment::dimer().probe_window,
        };
        let exp = Experiment {
            system: self.system_spec()?,
            pulse: self.pulse_spec()?,
            noise: self.noise_spec()?,
            order,
            fluorescence,
            cap: self.cap()?,
            scheme: self.scheme()?,
            t1: self.grids.t1.to_axis("grids.t1")?,
            t2: self.grids.t2.to_axis("grids.t2")?,
            t3,
            probe_window: window,
        };
        exp.validate().map_err(core_err("experiment"))?;
        Ok(exp)
    }

    /// Checks referential completeness and every section that is present.
    pub fn validate(&self) -> Result<()> {
        if let Some(r) = &self.resources {
            r.validate()?;
        }
        self.shot_noise.spec()?;
        let Some(p) = self.protocol else {
            if self.resources.is_none() {
                return Err(config_err(
                    "protocol",
                    "a config needs a protocol, a [resources] section, or both",
                ));
            }
            return Ok(());
        };
        match p {
            ProtocolName::Sqsp => {
                if self.grids.t3.is_none() {
                    return Err(config_err(
                        "grids.t3",
                        "the standard protocol needs a t3 grid",
                    ));
                }
            }
            ProtocolName::Pqp => {
                let exp_system = self.system_spec()?;
                for probe in self.probes()? {
                    probe
                        .check_against(&exp_system)
                        .map_err(core_err("probe.couplings_cm"))?;
                }
                let w = self.probe.as_ref().expect("checked by probes()");
                if !(w.window_step_fs > 0.0) || w.window_layers == 0 {
                    return Err(config_err(
                        "probe.window",
                        "the probe window needs a positive step and layer count",
                    ));
                }
            }
        }
        self.experiment()?;
        Ok(())
    }

    /// SHA-256 over everything that determines ledger values.
    ///
    /// Output location, shot noise and the cost scenario only affect
    /// post-processing, so they are left out.
    pub fn hash(&self) -> String {
        let pinned = Self {
            output: OutputConfig::default(),
            shot_noise: ShotNoiseConfig::default(),
            resources: None,
            ..self.clone()
        };
        let text = toml::to_string(&pinned).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Parses and validates a configuration; `origin` labels error messages.
pub fn parse_config(text: &str, origin: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_config(&text, &path.display().to_string())
}

/// Text of a bundled configuration, by name with or without extension.
pub fn bundled(name: &str) -> Option<&'static str> {
    let stem = name.trim_end_matches(".toml").trim_end_matches(".cfg");
    BUNDLED.iter().find(|(n, _)| *n == stem).map(|(_, t)| *t)
}

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

pub fn load_bundled(name: &str) -> Result<RunConfig> {
    let text = bundled(name)
        .ok_or_else(|| config_err("config", format!("no bundled config named `{name}`")))?;
    parse_config(text, name)
}

/// A file path if it exists, otherwise a bundled name.
pub fn resolve_config(arg: &str) -> Result<RunConfig> {
    let path = Path::new(arg);
    if path.exists() {
        load_config(path)
    } else if bundled(arg).is_some() {
        load_bundled(arg)
    } else {
        Err(Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::from(std::io::ErrorKind::NotFound),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_configs_parse() {
        for name in bundled_names() {
            let cfg = load_bundled(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            let back = parse_config(&cfg.to_toml(), name).unwrap();
            assert_eq!(back, cfg);
            assert_eq!(back.hash(), cfg.hash());
        }
        assert!(bundled("paper-2site.cfg").is_some());
    }

    #[test]
    fn bundled_dimer_matches_presets() {
        let cfg = load_bundled("paper-2site").unwrap();
        let exp = cfg.experiment().unwrap();
        let want = Experiment::dimer();
        assert_eq!(exp.system, want.system);
        assert_eq!(exp.pulse, want.pulse);
        assert_eq!(exp.noise, want.noise);
        assert_eq!((exp.t1, exp.t2, exp.t3), (want.t1, want.t2, want.t3));
        assert_eq!(exp.probe_window, want.probe_window);
        assert_eq!(exp.scheme, want.scheme);
        let gaps: Vec<f64> = cfg.probes().unwrap().iter().map(|p| p.omega_pr).collect();
        let lines: Vec<f64> = spectroqsim_core::protocol::dimer_probe_lines()
            .iter()
            .map(|p| p.omega_pr)
            .collect();
        for (a, b) in gaps.iter().zip(&lines) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn pqp_needs_gaps() {
        let err = parse_config("protocol = \"pqp\"\n", "inline").unwrap_err();
        assert!(
            matches!(&err, Error::Config { field, .. } if field == "probe.gaps_cm"),
            "{err}"
        );
        let err = parse_config(
            "protocol = \"pqp\"\n[probe]\nwindow_layers = 10\n",
            "inline",
        )
        .unwrap_err();
        assert!(
            matches!(&err, Error::Config { field, .. } if field == "probe.gaps_cm"),
            "{err}"
        );
        let err = parse_config("protocol = \"sqsp\"\n", "inline").unwrap_err();
        assert!(
            matches!(&err, Error::Config { field, .. } if field == "grids.t3"),
            "{err}"
        );
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err =
            parse_config("protocol = \"sqsp\"\n[noise]\ngamma = 3.0\n", "inline").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(msg.contains("line 3") && msg.contains("gamma"), "{msg}");
    }

    #[test]
    fn pulse_fields_are_profile_specific() {
        let base =
            "protocol = \"sqsp\"\n[grids.t3]\nsamples = 4\nstep_fs = 1.25\nlayers_per_sample = 1\n";
        let err = parse_config(
            &format!(
                "{base}[pulse]\nprofile = \"delta\"\namplitudes_cm = [-1.0, -1.0]\ntau_fs = 5.0\n"
            ),
            "x",
        )
        .unwrap_err();
        assert!(err.to_string().contains("pulse.tau_fs"), "{err}");
        let err = parse_config(
            &format!("{base}[pulse]\nprofile = \"gaussian\"\namplitudes_cm = [-1.0, -1.0]\n"),
            "x",
        )
        .unwrap_err();
        assert!(err.to_string().contains("pulse.carrier_cm"), "{err}");
        let ok = parse_config(
            &format!(
                "{base}[pulse]\nprofile = \"delta\"\namplitudes_cm = [-1.0, -1.0]\narea_fs = 0.5\n"
            ),
            "x",
        )
        .unwrap();
        assert!(
            matches!(ok.pulse_spec().unwrap().profile, spectroqsim_core::model::spec::PulseProfile::Delta { area_fs } if area_fs == 0.5)
        );
    }

    #[test]
    fn hash_ignores_post_processing_settings() {
        let a = load_bundled("paper-2site").unwrap();
        let mut b = a.clone();
        b.output.dir = PathBuf::from("elsewhere");
        b.shot_noise.eps = 1e-4;
        assert_eq!(a.hash(), b.hash());
        b.seed += 1;
        assert_ne!(a.hash(), b.hash());
        assert_ne!(a.hash(), a.with_protocol(Protocol::Pqp).hash());
        assert_eq!(a.hash().len(), 64);
    }
}
