//! Spectra from ledgers and cross-protocol reports.

use log::warn;

use spectroqsim_core::ledger::MeasurementLedger;
use spectroqsim_core::model::eigen::eigendecompose;
use spectroqsim_core::model::hamiltonian::build_system_hamiltonian;
use spectroqsim_core::protocol::bounds::DEFAULT_RESONANCE_TOL_CM;
use spectroqsim_core::protocol::Protocol;
use spectroqsim_core::spectra::{
    add_shot_noise, assemble_pqp_spectrum, assemble_sqsp_spectrum, compare_peaks,
    extract_peak_trace, line_amplitude, one_exciton_gaps, peak_grid, AssembleOptions,
    PeakComparison, PeakTrace, ShotNoiseSpec, SpectralGrids, Spectrum2D,
};

use crate::config::RunConfig;
use crate::error::{config_err, Result};

/// One-exciton transition frequencies of the configured system, highest first.
pub fn exciton_gaps(cfg: &RunConfig) -> Result<Vec<f64>> {
    let h = build_system_hamiltonian(&cfg.system_spec()?, cfg.cap()?)?;
    Ok(one_exciton_gaps(&eigendecompose(&h)?))
}

/// Spectrum of a ledger, with optional shot noise added first.
pub fn spectrum(
    cfg: &RunConfig,
    ledger: &MeasurementLedger,
    noise: Option<ShotNoiseSpec>,
    opts: AssembleOptions,
) -> Result<Spectrum2D> {
    let noisy;
    let ledger = match noise {
        Some(n) if n.eps > 0.0 => {
            noisy = add_shot_noise(ledger, &n)?;
            &noisy
        }
        _ => ledger,
    };
    let exp = cfg.experiment()?;
    let grids = SpectralGrids::from_experiment(&exp)?;
    Ok(match cfg.protocol()? {
        Protocol::Sqsp => assemble_sqsp_spectrum(ledger, &exp.scheme, &grids, opts)?,
        Protocol::Pqp => {
            let gaps: Vec<f64> = cfg.probes()?.iter().map(|p| p.omega_pr).collect();
            assemble_pqp_spectrum(ledger, &exp.scheme, &grids, &gaps, opts)?
        }
    })
}

/// `t₂` traces at every `(ω₁, ω₃)` of interest: exciton pairs for the
/// standard protocol, exciton × probe line for the probe protocol.
pub fn peak_traces(cfg: &RunConfig, spec: &Spectrum2D) -> Result<Vec<PeakTrace>> {
    let gaps = exciton_gaps(cfg)?;
    let peaks: Vec<(f64, f64)> = match cfg.protocol()? {
        Protocol::Sqsp => peak_grid(&gaps),
        Protocol::Pqp => gaps
            .iter()
            .flat_map(|&w1| spec.omega3_cm.iter().map(move |&w3| (w1, w3)))
            .collect(),
    };
    let mut out = Vec::with_capacity(peaks.len());
    for (w1, w3) in peaks {
        match extract_peak_trace(spec, w1, w3) {
            Ok(t) => out.push(t),
            Err(e) => warn!("no trace at ({w1:.1}, {w3:.1}) cm⁻¹: {e}"),
        }
    }
    Ok(out)
}

/// Sections that must agree for two runs to be compared.
fn physics_differences(a: &RunConfig, b: &RunConfig) -> Vec<&'static str> {
    let mut d = Vec::new();
    let mut check = |name, same: bool| {
        if !same {
            d.push(name)
        }
    };
    check("seed", a.seed == b.seed);
    check("system", a.system == b.system);
    check("pulse", a.pulse == b.pulse);
    check("noise", a.noise == b.noise);
    check("simulation", a.simulation == b.simulation);
    check("phase_cycle", a.phase_cycle == b.phase_cycle);
    check("grids.t1", a.grids.t1 == b.grids.t1);
    check("grids.t2", a.grids.t2 == b.grids.t2);
    d
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineAmplitude {
    pub omega3_cm: f64,
    /// Within the resonance tolerance of a one-exciton gap.
    pub resonant: bool,
    pub amplitude: f64,
}

/// Resonant-to-detuned amplitude ratio for one pair of probe lines.
#[derive(Debug, Clone, PartialEq)]
pub struct DetunedRatio {
    pub resonant_cm: f64,
    pub detuned_cm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub gaps_cm: Vec<f64>,
    pub peaks: Vec<PeakComparison>,
    pub lines: Vec<LineAmplitude>,
    pub ratios: Vec<DetunedRatio>,
}

impl CompareReport {
    pub fn min_correlation(&self) -> f64 {
        self.peaks
            .iter()
            .map(|p| p.correlation)
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest ratio against the highest resonant line.
    pub fn headline_ratio(&self) -> Option<f64> {
        let top = self.lines.iter().find(|l| l.resonant)?.omega3_cm;
        self.ratios
            .iter()
            .filter(|r| r.resonant_cm == top)
            .map(|r| r.ratio)
            .reduce(f64::min)
    }
}

/// Peak-by-peak comparison of the standard spectrum with the probe spectrum.
///
/// Peaks are the exciton pairs whose detection frequency has a probe line.
/// Line amplitudes take the largest `|S|` over waiting times and over the
/// exciton `ω₁` positions.
pub fn compare(
    sqsp: &Spectrum2D,
    sqsp_cfg: &RunConfig,
    pqp: &Spectrum2D,
    pqp_cfg: &RunConfig,
) -> Result<CompareReport> {
    if sqsp_cfg.protocol()? != Protocol::Sqsp || pqp_cfg.protocol()? != Protocol::Pqp {
        return Err(config_err(
            "protocol",
            "compare takes a standard ledger first and a probe ledger second",
        ));
    }
    let diff = physics_differences(sqsp_cfg, pqp_cfg);
    if !diff.is_empty() {
        return Err(config_err(
            diff.join(", "),
            "the two runs were configured differently",
        ));
    }
    let gaps = exciton_gaps(pqp_cfg)?;
    let is_resonant = |w: f64| {
        gaps.iter()
            .any(|g| (g - w).abs() <= DEFAULT_RESONANCE_TOL_CM)
    };
    let lines = pqp
        .omega3_cm
        .iter()
        .map(|&w3| {
            Ok(LineAmplitude {
                omega3_cm: w3,
                resonant: is_resonant(w3),
                amplitude: line_amplitude(pqp, &gaps, w3)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let probed: Vec<f64> = gaps
        .iter()
        .copied()
        .filter(|&g| {
            lines
                .iter()
                .any(|l| (l.omega3_cm - g).abs() <= DEFAULT_RESONANCE_TOL_CM)
        })
        .collect();
    let peaks: Vec<(f64, f64)> = gaps
        .iter()
        .flat_map(|&w1| probed.iter().map(move |&w3| (w1, w3)))
        .collect();
    let peaks = compare_peaks(sqsp, pqp, &peaks)?;
    let mut ratios = Vec::new();
    for r in lines.iter().filter(|l| l.resonant) {
        for d in lines.iter().filter(|l| !l.resonant) {
            ratios.push(DetunedRatio {
                resonant_cm: r.omega3_cm,
                detuned_cm: d.omega3_cm,
                ratio: r.amplitude / d.amplitude,
            });
        }
    }
    Ok(CompareReport {
        gaps_cm: gaps,
        peaks,
        lines,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::load_bundled;

    #[test]
    fn dimer_gaps_from_config() {
        let g = exciton_gaps(&load_bundled("paper-2site").unwrap()).unwrap();
        assert_eq!(g.len(), 2);
        assert!((g[0] - 12141.42135623731).abs() < 1e-6);
        assert!((g[1] - 11858.57864376269).abs() < 1e-6);
    }

    #[test]
    fn mismatched_runs_are_refused() {
        let a = load_bundled("paper-2site-reduced").unwrap();
        let mut b = a.with_protocol(Protocol::Pqp);
        b.seed += 1;
        b.noise.gamma_z_cm = 5.0;
        assert_eq!(physics_differences(&a, &b), ["seed", "noise"]);
        assert!(physics_differences(&a, &a.with_protocol(Protocol::Pqp)).is_empty());
    }
}
