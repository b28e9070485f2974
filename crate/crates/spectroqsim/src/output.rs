//! CSV and TOML artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use spectroqsim_core::resources::{CostReport, ResourcePlan};
use spectroqsim_core::spectra::{DetectionAxis, FourierSign, PeakTrace, ShotNoiseSpec, Spectrum2D};

use crate::analysis::CompareReport;
use crate::config::{ResourcesConfig, RunConfig};
use crate::error::{io_err, Result};

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    Ok(csv::Writer::from_path(path)?)
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// One row per cell, `ω₁`-major.
pub fn write_spectrum_csv(path: &Path, spec: &Spectrum2D) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["omega1_cm", "t2_fs", "omega3_cm", "re", "im", "abs"])?;
    for (w1, t2, w3, v) in spec.cells() {
        w.serialize((w1, t2, w3, v.re, v.im, v.norm()))?;
    }
    finish(w, path)
}

/// Long format: one row per peak and waiting time.
pub fn write_peaks_csv(path: &Path, traces: &[PeakTrace], t2_fs: &[f64]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["omega1_cm", "omega3_cm", "t2_fs", "abs"])?;
    for tr in traces {
        for (t2, v) in t2_fs.iter().zip(&tr.values) {
            w.serialize((tr.omega1_cm, tr.omega3_cm, t2, v))?;
        }
    }
    finish(w, path)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumMetadata {
    pub protocol: String,
    pub config_hash: String,
    pub detection: &'static str,
    pub omega1_sign: &'static str,
    pub omega3_sign: &'static str,
    pub max_abs: f64,
    pub normalized: bool,
    pub shot_noise_eps: f64,
    pub noise_seed: u64,
    pub omega1_bins: usize,
    pub t2_samples: usize,
    pub omega3_bins: usize,
}

fn sign_name(s: FourierSign) -> &'static str {
    match s {
        FourierSign::Negative => "negative",
        FourierSign::Positive => "positive",
    }
}

impl SpectrumMetadata {
    /// `spec` is the spectrum as written; `raw_max` its largest `|S|` before normalization.
    pub fn new(
        cfg: &RunConfig,
        spec: &Spectrum2D,
        raw_max: f64,
        noise: Option<ShotNoiseSpec>,
    ) -> Result<Self> {
        let (n1, n2, n3) = spec.shape();
        Ok(Self {
            protocol: cfg.protocol()?.as_str().to_string(),
            config_hash: cfg.hash(),
            detection: match spec.meta.detection {
                DetectionAxis::Fourier => "fourier",
                DetectionAxis::ProbeLines => "probe_lines",
            },
            omega1_sign: sign_name(spec.meta.options.omega1_sign),
            omega3_sign: sign_name(spec.meta.options.omega3_sign),
            max_abs: raw_max,
            normalized: spec.meta.normalized,
            shot_noise_eps: noise.map_or(0.0, |n| n.eps),
            noise_seed: noise.map_or(0, |n| n.seed),
            omega1_bins: n1,
            t2_samples: n2,
            omega3_bins: n3,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = toml::to_string(self).expect("metadata serializes");
        fs::write(path, text).map_err(io_err(path))
    }
}

pub fn write_compare_csv(path: &Path, report: &CompareReport) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["omega1_cm", "omega3_cm", "correlation"])?;
    for p in &report.peaks {
        w.serialize((p.omega1_cm, p.omega3_cm, p.correlation))?;
    }
    finish(w, path)
}

pub fn compare_summary(report: &CompareReport) -> String {
    let mut s = String::new();
    s.push_str("peak correlations (standard vs probe):\n");
    for p in &report.peaks {
        let _ = writeln!(
            s,
            "  ({:.2}, {:.2}) cm^-1  r = {:.4}",
            p.omega1_cm, p.omega3_cm, p.correlation
        );
    }
    s.push_str("probe line amplitudes:\n");
    for l in &report.lines {
        let tag = if l.resonant { "resonant" } else { "detuned" };
        let _ = writeln!(
            s,
            "  {:.2} cm^-1  {tag:<9} {:.6e}",
            l.omega3_cm, l.amplitude
        );
    }
    for r in &report.ratios {
        let _ = writeln!(
            s,
            "ratio {:.2} / {:.2} cm^-1 = {:.3}",
            r.resonant_cm, r.detuned_cm, r.ratio
        );
    }
    s
}

#[derive(Debug, Clone, Serialize)]
struct ResourceRow {
    delta_omega3_cm: f64,
    m_sqsp: f64,
    m_pqp: f64,
    q_sqsp: f64,
    q_pqp: f64,
    /// Query ratio `Q_SQSP / Q_PQP`.
    ratio: f64,
    d_sqsp: u64,
    d_pqp: u64,
}

/// Cost reports across the configured `Δω₃` range; a zero-width range is one point.
pub fn resource_sweep(r: &ResourcesConfig) -> Result<Vec<CostReport>> {
    let n = if r.dw3_min_cm == r.dw3_max_cm {
        1
    } else {
        r.dw3_points
    };
    spectroqsim_core::resources::linspace(r.dw3_min_cm, r.dw3_max_cm, n)
        .into_iter()
        .map(|dw| Ok(CostReport::new(ResourcePlan::new(r.inputs(dw)?)?)))
        .collect()
}

pub fn write_resources_csv(path: &Path, reports: &[CostReport]) -> Result<()> {
    let mut w = csv_writer(path)?;
    for c in reports {
        w.serialize(ResourceRow {
            delta_omega3_cm: c.delta_omega3_cm,
            m_sqsp: c.m_sqsp,
            m_pqp: c.m_pqp,
            q_sqsp: c.queries.sqsp,
            q_pqp: c.queries.pqp,
            ratio: c.queries.ratio,
            d_sqsp: c.d_sqsp,
            d_pqp: c.d_pqp,
        })?;
    }
    finish(w, path)
}

pub fn resources_summary(c: &CostReport) -> String {
    let p = &c.plan;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "delta_omega3 = {} cm^-1 ({} shots)",
        c.delta_omega3_cm, c.shot_mode
    );
    let _ = writeln!(
        s,
        "samples        N1 = {}  N2 = {}  N3 = {}",
        p.n1, p.n2, p.n3
    );
    let _ = writeln!(s, "probe depth    D3' = {}", p.d3_probe);
    let _ = writeln!(
        s,
        "measurements   SQSP = {:.6e}  PQP = {:.6e}  ratio = {:.2}",
        c.m_sqsp, c.m_pqp, c.m_ratio
    );
    let _ = writeln!(s, "max depth      SQSP = {}  PQP = {}", c.d_sqsp, c.d_pqp);
    let _ = writeln!(
        s,
        "queries        SQSP = {:.6e}  PQP = {:.6e}  ratio = {:.2}",
        c.queries.sqsp, c.queries.pqp, c.queries.ratio
    );
    s
}
