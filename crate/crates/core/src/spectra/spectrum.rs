//! Two-dimensional spectra assembled from measurement ledgers.

use alloc::vec;
use alloc::vec::Vec;

use super::dft::{frequency_axis, nearest_bin, Dft, DftOptions, FourierSign, TimeGrid};
use crate::error::{invalid, Error, Result};
use crate::ledger::{LedgerKey, MeasurementLedger};
use crate::protocol::experiment::Experiment;
use crate::protocol::phase_cycle::{phase_cycle_combine, PhaseCycleScheme};
use crate::protocol::sweep::{Observable, Protocol};
use crate::C64;

/// What the third axis holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectionAxis {
    /// Transform bins over `t₃`.
    Fourier,
    /// One entry per probe gap.
    ProbeLines,
}

/// Transform settings shared by both assembly routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AssembleOptions {
    pub omega1_sign: FourierSign,
    pub omega3_sign: FourierSign,
    pub dft: DftOptions,
}

impl Default for AssembleOptions {
    /// Rephasing quadrant: a `t₁` coherence `e^{+iωt₁}` and a `t₃` coherence
    /// `e^{−iωt₃}` both land at positive frequency.
    fn default() -> Self {
        Self {
            omega1_sign: FourierSign::Negative,
            omega3_sign: FourierSign::Positive,
            dft: DftOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMeta {
    pub detection: DetectionAxis,
    pub options: AssembleOptions,
    /// Largest `|value|` before normalization.
    pub max_abs: f64,
    pub normalized: bool,
}

/// Complex amplitudes on an `(ω₁, t₂, ω₃)` grid, stored `[ω₁][t₂][ω₃]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    pub omega1_cm: Vec<f64>,
    pub t2_fs: Vec<f64>,
    /// Transform bins, or probe gaps for [`DetectionAxis::ProbeLines`].
    pub omega3_cm: Vec<f64>,
    values: Vec<C64>,
    pub meta: SpectrumMeta,
}

impl Spectrum2D {
    pub fn new(
        omega1_cm: Vec<f64>,
        t2_fs: Vec<f64>,
        omega3_cm: Vec<f64>,
        values: Vec<C64>,
        detection: DetectionAxis,
        options: AssembleOptions,
    ) -> Result<Self> {
        let expected = omega1_cm.len() * t2_fs.len() * omega3_cm.len();
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: values.len(),
            });
        }
        let max_abs = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(Self {
            omega1_cm,
            t2_fs,
            omega3_cm,
            values,
            meta: SpectrumMeta {
                detection,
                options,
                max_abs,
                normalized: false,
            },
        })
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.omega1_cm.len(), self.t2_fs.len(), self.omega3_cm.len())
    }

    fn idx(&self, w1: usize, t2: usize, w3: usize) -> usize {
        (w1 * self.t2_fs.len() + t2) * self.omega3_cm.len() + w3
    }

    pub fn get(&self, w1: usize, t2: usize, w3: usize) -> C64 {
        self.values[self.idx(w1, t2, w3)]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Scales to `max |value| = 1`. Already-normalized and all-zero spectra
    /// are returned unchanged; the latter stay flagged as not normalized.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        let m = self.max_abs();
        if self.meta.normalized || m == 0.0 {
            return out;
        }
        out.values.iter_mut().for_each(|v| *v /= m);
        out.meta.normalized = true;
        out
    }

    /// Rows in `[ω₁][t₂][ω₃]` order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, C64)> + '_ {
        let (_, n2, n3) = self.shape();
        self.values.iter().enumerate().map(move |(i, &v)| {
            let w3 = i % n3;
            let t2 = (i / n3) % n2;
            let w1 = i / (n2 * n3);
            (self.omega1_cm[w1], self.t2_fs[t2], self.omega3_cm[w3], v)
        })
    }
}

/// Time axes behind a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrids {
    pub t1: TimeGrid,
    pub t2_fs: Vec<f64>,
    /// Used by the standard protocol only.
    pub t3: TimeGrid,
}

impl SpectralGrids {
    pub fn from_experiment(exp: &Experiment) -> Result<Self> {
        Ok(Self {
            t1: TimeGrid::new(exp.t1.samples, exp.t1.spacing_fs(), "t1")?,
            t2_fs: (0..exp.t2.samples).map(|i| exp.t2.time_at(i)).collect(),
            t3: TimeGrid::new(exp.t3.samples, exp.t3.spacing_fs(), "t3")?,
        })
    }
}

fn check_ledger(
    ledger: &MeasurementLedger,
    protocol: Protocol,
    scheme: &PhaseCycleScheme,
    grids: &SpectralGrids,
    n_slots: usize,
) -> Result<()> {
    let s = ledger.shape();
    if s.protocol != protocol {
        return Err(invalid(
            "ledger",
            alloc::format!("expected a {} ledger", protocol.as_str()),
        ));
    }
    if s.n_phase != scheme.len()
        || s.n_t1 != grids.t1.samples
        || s.n_t2 != grids.t2_fs.len()
        || s.n_slots != n_slots
    {
        return Err(invalid("ledger", "shape does not match the grids"));
    }
    ledger.require_complete(20)
}

/// Phase-cycled signal `S[t₁][t₂][slot]` of one observable.
fn combined(ledger: &MeasurementLedger, scheme: &PhaseCycleScheme, obs: usize) -> Result<Vec<C64>> {
    let s = *ledger.shape();
    let mut out = Vec::with_capacity(s.n_t1 * s.n_t2 * s.n_slots);
    let mut vals = vec![None; s.n_phase];
    for t1 in 0..s.n_t1 {
        for t2 in 0..s.n_t2 {
            for slot in 0..s.n_slots {
                for (phase, v) in vals.iter_mut().enumerate() {
                    *v = ledger
                        .get(&LedgerKey {
                            phase,
                            t1,
                            t2,
                            slot,
                            obs,
                        })
                        .map(|x| C64::new(x, 0.0));
                }
                out.push(phase_cycle_combine(&vals, scheme)?);
            }
        }
    }
    Ok(out)
}

/// Transform along `t₁` of `S[t₁][t₂][slot]`, giving `[ω₁][t₂][slot]`.
fn transform_t1(sig: &[C64], n_t2: usize, n_slots: usize, dft: &Dft) -> Vec<C64> {
    let inner = n_t2 * n_slots;
    let mut out = vec![C64::new(0.0, 0.0); dft.len() * inner];
    let mut col = vec![C64::new(0.0, 0.0); dft.len()];
    for j in 0..inner {
        dft.transform_strided(sig, j, inner, &mut col);
        for (k, v) in col.iter().enumerate() {
            out[k * inner + j] = *v;
        }
    }
    out
}

/// Fluorescence spectrum: phase cycling, then transforms over `t₁` and `t₃`.
pub fn assemble_sqsp_spectrum(
    ledger: &MeasurementLedger,
    scheme: &PhaseCycleScheme,
    grids: &SpectralGrids,
    opts: AssembleOptions,
) -> Result<Spectrum2D> {
    check_ledger(ledger, Protocol::Sqsp, scheme, grids, grids.t3.samples)?;
    let (n2, n3) = (grids.t2_fs.len(), grids.t3.samples);
    let sig = combined(ledger, scheme, 0)?;
    let d3 = Dft::new(n3, opts.omega3_sign, opts.dft)?;
    let m3 = d3.len();
    let mut over3 = vec![C64::new(0.0, 0.0); grids.t1.samples * n2 * m3];
    for row in 0..grids.t1.samples * n2 {
        d3.transform_strided(&sig, row * n3, 1, &mut over3[row * m3..(row + 1) * m3]);
    }
    let d1 = Dft::new(grids.t1.samples, opts.omega1_sign, opts.dft)?;
    let values = transform_t1(&over3, n2, m3, &d1);
    Spectrum2D::new(
        frequency_axis(&grids.t1, d1.len()),
        grids.t2_fs.clone(),
        frequency_axis(&grids.t3, m3),
        values,
        DetectionAxis::Fourier,
        opts,
    )
}

/// Probe spectrum: phase cycling, transform over `t₁`, then
/// `FT⟨Y_pr⟩ − i·FT⟨X_pr⟩` for each probe line.
pub fn assemble_pqp_spectrum(
    ledger: &MeasurementLedger,
    scheme: &PhaseCycleScheme,
    grids: &SpectralGrids,
    probe_gaps_cm: &[f64],
    opts: AssembleOptions,
) -> Result<Spectrum2D> {
    check_ledger(ledger, Protocol::Pqp, scheme, grids, probe_gaps_cm.len())?;
    let s = ledger.shape();
    let ix = s
        .obs_index(Observable::XPr)
        .ok_or(Error::MissingObservable("X_pr"))?;
    let iy = s
        .obs_index(Observable::YPr)
        .ok_or(Error::MissingObservable("Y_pr"))?;
    let n2 = grids.t2_fs.len();
    let nl = probe_gaps_cm.len();
    let d1 = Dft::new(grids.t1.samples, opts.omega1_sign, opts.dft)?;
    let fx = transform_t1(&combined(ledger, scheme, ix)?, n2, nl, &d1);
    let fy = transform_t1(&combined(ledger, scheme, iy)?, n2, nl, &d1);
    let i = C64::new(0.0, 1.0);
    let values = fy.iter().zip(&fx).map(|(y, x)| y - i * x).collect();
    Spectrum2D::new(
        frequency_axis(&grids.t1, d1.len()),
        grids.t2_fs.clone(),
        probe_gaps_cm.to_vec(),
        values,
        DetectionAxis::ProbeLines,
        opts,
    )
}

/// `|amplitude|` over `t₂` at the bins nearest `(ω₁, ω₃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakTrace {
    pub omega1_bin: usize,
    pub omega3_bin: usize,
    /// Centres of the chosen bins.
    pub omega1_cm: f64,
    pub omega3_cm: f64,
    pub values: Vec<f64>,
}

/// Probe lines further than this from a request are not matched.
pub const LINE_MATCH_TOL_CM: f64 = 1.0;

fn locate(axis: &[f64], nu: f64, half_width: f64) -> Result<usize> {
    let min = axis.iter().copied().fold(f64::INFINITY, f64::min);
    let max = axis.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = nearest_bin(axis, nu);
    if axis.is_empty() || (axis[k] - nu).abs() > half_width {
        return Err(Error::OutOfAxis {
            requested: nu,
            min,
            max,
        });
    }
    Ok(k)
}

pub fn extract_peak_trace(spec: &Spectrum2D, omega1_cm: f64, omega3_cm: f64) -> Result<PeakTrace> {
    let half = |axis: &[f64]| {
        if axis.len() > 1 {
            0.5 * (axis[1] - axis[0]).abs()
        } else {
            f64::INFINITY
        }
    };
    let w1 = locate(&spec.omega1_cm, omega1_cm, half(&spec.omega1_cm))?;
    let tol3 = match spec.meta.detection {
        DetectionAxis::Fourier => half(&spec.omega3_cm),
        DetectionAxis::ProbeLines => LINE_MATCH_TOL_CM,
    };
    let w3 = locate(&spec.omega3_cm, omega3_cm, tol3)?;
    Ok(PeakTrace {
        omega1_bin: w1,
        omega3_bin: w3,
        omega1_cm: spec.omega1_cm[w1],
        omega3_cm: spec.omega3_cm[w3],
        values: (0..spec.t2_fs.len())
            .map(|t2| spec.get(w1, t2, w3).norm())
            .collect(),
    })
}

/// Pearson correlation of two peak traces.
pub fn trace_correlation(a: &PeakTrace, b: &PeakTrace) -> f64 {
    crate::fit::pearson(&a.values, &b.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::LedgerShape;
    use core::f64::consts::PI;

    fn grids(n1: usize, n2: usize, n3: usize) -> SpectralGrids {
        SpectralGrids {
            t1: TimeGrid::new(n1, 1.25, "t1").unwrap(),
            t2_fs: (0..n2).map(|i| 30.0 * i as f64).collect(),
            t3: TimeGrid::new(n3, 1.25, "t3").unwrap(),
        }
    }

    fn filled(shape: LedgerShape, f: impl Fn(&LedgerKey) -> f64) -> MeasurementLedger {
        let mut l = MeasurementLedger::new(shape);
        for i in 0..shape.len() {
            let k = shape.key(i);
            l.insert(&k, f(&k)).unwrap();
        }
        l
    }

    #[test]
    fn zero_ledgers_give_zero_spectra() {
        let scheme = PhaseCycleScheme::rephasing();
        let g = grids(8, 2, 6);
        let sq = filled(
            LedgerShape {
                protocol: Protocol::Sqsp,
                n_phase: 27,
                n_t1: 8,
                n_t2: 2,
                n_slots: 6,
            },
            |_| 0.0,
        );
        let s = assemble_sqsp_spectrum(&sq, &scheme, &g, AssembleOptions::default()).unwrap();
        assert_eq!(s.shape(), (8, 2, 6));
        assert!(s.values().iter().all(|v| v.norm() == 0.0));
        let pq = filled(
            LedgerShape {
                protocol: Protocol::Pqp,
                n_phase: 27,
                n_t1: 8,
                n_t2: 2,
                n_slots: 2,
            },
            |_| 0.0,
        );
        let p = assemble_pqp_spectrum(
            &pq,
            &scheme,
            &g,
            &[12000.0, 11000.0],
            AssembleOptions::default(),
        )
        .unwrap();
        assert!(p.values().iter().all(|v| v.norm() == 0.0));
        let tr = extract_peak_trace(&p, 0.0, 12000.0).unwrap();
        assert_eq!(tr.values, [0.0, 0.0]);
        assert!(!p.normalized().meta.normalized);
    }

    #[test]
    fn incomplete_ledger_lists_keys() {
        let scheme = PhaseCycleScheme::rephasing();
        let l = MeasurementLedger::new(LedgerShape {
            protocol: Protocol::Sqsp,
            n_phase: 27,
            n_t1: 2,
            n_t2: 1,
            n_slots: 2,
        });
        match assemble_sqsp_spectrum(&l, &scheme, &grids(2, 1, 2), AssembleOptions::default()) {
            Err(Error::IncompleteLedger { missing }) => assert_eq!(missing.len(), 21),
            other => panic!("{other:?}"),
        }
        let wrong = MeasurementLedger::new(LedgerShape {
            protocol: Protocol::Pqp,
            n_phase: 27,
            n_t1: 2,
            n_t2: 1,
            n_slots: 1,
        });
        assert!(assemble_sqsp_spectrum(
            &wrong,
            &scheme,
            &grids(2, 1, 2),
            AssembleOptions::default()
        )
        .is_err());
    }

    /// A synthetic ledger carrying exactly the rephasing component
    /// `cos(ω₁t₁ − ω₃t₃ + (−φ₁ + φ₂ + φ₃ − φ₄))`.
    #[test]
    fn synthetic_rephasing_peak() {
        let scheme = PhaseCycleScheme::rephasing();
        let (n1, n3) = (32, 32);
        let g = grids(n1, 1, n3);
        let (k1, k3) = (5usize, 7usize);
        let w = |k: usize, n: usize| 2.0 * PI * k as f64 / n as f64;
        let l = filled(
            LedgerShape {
                protocol: Protocol::Sqsp,
                n_phase: 27,
                n_t1: n1,
                n_t2: 1,
                n_slots: n3,
            },
            |key| {
                let phi = scheme.combination(key.phase);
                let sig = -phi[0] + phi[1] + phi[2] - phi[3];
                (w(k1, n1) * key.t1 as f64 - w(k3, n3) * key.slot as f64 + sig).cos()
            },
        );
        let s = assemble_sqsp_spectrum(&l, &scheme, &g, AssembleOptions::default()).unwrap();
        // the selected component is e^{+i(ω₁t₁ − ω₃t₃)}/2, which the
        // default kernels send to positive bins on both axes
        assert!((s.get(k1, 0, k3).norm() - 0.5 * (n1 * n3) as f64).abs() < 1e-9);
        let total: f64 = s.values().iter().map(|v| v.norm_sqr()).sum();
        assert!((total - s.get(k1, 0, k3).norm_sqr()).abs() < 1e-6 * total);
        let n = s.normalized();
        assert!((n.max_abs() - 1.0).abs() < 1e-15 && n.meta.normalized);
        assert_eq!(n.normalized(), n);
        let tr = extract_peak_trace(&n, s.omega1_cm[k1] + 10.0, s.omega3_cm[k3] - 10.0).unwrap();
        assert_eq!((tr.omega1_bin, tr.omega3_bin), (k1, k3));
        assert!((tr.values[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pqp_combines_y_minus_i_x() {
        let scheme = PhaseCycleScheme::rephasing();
        let g = grids(16, 1, 1);
        let k1 = 3usize;
        let l = filled(
            LedgerShape {
                protocol: Protocol::Pqp,
                n_phase: 27,
                n_t1: 16,
                n_t2: 1,
                n_slots: 1,
            },
            |key| {
                let phi = scheme.combination(key.phase);
                let sig = -phi[0] + phi[1] + phi[2] - phi[3];
                let a = 2.0 * PI * (k1 * key.t1) as f64 / 16.0;
                // ⟨X⟩ + i⟨Y⟩ carries e^{+i(ω₁t₁ + sig)}
                if key.obs == 0 {
                    (sig + a).cos()
                } else {
                    (sig + a).sin()
                }
            },
        );
        let s =
            assemble_pqp_spectrum(&l, &scheme, &g, &[12000.0], AssembleOptions::default()).unwrap();
        // combined X + iY = e^{+iω₁t₁} lands on bin k₁; Y − iX = −i(X + iY)
        assert!(
            (s.get(k1, 0, 0) - C64::new(0.0, -16.0)).norm() < 1e-9,
            "{}",
            s.get(k1, 0, 0)
        );
        assert!(extract_peak_trace(&s, 0.0, 12_050.0).is_err());
        assert!(extract_peak_trace(&s, 1e6, 12_000.0).is_err());
    }
}
