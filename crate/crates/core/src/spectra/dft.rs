//! Discrete Fourier transforms along one sampled time axis.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{invalid, Result};
use crate::model::units::SPEED_OF_LIGHT_CM_PER_FS;
use crate::C64;

/// Uniformly sampled time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub samples: usize,
    pub step_fs: f64,
    pub label: String,
}

impl TimeGrid {
    pub fn new(samples: usize, step_fs: f64, label: impl Into<String>) -> Result<Self> {
        if samples == 0 {
            return Err(invalid("time grid", "needs at least one sample"));
        }
        if !(step_fs > 0.0 && step_fs.is_finite()) {
            return Err(invalid("time grid", "step must be positive and finite"));
        }
        Ok(Self {
            samples,
            step_fs,
            label: label.into(),
        })
    }

    /// Bin spacing `1/(c·N·Δt)` in cm⁻¹.
    pub fn resolution_cm(&self) -> f64 {
        1.0 / (SPEED_OF_LIGHT_CM_PER_FS * self.samples as f64 * self.step_fs)
    }

    /// Nyquist wavenumber `1/(2c·Δt)`.
    pub fn max_frequency_cm(&self) -> f64 {
        1.0 / (2.0 * SPEED_OF_LIGHT_CM_PER_FS * self.step_fs)
    }

    pub fn time_at(&self, i: usize) -> f64 {
        i as f64 * self.step_fs
    }
}

/// Sign of the exponent in `Σₙ xₙ e^{±2πi kn/N}`.
///
/// `Negative` is the usual forward transform and places `e^{+iωt}` at `+ω`.
/// `Positive` mirrors the axis, which is how rephasing spectra are shown
/// along `ω₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FourierSign {
    #[default]
    Negative,
    Positive,
}

impl FourierSign {
    fn value(self) -> f64 {
        match self {
            FourierSign::Negative => -1.0,
            FourierSign::Positive => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Window {
    #[default]
    None,
    /// `sin²` taper across the record.
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DftOptions {
    pub window: Window,
    /// Transform length after zero padding; `None` keeps the record length.
    pub pad_to: Option<usize>,
}

/// Precomputed kernel for repeated transforms of one length.
#[derive(Debug, Clone)]
pub struct Dft {
    len: usize,
    twiddle: Vec<C64>,
    taper: Vec<f64>,
    sign: FourierSign,
}

impl Dft {
    pub fn new(samples: usize, sign: FourierSign, opts: DftOptions) -> Result<Self> {
        let len = opts.pad_to.unwrap_or(samples);
        if len < samples || len == 0 {
            return Err(invalid("pad_to", "transform length must cover the record"));
        }
        let s = sign.value();
        let twiddle = (0..len)
            .map(|m| C64::from_polar(1.0, s * 2.0 * PI * m as f64 / len as f64))
            .collect();
        let taper = match opts.window {
            Window::None => alloc::vec![1.0; samples],
            Window::Hann if samples == 1 => alloc::vec![1.0],
            Window::Hann => (0..samples)
                .map(|n| {
                    let x = (PI * n as f64 / (samples - 1) as f64).sin();
                    x * x
                })
                .collect(),
        };
        Ok(Self {
            len,
            twiddle,
            taper,
            sign,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sign(&self) -> FourierSign {
        self.sign
    }

    /// Transforms a record of `samples` points strided by `stride` in `x`.
    pub fn transform_strided(&self, x: &[C64], offset: usize, stride: usize, out: &mut [C64]) {
        let n_in = self.taper.len();
        for (k, o) in out.iter_mut().enumerate().take(self.len) {
            let mut acc = C64::new(0.0, 0.0);
            let mut m = 0usize;
            for n in 0..n_in {
                acc += x[offset + n * stride] * self.twiddle[m] * self.taper[n];
                m += k;
                if m >= self.len {
                    m -= self.len;
                }
            }
            *o = acc;
        }
    }

    pub fn transform(&self, x: &[C64]) -> Vec<C64> {
        let mut out = alloc::vec![C64::new(0.0, 0.0); self.len];
        self.transform_strided(x, 0, 1, &mut out);
        out
    }
}

/// Axis `ν̃ₖ = k/(c·M·Δt)` for a transform of length `M`.
pub fn frequency_axis(grid: &TimeGrid, len: usize) -> Vec<f64> {
    let d = 1.0 / (SPEED_OF_LIGHT_CM_PER_FS * len as f64 * grid.step_fs);
    (0..len).map(|k| k as f64 * d).collect()
}

/// Transform of `signal` sampled on `grid`, with its wavenumber axis.
pub fn dft_over_axis(
    signal: &[C64],
    grid: &TimeGrid,
    sign: FourierSign,
) -> Result<(Vec<C64>, Vec<f64>)> {
    dft_with_options(signal, grid, sign, DftOptions::default())
}

pub fn dft_with_options(
    signal: &[C64],
    grid: &TimeGrid,
    sign: FourierSign,
    opts: DftOptions,
) -> Result<(Vec<C64>, Vec<f64>)> {
    if signal.len() != grid.samples {
        return Err(crate::Error::DimensionMismatch {
            expected: grid.samples,
            actual: signal.len(),
        });
    }
    let dft = Dft::new(grid.samples, sign, opts)?;
    Ok((dft.transform(signal), frequency_axis(grid, dft.len())))
}

/// Index of the axis entry closest to `nu`.
pub fn nearest_bin(axis: &[f64], nu: f64) -> usize {
    let mut best = 0;
    for (i, &a) in axis.iter().enumerate() {
        if (a - nu).abs() < (axis[best] - nu).abs() {
            best = i;
        }
    }
    best
}
