//! Fourier post-processing, shot noise and peak extraction.

pub mod compare;
pub mod dft;
pub mod noise;
pub mod spectrum;

pub use compare::{compare_peaks, line_amplitude, one_exciton_gaps, peak_grid, PeakComparison};
pub use dft::{
    dft_over_axis, dft_with_options, nearest_bin, DftOptions, FourierSign, TimeGrid, Window,
};
pub use noise::{add_shot_noise, ShotNoiseSpec};
pub use spectrum::{
    assemble_pqp_spectrum, assemble_sqsp_spectrum, extract_peak_trace, trace_correlation,
    AssembleOptions, DetectionAxis, PeakTrace, SpectralGrids, Spectrum2D, SpectrumMeta,
};
