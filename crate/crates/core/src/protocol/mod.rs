//! Measurement pipelines, phase cycling, probe readout and its oracle.

pub mod bounds;
pub mod experiment;
pub mod observables;
pub mod perturbative;
pub mod phase_cycle;
pub mod pipeline;
pub mod sweep;

pub use bounds::{t3_bounds, T3Bounds};
pub use experiment::{dimer_probe_lines, Experiment, GridPoint, ProbeWindow, SampleAxis};
pub use observables::{fluorescence_expectation, FluorescenceSpec};
pub use perturbative::{
    compute_coherence_vector, effective_probe_couplings, perturbative_prediction, CoherenceVector,
};
pub use phase_cycle::{phase_cycle_combine, PhaseCycleScheme, NONREPHASING, REPHASING};
pub use pipeline::{prepare_pre_detection, probe_back_action, run_pqp_point, run_sqsp_point};
pub use sweep::{Block, Observable, Protocol, SweepContext};
