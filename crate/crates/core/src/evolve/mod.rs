//! Density-matrix propagation: product formulas, dephasing, exact reference.

pub mod channel;
pub mod density;
pub mod exact;
pub mod propagate;
pub mod trotter;

pub use channel::{apply_dephasing_channel, DephasingMask, NoiseSpec};
pub use density::{trace_distance, trace_product, DensityMatrix};
pub use exact::{exact_evolve, operator_norm, unitary_exp};
pub use propagate::{evolve_free, evolve_pulse, evolve_system_probe, LayerChannel, PulseChannel};
pub use trotter::{trotter_layer, TrotterOrder, TrotterPlan};
