//! Domain types, units and Hamiltonian construction.

pub mod eigen;
pub mod hamiltonian;
pub mod pauli;
pub mod presets;
pub mod spec;
pub mod units;

pub use eigen::{eigendecompose, EigenStructure};
pub use hamiltonian::{
    build_probe_hamiltonian, build_pulse_hamiltonian, build_system_hamiltonian,
    build_system_probe_hamiltonian, system_fragments, system_probe_fragments, Fragment,
    FragmentKind, HermitianOperator,
};
pub use pauli::Pauli;
pub use spec::{Coupling, ProbeSpec, PulseProfile, PulseSpec, QubitCap, SystemSpec};
pub use units::{angular_to_wavenumber, wavenumber_to_angular};
