//! Dense Hamiltonians for the exciton network, the pulses, and the probe.
//!
//! All returned operators are in angular units (rad/fs).

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use super::pauli::{max_abs_diff, number_operator, pauli_string, Pauli};
use super::spec::{ProbeSpec, PulseProfile, PulseSpec, QubitCap, SystemSpec};
use super::units::wavenumber_to_angular;
use crate::error::{Error, Result};
use crate::CMatrix;

const HERMITIAN_TOL: f64 = 1e-12;

/// Dense Hermitian matrix on a register of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    n_qubits: usize,
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.ncols(),
            });
        }
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two(),
                actual: dim,
            });
        }
        let deviation = hermiticity_defect(&matrix);
        if deviation > HERMITIAN_TOL * (1.0 + max_entry(&matrix)) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    pub fn zeros(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self {
            n_qubits,
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Entrywise sum; both operands must act on the same register.
    pub fn sum<'a>(
        n_qubits: usize,
        parts: impl IntoIterator<Item = &'a HermitianOperator>,
    ) -> Self {
        let mut out = Self::zeros(n_qubits);
        for p in parts {
            out.matrix += &p.matrix;
        }
        out
    }

    /// `self ⊗ I` on one extra trailing qubit.
    pub fn extend_trailing(&self) -> Self {
        let dim = self.dim();
        let mut out = CMatrix::zeros(2 * dim, 2 * dim);
        for r in 0..dim {
            for c in 0..dim {
                let v = self.matrix[(r, c)];
                out[(2 * r, 2 * c)] = v;
                out[(2 * r + 1, 2 * c + 1)] = v;
            }
        }
        Self {
            n_qubits: self.n_qubits + 1,
            matrix: out,
        }
    }
}

pub(crate) fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Which Pauli term a Trotter fragment carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FragmentKind {
    /// `-(E/2) Z_q`; the probe gap term is an on-site term on the probe qubit.
    OnSite(usize),
    /// `(J/2)(X_a X_b + Y_a Y_b)` between system sites.
    Coupler(usize, usize),
    /// `(J/2)(X_pr X_m + Y_pr Y_m)` between probe and site `m`.
    ProbeCoupler(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    pub kind: FragmentKind,
    pub op: HermitianOperator,
}

fn on_site(n: usize, q: usize, energy_cm: f64) -> Fragment {
    let m = pauli_string(n, &[(q, Pauli::Z)], -0.5 * wavenumber_to_angular(energy_cm));
    Fragment {
        kind: FragmentKind::OnSite(q),
        op: HermitianOperator {
            n_qubits: n,
            matrix: m,
        },
    }
}

fn exchange(n: usize, a: usize, b: usize, j_cm: f64, kind: FragmentKind) -> Fragment {
    let half = 0.5 * wavenumber_to_angular(j_cm);
    let xx = pauli_string(n, &[(a, Pauli::X), (b, Pauli::X)], half);
    let yy = pauli_string(n, &[(a, Pauli::Y), (b, Pauli::Y)], half);
    Fragment {
        kind,
        op: HermitianOperator {
            n_qubits: n,
            matrix: xx + yy,
        },
    }
}

/// System-Hamiltonian fragments on an `n_total`-qubit register, on-site
/// terms first and then couplers in lexicographic order.
fn system_fragments_on(spec: &SystemSpec, n_total: usize) -> Vec<Fragment> {
    let mut out: Vec<Fragment> = spec
        .site_energies()
        .iter()
        .enumerate()
        .map(|(m, &e)| on_site(n_total, m, e))
        .collect();
    for c in spec.couplings() {
        out.push(exchange(
            n_total,
            c.a,
            c.b,
            c.j_cm,
            FragmentKind::Coupler(c.a, c.b),
        ));
    }
    out
}

/// Trotter fragments of the system Hamiltonian.
pub fn system_fragments(spec: &SystemSpec, cap: QubitCap) -> Result<Vec<Fragment>> {
    cap.check(spec.n_qub())?;
    Ok(system_fragments_on(spec, spec.n_qub()))
}

/// Trotter fragments of `H_S + H_PR` with the probe as the last qubit.
///
/// On-site terms come first (system sites, then the probe gap), followed by
/// system couplers and finally the probe couplers.
pub fn system_probe_fragments(
    spec: &SystemSpec,
    probe: &ProbeSpec,
    cap: QubitCap,
) -> Result<Vec<Fragment>> {
    probe.check_against(spec)?;
    let n = spec.n_qub() + 1;
    cap.check(n)?;
    let pr = n - 1;
    let mut out: Vec<Fragment> = spec
        .site_energies()
        .iter()
        .enumerate()
        .map(|(m, &e)| on_site(n, m, e))
        .collect();
    out.push(on_site(n, pr, probe.omega_pr));
    for c in spec.couplings() {
        out.push(exchange(
            n,
            c.a,
            c.b,
            c.j_cm,
            FragmentKind::Coupler(c.a, c.b),
        ));
    }
    for (m, &j) in probe.probe_couplings.iter().enumerate() {
        out.push(exchange(n, pr, m, j, FragmentKind::ProbeCoupler(m)));
    }
    Ok(out)
}

/// `H_S = -Σ_m (E_m/2) Z_m + Σ_{m<n} (J_mn/2)(X_m X_n + Y_m Y_n)`.
pub fn build_system_hamiltonian(spec: &SystemSpec, cap: QubitCap) -> Result<HermitianOperator> {
    let frags = system_fragments(spec, cap)?;
    Ok(HermitianOperator::sum(
        spec.n_qub(),
        frags.iter().map(|f| &f.op),
    ))
}

/// `H_PR = -(ω_pr/2) Z_pr + Σ_m (J_m/2)(X_pr X_m + Y_pr Y_m)` on `n_qub + 1`
/// qubits (system operators act as identity).
pub fn build_probe_hamiltonian(
    spec: &SystemSpec,
    probe: &ProbeSpec,
    cap: QubitCap,
) -> Result<HermitianOperator> {
    probe.check_against(spec)?;
    let n = spec.n_qub() + 1;
    cap.check(n)?;
    let pr = n - 1;
    let mut parts = alloc::vec![on_site(n, pr, probe.omega_pr)];
    for (m, &j) in probe.probe_couplings.iter().enumerate() {
        parts.push(exchange(n, pr, m, j, FragmentKind::ProbeCoupler(m)));
    }
    Ok(HermitianOperator::sum(n, parts.iter().map(|f| &f.op)))
}

/// `H_SP = H_S ⊗ I_pr + H_PR`.
pub fn build_system_probe_hamiltonian(
    spec: &SystemSpec,
    probe: &ProbeSpec,
    cap: QubitCap,
) -> Result<HermitianOperator> {
    let frags = system_probe_fragments(spec, probe, cap)?;
    Ok(HermitianOperator::sum(
        spec.n_qub() + 1,
        frags.iter().map(|f| &f.op),
    ))
}

/// Per-site pulse coefficients `α_m(t, φ)` in cm⁻¹.
///
/// Gaussian pulses carry the lab-frame carrier `cos(ω_p t - φ)`; a delta kick
/// is evaluated at `t = 0`, leaving `cos(φ)`.
pub fn pulse_coefficients(spec: &SystemSpec, pulse: &PulseSpec, t: f64) -> Result<Vec<f64>> {
    pulse.validate(spec)?;
    if !(t >= 0.0 && t <= pulse.duration_fs) {
        return Err(Error::OutsidePulseWindow {
            t,
            duration: pulse.duration_fs,
        });
    }
    let carrier = match pulse.profile {
        PulseProfile::Delta { .. } => pulse.phase.cos(),
        PulseProfile::Gaussian { .. } => {
            (wavenumber_to_angular(pulse.carrier_cm) * t - pulse.phase).cos()
        }
    };
    let env = pulse.envelope(t);
    Ok(pulse
        .amplitudes
        .iter()
        .zip(spec.dipole_scales())
        .map(|(a, mu)| mu * a * env * carrier)
        .collect())
}

/// `H_I,pc(t, φ) = Σ_m α_m(t, φ) X_m` on the system register.
///
/// For a delta profile this is the kick generator, applied for the pulse's
/// effective area.
pub fn build_pulse_hamiltonian(
    spec: &SystemSpec,
    pulse: &PulseSpec,
    t: f64,
    cap: QubitCap,
) -> Result<HermitianOperator> {
    let n = spec.n_qub();
    cap.check(n)?;
    let coeffs = pulse_coefficients(spec, pulse, t)?;
    let mut out = HermitianOperator::zeros(n);
    for (m, &a) in coeffs.iter().enumerate() {
        if a != 0.0 {
            out.matrix += pauli_string(n, &[(m, Pauli::X)], wavenumber_to_angular(a));
        }
    }
    Ok(out)
}

/// Operator norm proxy `max |[A, B]_ij|`.
pub fn commutator_defect(a: &CMatrix, b: &CMatrix) -> f64 {
    let c = a * b - b * a;
    c.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Maximum entry of `[H, N]` with `N` the total excitation number.
pub fn excitation_number_defect(h: &HermitianOperator) -> f64 {
    commutator_defect(h.matrix(), &number_operator(h.n_qubits()))
}
