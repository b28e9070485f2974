use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{invalid, Error, Result};

/// Default cap on register size (system plus probe).
pub const DEFAULT_QUBIT_CAP: usize = 12;

/// Upper limit on the number of qubits a dense operator may span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitCap(pub usize);

impl Default for QubitCap {
    fn default() -> Self {
        QubitCap(DEFAULT_QUBIT_CAP)
    }
}

impl QubitCap {
    pub fn check(self, n_qubits: usize) -> Result<()> {
        if n_qubits > self.0 {
            Err(Error::DimensionCap {
                requested: n_qubits,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }
}

/// Pairwise dipolar coupling between sites `a < b`, in cm⁻¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub a: usize,
    pub b: usize,
    pub j_cm: f64,
}

/// Exciton network of two-level molecules.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    site_energies: Vec<f64>,
    couplings: Vec<Coupling>,
    dipole_scales: Vec<f64>,
}

impl SystemSpec {
    /// Builds a validated network.
    ///
    /// `couplings` may list a pair in either orientation; listing both is
    /// allowed only when the two values agree. Self-couplings are rejected.
    /// An empty `dipole_scales` means unit dipoles on every site.
    pub fn new(
        site_energies: Vec<f64>,
        couplings: &[(usize, usize, f64)],
        dipole_scales: Vec<f64>,
    ) -> Result<Self> {
        let n = site_energies.len();
        if n == 0 {
            return Err(invalid("site_energies", "at least one site is required"));
        }
        if site_energies.iter().any(|e| !e.is_finite()) {
            return Err(invalid("site_energies", "values must be finite"));
        }
        let dipole_scales = if dipole_scales.is_empty() {
            alloc::vec![1.0; n]
        } else {
            dipole_scales
        };
        if dipole_scales.len() != n {
            return Err(invalid(
                "dipole_scales",
                format!("expected {n} entries, got {}", dipole_scales.len()),
            ));
        }
        if dipole_scales.iter().any(|d| !d.is_finite()) {
            return Err(invalid("dipole_scales", "values must be finite"));
        }

        let mut pairs: Vec<Coupling> = Vec::new();
        for &(m, k, j) in couplings {
            if m >= n || k >= n {
                return Err(invalid(
                    "couplings",
                    format!("site index ({m},{k}) out of range"),
                ));
            }
            if m == k {
                return Err(invalid(
                    "couplings",
                    format!("diagonal entry ({m},{m}) must be zero"),
                ));
            }
            if !j.is_finite() {
                return Err(invalid("couplings", "values must be finite"));
            }
            let (a, b) = if m < k { (m, k) } else { (k, m) };
            match pairs.iter().find(|c| c.a == a && c.b == b) {
                Some(existing) if existing.j_cm != j => {
                    return Err(invalid(
                        "couplings",
                        format!("asymmetric entry for ({a},{b}): {} vs {j}", existing.j_cm),
                    ))
                }
                Some(_) => {}
                None => pairs.push(Coupling { a, b, j_cm: j }),
            }
        }
        pairs.sort_by_key(|c| (c.a, c.b));
        Ok(Self {
            site_energies,
            couplings: pairs,
            dipole_scales,
        })
    }

    pub fn n_qub(&self) -> usize {
        self.site_energies.len()
    }

    pub fn site_energies(&self) -> &[f64] {
        &self.site_energies
    }

    /// Couplings with `a < b`, in lexicographic order.
    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn dipole_scales(&self) -> &[f64] {
        &self.dipole_scales
    }

    pub fn coupling(&self, m: usize, n: usize) -> f64 {
        let (a, b) = if m < n { (m, n) } else { (n, m) };
        self.couplings
            .iter()
            .find(|c| c.a == a && c.b == b)
            .map_or(0.0, |c| c.j_cm)
    }
}

/// Probe qubit: energy gap and per-site exchange couplings, in cm⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpec {
    pub omega_pr: f64,
    pub probe_couplings: Vec<f64>,
}

impl ProbeSpec {
    pub fn new(omega_pr: f64, probe_couplings: Vec<f64>) -> Result<Self> {
        let probe = Self {
            omega_pr,
            probe_couplings,
        };
        probe.validate()?;
        Ok(probe)
    }

    /// Same couplings, different gap.
    pub fn with_gap(&self, omega_pr: f64) -> Self {
        Self {
            omega_pr,
            probe_couplings: self.probe_couplings.clone(),
        }
    }

    /// Same gap, all couplings multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            omega_pr: self.omega_pr,
            probe_couplings: self.probe_couplings.iter().map(|j| j * factor).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_pr.is_finite() && self.omega_pr > 0.0) {
            return Err(invalid("omega_pr", "probe gap must be positive and finite"));
        }
        if self.probe_couplings.iter().any(|j| !j.is_finite()) {
            return Err(invalid("probe_couplings", "values must be finite"));
        }
        Ok(())
    }

    pub fn check_against(&self, spec: &SystemSpec) -> Result<()> {
        self.validate()?;
        if self.probe_couplings.len() != spec.n_qub() {
            return Err(invalid(
                "probe_couplings",
                format!(
                    "expected {} entries, got {}",
                    spec.n_qub(),
                    self.probe_couplings.len()
                ),
            ));
        }
        Ok(())
    }

    pub fn max_coupling(&self) -> f64 {
        self.probe_couplings.iter().fold(0.0, |m, j| m.max(j.abs()))
    }
}

/// Temporal profile of a pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseProfile {
    /// Instantaneous kick `exp(-i Σ α_m cos φ X_m · area_fs)`.
    Delta { area_fs: f64 },
    /// `exp{-2 ln2 [(t - t_d)/τ]²}`
    Gaussian { tau_fs: f64, delay_fs: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec {
    pub profile: PulseProfile,
    pub carrier_cm: f64,
    /// Per-site peak amplitudes `α_m(0)` in cm⁻¹ (sign included).
    pub amplitudes: Vec<f64>,
    pub phase: f64,
    pub duration_fs: f64,
    pub trotter_steps: usize,
}

/// Default effective duration of a delta kick.
pub const DELTA_UNIT_AREA_FS: f64 = 1.0;

impl PulseSpec {
    /// Delta kick with the unit effective area.
    pub fn delta(amplitudes: Vec<f64>, phase: f64) -> Self {
        Self::delta_with_area(amplitudes, phase, DELTA_UNIT_AREA_FS)
    }

    pub fn delta_with_area(amplitudes: Vec<f64>, phase: f64, area_fs: f64) -> Self {
        Self {
            profile: PulseProfile::Delta { area_fs },
            carrier_cm: 0.0,
            amplitudes,
            phase,
            duration_fs: 0.0,
            trotter_steps: 1,
        }
    }

    pub fn gaussian(
        amplitudes: Vec<f64>,
        carrier_cm: f64,
        tau_fs: f64,
        delay_fs: f64,
        duration_fs: f64,
        trotter_steps: usize,
    ) -> Self {
        Self {
            profile: PulseProfile::Gaussian { tau_fs, delay_fs },
            carrier_cm,
            amplitudes,
            phase: 0.0,
            duration_fs,
            trotter_steps,
        }
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        Self {
            phase,
            ..self.clone()
        }
    }

    pub fn step_fs(&self) -> f64 {
        match self.profile {
            PulseProfile::Delta { .. } => 0.0,
            PulseProfile::Gaussian { .. } => self.duration_fs / self.trotter_steps as f64,
        }
    }

    /// Envelope factor at time `t` inside the pulse.
    pub fn envelope(&self, t: f64) -> f64 {
        match self.profile {
            PulseProfile::Delta { .. } => 1.0,
            PulseProfile::Gaussian { tau_fs, delay_fs } => {
                let x = (t - delay_fs) / tau_fs;
                (-2.0 * core::f64::consts::LN_2 * x * x).exp()
            }
        }
    }

    pub fn validate(&self, spec: &SystemSpec) -> Result<()> {
        if self.amplitudes.len() != spec.n_qub() {
            return Err(invalid(
                "amplitudes",
                format!(
                    "expected {} entries, got {}",
                    spec.n_qub(),
                    self.amplitudes.len()
                ),
            ));
        }
        if self.amplitudes.iter().any(|a| !a.is_finite()) || !self.phase.is_finite() {
            return Err(invalid("amplitudes", "values must be finite"));
        }
        if !(self.duration_fs >= 0.0) || !self.duration_fs.is_finite() {
            return Err(invalid("duration", "pulse duration must be non-negative"));
        }
        match self.profile {
            PulseProfile::Delta { area_fs } => {
                if !(area_fs > 0.0) || !area_fs.is_finite() {
                    return Err(invalid("area", "kick area must be positive"));
                }
                if self.trotter_steps != 1 || self.duration_fs != 0.0 {
                    return Err(invalid(
                        "trotter_steps",
                        "a delta pulse has one step and zero duration",
                    ));
                }
            }
            PulseProfile::Gaussian { tau_fs, .. } => {
                if self.trotter_steps == 0 {
                    return Err(invalid(
                        "trotter_steps",
                        "gaussian pulse needs at least one step",
                    ));
                }
                if !(tau_fs > 0.0) {
                    return Err(invalid("tau", "gaussian width must be positive"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric_couplings() {
        let err = SystemSpec::new(
            alloc::vec![1.0, 2.0],
            &[(0, 1, 5.0), (1, 0, 6.0)],
            Vec::new(),
        );
        assert!(matches!(
            err,
            Err(Error::InvalidSpec {
                field: "couplings",
                ..
            })
        ));
        let ok = SystemSpec::new(
            alloc::vec![1.0, 2.0],
            &[(0, 1, 5.0), (1, 0, 5.0)],
            Vec::new(),
        )
        .unwrap();
        assert_eq!(ok.couplings().len(), 1);
        assert_eq!(ok.coupling(1, 0), 5.0);
    }

    #[test]
    fn rejects_diagonal_and_empty() {
        assert!(SystemSpec::new(alloc::vec![1.0], &[(0, 0, 1.0)], Vec::new()).is_err());
        assert!(SystemSpec::new(Vec::new(), &[], Vec::new()).is_err());
        assert!(SystemSpec::new(alloc::vec![f64::NAN], &[], Vec::new()).is_err());
    }

    #[test]
    fn gaussian_envelope_peaks_at_delay() {
        let p = PulseSpec::gaussian(alloc::vec![1.0], 12_422.0, 5.0, 6.93, 14.0, 42);
        assert_eq!(p.envelope(6.93), 1.0);
        assert!((p.step_fs() - 1.0 / 3.0).abs() < 1e-15);
        // FWHM parameter: amplitude at t_d ± τ/2 is 2^{-1/2}
        assert!((p.envelope(6.93 + 2.5) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn delta_invariants() {
        let spec = SystemSpec::new(alloc::vec![1.0], &[], Vec::new()).unwrap();
        let mut p = PulseSpec::delta(alloc::vec![-8e3], 0.0);
        assert!(p.validate(&spec).is_ok());
        p.trotter_steps = 3;
        assert!(p.validate(&spec).is_err());
    }

    #[test]
    fn cap() {
        assert!(QubitCap::default().check(12).is_ok());
        assert_eq!(
            QubitCap::default().check(13),
            Err(Error::DimensionCap {
                requested: 13,
                cap: 12
            })
        );
    }
}
