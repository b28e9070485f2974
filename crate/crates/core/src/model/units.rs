//! Unit conventions.
//!
//! Hamiltonian coefficients are specified as wavenumbers (cm⁻¹) and time is
//! measured in femtoseconds. Dynamics run in angular frequency,
//! `ω = 2π·c·ν̃`, so that `exp(-iHt)` takes its phase in radians.
//!
//! Dimensionless products such as `J·t₃` are reported in the ordinary
//! (non-angular) convention `c·ν̃·t`; see [`cycles`].

use core::f64::consts::PI;

/// Speed of light in cm/fs.
pub const SPEED_OF_LIGHT_CM_PER_FS: f64 = 2.997_924_58e-5;

/// Wavenumber (cm⁻¹) to angular frequency (rad/fs).
#[inline]
pub fn wavenumber_to_angular(nu: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT_CM_PER_FS * nu
}

/// Angular frequency (rad/fs) back to wavenumber (cm⁻¹).
#[inline]
pub fn angular_to_wavenumber(omega: f64) -> f64 {
    omega / (2.0 * PI * SPEED_OF_LIGHT_CM_PER_FS)
}

/// Number of cycles `c·ν̃·t` accumulated at wavenumber `nu` over `t_fs`.
#[inline]
pub fn cycles(nu: f64, t_fs: f64) -> f64 {
    SPEED_OF_LIGHT_CM_PER_FS * nu * t_fs
}

/// Period in fs of an oscillation at wavenumber `nu`.
#[inline]
pub fn period_fs(nu: f64) -> f64 {
    1.0 / (SPEED_OF_LIGHT_CM_PER_FS * nu)
}
