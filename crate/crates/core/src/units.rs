//! Physical constants and unit conversions.
//!
//! Frequencies are carried in eV (ħ = 1), wavenumbers as ħc·k in eV and
//! separations in metres. Output quantities are SI.

/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR_J_S: f64 = 1.054_571_817e-34;
/// Reduced Planck constant, eV·s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;
/// Speed of light, m/s.
pub const C_M_S: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const KB_J_K: f64 = 1.380_649e-23;
/// Boltzmann constant, eV/K.
pub const KB_EV_K: f64 = 8.617_333_262e-5;
/// ħc in eV·m.
pub const HBARC_EV_M: f64 = 1.973_269_804e-7;
/// ħc in J·m.
pub const HBARC_J_M: f64 = HBAR_J_S * C_M_S;

/// Riemann ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;
/// Riemann ζ(5).
pub const ZETA5: f64 = 1.036_927_755_143_369_9;

/// Angular frequency (rad/s) to eV.
pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega * HBAR_EV_S
}

/// eV to angular frequency (rad/s).
pub fn ev_to_rad_per_s(energy: f64) -> f64 {
    energy / HBAR_EV_S
}

/// Rate in 1/s (e.g. a Gaussian-unit conductivity) to eV.
pub fn inv_s_to_ev(rate: f64) -> f64 {
    rate * HBAR_EV_S
}

/// Characteristic frequency ħc/(2a) in eV for separation `a` in metres.
///
/// Dimensionless Matsubara variables are ζ = ξ/ω_c and y = q/ω_c.
pub fn characteristic_frequency(a: f64) -> f64 {
    HBARC_EV_M / (2.0 * a)
}
