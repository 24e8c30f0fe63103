//! Built-in named materials.

use super::{
    ConductivityLaw, ConductivityMode, DrudeParams, MaterialModel, NonlocalDrudeParams,
    OscillatorSet, Response, DEFAULT_NONLOCAL_VELOCITY,
};
use crate::error::{CasimirError, Result};
use crate::units::rad_per_s_to_ev;

pub const AU_OMEGA_P: f64 = 9.0;
pub const AU_GAMMA_ROOM: f64 = 0.035;
/// Residual relaxation of impure gold, 5.32e10 rad/s.
pub const AU_GAMMA_RESIDUAL_RAD_S: f64 = 5.32e10;
pub const NI_OMEGA_P: f64 = 4.89;
pub const NI_GAMMA_ROOM: f64 = 0.0436;
pub const NI_MU0: f64 = 110.0;

/// dc conductivity of fused silica at room temperature, 1/s (Gaussian).
pub const SILICA_SIGMA0: f64 = 29.7;
/// Band gap used for the activated conductivity law, eV.
pub const SILICA_GAP: f64 = 9.0;

/// Two-oscillator silica surrogate with ε(0) = 3.81: an undamped ultraviolet
/// oscillator and a damped infrared one. Not a fit to measured silica data.
pub fn silica_oscillators() -> OscillatorSet {
    OscillatorSet::from_contributions(&[(1.098, 13.38, 0.0), (1.712, 0.1237, 0.01)])
        .expect("valid surrogate oscillators")
}

pub fn au_drude() -> DrudeParams {
    DrudeParams::with_room(AU_OMEGA_P, AU_GAMMA_ROOM).expect("valid gold parameters")
}

pub fn au_drude_impure() -> DrudeParams {
    DrudeParams::new(
        AU_OMEGA_P,
        AU_GAMMA_ROOM,
        rad_per_s_to_ev(AU_GAMMA_RESIDUAL_RAD_S),
        300.0,
    )
    .expect("valid gold parameters")
}

pub fn silica_conductivity(mode: ConductivityMode) -> ConductivityLaw {
    ConductivityLaw::new(SILICA_SIGMA0, SILICA_GAP, 300.0, mode).expect("valid conductivity")
}

pub const NAMES: &[&str] = &[
    "ideal-metal",
    "drude:au",
    "drude:au-perfect",
    "drude:au-impure",
    "plasma:au",
    "generalized-plasma:au",
    "nonlocal:au",
    "nonlocal:au-impure",
    "ideal-dielectric:silica",
    "real-dielectric:silica",
    "real-dielectric:silica-constant",
    "drude:ni",
    "plasma:ni",
];

/// Looks up a built-in material by name.
pub fn lookup(name: &str) -> Result<MaterialModel> {
    let v = DEFAULT_NONLOCAL_VELOCITY;
    let m = match name {
        "ideal-metal" => MaterialModel::ideal_metal(),
        "drude:au" | "drude:au-perfect" => MaterialModel::drude(au_drude()),
        "drude:au-impure" => MaterialModel::drude(au_drude_impure()),
        "plasma:au" => MaterialModel::plasma(AU_OMEGA_P)?,
        "generalized-plasma:au" => MaterialModel::new(Response::GeneralizedPlasma {
            omega_p: AU_OMEGA_P,
            oscillators: OscillatorSet::from_contributions(&[(3.0, 3.0, 0.5)])?,
        }),
        "nonlocal:au" => MaterialModel::nonlocal(NonlocalDrudeParams::new(au_drude(), v, v)?),
        "nonlocal:au-impure" => {
            MaterialModel::nonlocal(NonlocalDrudeParams::new(au_drude_impure(), v, v)?)
        }
        "ideal-dielectric:silica" => MaterialModel::ideal_dielectric(silica_oscillators()),
        "real-dielectric:silica" => MaterialModel::real_dielectric(
            silica_oscillators(),
            silica_conductivity(ConductivityMode::Activated),
        ),
        "real-dielectric:silica-constant" => MaterialModel::real_dielectric(
            silica_oscillators(),
            silica_conductivity(ConductivityMode::Constant),
        ),
        "drude:ni" => MaterialModel::drude(DrudeParams::with_room(NI_OMEGA_P, NI_GAMMA_ROOM)?)
            .with_mu0(NI_MU0)?,
        "plasma:ni" => MaterialModel::plasma(NI_OMEGA_P)?.with_mu0(NI_MU0)?,
        _ => {
            return Err(CasimirError::Config(format!(
                "unknown material '{name}' (known: {})",
                NAMES.join(", ")
            )))
        }
    };
    Ok(m)
}
