//! Dielectric and magnetic response models evaluated on the imaginary
//! frequency axis.
//!
//! All frequencies are in eV; wavenumbers are ħc·k in eV. Temperature enters
//! through the Drude relaxation γ(T) and the dielectric dc conductivity σ0(T).

pub mod catalog;
pub mod file;

use serde::Serialize;

use crate::error::{config, domain, CasimirError, Result};
use crate::units::{inv_s_to_ev, C_M_S, KB_EV_K};

/// Default nonlocality velocity (gold Fermi velocity), m/s.
pub const DEFAULT_NONLOCAL_VELOCITY: f64 = 1.40e6;

/// Drude-model parameters with the relaxation law
/// γ(T) = γ_residual + γ_room·(T/t_room)².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrudeParams {
    /// Plasma frequency, eV.
    pub omega_p: f64,
    /// Relaxation at `t_room`, eV (lattice part only).
    pub gamma_room: f64,
    /// Residual relaxation from impurities, eV.
    pub gamma_residual: f64,
    /// Reference temperature, K.
    pub t_room: f64,
}

impl DrudeParams {
    pub fn new(omega_p: f64, gamma_room: f64, gamma_residual: f64, t_room: f64) -> Result<Self> {
        if !(omega_p > 0.0 && omega_p.is_finite()) {
            return config(format!("omega_p must be positive, got {omega_p}"));
        }
        if !(gamma_room >= 0.0 && gamma_residual >= 0.0) {
            return config("relaxation parameters must be non-negative");
        }
        if !(t_room > 0.0) {
            return config(format!("reference temperature must be positive, got {t_room}"));
        }
        if gamma_room + gamma_residual >= omega_p / 10.0 {
            return config(format!(
                "relaxation {} eV is not small compared with omega_p {} eV",
                gamma_room + gamma_residual,
                omega_p
            ));
        }
        Ok(Self {
            omega_p,
            gamma_room,
            gamma_residual,
            t_room,
        })
    }

    /// Perfect-lattice gold-like parameters anchored at 300 K.
    pub fn with_room(omega_p: f64, gamma_room: f64) -> Result<Self> {
        Self::new(omega_p, gamma_room, 0.0, 300.0)
    }

    pub fn gamma_at(&self, temperature: f64) -> f64 {
        let r = temperature / self.t_room;
        self.gamma_residual + self.gamma_room * r * r
    }
}

/// γ(T) for the Drude relaxation law.
pub fn gamma_at_temperature(params: &DrudeParams, temperature: f64) -> Result<f64> {
    if !(temperature >= 0.0) {
        return domain(format!("temperature must be non-negative, got {temperature}"));
    }
    Ok(params.gamma_at(temperature))
}

/// One Lorentz oscillator of the imaginary-frequency permittivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Oscillator {
    /// Strength g_j, eV².
    pub strength: f64,
    /// Resonance ω_j, eV.
    pub frequency: f64,
    /// Relaxation γ_j, eV.
    pub damping: f64,
}

/// ε(iξ) = 1 + Σ g_j / (ω_j² + ξ² + γ_j ξ).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillatorSet {
    oscillators: Vec<Oscillator>,
}

impl OscillatorSet {
    pub fn new(oscillators: Vec<Oscillator>) -> Result<Self> {
        for (i, o) in oscillators.iter().enumerate() {
            if !(o.frequency > 0.0) {
                return config(format!("oscillator {i}: frequency must be nonzero and positive"));
            }
            if !(o.strength >= 0.0 && o.damping >= 0.0) {
                return config(format!("oscillator {i}: strength and damping must be non-negative"));
            }
        }
        Ok(Self { oscillators })
    }

    /// Builds an oscillator from its static contribution C_j = g_j/ω_j².
    pub fn from_contributions(terms: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            terms
                .iter()
                .map(|&(c, w, g)| Oscillator {
                    strength: c * w * w,
                    frequency: w,
                    damping: g,
                })
                .collect(),
        )
    }

    pub fn oscillators(&self) -> &[Oscillator] {
        &self.oscillators
    }

    pub fn len(&self) -> usize {
        self.oscillators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oscillators.is_empty()
    }

    /// Σ g_j/(ω_j² + ξ² + γ_j ξ), i.e. ε(iξ) − 1.
    pub fn susceptibility(&self, xi: f64) -> f64 {
        self.oscillators
            .iter()
            .map(|o| o.strength / (o.frequency * o.frequency + xi * xi + o.damping * xi))
            .sum()
    }

    /// ε(0) = 1 + Σ g_j/ω_j².
    pub fn static_permittivity(&self) -> f64 {
        1.0 + self.susceptibility(0.0)
    }

    /// Σ g_j γ_j / ω_j⁴ in 1/eV; multiply by ħc for the length G.
    pub fn relaxation_moment(&self) -> f64 {
        self.oscillators
            .iter()
            .map(|o| o.strength * o.damping / o.frequency.powi(4))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConductivityMode {
    /// σ0(T) = σ_ref · exp[−(Δ/2k_B)(1/T − 1/t_ref)].
    Activated,
    /// σ0(T) = σ_ref at every T.
    Constant,
}

/// Static conductivity of a dielectric, Gaussian units (1/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConductivityLaw {
    pub sigma_ref: f64,
    /// Band gap Δ, eV.
    pub delta_gap: f64,
    pub t_ref: f64,
    pub mode: ConductivityMode,
}

impl ConductivityLaw {
    pub fn new(sigma_ref: f64, delta_gap: f64, t_ref: f64, mode: ConductivityMode) -> Result<Self> {
        if !(sigma_ref > 0.0) {
            return config("reference conductivity must be positive");
        }
        if !(delta_gap >= 0.0 && t_ref > 0.0) {
            return config("band gap must be non-negative and t_ref positive");
        }
        Ok(Self {
            sigma_ref,
            delta_gap,
            t_ref,
            mode,
        })
    }

    /// σ0(T) in 1/s. Underflows to zero deep in the activated regime.
    pub fn sigma_at(&self, temperature: f64) -> f64 {
        match self.mode {
            ConductivityMode::Constant => self.sigma_ref,
            ConductivityMode::Activated => {
                if temperature <= 0.0 {
                    return 0.0;
                }
                let exponent =
                    -(self.delta_gap / (2.0 * KB_EV_K)) * (1.0 / temperature - 1.0 / self.t_ref);
                self.sigma_ref * exponent.exp()
            }
        }
    }

    /// Whether σ0(T) is mathematically nonzero (regardless of underflow).
    pub fn conducts_at(&self, temperature: f64) -> bool {
        match self.mode {
            ConductivityMode::Constant => true,
            ConductivityMode::Activated => temperature > 0.0,
        }
    }
}

/// Drude-like response with transverse/longitudinal spatial dispersion in k⊥.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonlocalDrudeParams {
    pub drude: DrudeParams,
    /// Transverse velocity, m/s.
    pub v_t: f64,
    /// Longitudinal velocity, m/s.
    pub v_l: f64,
}

impl NonlocalDrudeParams {
    pub fn new(drude: DrudeParams, v_t: f64, v_l: f64) -> Result<Self> {
        for (name, v) in [("v_t", v_t), ("v_l", v_l)] {
            if !(v > 0.0 && v < C_M_S / 50.0) {
                return config(format!("{name} = {v} m/s must lie in (0, c/50)"));
            }
        }
        Ok(Self { drude, v_t, v_l })
    }

    /// Test-only constructor allowing zero velocities (local limit).
    pub fn new_unchecked(drude: DrudeParams, v_t: f64, v_l: f64) -> Self {
        Self { drude, v_t, v_l }
    }

    pub fn beta_t(&self) -> f64 {
        self.v_t / C_M_S
    }

    pub fn beta_l(&self) -> f64 {
        self.v_l / C_M_S
    }
}

/// Zero-frequency behaviour attached to tabulated permittivities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroFrequency {
    /// Drude-type extrapolation: (r_TM, r_TE) = (1, 0).
    Drude,
    /// Plasma-type extrapolation with the given plasma frequency (eV).
    Plasma { omega_p: f64 },
}

/// ε(iξ) samples with a monotone log-log interpolant of ε − 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulatedPermittivity {
    xi: Vec<f64>,
    eps: Vec<f64>,
    pub zero_frequency: ZeroFrequency,
}

impl TabulatedPermittivity {
    pub fn new(samples: Vec<(f64, f64)>, zero_frequency: ZeroFrequency) -> Result<Self> {
        if samples.len() < 2 {
            return config("tabulated permittivity needs at least two samples");
        }
        let mut xi = Vec::with_capacity(samples.len());
        let mut eps = Vec::with_capacity(samples.len());
        for (i, &(x, e)) in samples.iter().enumerate() {
            if !(x > 0.0) || !(e > 1.0) {
                return config(format!("sample {i}: need xi > 0 and eps > 1, got ({x}, {e})"));
            }
            if let Some(&prev) = xi.last() {
                if x <= prev {
                    return config("tabulated frequencies must be strictly increasing");
                }
            }
            xi.push(x);
            eps.push(e);
        }
        // Enforce monotone non-increasing ε so the interpolant is monotone.
        for i in 1..eps.len() {
            if eps[i] > eps[i - 1] {
                eps[i] = eps[i - 1];
            }
        }
        Ok(Self {
            xi,
            eps,
            zero_frequency,
        })
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xi.iter().copied().zip(self.eps.iter().copied())
    }

    /// Interpolates ln(ε − 1) linearly in ln ξ; outside the table the end
    /// segments are extended with slope clamped to ≤ 0.
    pub fn eval(&self, xi: f64) -> f64 {
        let n = self.xi.len();
        let lx = xi.ln();
        let idx = match self.xi.binary_search_by(|p| p.total_cmp(&xi)) {
            Ok(i) => return self.eps[i],
            Err(i) => i,
        };
        let (i0, i1) = if idx == 0 {
            (0, 1)
        } else if idx >= n {
            (n - 2, n - 1)
        } else {
            (idx - 1, idx)
        };
        let x0 = self.xi[i0].ln();
        let x1 = self.xi[i1].ln();
        let y0 = (self.eps[i0] - 1.0).ln();
        let y1 = (self.eps[i1] - 1.0).ln();
        let slope = ((y1 - y0) / (x1 - x0)).min(0.0);
        1.0 + (y0 + slope * (lx - x0)).exp()
    }
}

/// Variant tag of a plate's response.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Response {
    IdealMetal,
    Drude(DrudeParams),
    Plasma {
        omega_p: f64,
    },
    GeneralizedPlasma {
        omega_p: f64,
        oscillators: OscillatorSet,
    },
    IdealDielectric(OscillatorSet),
    RealDielectric {
        oscillators: OscillatorSet,
        conductivity: ConductivityLaw,
    },
    NonlocalDrude(NonlocalDrudeParams),
    Tabulated(TabulatedPermittivity),
}

/// A plate material: response model plus static permeability μ(0).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialModel {
    pub response: Response,
    /// μ(0); μ(iξ_l) = 1 for l ≥ 1.
    pub mu0: f64,
}

impl MaterialModel {
    pub fn new(response: Response) -> Self {
        Self { response, mu0: 1.0 }
    }

    pub fn with_mu0(mut self, mu0: f64) -> Result<Self> {
        if !(mu0 >= 1.0 && mu0.is_finite()) {
            return config(format!("mu0 must be finite and >= 1, got {mu0}"));
        }
        self.mu0 = mu0;
        Ok(self)
    }

    pub fn ideal_metal() -> Self {
        Self::new(Response::IdealMetal)
    }

    pub fn drude(params: DrudeParams) -> Self {
        Self::new(Response::Drude(params))
    }

    pub fn plasma(omega_p: f64) -> Result<Self> {
        if !(omega_p > 0.0) {
            return config("omega_p must be positive");
        }
        Ok(Self::new(Response::Plasma { omega_p }))
    }

    pub fn ideal_dielectric(osc: OscillatorSet) -> Self {
        Self::new(Response::IdealDielectric(osc))
    }

    pub fn real_dielectric(osc: OscillatorSet, conductivity: ConductivityLaw) -> Self {
        Self::new(Response::RealDielectric {
            oscillators: osc,
            conductivity,
        })
    }

    pub fn nonlocal(params: NonlocalDrudeParams) -> Self {
        Self::new(Response::NonlocalDrude(params))
    }

    pub fn is_nonlocal(&self) -> bool {
        matches!(self.response, Response::NonlocalDrude(_))
    }

    pub fn variant_name(&self) -> &'static str {
        match self.response {
            Response::IdealMetal => "ideal_metal",
            Response::Drude(_) => "drude",
            Response::Plasma { .. } => "plasma",
            Response::GeneralizedPlasma { .. } => "generalized_plasma",
            Response::IdealDielectric(_) => "ideal_dielectric",
            Response::RealDielectric { .. } => "real_dielectric",
            Response::NonlocalDrude(_) => "nonlocal_drude",
            Response::Tabulated(_) => "tabulated",
        }
    }

    /// Returns a copy with the plasma frequency replaced, for parameter sweeps.
    pub fn with_omega_p(&self, omega_p: f64) -> Result<Self> {
        let mut m = self.clone();
        match &mut m.response {
            Response::Drude(p) => *p = DrudeParams::new(omega_p, p.gamma_room, p.gamma_residual, p.t_room)?,
            Response::Plasma { omega_p: w } | Response::GeneralizedPlasma { omega_p: w, .. } => {
                *w = omega_p
            }
            Response::NonlocalDrude(p) => {
                p.drude = DrudeParams::new(omega_p, p.drude.gamma_room, p.drude.gamma_residual, p.drude.t_room)?
            }
            _ => {
                return Err(CasimirError::UnsupportedModel(format!(
                    "{} has no plasma frequency",
                    self.variant_name()
                )))
            }
        }
        Ok(m)
    }
}

/// Permittivity ε(iξ) of a local model at ξ > 0.
///
/// The ideal metal is represented by an effectively infinite permittivity.
pub fn eps_imag_freq(model: &MaterialModel, xi: f64, temperature: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return domain(format!(
            "xi must be positive (zero frequency uses the reflection limits), got {xi}"
        ));
    }
    let eps = match &model.response {
        Response::IdealMetal => f64::INFINITY,
        Response::Drude(p) => {
            1.0 + p.omega_p * p.omega_p / (xi * (xi + p.gamma_at(temperature)))
        }
        Response::Plasma { omega_p } => 1.0 + omega_p * omega_p / (xi * xi),
        Response::GeneralizedPlasma {
            omega_p,
            oscillators,
        } => 1.0 + omega_p * omega_p / (xi * xi) + oscillators.susceptibility(xi),
        Response::IdealDielectric(osc) => 1.0 + osc.susceptibility(xi),
        Response::RealDielectric {
            oscillators,
            conductivity,
        } => {
            1.0 + oscillators.susceptibility(xi)
                + 4.0 * std::f64::consts::PI * inv_s_to_ev(conductivity.sigma_at(temperature)) / xi
        }
        Response::NonlocalDrude(_) => {
            return Err(CasimirError::UnsupportedModel(
                "nonlocal Drude permittivity depends on k_perp; use eps_nonlocal_imag_freq".into(),
            ))
        }
        Response::Tabulated(t) => t.eval(xi),
    };
    Ok(eps)
}

/// Transverse and longitudinal permittivities of the nonlocal Drude-like
/// model at (iξ, k⊥):
///
/// ε^T = 1 + ω_p²/[ξ(ξ+γ)]·(1 + v^T k⊥/ξ),
/// ε^L = 1 + ω_p²/[ξ(ξ+γ)]·(1 + v^L k⊥/ξ)⁻¹.
pub fn eps_nonlocal_imag_freq(
    params: &NonlocalDrudeParams,
    xi: f64,
    k_perp: f64,
    temperature: f64,
) -> Result<(f64, f64)> {
    if !(xi > 0.0) {
        return domain(format!("xi must be positive, got {xi}"));
    }
    if !(k_perp >= 0.0) {
        return domain(format!("k_perp must be non-negative, got {k_perp}"));
    }
    let d = &params.drude;
    let base = d.omega_p * d.omega_p / (xi * (xi + d.gamma_at(temperature)));
    let eps_t = 1.0 + base * (1.0 + params.beta_t() * k_perp / xi);
    let eps_l = 1.0 + base / (1.0 + params.beta_l() * k_perp / xi);
    Ok((eps_t, eps_l))
}

/// μ at the l-th Matsubara frequency: μ(0) at l = 0, unity otherwise.
pub fn mu_at_matsubara(model: &MaterialModel, l: u64) -> f64 {
    if l == 0 {
        model.mu0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{rad_per_s_to_ev, HBARC_EV_M};

    fn au() -> DrudeParams {
        DrudeParams::with_room(9.0, 0.035).unwrap()
    }

    #[test]
    fn drude_and_plasma_reference_values() {
        // Direct evaluation: 1 + 81/(0.16243·0.19743) and 1 + 81/0.16243².
        let xi = 0.16243;
        let d = eps_imag_freq(&MaterialModel::drude(au()), xi, 300.0).unwrap();
        let expected_d = 1.0 + 81.0 / (xi * (xi + 0.035));
        assert!((d - expected_d).abs() < 1e-9);
        assert!((d - 2526.839).abs() < 1e-3, "{d}");
        let p = eps_imag_freq(&MaterialModel::plasma(9.0).unwrap(), xi, 300.0).unwrap();
        assert!((p - 3071.100).abs() < 1e-3, "{p}");
    }

    #[test]
    fn ideal_dielectric_tends_to_one() {
        let osc = catalog::silica_oscillators();
        let m = MaterialModel::ideal_dielectric(osc);
        let e = eps_imag_freq(&m, 1e9, 300.0).unwrap();
        assert!((e - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_and_negative_xi_rejected() {
        let m = MaterialModel::drude(au());
        assert!(matches!(eps_imag_freq(&m, 0.0, 300.0), Err(CasimirError::Domain(_))));
        assert!(eps_imag_freq(&m, -1.0, 300.0).is_err());
        let nl = MaterialModel::nonlocal(NonlocalDrudeParams::new(au(), 1.4e6, 1.4e6).unwrap());
        assert!(matches!(
            eps_imag_freq(&nl, 0.1, 300.0),
            Err(CasimirError::UnsupportedModel(_))
        ));
    }

    #[test]
    fn nonlocal_local_limits() {
        let p = NonlocalDrudeParams::new(au(), 1.4e6, 1.4e6).unwrap();
        let local = eps_imag_freq(&MaterialModel::drude(au()), 0.3, 300.0).unwrap();
        let (t, l) = eps_nonlocal_imag_freq(&p, 0.3, 0.0, 300.0).unwrap();
        assert_eq!(t, local);
        assert_eq!(l, local);
        let z = NonlocalDrudeParams::new_unchecked(au(), 0.0, 0.0);
        let (t, l) = eps_nonlocal_imag_freq(&z, 0.3, 5.0, 300.0).unwrap();
        assert_eq!(t, local);
        assert_eq!(l, local);
        assert!(eps_nonlocal_imag_freq(&p, 0.3, -1.0, 300.0).is_err());
    }

    #[test]
    fn nonlocal_reference_value() {
        let p = NonlocalDrudeParams::new(au(), 1.4e6, 1.4e6).unwrap();
        let (xi, k) = (0.16243, 0.19733);
        let (t, l) = eps_nonlocal_imag_freq(&p, xi, k, 300.0).unwrap();
        let base = 81.0 / (xi * (xi + 0.035));
        let ratio = 1.4e6 / C_M_S * k / xi;
        assert!((ratio - 5.673e-3).abs() < 1e-6);
        assert!((t - (1.0 + base * (1.0 + ratio))).abs() < 1e-9);
        assert!((l - (1.0 + base / (1.0 + ratio))).abs() < 1e-9);
        // Sanity on the ħc convention: k⊥ = 1 μm⁻¹ corresponds to 0.19733 eV.
        assert!((HBARC_EV_M / 1e-6 - 0.19733).abs() < 1e-5);
    }

    #[test]
    fn mu_only_at_zero_frequency() {
        let ni = MaterialModel::plasma(4.89).unwrap().with_mu0(110.0).unwrap();
        assert_eq!(mu_at_matsubara(&ni, 0), 110.0);
        assert_eq!(mu_at_matsubara(&ni, 1), 1.0);
        let au = MaterialModel::plasma(9.0).unwrap();
        assert_eq!(mu_at_matsubara(&au, 0), 1.0);
        assert_eq!(mu_at_matsubara(&au, 7), 1.0);
        assert!(MaterialModel::ideal_metal().with_mu0(0.5).is_err());
    }

    #[test]
    fn gamma_law() {
        let p = au();
        assert_eq!(gamma_at_temperature(&p, 300.0).unwrap(), 0.035);
        assert_eq!(gamma_at_temperature(&p, 0.0).unwrap(), 0.0);
        let g0 = rad_per_s_to_ev(5.32e10);
        assert!((g0 - 3.502e-5).abs() < 1e-8);
        let imp = DrudeParams::new(9.0, 0.035, g0, 300.0).unwrap();
        assert_eq!(gamma_at_temperature(&imp, 0.0).unwrap(), g0);
        assert!(gamma_at_temperature(&p, -1.0).is_err());
    }

    #[test]
    fn real_minus_ideal_is_conductivity_term() {
        let osc = catalog::silica_oscillators();
        let law = ConductivityLaw::new(29.7, 9.0, 300.0, ConductivityMode::Activated).unwrap();
        let rd = MaterialModel::real_dielectric(osc.clone(), law);
        let id = MaterialModel::ideal_dielectric(osc);
        for xi in [1e-3, 0.1, 2.0] {
            let diff = eps_imag_freq(&rd, xi, 300.0).unwrap() - eps_imag_freq(&id, xi, 300.0).unwrap();
            let expected = 4.0 * std::f64::consts::PI * inv_s_to_ev(29.7) / xi;
            assert!((diff - expected).abs() <= 1e-12 * expected.max(1e-300) + 1e-15);
        }
    }

    #[test]
    fn conductivity_laws() {
        let act = ConductivityLaw::new(29.7, 9.0, 300.0, ConductivityMode::Activated).unwrap();
        assert!((act.sigma_at(300.0) - 29.7).abs() < 1e-12);
        assert!(act.sigma_at(200.0) < act.sigma_at(300.0));
        assert_eq!(act.sigma_at(0.0), 0.0);
        assert!(act.conducts_at(1.0));
        let cst = ConductivityLaw::new(29.7, 9.0, 300.0, ConductivityMode::Constant).unwrap();
        assert_eq!(cst.sigma_at(1e-3), 29.7);
    }

    #[test]
    fn drude_params_validation() {
        assert!(DrudeParams::new(9.0, 1.0, 0.0, 300.0).is_err());
        assert!(DrudeParams::new(-1.0, 0.0, 0.0, 300.0).is_err());
        assert!(NonlocalDrudeParams::new(au(), C_M_S / 10.0, 1e6).is_err());
    }

    #[test]
    fn tabulated_interpolation_is_monotone() {
        let samples: Vec<(f64, f64)> = (1..=10)
            .map(|l| {
                let xi = 0.1 * l as f64;
                (xi, 1.0 + 81.0 / (xi * xi))
            })
            .collect();
        let t = TabulatedPermittivity::new(samples, ZeroFrequency::Drude).unwrap();
        assert!((t.eval(0.35) - (1.0 + 81.0 / (0.35 * 0.35))).abs() / 661.0 < 1e-12);
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let e = t.eval(0.01 + 0.01 * i as f64);
            assert!(e <= prev && e >= 1.0);
            prev = e;
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn local_models() -> Vec<MaterialModel> {
        let au = DrudeParams::with_room(9.0, 0.035).unwrap();
        let osc = catalog::silica_oscillators();
        let law = ConductivityLaw::new(29.7, 9.0, 300.0, ConductivityMode::Activated).unwrap();
        vec![
            MaterialModel::drude(au),
            MaterialModel::plasma(9.0).unwrap(),
            MaterialModel::new(Response::GeneralizedPlasma {
                omega_p: 9.0,
                oscillators: osc.clone(),
            }),
            MaterialModel::ideal_dielectric(osc.clone()),
            MaterialModel::real_dielectric(osc, law),
        ]
    }

    proptest! {
        #[test]
        fn local_permittivity_monotone_and_above_one(x1 in 1e-4f64..50.0, f in 1.0001f64..100.0, t in 0.0f64..400.0) {
            let x2 = x1 * f;
            for m in local_models() {
                let e1 = eps_imag_freq(&m, x1, t).unwrap();
                let e2 = eps_imag_freq(&m, x2, t).unwrap();
                prop_assert!(e1 >= e2);
                prop_assert!(e2 >= 1.0);
            }
        }

        #[test]
        fn nonlocal_ordering(xi in 1e-4f64..20.0, k in 0.0f64..50.0, t in 0.0f64..400.0) {
            let au = DrudeParams::with_room(9.0, 0.035).unwrap();
            let p = NonlocalDrudeParams::new(au, 1.4e6, 0.9e6).unwrap();
            let (et, el) = eps_nonlocal_imag_freq(&p, xi, k, t).unwrap();
            let local = eps_imag_freq(&MaterialModel::drude(au), xi, t).unwrap();
            prop_assert!(et >= local && local >= el && el >= 1.0);
        }

        #[test]
        fn gamma_monotone(t1 in 0.0f64..1000.0, dt in 0.0f64..1000.0) {
            let p = DrudeParams::new(9.0, 0.035, 1e-5, 300.0).unwrap();
            prop_assert!(p.gamma_at(t1 + dt) >= p.gamma_at(t1));
        }
    }
}
