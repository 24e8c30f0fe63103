//! TM/TE reflection coefficients at imaginary frequencies.
//!
//! Arguments are in eV (ξ, and ħc·k for wavenumbers). The coefficients are
//! homogeneous of degree zero, so any common frequency unit works.

use serde::Serialize;

use crate::error::{domain, CasimirError, Result};
use crate::materials::{
    eps_imag_freq, mu_at_matsubara, MaterialModel, NonlocalDrudeParams, Response, ZeroFrequency,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReflectionPair {
    pub r_tm: f64,
    pub r_te: f64,
}

impl ReflectionPair {
    pub const ZERO: Self = Self { r_tm: 0.0, r_te: 0.0 };
    pub const IDEAL: Self = Self { r_tm: 1.0, r_te: -1.0 };

    pub fn new(r_tm: f64, r_te: f64) -> Self {
        Self { r_tm, r_te }
    }

    pub fn negated(self) -> Self {
        Self::new(-self.r_tm, -self.r_te)
    }
}

/// Decay constants at imaginary frequency: q in vacuum, k in the medium and
/// k_t for the transverse nonlocal response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveVectors {
    pub q: f64,
    pub k: f64,
    pub k_t: f64,
}

impl WaveVectors {
    pub fn local(eps: f64, mu: f64, xi: f64, k_perp: f64) -> Self {
        let q = k_perp.hypot(xi);
        let k = (k_perp * k_perp + eps * mu * xi * xi).sqrt();
        Self { q, k, k_t: k }
    }
}

fn check_xi_k(xi: f64, k_perp: f64) -> Result<()> {
    if !(xi > 0.0) {
        return domain(format!(
            "xi must be positive, got {xi}; use zero_freq_coeffs at zero frequency"
        ));
    }
    if !(k_perp >= 0.0) {
        return domain(format!("k_perp must be non-negative, got {k_perp}"));
    }
    Ok(())
}

/// Local Fresnel coefficients r_TM = (εq − k)/(εq + k), r_TE = (μq − k)/(μq + k).
pub fn fresnel(eps: f64, mu: f64, xi: f64, k_perp: f64) -> Result<ReflectionPair> {
    check_xi_k(xi, k_perp)?;
    if !(eps >= 1.0) || !(mu >= 1.0) {
        return domain(format!("need eps >= 1 and mu >= 1, got eps={eps}, mu={mu}"));
    }
    if eps.is_infinite() {
        return Ok(ReflectionPair::IDEAL);
    }
    let q = k_perp.hypot(xi);
    Ok(fresnel_q(eps - 1.0, eps, mu, xi, q))
}

/// Fresnel coefficients from q and the susceptibility, with
/// k² = q² + (εμ − 1)ξ² so nothing cancels for q ≫ ξ.
fn fresnel_q(chi: f64, eps: f64, mu: f64, xi: f64, q: f64) -> ReflectionPair {
    let em1 = if mu == 1.0 { chi } else { eps * mu - 1.0 };
    let k = (q * q + em1 * xi * xi).sqrt();
    let eq = eps * q;
    let mq = mu * q;
    // εq − k = [(ε² − 1)q² − (εμ − 1)ξ²]/(εq + k) avoids cancellation near ε = 1.
    let r_tm = if mu == 1.0 {
        (chi * (eps + 1.0) * q * q - chi * xi * xi) / ((eq + k) * (eq + k))
    } else {
        (eq - k) / (eq + k)
    };
    let r_te = if mu == 1.0 {
        -em1 * xi * xi / ((q + k) * (q + k))
    } else {
        (mq - k) / (mq + k)
    };
    ReflectionPair::new(r_tm, r_te)
}

/// Reflection coefficients for transverse/longitudinal permittivities that
/// depend only on (ξ, k⊥).
pub fn impedance_reflection(eps_t: f64, eps_l: f64, xi: f64, k_perp: f64) -> Result<ReflectionPair> {
    check_xi_k(xi, k_perp)?;
    if !(eps_t >= 1.0 && eps_l >= 1.0) {
        return domain(format!("need eps_t, eps_l >= 1, got {eps_t}, {eps_l}"));
    }
    let q = k_perp.hypot(xi);
    Ok(impedance_q(eps_t, eps_l, eps_t - eps_l, xi, q, k_perp))
}

fn impedance_q(eps_t: f64, eps_l: f64, eps_diff: f64, xi: f64, q: f64, k_perp: f64) -> ReflectionPair {
    let chi_t = eps_t - 1.0;
    let k_t = (q * q + chi_t * xi * xi).sqrt();
    let extra = k_perp * eps_diff / eps_l;
    let r_tm = if eps_diff == 0.0 {
        fresnel_q(chi_t, eps_t, 1.0, xi, q).r_tm
    } else {
        (eps_t * q - k_t - extra) / (eps_t * q + k_t + extra)
    };
    let r_te = -chi_t * xi * xi / ((q + k_t) * (q + k_t));
    ReflectionPair::new(r_tm, r_te)
}

/// Zero-frequency reflection coefficients of a model.
///
/// `temperature` only matters for the nonlocal Drude-like model, whose limit
/// involves γ(T).
pub fn zero_freq_coeffs(model: &MaterialModel, k_perp: f64, temperature: f64) -> Result<ReflectionPair> {
    if !(k_perp > 0.0) {
        return domain(format!("k_perp must be positive at zero frequency, got {k_perp}"));
    }
    let mu = model.mu0;
    let te_nonconducting = (mu - 1.0) / (mu + 1.0);
    let plasma_te = |omega_p: f64| {
        let k = (k_perp * k_perp + mu * omega_p * omega_p).sqrt();
        (mu * k_perp - k) / (mu * k_perp + k)
    };
    let pair = match &model.response {
        Response::IdealMetal => ReflectionPair::IDEAL,
        Response::Drude(_) | Response::RealDielectric { .. } => {
            ReflectionPair::new(1.0, te_nonconducting)
        }
        Response::Plasma { omega_p } | Response::GeneralizedPlasma { omega_p, .. } => {
            ReflectionPair::new(1.0, plasma_te(*omega_p))
        }
        Response::IdealDielectric(osc) => {
            let e0 = osc.static_permittivity();
            ReflectionPair::new((e0 - 1.0) / (e0 + 1.0), te_nonconducting)
        }
        Response::Tabulated(t) => match t.zero_frequency {
            ZeroFrequency::Drude => ReflectionPair::new(1.0, te_nonconducting),
            ZeroFrequency::Plasma { omega_p } => ReflectionPair::new(1.0, plasma_te(omega_p)),
        },
        Response::NonlocalDrude(p) => {
            ReflectionPair::new(1.0, nonlocal_zero_te(p, mu, k_perp, temperature))
        }
    };
    Ok(pair)
}

/// ξ → 0 limit of the nonlocal r_TE: (μk⊥ − k^T_0)/(μk⊥ + k^T_0) with
/// k^T_0² = k⊥² + μ ω_p² (v^T/c) k⊥ / γ(T).
fn nonlocal_zero_te(p: &NonlocalDrudeParams, mu: f64, k_perp: f64, temperature: f64) -> f64 {
    let gamma = p.drude.gamma_at(temperature);
    if gamma == 0.0 {
        return -1.0;
    }
    let wp2 = p.drude.omega_p * p.drude.omega_p;
    let extra = mu * wp2 * p.beta_t() * k_perp / gamma;
    let k_t0 = (k_perp * k_perp + extra).sqrt();
    // μk⊥ − k^T_0 written without cancellation for μ = 1.
    if mu == 1.0 {
        -extra / ((k_perp + k_t0) * (k_perp + k_t0))
    } else {
        (mu * k_perp - k_t0) / (mu * k_perp + k_t0)
    }
}

/// Zero-frequency TM coefficient of a dielectric containing free charges with
/// inverse screening length κ.
pub fn screened_rtm0(eps0: f64, kappa: f64, k_perp: f64) -> Result<f64> {
    if !(eps0 >= 1.0 && kappa >= 0.0 && k_perp > 0.0) {
        return domain(format!(
            "need eps0 >= 1, kappa >= 0, k_perp > 0; got {eps0}, {kappa}, {k_perp}"
        ));
    }
    if kappa.is_infinite() {
        return Ok(1.0);
    }
    let s = eps0 * kappa.hypot(k_perp);
    Ok((s - k_perp) / (s + k_perp))
}

/// Reflection at Matsubara index `l` given ξ, q = √(k⊥² + ξ²) and k⊥, all in
/// the same frequency unit. At l = 0 the exact limit forms are used.
pub fn reflection_at(
    model: &MaterialModel,
    l: u64,
    xi: f64,
    q: f64,
    k_perp: f64,
    temperature: f64,
) -> Result<ReflectionPair> {
    if l == 0 {
        return zero_freq_coeffs(model, k_perp, temperature);
    }
    let mu = mu_at_matsubara(model, l);
    match &model.response {
        Response::IdealMetal => Ok(ReflectionPair::IDEAL),
        Response::NonlocalDrude(p) => Ok(nonlocal_pair(p, xi, q, k_perp, temperature)),
        _ => {
            let eps = eps_imag_freq(model, xi, temperature)?;
            if !(eps >= 1.0) {
                return Err(CasimirError::Numerical(format!("eps(i{xi}) = {eps} < 1")));
            }
            if eps.is_infinite() {
                return Ok(ReflectionPair::IDEAL);
            }
            Ok(fresnel_q(eps - 1.0, eps, mu, xi, q))
        }
    }
}

/// Nonlocal coefficients with ε^T − 1 and ε^T − ε^L formed without
/// subtraction.
fn nonlocal_pair(p: &NonlocalDrudeParams, xi: f64, q: f64, k_perp: f64, temperature: f64) -> ReflectionPair {
    let d = &p.drude;
    let a = d.omega_p * d.omega_p / (xi * (xi + d.gamma_at(temperature)));
    let st = p.beta_t() * k_perp / xi;
    let sl = p.beta_l() * k_perp / xi;
    let chi_t = a * (1.0 + st);
    let chi_l = a / (1.0 + sl);
    let diff = a * (st + sl / (1.0 + sl));
    impedance_q(1.0 + chi_t, 1.0 + chi_l, diff, xi, q, k_perp)
}
