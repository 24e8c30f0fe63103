//! Casimir free energy and pressure between two plates from the Matsubara
//! sum, and the zero-temperature integral limit.
//!
//! Internally everything is dimensionless: with ω_c = ħc/(2a),
//! ζ = ξ/ω_c, κ = k⊥/ω_c and y = √(κ² + ζ²) = 2aq. Each Matsubara term is
//!
//! f(ζ) = ∫_0^∞ κ Σ_pol ln(1 − r₁r₂ e^{−y}) dκ          (free energy)
//! g(ζ) = ∫_0^∞ κ y Σ_pol r₁r₂e^{−y}/(1 − r₁r₂e^{−y}) dκ (pressure)
//!
//! and ℱ = k_BT/(8πa²) Σ' f(ζ_l), P = −k_BT/(8πa³) Σ' g(ζ_l).

use std::cell::RefCell;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, CasimirError, Result};
use crate::materials::MaterialModel;
use crate::quadrature::{anchored_panels, graded, graded_nodes, KahanSum};
use crate::reflection::{reflection_at, ReflectionPair};
use crate::units::{characteristic_frequency, HBARC_EV_M, HBARC_J_M, KB_EV_K, KB_J_K};

/// Lower end of the κ and ζ integrations; the piece below is added as a
/// one-point correction.
const GRID_LO: f64 = 1e-12;
/// Ratio e^LN_WIDTH between successive graded panels.
const LN_WIDTH: f64 = 1.0;
/// Widest graded panel, in units of ω_c.
const LIN_WIDTH: f64 = 2.0;
/// Relative accuracy below which the 16/8-point difference does not trigger
/// panel refinement; the 16-point error is far smaller than that difference.
pub const QUADRATURE_FLOOR: f64 = 1e-12;
const MAX_REFINEMENTS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatsubaraConfig {
    /// Temperature, K. Zero-temperature operations use it only for the
    /// temperature-dependent material parameters.
    pub temperature: f64,
    pub rel_tol: f64,
    pub y_max_offset: f64,
    pub l_max_cap: u64,
    /// Matsubara terms summed explicitly before the remainder is replaced by
    /// its Euler–Maclaurin integral.
    pub explicit_terms: u64,
    /// Extra global halvings of every quadrature panel.
    pub panel_refinement: u32,
}

impl MatsubaraConfig {
    pub fn new(temperature: f64) -> Self {
        Self {
            temperature,
            rel_tol: 1e-9,
            y_max_offset: 50.0,
            l_max_cap: 1_000_000,
            explicit_terms: 1024,
            panel_refinement: 0,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(CasimirError::Config(format!(
                "rel_tol must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if !(self.y_max_offset >= 30.0) {
            return Err(CasimirError::Config("y_max_offset must be >= 30".into()));
        }
        if self.l_max_cap < 1 || self.explicit_terms < 2 {
            return Err(CasimirError::Config(
                "l_max_cap must be >= 1 and explicit_terms >= 2".into(),
            ));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(CasimirError::Config("temperature must be finite and >= 0".into()));
        }
        Ok(())
    }

    fn quad_tol(&self) -> f64 {
        self.rel_tol.max(QUADRATURE_FLOOR)
    }
}

impl Default for MatsubaraConfig {
    fn default() -> Self {
        Self::new(300.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultKind {
    FreeEnergy,
    Pressure,
    Gradient,
}

impl ResultKind {
    pub fn units(self) -> &'static str {
        match self {
            ResultKind::FreeEnergy => "J/m^2",
            ResultKind::Pressure => "N/m^2",
            ResultKind::Gradient => "N/m",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CasimirResult {
    pub value: f64,
    pub kind: ResultKind,
    pub units: &'static str,
    pub truncation_error: f64,
    /// Matsubara terms summed explicitly (quadrature nodes in ζ at T = 0).
    pub terms_used: u64,
    pub converged: bool,
}

impl CasimirResult {
    fn new(value: f64, kind: ResultKind, err: f64, terms: u64, tol: f64) -> Self {
        Self {
            value,
            kind,
            units: kind.units(),
            truncation_error: err,
            terms_used: terms,
            converged: err <= tol * value.abs(),
        }
    }
}

/// ξ_l = 2πk_BT l in eV.
pub fn matsubara_frequency(l: u64, temperature: f64) -> f64 {
    2.0 * PI * KB_EV_K * temperature * l as f64
}

/// Separation ħc/(4πk_BT) above which the l = 0 term dominates, m.
pub fn regime_threshold(temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return domain(format!("temperature must be positive, got {temperature}"));
    }
    Ok(HBARC_EV_M / (4.0 * PI * KB_EV_K * temperature))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Integrand {
    Energy,
    Pressure,
}

/// Two plates at separation a, with the temperature used for γ(T), σ0(T).
struct Plates<'a> {
    m1: &'a MaterialModel,
    omega_c: f64,
    m2: &'a MaterialModel,
    material_t: f64,
    y_offset: f64,
    refinement: u32,
}

/// ln(1 − x) or x/(1 − x) for x = rr·e^{−y}, with 1 − x formed as
/// (1 − rr) − rr·expm1(−y) when x is not small.
#[inline]
fn polarization_term(rr: f64, y: f64, em: f64, ey: f64, kind: Integrand) -> f64 {
    let x = rr * ey;
    let one_minus = if x.abs() < 0.5 { 1.0 - x } else { (1.0 - rr) - rr * em };
    match kind {
        Integrand::Energy => {
            if x.abs() < 0.5 {
                (-x).ln_1p()
            } else {
                one_minus.ln()
            }
        }
        Integrand::Pressure => y * x / one_minus,
    }
}

impl<'a> Plates<'a> {
    fn products(&self, l: u64, zeta: f64, y: f64, kappa: f64) -> Result<(f64, f64)> {
        let (xi, q, k) = (zeta * self.omega_c, y * self.omega_c, kappa * self.omega_c);
        let r1 = reflection_at(self.m1, l, xi, q, k, self.material_t)?;
        let r2 = if std::ptr::eq(self.m1, self.m2) {
            r1
        } else {
            reflection_at(self.m2, l, xi, q, k, self.material_t)?
        };
        let ReflectionPair { r_tm: a, r_te: b } = r1;
        Ok((a * r2.r_tm, b * r2.r_te))
    }

    /// κ-integrand times the Jacobian-free measure: κ Σ_pol term.
    fn integrand(&self, l: u64, zeta: f64, kappa: f64, kind: Integrand) -> Result<f64> {
        let y = kappa.hypot(zeta);
        let (tm, te) = self.products(l, zeta, y, kappa)?;
        let em = (-y).exp_m1();
        let ey = (-y).exp();
        Ok(kappa * (polarization_term(tm, y, em, ey, kind) + polarization_term(te, y, em, ey, kind)))
    }

    /// One Matsubara term f(ζ) or g(ζ) with its quadrature error estimate.
    fn term(&self, l: u64, zeta: f64, kind: Integrand, tol: f64) -> Result<(f64, f64)> {
        let y_max = zeta + self.y_offset;
        let kappa_max = ((y_max - zeta) * (y_max + zeta)).sqrt();
        let failure: RefCell<Option<CasimirError>> = RefCell::new(None);
        let eval = |k: f64| match self.integrand(l, zeta, k, kind) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let mut refine = self.refinement;
        loop {
            let scale = 0.5f64.powi(refine as i32);
            let est = graded(&eval, GRID_LO, kappa_max, LN_WIDTH * scale, LIN_WIDTH * scale);
            if let Some(e) = failure.borrow_mut().take() {
                return Err(e);
            }
            // ∫_0^{κ_lo} κ h dκ ≈ κ_lo² h(κ_lo)/2.
            let head = 0.5 * GRID_LO * eval(GRID_LO);
            let value = est.value + head;
            if !value.is_finite() {
                return Err(CasimirError::Numerical(format!(
                    "non-finite Matsubara term at l = {l}, zeta = {zeta}"
                )));
            }
            if est.error <= tol * value.abs() || refine >= self.refinement + MAX_REFINEMENTS {
                return Ok((value, est.error));
            }
            refine += 1;
        }
    }

    /// ∫_lo^hi of the continuous term function (l ≥ 1 semantics) over ζ.
    fn zeta_integral(&self, lo: f64, hi: f64, kind: Integrand, tol: f64) -> Result<(f64, f64, u64)> {
        let mut refine = self.refinement;
        loop {
            let scale = 0.5f64.powi(refine as i32);
            let panels = anchored_panels(GRID_LO, lo, hi, LN_WIDTH * 0.5 * scale, LIN_WIDTH * 0.5 * scale);
            let (n16, n8) = graded_nodes(&panels);
            let eval = |nodes: &[(f64, f64)]| -> Result<Vec<f64>> {
                nodes
                    .par_iter()
                    .map(|&(z, w)| self.term(1, z, kind, tol).map(|(v, _)| v * w))
                    .collect()
            };
            let v16 = eval(&n16)?;
            let v8 = eval(&n8)?;
            let mut s16 = KahanSum::new();
            let mut s8 = KahanSum::new();
            v16.iter().for_each(|&v| s16.add(v));
            v8.iter().for_each(|&v| s8.add(v));
            let value = s16.value();
            let err = (value - s8.value()).abs();
            if err <= tol * value.abs() || refine >= self.refinement + MAX_REFINEMENTS {
                return Ok((value, err, n16.len() as u64));
            }
            refine += 1;
        }
    }
}

/// Dimensionless Matsubara sum Σ' over terms with spacing Δ = ζ_1.
fn matsubara_sum(plates: &Plates, delta: f64, kind: Integrand, cfg: &MatsubaraConfig) -> Result<(f64, f64, u64)> {
    let tol = cfg.quad_tol();
    let stop_tol = cfg.rel_tol / 10.0;
    let explicit = cfg.explicit_terms.min(cfg.l_max_cap.saturating_add(1)).max(2);
    let mut sum = KahanSum::new();
    let mut quad_err = 0.0;
    let mut terms: Vec<f64> = Vec::new();
    let mut small_run = 0;
    let mut next = 0u64;
    let mut block = 8u64;
    while next < explicit {
        let end = (next + block).min(explicit);
        let computed: Vec<(f64, f64)> = (next..end)
            .into_par_iter()
            .map(|l| plates.term(l, l as f64 * delta, kind, tol))
            .collect::<Result<_>>()?;
        for (i, (v, e)) in computed.into_iter().enumerate() {
            let l = next + i as u64;
            let w = if l == 0 { 0.5 } else { 1.0 };
            sum.add(w * v);
            quad_err += w * e;
            terms.push(v);
            if l >= 1 && v.abs() < stop_tol * sum.value().abs() {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run >= 3 {
                let r = (-delta).exp();
                let tail = v.abs() * r / (1.0 - r);
                return Ok((sum.value(), quad_err + tail, l + 1));
            }
        }
        next = end;
        block = (block * 2).min(256);
    }
    // Euler–Maclaurin (midpoint) remainder:
    // Σ_{l≥L} f_l ≈ (1/Δ)∫_{(L−½)Δ}^∞ f dζ + (Δ/24) f′((L−½)Δ).
    let big_l = explicit;
    let (f_l, e_l) = plates.term(big_l, big_l as f64 * delta, kind, tol)?;
    let f_prev = terms[big_l as usize - 1];
    let start = (big_l as f64 - 0.5) * delta;
    let (integral, int_err, nodes) =
        plates.zeta_integral(start, start + plates.y_offset, kind, tol)?;
    let slope_term = (f_l - f_prev) / 24.0;
    sum.add(integral / delta);
    sum.add(slope_term);
    // The first omitted Euler–Maclaurin term is O(Δ²) relative to the slope
    // correction.
    let em_err = slope_term.abs() * (delta * delta).min(1.0);
    Ok((sum.value(), quad_err + e_l + int_err / delta + em_err, big_l + nodes))
}

fn check_inputs(a: f64, temperature: f64, m1: &MaterialModel, m2: &MaterialModel, cfg: &MatsubaraConfig) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("separation must be positive, got {a}"));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return domain(format!("temperature must be positive, got {temperature}"));
    }
    for m in [m1, m2] {
        if !(m.mu0 >= 1.0) {
            return Err(CasimirError::Config("mu0 must be >= 1".into()));
        }
    }
    cfg.validate()
}

fn finite_t(
    a: f64,
    m1: &MaterialModel,
    m2: &MaterialModel,
    cfg: &MatsubaraConfig,
    kind: Integrand,
) -> Result<CasimirResult> {
    let t = cfg.temperature;
    check_inputs(a, t, m1, m2, cfg)?;
    let plates = Plates {
        m1,
        omega_c: characteristic_frequency(a),
        m2,
        material_t: t,
        y_offset: cfg.y_max_offset,
        refinement: cfg.panel_refinement,
    };
    let omega_c = characteristic_frequency(a);
    let delta = 2.0 * PI * KB_EV_K * t / omega_c;
    let (s, err, terms) = matsubara_sum(&plates, delta, kind, cfg)?;
    let (prefactor, rk) = match kind {
        Integrand::Energy => (KB_J_K * t / (8.0 * PI * a * a), ResultKind::FreeEnergy),
        Integrand::Pressure => (-KB_J_K * t / (8.0 * PI * a * a * a), ResultKind::Pressure),
    };
    Ok(CasimirResult::new(
        prefactor * s,
        rk,
        (prefactor * err).abs(),
        terms,
        cfg.rel_tol.max(QUADRATURE_FLOOR),
    ))
}

/// Casimir free energy per unit area at separation `a` (m) and temperature
/// `cfg.temperature`, J/m².
pub fn free_energy(a: f64, m1: &MaterialModel, m2: &MaterialModel, cfg: &MatsubaraConfig) -> Result<CasimirResult> {
    finite_t(a, m1, m2, cfg, Integrand::Energy)
}

/// Casimir pressure (negative for attraction), N/m².
pub fn pressure(a: f64, m1: &MaterialModel, m2: &MaterialModel, cfg: &MatsubaraConfig) -> Result<CasimirResult> {
    finite_t(a, m1, m2, cfg, Integrand::Pressure)
}

fn zero_t(a: f64, m1: &MaterialModel, m2: &MaterialModel, cfg: &MatsubaraConfig, kind: Integrand) -> Result<CasimirResult> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("separation must be positive, got {a}"));
    }
    cfg.validate()?;
    let plates = Plates {
        m1,
        omega_c: characteristic_frequency(a),
        m2,
        material_t: cfg.temperature,
        y_offset: cfg.y_max_offset,
        refinement: cfg.panel_refinement,
    };
    let tol = cfg.quad_tol();
    let (integral, err, nodes) = plates.zeta_integral(GRID_LO, cfg.y_max_offset, kind, tol)?;
    let (head, _) = plates.term(1, GRID_LO, kind, tol)?;
    let total = integral + GRID_LO * head;
    let (prefactor, rk) = match kind {
        Integrand::Energy => (HBARC_J_M / (32.0 * PI * PI * a.powi(3)), ResultKind::FreeEnergy),
        Integrand::Pressure => (-HBARC_J_M / (32.0 * PI * PI * a.powi(4)), ResultKind::Pressure),
    };
    Ok(CasimirResult::new(prefactor * total, rk, (prefactor * err).abs(), nodes, tol))
}

/// Zero-temperature Casimir energy per unit area, J/m².
pub fn energy_zero_t(a: f64, m1: &MaterialModel, m2: &MaterialModel, cfg: &MatsubaraConfig) -> Result<CasimirResult> {
    zero_t(a, m1, m2, cfg, Integrand::Energy)
}

/// Zero-temperature Casimir pressure, N/m².
pub fn force_zero_t(a: f64, m1: &MaterialModel, m2: &MaterialModel, cfg: &MatsubaraConfig) -> Result<CasimirResult> {
    zero_t(a, m1, m2, cfg, Integrand::Pressure)
}

/// The explicit Matsubara terms f(ζ_l) (free energy) for l = 0..n, without
/// the ½ weight on l = 0. Useful for inspecting convergence.
pub fn free_energy_terms(a: f64, m1: &MaterialModel, m2: &MaterialModel, cfg: &MatsubaraConfig, n: u64) -> Result<Vec<f64>> {
    check_inputs(a, cfg.temperature, m1, m2, cfg)?;
    let plates = Plates {
        m1,
        omega_c: characteristic_frequency(a),
        m2,
        material_t: cfg.temperature,
        y_offset: cfg.y_max_offset,
        refinement: cfg.panel_refinement,
    };
    let delta = 2.0 * PI * KB_EV_K * cfg.temperature / characteristic_frequency(a);
    (0..n)
        .into_par_iter()
        .map(|l| plates.term(l, l as f64 * delta, Integrand::Energy, cfg.quad_tol()).map(|(v, _)| v))
        .collect()
}

/// Pressure from the l = 0 term alone, N/m².
pub fn pressure_zero_frequency_term(a: f64, m1: &MaterialModel, m2: &MaterialModel, cfg: &MatsubaraConfig) -> Result<f64> {
    check_inputs(a, cfg.temperature, m1, m2, cfg)?;
    let plates = Plates {
        m1,
        omega_c: characteristic_frequency(a),
        m2,
        material_t: cfg.temperature,
        y_offset: cfg.y_max_offset,
        refinement: cfg.panel_refinement,
    };
    let (g0, _) = plates.term(0, 0.0, Integrand::Pressure, cfg.quad_tol())?;
    Ok(-KB_J_K * cfg.temperature / (8.0 * PI * a.powi(3)) * 0.5 * g0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::catalog::lookup;
    use crate::units::ZETA3;

    #[test]
    fn matsubara_frequencies() {
        assert_eq!(matsubara_frequency(0, 300.0), 0.0);
        let x1 = matsubara_frequency(1, 300.0);
        assert!((x1 - 0.162_43).abs() < 1e-5, "{x1}");
        assert!((matsubara_frequency(10, 300.0) - 10.0 * x1).abs() < 1e-14);
    }

    #[test]
    fn regime_threshold_values() {
        let t300 = regime_threshold(300.0).unwrap();
        assert!((t300 - 6.07e-7).abs() < 1e-9, "{t300}");
        assert!((regime_threshold(150.0).unwrap() - 2.0 * t300).abs() < 1e-20);
        assert!(regime_threshold(0.0).is_err());
    }

    #[test]
    fn ideal_metal_zero_frequency_term() {
        // f(0) = 2∫ y ln(1 − e^{−y}) dy = −2ζ(3).
        let m = lookup("ideal-metal").unwrap();
        let terms = free_energy_terms(1e-6, &m, &m, &MatsubaraConfig::new(300.0), 1).unwrap();
        assert!((terms[0] + 2.0 * ZETA3).abs() < 1e-12, "{}", terms[0]);
    }

    #[test]
    fn ideal_metal_zero_t() {
        let m = lookup("ideal-metal").unwrap();
        let cfg = MatsubaraConfig::new(300.0);
        let a = 1e-6;
        let e = energy_zero_t(a, &m, &m, &cfg).unwrap();
        let exact = -PI * PI / 720.0 * HBARC_J_M / a.powi(3);
        assert!(((e.value - exact) / exact).abs() < 1e-9, "{} {}", e.value, exact);
        let p = force_zero_t(a, &m, &m, &cfg).unwrap();
        let exact = -PI * PI / 240.0 * HBARC_J_M / a.powi(4);
        assert!(((p.value - exact) / exact).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = lookup("ideal-metal").unwrap();
        let cfg = MatsubaraConfig::new(300.0);
        assert!(matches!(pressure(0.0, &m, &m, &cfg), Err(CasimirError::Domain(_))));
        assert!(pressure(1e-6, &m, &m, &cfg.with_temperature(0.0)).is_err());
        assert!(pressure(1e-6, &m, &m, &cfg.with_rel_tol(0.1)).is_err());
    }
}
