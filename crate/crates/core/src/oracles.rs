//! Closed-form and asymptotic results used to check the Matsubara engine.
//!
//! Everything here is evaluated independently of [`crate::lifshitz`]: the
//! integrals go through the adaptive Gauss-Kronrod integrator, never through
//! the engine's panel quadrature.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, CasimirError, Result};
use crate::materials::OscillatorSet;
use crate::quadrature::adaptive;
use crate::units::{HBARC_EV_M, HBARC_J_M, KB_J_K, ZETA3, ZETA5};

/// ζ(1 − m) = −B_m/m for m = 2..=17 (zero for odd m ≥ 3).
const ZETA_NEGATIVE: [f64; 16] = [
    -1.0 / 12.0,
    0.0,
    1.0 / 120.0,
    0.0,
    -1.0 / 252.0,
    0.0,
    1.0 / 240.0,
    0.0,
    -1.0 / 132.0,
    0.0,
    691.0 / 32760.0,
    0.0,
    -1.0 / 12.0,
    0.0,
    3617.0 / 8160.0,
    0.0,
];
const ZETA2: f64 = PI * PI / 6.0;

/// Trilogarithm Li₃(x) = Σ xⁿ/n³ on [0, 1].
pub fn polylog3(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("polylog3 needs 0 <= x <= 1, got {x}"));
    }
    if x == 1.0 {
        return Ok(ZETA3);
    }
    if x <= 0.5 {
        let mut term = x;
        let mut sum = 0.0;
        for n in 1..=60 {
            let nf = n as f64;
            sum += term / (nf * nf * nf);
            term *= x;
            if term < 1e-18 {
                break;
            }
        }
        return Ok(sum);
    }
    // Expansion about x = 1 in μ = ln x (|μ| ≤ ln 2).
    let mu = x.ln();
    let mut sum = ZETA3 + ZETA2 * mu + 0.5 * mu * mu * (1.5 - (-mu).ln());
    // k = 3 term: ζ(0) μ³/3!.
    let mut power = mu * mu * mu / 6.0;
    sum += -0.5 * power;
    for (i, z) in ZETA_NEGATIVE.iter().enumerate() {
        let k = (i + 4) as f64;
        power *= mu / k;
        sum += z * power;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalKind {
    IdealMetal,
    Drude,
    Plasma,
    IdealDielectric,
    RealDielectric,
}

/// Model parameters some classical limits need.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ClassicalAux {
    /// Plasma frequency, eV.
    pub omega_p: Option<f64>,
    /// Static permittivity ε(0).
    pub eps0: Option<f64>,
}

/// Zero-frequency TE coefficient of the plasma model in κ = 2a·k⊥ with
/// Ω = 2a·ω_p/(ħc): (κ − √(κ² + Ω²))/(κ + √(κ² + Ω²)).
fn plasma_rte(kappa: f64, omega: f64) -> f64 {
    let s = kappa.hypot(omega);
    -(omega * omega) / ((kappa + s) * (kappa + s))
}

fn check_a_t(a: f64, t: f64) -> Result<()> {
    if !(a > 0.0 && t > 0.0) {
        return domain(format!("need a > 0 and T > 0, got a = {a}, T = {t}"));
    }
    Ok(())
}

/// ∫_0^∞ κ ln(1 − r(κ)² e^{−κ}) dκ and ∫_0^∞ κ² r²e^{−κ}/(1 − r²e^{−κ}) dκ
/// for the plasma zero-frequency TE coefficient.
fn plasma_te_integrals(omega: f64) -> Result<(f64, f64)> {
    let energy = adaptive(
        |k| {
            let r = plasma_rte(k, omega);
            k * (-(r * r) * (-k).exp()).ln_1p()
        },
        0.0,
        200.0,
        1e-15,
        1e-12,
    )?;
    let force = adaptive(
        |k| {
            let x = plasma_rte(k, omega).powi(2) * (-k).exp();
            k * k * x / (1.0 - x)
        },
        0.0,
        200.0,
        1e-15,
        1e-12,
    )?;
    Ok((energy.value, force.value))
}

/// Large-separation (zero-frequency dominated) free energy (J/m²) and
/// pressure (N/m²).
pub fn classical_limit(kind: ClassicalKind, a: f64, t: f64, aux: ClassicalAux) -> Result<(f64, f64)> {
    check_a_t(a, t)?;
    let kt = KB_J_K * t;
    let ideal = (-kt * ZETA3 / (8.0 * PI * a * a), -kt * ZETA3 / (4.0 * PI * a.powi(3)));
    Ok(match kind {
        ClassicalKind::IdealMetal => ideal,
        ClassicalKind::Drude | ClassicalKind::RealDielectric => (0.5 * ideal.0, 0.5 * ideal.1),
        ClassicalKind::Plasma => {
            let wp = aux
                .omega_p
                .ok_or_else(|| CasimirError::Config("plasma limit needs omega_p".into()))?;
            let omega = 2.0 * a * wp / HBARC_EV_M;
            let (ie, ip) = plasma_te_integrals(omega)?;
            (
                0.5 * ideal.0 + kt / (16.0 * PI * a * a) * ie,
                0.5 * ideal.1 - kt / (16.0 * PI * a.powi(3)) * ip,
            )
        }
        ClassicalKind::IdealDielectric => {
            let eps0 = aux
                .eps0
                .ok_or_else(|| CasimirError::Config("ideal dielectric limit needs eps0".into()))?;
            if !(eps0 >= 1.0) {
                return Err(CasimirError::Config(format!("eps0 must be >= 1, got {eps0}")));
            }
            let r = (eps0 - 1.0) / (eps0 + 1.0);
            let li = polylog3(r * r)?;
            (-kt / (16.0 * PI * a * a) * li, -kt / (8.0 * PI * a.powi(3)) * li)
        }
    })
}

/// Low-temperature behaviour of an entropy: S ≈ leading_value·T^p + next_term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyExpansion {
    /// Sum of all available terms, J/(m²K).
    pub value: Option<f64>,
    /// Leading term at the requested T; `None` when the coefficient is only
    /// known structurally.
    pub leading_value: Option<f64>,
    /// Exponent of T in the leading term; 0 marks a nonzero T → 0 limit.
    pub leading_power: f64,
    /// Next correction at the requested T, when known.
    pub next_term: Option<f64>,
    /// Sign of the leading coefficient when known.
    pub leading_sign: Option<i8>,
    pub warning: Option<String>,
}

impl EntropyExpansion {
    fn structural(power: f64, sign: Option<i8>) -> Self {
        Self {
            value: None,
            leading_value: None,
            leading_power: power,
            next_term: None,
            leading_sign: sign,
            warning: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetalEntropyKind {
    PlasmaLowT,
    DrudeT0Integral,
    DrudeT0Series,
    NonlocalPerfect,
    NonlocalImpurity,
    DrudeImpurity,
}

/// Skin-depth ratio above which the series forms lose accuracy.
pub const SKIN_DEPTH_LIMIT: f64 = 0.2;

/// Asymptotic entropy of metallic plates. `omega_p` (eV) is needed by the
/// plasma and perfect-lattice Drude kinds.
pub fn metal_entropy_asymptotics(kind: MetalEntropyKind, a: f64, t: f64, omega_p: f64) -> Result<EntropyExpansion> {
    if !(a > 0.0) {
        return domain(format!("separation must be positive, got {a}"));
    }
    let needs_wp = matches!(
        kind,
        MetalEntropyKind::PlasmaLowT | MetalEntropyKind::DrudeT0Integral | MetalEntropyKind::DrudeT0Series
    );
    if needs_wp && !(omega_p > 0.0) {
        return Err(CasimirError::Config("omega_p must be positive".into()));
    }
    let delta = HBARC_EV_M / omega_p / a;
    let warning = (delta >= SKIN_DEPTH_LIMIT)
        .then(|| format!("skin depth ratio {delta:.3} is not small; series inaccurate"));
    let drude_scale = -KB_J_K * ZETA3 / (16.0 * PI * a * a);
    Ok(match kind {
        MetalEntropyKind::PlasmaLowT => {
            if !(t >= 0.0) {
                return domain("temperature must be non-negative");
            }
            let pref = KB_J_K.powi(3) * t * t / (PI * HBARC_J_M * HBARC_J_M);
            let x = a * KB_J_K * t / HBARC_J_M;
            let leading = pref * 1.5 * ZETA3;
            let rest = pref
                * (-4.0 * PI.powi(3) * x / 45.0
                    + delta * (3.0 * ZETA3 - 16.0 * PI.powi(3) * x / 45.0)
                    - delta * delta * 20.0 * ZETA5 * x * x);
            EntropyExpansion {
                value: Some(leading + rest),
                leading_value: Some(leading),
                leading_power: 2.0,
                next_term: Some(rest),
                leading_sign: Some(1),
                warning,
            }
        }
        MetalEntropyKind::DrudeT0Integral => {
            let omega = 2.0 * a * omega_p / HBARC_EV_M;
            let (ie, _) = plasma_te_integrals(omega)?;
            let v = KB_J_K / (16.0 * PI * a * a) * ie;
            EntropyExpansion {
                value: Some(v),
                leading_value: Some(v),
                leading_power: 0.0,
                next_term: None,
                leading_sign: Some(-1),
                warning: None,
            }
        }
        MetalEntropyKind::DrudeT0Series => EntropyExpansion {
            value: Some(drude_scale * (1.0 - 4.0 * delta + 12.0 * delta * delta)),
            leading_value: Some(drude_scale),
            leading_power: 0.0,
            next_term: Some(drude_scale * (-4.0 * delta)),
            leading_sign: Some(-1),
            warning,
        },
        MetalEntropyKind::NonlocalPerfect => EntropyExpansion::structural(0.5, None),
        MetalEntropyKind::NonlocalImpurity => EntropyExpansion::structural(1.0, None),
        MetalEntropyKind::DrudeImpurity => EntropyExpansion::structural(1.0, Some(-1)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DielectricEntropyKind {
    IdealLowT,
    RealT0,
}

/// G = ħc Σ g_j γ_j/ω_j⁴, m.
pub fn relaxation_length(osc: &OscillatorSet) -> f64 {
    HBARC_EV_M * osc.relaxation_moment()
}

/// Asymptotic entropy of dielectric plates described by `osc`.
pub fn dielectric_entropy_asymptotics(
    kind: DielectricEntropyKind,
    a: f64,
    t: f64,
    osc: &OscillatorSet,
) -> Result<EntropyExpansion> {
    if !(a > 0.0) {
        return domain(format!("separation must be positive, got {a}"));
    }
    let eps0 = osc.static_permittivity();
    let r = (eps0 - 1.0) / (eps0 + 1.0);
    let li = polylog3(r * r)?;
    Ok(match kind {
        DielectricEntropyKind::RealT0 => {
            let v = KB_J_K / (16.0 * PI * a * a) * (ZETA3 - li);
            EntropyExpansion {
                value: Some(v),
                leading_value: Some(v),
                leading_power: 0.0,
                next_term: None,
                leading_sign: Some(1),
                warning: None,
            }
        }
        DielectricEntropyKind::IdealLowT => {
            if !(t >= 0.0) {
                return domain("temperature must be non-negative");
            }
            let pref = KB_J_K * KB_J_K * t / (2.0 * HBARC_J_M * a * a);
            let e2 = eps0 * eps0;
            let g = relaxation_length(osc);
            let first = if e2 > 1.0 { g * li / (3.0 * (e2 - 1.0)) } else { 0.0 };
            let second = 3.0 * ZETA3 * r * r * (e2 + 1.0) / (2.0 * PI) * a * a * KB_J_K * t / HBARC_J_M;
            let (leading, power, next) = if first > 0.0 {
                (pref * first, 1.0, Some(pref * second))
            } else {
                (pref * second, 2.0, None)
            };
            EntropyExpansion {
                value: Some(pref * (first + second)),
                leading_value: Some(leading),
                leading_power: power,
                next_term: next,
                leading_sign: Some(1),
                warning: None,
            }
        }
    })
}

/// Dilogarithm Li₂(x) = Σ xⁿ/n² for 0 ≤ x ≤ 0.9.
fn polylog2_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = 0.0f64;
    let mut n = 1.0f64;
    while term > 1e-18 * sum.max(1e-300) || n == 1.0 {
        sum += term / (n * n);
        n += 1.0;
        term *= x;
    }
    sum
}

/// dS/dT at T → 0 for damped dielectric plates, J/(m²K²), obtained from the
/// first Euler–Maclaurin correction to the Matsubara sum:
/// S ≈ k_B²T f′(0)/(12aħc), with f(ζ) ≈ −Li₃(r(ζ)²) and r the static TM
/// coefficient at ε(iξ). This gives k_B²G·Li₂(r₀²)/(6ħca²(ε₀² − 1)).
pub fn ideal_dielectric_entropy_slope(a: f64, osc: &OscillatorSet) -> Result<f64> {
    if !(a > 0.0) {
        return domain(format!("separation must be positive, got {a}"));
    }
    let eps0 = osc.static_permittivity();
    if !(eps0 > 1.0 && eps0.is_finite()) {
        return Ok(0.0);
    }
    let r = (eps0 - 1.0) / (eps0 + 1.0);
    let g = relaxation_length(osc);
    Ok(KB_J_K * KB_J_K * g * polylog2_series(r * r) / (6.0 * HBARC_J_M * a * a * (eps0 * eps0 - 1.0)))
}

/// Zero-temperature Casimir-Polder entropy of an atom with static
/// polarizability α(0) (m³) at distance a from a dielectric wall, J/K.
pub fn casimir_polder_entropy_t0(a: f64, alpha0: f64, eps0: f64) -> Result<f64> {
    if !(a > 0.0 && alpha0 > 0.0 && eps0 >= 1.0) {
        return domain(format!(
            "need a > 0, alpha0 > 0, eps0 >= 1; got {a}, {alpha0}, {eps0}"
        ));
    }
    let r0 = if eps0.is_infinite() { 1.0 } else { (eps0 - 1.0) / (eps0 + 1.0) };
    Ok(KB_J_K * alpha0 / (4.0 * a.powi(3)) * (1.0 - r0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::catalog;
    use approx::assert_relative_eq;

    fn direct_series(x: f64, n: usize) -> f64 {
        (1..=n).map(|k| x.powi(k as i32) / (k as f64).powi(3)).sum()
    }

    #[test]
    fn polylog_reference_points() {
        assert_eq!(polylog3(0.0).unwrap(), 0.0);
        assert_eq!(polylog3(1.0).unwrap(), ZETA3);
        // ε(0) = 3.81 gives r² = (2.81/4.81)² = 0.341289...
        let r2 = (2.81f64 / 4.81).powi(2);
        let v = polylog3(r2).unwrap();
        assert!((v - direct_series(r2, 40)).abs() < 1e-15);
        assert!((v - 0.357_58).abs() < 1e-5, "{v}");
        for x in [0.5000001, 0.6, 0.75, 0.9, 0.99] {
            let exact = direct_series(x, 20_000);
            assert!((polylog3(x).unwrap() - exact).abs() < 1e-12, "{x}");
        }
        assert!(polylog3(-0.1).is_err());
        assert!(polylog3(1.1).is_err());
    }

    #[test]
    fn ratio_of_dielectric_limits() {
        let (_, pi) = classical_limit(
            ClassicalKind::IdealDielectric,
            6e-6,
            300.0,
            ClassicalAux { eps0: Some(3.81), ..Default::default() },
        )
        .unwrap();
        let (_, pr) = classical_limit(ClassicalKind::RealDielectric, 6e-6, 300.0, ClassicalAux::default()).unwrap();
        assert!((pi / pr - 0.29747).abs() < 5e-5, "{}", pi / pr);
        assert!((pr / pi - 3.3616).abs() < 5e-4);
    }

    #[test]
    fn classical_reference_values() {
        let (f, p) = classical_limit(ClassicalKind::IdealMetal, 6e-6, 300.0, ClassicalAux::default()).unwrap();
        assert!((p + 1.834e-6).abs() < 5e-10, "{p}");
        assert!((f + 5.503e-12).abs() < 5e-15, "{f}");
        let (fd, pd) = classical_limit(ClassicalKind::Drude, 6e-6, 300.0, ClassicalAux::default()).unwrap();
        assert_eq!(fd, 0.5 * f);
        assert_eq!(pd, 0.5 * p);
        assert!(classical_limit(ClassicalKind::Plasma, 6e-6, 300.0, ClassicalAux::default()).is_err());
        assert!(classical_limit(ClassicalKind::IdealMetal, 0.0, 300.0, ClassicalAux::default()).is_err());
    }

    #[test]
    fn plasma_limit_approaches_ideal_metal() {
        let (_, pi) = classical_limit(ClassicalKind::IdealMetal, 6e-6, 300.0, ClassicalAux::default()).unwrap();
        let aux = ClassicalAux { omega_p: Some(900.0), ..Default::default() };
        let (_, pp) = classical_limit(ClassicalKind::Plasma, 6e-6, 300.0, aux).unwrap();
        assert!(((pp - pi) / pi).abs() < 5e-3);
        let aux = ClassicalAux { omega_p: Some(9.0), ..Default::default() };
        let (_, p9) = classical_limit(ClassicalKind::Plasma, 6e-6, 300.0, aux).unwrap();
        assert!(p9.abs() < pp.abs() && p9.abs() > 0.5 * pi.abs());
    }

    #[test]
    fn entropy_reference_values() {
        let s = metal_entropy_asymptotics(MetalEntropyKind::DrudeT0Series, 1e-6, 0.0, 1e9).unwrap();
        assert!((s.leading_value.unwrap() + 3.302e-13).abs() < 5e-16);
        let p = metal_entropy_asymptotics(MetalEntropyKind::PlasmaLowT, 1e-6, 10.0, 9.0).unwrap();
        assert!((p.leading_value.unwrap() - 1.511e-16).abs() < 5e-19, "{:?}", p);
        assert_eq!(p.leading_power, 2.0);
        let osc = catalog::silica_oscillators();
        let r = dielectric_entropy_asymptotics(DielectricEntropyKind::RealT0, 1e-6, 0.0, &osc).unwrap();
        assert!((r.value.unwrap() - 2.3195e-13).abs() < 5e-17, "{:?}", r);
        let big = OscillatorSet::from_contributions(&[(1e9, 1.0, 0.0)]).unwrap();
        let r = dielectric_entropy_asymptotics(DielectricEntropyKind::RealT0, 1e-6, 0.0, &big).unwrap();
        assert!(r.value.unwrap().abs() < 1e-20);
    }

    #[test]
    fn drude_integral_matches_series() {
        // δ0/a = 0.05.
        let a = 1e-6;
        let wp = HBARC_EV_M / (0.05 * a);
        let i = metal_entropy_asymptotics(MetalEntropyKind::DrudeT0Integral, a, 0.0, wp).unwrap();
        let s = metal_entropy_asymptotics(MetalEntropyKind::DrudeT0Series, a, 0.0, wp).unwrap();
        let (iv, sv) = (i.value.unwrap(), s.value.unwrap());
        assert!(iv < 0.0 && ((iv - sv) / iv).abs() < 0.01, "{iv} {sv}");
        let w = metal_entropy_asymptotics(MetalEntropyKind::DrudeT0Series, a, 0.0, HBARC_EV_M / (0.3 * a)).unwrap();
        assert!(w.warning.is_some());
    }

    #[test]
    fn ideal_dielectric_without_damping_is_quadratic() {
        let osc = OscillatorSet::from_contributions(&[(2.81, 10.0, 0.0)]).unwrap();
        assert_eq!(relaxation_length(&osc), 0.0);
        let e = dielectric_entropy_asymptotics(DielectricEntropyKind::IdealLowT, 1e-6, 1.0, &osc).unwrap();
        assert_eq!(e.leading_power, 2.0);
        let e2 = dielectric_entropy_asymptotics(DielectricEntropyKind::IdealLowT, 1e-6, 2.0, &osc).unwrap();
        assert_relative_eq!(e2.value.unwrap() / e.value.unwrap(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn dielectric_slope_versus_printed_form() {
        let osc = catalog::silica_oscillators();
        let slope = ideal_dielectric_entropy_slope(1e-6, &osc).unwrap();
        let e = dielectric_entropy_asymptotics(DielectricEntropyKind::IdealLowT, 1e-6, 1e-4, &osc).unwrap();
        // The two differ only by Li₂ against Li₃ of r₀² = 0.341289.
        let ratio = slope * 1e-4 / e.leading_value.unwrap();
        assert!((ratio - 0.375_93 / 0.357_58).abs() < 2e-4, "{ratio}");
        let r2 = (2.81f64 / 4.81).powi(2);
        let li2: f64 = (1..200).map(|n| r2.powi(n) / (n as f64).powi(2)).sum();
        assert!((polylog2_series(r2) - li2).abs() < 1e-15);
        let undamped = OscillatorSet::from_contributions(&[(2.81, 10.0, 0.0)]).unwrap();
        assert_eq!(ideal_dielectric_entropy_slope(1e-6, &undamped).unwrap(), 0.0);
    }

    #[test]
    fn casimir_polder_limits() {
        let base = KB_J_K * 1e-30 / (4.0 * 1e-18);
        assert_relative_eq!(casimir_polder_entropy_t0(1e-6, 1e-30, 1.0).unwrap(), base, max_relative = 1e-14);
        assert_eq!(casimir_polder_entropy_t0(1e-6, 1e-30, f64::INFINITY).unwrap(), 0.0);
        let v = casimir_polder_entropy_t0(1e-6, 1e-30, 3.81).unwrap() / base;
        assert!((v - 0.41580).abs() < 5e-6);
        assert!(casimir_polder_entropy_t0(0.0, 1e-30, 3.81).is_err());
    }
}
