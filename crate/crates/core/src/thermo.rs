//! Casimir entropy by temperature differentiation, thermal corrections and
//! Nernst heat theorem scans.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, CasimirError, Result};
use crate::lifshitz::{force_zero_t, free_energy, pressure, MatsubaraConfig};
use crate::materials::MaterialModel;
use crate::units::{HBARC_J_M, KB_J_K, ZETA3};

/// Engine tolerance used for the free energies inside a finite difference.
pub const ENTROPY_REL_TOL: f64 = 1e-11;
/// Finite-difference step as a fraction of T.
pub const FD_STEP_FRACTION: f64 = 0.05;

/// k_Bζ(3)/(16πa²), the natural entropy scale at separation a, J/(m²K).
pub fn entropy_scale(a: f64) -> f64 {
    KB_J_K * ZETA3 / (16.0 * PI * a * a)
}

/// Entropies below this are indistinguishable from zero, J/(m²K).
pub fn entropy_noise_floor(a: f64) -> f64 {
    1e-9 * entropy_scale(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropySample {
    pub temperature: f64,
    /// S = −∂ℱ/∂T, J/(m²K).
    pub entropy: f64,
    pub fd_step: f64,
    pub fd_error_estimate: f64,
    /// Set when the finite-difference error is not below 1% of
    /// max(|S|, noise floor).
    pub inconclusive: bool,
}

/// Casimir entropy per unit area at separation `a` and temperature `t`.
///
/// Central differences with steps h and h/2 (h = T/20) are combined by
/// Richardson extrapolation. γ(T) and σ0(T) follow T inside the difference.
pub fn entropy(a: f64, t: f64, m1: &MaterialModel, m2: &MaterialModel, cfg: &MatsubaraConfig) -> Result<EntropySample> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("separation must be positive, got {a}"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("temperature must be positive, got {t}"));
    }
    let base = cfg.with_rel_tol(cfg.rel_tol.min(ENTROPY_REL_TOL));
    let h = FD_STEP_FRACTION * t;
    let points = [t - h, t + h, t - 0.5 * h, t + 0.5 * h];
    let f: Vec<f64> = points
        .par_iter()
        .map(|&tt| free_energy(a, m1, m2, &base.with_temperature(tt)).map(|r| r.value))
        .collect::<Result<_>>()?;
    let d1 = (f[0] - f[1]) / (2.0 * h);
    let d2 = (f[2] - f[3]) / h;
    let s = (4.0 * d2 - d1) / 3.0;
    let err = (d2 - d1).abs() / 3.0;
    Ok(EntropySample {
        temperature: t,
        entropy: s,
        fd_step: h,
        fd_error_estimate: err,
        inconclusive: !(err < 0.01 * s.abs().max(entropy_noise_floor(a))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// [P(a,T) − P(a,0)]/P(a,T).
    AtT,
    /// [P(a,T) − P(a,0)]/P(a,0).
    AtZero,
}

/// Relative thermal correction to the pressure. The zero-temperature
/// pressure uses the material parameters at T.
pub fn thermal_correction(
    a: f64,
    t: f64,
    m1: &MaterialModel,
    m2: &MaterialModel,
    cfg: &MatsubaraConfig,
    convention: Convention,
) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("temperature must be positive, got {t}"));
    }
    let c = cfg.with_temperature(t);
    let pt = pressure(a, m1, m2, &c)?.value;
    let p0 = force_zero_t(a, m1, m2, &c)?.value;
    let denom = match convention {
        Convention::AtT => pt,
        Convention::AtZero => p0,
    };
    // Ideal-metal zero-temperature pressure magnitude as the scale.
    let scale = PI * PI * HBARC_J_M / (240.0 * a.powi(4));
    if !(denom.abs() > 1e-12 * scale) {
        return Err(CasimirError::Degenerate(format!(
            "pressure {denom:e} N/m^2 is too small to normalize by"
        )));
    }
    Ok((pt - p0) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NernstReport {
    /// Estimated S(T → 0), J/(m²K).
    pub limit_estimate: f64,
    /// p in S − S(0) ∝ T^p.
    pub fitted_exponent: f64,
    pub verdict: Verdict,
    /// |S(0)| below this counts as zero, J/(m²K).
    pub threshold: f64,
    pub samples: Vec<EntropySample>,
}

/// Descending log grid from `t_high` over `decades` decades with
/// `per_decade` points per decade.
pub fn log_grid(t_high: f64, decades: f64, per_decade: usize) -> Vec<f64> {
    let n = (decades * per_decade as f64).round() as usize;
    (0..=n).map(|i| t_high * 10f64.powf(-(i as f64) / per_decade as f64)).collect()
}

/// 13 points over two decades below `t_high`.
pub fn default_grid(t_high: f64) -> Vec<f64> {
    log_grid(t_high, 2.0, 6)
}

/// Weighted least squares of S ≈ s0 + c1·T^p + c2·T^(p+1/2) at fixed p;
/// returns (s0, rss).
fn fit_fixed_power(ts: &[f64], ss: &[f64], ws: &[f64], p: f64) -> (f64, f64) {
    let basis = |t: f64| [1.0, t.powf(p), t.powf(p + 0.5)];
    let mut m = [[0.0f64; 4]; 3];
    for ((&t, &s), &w) in ts.iter().zip(ss).zip(ws) {
        let b = basis(t);
        let w2 = w * w;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += w2 * b[i] * b[j];
            }
            m[i][3] += w2 * b[i] * s;
        }
    }
    let coef = solve3(m);
    let rss = ts
        .iter()
        .zip(ss)
        .zip(ws)
        .map(|((&t, &s), &w)| {
            let b = basis(t);
            (w * (s - coef[0] - coef[1] * b[1] - coef[2] * b[2])).powi(2)
        })
        .sum();
    (coef[0], rss)
}

/// Gaussian elimination with partial pivoting on an augmented 3×4 system.
/// Singular directions get a zero coefficient.
fn solve3(mut m: [[f64; 4]; 3]) -> [f64; 3] {
    let scale = m.iter().map(|r| r[0].abs().max(r[1].abs()).max(r[2].abs())).fold(0.0, f64::max);
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(col, piv);
        if m[col][col].abs() <= 1e-14 * scale {
            continue;
        }
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        if m[i][i].abs() <= 1e-14 * scale {
            continue;
        }
        let rest: f64 = (i + 1..3).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][3] - rest) / m[i][i];
    }
    x
}

/// S0 from a fit of S = S0 + C1·T^p + C2·T^(p+1/2) with p free. Each sample is weighted by the
/// inverse of its magnitude so every decade counts.
fn fit_limit(ts: &[f64], ss: &[f64], floor: f64) -> f64 {
    let ws: Vec<f64> = ss.iter().map(|s| 1.0 / s.abs().max(floor)).collect();
    // Normalize T so T^p stays well scaled.
    let tmax = ts.iter().cloned().fold(0.0, f64::max);
    let tn: Vec<f64> = ts.iter().map(|t| t / tmax).collect();
    let rss = |p: f64| fit_fixed_power(&tn, ss, &ws, p).1;
    let (mut best_p, mut best) = (0.0, f64::INFINITY);
    let mut p = 0.05;
    while p <= 4.0 {
        let r = rss(p);
        if r < best {
            best = r;
            best_p = p;
        }
        p += 0.05;
    }
    // Golden-section refinement around the grid minimum.
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = ((best_p - 0.05).max(0.01), best_p + 0.05);
    for _ in 0..60 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if rss(x1) < rss(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let p = 0.5 * (lo + hi);
    fit_fixed_power(&tn, ss, &ws, p).0
}

/// Least-squares slope of ln|S − S0| against ln T over the given samples.
fn log_slope(ts: &[f64], ss: &[f64], s0: f64) -> f64 {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(ss)
        .filter(|(_, &s)| s != s0)
        .map(|(&t, &s)| (t.ln(), (s - s0).abs().ln()))
        .collect();
    let n = pts.len() as f64;
    if n < 2.0 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Entropy on a descending temperature grid, the fitted T → 0 limit and
/// the Nernst verdict.
pub fn nernst_scan(
    a: f64,
    m1: &MaterialModel,
    m2: &MaterialModel,
    t_grid: &[f64],
    cfg: &MatsubaraConfig,
) -> Result<NernstReport> {
    if t_grid.len() < 6 {
        return Err(CasimirError::Config("temperature grid needs at least 6 points".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] < w[0])) || !(t_grid[t_grid.len() - 1] > 0.0) {
        return Err(CasimirError::Config(
            "temperature grid must be strictly descending and positive".into(),
        ));
    }
    if t_grid[0] / t_grid[t_grid.len() - 1] < 100.0 * (1.0 - 1e-12) {
        return Err(CasimirError::Config("temperature grid must span at least two decades".into()));
    }
    let samples: Vec<EntropySample> = t_grid
        .par_iter()
        .map(|&t| entropy(a, t, m1, m2, cfg))
        .collect::<Result<_>>()?;
    let floor = entropy_noise_floor(a);
    let threshold = 1e-3 * entropy_scale(a);
    let ts: Vec<f64> = samples.iter().map(|s| s.temperature).collect();
    let ss: Vec<f64> = samples.iter().map(|s| s.entropy).collect();
    let s0 = fit_limit(&ts, &ss, floor);
    // Exponent from the low-temperature half of the grid.
    let half = (samples.len() / 2).max(3);
    let low = samples.len() - half;
    let mut limit = s0;
    if limit.abs() < floor {
        limit = 0.0;
    }
    let exponent = log_slope(&ts[low..], &ss[low..], limit);
    let noisy = samples[samples.len() - 1].inconclusive;
    let verdict = if noisy {
        Verdict::Inconclusive
    } else if limit.abs() >= threshold {
        Verdict::Violated
    } else if exponent > 0.0 {
        Verdict::Satisfied
    } else {
        Verdict::Inconclusive
    };
    Ok(NernstReport {
        limit_estimate: limit,
        fitted_exponent: exponent,
        verdict,
        threshold,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_limit() {
        let ts: Vec<f64> = log_grid(10.0, 2.5, 8);
        let ss: Vec<f64> = ts.iter().map(|t| -3.0 + 2.0 * t.powf(1.5)).collect();
        assert!((fit_limit(&ts, &ss, 1e-30) + 3.0).abs() < 1e-6);
        let ss: Vec<f64> = ts.iter().map(|t| 5e-17 * t * t).collect();
        assert!(fit_limit(&ts, &ss, 1e-30).abs() < 1e-22);
        assert!((log_slope(&ts, &ss, 0.0) - 2.0).abs() < 1e-12);
        // linear law with a T^(3/2) correction, as for residual relaxation
        let ts = log_grid(1e-4, 2.0, 6);
        let ss: Vec<f64> = ts.iter().map(|t| -4.5e-10 * t * (1.0 - 40.0 * t.sqrt())).collect();
        assert!(fit_limit(&ts, &ss, 1e-30).abs() < 1e-3 * ss[ss.len() - 1].abs());
    }

    #[test]
    fn grid_rules() {
        let m = MaterialModel::ideal_metal();
        let cfg = MatsubaraConfig::default();
        assert!(nernst_scan(1e-6, &m, &m, &[3.0, 2.0, 1.0], &cfg).is_err());
        assert!(nernst_scan(1e-6, &m, &m, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &cfg).is_err());
        let narrow: Vec<f64> = (0..8).map(|i| 10.0 - i as f64).collect();
        assert!(nernst_scan(1e-6, &m, &m, &narrow, &cfg).is_err());
        assert!(entropy(1e-6, 0.0, &m, &m, &cfg).is_err());
        assert!(entropy(-1.0, 1.0, &m, &m, &cfg).is_err());
    }
}
