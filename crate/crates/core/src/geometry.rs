//! Sphere-plate quantities from plate-plate results by the proximity force
//! approximation, with the first-order PFA correction and perturbative
//! stochastic roughness.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};

/// Largest a/R treated as inside the PFA regime.
pub const MAX_SEPARATION_RATIO: f64 = 0.1;
/// Largest roughness amplitude, as a fraction of a, for the perturbative form.
pub const MAX_ROUGHNESS_RATIO: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpherePlate {
    /// Sphere radius R, m.
    pub radius: f64,
    /// Closest separation a, m.
    pub separation: f64,
    /// First-order PFA correction coefficient β.
    pub beta: f64,
    /// rms roughness amplitudes (δ1, δ2) of the two surfaces, m.
    pub roughness: (f64, f64),
}

/// A value with any regime warnings raised while computing it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flagged {
    pub value: f64,
    pub warnings: Vec<String>,
}

impl SpherePlate {
    pub fn new(radius: f64, separation: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && separation > 0.0 && separation.is_finite()) {
            return domain(format!(
                "radius and separation must be positive, got R = {radius}, a = {separation}"
            ));
        }
        Ok(Self {
            radius,
            separation,
            beta: 0.0,
            roughness: (0.0, 0.0),
        })
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_roughness(mut self, delta1: f64, delta2: f64) -> Result<Self> {
        if !(delta1 >= 0.0 && delta2 >= 0.0 && delta1.is_finite() && delta2.is_finite()) {
            return domain("roughness amplitudes must be finite and non-negative");
        }
        self.roughness = (delta1, delta2);
        Ok(self)
    }

    pub fn with_separation(mut self, separation: f64) -> Result<Self> {
        Self::new(self.radius, separation)?;
        self.separation = separation;
        Ok(self)
    }

    fn pfa_warnings(&self) -> Vec<String> {
        let ratio = self.separation / self.radius;
        let mut w = Vec::new();
        if ratio >= MAX_SEPARATION_RATIO {
            w.push(format!("a/R = {ratio:.3} is outside the PFA regime (< {MAX_SEPARATION_RATIO})"));
        }
        w
    }

    fn roughness_warnings(&self) -> Vec<String> {
        let (d1, d2) = self.roughness;
        let limit = MAX_ROUGHNESS_RATIO * self.separation;
        if d1 >= limit || d2 >= limit {
            vec![format!(
                "roughness ({d1:e}, {d2:e}) m is not small against a/5 = {limit:e} m"
            )]
        } else {
            Vec::new()
        }
    }

    /// (δ1² + δ2²)/a².
    pub fn roughness_parameter(&self) -> f64 {
        let (d1, d2) = self.roughness;
        (d1 * d1 + d2 * d2) / (self.separation * self.separation)
    }

    /// 1 + 10s + 105s² with s = (δ1² + δ2²)/a².
    pub fn roughness_factor(&self) -> f64 {
        let s = self.roughness_parameter();
        1.0 + 10.0 * s + 105.0 * s * s
    }

    /// 1 + β·a/R.
    pub fn beta_factor(&self) -> f64 {
        1.0 + self.beta * self.separation / self.radius
    }
}

/// Sphere-plate force 2πR·ℱ(a), N, from the plate free energy per area.
pub fn pfa_force(sp: &SpherePlate, free_energy_per_area: f64) -> Flagged {
    Flagged {
        value: 2.0 * PI * sp.radius * free_energy_per_area,
        warnings: sp.pfa_warnings(),
    }
}

/// Sphere-plate force gradient −2πR·P(a), N/m, from the plate pressure.
pub fn pfa_gradient(sp: &SpherePlate, pressure: f64) -> Flagged {
    Flagged {
        value: -2.0 * PI * sp.radius * pressure,
        warnings: sp.pfa_warnings(),
    }
}

pub fn beta_corrected_gradient(sp: &SpherePlate, pfa_gradient_value: f64) -> f64 {
    pfa_gradient_value * sp.beta_factor()
}

pub fn roughness_corrected_gradient(sp: &SpherePlate, gradient: f64) -> Flagged {
    Flagged {
        value: gradient * sp.roughness_factor(),
        warnings: sp.roughness_warnings(),
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn corrections_commute(r in 1e-5f64..1e-3, a in 1e-8f64..1e-6, beta in -0.6f64..0.0,
                               d1 in 0.0f64..0.1, d2 in 0.0f64..0.1, g in 1e-9f64..1e-3) {
            let sp = SpherePlate::new(r, a).unwrap().with_beta(beta)
                .with_roughness(d1 * a, d2 * a).unwrap();
            let x = roughness_corrected_gradient(&sp, beta_corrected_gradient(&sp, g)).value;
            let y = beta_corrected_gradient(&sp, roughness_corrected_gradient(&sp, g).value);
            prop_assert!((x - y).abs() <= 1e-15 * x.abs());
            prop_assert!(sp.roughness_factor() >= 1.0);
            prop_assert!(beta_corrected_gradient(&sp, g) <= g);
        }
    }
}
