use casimir_core::geometry::{
    beta_corrected_gradient, pfa_force, pfa_gradient, roughness_corrected_gradient, SpherePlate,
};
use casimir_core::lifshitz::{energy_zero_t, force_zero_t, free_energy, pressure, MatsubaraConfig};
use casimir_core::materials::catalog::lookup;
use proptest::prelude::*;

fn rel(x: f64, y: f64) -> f64 {
    (x / y - 1.0).abs()
}

#[test]
fn pfa_examples() {
    let sp = SpherePlate::new(150e-6, 6e-6).unwrap();
    assert!(rel(pfa_force(&sp, -5.503e-12).value, -5.186e-15) < 1e-3);
    assert_eq!(pfa_force(&sp, 0.0).value, 0.0);
    let sp = SpherePlate::new(150e-6, 1e-6).unwrap();
    assert!(rel(pfa_gradient(&sp, -1.3001e-3).value, 1.2254e-6) < 1e-4);
    assert_eq!(pfa_gradient(&sp, 0.0).value, 0.0);
}

#[test]
fn drude_gradient_is_half_at_large_separation() {
    let cfg = MatsubaraConfig::new(300.0);
    let sp = SpherePlate::new(150e-6, 6e-6).unwrap();
    let g = |name: &str| {
        let mm = lookup(name).unwrap();
        pfa_gradient(&sp, pressure(6e-6, &mm, &mm, &cfg).unwrap().value).value
    };
    assert!((g("drude:au") / g("ideal-metal") - 0.5).abs() < 0.005);
}

#[test]
fn gradient_is_the_derivative_of_force() {
    let r = 100e-6;
    let check = |force: &dyn Fn(f64) -> f64, grad: f64, a: f64| {
        let h = 1e-3 * a;
        let numeric = (force(a + h) - force(a - h)) / (2.0 * h);
        assert!(rel(numeric, grad) < 1e-3, "{numeric} {grad}");
    };
    let im = lookup("ideal-metal").unwrap();
    let c0 = MatsubaraConfig::new(0.0);
    let a = 1e-6;
    let f = |x: f64| pfa_force(&SpherePlate::new(r, x).unwrap(), energy_zero_t(x, &im, &im, &c0).unwrap().value).value;
    let g = pfa_gradient(&SpherePlate::new(r, a).unwrap(), force_zero_t(a, &im, &im, &c0).unwrap().value).value;
    check(&f, g, a);

    let pl = lookup("plasma:au").unwrap();
    let c = MatsubaraConfig::new(300.0);
    let a = 3e-7;
    let f = |x: f64| pfa_force(&SpherePlate::new(r, x).unwrap(), free_energy(x, &pl, &pl, &c).unwrap().value).value;
    let g = pfa_gradient(&SpherePlate::new(r, a).unwrap(), pressure(a, &pl, &pl, &c).unwrap().value).value;
    check(&f, g, a);
}

#[test]
fn correction_factor_examples() {
    let a = 1e-7;
    let sp = SpherePlate::new(1e-4, a).unwrap();
    assert_eq!(beta_corrected_gradient(&sp, 2.5), 2.5);
    assert_eq!(roughness_corrected_gradient(&sp, 2.5).value, 2.5);
    let sp = sp.with_roughness(0.1 * a, 0.0).unwrap();
    assert!((roughness_corrected_gradient(&sp, 1.0).value - 1.1105).abs() < 1e-12);
    let d = (0.0005f64).sqrt() * a;
    let sp = sp.with_roughness(d, d).unwrap();
    assert!((roughness_corrected_gradient(&sp, 1.0).value - 1.010105).abs() < 1e-12);
    let sp = SpherePlate::new(1.0, 0.004).unwrap();
    assert!((beta_corrected_gradient(&sp.with_beta(-0.40), 1.0) - 0.9984).abs() < 1e-12);
    assert!((beta_corrected_gradient(&sp.with_beta(-0.55), 1.0) - 0.9978).abs() < 1e-12);
}

#[test]
fn out_of_range_geometry_is_flagged_or_rejected() {
    assert!(SpherePlate::new(0.0, 1e-6).is_err());
    assert!(SpherePlate::new(1e-4, 0.0).is_err());
    let sp = SpherePlate::new(1e-5, 5e-6).unwrap();
    assert!(!pfa_gradient(&sp, -1.0).warnings.is_empty());
    let sp = SpherePlate::new(1e-4, 1e-7).unwrap().with_roughness(5e-8, 0.0).unwrap();
    assert!(!roughness_corrected_gradient(&sp, 1.0).warnings.is_empty());
}

proptest! {
    #[test]
    fn roughness_raises_and_negative_beta_lowers(
        r in 1e-5f64..1e-3,
        a in 1e-8f64..1e-6,
        d in 0.0f64..0.2,
        beta in -0.6f64..-0.01,
        g in 1e-9f64..1e-3,
    ) {
        let sp = SpherePlate::new(r, a).unwrap().with_beta(beta).with_roughness(d * a, 0.5 * d * a).unwrap();
        prop_assert!(roughness_corrected_gradient(&sp, g).value >= g);
        prop_assert!(beta_corrected_gradient(&sp, g) < g);
    }
}
