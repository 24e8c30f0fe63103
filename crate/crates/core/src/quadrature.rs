//! Quadrature rules used by the Lifshitz engine and by the oracles.
//!
//! The engine integrates with composite Gauss-Legendre panels on a
//! logarithmically mapped variable, which keeps the computed value a smooth
//! function of the integration limits (needed for finite differences in T).
//! The oracles use a separate globally adaptive Gauss-Kronrod integrator.

use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{CasimirError, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over [a, b] with a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Mapped nodes and weights for [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, w * half))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 16-point rule.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Shared 8-point rule, used as the embedded error estimator.
pub fn gl8() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Composite Gauss-Legendre on `panels` equal panels of [a, b].
///
/// The error estimate is the difference between the 16- and 8-point results
/// on the same panels.
pub fn composite<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> Estimate {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut hi = 0.0;
    let mut lo = 0.0;
    for p in 0..panels {
        let pa = a + width * p as f64;
        let pb = if p + 1 == panels { b } else { pa + width };
        hi += gl16().integrate(&mut f, pa, pb);
        lo += gl8().integrate(&mut f, pa, pb);
    }
    Estimate {
        value: hi,
        error: (hi - lo).abs(),
    }
}

/// ∫_lo^hi f(x) dx for 0 < lo < hi, integrated in u = ln(x/lo) with panels
/// no wider than `max_width` in u.
///
/// Functions with logarithmic or power-law structure near `lo` become smooth
/// in u, and the panel layout depends continuously on (lo, hi).
pub fn log_mapped<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, max_width: f64) -> Estimate {
    debug_assert!(lo > 0.0 && hi > lo);
    let range = (hi / lo).ln();
    let panels = (range / max_width).ceil().max(1.0) as usize;
    composite(
        |u| {
            let x = lo * u.exp();
            f(x) * x
        },
        0.0,
        range,
        panels,
    )
}

/// Panel boundaries on [lo, hi] growing geometrically (ratio e^`ln_width`)
/// but never wider than `lin_width`.
pub fn graded_panels(lo: f64, hi: f64, ln_width: f64, lin_width: f64) -> Vec<(f64, f64)> {
    debug_assert!(lo > 0.0 && ln_width > 0.0 && lin_width > 0.0);
    let growth = ln_width.exp();
    let mut out = Vec::new();
    let mut x = lo;
    while x < hi {
        let next = (x * growth).min(x + lin_width).min(hi);
        out.push((x, next));
        x = next;
    }
    out
}

/// The panels of `graded_panels(anchor, ∞, ..)` clipped to [lo, hi]. Panel
/// boundaries stay put when lo or hi move, so integrals over nearby ranges
/// share almost all of their nodes.
pub fn anchored_panels(anchor: f64, lo: f64, hi: f64, ln_width: f64, lin_width: f64) -> Vec<(f64, f64)> {
    debug_assert!(anchor > 0.0 && lo >= anchor);
    let growth = ln_width.exp();
    let mut out = Vec::new();
    let mut x = anchor;
    while x < hi {
        let next = (x * growth).min(x + lin_width);
        if next > lo {
            out.push((x.max(lo), next.min(hi)));
        }
        x = next;
    }
    out
}

/// Nodes and weights of the 16- and 8-point rules on each panel, with the
/// rules applied in u = ln x inside every panel.
pub fn graded_nodes(panels: &[(f64, f64)]) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let map = |rule: &GaussLegendre| {
        let mut v = Vec::with_capacity(panels.len() * rule.len());
        for &(a, b) in panels {
            for (u, w) in rule.mapped(0.0, (b / a).ln()) {
                let x = a * u.exp();
                v.push((x, w * x));
            }
        }
        v
    };
    (map(gl16()), map(gl8()))
}

/// ∫ f over graded panels of [lo, hi]; error is the 16/8-point difference.
pub fn graded<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    ln_width: f64,
    lin_width: f64,
) -> Estimate {
    let mut hi_sum = KahanSum::new();
    let mut err = 0.0;
    for (a, b) in graded_panels(lo, hi, ln_width, lin_width) {
        let range = (b / a).ln();
        let mut g = |u: f64| {
            let x = a * u.exp();
            f(x) * x
        };
        let h = gl16().integrate(&mut g, 0.0, range);
        let l = gl8().integrate(&mut g, 0.0, range);
        hi_sum.add(h);
        err += (h - l).abs();
    }
    Estimate {
        value: hi_sum.value(),
        error: err,
    }
}

/// Compensated (Neumaier) summation accumulator. Order-dependent, so callers
/// feed terms in a fixed order to keep results deterministic.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        resk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    Estimate {
        value: resk * half,
        error: ((resk - resg) * half).abs(),
    }
}

struct Interval {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Globally adaptive Gauss-Kronrod (7/15) integration over a finite interval.
pub fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    const MAX_INTERVALS: usize = 20_000;
    let first = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    let mut total = first;
    heap.push(Interval { a, b, est: first });
    while total.error > abs_tol.max(rel_tol * total.value.abs()) {
        if heap.len() >= MAX_INTERVALS {
            return Err(CasimirError::Numerical(format!(
                "adaptive quadrature did not converge: value {:e}, error {:e}",
                total.value, total.error
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        total.value += left.value + right.value - worst.est.value;
        total.error += left.error + right.error - worst.est.error;
        heap.push(Interval { a: worst.a, b: mid, est: left });
        heap.push(Interval { a: mid, b: worst.b, est: right });
        if !total.value.is_finite() {
            return Err(CasimirError::Numerical("non-finite integrand".into()));
        }
    }
    // Resum to shed accumulated cancellation in the running totals.
    let mut value = KahanSum::new();
    let mut error = 0.0;
    for iv in heap.iter() {
        value.add(iv.est.value);
        error += iv.est.error;
    }
    Ok(Estimate {
        value: value.value(),
        error,
    })
}

/// ∫_a^∞ f(x) dx via the map x = a + t/(1 − t).
pub fn adaptive_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    adaptive(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let v = f(a + t / s) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}
