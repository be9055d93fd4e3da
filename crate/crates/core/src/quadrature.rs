//! Adaptive Gauss-Kronrod quadrature on finite intervals, plus a log-mapped
//! integrator for integrals over `(0, ∞)` weighted by a density.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Result of a numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    pub evaluations: usize,
}

/// Stopping rule for the adaptive integrators: stop once the total error
/// estimate is below `max(abs, rel·|I|)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-12, rel: 1e-10, max_intervals: 2000 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, ..Self::default() }
    }
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = finite_or_zero(f(center));
    let mut res_k = f_center * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = finite_or_zero(f(center - x));
        let f2 = finite_or_zero(f(center + x));
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { a, b, value, error }
}

fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Adaptive 21-point Gauss-Kronrod integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature(format!("interval [{a}, {b}] is not finite")));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut segments = vec![gk21(&f, a, b)];
    let mut evaluations = 21;
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= tol.abs.max(tol.rel * total.abs()) {
            return Ok(Integral { value: total, error, evaluations });
        }
        if segments.len() >= tol.max_intervals {
            // Roundoff floor: the remaining error is at the level of the
            // integrand's absolute mass times machine precision.
            let mass: f64 = segments.iter().map(|s| s.value.abs()).sum();
            if error <= 1e3 * f64::EPSILON * mass {
                return Ok(Integral { value: total, error, evaluations });
            }
            return Err(Error::Quadrature(format!(
                "no convergence after {} intervals: value {total:e}, error {error:e}",
                segments.len()
            )));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("segments is never empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval can no longer be split; keep it as is.
            segments.push(Segment { error: 0.0, ..seg });
            continue;
        }
        segments.push(gk21(&f, seg.a, mid));
        segments.push(gk21(&f, mid, seg.b));
        evaluations += 42;
    }
}

/// Log-mapped support of a nonnegative density on `(0, ∞)`.
///
/// With `x = e^t` the density `f(x)` becomes `f(e^t)·e^t`, which decays
/// exponentially at both ends for every law used in this crate, so a finite
/// `t`-interval captures the mass to well below `1e-15`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSupport {
    pub t_lo: f64,
    pub t_hi: f64,
}

const SCAN_T_MIN: f64 = -230.0;
const SCAN_T_MAX: f64 = 230.0;
const SCAN_STEP: f64 = 0.25;
const SUPPORT_THRESHOLD: f64 = 1e-20;

impl LogSupport {
    /// Scans `density` over `x ∈ [1e-100, 1e100]` and keeps the range where
    /// `x·f(x)` exceeds `1e-20` of its peak.
    pub fn of<F: Fn(f64) -> f64>(density: F) -> Result<Self> {
        let steps = ((SCAN_T_MAX - SCAN_T_MIN) / SCAN_STEP) as usize;
        let values: Vec<f64> = (0..=steps)
            .map(|i| {
                let t = SCAN_T_MIN + i as f64 * SCAN_STEP;
                finite_or_zero(density(t.exp()) * t.exp()).abs()
            })
            .collect();
        let peak = values.iter().cloned().fold(0.0, f64::max);
        if peak <= 0.0 {
            return Err(Error::Quadrature("density vanishes on the scan grid".into()));
        }
        let threshold = SUPPORT_THRESHOLD * peak;
        let first = values.iter().position(|&v| v > threshold).unwrap_or(0);
        let last = values.iter().rposition(|&v| v > threshold).unwrap_or(steps);
        Ok(Self {
            t_lo: SCAN_T_MIN + (first as f64 - 2.0) * SCAN_STEP,
            t_hi: SCAN_T_MIN + (last as f64 + 2.0) * SCAN_STEP,
        })
    }

    /// Integrates `g(x)` over `(0, ∞)` in the log variable, restricted to
    /// the support. `g` should already contain the density factor.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G, tol: Tolerance) -> Result<Integral> {
        integrate(
            |t| {
                let x = t.exp();
                g(x) * x
            },
            self.t_lo,
            self.t_hi,
            tol,
        )
    }
}

/// `∫₀^∞ f(x) dx` for a nonnegative density-like integrand, with the
/// support detected from `f` itself.
pub fn integrate_positive_axis<F: Fn(f64) -> f64>(f: F, tol: Tolerance) -> Result<Integral> {
    let support = LogSupport::of(&f)?;
    support.integrate(f, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.value - 0.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, Tolerance::new(1e-12, 1e-12)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn semi_infinite_exponential() {
        let r = integrate_positive_axis(|x: f64| (-x).exp(), Tolerance::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        // Gamma(0.3) density: integrable singularity at the origin.
        let g = statrs::function::gamma::gamma(0.3);
        let r = integrate_positive_axis(|x: f64| x.powf(-0.7) * (-x).exp() / g, Tolerance::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn far_scale() {
        let s = 1e12;
        let r = integrate_positive_axis(|x: f64| (-x / s).exp() / s, Tolerance::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vanishing_density_is_an_error() {
        assert!(integrate_positive_axis(|_| 0.0, Tolerance::default()).is_err());
    }
}
