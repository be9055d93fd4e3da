//! α-μ envelope distribution and the law of the product of two
//! independent α-μ envelopes (one RIS element's cascaded channel).
//!
//! `omega` is the α-root-mean value: `E[X^α] = Ω^α`, so `Ω = 1` gives a
//! unit-power Rayleigh envelope at `α = 2, μ = 1`.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::quadrature::{LogSupport, Tolerance};
use crate::special::{ln_bessel_k, ln_gamma, reg_lower_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaMuParams {
    pub alpha: f64,
    pub mu: f64,
    pub omega: f64,
}

impl AlphaMuParams {
    pub fn new(alpha: f64, mu: f64, omega: f64) -> Result<Self> {
        let p = Self { alpha, mu, omega };
        p.validate()?;
        Ok(p)
    }

    /// Unit-power Rayleigh envelope.
    pub const fn rayleigh() -> Self {
        Self { alpha: 2.0, mu: 1.0, omega: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("alpha", self.alpha)?;
        ensure_positive("mu", self.mu)?;
        ensure_positive("omega", self.omega)
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        let am = self.alpha * self.mu;
        self.alpha.ln() + self.mu * self.mu.ln() + (am - 1.0) * x.ln()
            - am * self.omega.ln()
            - ln_gamma(self.mu)
            - self.mu * (x / self.omega).powf(self.alpha)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            let am = self.alpha * self.mu;
            return if am > 1.0 {
                0.0
            } else if am < 1.0 {
                f64::INFINITY
            } else {
                (self.alpha.ln() + self.mu * self.mu.ln() - ln_gamma(self.mu) - am * self.omega.ln()).exp()
            };
        }
        self.ln_pdf(x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        reg_lower_gamma(self.mu, self.mu * (x / self.omega).powf(self.alpha))
    }

    /// `E[X^s] = Ω^s Γ(μ + s/α) / (μ^{s/α} Γ(μ))`.
    pub fn moment(&self, s: f64) -> Result<f64> {
        let arg = self.mu + s / self.alpha;
        if arg <= 0.0 {
            return Err(Error::Domain(format!("moment of order {s} diverges: mu + s/alpha = {arg} <= 0")));
        }
        Ok((s * self.omega.ln() + ln_gamma(arg) - (s / self.alpha) * self.mu.ln() - ln_gamma(self.mu)).exp())
    }

    pub fn sampler(&self) -> AlphaMuSampler {
        AlphaMuSampler::new(self)
    }
}

/// Draws `X = Ω (G/μ)^{1/α}` with `G ~ Gamma(μ, 1)`.
#[derive(Debug, Clone)]
pub struct AlphaMuSampler {
    gamma: Option<Gamma<f64>>,
    inv_alpha: f64,
    mu: f64,
    omega: f64,
}

impl AlphaMuSampler {
    fn new(p: &AlphaMuParams) -> Self {
        let gamma = if p.mu == 1.0 { None } else { Some(Gamma::new(p.mu, 1.0).expect("validated shape")) };
        Self { gamma, inv_alpha: 1.0 / p.alpha, mu: p.mu, omega: p.omega }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g: f64 = match &self.gamma {
            Some(d) => d.sample(rng),
            None => Exp1.sample(rng),
        };
        let u = g / self.mu;
        if self.inv_alpha == 0.5 {
            self.omega * u.sqrt()
        } else if self.inv_alpha == 1.0 {
            self.omega * u
        } else {
            self.omega * u.powf(self.inv_alpha)
        }
    }
}

pub fn alpha_mu_pdf(x: f64, p: &AlphaMuParams) -> Result<f64> {
    p.validate()?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("alpha-mu pdf needs finite x >= 0, got {x}")));
    }
    Ok(p.pdf(x))
}

pub fn alpha_mu_cdf(x: f64, p: &AlphaMuParams) -> Result<f64> {
    p.validate()?;
    if x.is_nan() {
        return Err(Error::Domain("alpha-mu cdf of NaN".into()));
    }
    Ok(p.cdf(x))
}

pub fn alpha_mu_moment(s: f64, p: &AlphaMuParams) -> Result<f64> {
    p.validate()?;
    p.moment(s)
}

pub fn alpha_mu_sample<R: Rng + ?Sized>(p: &AlphaMuParams, rng: &mut R, n: usize) -> Result<Vec<f64>> {
    p.validate()?;
    if n == 0 {
        return Err(Error::Domain("sample count must be >= 1".into()));
    }
    let s = p.sampler();
    Ok((0..n).map(|_| s.sample(rng)).collect())
}

/// Coefficients of the Bessel-K product density
/// `f(y) = χ₁ y^{χ₄} K_{χ₂}(χ₅ y^{α/2})`, available when both hops share α.
///
/// `chi1` is kept as its logarithm because it overflows for large μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductChi {
    pub alpha: f64,
    pub ln_chi1: f64,
    pub chi2: f64,
    pub chi3: f64,
    pub chi4: f64,
    pub chi5: f64,
    pub chi6: f64,
    pub chi7: f64,
}

/// Law of `Y = θ·φ` with `θ ~ hop_s`, `φ ~ hop_r` independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductParams {
    pub hop_s: AlphaMuParams,
    pub hop_r: AlphaMuParams,
    /// `None` when `α_s ≠ α_r`: the product is then a Fox-H law and the
    /// density is evaluated by Mellin convolution.
    pub chi: Option<ProductChi>,
    support_s: LogSupport,
}

impl ProductParams {
    pub fn new(hop_s: AlphaMuParams, hop_r: AlphaMuParams) -> Result<Self> {
        hop_s.validate()?;
        hop_r.validate()?;
        let chi = (hop_s.alpha == hop_r.alpha).then(|| {
            let alpha = hop_s.alpha;
            let (ms, mr) = (hop_s.mu, hop_r.mu);
            let chi3 = ms * mr / (hop_s.omega.powf(alpha) * hop_r.omega.powf(alpha));
            let chi2 = ms - mr;
            let chi4 = alpha * (ms + mr) / 2.0 - 1.0;
            let ln_chi1 = (2.0 * alpha).ln() + 0.5 * (ms + mr) * chi3.ln() - ln_gamma(ms) - ln_gamma(mr);
            ProductChi {
                alpha,
                ln_chi1,
                chi2,
                chi3,
                chi4,
                chi5: 2.0 * chi3.sqrt(),
                chi6: 1.0 + chi4 + chi2,
                chi7: 1.0 + chi4 - chi2,
            }
        });
        let support_s = LogSupport::of(|x| hop_s.pdf(x))?;
        Ok(Self { hop_s, hop_r, chi, support_s })
    }

    pub fn rayleigh() -> Self {
        Self::new(AlphaMuParams::rayleigh(), AlphaMuParams::rayleigh()).expect("valid")
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::Domain(format!("product pdf needs finite y > 0, got {y}")));
        }
        let v = match &self.chi {
            Some(c) => {
                let arg = c.chi5 * y.powf(c.alpha / 2.0);
                (c.ln_chi1 + c.chi4 * y.ln() + ln_bessel_k(c.chi2, arg)?).exp()
            }
            None => self.pdf_by_convolution(y)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("product pdf is not finite at y = {y}")))
        }
    }

    /// `f_Y(y) = ∫ f_θ(x) f_φ(y/x) / x dx`.
    fn pdf_by_convolution(&self, y: f64) -> Result<f64> {
        let (s, r) = (self.hop_s, self.hop_r);
        Ok(self.support_s.integrate(|x| s.pdf(x) * r.pdf(y / x) / x, Tolerance::new(0.0, 1e-10))?.value)
    }

    /// `E[Y^s]`. For a shared α this is the Bessel-K Mellin transform
    /// `χ₁ (2/α) 2^{ν−2} χ₅^{−ν} Γ((ν+χ₂)/2) Γ((ν−χ₂)/2)` with
    /// `ν = 2(s + χ₄ + 1)/α`; otherwise the factorized Mellin transform.
    pub fn moment(&self, s: f64) -> Result<f64> {
        match &self.chi {
            Some(c) => {
                let nu = 2.0 * (s + c.chi4 + 1.0) / c.alpha;
                let (g1, g2) = ((nu + c.chi2) / 2.0, (nu - c.chi2) / 2.0);
                if g1 <= 0.0 || g2 <= 0.0 {
                    return Err(Error::Domain(format!("product moment of order {s} diverges")));
                }
                Ok((c.ln_chi1 + (2.0 / c.alpha).ln() + (nu - 2.0) * 2f64.ln() - nu * c.chi5.ln()
                    + ln_gamma(g1)
                    + ln_gamma(g2))
                .exp())
            }
            None => {
                let (p, q) = (self.hop_s, self.hop_r);
                let (a1, a2) = (p.mu + s / p.alpha, q.mu + s / q.alpha);
                if a1 <= 0.0 || a2 <= 0.0 {
                    return Err(Error::Domain(format!("product moment of order {s} diverges")));
                }
                Ok((s * (p.omega * q.omega).ln() + ln_gamma(a1) + ln_gamma(a2)
                    - (s / p.alpha) * p.mu.ln()
                    - (s / q.alpha) * q.mu.ln()
                    - ln_gamma(p.mu)
                    - ln_gamma(q.mu))
                .exp())
            }
        }
    }
}

pub fn product_pdf(y: f64, pp: &ProductParams) -> Result<f64> {
    pp.pdf(y)
}

pub fn product_moment(s: f64, pp: &ProductParams) -> Result<f64> {
    pp.moment(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gof::{chi_square_test, histogram, ks_critical, ks_statistic};
    use crate::quadrature::{integrate, integrate_positive_axis};
    use crate::stream::RngStream;
    use proptest::prelude::*;
    use rand::Rng;
    use std::f64::consts::{E, PI};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn grid() -> Vec<AlphaMuParams> {
        [(2.0, 1.0, 1.0), (3.0, 2.0, 1.0), (1.5, 2.5, 1.2), (0.8, 0.6, 2.0), (2.5, 1.7, 0.9), (1.0, 4.0, 0.5)]
            .iter()
            .map(|&(a, m, o)| AlphaMuParams::new(a, m, o).unwrap())
            .collect()
    }

    #[test]
    fn rayleigh_reduction() {
        let p = AlphaMuParams::rayleigh();
        assert!(rel(alpha_mu_pdf(1.0, &p).unwrap(), 2.0 / E) < 1e-14);
        assert_eq!(alpha_mu_pdf(0.0, &p).unwrap(), 0.0);
        assert!(rel(alpha_mu_cdf(1.0, &p).unwrap(), 1.0 - 1.0 / E) < 1e-14);
        assert_eq!(alpha_mu_cdf(f64::INFINITY, &p).unwrap(), 1.0);
    }

    #[test]
    fn pdf_high_precision_value() {
        // 50-digit evaluation of the closed-form density.
        let p = AlphaMuParams::new(3.0, 2.0, 1.0).unwrap();
        assert!(rel(p.pdf(0.5), 0.292_050_293_651_776_825_591_938_850_116_87) < 1e-13);
    }

    #[test]
    fn cdf_matches_quadrature_of_pdf() {
        let p = AlphaMuParams::new(1.5, 2.5, 1.2).unwrap();
        let q = integrate(|x| p.pdf(x), 0.0, 0.7, Tolerance::new(0.0, 1e-12)).unwrap().value;
        assert!(rel(p.cdf(0.7), q) < 1e-10);
        assert!(rel(q, 0.183_166_488_704_338_234_520_493_213_824_58) < 1e-10);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(AlphaMuParams::new(0.0, 1.0, 1.0).is_err());
        assert!(AlphaMuParams::new(1.0, f64::NAN, 1.0).is_err());
        let bad = AlphaMuParams { alpha: 2.0, mu: -1.0, omega: 1.0 };
        assert!(matches!(alpha_mu_pdf(1.0, &bad), Err(Error::Domain(_))));
        assert!(alpha_mu_pdf(-1.0, &AlphaMuParams::rayleigh()).is_err());
    }

    #[test]
    fn pdf_normalizes_on_grid() {
        for p in grid() {
            let mass = integrate_positive_axis(|x| p.pdf(x), Tolerance::default()).unwrap().value;
            assert!((mass - 1.0).abs() < 1e-8, "{p:?}: {mass}");
        }
    }

    #[test]
    fn nakagami_reduction() {
        for m in [0.7, 1.0, 2.0, 3.5] {
            let p = AlphaMuParams::new(2.0, m, 1.3).unwrap();
            let spread = 1.3f64 * 1.3;
            for x in [0.1f64, 0.6, 1.2, 2.5] {
                let nak = 2.0 * m.powf(m) * x.powf(2.0 * m - 1.0)
                    / (statrs::function::gamma::gamma(m) * spread.powf(m))
                    * (-m * x * x / spread).exp();
                assert!(rel(p.pdf(x), nak) < 1e-12);
            }
        }
    }

    #[test]
    fn moments() {
        let p = AlphaMuParams::rayleigh();
        assert!(rel(alpha_mu_moment(2.0, &p).unwrap(), 1.0) < 1e-14);
        assert!(rel(alpha_mu_moment(1.0, &p).unwrap(), PI.sqrt() / 2.0) < 1e-14);
        assert!(alpha_mu_moment(-3.0, &p).is_err());
    }

    #[test]
    fn third_moment_matches_simulation() {
        let p = AlphaMuParams::new(2.5, 1.7, 0.9).unwrap();
        let n = 10_000_000;
        let mut rng = RngStream::seeded(11);
        let s = p.sampler();
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let x = s.sample(&mut rng);
            let c = x * x * x;
            sum += c;
            sum2 += c * c;
        }
        let mean = sum / n as f64;
        let se = ((sum2 / n as f64 - mean * mean) / n as f64).sqrt();
        let exact = p.moment(3.0).unwrap();
        assert!((mean - exact).abs() < 3.0 * se, "{mean} vs {exact} (se {se})");
    }

    #[test]
    fn sampler_passes_ks_on_grid() {
        let n = 100_000;
        for (i, p) in grid().into_iter().enumerate() {
            let mut rng = RngStream::seeded(100 + i as u64);
            let mut xs = alpha_mu_sample(&p, &mut rng, n).unwrap();
            let d = ks_statistic(&mut xs, |x| p.cdf(x));
            assert!(d < ks_critical(n, 0.01), "{p:?}: D = {d}");
        }
    }

    #[test]
    fn unit_mu_matches_inverse_cdf_sampler() {
        let p = AlphaMuParams::new(1.7, 1.0, 1.4).unwrap();
        let n = 100_000;
        let mut rng = RngStream::seeded(5);
        let mut direct = alpha_mu_sample(&p, &mut rng, n).unwrap();
        let mut inv: Vec<f64> = (0..n)
            .map(|_| {
                let u: f64 = rng.random();
                p.omega * (-(1.0 - u).ln()).powf(1.0 / p.alpha)
            })
            .collect();
        let d = crate::gof::ks_two_sample(&mut direct, &mut inv);
        // Two-sample critical value at 0.01 with equal sizes.
        assert!(d < 1.628 * (2.0 / n as f64).sqrt(), "D = {d}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = AlphaMuParams::new(1.5, 2.5, 1.2).unwrap();
        let a = alpha_mu_sample(&p, &mut RngStream::seeded(9), 3).unwrap();
        let b = alpha_mu_sample(&p, &mut RngStream::seeded(9), 3).unwrap();
        assert_eq!(a, b);
        assert!(alpha_mu_sample(&p, &mut RngStream::seeded(9), 0).is_err());
    }

    #[test]
    fn rayleigh_product_density() {
        let pp = ProductParams::rayleigh();
        let c = pp.chi.unwrap();
        assert!(c.chi5 > 0.0 && (c.chi5 - 2.0 * c.chi3.sqrt()).abs() < 1e-15);
        assert!((c.chi6 + c.chi7 - 2.0 * (1.0 + c.chi4)).abs() < 1e-15);
        // 4·K0(2), 50-digit reference.
        assert!(rel(product_pdf(1.0, &pp).unwrap(), 0.455_575_490_998_133_742_610_878_299_729_93) < 1e-12);
    }

    fn product_grid() -> Vec<ProductParams> {
        let h = |a, m, o| AlphaMuParams::new(a, m, o).unwrap();
        vec![
            ProductParams::rayleigh(),
            ProductParams::new(h(2.0, 1.5, 1.0), h(2.0, 3.0, 0.8)).unwrap(),
            ProductParams::new(h(1.2, 2.0, 1.1), h(1.2, 0.7, 1.0)).unwrap(),
            ProductParams::new(h(2.0, 1.0, 1.0), h(3.0, 2.0, 1.0)).unwrap(),
        ]
    }

    #[test]
    fn product_density_normalizes() {
        for pp in product_grid() {
            let mass = integrate_positive_axis(|y| pp.pdf(y).unwrap_or(0.0), Tolerance::default()).unwrap().value;
            assert!((mass - 1.0).abs() < 1e-8, "{pp:?}: {mass}");
        }
    }

    #[test]
    fn product_moment_factorizes() {
        for pp in product_grid() {
            for s in [1.0, 2.0, 3.0] {
                let m = product_moment(s, &pp).unwrap();
                let f = pp.hop_s.moment(s).unwrap() * pp.hop_r.moment(s).unwrap();
                assert!(rel(m, f) < 1e-10, "{pp:?} s={s}: {m} vs {f}");
            }
        }
        let pp = ProductParams::rayleigh();
        assert!(rel(pp.moment(1.0).unwrap(), PI / 4.0) < 1e-13);
        assert!(rel(pp.moment(2.0).unwrap(), 1.0) < 1e-13);
    }

    #[test]
    fn product_density_matches_histogram() {
        for (k, pp) in product_grid().into_iter().enumerate() {
            let n = 200_000;
            let mut rng = RngStream::seeded(40 + k as u64);
            let (ss, rs) = (pp.hop_s.sampler(), pp.hop_r.sampler());
            let ys: Vec<f64> = (0..n).map(|_| ss.sample(&mut rng) * rs.sample(&mut rng)).collect();
            let edges: Vec<f64> = (0..=30).map(|i| 0.05 + i as f64 * 0.1).collect();
            let counts = histogram(&ys, &edges);
            let mut probs: Vec<f64> = edges
                .windows(2)
                .map(|w| integrate(|y| pp.pdf(y).unwrap(), w[0], w[1], Tolerance::default()).unwrap().value)
                .collect();
            probs.push(1.0 - probs.iter().sum::<f64>());
            let (_, p) = chi_square_test(&counts, &probs);
            assert!(p > 0.01, "{pp:?}: p = {p}");
        }
    }

    proptest! {
        #[test]
        fn cdf_is_monotone(alpha in 0.3f64..4.0, mu in 0.3f64..5.0, omega in 0.2f64..3.0,
                           x in 0.0f64..5.0, dx in 0.0f64..2.0) {
            let p = AlphaMuParams::new(alpha, mu, omega).unwrap();
            let (a, b) = (p.cdf(x), p.cdf(x + dx));
            prop_assert!(a <= b + 1e-15);
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert_eq!(p.cdf(0.0), 0.0);
        }
    }
}
