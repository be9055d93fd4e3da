//! Eavesdropper SNR laws for every scenario and case.
//!
//! All of them are finite signed mixtures of [`PowerGamma`] components:
//! a colluding law is a single component, and the maximum of `L` iid
//! copies of an integer-shape component expands, through
//! `L·F^{L−1}·f` and the binomial/multinomial theorems, into a finite sum.

use std::collections::BTreeMap;

use crate::config::{Case, Scenario, SystemConfig};
use crate::error::{ensure_positive, Error, Result};
use crate::fading::AlphaMuParams;
use crate::interference::as_positive_integer;
use crate::ris_channel::{fit_colluding_sum, fit_laguerre_gamma, GammaFit, RisLinkParams};
use crate::special::{binomial, ln_factorial, ln_gamma, reg_lower_gamma};

/// Law of `γ` with `γ^κ ~ Gamma(shape, rate)`:
/// `f(γ) = κ rate^shape γ^{κ·shape − 1} e^{−rate·γ^κ} / Γ(shape)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerGamma {
    pub shape: f64,
    pub rate: f64,
    pub exponent: f64,
}

impl PowerGamma {
    pub fn new(shape: f64, rate: f64, exponent: f64) -> Result<Self> {
        ensure_positive("shape", shape)?;
        ensure_positive("rate", rate)?;
        ensure_positive("exponent", exponent)?;
        Ok(Self { shape, rate, exponent })
    }

    pub fn ln_pdf(&self, gamma: f64) -> f64 {
        let (k, a, r) = (self.exponent, self.shape, self.rate);
        k.ln() + a * r.ln() - ln_gamma(a) + (k * a - 1.0) * gamma.ln() - r * gamma.powf(k)
    }

    pub fn pdf(&self, gamma: f64) -> f64 {
        if gamma > 0.0 {
            self.ln_pdf(gamma).exp()
        } else {
            0.0
        }
    }

    pub fn cdf(&self, gamma: f64) -> f64 {
        if gamma > 0.0 {
            reg_lower_gamma(self.shape, self.rate * gamma.powf(self.exponent))
        } else {
            0.0
        }
    }

    /// `E[γ^s]`, finite for `s > −κ·shape`.
    pub fn moment(&self, s: f64) -> f64 {
        let t = s / self.exponent;
        (ln_gamma(self.shape + t) - ln_gamma(self.shape) - t * self.rate.ln()).exp()
    }
}

/// `Σ weight·component`; weights may be negative, the sum is a density.
///
/// For a maximum of iid copies the pdf and CDF are evaluated from the
/// order statistic itself, which avoids the cancellation of the signed
/// sum in the lower tail; the components serve the Mellin-transform users.
#[derive(Debug, Clone, PartialEq)]
pub struct EveLaw {
    pub components: Vec<(f64, PowerGamma)>,
    pub maximum: Option<(PowerGamma, u32)>,
}

impl EveLaw {
    pub fn single(c: PowerGamma) -> Self {
        Self { components: vec![(1.0, c)], maximum: None }
    }

    pub fn pdf(&self, gamma: f64) -> f64 {
        match self.maximum {
            Some((b, l)) => l as f64 * b.cdf(gamma).powi(l as i32 - 1) * b.pdf(gamma),
            None => self.mixture_pdf(gamma),
        }
    }

    pub fn cdf(&self, gamma: f64) -> f64 {
        match self.maximum {
            Some((b, l)) => b.cdf(gamma).powi(l as i32),
            None => self.mixture_cdf(gamma),
        }
    }

    pub fn mixture_pdf(&self, gamma: f64) -> f64 {
        self.components.iter().map(|(w, c)| w * c.pdf(gamma)).sum::<f64>().max(0.0)
    }

    pub fn mixture_cdf(&self, gamma: f64) -> f64 {
        self.components.iter().map(|(w, c)| w * c.cdf(gamma)).sum::<f64>().clamp(0.0, 1.0)
    }

    /// Law of the largest of `l` iid copies of `base`, which needs an
    /// integer shape `n`. With `x = rate·γ^κ`,
    /// `F = 1 − e^{−x} Σ_{j<n} x^j/j!`, and each term of
    /// `l·F^{l−1}·f` is again a power-gamma density with shape `n + J`
    /// and rate `(Λ+1)·rate`.
    pub fn maximum_of(base: PowerGamma, l: u32, limit: usize) -> Result<Self> {
        let n = as_positive_integer(base.shape)
            .ok_or_else(|| Error::Mode(format!("the maximum expansion needs an integer shape, got {}", base.shape)))?;
        let ln_j_fact: Vec<f64> = (0..n).map(|j| ln_factorial(j as u64)).collect();
        let mut merged: BTreeMap<(u32, u64), f64> = BTreeMap::new();
        for lambda in 0..l {
            let outer = l as f64 * binomial((l - 1) as u64, lambda as u64) * if lambda % 2 == 0 { 1.0 } else { -1.0 };
            for comp in enumerate_compositions_with_limit(lambda, n, limit)? {
                let j_total: u64 = comp.parts.iter().enumerate().map(|(j, &k)| j as u64 * k as u64).sum();
                let shape = n as f64 + j_total as f64;
                let ln_w = (comp.multinomial as f64).ln()
                    - comp.parts.iter().zip(&ln_j_fact).map(|(&k, lf)| k as f64 * lf).sum::<f64>()
                    + ln_gamma(shape)
                    - ln_gamma(n as f64)
                    - shape * (lambda as f64 + 1.0).ln();
                *merged.entry((lambda, j_total)).or_insert(0.0) += outer * ln_w.exp();
            }
        }
        let components = merged
            .into_iter()
            .map(|((lambda, j), w)| {
                let c = PowerGamma::new(n as f64 + j as f64, (lambda as f64 + 1.0) * base.rate, base.exponent)?;
                Ok((w, c))
            })
            .collect::<Result<_>>()?;
        Ok(Self { components, maximum: Some((base, l)) })
    }
}

/// A weak composition of `target` into `parts.len()` parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    pub parts: Vec<u32>,
    pub multinomial: u128,
}

pub const COMPOSITION_LIMIT: usize = 1_000_000;

pub fn enumerate_compositions(target: u32, parts: u32) -> Result<Vec<Composition>> {
    enumerate_compositions_with_limit(target, parts, COMPOSITION_LIMIT)
}

/// `C(target + parts − 1, parts − 1)` saturating at `u128::MAX`.
pub fn composition_count(target: u32, parts: u32) -> u128 {
    let (n, k) = (target as u128 + parts as u128 - 1, parts as u128 - 1);
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        match c.checked_mul(n - i) {
            Some(v) => c = v / (i + 1),
            None => return u128::MAX,
        }
    }
    c
}

/// All weak compositions, first part descending, with their multinomial
/// coefficients `target! / Π k_j!`.
pub fn enumerate_compositions_with_limit(target: u32, parts: u32, limit: usize) -> Result<Vec<Composition>> {
    if parts == 0 {
        return Err(Error::Domain("a composition needs at least one part".into()));
    }
    let count = composition_count(target, parts);
    if count > limit as u128 {
        return Err(Error::Capacity { count, limit });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut current = Vec::with_capacity(parts as usize);
    fn recurse(remaining: u32, left: u32, coef: u128, current: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if left == 1 {
            current.push(remaining);
            out.push(Composition { parts: current.clone(), multinomial: coef });
            current.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            current.push(k);
            recurse(remaining - k, left - 1, coef * binomial_u128(remaining, k), current, out);
            current.pop();
        }
    }
    recurse(target, parts, 1, &mut current, &mut out);
    Ok(out)
}

fn binomial_u128(n: u32, k: u32) -> u128 {
    let k = k.min(n - k) as u128;
    (0..k).fold(1u128, |c, i| c * (n as u128 - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EveConfig {
    pub l_eves: u32,
    pub scenario: Scenario,
    pub case: Case,
    /// Power-domain law of one direct link, in units of `avg_snr_e`.
    pub direct_fading: AlphaMuParams,
    pub avg_snr_e: f64,
    /// One eavesdropper's RIS link (`ϑ_E`, `ζ_E`, `β_E`, `γ̄_E`).
    pub ris_link: RisLinkParams,
    pub ris_hops: (AlphaMuParams, AlphaMuParams),
    pub composition_limit: usize,
}

impl EveConfig {
    /// Shared-RIS eavesdroppers use the destination's surface: its hops,
    /// element count and `β_d`, with their own `γ̄_E`.
    pub fn from_system(cfg: &SystemConfig) -> Result<Self> {
        cfg.validate()?;
        let (hops, n, beta) = match cfg.scenario {
            Scenario::SharedRis => ((cfg.hop_s, cfg.hop_r), cfg.n_d, cfg.beta_d),
            _ => ((cfg.eve_hop_s, cfg.eve_hop_r), cfg.n_e, cfg.beta_e),
        };
        let fit = fit_laguerre_gamma(hops.0, hops.1, n)?;
        Ok(Self {
            l_eves: cfg.l_eves,
            scenario: cfg.scenario,
            case: cfg.case,
            direct_fading: cfg.eve_direct,
            avg_snr_e: cfg.avg_snr_e,
            ris_link: RisLinkParams::new(fit, beta, cfg.avg_snr_eve_ris)?,
            ris_hops: hops,
            composition_limit: COMPOSITION_LIMIT,
        })
    }

    pub fn with(&self, scenario: Scenario, case: Case) -> Self {
        Self { scenario, case, ..self.clone() }
    }

    fn direct_rate(&self) -> f64 {
        let p = &self.direct_fading;
        p.mu / (self.avg_snr_e * p.omega).powf(p.alpha)
    }

    fn ris_component(&self, fit: &GammaFit) -> Result<PowerGamma> {
        let link = RisLinkParams { fit: *fit, ..self.ris_link };
        PowerGamma::new(fit.shape, link.xi(), 0.5)
    }

    /// Law of a single eavesdropper. The non-colluding expansion for
    /// `L ≥ 2` needs an integer shape, so the RIS scenarios then use the
    /// fit's integer variant.
    pub fn single_law(&self) -> Result<PowerGamma> {
        match (self.scenario, self.case) {
            (Scenario::DirectLink, _) => {
                PowerGamma::new(self.direct_fading.mu, self.direct_rate(), self.direct_fading.alpha)
            }
            (_, Case::NonColluding) if self.l_eves > 1 => self.ris_component(&self.ris_link.fit.integer_variant()),
            _ => self.ris_component(&self.ris_link.fit),
        }
    }

    pub fn law(&self) -> Result<EveLaw> {
        let l = self.l_eves;
        match (self.scenario, self.case) {
            (Scenario::DirectLink, Case::Colluding) => {
                let p = &self.direct_fading;
                Ok(EveLaw::single(PowerGamma::new(l as f64 * p.mu, self.direct_rate(), p.alpha)?))
            }
            (_, Case::Colluding) => {
                let fit = fit_colluding_sum(self.ris_hops.0, self.ris_hops.1, self.ris_link.fit.n_elements, l)?;
                Ok(EveLaw::single(self.ris_component(&fit)?))
            }
            (_, Case::NonColluding) if l == 1 => Ok(EveLaw::single(self.single_law()?)),
            (_, Case::NonColluding) => {
                if self.scenario == Scenario::DirectLink && as_positive_integer(self.direct_fading.mu).is_none() {
                    return Err(Error::Mode(format!(
                        "non-colluding direct law needs integer μ_e, got {}",
                        self.direct_fading.mu
                    )));
                }
                EveLaw::maximum_of(self.single_law()?, l, self.composition_limit)
            }
        }
    }

    /// `L·F^{L−1}·f` of the single-eavesdropper law, evaluated directly.
    pub fn maximum_pdf(&self, gamma: f64) -> Result<f64> {
        let s = self.single_law()?;
        let l = self.l_eves as f64;
        Ok(l * s.cdf(gamma).powf(l - 1.0) * s.pdf(gamma))
    }
}

fn law_for(cfg: &EveConfig, scenario: Scenario, case: Case) -> Result<EveLaw> {
    let scenario = match (cfg.scenario, scenario) {
        (Scenario::SharedRis, Scenario::OwnRis) => Scenario::SharedRis,
        _ => scenario,
    };
    cfg.with(scenario, case).law()
}

fn point(gamma: f64) -> Result<f64> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(gamma)
    } else {
        Err(Error::Domain(format!("eavesdropper density needs finite γ > 0, got {gamma}")))
    }
}

pub fn colluding_direct_pdf(gamma: f64, cfg: &EveConfig) -> Result<f64> {
    Ok(law_for(cfg, Scenario::DirectLink, Case::Colluding)?.pdf(point(gamma)?))
}

pub fn noncolluding_direct_pdf(gamma: f64, cfg: &EveConfig) -> Result<f64> {
    Ok(law_for(cfg, Scenario::DirectLink, Case::NonColluding)?.pdf(point(gamma)?))
}

pub fn colluding_ris_pdf(gamma: f64, cfg: &EveConfig) -> Result<f64> {
    Ok(law_for(cfg, Scenario::OwnRis, Case::Colluding)?.pdf(point(gamma)?))
}

pub fn colluding_ris_cdf(gamma: f64, cfg: &EveConfig) -> Result<f64> {
    Ok(law_for(cfg, Scenario::OwnRis, Case::Colluding)?.cdf(gamma.max(0.0)))
}

pub fn noncolluding_ris_pdf(gamma: f64, cfg: &EveConfig) -> Result<f64> {
    Ok(law_for(cfg, Scenario::OwnRis, Case::NonColluding)?.pdf(point(gamma)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::db_to_linear;
    use crate::gof::{chi_square_test, histogram};
    use crate::quadrature::{integrate, integrate_positive_axis, Tolerance};
    use crate::stream::RngStream;
    use rand_distr::{Distribution, Exp1, Gamma};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn eves(scenario: Scenario, case: Case, l: u32) -> EveConfig {
        let cfg = SystemConfig { scenario, case, l_eves: l, ..SystemConfig::default() };
        EveConfig::from_system(&cfg).unwrap()
    }

    fn grid() -> Vec<f64> {
        (0..30).map(|i| 0.01 * 1.4f64.powi(i)).collect()
    }

    fn all_configs() -> Vec<EveConfig> {
        let mut out = vec![];
        for s in [Scenario::DirectLink, Scenario::OwnRis, Scenario::SharedRis] {
            for c in [Case::Colluding, Case::NonColluding] {
                for l in [1, 2, 4] {
                    out.push(eves(s, c, l));
                }
            }
        }
        out
    }

    #[test]
    fn compositions() {
        let c = enumerate_compositions(0, 3).unwrap();
        assert_eq!(c, vec![Composition { parts: vec![0, 0, 0], multinomial: 1 }]);
        let c = enumerate_compositions(2, 2).unwrap();
        let parts: Vec<_> = c.iter().map(|c| (c.parts.clone(), c.multinomial)).collect();
        assert_eq!(parts, vec![(vec![2, 0], 1), (vec![1, 1], 2), (vec![0, 2], 1)]);
        let c = enumerate_compositions(3, 3).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(c.iter().map(|c| c.multinomial).sum::<u128>(), 27);
        assert!(c.iter().all(|c| c.parts.iter().sum::<u32>() == 3));
        assert_eq!(composition_count(40, 12), 47_626_016_970);
        assert!(matches!(enumerate_compositions(40, 12), Err(Error::Capacity { .. })));
        assert!(enumerate_compositions(1, 0).is_err());
    }

    #[test]
    fn single_eavesdropper_reductions() {
        let d = eves(Scenario::DirectLink, Case::Colluding, 1);
        let g = d.avg_snr_e;
        for x in grid() {
            assert!(rel(colluding_direct_pdf(x, &d).unwrap(), (-x / g).exp() / g) < 1e-12);
            assert!(rel(noncolluding_direct_pdf(x, &d).unwrap(), (-x / g).exp() / g) < 1e-12);
        }
        let r = eves(Scenario::OwnRis, Case::Colluding, 1);
        for x in grid() {
            assert!(rel(colluding_ris_pdf(x, &r).unwrap(), r.ris_link.pdf(x)) < 1e-12);
        }
    }

    #[test]
    fn max_of_two_exponentials() {
        let d = eves(Scenario::DirectLink, Case::NonColluding, 2);
        let g = d.avg_snr_e;
        for x in grid() {
            let want = 2.0 / g * (-x / g).exp() * (1.0 - (-x / g).exp());
            assert!(rel(noncolluding_direct_pdf(x, &d).unwrap(), want) < 1e-10);
        }
    }

    #[test]
    fn expansion_equals_order_statistic() {
        let mut configs = all_configs();
        let mut d = eves(Scenario::DirectLink, Case::NonColluding, 3);
        d.direct_fading = AlphaMuParams::new(1.5, 3.0, 1.0).unwrap();
        configs.push(d);
        for cfg in configs.into_iter().filter(|c| c.case == Case::NonColluding) {
            let law = cfg.law().unwrap();
            let xs: Vec<f64> = grid().iter().map(|x| x * cfg.avg_snr_e.max(cfg.ris_link.avg_snr)).collect();
            let peak = xs.iter().map(|&x| cfg.maximum_pdf(x).unwrap()).fold(0.0, f64::max);
            for x in xs {
                let want = cfg.maximum_pdf(x).unwrap();
                let got = law.mixture_pdf(x);
                // The signed sum loses digits where the density is far below its peak.
                assert!(
                    (got - want).abs() <= 1e-8 * want + 1e-13 * peak,
                    "{:?} L={} x={x}: {got} vs {want}",
                    cfg.scenario,
                    cfg.l_eves
                );
                assert!(rel(law.pdf(x), want) < 1e-12 || want == 0.0);
            }
        }
    }

    #[test]
    fn normalization_and_cdf_pairs() {
        for cfg in all_configs() {
            let law = cfg.law().unwrap();
            let total = integrate_positive_axis(|x| law.pdf(x), Tolerance::default()).unwrap().value;
            assert!((total - 1.0).abs() < 1e-6, "{:?}/{:?}: {total}", cfg.scenario, cfg.case);
            for x in [0.1, 1.0, 5.0] {
                let q = integrate(|t| law.pdf(t), 0.0, x, Tolerance::new(1e-14, 1e-12)).unwrap().value;
                assert!((q - law.cdf(x)).abs() < 1e-8 * law.cdf(x).max(1e-6));
            }
        }
        let r = eves(Scenario::OwnRis, Case::Colluding, 2);
        assert_eq!(colluding_ris_cdf(0.0, &r).unwrap(), 0.0);
        assert!((colluding_ris_cdf(1e12, &r).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn colluding_dominates_noncolluding() {
        for l in [1, 2, 3, 4] {
            let c = eves(Scenario::DirectLink, Case::Colluding, l).law().unwrap();
            let nc = eves(Scenario::DirectLink, Case::NonColluding, l).law().unwrap();
            for x in grid() {
                assert!(c.cdf(x) <= nc.cdf(x) + 1e-12, "L={l} x={x}");
            }
        }
        // The moment-matched colluding RIS law has a lighter-than-exact lower
        // tail; dominance is checked from the 5% quantile of the
        // non-colluding law upward.
        for s in [Scenario::OwnRis, Scenario::SharedRis] {
            for l in [1, 2, 3, 4] {
                let c = eves(s, Case::Colluding, l).law().unwrap();
                let nc = eves(s, Case::NonColluding, l).law().unwrap();
                for x in grid().into_iter().filter(|&x| nc.cdf(x) >= 0.05) {
                    assert!(c.cdf(x) <= nc.cdf(x) + 1e-12, "{s:?} L={l} x={x}");
                }
            }
        }
    }

    #[test]
    fn laws_shift_right_with_l() {
        for s in [Scenario::DirectLink, Scenario::OwnRis, Scenario::SharedRis] {
            for case in [Case::Colluding, Case::NonColluding] {
                let laws: Vec<EveLaw> = (1..=4).map(|l| eves(s, case, l).law().unwrap()).collect();
                for w in laws.windows(2) {
                    for x in grid() {
                        assert!(w[1].cdf(x) <= w[0].cdf(x) + 1e-12, "{s:?} {case:?} x={x}");
                    }
                }
            }
        }
    }

    #[test]
    fn shared_ris_uses_destination_surface() {
        let cfg = SystemConfig { scenario: Scenario::SharedRis, l_eves: 1, n_d: 10, ..SystemConfig::default() };
        let e = EveConfig::from_system(&cfg).unwrap();
        let dest = fit_laguerre_gamma(cfg.hop_s, cfg.hop_r, 10).unwrap();
        let link = RisLinkParams::new(dest, cfg.beta_d, cfg.avg_snr_eve_ris).unwrap();
        for x in grid() {
            assert!(rel(colluding_ris_pdf(x, &e).unwrap(), link.pdf(x)) < 1e-12);
        }
    }

    #[test]
    fn non_integer_shapes_are_rejected() {
        let mut d = eves(Scenario::DirectLink, Case::NonColluding, 2);
        d.direct_fading.mu = 1.5;
        assert!(matches!(d.law(), Err(Error::Mode(_))));
        let base = PowerGamma::new(2.5, 1.0, 1.0).unwrap();
        assert!(matches!(EveLaw::maximum_of(base, 2, COMPOSITION_LIMIT), Err(Error::Mode(_))));
    }

    fn chi_square_against(law: &EveLaw, samples: &[f64]) -> f64 {
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let edges: Vec<f64> = (1..40).map(|k| sorted[k * sorted.len() / 40]).collect();
        let counts = histogram(samples, &edges);
        let cdf: Vec<f64> = edges.iter().map(|&e| law.cdf(e)).collect();
        let mut probs: Vec<f64> = cdf.windows(2).map(|w| w[1] - w[0]).collect();
        probs.push(cdf[0] + 1.0 - cdf[cdf.len() - 1]);
        chi_square_test(&counts, &probs).1
    }

    #[test]
    fn colluding_sum_matches_simulation() {
        let d = eves(Scenario::DirectLink, Case::Colluding, 2);
        let mut rng = RngStream::seeded(21);
        let g = d.avg_snr_e;
        let samples: Vec<f64> = (0..200_000)
            .map(|_| {
                let a: f64 = Exp1.sample(&mut rng);
                let b: f64 = Exp1.sample(&mut rng);
                g * (a + b)
            })
            .collect();
        assert!(chi_square_against(&d.law().unwrap(), &samples) > 0.01);
    }

    #[test]
    fn noncolluding_ris_matches_simulated_maximum() {
        let cfg = SystemConfig { avg_snr_eve_ris: db_to_linear(5.0), ..SystemConfig::default() };
        let e = EveConfig::from_system(&cfg).unwrap().with(Scenario::OwnRis, Case::NonColluding);
        let fit = e.ris_link.fit.integer_variant();
        let g = Gamma::new(fit.shape, fit.scale).unwrap();
        let c = e.ris_link.avg_snr / e.ris_link.beta;
        let mut rng = RngStream::seeded(8);
        let samples: Vec<f64> = (0..200_000)
            .map(|_| {
                let a = c * g.sample(&mut rng).powi(2);
                let b = c * g.sample(&mut rng).powi(2);
                a.max(b)
            })
            .collect();
        assert!(chi_square_against(&e.law().unwrap(), &samples) > 0.01);
    }
}
