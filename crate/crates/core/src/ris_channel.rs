//! Gamma approximation of the coherent RIS sum `Σ θ_k φ_k` and the
//! resulting destination SNR law.
//!
//! The sum is replaced by `G ~ Gamma(ϑ, ζ)` matched on mean and variance
//! (first term of a Laguerre expansion), and the received SNR is
//! `γ = (γ̄/β)·G²`, so `√γ` is gamma distributed with rate
//! `Ξ = √(β/(γ̄ζ²))`.

use crate::error::{ensure_positive, Error, Result};
use crate::fading::{AlphaMuParams, ProductParams};
use crate::special::{ln_factorial, ln_gamma, reg_lower_gamma};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub shape: f64,
    pub scale: f64,
    pub n_elements: u32,
    /// `shape` rounded half away from zero, at least 1.
    pub integer_shape: u32,
}

impl GammaFit {
    pub fn new(shape: f64, scale: f64, n_elements: u32) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0) {
            return Err(Error::Fit(format!("gamma fit needs positive shape and scale, got ({shape}, {scale})")));
        }
        let integer_shape = shape.round().max(1.0) as u32;
        Ok(Self { shape, scale, n_elements, integer_shape })
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    /// `E[G^s]` for `s > −ϑ`.
    pub fn moment(&self, s: f64) -> f64 {
        (s * self.scale.ln() + ln_gamma(self.shape + s) - ln_gamma(self.shape)).exp()
    }

    /// Same law family with the shape rounded to `integer_shape` and the
    /// scale adjusted so that the mean is unchanged.
    pub fn integer_variant(&self) -> Self {
        let n = self.integer_shape as f64;
        Self { shape: n, scale: self.mean() / n, ..*self }
    }

    pub fn has_integer_shape(&self) -> bool {
        self.shape == self.integer_shape as f64
    }
}

/// Moment-matched gamma law for the sum of `n` iid cascaded envelopes.
pub fn fit_laguerre_gamma(hop_s: AlphaMuParams, hop_r: AlphaMuParams, n: u32) -> Result<GammaFit> {
    if n == 0 {
        return Err(Error::Domain("RIS needs at least one element".into()));
    }
    let pp = ProductParams::new(hop_s, hop_r)?;
    let (m1, m2) = (pp.moment(1.0)?, pp.moment(2.0)?);
    let var = m2 - m1 * m1;
    if !(var > 1e-14 * m2) {
        return Err(Error::Fit(format!("cascaded envelope variance {var} is not positive (m1={m1}, m2={m2})")));
    }
    GammaFit::new(n as f64 * m1 * m1 / var, var / m1, n)
}

/// Gamma law for `√S` where `S = Σ_{q<L} (Σ_p θ_p φ_pq)²` is the combined
/// power of `L` eavesdroppers listening through one RIS with `n` elements:
/// the first hop `θ_p` is common to all of them.
///
/// Each `Σ_p θ_p φ_pq` is first replaced by its own gamma fit. `E[S]` and
/// `E[S²]` then use the fitted fourth moment on the diagonal and the exact
/// cross moment `E[Ỹ₁²Ỹ₂²]` off it, and `√S ~ Gamma(ϑ, ζ)` is matched to
/// those two moments. For `L = 1` this is the single-link fit.
pub fn fit_colluding_sum(hop_s: AlphaMuParams, hop_r: AlphaMuParams, n: u32, l: u32) -> Result<GammaFit> {
    let single = fit_laguerre_gamma(hop_s, hop_r, n)?;
    if l == 1 {
        return Ok(single);
    }
    let l = l as f64;
    let mean_s = l * single.moment(2.0);
    let second_s = l * single.moment(4.0) + l * (l - 1.0) * cross_fourth_moment(&hop_s, &hop_r, n)?;
    let r = second_s / (mean_s * mean_s);
    if !(r > 1.0) {
        return Err(Error::Fit(format!("combined eavesdropper power has ratio E[S²]/E[S]² = {r}")));
    }
    // E[G⁴]/E[G²]² = (ϑ+2)(ϑ+3)/(ϑ(ϑ+1)) = r solved for ϑ.
    let (a, b, c) = (r - 1.0, r - 5.0, -6.0);
    let shape = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
    let scale = (mean_s / (shape * (shape + 1.0))).sqrt();
    GammaFit::new(shape, scale, n)
}

/// `E[Ỹ₁² Ỹ₂²]` with `Ỹ_q = Σ_p θ_p φ_pq`, all `θ_p` shared and all `φ_pq`
/// independent. Summed over the set partitions of the four indices
/// `(p₁ p₂ | p₃ p₄)`; a partition with `k` blocks is realized by `n(n−1)…(n−k+1)`
/// index tuples.
pub fn cross_fourth_moment(hop_s: &AlphaMuParams, hop_r: &AlphaMuParams, n: u32) -> Result<f64> {
    let theta: Vec<f64> = (0..=4).map(|k| hop_s.moment(k as f64)).collect::<Result<_>>()?;
    let (phi1, phi2) = (hop_r.moment(1.0)?, hop_r.moment(2.0)?);
    let mut total = 0.0;
    for labels in set_partitions(4) {
        let blocks = labels.iter().max().map_or(0, |m| m + 1);
        let tuples: f64 = (0..blocks).map(|i| n as f64 - i as f64).product();
        if tuples <= 0.0 {
            continue;
        }
        let mut value = 1.0;
        for b in 0..blocks {
            value *= theta[labels.iter().filter(|&&x| x == b).count()];
        }
        for pair in [(0, 1), (2, 3)] {
            value *= if labels[pair.0] == labels[pair.1] { phi2 } else { phi1 * phi1 };
        }
        total += tuples * value;
    }
    Ok(total)
}

/// Set partitions of `{0..n}` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0]];
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|s| {
                let next = s.iter().max().unwrap() + 1;
                (0..=next).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisLinkParams {
    pub fit: GammaFit,
    pub beta: f64,
    pub avg_snr: f64,
}

impl RisLinkParams {
    pub fn new(fit: GammaFit, beta: f64, avg_snr: f64) -> Result<Self> {
        ensure_positive("beta", beta)?;
        ensure_positive("avg_snr", avg_snr)?;
        Ok(Self { fit, beta, avg_snr })
    }

    /// Rate of `√γ`: `√(β/(γ̄ζ²))`.
    pub fn xi(&self) -> f64 {
        (self.beta / self.avg_snr).sqrt() / self.fit.scale
    }

    pub fn pdf(&self, gamma: f64) -> f64 {
        if !(gamma > 0.0) {
            return 0.0;
        }
        let t = self.fit.shape;
        let xi = self.xi();
        (t * xi.ln() - std::f64::consts::LN_2 - ln_gamma(t) + (t / 2.0 - 1.0) * gamma.ln() - xi * gamma.sqrt()).exp()
    }

    pub fn cdf(&self, gamma: f64) -> f64 {
        if !(gamma > 0.0) {
            return 0.0;
        }
        reg_lower_gamma(self.fit.shape, self.xi() * gamma.sqrt())
    }

    /// `1 − e^{−x} Σ_{j<ϑ} x^j/j!` with `x = Ξ√γ`; integer shapes only.
    pub fn cdf_finite_sum(&self, gamma: f64) -> Result<f64> {
        if !self.fit.has_integer_shape() {
            return Err(Error::Mode(format!("finite-sum CDF needs an integer shape, got {}", self.fit.shape)));
        }
        if !(gamma > 0.0) {
            return Ok(0.0);
        }
        let x = self.xi() * gamma.sqrt();
        let tail: f64 =
            (0..self.fit.integer_shape).map(|j| (j as f64 * x.ln() - x - ln_factorial(j as u64)).exp()).sum();
        Ok(1.0 - tail)
    }
}

pub fn gamma_d_pdf(gamma: f64, link: &RisLinkParams) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Domain(format!("SNR density needs finite γ > 0, got {gamma}")));
    }
    Ok(link.pdf(gamma))
}

pub fn gamma_d_cdf(gamma: f64, link: &RisLinkParams) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::Domain(format!("SNR CDF needs γ >= 0, got {gamma}")));
    }
    Ok(link.cdf(gamma))
}
