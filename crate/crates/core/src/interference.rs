//! Aggregate co-channel interference and the destination SIR.
//!
//! Each of the `M` equal-power interferers delivers `γ̄_i·X` with `X` an
//! α-μ power variable (`α_i`, `μ_i`, `Ω_i`). The aggregate is modelled as
//! an α-μ law with `μ → Mμ_i` and the single-interferer rate
//! `λ = μ_i/(γ̄_iΩ_i)^{α_i}`, exact for `α_i = 1`. The SIR is `γ_d / I`.

use crate::error::{ensure_positive, Error, Result};
use crate::fading::AlphaMuParams;
use crate::meijer_g::{delta_block, meijer_g_scaled, ContourSpec, MeijerGParams, MeijerGValue};
use crate::quadrature::{LogSupport, Tolerance};
use crate::ris_channel::RisLinkParams;
use crate::special::{ln_gamma, reg_lower_gamma};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceParams {
    pub m_interferers: u32,
    /// Power-domain law of one interferer, in units of `avg_snr_i`.
    pub fading: AlphaMuParams,
    pub avg_snr_i: f64,
}

impl InterferenceParams {
    pub fn new(m_interferers: u32, fading: AlphaMuParams, avg_snr_i: f64) -> Result<Self> {
        if m_interferers == 0 {
            return Err(Error::Domain("at least one interferer is required".into()));
        }
        fading.validate()?;
        ensure_positive("avg_snr_i", avg_snr_i)?;
        Ok(Self { m_interferers, fading, avg_snr_i })
    }

    pub fn shape(&self) -> f64 {
        self.m_interferers as f64 * self.fading.mu
    }

    pub fn rate(&self) -> f64 {
        self.fading.mu / (self.avg_snr_i * self.fading.omega).powf(self.fading.alpha)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let (a, m, l) = (self.fading.alpha, self.shape(), self.rate());
        (a.ln() + m * l.ln() - ln_gamma(m) + (a * m - 1.0) * x.ln() - l * x.powf(a)).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        reg_lower_gamma(self.shape(), self.rate() * x.powf(self.fading.alpha))
    }
}

pub fn interference_sum_pdf(x: f64, ip: &InterferenceParams) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("interference density needs finite x > 0, got {x}")));
    }
    Ok(ip.pdf(x))
}

/// Coefficients of the SIR law
/// `f(x) = Ξ₂ x^{ϑ/2−1} G^{2,B}_{B,2}[𝒜₁x | Δ(B, 1−Bc); 0, ½]` with
/// `B = 1/α_i`, `c = ω₀ + 1 = ϑ/2 + α_iMμ_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirCoefficients {
    pub a1: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub ln_xi2: f64,
    pub b1: u32,
    pub omega0: f64,
    /// Destination fit shape `ϑ_d`.
    pub theta: f64,
    /// Aggregate interference shape `Mμ_i` and rate `λ`.
    pub shape_i: f64,
    pub rate_i: f64,
}

/// `Some(k)` when `x` is within `1e-9` of a positive integer.
pub(crate) fn as_positive_integer(x: f64) -> Option<u32> {
    let r = x.round();
    (r >= 1.0 && (x - r).abs() <= 1e-9 * r && r <= u32::MAX as f64).then_some(r as u32)
}

pub fn sir_coefficients(link: &RisLinkParams, ip: &InterferenceParams) -> Result<SirCoefficients> {
    let alpha_i = ip.fading.alpha;
    let b1 = as_positive_integer(1.0 / alpha_i).ok_or_else(|| {
        Error::Mode(format!("1/α_i = {} is not an integer; use the quadrature SIR law", 1.0 / alpha_i))
    })?;
    let b = b1 as f64;
    let theta = link.fit.shape;
    let (m, lambda) = (ip.shape(), ip.rate());
    let xi1 = link.xi();
    let c = theta / 2.0 + m / b;
    let ln_c0 = theta * xi1.ln() - std::f64::consts::LN_2 - ln_gamma(theta);
    let ln_xi2 = ln_c0
        + (m - b * c) * lambda.ln()
        + (b * c - 0.5) * b.ln()
        + 0.5 * (1.0 - b) * (2.0 * std::f64::consts::PI).ln()
        - 0.5 * std::f64::consts::PI.ln()
        - ln_gamma(m);
    let a1 = xi1 * xi1 * b.powf(b) / (4.0 * lambda.powf(b));
    Ok(SirCoefficients { a1, xi1, xi2: ln_xi2.exp(), ln_xi2, b1, omega0: c - 1.0, theta, shape_i: m, rate_i: lambda })
}

impl SirCoefficients {
    fn c(&self) -> f64 {
        self.omega0 + 1.0
    }

    /// `Δ(B, 1 − Bc)`.
    pub fn upper_block(&self) -> Vec<f64> {
        let b = self.b1 as f64;
        delta_block(self.b1 as usize, 1.0 - b * self.c())
    }

    pub fn pdf_instance(&self, gamma: f64) -> MeijerGParams {
        MeijerGParams {
            a_front: self.upper_block(),
            a_back: vec![],
            b_front: vec![0.0, 0.5],
            b_back: vec![],
            z: self.a1 * gamma,
        }
    }

    pub fn cdf_instance(&self, gamma: f64) -> MeijerGParams {
        let mut a_front = vec![1.0 - self.theta / 2.0];
        a_front.extend(self.upper_block());
        MeijerGParams {
            a_front,
            a_back: vec![],
            b_front: vec![0.0, 0.5],
            b_back: vec![-self.theta / 2.0],
            z: self.a1 * gamma,
        }
    }
}

fn check_point(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("SIR law needs finite γ > 0, got {gamma}")))
    }
}

pub fn sir_pdf_value(gamma: f64, c: &SirCoefficients) -> Result<MeijerGValue> {
    check_point(gamma)?;
    let ln_pre = c.ln_xi2 + (c.theta / 2.0 - 1.0) * gamma.ln();
    meijer_g_scaled(&c.pdf_instance(gamma), &ContourSpec::default(), ln_pre)
}

pub fn sir_cdf_value(gamma: f64, c: &SirCoefficients) -> Result<MeijerGValue> {
    check_point(gamma)?;
    let ln_pre = c.ln_xi2 + (c.theta / 2.0) * gamma.ln();
    meijer_g_scaled(&c.cdf_instance(gamma), &ContourSpec::default(), ln_pre)
}

pub fn sir_pdf(gamma: f64, c: &SirCoefficients) -> Result<f64> {
    sir_pdf_value(gamma, c).map(|v| v.value.max(0.0))
}

pub fn sir_cdf(gamma: f64, c: &SirCoefficients) -> Result<f64> {
    sir_cdf_value(gamma, c).map(|v| v.value.clamp(0.0, 1.0))
}

/// SIR law by direct integration over the interference density; valid for
/// every `α_i`:
/// `f(x) = ∫ y f_d(xy) f_I(y) dy`, `F(x) = ∫ F_d(xy) f_I(y) dy`.
#[derive(Debug, Clone, Copy)]
pub struct SirQuadrature {
    pub link: RisLinkParams,
    pub ip: InterferenceParams,
    support: LogSupport,
    tol: Tolerance,
}

impl SirQuadrature {
    pub fn new(link: RisLinkParams, ip: InterferenceParams) -> Result<Self> {
        let support = LogSupport::of(|y| ip.pdf(y))?;
        Ok(Self { link, ip, support, tol: Tolerance::new(0.0, 1e-11) })
    }

    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        check_point(gamma)?;
        let (link, ip) = (&self.link, &self.ip);
        Ok(self.support.integrate(|y| y * link.pdf(gamma * y) * ip.pdf(y), self.tol)?.value)
    }

    pub fn cdf(&self, gamma: f64) -> Result<f64> {
        check_point(gamma)?;
        let (link, ip) = (&self.link, &self.ip);
        Ok(self.support.integrate(|y| link.cdf(gamma * y) * ip.pdf(y), self.tol)?.value.min(1.0))
    }
}
