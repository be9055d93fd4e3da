//! Lower bound `P[γ_D < Ψγ_E]` on the secrecy outage probability.
//!
//! Closed form: write the SIR CDF as its Meijer-G integral
//! `F(x) = Ξ₂ x^{ϑ/2} (1/2πi)∫ Φ(u) (𝒜₁x)^{−u} du` with
//! `Φ(u) = Γ(u)Γ(½+u)Γ(ϑ/2−u) Π_{j<B} Γ(c + j/B − u) / Γ(1+ϑ/2−u)`, and
//! average over every eavesdropper component `γ^κ ~ Gamma(a, r)`:
//!
//! `E[F(Ψγ)] = Ξ₂Ψ^{ϑ/2} r^{−ϑ/(2κ)}/Γ(a) · (1/2πi)∫ Φ(u) Γ(a + ϑ/(2κ) − u/κ) (𝒜₁Ψ r^{−1/κ})^{−u} du`.
//!
//! For rational `κ` this is a Meijer G-function after Gauss multiplication.
//! The high-SNR expansion keeps the residues at the first pole of each
//! left family.

use std::time::Instant;

use crate::config::{Case, Scenario, SecrecyTarget, SystemConfig};
use crate::eavesdropper::{EveConfig, EveLaw, PowerGamma};
use crate::error::{Error, Result};
use crate::interference::{sir_coefficients, SirCoefficients, SirQuadrature};
use crate::meijer_g::{
    evaluate_terms, halving_check, leading_terms, meijer_g_scaled, ContourSpec, GammaFactor, HalvingCheck,
    MeijerGParams, MellinBarnes,
};
use crate::quadrature::{LogSupport, Tolerance};
use crate::special::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    MonteCarlo,
    Quadrature,
    ClosedForm,
    Asymptotic,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::MonteCarlo => "mc",
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed-form",
            Method::Asymptotic => "asymptotic",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mc" | "monte-carlo" | "montecarlo" => Ok(Method::MonteCarlo),
            "quadrature" | "q" => Ok(Method::Quadrature),
            "closed-form" | "closedform" | "cf" => Ok(Method::ClosedForm),
            "asymptotic" | "asym" => Ok(Method::Asymptotic),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

impl serde::Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> serde::Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SopEstimate {
    pub value: f64,
    pub method: Method,
    pub uncertainty: f64,
    pub diagnostics: String,
}

/// Eavesdropper scenario and case, with the shared-RIS scenario folded into
/// the RIS variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    ColludingDirect,
    NonColludingDirect,
    ColludingRis,
    NonColludingRis,
}

impl Variant {
    pub const ALL: [Variant; 4] =
        [Variant::ColludingDirect, Variant::NonColludingDirect, Variant::ColludingRis, Variant::NonColludingRis];

    pub fn of(cfg: &SystemConfig) -> Self {
        match (cfg.scenario, cfg.case) {
            (Scenario::DirectLink, Case::Colluding) => Variant::ColludingDirect,
            (Scenario::DirectLink, Case::NonColluding) => Variant::NonColludingDirect,
            (_, Case::Colluding) => Variant::ColludingRis,
            (_, Case::NonColluding) => Variant::NonColludingRis,
        }
    }

    /// `cfg` with its scenario and case replaced by this variant's; a
    /// shared-RIS configuration stays shared for the RIS variants.
    pub fn apply(&self, cfg: &SystemConfig) -> SystemConfig {
        let ris = if cfg.scenario == Scenario::SharedRis { Scenario::SharedRis } else { Scenario::OwnRis };
        let (scenario, case) = match self {
            Variant::ColludingDirect => (Scenario::DirectLink, Case::Colluding),
            Variant::NonColludingDirect => (Scenario::DirectLink, Case::NonColluding),
            Variant::ColludingRis => (ris, Case::Colluding),
            Variant::NonColludingRis => (ris, Case::NonColluding),
        };
        SystemConfig { scenario, case, ..cfg.clone() }
    }
}

/// One Meijer-G term `weight · e^{ln_prefactor} · G[instance]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SopTerm {
    pub weight: f64,
    pub eve: PowerGamma,
    pub instance: MeijerGParams,
    pub ln_prefactor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SopCoefficients {
    pub sir: SirCoefficients,
    pub target: SecrecyTarget,
    pub terms: Vec<SopTerm>,
}

/// `x = p/q` with `q ≤ 12`, reduced.
fn small_rational(x: f64) -> Option<(u64, u64)> {
    (1..=12u64).find_map(|q| {
        let p = (x * q as f64).round();
        (p >= 1.0 && (x * q as f64 - p).abs() <= 1e-9 * p).then(|| {
            let p = p as u64;
            let g = gcd(p, q);
            (p / g, q / g)
        })
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn kernel(sir: &SirCoefficients, psi: f64, eve: &PowerGamma) -> Result<(MeijerGParams, f64)> {
    let (p, q) = small_rational(eve.exponent).ok_or_else(|| {
        Error::Mode(format!("eavesdropper exponent {} is not a small rational; use quadrature", eve.exponent))
    })?;
    let (t, k) = (sir.theta, eve.exponent);
    let c = sir.omega0 + 1.0;
    let b = sir.b1;
    let mut factors = vec![
        GammaFactor::numerator(0.0, 1, 1),
        GammaFactor::numerator(0.5, 1, 1),
        GammaFactor::numerator(t / 2.0, -1, 1),
        GammaFactor::denominator(1.0 + t / 2.0, -1, 1),
        GammaFactor::numerator(eve.shape + t / (2.0 * k), -(q as i64), p),
    ];
    factors.extend((0..b).map(|j| GammaFactor::numerator(c + j as f64 / b as f64, -1, 1)));
    let mb = MellinBarnes {
        factors,
        ln_x: (sir.a1 * psi).ln() - eve.rate.ln() / k,
        ln_prefactor: sir.ln_xi2 + (t / 2.0) * psi.ln() - t / (2.0 * k) * eve.rate.ln() - ln_gamma(eve.shape),
    };
    mb.to_meijer()
}

pub fn eve_law(cfg: &SystemConfig) -> Result<EveLaw> {
    EveConfig::from_system(cfg)?.law()
}

/// Meijer-G terms of the closed form for `cfg`'s scenario and case.
pub fn sop_coefficients(cfg: &SystemConfig) -> Result<SopCoefficients> {
    let sir = sir_coefficients(&cfg.destination_link()?, &cfg.interference()?)?;
    let target = cfg.target()?;
    let terms = eve_law(cfg)?
        .components
        .into_iter()
        .map(|(weight, eve)| {
            let (instance, ln_prefactor) = kernel(&sir, target.psi, &eve)?;
            Ok(SopTerm { weight, eve, instance, ln_prefactor })
        })
        .collect::<Result<_>>()?;
    Ok(SopCoefficients { sir, target, terms })
}

const SLACK: f64 = 1e-8;

fn clamp_probability(value: f64, what: &str) -> Result<f64> {
    if (-SLACK..=1.0 + SLACK).contains(&value) {
        Ok(value.clamp(0.0, 1.0))
    } else {
        Err(Error::Convergence(format!("{what} produced {value}, outside [0, 1]")))
    }
}

pub fn sop_closed_form(cfg: &SystemConfig) -> Result<SopEstimate> {
    let start = Instant::now();
    let co = sop_coefficients(cfg)?;
    let spec = ContourSpec::default();
    let (mut value, mut error) = (0.0, 0.0);
    let mut nodes = 0;
    for t in &co.terms {
        let g = meijer_g_scaled(&t.instance, &spec, t.ln_prefactor)?;
        value += t.weight * g.value;
        error += t.weight.abs() * g.error;
        nodes += g.nodes;
    }
    Ok(SopEstimate {
        value: clamp_probability(value, "closed form")?,
        method: Method::ClosedForm,
        uncertainty: error,
        diagnostics: format!(
            "{:?}: {} Meijer-G term(s), {} contour nodes, {:.1} ms",
            Variant::of(cfg),
            co.terms.len(),
            nodes,
            start.elapsed().as_secs_f64() * 1e3
        ),
    })
}

pub fn sop_colluding_direct(cfg: &SystemConfig) -> Result<SopEstimate> {
    sop_closed_form(&Variant::ColludingDirect.apply(cfg))
}

pub fn sop_noncolluding_direct(cfg: &SystemConfig) -> Result<SopEstimate> {
    sop_closed_form(&Variant::NonColludingDirect.apply(cfg))
}

pub fn sop_colluding_ris(cfg: &SystemConfig) -> Result<SopEstimate> {
    sop_closed_form(&Variant::ColludingRis.apply(cfg))
}

pub fn sop_noncolluding_ris(cfg: &SystemConfig) -> Result<SopEstimate> {
    sop_closed_form(&Variant::NonColludingRis.apply(cfg))
}

/// Contour-halving check of every Meijer-G term of the closed form.
pub fn sop_halving_checks(cfg: &SystemConfig) -> Result<Vec<HalvingCheck>> {
    sop_coefficients(cfg)?
        .terms
        .iter()
        .map(|t| halving_check(&t.instance, &ContourSpec::default(), t.ln_prefactor))
        .collect()
}

/// High-SNR expansion: each Meijer-G term replaced by its leading residues.
/// Not clamped; values above one at low SNR are expected.
pub fn sop_asymptotic(variant: Variant, cfg: &SystemConfig) -> Result<SopEstimate> {
    let cfg = variant.apply(cfg);
    let co = sop_coefficients(&cfg)?;
    let mut value = 0.0;
    for t in &co.terms {
        let lead = leading_terms(&t.instance)?;
        value += t.weight * t.ln_prefactor.exp() * evaluate_terms(&lead, t.instance.z);
    }
    let diagnostics = if value > 1.0 { "exceeds 1: outside the high-SNR regime".to_string() } else { String::new() };
    Ok(SopEstimate { value, method: Method::Asymptotic, uncertainty: 0.0, diagnostics })
}

/// `∫₀^∞ F(Ψγ) f(γ) dγ` over the log-support of `eve_pdf`.
pub fn sop_lower_quadrature<F, G>(dest_cdf: F, eve_pdf: G, target: SecrecyTarget) -> Result<SopEstimate>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let support = LogSupport::of(&eve_pdf)?;
    let r = support.integrate(|g| dest_cdf(target.psi * g) * eve_pdf(g), Tolerance::new(1e-13, 1e-10))?;
    Ok(SopEstimate {
        value: clamp_probability(r.value, "quadrature")?,
        method: Method::Quadrature,
        uncertainty: r.error,
        diagnostics: format!("{} integrand evaluations", r.evaluations),
    })
}

/// Quadrature route: SIR CDF by integrating over the interference law and
/// the eavesdropper density evaluated directly (order statistic for the
/// non-colluding case). Works for every `α_i`, `α_e`.
/// Non-colluding eavesdroppers enter through `L·F^{L−1}·f` of the single law
/// rather than its expansion, so no integer shape is needed here.
pub fn sop_quadrature(cfg: &SystemConfig) -> Result<SopEstimate> {
    let eve = EveConfig::from_system(cfg)?;
    if cfg.case == Case::NonColluding && cfg.l_eves > 1 {
        let single = eve.single_law()?;
        let l = cfg.l_eves as f64;
        return quadrature_against(cfg, |g| l * single.cdf(g).powf(l - 1.0) * single.pdf(g));
    }
    let law = eve.law()?;
    quadrature_against(cfg, |g| law.pdf(g))
}

fn quadrature_against(cfg: &SystemConfig, eve_pdf: impl Fn(f64) -> f64) -> Result<SopEstimate> {
    let sir = SirQuadrature::new(cfg.destination_link()?, cfg.interference()?)?;
    let failure = std::cell::Cell::new(None);
    let dest = |x: f64| match sir.cdf(x) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e.to_string()));
            f64::NAN
        }
    };
    let est = sop_lower_quadrature(dest, eve_pdf, cfg.target()?);
    if let Some(msg) = failure.take() {
        return Err(Error::Quadrature(format!("inner SIR integral failed: {msg}")));
    }
    est
}

pub fn sop(cfg: &SystemConfig, method: Method) -> Result<SopEstimate> {
    match method {
        Method::ClosedForm => sop_closed_form(cfg),
        Method::Quadrature => sop_quadrature(cfg),
        Method::Asymptotic => sop_asymptotic(Variant::of(cfg), cfg),
        Method::MonteCarlo => Err(Error::Mode("Monte-Carlo estimates come from the montecarlo module".into())),
    }
}
