//! System configuration. Average SNRs are linear inside the crate and
//! expressed in dB (`*_db` fields) in JSON.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::fading::AlphaMuParams;
use crate::interference::InterferenceParams;
use crate::ris_channel::{fit_laguerre_gamma, RisLinkParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Eavesdroppers listen on direct source links.
    DirectLink,
    /// Eavesdroppers are served by their own RIS with `n_e` elements.
    OwnRis,
    /// Eavesdroppers listen through the destination's RIS.
    SharedRis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// Eavesdroppers combine their SNRs.
    Colluding,
    /// The strongest eavesdropper decodes alone.
    NonColluding,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

mod db {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(super::linear_to_db(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        f64::deserialize(d).map(super::db_to_linear)
    }
}

/// `Ψ = 2^{τ₀}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyTarget {
    pub tau0: f64,
    pub psi: f64,
}

impl SecrecyTarget {
    pub fn new(tau0: f64) -> Result<Self> {
        if !(tau0.is_finite() && tau0 >= 0.0) {
            return Err(Error::Domain(format!("target secrecy rate must be finite and >= 0, got {tau0}")));
        }
        Ok(Self { tau0, psi: tau0.exp2() })
    }
}

/// Interferer and direct-eavesdropper fading is given in the power domain:
/// a link power is `γ̄·X` with `X ~ α-μ(alpha, mu, omega)`, so `α = 1`
/// means gamma-distributed power (Nakagami-μ envelopes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    /// RIS elements serving the destination.
    pub n_d: u32,
    /// RIS elements serving the eavesdroppers (own-RIS scenario).
    pub n_e: u32,
    pub l_eves: u32,
    pub m_interferers: u32,
    pub hop_s: AlphaMuParams,
    pub hop_r: AlphaMuParams,
    pub eve_hop_s: AlphaMuParams,
    pub eve_hop_r: AlphaMuParams,
    pub interferer: AlphaMuParams,
    pub eve_direct: AlphaMuParams,
    #[serde(rename = "avg_snr_d_db", with = "db")]
    pub avg_snr_d: f64,
    /// Per-link average SNR of the direct eavesdropper links.
    #[serde(rename = "avg_snr_e_db", with = "db")]
    pub avg_snr_e: f64,
    /// Average SNR of each eavesdropper's RIS link.
    #[serde(rename = "avg_snr_eve_ris_db", with = "db")]
    pub avg_snr_eve_ris: f64,
    /// Per-interferer average interference-to-noise ratio.
    #[serde(rename = "avg_snr_i_db", with = "db")]
    pub avg_snr_i: f64,
    pub beta_d: f64,
    pub beta_e: f64,
    pub scenario: Scenario,
    pub case: Case,
    pub tau0: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        let unit = AlphaMuParams { alpha: 1.0, mu: 1.0, omega: 1.0 };
        Self {
            n_d: 2,
            n_e: 2,
            l_eves: 2,
            m_interferers: 2,
            hop_s: AlphaMuParams::rayleigh(),
            hop_r: AlphaMuParams::rayleigh(),
            eve_hop_s: AlphaMuParams::rayleigh(),
            eve_hop_r: AlphaMuParams::rayleigh(),
            interferer: unit,
            eve_direct: unit,
            avg_snr_d: db_to_linear(100.0),
            avg_snr_e: db_to_linear(1.0),
            avg_snr_eve_ris: db_to_linear(1.0),
            avg_snr_i: db_to_linear(100.0),
            beta_d: 0.5,
            beta_e: 0.5,
            scenario: Scenario::DirectLink,
            case: Case::Colluding,
            tau0: 0.1,
        }
    }
}

/// Names accepted as sweep axes, all numeric fields of [`SystemConfig`].
pub const AXES: [&str; 11] = [
    "avg_snr_d_db",
    "avg_snr_e_db",
    "avg_snr_eve_ris_db",
    "avg_snr_i_db",
    "n_d",
    "n_e",
    "l_eves",
    "m_interferers",
    "beta_d",
    "beta_e",
    "tau0",
];

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, n) in
            [("n_d", self.n_d), ("n_e", self.n_e), ("l_eves", self.l_eves), ("m_interferers", self.m_interferers)]
        {
            if n == 0 {
                return Err(Error::Domain(format!("{name} must be >= 1")));
            }
        }
        for p in [&self.hop_s, &self.hop_r, &self.eve_hop_s, &self.eve_hop_r, &self.interferer, &self.eve_direct] {
            p.validate()?;
        }
        for (name, v) in [
            ("avg_snr_d", self.avg_snr_d),
            ("avg_snr_e", self.avg_snr_e),
            ("avg_snr_eve_ris", self.avg_snr_eve_ris),
            ("avg_snr_i", self.avg_snr_i),
            ("beta_d", self.beta_d),
            ("beta_e", self.beta_e),
        ] {
            ensure_positive(name, v)?;
        }
        SecrecyTarget::new(self.tau0).map(|_| ())
    }

    pub fn target(&self) -> Result<SecrecyTarget> {
        SecrecyTarget::new(self.tau0)
    }

    pub fn destination_link(&self) -> Result<RisLinkParams> {
        RisLinkParams::new(fit_laguerre_gamma(self.hop_s, self.hop_r, self.n_d)?, self.beta_d, self.avg_snr_d)
    }

    pub fn interference(&self) -> Result<InterferenceParams> {
        InterferenceParams::new(self.m_interferers, self.interferer, self.avg_snr_i)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets a sweep axis; SNR axes take dB, counts must be integral.
    pub fn set_axis(&mut self, axis: &str, value: f64) -> Result<()> {
        let count = |v: f64| -> Result<u32> {
            if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as u32)
            } else {
                Err(Error::Config(format!("axis {axis} needs a positive integer, got {value}")))
            }
        };
        match axis {
            "avg_snr_d_db" => self.avg_snr_d = db_to_linear(value),
            "avg_snr_e_db" => self.avg_snr_e = db_to_linear(value),
            "avg_snr_eve_ris_db" => self.avg_snr_eve_ris = db_to_linear(value),
            "avg_snr_i_db" => self.avg_snr_i = db_to_linear(value),
            "n_d" => self.n_d = count(value)?,
            "n_e" => self.n_e = count(value)?,
            "l_eves" => self.l_eves = count(value)?,
            "m_interferers" => self.m_interferers = count(value)?,
            "beta_d" => self.beta_d = value,
            "beta_e" => self.beta_e = value,
            "tau0" => self.tau0 = value,
            _ => return Err(Error::Config(format!("unknown axis {axis:?}; expected one of {AXES:?}"))),
        }
        self.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = SystemConfig::default();
        cfg.validate().unwrap();
        assert!((cfg.target().unwrap().psi - 0.1f64.exp2()).abs() < 1e-15);
        assert!((linear_to_db(cfg.avg_snr_i) - 100.0).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip_in_db() {
        let cfg = SystemConfig { avg_snr_d: db_to_linear(40.0), case: Case::NonColluding, ..SystemConfig::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"avg_snr_d_db\":40"));
        assert!(text.contains("\"non_colluding\""));
        let back = SystemConfig::from_json(&text).unwrap();
        assert!((back.avg_snr_d / cfg.avg_snr_d - 1.0).abs() < 1e-12);
        assert_eq!(back.case, Case::NonColluding);
    }

    #[test]
    fn partial_json_uses_defaults() {
        let cfg = SystemConfig::from_json(r#"{"n_d": 10, "scenario": "own_ris"}"#).unwrap();
        assert_eq!(cfg.n_d, 10);
        assert_eq!(cfg.scenario, Scenario::OwnRis);
        assert_eq!(cfg.l_eves, 2);
        assert!(SystemConfig::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(SystemConfig::from_json(r#"{"l_eves": 0}"#).is_err());
    }

    #[test]
    fn axes() {
        let mut cfg = SystemConfig::default();
        for axis in AXES {
            let v = if axis.ends_with("_db") { 10.0 } else { 3.0 };
            let v = if axis == "beta_d" || axis == "beta_e" || axis == "tau0" { 0.3 } else { v };
            cfg.set_axis(axis, v).unwrap();
        }
        assert_eq!(cfg.n_d, 3);
        assert!((cfg.avg_snr_d - 10.0).abs() < 1e-12);
        assert!(cfg.set_axis("n_d", 2.5).is_err());
        assert!(cfg.set_axis("nope", 1.0).is_err());
        assert!(cfg.set_axis("tau0", -1.0).is_err());
    }
}
