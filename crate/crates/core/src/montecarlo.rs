//! End-to-end channel simulation without the gamma approximation.
//!
//! RIS phases are assumed optimally aligned, so each cascade reduces to the
//! sum of envelope products. Trials are split into fixed-size chunks, each
//! drawn from its own ChaCha substream, so results depend only on the seed
//! and trial count and not on the thread count.

use rand::Rng;
use rayon::prelude::*;

use crate::config::{Case, Scenario, SystemConfig};
use crate::error::{Error, Result};
use crate::fading::AlphaMuSampler;
use crate::sop::{Method, SopEstimate};
use crate::stream::RngStream;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const MIN_TRIALS: u64 = 10_000;
const CHUNK: u64 = 1 << 14;

/// One draw of every link. Cascade hops are envelopes; direct eavesdropper
/// and interferer links are power gains.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelSample {
    pub theta_k: Vec<f64>,
    pub phi_k: Vec<f64>,
    /// Source to eavesdropper-RIS hop, shared by all eavesdroppers. Equal to
    /// `theta_k` in the shared-RIS scenario.
    pub theta_p: Vec<f64>,
    /// RIS to eavesdropper hops, row `q` for eavesdropper `q`.
    pub phi_pq: Vec<Vec<f64>>,
    pub h_sq: Vec<f64>,
    pub h_id: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `1 + γ_D < Ψ(1 + γ_E)`.
    Exact,
    /// `γ_D < Ψγ_E`.
    LowerBound,
}

struct Samplers {
    hop_s: AlphaMuSampler,
    hop_r: AlphaMuSampler,
    eve_hop_s: AlphaMuSampler,
    eve_hop_r: AlphaMuSampler,
    interferer: AlphaMuSampler,
    eve_direct: AlphaMuSampler,
}

impl Samplers {
    fn new(cfg: &SystemConfig) -> Self {
        let (eve_hop_s, eve_hop_r) = match cfg.scenario {
            Scenario::SharedRis => (cfg.hop_s, cfg.hop_r),
            _ => (cfg.eve_hop_s, cfg.eve_hop_r),
        };
        Self {
            hop_s: cfg.hop_s.sampler(),
            hop_r: cfg.hop_r.sampler(),
            eve_hop_s: eve_hop_s.sampler(),
            eve_hop_r: eve_hop_r.sampler(),
            interferer: cfg.interferer.sampler(),
            eve_direct: cfg.eve_direct.sampler(),
        }
    }

    fn fill<R: Rng + ?Sized>(&self, cfg: &SystemConfig, s: &mut ChannelSample, rng: &mut R) {
        let n_d = cfg.n_d as usize;
        let l = cfg.l_eves as usize;
        refill(&mut s.theta_k, n_d, || self.hop_s.sample(rng));
        refill(&mut s.phi_k, n_d, || self.hop_r.sample(rng));
        loop {
            refill(&mut s.h_id, cfg.m_interferers as usize, || self.interferer.sample(rng));
            if s.h_id.iter().any(|&h| h > 0.0) {
                break;
            }
        }
        match cfg.scenario {
            Scenario::DirectLink => {
                refill(&mut s.h_sq, l, || self.eve_direct.sample(rng));
                s.theta_p.clear();
                s.phi_pq.clear();
            }
            Scenario::OwnRis | Scenario::SharedRis => {
                if cfg.scenario == Scenario::SharedRis {
                    s.theta_p.clone_from(&s.theta_k);
                } else {
                    refill(&mut s.theta_p, cfg.n_e as usize, || self.eve_hop_s.sample(rng));
                }
                let n = s.theta_p.len();
                s.phi_pq.resize_with(l, Vec::new);
                for row in &mut s.phi_pq {
                    refill(row, n, || self.eve_hop_r.sample(rng));
                }
                s.h_sq.clear();
            }
        }
    }
}

fn refill(v: &mut Vec<f64>, n: usize, mut f: impl FnMut() -> f64) {
    v.clear();
    v.extend((0..n).map(|_| f()));
}

pub fn draw_sample<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ChannelSample {
    let mut s = ChannelSample::default();
    Samplers::new(cfg).fill(cfg, &mut s, rng);
    s
}

fn cascade(theta: &[f64], phi: &[f64]) -> f64 {
    let g: f64 = theta.iter().zip(phi).map(|(a, b)| a * b).sum();
    g * g
}

/// `γ_D / γ̄_d`, which lets one sample serve every destination SNR.
fn destination_gain(s: &ChannelSample, cfg: &SystemConfig) -> f64 {
    let interference: f64 = s.h_id.iter().sum::<f64>() * cfg.avg_snr_i;
    cascade(&s.theta_k, &s.phi_k) / (cfg.beta_d * interference)
}

fn eavesdropper_snr(s: &ChannelSample, cfg: &SystemConfig) -> f64 {
    let per_eve: Box<dyn Iterator<Item = f64> + '_> = match cfg.scenario {
        Scenario::DirectLink => Box::new(s.h_sq.iter().map(|h| cfg.avg_snr_e * h)),
        _ => {
            let beta = if cfg.scenario == Scenario::SharedRis { cfg.beta_d } else { cfg.beta_e };
            let scale = cfg.avg_snr_eve_ris / beta;
            Box::new(s.phi_pq.iter().map(move |row| scale * cascade(&s.theta_p, row)))
        }
    };
    match cfg.case {
        Case::Colluding => per_eve.sum(),
        Case::NonColluding => per_eve.fold(0.0, f64::max),
    }
}

/// `(γ_D, γ_E)` for one sample.
pub fn realize_snrs(s: &ChannelSample, cfg: &SystemConfig) -> (f64, f64) {
    (cfg.avg_snr_d * destination_gain(s, cfg), eavesdropper_snr(s, cfg))
}

pub fn is_outage(mode: Mode, gamma_d: f64, gamma_e: f64, psi: f64) -> bool {
    match mode {
        Mode::Exact => 1.0 + gamma_d < psi * (1.0 + gamma_e),
        Mode::LowerBound => gamma_d < psi * gamma_e,
    }
}

/// Outage counts of both events over the same samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutageCounts {
    pub trials: u64,
    pub exact: u64,
    pub lower_bound: u64,
}

impl OutageCounts {
    fn add(self, o: Self) -> Self {
        Self {
            trials: self.trials + o.trials,
            exact: self.exact + o.exact,
            lower_bound: self.lower_bound + o.lower_bound,
        }
    }

    pub fn count(&self, mode: Mode) -> u64 {
        match mode {
            Mode::Exact => self.exact,
            Mode::LowerBound => self.lower_bound,
        }
    }

    pub fn estimate(&self, mode: Mode) -> SopEstimate {
        let k = self.count(mode);
        let n = self.trials;
        SopEstimate {
            value: k as f64 / n as f64,
            method: Method::MonteCarlo,
            uncertainty: wilson_half_width(k, n, 1.96),
            diagnostics: format!("{mode:?}: {k} outages in {n} trials"),
        }
    }
}

/// Half-width of the Wilson score interval for `k` successes in `n` trials.
pub fn wilson_half_width(k: u64, n: u64, z: f64) -> f64 {
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::Domain(format!("Monte-Carlo needs at least {MIN_TRIALS} trials, got {trials}")));
    }
    Ok(())
}

/// Counts outages at each destination SNR in `avg_snr_d` (linear) using
/// common random numbers: every point sees the same channel draws.
pub fn count_outages(cfg: &SystemConfig, avg_snr_d: &[f64], trials: u64, seed: u64) -> Result<Vec<OutageCounts>> {
    cfg.validate()?;
    check_trials(trials)?;
    let psi = cfg.target()?.psi;
    let samplers = Samplers::new(cfg);
    let chunks = trials.div_ceil(CHUNK);
    let zero = vec![OutageCounts::default(); avg_snr_d.len()];
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::substream(seed, c);
            let mut s = ChannelSample::default();
            let mut counts = zero.clone();
            for _ in 0..CHUNK.min(trials - c * CHUNK) {
                samplers.fill(cfg, &mut s, &mut rng);
                let u = destination_gain(&s, cfg);
                let ge = eavesdropper_snr(&s, cfg);
                for (snr, n) in avg_snr_d.iter().zip(&mut counts) {
                    let gd = snr * u;
                    n.trials += 1;
                    n.exact += is_outage(Mode::Exact, gd, ge, psi) as u64;
                    n.lower_bound += is_outage(Mode::LowerBound, gd, ge, psi) as u64;
                }
            }
            counts
        })
        .reduce(|| zero.clone(), |a, b| a.into_iter().zip(b).map(|(x, y)| x.add(y)).collect());
    Ok(counts)
}

pub fn estimate_sop(cfg: &SystemConfig, trials: u64, mode: Mode, seed: u64) -> Result<SopEstimate> {
    Ok(count_outages(cfg, &[cfg.avg_snr_d], trials, seed)?[0].estimate(mode))
}

/// Raw `(γ_D, γ_E)` pairs, for distribution checks.
pub fn sample_snrs(cfg: &SystemConfig, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let samplers = Samplers::new(cfg);
    let mut rng = RngStream::seeded(seed);
    let mut s = ChannelSample::default();
    (0..n)
        .map(|_| {
            samplers.fill(cfg, &mut s, &mut rng);
            realize_snrs(&s, cfg)
        })
        .collect()
}
