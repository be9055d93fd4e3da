//! Parameter sweeps, figure presets and their CSV/SVG output.

use std::fmt::Write as _;
use std::io;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Case, Scenario, SystemConfig, AXES};
use crate::error::{Error, Result};
use crate::montecarlo::{count_outages, estimate_sop, Mode, OutageCounts, DEFAULT_TRIALS};
use crate::sop::{sop, Method, SopEstimate};

/// One curve of a sweep: overrides applied to the base configuration.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Curve {
    pub label: String,
    pub scenario: Option<Scenario>,
    pub case: Option<Case>,
    /// `(axis, value)` pairs in the units of [`SystemConfig::set_axis`].
    pub overrides: Vec<(String, f64)>,
}

impl Curve {
    pub fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), ..Self::default() }
    }

    pub fn scenario(mut self, s: Scenario) -> Self {
        self.scenario = Some(s);
        self
    }

    pub fn case(mut self, c: Case) -> Self {
        self.case = Some(c);
        self
    }

    pub fn set(mut self, axis: &str, value: f64) -> Self {
        self.overrides.push((axis.to_string(), value));
        self
    }

    pub fn apply(&self, base: &SystemConfig) -> Result<SystemConfig> {
        let mut cfg = base.clone();
        cfg.scenario = self.scenario.unwrap_or(cfg.scenario);
        cfg.case = self.case.unwrap_or(cfg.case);
        for (axis, value) in &self.overrides {
            cfg.set_axis(axis, *value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub base: SystemConfig,
    pub axis: String,
    pub values: Vec<f64>,
    pub methods: Vec<Method>,
    pub curves: Vec<Curve>,
    pub trials: u64,
    pub seed: u64,
    /// Event counted by the Monte-Carlo rows.
    pub mc_event: McEvent,
    /// Write measured wall times; off gives byte-identical reruns.
    pub record_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McEvent {
    LowerBound,
    Exact,
}

impl From<McEvent> for Mode {
    fn from(e: McEvent) -> Self {
        match e {
            McEvent::LowerBound => Mode::LowerBound,
            McEvent::Exact => Mode::Exact,
        }
    }
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            base: SystemConfig::default(),
            axis: "avg_snr_d_db".into(),
            values: snr_grid(),
            methods: vec![Method::ClosedForm],
            curves: Vec::new(),
            trials: DEFAULT_TRIALS,
            seed: 1,
            mc_event: McEvent::LowerBound,
            record_timing: true,
        }
    }
}

/// `0, 10, …, 160` dB.
pub fn snr_grid() -> Vec<f64> {
    (0..=16).map(|i| 10.0 * i as f64).collect()
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad number {s:?} in {text:?}")));
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0 && b >= a) {
                return Err(Error::Config(format!("range {text:?} needs start <= stop and step > 0")));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            (0..=n).map(|i| a + step * i as f64).collect()
        }
        [_] => text.split(',').map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(Error::Config(format!("cannot parse values {text:?}"))),
    };
    Ok(values)
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !AXES.contains(&self.axis.as_str()) {
            return Err(Error::Config(format!("unknown axis {:?}; expected one of {AXES:?}", self.axis)));
        }
        if self.values.is_empty() || self.methods.is_empty() {
            return Err(Error::Config("a sweep needs at least one value and one method".into()));
        }
        for curve in self.curves_or_base() {
            let cfg = curve.apply(&self.base)?;
            for &v in &self.values {
                cfg.clone().set_axis(&self.axis, v)?;
            }
        }
        Ok(())
    }

    fn curves_or_base(&self) -> Vec<Curve> {
        if self.curves.is_empty() {
            vec![Curve::new("base")]
        } else {
            self.curves.clone()
        }
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub curve: String,
    pub axis: String,
    pub value: f64,
    pub method: Method,
    pub sop: Option<f64>,
    pub uncertainty: Option<f64>,
    pub wall_time_ms: f64,
    pub status: String,
}

impl Row {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

struct Point {
    curve: usize,
    value: usize,
    method: Method,
}

fn timed(f: impl FnOnce() -> Result<SopEstimate>) -> (Result<SopEstimate>, f64) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed().as_secs_f64() * 1e3)
}

/// Evaluates every `(curve, value, method)` point. Rows come out in curve,
/// value, method order regardless of scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    let curves = spec.curves_or_base();
    let configs: Vec<SystemConfig> = curves.iter().map(|c| c.apply(&spec.base)).collect::<Result<_>>()?;
    let at = |ci: usize, vi: usize| {
        let mut cfg = configs[ci].clone();
        cfg.set_axis(&spec.axis, spec.values[vi]).map(|_| cfg)
    };

    let analytic: Vec<Point> = (0..curves.len())
        .flat_map(|curve| {
            (0..spec.values.len()).flat_map(move |value| {
                spec.methods.iter().filter(|m| **m != Method::MonteCarlo).map(move |&method| Point {
                    curve,
                    value,
                    method,
                })
            })
        })
        .collect();
    let mut results: Vec<Option<(Result<SopEstimate>, f64)>> = Vec::new();
    results.resize_with(curves.len() * spec.values.len() * 4, || None);
    let slot = |p: &Point| (p.curve * spec.values.len() + p.value) * 4 + method_index(p.method);
    let evaluated: Vec<(usize, (Result<SopEstimate>, f64))> =
        analytic.par_iter().map(|p| (slot(p), timed(|| sop(&at(p.curve, p.value)?, p.method)))).collect();
    for (i, r) in evaluated {
        results[i] = Some(r);
    }

    if spec.methods.contains(&Method::MonteCarlo) {
        let mode = Mode::from(spec.mc_event);
        for ci in 0..curves.len() {
            for (vi, r) in monte_carlo_curve(spec, &configs[ci], mode, |vi| at(ci, vi)).into_iter().enumerate() {
                results[slot(&Point { curve: ci, value: vi, method: Method::MonteCarlo })] = Some(r);
            }
        }
    }

    let mut rows = Vec::new();
    for (ci, curve) in curves.iter().enumerate() {
        for (vi, &value) in spec.values.iter().enumerate() {
            for &method in &spec.methods {
                let (r, ms) =
                    results[slot(&Point { curve: ci, value: vi, method })].take().expect("every point evaluated");
                let wall_time_ms = if spec.record_timing { ms } else { 0.0 };
                let (sop, uncertainty, status) = match r {
                    Ok(e) => (Some(e.value), Some(e.uncertainty), "ok".to_string()),
                    Err(e) => (None, None, format!("error: {e}")),
                };
                rows.push(Row {
                    curve: curve.label.clone(),
                    axis: spec.axis.clone(),
                    value,
                    method,
                    sop,
                    uncertainty,
                    wall_time_ms,
                    status,
                });
            }
        }
    }
    Ok(rows)
}

fn method_index(m: Method) -> usize {
    match m {
        Method::MonteCarlo => 0,
        Method::Quadrature => 1,
        Method::ClosedForm => 2,
        Method::Asymptotic => 3,
    }
}

/// Along the destination-SNR axis one set of channel draws serves every
/// point; other axes change the channel law and are simulated per point.
fn monte_carlo_curve(
    spec: &SweepSpec,
    cfg: &SystemConfig,
    mode: Mode,
    at: impl Fn(usize) -> Result<SystemConfig>,
) -> Vec<(Result<SopEstimate>, f64)> {
    if spec.axis == "avg_snr_d_db" {
        let snrs: Vec<f64> = spec.values.iter().map(|&v| crate::config::db_to_linear(v)).collect();
        let start = Instant::now();
        let counts = count_outages(cfg, &snrs, spec.trials, spec.seed);
        let ms = start.elapsed().as_secs_f64() * 1e3 / snrs.len() as f64;
        match counts {
            Ok(counts) => counts.iter().map(|c: &OutageCounts| (Ok(c.estimate(mode)), ms)).collect(),
            Err(e) => {
                let msg = e.to_string();
                snrs.iter().map(|_| (Err(Error::Config(msg.clone())), ms)).collect()
            }
        }
    } else {
        (0..spec.values.len()).map(|vi| timed(|| estimate_sop(&at(vi)?, spec.trials, mode, spec.seed))).collect()
    }
}

/// RFC-4180 CSV with the header
/// `curve,axis,value,method,sop,uncertainty,wall_time_ms,status`.
pub fn write_csv<W: io::Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<Row>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(Error::from)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl std::str::FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig1" | "1" => Ok(FigureId::Fig1),
            "fig2" | "2" => Ok(FigureId::Fig2),
            "fig3" | "3" => Ok(FigureId::Fig3),
            "fig4" | "4" => Ok(FigureId::Fig4),
            other => Err(Error::Config(format!("unknown figure {other:?}; expected fig1..fig4"))),
        }
    }
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig1, FigureId::Fig2, FigureId::Fig3, FigureId::Fig4];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
        }
    }

    pub fn title(&self) -> &'static str {
        match self {
            FigureId::Fig1 => "SOP vs destination SNR for several N_E, M = 20",
            FigureId::Fig2 => "SOP vs destination SNR for several M and eavesdropper SNR",
            FigureId::Fig3 => "SOP vs destination SNR for several N_d, N_E = 20",
            FigureId::Fig4 => "SOP vs destination SNR for several L, colluding and not",
        }
    }

    /// Curve sets are reconstructions: the captions name the varied
    /// parameters but not their values.
    pub fn curves(&self) -> Vec<Curve> {
        match self {
            FigureId::Fig1 => [2, 10, 20]
                .map(|n| {
                    Curve::new(format!("N_E={n}"))
                        .scenario(Scenario::OwnRis)
                        .set("n_e", n as f64)
                        .set("m_interferers", 20.0)
                })
                .to_vec(),
            FigureId::Fig2 => [(2, 1.0), (4, 1.0), (2, 5.0), (4, 5.0)]
                .map(|(m, e)| {
                    Curve::new(format!("M={m},snr_e={e}dB"))
                        .scenario(Scenario::DirectLink)
                        .set("m_interferers", m as f64)
                        .set("avg_snr_e_db", e)
                })
                .to_vec(),
            FigureId::Fig3 => [(Scenario::DirectLink, "direct"), (Scenario::OwnRis, "ris")]
                .into_iter()
                .flat_map(|(sc, name)| {
                    [2, 10, 20].map(move |n| {
                        Curve::new(format!("{name},N_d={n}")).scenario(sc).set("n_d", n as f64).set("n_e", 20.0)
                    })
                })
                .collect(),
            FigureId::Fig4 => [2, 4]
                .into_iter()
                .flat_map(|l| {
                    [(Case::Colluding, "colluding"), (Case::NonColluding, "non_colluding")].map(move |(case, name)| {
                        Curve::new(format!("{name},L={l}"))
                            .scenario(Scenario::DirectLink)
                            .case(case)
                            .set("l_eves", l as f64)
                    })
                })
                .collect(),
        }
    }

    pub fn spec(&self, methods: Vec<Method>) -> SweepSpec {
        SweepSpec { curves: self.curves(), methods, ..SweepSpec::default() }
    }
}

pub fn reproduce_figure(id: FigureId, methods: Vec<Method>, trials: u64, seed: u64) -> Result<Vec<Row>> {
    run_sweep(&SweepSpec { trials, seed, ..id.spec(methods) })
}

const FLOOR: f64 = 1e-8;

/// Line plot of the rows with a log-scaled SOP axis. Monte-Carlo rows are
/// drawn as markers, other methods as lines.
pub fn render_svg(rows: &[Row], title: &str) -> String {
    let (w, h) = (760.0, 520.0);
    let (left, right, top, bottom) = (70.0, 230.0, 40.0, 50.0);
    let (pw, ph) = (w - left - right, h - top - bottom);
    let xs: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let (x0, x1) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };
    let lo = rows
        .iter()
        .filter_map(|r| r.sop)
        .filter(|&v| v > 0.0)
        .fold(1.0f64, f64::min)
        .max(FLOOR)
        .log10()
        .floor()
        .min(-1.0);
    let px = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| top + (0.0 - y.max(FLOOR).log10().max(lo)) / (0.0 - lo) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        left + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(svg, r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for d in (lo as i32)..=0 {
        let y = py(10f64.powi(d));
        let _ = writeln!(svg, r##"<line x1="{left}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/>"##, left + pw);
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{d}</text>"#, left - 6.0, y + 4.0);
    }
    let mut ticks: Vec<f64> = xs.clone();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    let stride = ticks.len().div_ceil(9).max(1);
    for x in ticks.iter().step_by(stride) {
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x}</text>"#, px(*x), top + ph + 18.0);
    }
    if let Some(r) = rows.first() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            left + pw / 2.0,
            h - 10.0,
            escape(&r.axis)
        );
    }

    const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];
    let mut series: Vec<(String, Method)> = Vec::new();
    for r in rows {
        if !series.contains(&(r.curve.clone(), r.method)) {
            series.push((r.curve.clone(), r.method));
        }
    }
    let labels: Vec<&String> = {
        let mut l: Vec<&String> = Vec::new();
        for (c, _) in &series {
            if !l.contains(&c) {
                l.push(c);
            }
        }
        l
    };
    for (i, (curve, method)) in series.iter().enumerate() {
        let color = COLORS[labels.iter().position(|l| *l == curve).unwrap_or(0) % COLORS.len()];
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| &r.curve == curve && r.method == *method)
            .filter_map(|r| r.sop.filter(|&v| v > 0.0 && v <= 1.0).map(|v| (px(r.value), py(v))))
            .collect();
        match method {
            Method::MonteCarlo => {
                for (x, y) in &pts {
                    let _ = writeln!(svg, r#"<circle cx="{x:.1}" cy="{y:.1}" r="3" fill="none" stroke="{color}"/>"#);
                }
            }
            _ => {
                let dash = match method {
                    Method::Asymptotic => r#" stroke-dasharray="6 4""#,
                    Method::Quadrature => r#" stroke-dasharray="2 3""#,
                    _ => "",
                };
                let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
                let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}"{dash}/>"#, path.join(" "));
            }
        }
        let ly = top + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{} ({})</text>"#,
            left + pw + 12.0,
            escape(curve),
            method
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
