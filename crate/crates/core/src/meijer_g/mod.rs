//! Meijer G-function of positive argument and real parameters,
//!
//! ```text
//! G^{m,n}_{p,q}[z | a; b] = 1/(2πi) ∫ Π_{j≤m} Γ(b_j + s) Π_{j≤n} Γ(1 − a_j − s)
//!                                    / (Π_{j>m} Γ(1 − b_j − s) Π_{j>n} Γ(a_j + s)) z^{−s} ds,
//! ```
//!
//! evaluated by the trapezoidal rule on a vertical line. The "left" poles
//! `−b_j − k` (j ≤ m) and "right" poles `1 − a_j + k` (j ≤ n) must be
//! separable by such a line. When the straight contour cancels badly (tiny
//! or huge `z`), the line is moved toward the integrand's minimum and the
//! poles it sweeps over are added back as residues, each computed by the
//! trapezoidal rule on a small circle. Coincident poles need no special
//! treatment on that route.

mod lgamma;
mod mellin;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::ln_gamma_signed;

pub use lgamma::log_gamma_complex;
pub use mellin::{GammaFactor, MellinBarnes};

use lgamma::ln_gamma;

/// `Δ(k, a) = {a/k, (a+1)/k, …, (a+k−1)/k}`.
pub fn delta_block(k: usize, a: f64) -> Vec<f64> {
    assert!(k >= 1, "delta_block needs k >= 1");
    (0..k).map(|j| (a + j as f64) / k as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGParams {
    /// `a_1 … a_n`
    pub a_front: Vec<f64>,
    /// `a_{n+1} … a_p`
    pub a_back: Vec<f64>,
    /// `b_1 … b_m`
    pub b_front: Vec<f64>,
    /// `b_{m+1} … b_q`
    pub b_back: Vec<f64>,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathType {
    /// A single vertical line at the separating abscissa.
    VerticalLine,
    /// Vertical line moved toward the integrand's minimum, with the poles it
    /// crosses added back as residues.
    Shifted,
}

/// Contour controls. `None` fields are chosen adaptively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub path: PathType,
    /// Starting abscissa; must separate the pole families.
    pub abscissa: Option<f64>,
    /// Fixed trapezoid step on the final line (disables step halving).
    pub step: Option<f64>,
    /// Fixed truncation `|Im s| ≤ half_extent` (disables tail detection).
    pub half_extent: Option<f64>,
    pub max_nodes: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self { path: PathType::Shifted, abscissa: None, step: None, half_extent: None, max_nodes: 400_000 }
    }
}

impl ContourSpec {
    pub fn vertical() -> Self {
        Self { path: PathType::VerticalLine, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeijerGValue {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    /// Imaginary part left over by the quadrature; zero in exact arithmetic.
    pub imag_residue: f64,
    /// Abscissa of the line actually integrated.
    pub abscissa: f64,
    pub step: f64,
    pub nodes: usize,
    /// Number of pole clusters whose residues were added.
    pub residues: usize,
}

/// One term `coefficient · z^exponent` of a residue expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingTerm {
    pub coefficient: f64,
    pub exponent: f64,
}

const TAIL_THRESHOLD: f64 = 1e-16;
const IMAG_TOLERANCE: f64 = 1e-8;
const MERGE_DISTANCE: f64 = 0.05;
const WALK_WINDOW: f64 = 200.0;
const WALK_MAX_STOPS: usize = 600;
const PROXY_NODES: [f64; 9] = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

impl MeijerGParams {
    pub fn new(a_front: Vec<f64>, a_back: Vec<f64>, b_front: Vec<f64>, b_back: Vec<f64>, z: f64) -> Result<Self> {
        let p = Self { a_front, a_back, b_front, b_back, z };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.a_front.iter().chain(&self.a_back).chain(&self.b_front).chain(&self.b_back);
        if let Some(v) = all.into_iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("Meijer G parameter {v} is not finite")));
        }
        if !(self.z.is_finite() && self.z > 0.0) {
            return Err(Error::Domain(format!("Meijer G argument must be finite and > 0, got {}", self.z)));
        }
        Ok(())
    }

    /// `(m, n, p, q)`.
    pub fn orders(&self) -> (usize, usize, usize, usize) {
        let (m, n) = (self.b_front.len(), self.a_front.len());
        (m, n, n + self.a_back.len(), m + self.b_back.len())
    }

    /// `m + n − (p + q)/2`; the contour integral converges absolutely iff > 0.
    pub fn delta(&self) -> f64 {
        let (m, n, p, q) = self.orders();
        (m + n) as f64 - (p + q) as f64 / 2.0
    }

    pub fn with_z(&self, z: f64) -> Self {
        Self { z, ..self.clone() }
    }

    fn ln_kernel(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &b in &self.b_front {
            acc += ln_gamma(b + s);
        }
        for &a in &self.a_front {
            acc += ln_gamma(1.0 - a - s);
        }
        for &b in &self.b_back {
            acc -= ln_gamma(1.0 - b - s);
        }
        for &a in &self.a_back {
            acc -= ln_gamma(a + s);
        }
        acc
    }

    fn ln_h(&self, s: Complex64, ln_z: f64) -> Complex64 {
        self.ln_kernel(s) - s * ln_z
    }

    fn h_scaled(&self, s: Complex64, ln_z: f64, ln_ref: f64) -> Complex64 {
        let l = self.ln_h(s, ln_z) - ln_ref;
        if l.re == f64::NEG_INFINITY {
            Complex64::new(0.0, 0.0)
        } else if l.re.is_nan() || l.im.is_nan() {
            Complex64::new(f64::NAN, f64::NAN)
        } else {
            l.exp()
        }
    }

    /// Open interval of admissible abscissas.
    fn separation(&self) -> (f64, f64) {
        let lo = self.b_front.iter().map(|b| -b).fold(f64::NEG_INFINITY, f64::max);
        let hi = self.a_front.iter().map(|a| 1.0 - a).fold(f64::INFINITY, f64::min);
        (lo, hi)
    }

    fn pole_distance(&self, x: f64) -> f64 {
        let family = |p0: f64, dir: f64| {
            let k = ((x - p0) * dir).round().max(0.0);
            (x - (p0 + dir * k)).abs()
        };
        let left = self.b_front.iter().map(|b| family(-b, -1.0));
        let right = self.a_front.iter().map(|a| family(1.0 - a, 1.0));
        left.chain(right).fold(f64::INFINITY, f64::min)
    }

    /// Poles of either family inside `[lo, hi]`, sorted ascending.
    fn poles_in(&self, lo: f64, hi: f64, left: bool, right: bool) -> Vec<f64> {
        let mut out = Vec::new();
        if left {
            for &b in &self.b_front {
                let mut k = ((-b - hi).max(0.0)).ceil();
                while -b - k >= lo {
                    if -b - k <= hi {
                        out.push(-b - k);
                    }
                    k += 1.0;
                }
            }
        }
        if right {
            for &a in &self.a_front {
                let p0 = 1.0 - a;
                let mut k = ((lo - p0).max(0.0)).ceil();
                while p0 + k <= hi {
                    if p0 + k >= lo {
                        out.push(p0 + k);
                    }
                    k += 1.0;
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Crude `ln max_t |h(c + it)|` used to rank candidate lines.
    fn proxy(&self, c: f64, ln_z: f64) -> f64 {
        PROXY_NODES
            .iter()
            .map(|&t| self.ln_h(Complex64::new(c, t), ln_z).re)
            .filter(|v| v.is_finite())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn meijer_g(p: &MeijerGParams, spec: &ContourSpec) -> Result<MeijerGValue> {
    meijer_g_scaled(p, spec, 0.0)
}

/// `e^{ln_prefactor} · G`, with the prefactor applied in log space so that
/// a huge prefactor times a tiny G does not under- or overflow.
pub fn meijer_g_scaled(p: &MeijerGParams, spec: &ContourSpec, ln_prefactor: f64) -> Result<MeijerGValue> {
    p.validate()?;
    if spec.max_nodes < 64 {
        return Err(Error::Domain(format!("max_nodes must be >= 64, got {}", spec.max_nodes)));
    }
    if p.delta() <= 0.0 {
        return Err(Error::Convergence(format!(
            "m + n - (p + q)/2 = {} <= 0: the contour integral does not converge absolutely",
            p.delta()
        )));
    }
    let ln_z = p.z.ln();
    let (lo, hi) = p.separation();
    if lo >= hi {
        return Err(Error::Contour(format!("pole families overlap: max(-b_front) = {lo} >= min(1 - a_front) = {hi}")));
    }
    let c0 = spec.abscissa.unwrap_or(if lo.is_finite() && hi.is_finite() {
        0.5 * (lo + hi)
    } else if lo.is_finite() {
        lo + 0.5
    } else {
        hi - 0.5
    });
    if !(c0 > lo && c0 < hi) || p.pole_distance(c0) < 1e-9 {
        return Err(Error::Contour(format!("abscissa {c0} does not separate the poles ({lo}, {hi})")));
    }
    let ln_ref = {
        let v = p.proxy(c0, ln_z);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let plan = match spec.path {
        PathType::VerticalLine => {
            Plan { c: c0, residue_sum: 0.0, residue_err: 0.0, crossed: 0, proxy: ln_ref, negligible: false }
        }
        PathType::Shifted => choose_line(p, c0, ln_z, ln_ref)?,
    };

    let (line_value, line_imag, line_err, step, nodes) = if plan.negligible {
        (0.0, 0.0, 10.0 * (plan.proxy - ln_ref).exp(), 0.0, 0)
    } else {
        let l = line_integral(p, plan.c, ln_z, ln_ref, spec)?;
        (l.sum.re, l.sum.im, l.error, l.step, l.nodes)
    };
    let value = plan.residue_sum + line_value;
    let error = plan.residue_err + line_err;
    if !(value.is_finite() && error.is_finite()) {
        return Err(Error::Convergence(format!("non-finite result at z = {}", p.z)));
    }
    if line_imag.abs() > IMAG_TOLERANCE * value.abs() && line_imag.abs() > error {
        return Err(Error::Convergence(format!(
            "imaginary residue {line_imag:e} exceeds {IMAG_TOLERANCE:e}·|{value:e}| at z = {}",
            p.z
        )));
    }
    if spec.path == PathType::Shifted && !(error <= 1e-6 * value.abs()) && value != 0.0 {
        return Err(Error::Convergence(format!(
            "error estimate {error:e} too large for value {value:e} at z = {}",
            p.z
        )));
    }
    let scale = (ln_ref + ln_prefactor).exp();
    Ok(MeijerGValue {
        value: value * scale,
        error: error * scale,
        imag_residue: line_imag * scale,
        abscissa: plan.c,
        step,
        nodes,
        residues: plan.crossed,
    })
}

/// Result of re-running an evaluation with half the final step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalvingCheck {
    pub value: f64,
    pub halved: f64,
    pub error: f64,
    pub passed: bool,
}

/// A-posteriori validity check: halving the trapezoid step must change the
/// value by no more than the reported error estimate.
pub fn halving_check(p: &MeijerGParams, spec: &ContourSpec, ln_prefactor: f64) -> Result<HalvingCheck> {
    let first = meijer_g_scaled(p, spec, ln_prefactor)?;
    if first.nodes == 0 {
        return Ok(HalvingCheck { value: first.value, halved: first.value, error: first.error, passed: true });
    }
    let halved_spec = ContourSpec { step: Some(0.5 * first.step), ..*spec };
    let second = meijer_g_scaled(p, &halved_spec, ln_prefactor)?;
    let diff = (second.value - first.value).abs();
    Ok(HalvingCheck { value: first.value, halved: second.value, error: first.error, passed: diff <= first.error })
}

struct Plan {
    c: f64,
    residue_sum: f64,
    residue_err: f64,
    crossed: usize,
    proxy: f64,
    negligible: bool,
}

#[derive(Clone, Copy)]
struct Stop {
    c: f64,
    proxy: f64,
    cost: f64,
    residue_sum: f64,
    residue_err: f64,
    crossed: usize,
    negligible: bool,
}

/// Walks left and right from `c0` and picks the line with the smallest
/// magnitude scale, counting both the line itself and the residues crossed.
fn choose_line(p: &MeijerGParams, c0: f64, ln_z: f64, ln_ref: f64) -> Result<Plan> {
    let start =
        Stop { c: c0, proxy: ln_ref, cost: ln_ref, residue_sum: 0.0, residue_err: 0.0, crossed: 0, negligible: false };
    let mut best = start;
    for dir in [-1.0, 1.0] {
        for stop in walk(p, c0, dir, ln_z, ln_ref)? {
            let better = if stop.negligible != best.negligible {
                stop.negligible && stop.cost <= best.cost + 1.0
            } else {
                stop.cost < best.cost - 1e-9
            };
            if better {
                best = stop;
            }
        }
    }
    Ok(Plan {
        c: best.c,
        residue_sum: best.residue_sum,
        residue_err: best.residue_err,
        crossed: best.crossed,
        proxy: best.proxy,
        negligible: best.negligible,
    })
}

fn walk(p: &MeijerGParams, c0: f64, dir: f64, ln_z: f64, ln_ref: f64) -> Result<Vec<Stop>> {
    let (lo, hi) = if dir < 0.0 { (c0 - WALK_WINDOW, c0) } else { (c0, c0 + WALK_WINDOW) };
    let mut family = p.poles_in(lo, hi, dir < 0.0, dir > 0.0);
    if dir < 0.0 {
        family.reverse();
    }
    let all = p.poles_in(lo - 2.0, hi + 2.0, true, true);

    let mut clusters: Vec<(f64, f64)> = Vec::new();
    for &x in &family {
        match clusters.last_mut() {
            Some(cl) if (x - cl.1).abs() < MERGE_DISTANCE => cl.1 = x,
            _ => clusters.push((x, x)),
        }
    }

    let mut stops = Vec::new();
    let mut pos = c0;
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut crossed = 0;
    let mut max_res = f64::NEG_INFINITY;
    let mut min_cost = ln_ref;
    let mut visit = |c: f64, sum: f64, err: f64, crossed: usize, max_res: f64, stops: &mut Vec<Stop>| -> bool {
        let proxy = p.proxy(c, ln_z);
        let cost = proxy.max(max_res);
        let negligible = sum != 0.0 && proxy - ln_ref < sum.abs().ln() - 39.0;
        stops.push(Stop { c, proxy, cost, residue_sum: sum, residue_err: err, crossed, negligible });
        min_cost = min_cost.min(cost);
        negligible || cost > min_cost + 25.0 || stops.len() >= WALK_MAX_STOPS || !proxy.is_finite()
    };

    for (i, &(near, far)) in clusters.iter().enumerate() {
        // Intermediate stops in long pole-free stretches.
        while (near - pos) * dir > 2.0 {
            pos += dir;
            if visit(pos, sum, err, crossed, max_res, &mut stops) {
                return Ok(stops);
            }
        }
        let (a, b) = if near < far { (near, far) } else { (far, near) };
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let gap = all
            .iter()
            .filter(|&&x| x < a - 1e-12 || x > b + 1e-12)
            .map(|&x| (x - center).abs() - half)
            .fold(f64::INFINITY, f64::min)
            .min(1.0);
        let radius = half + (0.45 * gap).min(half.max(1.0 / (1.0 + ln_z.abs())));
        let r = circle_residue(p, center, radius, ln_z, ln_ref)?;
        // Moving the line left past a pole adds its residue; moving right subtracts.
        sum += if dir < 0.0 { r.value } else { -r.value };
        err += r.error;
        crossed += 1;
        max_res = max_res.max(ln_ref + r.mass.ln());
        let next = clusters.get(i + 1).map(|cl| cl.0);
        pos = match next {
            Some(n) => 0.5 * (far + n),
            None => far + dir * 0.5,
        };
        if visit(pos, sum, err, crossed, max_res, &mut stops) {
            return Ok(stops);
        }
    }
    while (pos - c0).abs() < WALK_WINDOW - 1.0 && stops.len() < WALK_MAX_STOPS {
        pos += dir;
        if visit(pos, sum, err, crossed, max_res, &mut stops) {
            break;
        }
    }
    Ok(stops)
}

struct Residue {
    value: f64,
    error: f64,
    mass: f64,
}

/// `1/(2πi) ∮ h(s) ds` over the circle `|s − center| = radius`.
fn circle_residue(p: &MeijerGParams, center: f64, radius: f64, ln_z: f64, ln_ref: f64) -> Result<Residue> {
    let eval = |n: usize| -> (Complex64, f64) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for k in 0..n {
            let theta = 2.0 * PI * (k as f64 + 0.5) / n as f64;
            let w = Complex64::from_polar(radius, theta);
            let v = p.h_scaled(center + w, ln_z, ln_ref) * w;
            sum += v;
            mass += v.norm();
        }
        (sum / n as f64, mass / n as f64)
    };
    let mut n = 32;
    let (mut prev, _) = eval(n);
    loop {
        n *= 2;
        let (cur, mass) = eval(n);
        if !(cur.re.is_finite() && mass.is_finite()) {
            return Err(Error::Convergence(format!("non-finite residue near s = {center}")));
        }
        let diff = (cur - prev).norm();
        if diff <= 1e-7 * mass || diff == 0.0 {
            let error = diff * diff / mass.max(f64::MIN_POSITIVE) + 16.0 * f64::EPSILON * mass * (n as f64).sqrt();
            return Ok(Residue { value: cur.re, error, mass });
        }
        if n >= 8192 {
            return Err(Error::Convergence(format!(
                "residue circle at s = {center} (radius {radius}) did not converge"
            )));
        }
        prev = cur;
    }
}

struct Line {
    sum: Complex64,
    error: f64,
    step: f64,
    nodes: usize,
}

fn line_integral(p: &MeijerGParams, c: f64, ln_z: f64, ln_ref: f64, spec: &ContourSpec) -> Result<Line> {
    let d = p.pole_distance(c).min(4.0);
    if d < 1e-9 {
        return Err(Error::Contour(format!("abscissa {c} sits on a pole")));
    }
    let fixed = spec.step.is_some();
    let mut step = spec.step.unwrap_or((d / 4.0).min(0.5).min(PI / (2.0 * (ln_z.abs() + 1.0))));
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Domain(format!("contour step must be > 0, got {step}")));
    }
    for _ in 0..14 {
        let tr = trapezoid(p, c, step, ln_z, ln_ref, spec)?;
        let diff = (tr.fine - tr.coarse).norm();
        if fixed || diff <= 1e-6 * tr.mass {
            let error = if diff <= 1e-6 * tr.mass {
                4.0 * diff * diff / tr.mass.max(f64::MIN_POSITIVE)
                    + 16.0 * f64::EPSILON * tr.mass * (tr.nodes as f64).sqrt()
            } else {
                diff
            };
            let norm = 1.0 / (2.0 * PI);
            return Ok(Line { sum: tr.fine * norm, error: error * norm, step, nodes: tr.nodes });
        }
        step *= 0.5;
    }
    Err(Error::Convergence(format!("trapezoid did not converge on Re s = {c} (z = {})", p.z)))
}

struct Trapezoid {
    fine: Complex64,
    coarse: Complex64,
    mass: f64,
    nodes: usize,
}

fn trapezoid(p: &MeijerGParams, c: f64, step: f64, ln_z: f64, ln_ref: f64, spec: &ContourSpec) -> Result<Trapezoid> {
    let f = |t: f64| p.h_scaled(Complex64::new(c, t), ln_z, ln_ref);
    let f0 = f(0.0);
    if !f0.re.is_finite() {
        return Err(Error::Contour(format!("integrand not finite on the real axis at s = {c}")));
    }
    let (mut fine, mut coarse) = (f0, f0);
    let mut mass = f0.norm();
    let mut peak = mass;
    let mut quiet = 0;
    let mut k = 1usize;
    loop {
        let t = k as f64 * step;
        if let Some(h) = spec.half_extent {
            if t > h {
                break;
            }
        }
        let (fp, fm) = (f(t), f(-t));
        if !(fp.re.is_finite() && fm.re.is_finite()) {
            return Err(Error::Convergence(format!("integrand not finite at s = {c} ± {t}i")));
        }
        let pair = fp + fm;
        fine += pair;
        if k.is_multiple_of(2) {
            coarse += pair;
        }
        let mag = fp.norm().max(fm.norm());
        mass += fp.norm() + fm.norm();
        peak = peak.max(mag);
        if spec.half_extent.is_none() {
            if mag <= TAIL_THRESHOLD * peak {
                quiet += 1;
                if quiet >= 4 && k >= 32 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if 2 * k + 1 > spec.max_nodes {
            return Err(Error::Convergence(format!(
                "contour needs more than {} nodes (step {step}, z = {})",
                spec.max_nodes, p.z
            )));
        }
        k += 1;
    }
    Ok(Trapezoid { fine: fine * step, coarse: coarse * (2.0 * step), mass: mass * step, nodes: 2 * k - 1 })
}

fn signed_gamma_product(plus: &[f64], minus: &[f64]) -> Result<f64> {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for &x in plus {
        let (l, s) = ln_gamma_signed(x)?;
        ln += l;
        sign *= s;
    }
    for &x in minus {
        match ln_gamma_signed(x) {
            Ok((l, s)) => {
                ln -= l;
                sign *= s;
            }
            Err(Error::Degenerate(_)) => return Ok(0.0),
            Err(e) => return Err(e),
        }
    }
    Ok(sign * ln.exp())
}

/// Leading terms as `z → 0`: the residues at the first left pole of each
/// `b_front` family, `Σ_h c_h z^{b_h}`, sorted by exponent.
pub fn leading_terms(p: &MeijerGParams) -> Result<Vec<LeadingTerm>> {
    let mut out = Vec::with_capacity(p.b_front.len());
    for (h, &bh) in p.b_front.iter().enumerate() {
        let mut plus: Vec<f64> = p.b_front.iter().enumerate().filter(|&(j, _)| j != h).map(|(_, &b)| b - bh).collect();
        plus.extend(p.a_front.iter().map(|a| 1.0 - a + bh));
        let mut minus: Vec<f64> = p.b_back.iter().map(|b| 1.0 - b + bh).collect();
        minus.extend(p.a_back.iter().map(|a| a - bh));
        let coefficient = signed_gamma_product(&plus, &minus).map_err(|e| match e {
            Error::Degenerate(msg) => Error::Degenerate(format!("coincident left poles at b = {bh}: {msg}")),
            e => e,
        })?;
        out.push(LeadingTerm { coefficient, exponent: bh });
    }
    out.sort_by(|x, y| x.exponent.total_cmp(&y.exponent));
    Ok(out)
}

/// Leading terms as `z → ∞`: residues at the first right pole of each
/// `a_front` family, `Σ_h c_h z^{a_h − 1}`.
pub fn leading_terms_large(p: &MeijerGParams) -> Result<Vec<LeadingTerm>> {
    let mut out = Vec::with_capacity(p.a_front.len());
    for (h, &ah) in p.a_front.iter().enumerate() {
        let mut plus: Vec<f64> = p.b_front.iter().map(|b| b + 1.0 - ah).collect();
        plus.extend(p.a_front.iter().enumerate().filter(|&(j, _)| j != h).map(|(_, &a)| ah - a));
        let mut minus: Vec<f64> = p.b_back.iter().map(|b| ah - b).collect();
        minus.extend(p.a_back.iter().map(|a| 1.0 + a - ah));
        let coefficient = signed_gamma_product(&plus, &minus)?;
        out.push(LeadingTerm { coefficient, exponent: ah - 1.0 });
    }
    out.sort_by(|x, y| y.exponent.total_cmp(&x.exponent));
    Ok(out)
}

pub fn evaluate_terms(terms: &[LeadingTerm], z: f64) -> f64 {
    terms.iter().map(|t| t.coefficient * z.powf(t.exponent)).sum()
}

#[cfg(test)]
mod tests;
