//! Mellin–Barnes integrals with rational-slope gamma factors, reduced to a
//! Meijer G-function by the substitution `u = D v` and Gauss multiplication.

use std::f64::consts::PI;

use super::{meijer_g_scaled, ContourSpec, MeijerGParams, MeijerGValue};
use crate::error::{Error, Result};

/// `Γ(a + κu)` (or its reciprocal) with `κ = num/den ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor {
    pub a: f64,
    pub num: i64,
    pub den: u64,
    pub reciprocal: bool,
}

impl GammaFactor {
    pub fn numerator(a: f64, num: i64, den: u64) -> Self {
        Self { a, num, den, reciprocal: false }
    }

    pub fn denominator(a: f64, num: i64, den: u64) -> Self {
        Self { a, num, den, reciprocal: true }
    }
}

/// `e^{ln_prefactor} · 1/(2πi) ∫ Π Γ(a_i + κ_i u)^{±1} x^{−u} du`, with
/// `x = e^{ln_x}` and the contour separating the poles of factors with
/// positive slope (left) from those with negative slope (right).
#[derive(Debug, Clone, PartialEq)]
pub struct MellinBarnes {
    pub factors: Vec<GammaFactor>,
    pub ln_x: f64,
    pub ln_prefactor: f64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Drops numerator/denominator pairs that are the same gamma function.
fn cancel(numerator: &mut Vec<f64>, denominator: &mut Vec<f64>) {
    let mut i = 0;
    while i < numerator.len() {
        if let Some(j) = denominator.iter().position(|&d| (d - numerator[i]).abs() <= 1e-13 * d.abs().max(1.0)) {
            numerator.remove(i);
            denominator.remove(j);
        } else {
            i += 1;
        }
    }
}

impl MellinBarnes {
    /// Equivalent Meijer-G instance and the log of its constant prefactor.
    pub fn to_meijer(&self) -> Result<(MeijerGParams, f64)> {
        let mut scale: u64 = 1;
        for f in &self.factors {
            if f.num == 0 || f.den == 0 {
                return Err(Error::Domain("gamma factor slope must be a nonzero rational".into()));
            }
            let g = gcd(f.num.unsigned_abs(), f.den);
            let den = f.den / g;
            scale = scale / gcd(scale, den) * den;
        }
        let d = scale as f64;
        let mut ln_z = d * self.ln_x;
        let mut ln_pre = self.ln_prefactor + d.ln();
        let (mut a_front, mut a_back, mut b_front, mut b_back) = (vec![], vec![], vec![], vec![]);
        for f in &self.factors {
            let k = (f.num as i128 * scale as i128 / f.den as i128) as i64;
            let kk = k.unsigned_abs() as f64;
            let sign = if f.reciprocal { -1.0 } else { 1.0 };
            ln_pre += sign * ((1.0 - kk) / 2.0 * (2.0 * PI).ln() + (f.a - 0.5) * kk.ln());
            ln_z += sign * if k > 0 { -kk * kk.ln() } else { kk * kk.ln() };
            for j in 0..k.unsigned_abs() {
                let beta = (f.a + j as f64) / kk;
                match (k > 0, f.reciprocal) {
                    (true, false) => b_front.push(beta),
                    (false, false) => a_front.push(1.0 - beta),
                    (true, true) => a_back.push(beta),
                    (false, true) => b_back.push(1.0 - beta),
                }
            }
        }
        cancel(&mut a_front, &mut b_back);
        cancel(&mut b_front, &mut a_back);
        let z = ln_z.exp();
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::Domain(format!("Meijer G argument e^{ln_z} is out of range")));
        }
        Ok((MeijerGParams { a_front, a_back, b_front, b_back, z }, ln_pre))
    }

    pub fn evaluate(&self, spec: &ContourSpec) -> Result<MeijerGValue> {
        let (p, ln_pre) = self.to_meijer()?;
        meijer_g_scaled(&p, spec, ln_pre)
    }
}
