use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_6;

/// `B_{2k} / (2k (2k-1))` for `k = 1..=8`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Principal-branch `ln Γ(s)`: continuous off the negative real axis and
/// satisfying `lnΓ(s+1) = lnΓ(s) + ln s`.
pub fn log_gamma_complex(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("log-gamma of non-finite argument {s}")));
    }
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.floor() {
        return Err(Error::Domain(format!("log-gamma pole at {}", s.re)));
    }
    Ok(ln_gamma(s))
}

/// Unchecked variant; a pole yields an infinite real part.
pub(crate) fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let turn = (2.0 * PI).copysign(z.im) * (0.5 * z.re + 0.25).floor();
        return Complex64::new(PI.ln(), turn) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm_sqr() < 144.0 {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += c * power;
        power *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// Principal `ln sin(πz)`, stable for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 15.0 {
        return (PI * z).sin().ln();
    }
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    let i = Complex64::i();
    let v = -i * PI * z + (1.0 - (2.0 * i * PI * z).exp()).ln() - 2f64.ln() + i * (PI / 2.0);
    let turns = (v.im / (2.0 * PI)).round();
    Complex64::new(v.re, v.im - 2.0 * PI * turns)
}
