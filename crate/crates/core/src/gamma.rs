//! Real gamma function, continued to negative non-integer arguments.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation, valid for `z >= 0.5`.
fn lanczos(z: f64) -> f64 {
    let z = z - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Euler gamma function for real `z`.
///
/// Arguments below 1/2 are lifted with `Γ(z) = Γ(z + 1) / z` until the
/// Lanczos approximation applies, which covers the sub-Ohmic range where
/// `s - 1` lies in `(-1, 0)`.
pub fn real_gamma_function(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite argument {z}")));
    }
    if z <= 0.0 && z == z.floor() {
        return Err(Error::GammaPole(z));
    }
    let mut shifted = z;
    let mut divisor = 1.0;
    while shifted < 0.5 {
        divisor *= shifted;
        shifted += 1.0;
    }
    Ok(lanczos(shifted) / divisor)
}
