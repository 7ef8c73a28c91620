//! Factors produced by preparing the probe with a projective measurement on
//! the jointly thermalized probe and bath.
//!
//! The joint Gibbs state splits into sectors labelled by the total spin
//! projection `n` (`±2, 0` for two qubits, `±1` for one). Sector `n` has
//! free energy `ω₀ n/2 - n² C/4`, and the preparation leaves each sector's
//! bath state displaced, so every coherence picks up the sector average
//!
//! ```text
//! X = Σ_n W_n e^{i n φ} / Σ_n W_n,   W_n = mult_n · e^{-β(ω₀ n/2 - n² C/4)}
//! ```
//!
//! written as `X = e^{-Γ_corr - iχ}`. Weights are handled in log space, so
//! nothing overflows as `β` grows; `T = 0` keeps only the ground sector.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::Scheme;
use crate::error::{ensure, Result};
use crate::estimand::Estimand;
use crate::spectral::{c_shift, d_c_shift_dx, d_phi_dx, phi_factor, BathState, SpectralDensity};

/// `(n, ln multiplicity)` for each spin sector.
fn sectors(scheme: Scheme) -> &'static [(f64, f64)] {
    const TWO: [(f64, f64); 3] = [(2.0, 0.0), (0.0, std::f64::consts::LN_2), (-2.0, 0.0)];
    const ONE: [(f64, f64); 2] = [(1.0, 0.0), (-1.0, 0.0)];
    match scheme {
        Scheme::TwoQubitTraced => &TWO,
        Scheme::SingleQubit => &ONE,
    }
}

fn ground_sector(scheme: Scheme) -> f64 {
    match scheme {
        Scheme::TwoQubitTraced => -2.0,
        Scheme::SingleQubit => -1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationFactors {
    pub scheme: Scheme,
    /// `a(t)/a(0)`.
    pub a_rel: f64,
    /// `b(t)/a(0)`.
    pub b_rel: f64,
    /// `ln a(0)`; `+∞` at `T = 0`.
    pub log_a0: f64,
    pub gamma_corr: f64,
    /// Continuous in `t`: equals `2φ` (two qubits) or `φ` (one qubit) at
    /// every zero of `b`.
    pub chi: f64,
}

impl CorrelationFactors {
    /// `a(t)`; overflows to infinity at large `β`.
    pub fn a(&self) -> f64 {
        self.a_rel * self.log_a0.exp()
    }

    pub fn b(&self) -> f64 {
        self.b_rel * self.log_a0.exp()
    }

    /// `X = e^{-Γ_corr - iχ}`.
    pub fn x(&self) -> Complex64 {
        Complex64::from_polar((-self.gamma_corr).exp(), -self.chi)
    }
}

fn log_weights(scheme: Scheme, omega_0: f64, c: f64, beta: f64) -> Vec<f64> {
    sectors(scheme)
        .iter()
        .map(|&(n, ln_mult)| ln_mult - beta * (0.5 * omega_0 * n - 0.25 * n * n * c))
        .collect()
}

/// `X(m) = Σ W_n e^{-i n m φ/2} / Σ W_n` for the sector mixture.
///
/// `m` is the change in total spin projection across the matrix element;
/// the traced qubit coherence uses `m = -2`.
pub fn sector_average(
    scheme: Scheme,
    omega_0: f64,
    c: f64,
    phi: f64,
    bath: &BathState,
    m: f64,
) -> Complex64 {
    let Some(beta) = bath.beta() else {
        let n = ground_sector(scheme);
        return Complex64::from_polar(1.0, -0.5 * n * m * phi);
    };
    let lw = log_weights(scheme, omega_0, c, beta);
    let top = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (&(n, _), &l) in sectors(scheme).iter().zip(&lw) {
        let w = (l - top).exp();
        num += w * Complex64::from_polar(1.0, -0.5 * n * m * phi);
        den += w;
    }
    num / den
}

fn wrap_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

fn scheme_phase(scheme: Scheme, phi: f64) -> f64 {
    match scheme {
        Scheme::TwoQubitTraced => 2.0 * phi,
        Scheme::SingleQubit => phi,
    }
}

fn assemble(scheme: Scheme, omega_0: f64, c: f64, phi: f64, bath: &BathState) -> CorrelationFactors {
    let psi = scheme_phase(scheme, phi);
    let Some(beta) = bath.beta() else {
        return CorrelationFactors {
            scheme,
            a_rel: psi.cos(),
            b_rel: psi.sin(),
            log_a0: f64::INFINITY,
            gamma_corr: 0.0,
            chi: psi,
        };
    };
    let x = sector_average(scheme, omega_0, c, phi, bath, -2.0);
    let (a_rel, b_rel) = (x.re, -x.im);
    // a(0) = Σ W_n / W_ref, with W_ref the weight of the n = 0 sector (two
    // qubits) or the geometric mean of the ±1 weights (one qubit)
    let lw = log_weights(scheme, omega_0, c, beta);
    let top = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = top + lw.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
    let log_a0 = match scheme {
        Scheme::TwoQubitTraced => lse - std::f64::consts::LN_2,
        Scheme::SingleQubit => lse - std::f64::consts::LN_2 - 0.25 * beta * c,
    };
    // The sector phases wind once around the origin per 2π of ψ, and only
    // cross the negative real axis at ψ ≡ π, so the branch follows ψ.
    let principal = b_rel.atan2(a_rel);
    let chi = psi + wrap_pi(principal - psi);
    let modulus = a_rel.hypot(b_rel);
    CorrelationFactors {
        scheme,
        a_rel,
        b_rel,
        log_a0,
        gamma_corr: -modulus.ln(),
        chi,
    }
}

fn validate(omega_0: f64, t: f64) -> Result<()> {
    ensure(omega_0.is_finite() && omega_0 > 0.0, || {
        format!("qubit splitting must be > 0, got {omega_0}")
    })?;
    ensure(t.is_finite() && t >= 0.0, || format!("time must be >= 0, got {t}"))
}

/// Correlation factors for the two-qubit probe.
pub fn corr_factors_two_qubit(
    sd: &SpectralDensity,
    bath: &BathState,
    omega_0: f64,
    t: f64,
) -> Result<CorrelationFactors> {
    corr_factors(Scheme::TwoQubitTraced, sd, bath, omega_0, t)
}

/// Correlation factors for a lone qubit probe.
pub fn corr_factors_single_qubit(
    sd: &SpectralDensity,
    bath: &BathState,
    omega_0: f64,
    t: f64,
) -> Result<CorrelationFactors> {
    corr_factors(Scheme::SingleQubit, sd, bath, omega_0, t)
}

pub fn corr_factors(
    scheme: Scheme,
    sd: &SpectralDensity,
    bath: &BathState,
    omega_0: f64,
    t: f64,
) -> Result<CorrelationFactors> {
    validate(omega_0, t)?;
    Ok(assemble(scheme, omega_0, c_shift(sd), phi_factor(sd, t), bath))
}

/// `(∂Γ_corr/∂x, ∂χ/∂x)` by the chain rule through `φ`, `C` and `β`.
pub fn d_corr_dx(
    sd: &SpectralDensity,
    bath: &BathState,
    omega_0: f64,
    t: f64,
    x: Estimand,
    scheme: Scheme,
) -> Result<(f64, f64)> {
    validate(omega_0, t)?;
    let dphi = d_phi_dx(sd, t, x);
    let Some(beta) = bath.beta() else {
        // ground sector only: Γ_corr ≡ 0, χ = ψ(φ)
        return Ok((0.0, scheme_phase(scheme, dphi)));
    };
    let c = c_shift(sd);
    let phi = phi_factor(sd, t);
    let dc = d_c_shift_dx(sd, x);
    let dbeta = match x {
        Estimand::Temperature => -beta * beta,
        _ => 0.0,
    };

    let lw = log_weights(scheme, omega_0, c, beta);
    let top = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut num = Complex64::new(0.0, 0.0);
    let mut dnum = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    let mut dden = 0.0;
    for (&(n, _), &l) in sectors(scheme).iter().zip(&lw) {
        let w = (l - top).exp();
        let dl = -(0.5 * omega_0 * n - 0.25 * n * n * c) * dbeta + 0.25 * n * n * beta * dc;
        let phase = Complex64::from_polar(1.0, n * phi);
        num += w * phase;
        dnum += w * phase * Complex64::new(dl, n * dphi);
        den += w;
        dden += w * dl;
    }
    let dlog_x = dnum / num - dden / den;
    Ok((-dlog_x.re, -dlog_x.im))
}

/// Correlation factors along a time grid.
pub fn corr_factors_along(
    scheme: Scheme,
    sd: &SpectralDensity,
    bath: &BathState,
    omega_0: f64,
    times: &[f64],
) -> Result<Vec<CorrelationFactors>> {
    times
        .iter()
        .map(|&t| corr_factors(scheme, sd, bath, omega_0, t))
        .collect()
}
