//! Bath spectral density and the dephasing factors derived from it.
//!
//! With `J(ω) = G ω^s ω_c^{1-s} e^{-ω/ω_c}` every factor is an integral
//! of `J(ω)/ω²` against an elementary kernel:
//!
//! | factor | kernel |
//! |--------|--------|
//! | `Γ_vac` | `1 - cos ωt` |
//! | `Γ_th`  | `(1 - cos ωt)(coth(βω/2) - 1)` |
//! | `Δ`     | `sin ωt - ωt` |
//! | `φ`     | `sin ωt` |
//! | `C`     | `ω` |
//!
//! All but `Γ_th` have closed forms, which are the production path. The
//! quadrature path in [`quadrature_factor`] is kept as an independent check
//! and as the only route to the thermal part.
//!
//! For `s ≠ 1` the closed forms are written with `u = ω_c t`,
//! `r = √(1+u²)`, `θ = atan u`, using
//! `(1 - iu)^{1-s} = r^{1-s} e^{i(s-1)θ}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::estimand::Estimand;
use crate::gamma::real_gamma_function;
use crate::quadrature::{integrate, QuadEstimate, QuadSettings};

/// `|s - 1|` below which the Ohmic closed forms are used.
const OHMIC_WINDOW: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    coupling: f64,
    ohmicity: f64,
    cutoff: f64,
}

impl SpectralDensity {
    pub fn new(coupling: f64, ohmicity: f64, cutoff: f64) -> Result<Self> {
        ensure(coupling.is_finite() && coupling >= 0.0, || {
            format!("coupling strength must be finite and >= 0, got {coupling}")
        })?;
        ensure(ohmicity.is_finite() && ohmicity > 0.0, || {
            format!("ohmicity must be finite and > 0, got {ohmicity}")
        })?;
        ensure(cutoff.is_finite() && cutoff > 0.0, || {
            format!("cutoff frequency must be finite and > 0, got {cutoff}")
        })?;
        Ok(SpectralDensity {
            coupling,
            ohmicity,
            cutoff,
        })
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn ohmicity(&self) -> f64 {
        self.ohmicity
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn is_ohmic(&self) -> bool {
        (self.ohmicity - 1.0).abs() < OHMIC_WINDOW
    }

    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        Self::new(coupling, self.ohmicity, self.cutoff)
    }

    pub fn with_cutoff(&self, cutoff: f64) -> Result<Self> {
        Self::new(self.coupling, self.ohmicity, cutoff)
    }

    /// Same shape, unit coupling. All G-linear factors are evaluated on this
    /// and scaled afterwards.
    fn unit(&self) -> Self {
        SpectralDensity {
            coupling: 1.0,
            ..*self
        }
    }

    /// `J(ω)`.
    pub fn eval(&self, omega: f64) -> Result<f64> {
        if omega.is_nan() || omega < 0.0 {
            return Err(Error::Domain(format!(
                "spectral density needs omega >= 0, got {omega}"
            )));
        }
        if omega == 0.0 || self.coupling == 0.0 {
            return Ok(0.0);
        }
        let v = omega / self.cutoff;
        Ok(self.coupling * self.cutoff * v.powf(self.ohmicity) * (-v).exp())
    }
}

/// Environment temperature. `T = 0` selects the analytic zero-temperature
/// limits everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathState {
    temperature: f64,
}

impl BathState {
    pub fn new(temperature: f64) -> Result<Self> {
        ensure(temperature.is_finite() && temperature >= 0.0, || {
            format!("temperature must be finite and >= 0, got {temperature}")
        })?;
        Ok(BathState { temperature })
    }

    pub fn zero() -> Self {
        BathState { temperature: 0.0 }
    }

    pub fn from_beta(beta: f64) -> Result<Self> {
        ensure(beta > 0.0, || format!("beta must be > 0, got {beta}"))?;
        Self::new(1.0 / beta)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn zero_temperature(&self) -> bool {
        self.temperature == 0.0
    }

    /// Inverse temperature; `None` at `T = 0`.
    pub fn beta(&self) -> Option<f64> {
        if self.zero_temperature() {
            None
        } else {
            Some(1.0 / self.temperature)
        }
    }
}

/// Which dephasing integral to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    GammaVac,
    GammaTh,
    Delta,
    Phi,
    CShift,
}

impl FactorKind {
    pub const ALL: [FactorKind; 5] = [
        FactorKind::GammaVac,
        FactorKind::GammaTh,
        FactorKind::Delta,
        FactorKind::Phi,
        FactorKind::CShift,
    ];
}

struct OhmicGeometry {
    u: f64,
    half_log_r2: f64,
    theta: f64,
}

impl OhmicGeometry {
    fn new(sd: &SpectralDensity, t: f64) -> Self {
        let u = sd.cutoff * t;
        OhmicGeometry {
            u,
            half_log_r2: 0.5 * (u * u).ln_1p(),
            theta: u.atan(),
        }
    }
}

fn gamma_of(z: f64) -> f64 {
    // Only reached for z ∈ {s, s-1} with s > 0 and s ≠ 1, which are never poles.
    real_gamma_function(z).expect("gamma argument validated by SpectralDensity")
}

/// `Γ_vac(t) = ∫ J(ω)/ω² (1 - cos ωt) dω`.
pub fn gamma_vac(sd: &SpectralDensity, t: f64) -> f64 {
    if t == 0.0 || sd.coupling == 0.0 {
        return 0.0;
    }
    let g = OhmicGeometry::new(sd, t);
    let value = if sd.is_ohmic() {
        g.half_log_r2
    } else {
        // 1 - r^{1-s} cos((1-s)θ), arranged to avoid cancellation at small u.
        let a = 1.0 - sd.ohmicity;
        let bracket = -(a * g.half_log_r2).exp_m1() * (a * g.theta).cos()
            + 2.0 * (0.5 * a * g.theta).sin().powi(2);
        gamma_of(sd.ohmicity - 1.0) * bracket
    };
    debug_assert!(value >= -1e-12 * value.abs().max(1.0), "Γ_vac < 0: {value}");
    sd.coupling * value.max(0.0)
}

/// `φ(t) = ∫ J(ω)/ω² sin ωt dω`.
pub fn phi_factor(sd: &SpectralDensity, t: f64) -> f64 {
    if t == 0.0 || sd.coupling == 0.0 {
        return 0.0;
    }
    let g = OhmicGeometry::new(sd, t);
    let value = if sd.is_ohmic() {
        g.theta
    } else {
        let a = 1.0 - sd.ohmicity;
        -gamma_of(sd.ohmicity - 1.0) * (a * g.half_log_r2).exp() * (a * g.theta).sin()
    };
    sd.coupling * value
}

/// `C = ∫ J(ω)/ω dω = G ω_c Γ̄(s)`.
pub fn c_shift(sd: &SpectralDensity) -> f64 {
    sd.coupling * sd.cutoff * gamma_of(sd.ohmicity)
}

/// `Δ(t) = ∫ J(ω)/ω² (sin ωt - ωt) dω = φ(t) - C t`.
pub fn delta_factor(sd: &SpectralDensity, t: f64) -> f64 {
    if t == 0.0 || sd.coupling == 0.0 {
        return 0.0;
    }
    if sd.is_ohmic() {
        let u = sd.cutoff * t;
        // atan(u) - u loses digits for small u; use the series there.
        let d = if u < 1e-3 {
            let u2 = u * u;
            -u * u2 * (1.0 / 3.0 - u2 * (1.0 / 5.0 - u2 / 7.0))
        } else {
            u.atan() - u
        };
        return sd.coupling * d;
    }
    phi_factor(sd, t) - c_shift(sd) * t
}

/// Shared `ω_c` derivative pieces: `G Γ̄(s) t r^{-s} (sin sθ, cos sθ)`.
fn cutoff_derivative_pair(sd: &SpectralDensity, t: f64) -> (f64, f64) {
    if t == 0.0 {
        return (0.0, 0.0);
    }
    let g = OhmicGeometry::new(sd, t);
    let s = sd.ohmicity;
    let pref = sd.coupling * gamma_of(s) * t * (-s * g.half_log_r2).exp();
    (pref * (s * g.theta).sin(), pref * (s * g.theta).cos())
}

/// `∂Γ_vac/∂x` in closed form (zero for `x = T`).
pub fn d_gamma_vac_dx(sd: &SpectralDensity, t: f64, x: Estimand) -> f64 {
    match x {
        Estimand::CutoffFrequency => cutoff_derivative_pair(sd, t).0,
        Estimand::CouplingStrength => gamma_vac(&sd.unit(), t),
        Estimand::Temperature => 0.0,
    }
}

/// `∂φ/∂x` in closed form.
pub fn d_phi_dx(sd: &SpectralDensity, t: f64, x: Estimand) -> f64 {
    match x {
        Estimand::CutoffFrequency => cutoff_derivative_pair(sd, t).1,
        Estimand::CouplingStrength => phi_factor(&sd.unit(), t),
        Estimand::Temperature => 0.0,
    }
}

/// `∂C/∂x`.
pub fn d_c_shift_dx(sd: &SpectralDensity, x: Estimand) -> f64 {
    match x {
        Estimand::CutoffFrequency => sd.coupling * gamma_of(sd.ohmicity),
        Estimand::CouplingStrength => sd.cutoff * gamma_of(sd.ohmicity),
        Estimand::Temperature => 0.0,
    }
}

/// `∂Δ/∂x` in closed form.
pub fn d_delta_dx(sd: &SpectralDensity, t: f64, x: Estimand) -> f64 {
    match x {
        Estimand::CutoffFrequency => {
            if t == 0.0 {
                return 0.0;
            }
            // G Γ̄(s) t (r^{-s} cos sθ - 1); the s = 1 case is -G ω_c² t³/(1+ω_c²t²).
            let g = OhmicGeometry::new(sd, t);
            let s = sd.ohmicity;
            let pref = sd.coupling * gamma_of(s) * t;
            let inner = if g.u < 1e-4 {
                // r^{-s} cos sθ - 1 ≈ -s(s+1)u²/2
                -0.5 * s * (s + 1.0) * g.u * g.u
            } else {
                (-s * g.half_log_r2).exp() * (s * g.theta).cos() - 1.0
            };
            pref * inner
        }
        Estimand::CouplingStrength => delta_factor(&sd.unit(), t),
        Estimand::Temperature => 0.0,
    }
}

/// `Γ_th(t)`, by quadrature; exactly zero at `T = 0`.
pub fn gamma_th(
    sd: &SpectralDensity,
    bath: &BathState,
    t: f64,
    quad: &QuadSettings,
) -> Result<f64> {
    if bath.zero_temperature() || t == 0.0 || sd.coupling == 0.0 {
        return Ok(0.0);
    }
    let unit = quadrature_factor(FactorKind::GammaTh, &sd.unit(), bath, t, quad)?;
    Ok(sd.coupling * unit.value.max(0.0))
}

/// `∂Γ_th/∂x`. Cutoff and coupling derivatives integrate the differentiated
/// integrand; the temperature derivative is a Richardson-extrapolated
/// finite difference of [`gamma_th`].
pub fn d_gamma_th_dx(
    sd: &SpectralDensity,
    bath: &BathState,
    t: f64,
    x: Estimand,
    quad: &QuadSettings,
) -> Result<f64> {
    if t == 0.0 || sd.coupling == 0.0 {
        return Ok(0.0);
    }
    match x {
        Estimand::CutoffFrequency | Estimand::CouplingStrength => {
            if bath.zero_temperature() {
                return Ok(0.0);
            }
            Ok(quadrature_factor_dx(FactorKind::GammaTh, sd, bath, t, x, quad)?.value)
        }
        Estimand::Temperature => {
            // difference quotients amplify quadrature noise by 1/h
            let fine = QuadSettings {
                rel_tol: quad.rel_tol.min(1e-11),
                ..*quad
            };
            temperature_difference(
                |temp| gamma_th(sd, &BathState::new(temp)?, t, &fine),
                bath.temperature(),
            )
        }
    }
}

/// `Γ_th` from the expansion `coth(βω/2) - 1 = 2 Σ_k e^{-kβω}`.
///
/// Each term is a vacuum factor with the reduced cutoff
/// `ω_k = ω_c/(1 + kβω_c)`, rescaled by `(ω_c/ω_k)^{1-s}`. Terms past
/// `terms` are summed with their small-`ω_k t` leading order, integrated in
/// `k`. Shares no code with the quadrature path.
pub fn gamma_th_series(sd: &SpectralDensity, bath: &BathState, t: f64, terms: usize) -> f64 {
    let Some(beta) = bath.beta() else {
        return 0.0;
    };
    if t == 0.0 || sd.coupling == 0.0 {
        return 0.0;
    }
    let (wc, s) = (sd.cutoff, sd.ohmicity);
    let mut sum = 0.0;
    for k in 1..=terms {
        let wk = wc / (1.0 + k as f64 * beta * wc);
        let reduced = SpectralDensity { cutoff: wk, ..*sd };
        sum += 2.0 * (wc / wk).powf(1.0 - s) * gamma_vac(&reduced, t);
    }
    // 2 (ω_c/ω_k)^{1-s} Γ_vac(ω_k) -> G t² Γ̄(s+1) ω_c^{1-s} ω_k^{1+s}
    let edge = 1.0 + (terms as f64 + 0.5) * beta * wc;
    let tail_k = wc.powf(1.0 + s) / (beta * wc * s) * edge.powf(-s);
    sum + sd.coupling * t * t * gamma_of(s + 1.0) * wc.powf(1.0 - s) * tail_k
}

/// Step used for temperature finite differences.
pub fn temperature_step(temperature: f64) -> f64 {
    (1e-4 * temperature).max(1e-6)
}

/// Richardson-extrapolated derivative in `T`: central differences at steps
/// `h` and `h/2` when `T > h`, one-sided differences otherwise.
pub fn temperature_difference<F>(f: F, temperature: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = temperature_step(temperature);
    if temperature > h {
        let d1 = (f(temperature + h)? - f(temperature - h)?) / (2.0 * h);
        let d2 = (f(temperature + 0.5 * h)? - f(temperature - 0.5 * h)?) / h;
        Ok((4.0 * d2 - d1) / 3.0)
    } else {
        let f0 = f(temperature)?;
        let d1 = (f(temperature + h)? - f0) / h;
        let d2 = (f(temperature + 2.0 * h)? - f0) / (2.0 * h);
        Ok(2.0 * d1 - d2)
    }
}

/// `Γ_un = Γ_vac + Γ_th`.
pub fn gamma_un(sd: &SpectralDensity, bath: &BathState, t: f64, quad: &QuadSettings) -> Result<f64> {
    Ok(gamma_vac(sd, t) + gamma_th(sd, bath, t, quad)?)
}

/// `∂Γ_un/∂x`.
pub fn d_gamma_dx(
    sd: &SpectralDensity,
    bath: &BathState,
    t: f64,
    x: Estimand,
    quad: &QuadSettings,
) -> Result<f64> {
    Ok(d_gamma_vac_dx(sd, t, x) + d_gamma_th_dx(sd, bath, t, x, quad)?)
}

// ---------------------------------------------------------------------------
// Quadrature path
// ---------------------------------------------------------------------------

/// Maps a virtual integration variable onto `ω ∈ [0, ∞)` in three pieces:
/// a power-law stretched head that removes the `ω^{s-1}` endpoint
/// singularity, an identity middle section broken at every `kπ/t` and at
/// octaves of `ω_c`, and a rational tail map past `ω_max`.
struct FrequencyMap {
    head_end: f64,
    head_power: f64,
    omega_max: f64,
    cutoff: f64,
    breaks: Vec<f64>,
}

impl FrequencyMap {
    fn new(sd: &SpectralDensity, t: f64) -> Self {
        let cutoff = sd.cutoff;
        let omega_max = cutoff * (40.0 + 10.0 * sd.ohmicity);

        let mut nodes: Vec<f64> = Vec::new();
        let mut octave = cutoff / 64.0;
        while octave < omega_max {
            nodes.push(octave);
            octave *= 2.0;
        }
        if t > 0.0 {
            let step = PI / t;
            let count = (omega_max / step).floor() as usize;
            nodes.extend((1..=count).map(|k| k as f64 * step));
        }
        nodes.retain(|&w| w > 0.0 && w < omega_max);
        nodes.sort_by(|a, b| a.total_cmp(b));
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());

        let head_end = nodes[0];
        let head_power = (2.0 / sd.ohmicity).ceil().max(1.0);

        // virtual variable: [0,1] head, then ω - head_end + 1 for the middle,
        // then [m_end, m_end + 1] for the tail
        let mut breaks = vec![0.0, 1.0];
        breaks.extend(nodes.iter().skip(1).map(|w| w - head_end + 1.0));
        let middle_end = omega_max - head_end + 1.0;
        breaks.push(middle_end);
        breaks.push(middle_end + 1.0);

        FrequencyMap {
            head_end,
            head_power,
            omega_max,
            cutoff,
            breaks,
        }
    }

    /// `(ω, dω/dx)` for virtual coordinate `x`.
    fn map(&self, x: f64) -> (f64, f64) {
        let middle_end = self.omega_max - self.head_end + 1.0;
        if x <= 1.0 {
            let m = self.head_power;
            let y = x.max(0.0);
            (
                self.head_end * y.powf(m),
                self.head_end * m * y.powf(m - 1.0),
            )
        } else if x <= middle_end {
            (x - 1.0 + self.head_end, 1.0)
        } else {
            let y = (x - middle_end).min(1.0 - f64::EPSILON);
            let span = self.cutoff;
            (
                self.omega_max + span * y / (1.0 - y),
                span / ((1.0 - y) * (1.0 - y)),
            )
        }
    }
}

fn sin_minus_linear(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        -x * x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 / 5040.0))
    } else {
        x.sin() - x
    }
}

/// `2/(e^{βω} - 1) = coth(βω/2) - 1`.
fn thermal_excess(beta: f64, omega: f64) -> f64 {
    2.0 / (beta * omega).exp_m1()
}

/// `∂/∂T [coth(ω/2T) - 1] = (ω/T²) · 2 e^{ω/T}/(e^{ω/T}-1)²`.
fn thermal_excess_dt(temperature: f64, omega: f64) -> f64 {
    let x = omega / temperature;
    if x > 700.0 {
        return 0.0;
    }
    let denom = x.exp_m1() * -(-x).exp_m1();
    2.0 * omega / (temperature * temperature) / denom
}

#[derive(Clone, Copy)]
enum Weight {
    Density,
    CutoffDerivative,
}

fn kernel(
    kind: FactorKind,
    sd: &SpectralDensity,
    beta: Option<f64>,
    t: f64,
    omega: f64,
    weight: Weight,
    temperature_derivative: bool,
) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    let wc = sd.cutoff;
    let s = sd.ohmicity;
    let v = omega / wc;
    let decay = (-v).exp();
    if decay == 0.0 {
        return 0.0;
    }
    // J/ω² and J/ω with G = 1
    let j_over_w2 = v.powf(s - 2.0) * decay / wc;
    let w_factor = match weight {
        Weight::Density => 1.0,
        Weight::CutoffDerivative => (1.0 - s) / wc + omega / (wc * wc),
    };
    let half_wt = 0.5 * omega * t;
    let one_minus_cos = 2.0 * half_wt.sin().powi(2);
    let k = match kind {
        FactorKind::GammaVac => j_over_w2 * one_minus_cos,
        FactorKind::GammaTh => {
            let thermal = if temperature_derivative {
                match beta {
                    Some(b) => thermal_excess_dt(1.0 / b, omega),
                    None => 0.0,
                }
            } else {
                match beta {
                    Some(b) => thermal_excess(b, omega),
                    None => 0.0,
                }
            };
            j_over_w2 * one_minus_cos * thermal
        }
        FactorKind::Delta => j_over_w2 * sin_minus_linear(omega * t),
        FactorKind::Phi => j_over_w2 * (omega * t).sin(),
        FactorKind::CShift => v.powf(s - 1.0) * decay,
    };
    sd.coupling * k * w_factor
}

fn integrate_kind(
    kind: FactorKind,
    sd: &SpectralDensity,
    bath: &BathState,
    t: f64,
    weight: Weight,
    temperature_derivative: bool,
    quad: &QuadSettings,
) -> Result<QuadEstimate> {
    ensure(quad.rel_tol > 0.0, || "quadrature tolerance must be > 0".into())?;
    ensure(t >= 0.0, || format!("time must be >= 0, got {t}"))?;
    let map = FrequencyMap::new(sd, t);
    let beta = bath.beta();
    integrate(
        |x| {
            let (omega, jac) = map.map(x);
            if jac == 0.0 {
                return 0.0;
            }
            kernel(kind, sd, beta, t, omega, weight, temperature_derivative) * jac
        },
        &map.breaks,
        quad,
    )
}

/// Independent quadrature evaluation of a dephasing factor.
pub fn quadrature_factor(
    kind: FactorKind,
    sd: &SpectralDensity,
    bath: &BathState,
    t: f64,
    quad: &QuadSettings,
) -> Result<QuadEstimate> {
    let trivially_zero = sd.coupling == 0.0
        || (kind != FactorKind::CShift && t == 0.0)
        || (kind == FactorKind::GammaTh && bath.zero_temperature());
    if trivially_zero {
        return Ok(QuadEstimate {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            roundoff_limited: false,
        });
    }
    integrate_kind(kind, sd, bath, t, Weight::Density, false, quad)
}

/// Quadrature of the `x`-differentiated integrand of a factor.
pub fn quadrature_factor_dx(
    kind: FactorKind,
    sd: &SpectralDensity,
    bath: &BathState,
    t: f64,
    x: Estimand,
    quad: &QuadSettings,
) -> Result<QuadEstimate> {
    let zero = QuadEstimate {
        value: 0.0,
        error: 0.0,
        intervals: 0,
        roundoff_limited: false,
    };
    match x {
        Estimand::CouplingStrength => quadrature_factor(kind, &sd.unit(), bath, t, quad),
        Estimand::CutoffFrequency => {
            if sd.coupling == 0.0
                || (kind != FactorKind::CShift && t == 0.0)
                || (kind == FactorKind::GammaTh && bath.zero_temperature())
            {
                return Ok(zero);
            }
            integrate_kind(kind, sd, bath, t, Weight::CutoffDerivative, false, quad)
        }
        Estimand::Temperature => {
            if kind != FactorKind::GammaTh
                || sd.coupling == 0.0
                || t == 0.0
                || bath.zero_temperature()
            {
                return Ok(zero);
            }
            integrate_kind(kind, sd, bath, t, Weight::Density, true, quad)
        }
    }
}

/// Closed-form value of a factor (`Γ_th` falls back to quadrature).
pub fn closed_factor(
    kind: FactorKind,
    sd: &SpectralDensity,
    bath: &BathState,
    t: f64,
    quad: &QuadSettings,
) -> Result<f64> {
    Ok(match kind {
        FactorKind::GammaVac => gamma_vac(sd, t),
        FactorKind::GammaTh => gamma_th(sd, bath, t, quad)?,
        FactorKind::Delta => delta_factor(sd, t),
        FactorKind::Phi => phi_factor(sd, t),
        FactorKind::CShift => c_shift(sd),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sd(g: f64, s: f64, wc: f64) -> SpectralDensity {
        SpectralDensity::new(g, s, wc).unwrap()
    }

    fn tight() -> QuadSettings {
        QuadSettings::with_rel_tol(1e-11)
    }

    #[test]
    fn spectral_density_values() {
        assert_eq!(sd(1.0, 1.0, 1.0).eval(0.0).unwrap(), 0.0);
        assert_eq!(sd(0.0, 2.0, 5.0).eval(3.0).unwrap(), 0.0);
        assert_relative_eq!(sd(1.0, 1.0, 1.0).eval(1.0).unwrap(), (-1.0f64).exp(), max_relative = 1e-15);
        assert!(matches!(sd(1.0, 1.0, 1.0).eval(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(SpectralDensity::new(-0.1, 1.0, 1.0).is_err());
        assert!(SpectralDensity::new(1.0, 0.0, 1.0).is_err());
        assert!(SpectralDensity::new(1.0, 1.0, 0.0).is_err());
        assert!(BathState::new(-1.0).is_err());
    }

    #[test]
    fn gamma_vac_examples() {
        assert_eq!(gamma_vac(&sd(1.0, 0.5, 2.0), 0.0), 0.0);
        assert_relative_eq!(gamma_vac(&sd(2.0, 1.0, 1.0), 1.0), 2f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(gamma_vac(&sd(1.0, 2.0, 1.0), 1.0), 0.5, max_relative = 1e-14);
        // mpmath reference, 30 digits
        assert_relative_eq!(gamma_vac(&sd(1.0, 0.5, 1.0), 3.0), 1.569_030_295_346_519_4, max_relative = 1e-13);
    }

    #[test]
    fn delta_and_phi_examples() {
        let ohmic = sd(1.0, 1.0, 1.0);
        assert_eq!(delta_factor(&ohmic, 0.0), 0.0);
        assert_relative_eq!(delta_factor(&ohmic, 1.0), PI / 4.0 - 1.0, max_relative = 1e-15);
        assert_relative_eq!(delta_factor(&sd(0.5, 1.0, 1.0), 1.0), 0.5 * (PI / 4.0 - 1.0), max_relative = 1e-15);
        assert_relative_eq!(phi_factor(&ohmic, 1.0), PI / 4.0, max_relative = 1e-15);
        assert_relative_eq!(phi_factor(&sd(1.0, 2.0, 1.0), 1.0), 0.5, max_relative = 1e-14);
        assert_relative_eq!(phi_factor(&sd(1.0, 0.5, 1.0), 3.0), 3.685_917_962_246_666, max_relative = 1e-13);
        assert_relative_eq!(delta_factor(&sd(1.0, 0.5, 1.0), 3.0), -1.631_443_590_469_881_9, max_relative = 1e-13);
    }

    #[test]
    fn c_shift_examples() {
        assert_relative_eq!(c_shift(&sd(1.0, 1.0, 1.0)), 1.0, max_relative = 1e-15);
        assert_eq!(c_shift(&sd(0.0, 1.3, 2.0)), 0.0);
        assert_relative_eq!(c_shift(&sd(1.0, 2.0, 5.0)), 5.0, max_relative = 1e-14);
    }

    #[test]
    fn gamma_th_zero_cases() {
        let q = QuadSettings::default();
        assert_eq!(gamma_th(&sd(1.0, 1.0, 5.0), &BathState::zero(), 3.0, &q).unwrap(), 0.0);
        assert_eq!(gamma_th(&sd(1.0, 1.0, 5.0), &BathState::new(1.0).unwrap(), 0.0, &q).unwrap(), 0.0);
    }

    #[test]
    fn gamma_th_reference_values() {
        // Frozen from an independent 30-digit mpmath quadrature split at kπ/t.
        let cases = [
            ((1.0, 1.0, 5.0), 1.0, 1.0, 1.073_921_182_966_598_5),
            ((1.0, 0.5, 1.0), 1.0, 2.0, 5.305_288_544_341_942),
            ((1.0, 2.0, 5.0), 0.5, 3.0, 0.178_408_560_226_757_04),
        ];
        for ((g, s, wc), temp, t, expected) in cases {
            let bath = BathState::new(temp).unwrap();
            let coarse = gamma_th(&sd(g, s, wc), &bath, t, &QuadSettings::with_rel_tol(1e-6)).unwrap();
            let fine = gamma_th(&sd(g, s, wc), &bath, t, &QuadSettings::with_rel_tol(1e-10)).unwrap();
            assert_relative_eq!(coarse, fine, max_relative = 1e-6);
            assert_relative_eq!(fine, expected, max_relative = 1e-9);
        }
    }

    #[test]
    fn thermal_series_matches_quadrature() {
        for (g, s, wc, temp, t) in [(1.0, 1.0, 5.0, 1.0, 1.0), (1.0, 0.5, 1.0, 1.0, 2.0), (0.3, 2.0, 5.0, 0.5, 3.0)] {
            let sd = sd(g, s, wc);
            let bath = BathState::new(temp).unwrap();
            let series = gamma_th_series(&sd, &bath, t, 20_000);
            let quad = gamma_th(&sd, &bath, t, &tight()).unwrap();
            assert_relative_eq!(series, quad, max_relative = 1e-8);
        }
    }

    #[test]
    fn temperature_derivative_matches_differentiated_integrand() {
        let s = sd(1.0, 1.0, 5.0);
        let bath = BathState::new(1.0).unwrap();
        let fd = d_gamma_th_dx(&s, &bath, 1.0, Estimand::Temperature, &tight()).unwrap();
        let direct = quadrature_factor_dx(FactorKind::GammaTh, &s, &bath, 1.0, Estimand::Temperature, &tight())
            .unwrap()
            .value;
        assert_relative_eq!(direct, 1.672_462_616_936_008, max_relative = 1e-9);
        assert_relative_eq!(fd, direct, max_relative = 1e-7);
    }

    #[test]
    fn temperature_derivative_at_zero_is_one_sided() {
        let s = sd(1.0, 1.0, 1.0);
        let d = d_gamma_th_dx(&s, &BathState::zero(), 2.0, Estimand::Temperature, &tight()).unwrap();
        // Γ_th ~ T² near T = 0, so the one-sided slope is O(h).
        assert!(d.abs() < 1e-4, "{d}");
    }

    #[test]
    fn derivative_examples() {
        let ohmic = sd(1.0, 1.0, 1.0);
        assert_relative_eq!(d_gamma_vac_dx(&ohmic, 1.0, Estimand::CouplingStrength), 0.5 * 2f64.ln(), max_relative = 1e-15);
        assert_eq!(d_gamma_vac_dx(&ohmic, 0.0, Estimand::CutoffFrequency), 0.0);
        assert_relative_eq!(d_delta_dx(&ohmic, 1.0, Estimand::CouplingStrength), PI / 4.0 - 1.0, max_relative = 1e-15);
        assert_relative_eq!(d_phi_dx(&ohmic, 1.0, Estimand::CutoffFrequency), 0.5, max_relative = 1e-15);
        // ∂Δ/∂ω_c = -G ω_c² t³/(1+ω_c²t²) for s = 1
        let s = sd(0.7, 1.0, 2.0);
        let t = 1.3;
        let u = 2.0 * t;
        assert_relative_eq!(
            d_delta_dx(&s, t, Estimand::CutoffFrequency),
            -0.7 * 4.0 * t.powi(3) / (1.0 + u * u),
            max_relative = 1e-13
        );
        assert_eq!(d_delta_dx(&ohmic, 1.0, Estimand::Temperature), 0.0);
        assert_eq!(d_phi_dx(&ohmic, 1.0, Estimand::Temperature), 0.0);
    }

    #[test]
    fn quadrature_examples() {
        let q = QuadSettings::with_rel_tol(1e-10);
        let vac = quadrature_factor(FactorKind::GammaVac, &sd(2.0, 1.0, 1.0), &BathState::zero(), 1.0, &q).unwrap();
        assert!((vac.value - 2f64.ln()).abs() < 1e-9);
        let c = quadrature_factor(FactorKind::CShift, &sd(1.0, 1.0, 1.0), &BathState::zero(), 0.0, &q).unwrap();
        assert!((c.value - 1.0).abs() < 1e-10);
        let d = quadrature_factor(FactorKind::Delta, &sd(1.0, 1.0, 1.0), &BathState::zero(), 0.0, &q).unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn ohmic_branch_is_continuous() {
        for &t in &[0.1, 1.0, 7.5] {
            let base = sd(0.8, 1.0, 2.0);
            for s in [1.0 - 1e-4, 1.0 + 1e-4] {
                let near = sd(0.8, s, 2.0);
                assert_relative_eq!(gamma_vac(&near, t), gamma_vac(&base, t), max_relative = 1e-3);
                assert_relative_eq!(phi_factor(&near, t), phi_factor(&base, t), max_relative = 1e-3);
                assert_relative_eq!(delta_factor(&near, t), delta_factor(&base, t), max_relative = 1e-3);
                assert_relative_eq!(c_shift(&near), c_shift(&base), max_relative = 1e-3);
            }
        }
    }
}
