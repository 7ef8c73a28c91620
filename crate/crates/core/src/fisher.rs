//! Quantum and classical Fisher information of the measured probe qubit.
//!
//! The qubit's Bloch vector lies on the equator with length
//! `|F| = e^{-Γ}|cos Δ|` and azimuth `ξ = ω₀t + χ`, so the QFI splits into
//! a length part and an azimuth part:
//!
//! ```text
//! F_Q = A² / (e^{2Γ} - cos²Δ) + cos²Δ (∂χ)² e^{-2Γ},   A = sin Δ ∂Δ + cos Δ ∂Γ
//! ```
//!
//! Equatorial projective measurements at angle `φ` see `Θ = ξ - φ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::dynamics::{Effective, FactorDerivatives, Model, QubitState};
use crate::error::{ensure, Error, Result};
use crate::estimand::Estimand;

/// Probabilities below this are treated as unresolvable outcomes.
pub const PROBABILITY_FLOOR: f64 = 1e-14;

/// `e^{2Γ} - cos²Δ`, computed without cancellation at small `Γ`, `Δ`.
fn length_denominator(eff: &Effective) -> f64 {
    (2.0 * eff.gamma).exp_m1() + eff.delta.sin().powi(2)
}

fn length_numerator(eff: &Effective, der: &FactorDerivatives) -> f64 {
    eff.delta.sin() * der.d_delta + eff.delta.cos() * der.d_gamma
}

/// Closed-form QFI from effective factors and their derivatives.
pub fn qfi_from_factors(eff: &Effective, der: &FactorDerivatives) -> f64 {
    let den = length_denominator(eff);
    let a = length_numerator(eff, der);
    let length = if den > 0.0 { a * a / den } else { 0.0 };
    let azimuth = (eff.delta.cos() * der.d_chi).powi(2) * (-2.0 * eff.gamma).exp();
    length + azimuth
}

/// CFI of the equatorial measurement at angle `varphi`.
pub fn cfi_from_factors(eff: &Effective, der: &FactorDerivatives, varphi: f64) -> f64 {
    let theta = eff.xi - varphi;
    let (s, c) = theta.sin_cos();
    let cd = eff.delta.cos();
    let den = length_denominator(eff) + (cd * s).powi(2);
    if den <= 0.0 {
        return 0.0;
    }
    let num = length_numerator(eff, der) * c + der.d_chi * cd * s;
    num * num / den
}

/// Measurement angle maximizing the CFI.
pub fn optimal_angle_from_factors(eff: &Effective, der: &FactorDerivatives) -> f64 {
    // tan Θ* = ∂χ cos Δ (e^{2Γ} - cos²Δ) e^{-2Γ} / A, with the product
    // expanded so it stays finite once e^{2Γ} overflows
    let damped = -(-2.0 * eff.gamma).exp_m1() + eff.delta.sin().powi(2) * (-2.0 * eff.gamma).exp();
    let num = der.d_chi * eff.delta.cos() * damped;
    let den = length_numerator(eff, der);
    let theta = if den != 0.0 {
        (num / den).atan()
    } else if num != 0.0 {
        std::f64::consts::FRAC_PI_2 * num.signum()
    } else {
        0.0
    };
    eff.xi - theta
}

fn prepared(model: &Model, x: Estimand, t: f64) -> Result<(Effective, FactorDerivatives)> {
    ensure(t.is_finite() && t >= 0.0, || format!("time must be >= 0, got {t}"))?;
    let snap = model.snapshot(t, x)?;
    model.effective_with_derivatives(&snap)
}

/// Closed-form QFI for estimating `x` after interaction time `t`.
pub fn qfi_closed(model: &Model, x: Estimand, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let (eff, der) = prepared(model, x, t)?;
    Ok(qfi_from_factors(&eff, &der))
}

pub fn cfi(model: &Model, x: Estimand, t: f64, varphi: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let (eff, der) = prepared(model, x, t)?;
    Ok(cfi_from_factors(&eff, &der, varphi))
}

pub fn optimal_angle(model: &Model, x: Estimand, t: f64) -> Result<f64> {
    ensure(t > 0.0, || format!("optimal angle needs t > 0, got {t}"))?;
    let (eff, der) = prepared(model, x, t)?;
    Ok(optimal_angle_from_factors(&eff, &der))
}

/// Outcome probabilities `P(±|x)` of the equatorial measurement.
pub fn outcome_probabilities(state: &QubitState, varphi: f64) -> [f64; 2] {
    let proj = (state.rho01() * Complex64::from_polar(1.0, varphi)).re;
    [0.5 + proj, 0.5 - proj]
}

/// CFI from the outcome distribution, `Σ_k (∂P_k)²/P_k`, with the
/// derivative of the state supplied by the caller.
pub fn cfi_born(state: &QubitState, d_state: &QubitState, varphi: f64) -> Result<f64> {
    let p = outcome_probabilities(state, varphi);
    let dproj = (d_state.rho01() * Complex64::from_polar(1.0, varphi)).re;
    let dp = [dproj, -dproj];
    let mut total = 0.0;
    for k in 0..2 {
        if p[k] < PROBABILITY_FLOOR {
            return Err(Error::ProbabilityUnderflow { probability: p[k] });
        }
        total += dp[k] * dp[k] / p[k];
    }
    Ok(total)
}

/// Analytic derivative of the reduced state, `∂ρ₀₁ = -½ e^{-iξ}(e^{-Γ}A + i F ∂χ)`.
pub fn reduced_state_derivative_closed(eff: &Effective, der: &FactorDerivatives) -> QubitState {
    let f = eff.coherence_factor();
    let df = -(-eff.gamma).exp() * length_numerator(eff, der);
    let rho01 = 0.5 * Complex64::from_polar(1.0, -eff.xi) * Complex64::new(df, -f * der.d_chi);
    let mut m = QubitState::equatorial(rho01).0;
    m[(0, 0)] = Complex64::new(0.0, 0.0);
    m[(1, 1)] = Complex64::new(0.0, 0.0);
    QubitState(m)
}

/// Relative step for parameter finite differences.
pub const STATE_STEP: f64 = 1e-4;

/// Derivative of the reduced state with respect to `x` by Richardson
/// extrapolated central differences (one-sided at `T = 0`).
pub fn reduced_state_derivative(model: &Model, x: Estimand, t: f64) -> Result<QubitState> {
    let x0 = model.parameter(x);
    let at = |v: f64| -> Result<nalgebra::Matrix2<Complex64>> {
        Ok(model.with_parameter(x, v)?.reduced_qubit_state(t)?.0)
    };
    let h = if x == Estimand::Temperature {
        crate::spectral::temperature_step(x0)
    } else {
        STATE_STEP * x0
    };
    let third = Complex64::new(1.0 / 3.0, 0.0);
    let d = if x0 > h {
        let d1 = (at(x0 + h)? - at(x0 - h)?) / Complex64::new(2.0 * h, 0.0);
        let d2 = (at(x0 + 0.5 * h)? - at(x0 - 0.5 * h)?) / Complex64::new(h, 0.0);
        (d2 * Complex64::new(4.0, 0.0) - d1) * third
    } else {
        let f0 = at(x0)?;
        let d1 = (at(x0 + h)? - f0) / Complex64::new(h, 0.0);
        let d2 = (at(x0 + 2.0 * h)? - f0) / Complex64::new(2.0 * h, 0.0);
        d1 * Complex64::new(2.0, 0.0) - d2
    };
    Ok(QubitState(d))
}

/// QFI from the spectral definition,
/// `2 Σ_{n,m} |⟨ε_m|∂ρ|ε_n⟩|² / (ρ_n + ρ_m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralQfi {
    pub value: f64,
    pub degenerate: bool,
}

pub fn qfi_spectral(state: &QubitState, d_state: &QubitState, provenance_phase: f64) -> Result<SpectralQfi> {
    let eig = state.eigendecompose(provenance_phase)?;
    let mut total = 0.0;
    for n in 0..2 {
        for m in 0..2 {
            let sum = eig.values[n] + eig.values[m];
            if sum < 1e-14 {
                continue;
            }
            let vn = nalgebra::Vector2::new(eig.vectors[n][0], eig.vectors[n][1]);
            let vm = nalgebra::Vector2::new(eig.vectors[m][0], eig.vectors[m][1]);
            let elem = vm.dotc(&(d_state.0 * vn));
            total += 2.0 * elem.norm_sqr() / sum;
        }
    }
    Ok(SpectralQfi {
        value: total,
        degenerate: eig.degenerate,
    })
}

/// QFI via the spectral definition with a finite-difference state
/// derivative; an oracle for [`qfi_closed`].
pub fn qfi_spectral_fd(model: &Model, x: Estimand, t: f64) -> Result<SpectralQfi> {
    let eff = model.effective(t)?;
    let state = QubitState::from_effective(&eff);
    let d_state = reduced_state_derivative(model, x, t)?;
    qfi_spectral(&state, &d_state, eff.xi)
}

/// QFI (and optionally CFI) sampled along a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherCurve {
    pub estimand: Estimand,
    pub times: Vec<f64>,
    pub qfi: Vec<f64>,
    pub cfi: Option<Vec<f64>>,
    pub angles: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherOptimum {
    pub t_star: f64,
    pub f_star: f64,
    /// The largest grid value sat at `t_max`.
    pub boundary_hit: bool,
    /// Every grid value was zero, so `t_star` is meaningless.
    pub flat: bool,
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn qfi_curve(model: &Model, x: Estimand, times: &[f64]) -> Result<FisherCurve> {
    ensure(times.windows(2).all(|w| w[1] > w[0]), || "time grid must be strictly increasing".into())?;
    let qfi = times
        .par_iter()
        .map(|&t| qfi_closed(model, x, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(FisherCurve {
        estimand: x,
        times: times.to_vec(),
        qfi,
        cfi: None,
        angles: None,
    })
}

/// QFI and optimal-angle CFI along a grid.
pub fn cfi_curve(model: &Model, x: Estimand, times: &[f64]) -> Result<FisherCurve> {
    ensure(times.windows(2).all(|w| w[1] > w[0]), || "time grid must be strictly increasing".into())?;
    let rows = times
        .par_iter()
        .map(|&t| -> Result<(f64, f64, f64)> {
            if t == 0.0 {
                return Ok((0.0, 0.0, model.probe.omega_0 * t));
            }
            let (eff, der) = prepared(model, x, t)?;
            let angle = optimal_angle_from_factors(&eff, &der);
            Ok((qfi_from_factors(&eff, &der), cfi_from_factors(&eff, &der, angle), angle))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FisherCurve {
        estimand: x,
        times: times.to_vec(),
        qfi: rows.iter().map(|r| r.0).collect(),
        cfi: Some(rows.iter().map(|r| r.1).collect()),
        angles: Some(rows.iter().map(|r| r.2).collect()),
    })
}

/// Golden-section maximization of `f` on `[lo, hi]` in `ln t`.
fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c.exp())?;
    let mut fd = f(d.exp())?;
    // width in ln t is the relative width in t
    while b - a > rel_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d.exp())?;
        }
    }
    Ok(if fc >= fd { (c.exp(), fc) } else { (d.exp(), fd) })
}

/// Tolerance of the golden-section refinement, relative in `t`.
pub const TIME_REL_TOL: f64 = 1e-6;

/// Finish the optimization from grid samples of `f`.
pub fn refine_optimum<F: Fn(f64) -> Result<f64>>(times: &[f64], values: &[f64], f: F) -> Result<FisherOptimum> {
    let n = times.len();
    let (best, &fmax) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("grid is non-empty");
    if fmax <= 0.0 {
        return Ok(FisherOptimum {
            t_star: times[0],
            f_star: 0.0,
            boundary_hit: false,
            flat: true,
        });
    }
    if best == n - 1 {
        return Ok(FisherOptimum {
            t_star: times[n - 1],
            f_star: fmax,
            boundary_hit: true,
            flat: false,
        });
    }
    let lo = times[best.saturating_sub(1)];
    let hi = times[best + 1];
    let (t_g, f_g) = golden_max(&f, lo, hi, TIME_REL_TOL)?;
    let (t_star, f_star) = if f_g >= fmax { (t_g, f_g) } else { (times[best], fmax) };
    Ok(FisherOptimum {
        t_star,
        f_star,
        boundary_hit: false,
        flat: false,
    })
}

/// Maximize the QFI over interaction time on `[10⁻³/ω_c, t_max]`.
pub fn optimize_qfi_over_time(
    model: &Model,
    x: Estimand,
    t_max: f64,
    grid_size: usize,
) -> Result<FisherOptimum> {
    ensure(grid_size >= 64, || format!("grid size must be >= 64, got {grid_size}"))?;
    let t_min = 1e-3 / model.density.cutoff();
    ensure(t_max > t_min, || format!("t_max must exceed {t_min}, got {t_max}"))?;
    let times = log_grid(t_min, t_max, grid_size);
    let curve = qfi_curve(model, x, &times)?;
    refine_optimum(&times, &curve.qfi, |t| qfi_closed(model, x, t))
}

/// Optimize several probe variants that share one bath, computing the
/// bath quantities once per grid point.
pub fn optimize_variants(
    models: &[Model],
    x: Estimand,
    t_max: f64,
    grid_size: usize,
) -> Result<Vec<FisherOptimum>> {
    let Some(first) = models.first() else {
        return Ok(Vec::new());
    };
    ensure(
        models
            .iter()
            .all(|m| m.density == first.density && m.bath == first.bath && m.quad == first.quad),
        || "variants must share the bath".into(),
    )?;
    ensure(grid_size >= 64, || format!("grid size must be >= 64, got {grid_size}"))?;
    let t_min = 1e-3 / first.density.cutoff();
    ensure(t_max > t_min, || format!("t_max must exceed {t_min}, got {t_max}"))?;
    let times = log_grid(t_min, t_max, grid_size);
    let table = times
        .par_iter()
        .map(|&t| -> Result<Vec<f64>> {
            let snap = first.snapshot(t, x)?;
            models
                .iter()
                .map(|m| {
                    let (eff, der) = m.effective_with_derivatives(&snap)?;
                    Ok(qfi_from_factors(&eff, &der))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    models
        .par_iter()
        .enumerate()
        .map(|(k, m)| {
            let values: Vec<f64> = table.iter().map(|row| row[k]).collect();
            refine_optimum(&times, &values, |t| qfi_closed(m, x, t))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn angle_survives_complete_decay() {
        let eff = Effective {
            gamma: 800.0,
            delta: -3.0,
            chi: 0.0,
            xi: 12.5,
        };
        let der = FactorDerivatives {
            d_gamma: 2.0,
            d_delta: -0.1,
            d_chi: 0.0,
        };
        assert_eq!(optimal_angle_from_factors(&eff, &der), 12.5);
        assert_eq!(cfi_from_factors(&eff, &der, 12.5), 0.0);
    }

    use super::*;
    use crate::dynamics::{InitialState, ProbeConfig, Scheme};
    use crate::quadrature::QuadSettings;
    use crate::spectral::{BathState, SpectralDensity};
    use approx::assert_relative_eq;

    fn model(g: f64, s: f64, wc: f64, temp: f64, scheme: Scheme, init: InitialState) -> Model {
        Model::new(
            ProbeConfig::new(1.0, scheme, init).unwrap(),
            SpectralDensity::new(g, s, wc).unwrap(),
            BathState::new(temp).unwrap(),
            QuadSettings::with_rel_tol(1e-11),
        )
    }

    #[test]
    fn zero_time_and_zero_coupling() {
        let m = model(1.0, 1.0, 1.0, 0.0, Scheme::TwoQubitTraced, InitialState::Factorized);
        for x in Estimand::ALL {
            assert_eq!(qfi_closed(&m, x, 0.0).unwrap(), 0.0);
            assert_eq!(cfi(&m, x, 0.0, 0.3).unwrap(), 0.0);
        }
        for init in InitialState::ALL {
            let free = model(0.0, 0.5, 1.0, 0.5, Scheme::TwoQubitTraced, init);
            for x in [Estimand::CutoffFrequency, Estimand::Temperature] {
                for &t in &[0.1, 1.0, 10.0] {
                    assert_eq!(qfi_closed(&free, x, t).unwrap(), 0.0);
                    let a = optimal_angle(&free, x, t).unwrap();
                    assert_eq!(cfi(&free, x, t, a).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn coupling_information_at_zero_coupling() {
        // The state is pure at G = 0, so the decay part is dropped, but a
        // correlated preparation still imprints a phase linear in G.
        let t = 2.0;
        let plain = model(0.0, 1.0, 1.0, 0.0, Scheme::TwoQubitTraced, InitialState::Factorized);
        assert_eq!(qfi_closed(&plain, Estimand::CouplingStrength, t).unwrap(), 0.0);
        let corr = model(0.0, 1.0, 1.0, 0.0, Scheme::TwoQubitTraced, InitialState::Correlated);
        let q = qfi_closed(&corr, Estimand::CouplingStrength, t).unwrap();
        assert_relative_eq!(q, (2.0 * t.atan()).powi(2), max_relative = 1e-14);
    }

    #[test]
    fn closed_matches_spectral_at_reference_point() {
        let m = model(1.0, 1.0, 1.0, 0.0, Scheme::TwoQubitTraced, InitialState::Factorized);
        let closed = qfi_closed(&m, Estimand::CouplingStrength, 1.0).unwrap();
        let spectral = qfi_spectral_fd(&m, Estimand::CouplingStrength, 1.0).unwrap();
        assert_relative_eq!(closed, spectral.value, max_relative = 1e-5);
    }

    #[test]
    fn spectral_qfi_of_static_state_is_zero() {
        let s = QubitState::equatorial(Complex64::new(0.2, 0.1));
        let zero = QubitState(nalgebra::Matrix2::zeros());
        assert_eq!(qfi_spectral(&s, &zero, 0.0).unwrap().value, 0.0);
        let mixed = QubitState::equatorial(Complex64::new(0.0, 0.0));
        let r = qfi_spectral(&mixed, &zero, 0.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.degenerate);
    }

    #[test]
    fn factorized_optimal_angle_is_free_phase() {
        let m = model(0.3, 0.5, 2.0, 0.5, Scheme::TwoQubitTraced, InitialState::Factorized);
        for x in Estimand::ALL {
            let t = 1.3;
            assert_eq!(optimal_angle(&m, x, t).unwrap(), t);
            assert_relative_eq!(cfi(&m, x, t, t).unwrap(), qfi_closed(&m, x, t).unwrap(), max_relative = 1e-12);
        }
    }

    #[test]
    fn optimal_angle_attains_qfi_when_correlated() {
        let m = model(0.5, 1.0, 1.0, 0.0, Scheme::TwoQubitTraced, InitialState::Correlated);
        for &t in &[0.2, 1.0, 4.0] {
            let x = Estimand::CutoffFrequency;
            let angle = optimal_angle(&m, x, t).unwrap();
            let q = qfi_closed(&m, x, t).unwrap();
            assert_relative_eq!(cfi(&m, x, t, angle).unwrap(), q, max_relative = 1e-8);
            for k in 0..50 {
                let phi = k as f64 * 0.13;
                assert!(cfi(&m, x, t, phi).unwrap() <= q * (1.0 + 1e-10));
            }
        }
    }

    #[test]
    fn born_cfi_matches_closed_form() {
        let m = model(0.3, 2.0, 1.0, 0.8, Scheme::TwoQubitTraced, InitialState::Correlated);
        let t = 0.9;
        for x in Estimand::ALL {
            let snap = m.snapshot(t, x).unwrap();
            let (eff, der) = m.effective_with_derivatives(&snap).unwrap();
            let state = QubitState::from_effective(&eff);
            let d_state = reduced_state_derivative_closed(&eff, &der);
            for &phi in &[0.0, 0.7, 2.0] {
                let born = cfi_born(&state, &d_state, phi).unwrap();
                assert_relative_eq!(born, cfi_from_factors(&eff, &der, phi), max_relative = 1e-12);
            }
            let fd = reduced_state_derivative(&m, x, t).unwrap();
            assert!((fd.0 - d_state.0).norm() < 1e-6 * d_state.0.norm().max(1e-12));
        }
    }

    #[test]
    fn born_cfi_reports_underflow() {
        let pure = QubitState::equatorial(Complex64::new(0.5, 0.0));
        let d = QubitState(nalgebra::Matrix2::zeros());
        assert!(matches!(cfi_born(&pure, &d, 0.0), Err(Error::ProbabilityUnderflow { .. })));
    }

    #[test]
    fn golden_section_finds_peak() {
        let (t, f) = golden_max(|t| Ok(-(t.ln() - 1.0).powi(2)), 1.0, 10.0, 1e-9).unwrap();
        assert_relative_eq!(t, 1f64.exp(), max_relative = 1e-6);
        assert!(f <= 0.0);
    }

    #[test]
    fn flat_curve_is_flagged() {
        let m = model(0.0, 1.0, 1.0, 0.0, Scheme::SingleQubit, InitialState::Factorized);
        let o = optimize_qfi_over_time(&m, Estimand::CutoffFrequency, 10.0, 64).unwrap();
        assert!(o.flat);
        assert_eq!(o.f_star, 0.0);
    }

    #[test]
    fn grid_size_enforced() {
        let m = model(0.1, 1.0, 1.0, 0.0, Scheme::SingleQubit, InitialState::Factorized);
        assert!(optimize_qfi_over_time(&m, Estimand::CutoffFrequency, 10.0, 8).is_err());
    }

    #[test]
    fn ohmic_two_qubit_keeps_growing() {
        let m = model(0.1, 1.0, 1.0, 0.0, Scheme::TwoQubitTraced, InitialState::Factorized);
        let a = optimize_qfi_over_time(&m, Estimand::CutoffFrequency, 10.0, 256).unwrap();
        let b = optimize_qfi_over_time(&m, Estimand::CutoffFrequency, 20.0, 256).unwrap();
        assert!(a.boundary_hit && b.boundary_hit);
        assert!(b.f_star > a.f_star);
    }

    #[test]
    fn ohmic_single_qubit_is_bounded() {
        let m = model(0.1, 1.0, 1.0, 0.0, Scheme::SingleQubit, InitialState::Factorized);
        let a = optimize_qfi_over_time(&m, Estimand::CutoffFrequency, 10.0, 256).unwrap();
        let b = optimize_qfi_over_time(&m, Estimand::CutoffFrequency, 20.0, 256).unwrap();
        assert!(!a.boundary_hit && !b.boundary_hit);
        assert_relative_eq!(a.f_star, b.f_star, max_relative = 1e-2);
    }

    #[test]
    fn variants_agree_with_single_optimizations() {
        let base = model(0.05, 0.5, 1.0, 0.0, Scheme::TwoQubitTraced, InitialState::Factorized);
        let models: Vec<Model> = ProbeConfig::variants(1.0).unwrap().into_iter().map(|p| base.with_probe(p)).collect();
        let joint = optimize_variants(&models, Estimand::CutoffFrequency, 50.0, 128).unwrap();
        for (m, o) in models.iter().zip(&joint) {
            let single = optimize_qfi_over_time(m, Estimand::CutoffFrequency, 50.0, 128).unwrap();
            assert_eq!(o, &single);
        }
    }
}
