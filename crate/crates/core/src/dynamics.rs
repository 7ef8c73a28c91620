//! Reduced probe states under pure dephasing.
//!
//! Basis ordering for one qubit is `(|↑⟩, |↓⟩)` (σ_z = +1 first); the
//! two-qubit basis index is `2·i₁ + i₂`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlations::{corr_factors, d_corr_dx, sector_average};
use crate::error::{ensure, Error, Result};
use crate::estimand::Estimand;
use crate::quadrature::QuadSettings;
use crate::spectral::{
    c_shift, d_c_shift_dx, d_delta_dx, d_gamma_dx, d_phi_dx, delta_factor, gamma_th, gamma_vac,
    phi_factor, BathState, SpectralDensity,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Two qubits in the bath, the second traced out before measurement.
    TwoQubitTraced,
    SingleQubit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    Factorized,
    /// Prepared by measuring the joint thermal state.
    Correlated,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::TwoQubitTraced, Scheme::SingleQubit];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::TwoQubitTraced => "two-qubit",
            Scheme::SingleQubit => "single-qubit",
        }
    }
}

impl InitialState {
    pub const ALL: [InitialState; 2] = [InitialState::Factorized, InitialState::Correlated];

    pub fn as_str(self) -> &'static str {
        match self {
            InitialState::Factorized => "factorized",
            InitialState::Correlated => "correlated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub omega_0: f64,
    pub scheme: Scheme,
    pub initial_state: InitialState,
}

impl ProbeConfig {
    pub fn new(omega_0: f64, scheme: Scheme, initial_state: InitialState) -> Result<Self> {
        ensure(omega_0.is_finite() && omega_0 > 0.0, || {
            format!("qubit splitting must be > 0, got {omega_0}")
        })?;
        Ok(ProbeConfig {
            omega_0,
            scheme,
            initial_state,
        })
    }

    /// All four scheme × preparation variants, two-qubit first.
    pub fn variants(omega_0: f64) -> Result<Vec<ProbeConfig>> {
        let mut out = Vec::with_capacity(4);
        for scheme in Scheme::ALL {
            for init in InitialState::ALL {
                out.push(ProbeConfig::new(omega_0, scheme, init)?);
            }
        }
        Ok(out)
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.scheme.as_str(), self.initial_state.as_str())
    }
}

/// Everything needed to evaluate the probe state: probe, bath spectrum,
/// temperature and quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub probe: ProbeConfig,
    pub density: SpectralDensity,
    pub bath: BathState,
    pub quad: QuadSettings,
}

/// Dephasing factors at one instant.
///
/// `gamma_corr` and `chi` are those of the configured scheme, and zero for a
/// factorized preparation. `delta` is the bath-induced qubit-qubit phase
/// whether or not the scheme uses it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingFactors {
    pub gamma_vac: f64,
    pub gamma_th: f64,
    pub gamma_corr: f64,
    pub delta: f64,
    pub phi: f64,
    pub chi: f64,
    pub c_shift: f64,
}

impl DephasingFactors {
    pub fn gamma_un(&self) -> f64 {
        self.gamma_vac + self.gamma_th
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_un() + self.gamma_corr
    }
}

/// Derivatives of the total decay, of `Δ` and of `χ` with respect to one
/// estimand.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FactorDerivatives {
    pub d_gamma: f64,
    pub d_delta: f64,
    pub d_chi: f64,
}

/// The quantities the coherence depends on, after the scheme has been
/// applied (`Δ = 0` for a lone qubit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Effective {
    pub gamma: f64,
    pub delta: f64,
    pub chi: f64,
    /// `ξ = ω₀ t + χ`.
    pub xi: f64,
}

impl Effective {
    /// `F = cos Δ · e^{-Γ}`.
    pub fn coherence_factor(&self) -> f64 {
        self.delta.cos() * (-self.gamma).exp()
    }
}

/// Scheme-independent bath quantities at one time, with derivatives for one
/// estimand. Expensive part (thermal quadrature) is computed once and then
/// shared by every probe variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSnapshot {
    pub t: f64,
    pub gamma_vac: f64,
    pub gamma_th: f64,
    pub delta: f64,
    pub phi: f64,
    pub c_shift: f64,
    pub estimand: Estimand,
    pub d_gamma_un: f64,
    pub d_delta: f64,
    pub d_phi: f64,
    pub d_c_shift: f64,
}

impl BathSnapshot {
    pub fn new(
        sd: &SpectralDensity,
        bath: &BathState,
        t: f64,
        x: Estimand,
        quad: &QuadSettings,
    ) -> Result<Self> {
        ensure(t.is_finite() && t >= 0.0, || format!("time must be >= 0, got {t}"))?;
        Ok(BathSnapshot {
            t,
            gamma_vac: gamma_vac(sd, t),
            gamma_th: gamma_th(sd, bath, t, quad)?,
            delta: delta_factor(sd, t),
            phi: phi_factor(sd, t),
            c_shift: c_shift(sd),
            estimand: x,
            d_gamma_un: d_gamma_dx(sd, bath, t, x, quad)?,
            d_delta: d_delta_dx(sd, t, x),
            d_phi: d_phi_dx(sd, t, x),
            d_c_shift: d_c_shift_dx(sd, x),
        })
    }
}

impl Model {
    pub fn new(
        probe: ProbeConfig,
        density: SpectralDensity,
        bath: BathState,
        quad: QuadSettings,
    ) -> Self {
        Model {
            probe,
            density,
            bath,
            quad,
        }
    }

    pub fn with_probe(&self, probe: ProbeConfig) -> Self {
        Model { probe, ..*self }
    }

    /// Copy with the estimand `x` moved to `value`.
    pub fn with_parameter(&self, x: Estimand, value: f64) -> Result<Self> {
        let mut m = *self;
        match x {
            Estimand::CutoffFrequency => m.density = self.density.with_cutoff(value)?,
            Estimand::CouplingStrength => m.density = self.density.with_coupling(value)?,
            Estimand::Temperature => m.bath = BathState::new(value)?,
        }
        Ok(m)
    }

    pub fn parameter(&self, x: Estimand) -> f64 {
        match x {
            Estimand::CutoffFrequency => self.density.cutoff(),
            Estimand::CouplingStrength => self.density.coupling(),
            Estimand::Temperature => self.bath.temperature(),
        }
    }

    pub fn snapshot(&self, t: f64, x: Estimand) -> Result<BathSnapshot> {
        BathSnapshot::new(&self.density, &self.bath, t, x, &self.quad)
    }

    pub fn factors(&self, t: f64) -> Result<DephasingFactors> {
        ensure(t.is_finite() && t >= 0.0, || format!("time must be >= 0, got {t}"))?;
        let (gamma_corr, chi) = match self.probe.initial_state {
            InitialState::Factorized => (0.0, 0.0),
            InitialState::Correlated => {
                let c = corr_factors(self.probe.scheme, &self.density, &self.bath, self.probe.omega_0, t)?;
                (c.gamma_corr, c.chi)
            }
        };
        Ok(DephasingFactors {
            gamma_vac: gamma_vac(&self.density, t),
            gamma_th: gamma_th(&self.density, &self.bath, t, &self.quad)?,
            gamma_corr,
            delta: delta_factor(&self.density, t),
            phi: phi_factor(&self.density, t),
            chi,
            c_shift: c_shift(&self.density),
        })
    }

    pub fn effective(&self, t: f64) -> Result<Effective> {
        Ok(self.effective_from(&self.factors(t)?, t))
    }

    pub fn effective_from(&self, f: &DephasingFactors, t: f64) -> Effective {
        let delta = match self.probe.scheme {
            Scheme::TwoQubitTraced => f.delta,
            Scheme::SingleQubit => 0.0,
        };
        Effective {
            gamma: f.gamma(),
            delta,
            chi: f.chi,
            xi: self.probe.omega_0 * t + f.chi,
        }
    }

    /// Effective factors and their derivatives, reusing a bath snapshot.
    pub fn effective_with_derivatives(
        &self,
        snap: &BathSnapshot,
    ) -> Result<(Effective, FactorDerivatives)> {
        let t = snap.t;
        let x = snap.estimand;
        let (gamma_corr, chi, d_gamma_corr, d_chi) = match self.probe.initial_state {
            InitialState::Factorized => (0.0, 0.0, 0.0, 0.0),
            InitialState::Correlated => {
                let c = corr_factors(self.probe.scheme, &self.density, &self.bath, self.probe.omega_0, t)?;
                let (dg, dc) = d_corr_dx(&self.density, &self.bath, self.probe.omega_0, t, x, self.probe.scheme)?;
                (c.gamma_corr, c.chi, dg, dc)
            }
        };
        let (delta, d_delta) = match self.probe.scheme {
            Scheme::TwoQubitTraced => (snap.delta, snap.d_delta),
            Scheme::SingleQubit => (0.0, 0.0),
        };
        let eff = Effective {
            gamma: snap.gamma_vac + snap.gamma_th + gamma_corr,
            delta,
            chi,
            xi: self.probe.omega_0 * t + chi,
        };
        let der = FactorDerivatives {
            d_gamma: snap.d_gamma_un + d_gamma_corr,
            d_delta,
            d_chi,
        };
        Ok((eff, der))
    }

    pub fn coherence_factor(&self, t: f64) -> Result<f64> {
        Ok(self.effective(t)?.coherence_factor())
    }

    /// Reduced state of the measured qubit.
    pub fn reduced_qubit_state(&self, t: f64) -> Result<QubitState> {
        let eff = self.effective(t)?;
        Ok(QubitState::from_effective(&eff))
    }

    /// Full 4×4 state of both qubits; the scheme field is ignored.
    pub fn two_qubit_state(&self, t: f64) -> Result<TwoQubitState> {
        let f = self.factors(t)?;
        Ok(two_qubit_from_factors(
            self.probe.omega_0,
            t,
            &f,
            &self.bath,
            self.probe.initial_state,
        ))
    }
}

/// Assemble the two-qubit state from dephasing factors. Only `Γ_un`, `Δ`,
/// `φ` and `C` are read; the correlated case recomputes the sector averages
/// each element needs.
pub fn two_qubit_from_factors(
    omega_0: f64,
    t: f64,
    f: &DephasingFactors,
    bath: &BathState,
    initial_state: InitialState,
) -> TwoQubitState {
    let spins = [1.0, -1.0];
    let mut m = Matrix4::zeros();
    for row in 0..4 {
        let (kp, lp) = (spins[row / 2], spins[row % 2]);
        for col in 0..4 {
            let (k, l) = (spins[col / 2], spins[col % 2]);
            let (np, n) = (kp + lp, k + l);
            let dn = np - n;
            let x = match initial_state {
                InitialState::Correlated => {
                    sector_average(Scheme::TwoQubitTraced, omega_0, f.c_shift, f.phi, bath, n - np)
                }
                InitialState::Factorized => Complex64::new(1.0, 0.0),
            };
            let phase = -0.5 * omega_0 * dn * t - 0.5 * f.delta * (kp * lp - k * l);
            let decay = -0.25 * dn * dn * f.gamma_un();
            m[(row, col)] = 0.25 * x * Complex64::from_polar(decay.exp(), phase);
        }
    }
    TwoQubitState(m)
}

/// 2×2 density matrix of one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState(pub Matrix2<Complex64>);

/// 4×4 density matrix of the two probe qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState(pub Matrix4<Complex64>);

/// Eigen-decomposition of an equatorial qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitEigen {
    /// `(1 - |F|)/2`, then `(1 + |F|)/2`.
    pub values: [f64; 2],
    /// Eigenvectors `(1, ∓e^{iξ'})/√2`, matching `values`.
    pub vectors: [[Complex64; 2]; 2],
    /// `ξ'` with `ρ₀₁ = |ρ₀₁| e^{-iξ'}`.
    pub phase: f64,
    pub degenerate: bool,
}

impl QubitState {
    /// Equatorial state with coherence `ρ₀₁ = ½ F e^{-iξ}`.
    pub fn from_effective(eff: &Effective) -> Self {
        let rho01 = Complex64::from_polar(0.5 * eff.coherence_factor(), -eff.xi);
        Self::equatorial(rho01)
    }

    pub fn equatorial(rho01: Complex64) -> Self {
        let half = Complex64::new(0.5, 0.0);
        QubitState(Matrix2::new(half, rho01, rho01.conj(), half))
    }

    pub fn rho01(&self) -> Complex64 {
        self.0[(0, 1)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Closed-form eigenpairs. `provenance_phase` is used for the
    /// eigenvectors when the state is maximally mixed.
    pub fn eigendecompose(&self, provenance_phase: f64) -> Result<QubitEigen> {
        let m = &self.0;
        let diag_gap = (m[(0, 0)] - m[(1, 1)]).norm();
        let herm_gap = (m[(0, 1)] - m[(1, 0)].conj()).norm();
        if diag_gap > 1e-10 || herm_gap > 1e-10 || (m.trace().re - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "not an equatorial unit-trace state (diagonal gap {diag_gap:.2e}, hermiticity gap {herm_gap:.2e})"
            )));
        }
        let r = m[(0, 1)].norm();
        let degenerate = r < 1e-15;
        let phase = if degenerate {
            provenance_phase
        } else {
            -m[(0, 1)].arg()
        };
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let e = Complex64::from_polar(s, phase);
        let one = Complex64::new(s, 0.0);
        Ok(QubitEigen {
            values: [0.5 - r, 0.5 + r],
            vectors: [[one, -e], [one, e]],
            phase,
            degenerate,
        })
    }
}

impl TwoQubitState {
    /// Trace over the second qubit.
    pub fn partial_trace_second(&self) -> QubitState {
        let m = &self.0;
        let mut out = Matrix2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)];
            }
        }
        QubitState(out)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn model(g: f64, s: f64, wc: f64, temp: f64, scheme: Scheme, init: InitialState) -> Model {
        Model::new(
            ProbeConfig::new(1.0, scheme, init).unwrap(),
            SpectralDensity::new(g, s, wc).unwrap(),
            BathState::new(temp).unwrap(),
            QuadSettings::default(),
        )
    }

    #[test]
    fn initial_state_is_plus_plus() {
        let m = model(0.5, 1.0, 1.0, 0.7, Scheme::TwoQubitTraced, InitialState::Correlated);
        let s = m.two_qubit_state(0.0).unwrap();
        for v in s.0.iter() {
            assert!((v - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        }
        assert!((m.reduced_qubit_state(0.0).unwrap().rho01() - 0.5).norm() < 1e-15);
    }

    #[test]
    fn free_evolution_without_coupling() {
        let m = model(0.0, 1.0, 1.0, 0.0, Scheme::TwoQubitTraced, InitialState::Factorized);
        let t = 2.3;
        let s = m.two_qubit_state(t).unwrap();
        let spins = [1.0, -1.0];
        for r in 0..4 {
            for c in 0..4 {
                let dn = spins[r / 2] + spins[r % 2] - spins[c / 2] - spins[c % 2];
                let expected = Complex64::from_polar(0.25, -0.5 * dn * t);
                assert!((s.0[(r, c)] - expected).norm() < 1e-15);
            }
        }
        assert_eq!(m.coherence_factor(t).unwrap(), 1.0);
    }

    #[test]
    fn coherence_vanishes_when_cos_delta_does() {
        // Ohmic Δ = G(atan u - u); pick G so that Δ(1) = -π/2
        let g = (std::f64::consts::FRAC_PI_2) / (1.0 - std::f64::consts::FRAC_PI_4);
        let m = model(g, 1.0, 1.0, 0.0, Scheme::TwoQubitTraced, InitialState::Factorized);
        assert!(m.reduced_qubit_state(1.0).unwrap().rho01().norm() < 1e-15);
    }

    #[test]
    fn partial_trace_matches_reduced_state() {
        for init in InitialState::ALL {
            for temp in [0.0, 0.8] {
                let m = model(0.3, 0.5, 2.0, temp, Scheme::TwoQubitTraced, init);
                for &t in &[0.1, 1.0, 6.0] {
                    let full = m.two_qubit_state(t).unwrap().partial_trace_second();
                    let red = m.reduced_qubit_state(t).unwrap();
                    assert!((full.0 - red.0).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn eigendecomposition_examples() {
        let pure = QubitState::equatorial(Complex64::new(0.5, 0.0));
        let e = pure.eigendecompose(0.0).unwrap();
        assert!(e.values[0].abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);

        let mixed = QubitState::equatorial(Complex64::new(0.0, 0.0));
        let e = mixed.eigendecompose(0.3).unwrap();
        assert!(e.degenerate);
        assert_eq!(e.values, [0.5, 0.5]);
        assert_eq!(e.phase, 0.3);
    }

    #[test]
    fn eigenvectors_diagonalize() {
        let s = QubitState::equatorial(Complex64::from_polar(0.31, -1.1));
        let e = s.eigendecompose(0.0).unwrap();
        for k in 0..2 {
            let v = nalgebra::Vector2::new(e.vectors[k][0], e.vectors[k][1]);
            let lhs = s.0 * v;
            assert!((lhs - v * Complex64::new(e.values[k], 0.0)).norm() < 1e-15);
        }
        assert_relative_eq!(e.values[0] + e.values[1], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn non_equatorial_rejected() {
        let m = Matrix2::new(
            Complex64::new(0.7, 0.0),
            Complex64::new(0.1, 0.0),
            Complex64::new(0.1, 0.0),
            Complex64::new(0.3, 0.0),
        );
        assert!(QubitState(m).eigendecompose(0.0).is_err());
    }

    #[test]
    fn single_qubit_ignores_delta() {
        let m = model(0.4, 2.0, 1.0, 0.0, Scheme::SingleQubit, InitialState::Factorized);
        let f = m.factors(2.0).unwrap();
        assert!(f.delta < 0.0);
        assert_relative_eq!(m.coherence_factor(2.0).unwrap(), (-f.gamma_vac).exp(), max_relative = 1e-15);
    }

    #[test]
    fn snapshot_path_agrees_with_direct_path() {
        let m = model(0.2, 0.5, 1.0, 0.6, Scheme::TwoQubitTraced, InitialState::Correlated);
        let t = 1.7;
        let snap = m.snapshot(t, Estimand::CouplingStrength).unwrap();
        let (eff, _) = m.effective_with_derivatives(&snap).unwrap();
        let direct = m.effective(t).unwrap();
        assert_relative_eq!(eff.gamma, direct.gamma, max_relative = 1e-14);
        assert_relative_eq!(eff.xi, direct.xi, max_relative = 1e-14);
    }
}
