//! Brute-force check of the dephasing formulas: one or two qubits coupled
//! to a few bosonic modes, evolved exactly in a truncated Fock space.
//!
//! The Hamiltonian is
//!
//! ```text
//! H = (ω₀/2) Σ_j σ_z⁽ʲ⁾ + Σ_r ω_r b_r†b_r + (Σ_j σ_z⁽ʲ⁾) Σ_r g_r (b_r + b_r†)
//! ```
//!
//! It is block diagonal in the total spin projection `n`, and inside a
//! block it is a sum of commuting single-mode terms
//! `ω_r b†b + n g_r (b + b†)`. The sector route in [`evolve`] exploits this
//! to stay exact for several modes; [`dense`] diagonalizes the full
//! qubits ⊗ mode space for one mode as a further cross-check.

pub mod dense;
pub mod evolve;
pub mod fock;
pub mod report;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::spectral::BathState;

pub use evolve::{
    evolve_correlated, evolve_factorized, magnus_unitary, prepare_correlated, ExactState,
    MagnusCheck, PreparedBath,
};
pub use report::{compare_report, Check, CompareReport, ReportEntry, TruncationStatus};

/// Per-mode occupation allowed in the last Fock level.
pub const TAIL_BOUND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub omega: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteBath {
    pub modes: Vec<Mode>,
    /// Highest Fock level kept per mode.
    pub n_max: usize,
}

impl DiscreteBath {
    pub fn new(modes: Vec<Mode>, n_max: usize) -> Result<Self> {
        ensure(!modes.is_empty() && modes.len() <= 4, || {
            format!("between 1 and 4 modes supported, got {}", modes.len())
        })?;
        ensure(n_max >= 1, || "n_max must be >= 1".into())?;
        for m in &modes {
            ensure(m.omega > 0.0 && m.omega.is_finite() && m.g.is_finite(), || {
                format!("invalid mode {m:?}")
            })?;
        }
        Ok(DiscreteBath { modes, n_max })
    }

    /// Smallest truncation satisfying both [`truncation_rules`] bounds, and
    /// never below 30.
    pub fn with_auto_truncation(modes: Vec<Mode>, bath: &BathState) -> Result<Self> {
        let mut n = 30usize;
        if let Some(beta) = bath.beta() {
            let w_min = modes.iter().map(|m| m.omega).fold(f64::INFINITY, f64::min);
            n = n.max(((1e12f64).ln() / (beta * w_min)).ceil() as usize + 10);
        }
        for m in &modes {
            let disp = (4.0 * m.g / m.omega).powi(2);
            n = n.max((8.0 * disp).ceil() as usize + 1);
        }
        DiscreteBath::new(modes, n)
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }
}

/// Finite-mode analogs of the continuum dephasing factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteFactors {
    pub gamma_vac: f64,
    pub gamma_th: f64,
    pub delta: f64,
    pub phi: f64,
    pub c_shift: f64,
}

impl DiscreteFactors {
    /// `Γ = Σ 4g²/ω² (1 - cos ωt) coth(βω/2)`.
    pub fn gamma(&self) -> f64 {
        self.gamma_vac + self.gamma_th
    }
}

pub fn discrete_factors(db: &DiscreteBath, bath: &BathState, t: f64) -> DiscreteFactors {
    let mut f = DiscreteFactors {
        gamma_vac: 0.0,
        gamma_th: 0.0,
        delta: 0.0,
        phi: 0.0,
        c_shift: 0.0,
    };
    for m in &db.modes {
        let w = 4.0 * m.g * m.g / (m.omega * m.omega);
        let wt = m.omega * t;
        let one_minus_cos = 2.0 * (0.5 * wt).sin().powi(2);
        f.gamma_vac += w * one_minus_cos;
        if let Some(beta) = bath.beta() {
            f.gamma_th += w * one_minus_cos * 2.0 / (beta * m.omega).exp_m1();
        }
        f.delta += w * (wt.sin() - wt);
        f.phi += w * wt.sin();
        f.c_shift += 4.0 * m.g * m.g / m.omega;
    }
    f
}

/// Rule-based truncation bounds for a bath state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationRules {
    pub n_max: usize,
    /// Largest `(4g/ω)²`, the squared peak displacement; must stay below `n_max/8`.
    pub peak_displacement: f64,
    /// Largest `e^{-βω n_max}`; must stay below `1e-12`.
    pub thermal_tail: f64,
    pub ok: bool,
}

pub fn truncation_rules(db: &DiscreteBath, bath: &BathState) -> TruncationRules {
    let n = db.n_max as f64;
    let peak = db
        .modes
        .iter()
        .map(|m| (4.0 * m.g / m.omega).powi(2))
        .fold(0.0, f64::max);
    let tail = match bath.beta() {
        Some(beta) => db
            .modes
            .iter()
            .map(|m| (-beta * m.omega * n).exp())
            .fold(0.0, f64::max),
        None => 0.0,
    };
    TruncationRules {
        n_max: db.n_max,
        peak_displacement: peak,
        thermal_tail: tail,
        ok: peak < n / 8.0 && tail < 1e-12,
    }
}

/// Named discrete baths used by the validation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    /// ω = 1, g = 0.1.
    OneMode,
    /// ω = (0.5, 1.0, 1.7), g = (0.1, 0.07, 0.05).
    ThreeMode,
    /// One mode with g = 0.
    Uncoupled,
    /// The one-mode bath with `n_max = 2`; expected to fail.
    Truncated,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [
        Fixture::OneMode,
        Fixture::ThreeMode,
        Fixture::Uncoupled,
        Fixture::Truncated,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Fixture::OneMode => "one-mode",
            Fixture::ThreeMode => "three-mode",
            Fixture::Uncoupled => "uncoupled",
            Fixture::Truncated => "truncated",
        }
    }

    pub fn parse(id: &str) -> Option<Fixture> {
        Fixture::ALL.into_iter().find(|f| f.id() == id)
    }

    pub fn modes(self) -> Vec<Mode> {
        match self {
            Fixture::OneMode | Fixture::Truncated => vec![Mode { omega: 1.0, g: 0.1 }],
            Fixture::ThreeMode => vec![
                Mode { omega: 0.5, g: 0.1 },
                Mode { omega: 1.0, g: 0.07 },
                Mode { omega: 1.7, g: 0.05 },
            ],
            Fixture::Uncoupled => vec![Mode { omega: 1.0, g: 0.0 }],
        }
    }

    pub fn bath_for(self, bath: &BathState) -> Result<DiscreteBath> {
        match self {
            Fixture::Truncated => DiscreteBath::new(self.modes(), 2),
            _ => DiscreteBath::with_auto_truncation(self.modes(), bath),
        }
    }

    /// Tolerance for state comparisons at this temperature.
    pub fn state_tolerance(self, bath: &BathState, correlated: bool) -> f64 {
        match self {
            Fixture::Uncoupled => 1e-12,
            _ if correlated || !bath.zero_temperature() => 1e-6,
            _ => 1e-8,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_factor_examples() {
        let db = DiscreteBath::new(vec![Mode { omega: 1.0, g: 0.1 }], 30).unwrap();
        let zero = discrete_factors(&db, &BathState::zero(), 0.0);
        assert_eq!((zero.gamma(), zero.delta, zero.phi), (0.0, 0.0, 0.0));
        let f = discrete_factors(&db, &BathState::zero(), std::f64::consts::PI);
        assert!((f.delta + 0.04 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(f.gamma_th, 0.0);
    }

    #[test]
    fn two_mode_vacuum_decay() {
        let modes = vec![Mode { omega: 0.8, g: 0.1 }, Mode { omega: 1.5, g: 0.2 }];
        let db = DiscreteBath::new(modes.clone(), 30).unwrap();
        let t = 2.2;
        let f = discrete_factors(&db, &BathState::zero(), t);
        let expected: f64 = modes
            .iter()
            .map(|m| 4.0 * m.g * m.g * (1.0 - (m.omega * t).cos()) / (m.omega * m.omega))
            .sum();
        assert!((f.gamma() - expected).abs() < 1e-15);
    }

    #[test]
    fn auto_truncation_meets_rules() {
        for temp in [0.0, 1.0, 2.0] {
            let bath = BathState::new(temp).unwrap();
            let db = Fixture::ThreeMode.bath_for(&bath).unwrap();
            assert!(truncation_rules(&db, &bath).ok, "T = {temp}");
        }
    }

    #[test]
    fn mode_count_is_limited() {
        let m = Mode { omega: 1.0, g: 0.1 };
        assert!(DiscreteBath::new(vec![m; 5], 10).is_err());
        assert!(DiscreteBath::new(vec![], 10).is_err());
    }
}
