//! Exact evolution against the closed forms, fed with the discrete factors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dense::{trace_distance, DenseSystem};
use super::evolve::{
    evolve, log_partition_closed_form, magnus_unitary, prepare_correlated, prepare_factorized,
    ExactState, PreparedBath,
};
use super::{discrete_factors, truncation_rules, DiscreteBath, Fixture, TruncationRules, TAIL_BOUND};
use crate::correlations::sector_average;
use crate::dynamics::{two_qubit_from_factors, DephasingFactors, InitialState, Scheme};
use crate::error::Result;
use crate::spectral::BathState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Reduced qubit coherence.
    Coherence,
    /// Every element of the two-qubit state.
    TwoQubitState,
    /// Displacement-form propagator against diagonalization.
    Magnus,
    /// Relative gap in `Tr e^{-βH}`.
    PartitionFunction,
    /// Dense full-space evolution against the sector route.
    Dense,
    /// Trace distance between the dense projected bath state and the sector mixture.
    ProjectedBath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub fixture: String,
    pub check: Check,
    pub scheme: Scheme,
    pub initial_state: Option<InitialState>,
    pub temperature: f64,
    pub t: Option<f64>,
    pub abs_discrepancy: f64,
    pub rel_discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationStatus {
    pub temperature: f64,
    pub rules: TruncationRules,
    /// Largest last-level occupation seen during any evolution.
    pub tail: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub fixture: String,
    pub omega_0: f64,
    pub truncation: Vec<TruncationStatus>,
    pub entries: Vec<ReportEntry>,
    pub max_abs_discrepancy: f64,
    pub max_rel_discrepancy: f64,
    pub pass: bool,
}

impl CompareReport {
    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Closed-form factors for a discrete bath.
pub fn closed_factors(
    db: &DiscreteBath,
    bath: &BathState,
    scheme: Scheme,
    initial_state: InitialState,
    omega_0: f64,
    t: f64,
) -> DephasingFactors {
    let d = discrete_factors(db, bath, t);
    let (gamma_corr, chi) = match initial_state {
        InitialState::Factorized => (0.0, 0.0),
        InitialState::Correlated => {
            let x = sector_average(scheme, omega_0, d.c_shift, d.phi, bath, -2.0);
            (-x.norm().ln(), -x.arg())
        }
    };
    DephasingFactors {
        gamma_vac: d.gamma_vac,
        gamma_th: d.gamma_th,
        gamma_corr,
        delta: d.delta,
        phi: d.phi,
        chi,
        c_shift: d.c_shift,
    }
}

/// `½ e^{-iω₀t} e^{-Γ - iχ} cos Δ`, with `Δ` dropped for one qubit.
pub fn closed_rho01(f: &DephasingFactors, scheme: Scheme, omega_0: f64, t: f64) -> Complex64 {
    let cos_delta = match scheme {
        Scheme::TwoQubitTraced => f.delta.cos(),
        Scheme::SingleQubit => 1.0,
    };
    Complex64::from_polar(0.5 * cos_delta * (-f.gamma()).exp(), -(omega_0 * t + f.chi))
}

struct Builder<'a> {
    fixture: &'a str,
    entries: Vec<ReportEntry>,
}

impl Builder<'_> {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        check: Check,
        scheme: Scheme,
        initial_state: Option<InitialState>,
        temperature: f64,
        t: Option<f64>,
        abs: f64,
        scale: f64,
        tolerance: f64,
        relative: bool,
    ) {
        let rel = if scale > 0.0 { abs / scale } else { abs };
        let measured = if relative { rel } else { abs };
        self.entries.push(ReportEntry {
            fixture: self.fixture.to_string(),
            check,
            scheme,
            initial_state,
            temperature,
            t,
            abs_discrepancy: abs,
            rel_discrepancy: rel,
            tolerance,
            pass: measured.is_finite() && measured <= tolerance,
        });
    }
}

fn max_entry_gap(a: &nalgebra::DMatrix<Complex64>, b: &nalgebra::Matrix4<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// Run every check of `fixture` at each temperature and time.
pub fn compare_report(
    fixture: Fixture,
    omega_0: f64,
    temperatures: &[f64],
    times: &[f64],
) -> Result<CompareReport> {
    let mut b = Builder {
        fixture: fixture.id(),
        entries: Vec::new(),
    };
    let mut truncation = Vec::new();
    for &temperature in temperatures {
        let bath = BathState::new(temperature)?;
        let db = fixture.bath_for(&bath)?;
        let magnus_tol = if fixture == Fixture::Uncoupled { 1e-12 } else { 1e-8 };
        let mut tail: f64 = 0.0;
        for scheme in Scheme::ALL {
            for &t in times {
                let m = magnus_unitary(&db, scheme, t);
                b.push(Check::Magnus, scheme, None, temperature, Some(t), m.max_gap, 1.0, magnus_tol, false);
            }
            let dense = if db.modes.len() == 1 {
                Some(DenseSystem::new(&db, scheme, omega_0)?)
            } else {
                None
            };
            if let Some(beta) = bath.beta() {
                let prepared = prepare_correlated(&db, scheme, omega_0, &bath);
                let closed = log_partition_closed_form(&db, scheme, omega_0, beta);
                let gap = (prepared.log_partition.unwrap_or(f64::NAN) - closed).exp_m1().abs();
                b.push(Check::PartitionFunction, scheme, None, temperature, None, gap, 1.0, 1e-8, true);
                if let Some(sys) = &dense {
                    let gap = (sys.log_partition(beta) - closed).exp_m1().abs();
                    b.push(Check::PartitionFunction, scheme, None, temperature, None, gap, 1.0, 1e-8, true);
                }
            }
            for init in InitialState::ALL {
                let correlated = init == InitialState::Correlated;
                let tol = fixture.state_tolerance(&bath, correlated);
                let prepared: PreparedBath = match init {
                    InitialState::Factorized => prepare_factorized(&db, &bath),
                    InitialState::Correlated => prepare_correlated(&db, scheme, omega_0, &bath),
                };
                if let (Some(sys), true) = (&dense, correlated) {
                    let d = trace_distance(&sys.projected_bath(&bath), &prepared.mode_state(0));
                    b.push(Check::ProjectedBath, scheme, Some(init), temperature, None, d, 1.0, tol, false);
                }
                for &t in times {
                    let exact: ExactState = evolve(&db, &prepared, scheme, omega_0, t)?;
                    tail = tail.max(exact.tail);
                    let f = closed_factors(&db, &bath, scheme, init, omega_0, t);
                    let closed = closed_rho01(&f, scheme, omega_0, t);
                    let gap = (exact.rho01() - closed).norm();
                    b.push(Check::Coherence, scheme, Some(init), temperature, Some(t), gap, closed.norm(), tol, false);
                    if scheme == Scheme::TwoQubitTraced {
                        let state = two_qubit_from_factors(omega_0, t, &f, &bath, init);
                        let gap = max_entry_gap(&exact.probe, &state.0);
                        b.push(Check::TwoQubitState, scheme, Some(init), temperature, Some(t), gap, 0.25, tol, false);
                    }
                    if let Some(sys) = &dense {
                        let env = match init {
                            InitialState::Factorized => prepared.mode_state(0),
                            InitialState::Correlated => sys.projected_bath(&bath),
                        };
                        let gap = (sys.evolve(&env, t) - &exact.probe).norm();
                        b.push(Check::Dense, scheme, Some(init), temperature, Some(t), gap, 1.0, tol, false);
                    }
                }
            }
        }
        let rules = truncation_rules(&db, &bath);
        truncation.push(TruncationStatus {
            temperature,
            rules,
            tail,
            flagged: !rules.ok || tail > TAIL_BOUND,
        });
    }
    let entries = b.entries;
    let max_abs = entries.iter().map(|e| e.abs_discrepancy).fold(0.0, f64::max);
    let max_rel = entries.iter().map(|e| e.rel_discrepancy).fold(0.0, f64::max);
    let pass = entries.iter().all(|e| e.pass) && truncation.iter().all(|s| !s.flagged);
    Ok(CompareReport {
        fixture: fixture.id().to_string(),
        omega_0,
        truncation,
        entries,
        max_abs_discrepancy: max_abs,
        max_rel_discrepancy: max_rel,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TIMES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

    #[test]
    fn one_mode_fixture_passes() {
        let r = compare_report(Fixture::OneMode, 1.0, &[0.0, 1.0], &TIMES).unwrap();
        let bad: Vec<_> = r.failures().collect();
        assert!(r.pass, "{bad:#?} {:#?}", r.truncation);
    }

    #[test]
    fn truncated_fixture_is_flagged() {
        let r = compare_report(Fixture::Truncated, 1.0, &[0.0, 1.0], &TIMES).unwrap();
        assert!(!r.pass);
        assert!(r.truncation.iter().all(|s| s.flagged));
    }
}
