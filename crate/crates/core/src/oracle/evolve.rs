//! Exact evolution sector by sector.
//!
//! Each probe basis state `s` fixes a spin projection `n_s`, and the bath
//! then evolves under `Π_r e^{-i h_r^{(n_s)} t}`. Starting from the `|+⟩`
//! product state, the probe matrix elements are
//!
//! ```text
//! ρ_{s's}(t) = ρ_{s's}(0) e^{-iω₀(n_s' - n_s)t/2} Σ_c p_c Π_r Tr[u_r^{(n_s')} σ_{c,r} u_r^{(n_s)†}]
//! ```
//!
//! where the bath starts in the mixture `Σ_c p_c ⊗_r σ_{c,r}`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fock::{low_block_gap, magnus_mode, sandwich_trace, sector_hamiltonian, Spectrum};
use super::DiscreteBath;
use crate::dynamics::{QubitState, Scheme, TwoQubitState};
use crate::error::{ensure, Result};
use crate::spectral::BathState;

/// Spin projection of each probe basis state, first qubit most significant.
pub fn basis_projections(scheme: Scheme) -> &'static [f64] {
    match scheme {
        Scheme::TwoQubitTraced => &[2.0, 0.0, 0.0, -2.0],
        Scheme::SingleQubit => &[1.0, -1.0],
    }
}

fn sector_values(scheme: Scheme) -> &'static [(f64, f64)] {
    const TWO: [(f64, f64); 3] = [(2.0, 1.0), (0.0, 2.0), (-2.0, 1.0)];
    const ONE: [(f64, f64); 2] = [(1.0, 1.0), (-1.0, 1.0)];
    match scheme {
        Scheme::TwoQubitTraced => &TWO,
        Scheme::SingleQubit => &ONE,
    }
}

fn key(n: f64) -> i32 {
    n.round() as i32
}

/// Diagonalized mode Hamiltonians for every spin sector, indexed `[n][mode]`.
struct SectorSpectra {
    by_sector: BTreeMap<i32, Vec<Spectrum>>,
}

impl SectorSpectra {
    fn new(db: &DiscreteBath, sectors: impl IntoIterator<Item = f64>) -> Self {
        let mut by_sector = BTreeMap::new();
        for n in sectors {
            by_sector.entry(key(n)).or_insert_with(|| {
                db.modes
                    .iter()
                    .map(|m| Spectrum::new(sector_hamiltonian(m.omega, m.g, n, db.dim())))
                    .collect()
            });
        }
        SectorSpectra { by_sector }
    }

    fn get(&self, n: f64) -> &[Spectrum] {
        &self.by_sector[&key(n)]
    }
}

/// Initial bath state as a mixture of mode-product states.
#[derive(Debug, Clone)]
pub struct PreparedBath {
    /// `(p_c, [σ_{c,r}])`, with `Σ p_c = 1`.
    pub components: Vec<(f64, Vec<DMatrix<f64>>)>,
    /// `ln Tr e^{-βH}` over probe and bath, for the correlated preparation
    /// at `T > 0`.
    pub log_partition: Option<f64>,
}

impl PreparedBath {
    /// Reduced state of mode `r`.
    pub fn mode_state(&self, r: usize) -> DMatrix<f64> {
        let dim = self.components[0].1[r].nrows();
        self.components
            .iter()
            .fold(DMatrix::zeros(dim, dim), |acc, (p, states)| acc + &states[r] * *p)
    }

    /// Largest occupation of the last Fock level.
    fn tail(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|(_, states)| states.iter().map(|s| s[(s.nrows() - 1, s.ncols() - 1)]))
            .fold(0.0, f64::max)
    }
}

/// Thermal (or vacuum) state of the uncoupled modes.
pub fn prepare_factorized(db: &DiscreteBath, bath: &BathState) -> PreparedBath {
    let spectra = SectorSpectra::new(db, [0.0]);
    let states = spectra
        .get(0.0)
        .iter()
        .map(|s| match bath.beta() {
            Some(beta) => s.gibbs(beta).0,
            None => s.ground(),
        })
        .collect();
    PreparedBath {
        components: vec![(1.0, states)],
        log_partition: None,
    }
}

/// Bath state left by projecting the joint probe-bath Gibbs state on the
/// `|+⟩` product state: a mixture over spin sectors of displaced thermal
/// states. At `T = 0` only the ground sector survives.
pub fn prepare_correlated(
    db: &DiscreteBath,
    scheme: Scheme,
    omega_0: f64,
    bath: &BathState,
) -> PreparedBath {
    let sectors = sector_values(scheme);
    let spectra = SectorSpectra::new(db, sectors.iter().map(|&(n, _)| n));
    let Some(beta) = bath.beta() else {
        let ground = sectors.iter().map(|&(n, _)| n).fold(f64::INFINITY, f64::min);
        let states = spectra.get(ground).iter().map(Spectrum::ground).collect();
        return PreparedBath {
            components: vec![(1.0, states)],
            log_partition: None,
        };
    };
    let mut logs = Vec::with_capacity(sectors.len());
    let mut comps = Vec::with_capacity(sectors.len());
    for &(n, mult) in sectors {
        let mut log_w = mult.ln() - 0.5 * beta * omega_0 * n;
        let mut states = Vec::with_capacity(db.modes.len());
        for s in spectra.get(n) {
            let (rho, log_z) = s.gibbs(beta);
            log_w += log_z;
            states.push(rho);
        }
        logs.push(log_w);
        comps.push(states);
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    let components = logs
        .iter()
        .zip(comps)
        .map(|(l, states)| ((l - top).exp() / sum, states))
        .collect();
    PreparedBath {
        components,
        log_partition: Some(top + sum.ln()),
    }
}

/// `ln Tr e^{-βH}` from shifted-oscillator energies, with each mode's free
/// partition sum cut at `n_max`.
pub fn log_partition_closed_form(db: &DiscreteBath, scheme: Scheme, omega_0: f64, beta: f64) -> f64 {
    let shift: f64 = db.modes.iter().map(|m| m.g * m.g / m.omega).sum();
    let log_free: f64 = db
        .modes
        .iter()
        .map(|m| {
            (0..=db.n_max)
                .map(|k| (-beta * m.omega * k as f64).exp())
                .sum::<f64>()
                .ln()
        })
        .sum();
    let logs: Vec<f64> = sector_values(scheme)
        .iter()
        .map(|&(n, mult)| mult.ln() - 0.5 * beta * omega_0 * n + beta * n * n * shift)
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln() + log_free
}

/// Probe state after exact evolution.
#[derive(Debug, Clone)]
pub struct ExactState {
    pub scheme: Scheme,
    /// 4×4 (two qubits) or 2×2 density matrix.
    pub probe: DMatrix<Complex64>,
    /// Largest last-level occupation seen in the initial or evolved bath
    /// states.
    pub tail: f64,
}

impl ExactState {
    /// Coherence of the first qubit.
    pub fn rho01(&self) -> Complex64 {
        match self.scheme {
            Scheme::TwoQubitTraced => self.probe[(0, 2)] + self.probe[(1, 3)],
            Scheme::SingleQubit => self.probe[(0, 1)],
        }
    }

    pub fn qubit(&self) -> QubitState {
        QubitState::equatorial(self.rho01())
    }

    pub fn two_qubit(&self) -> Option<TwoQubitState> {
        match self.scheme {
            Scheme::TwoQubitTraced => Some(TwoQubitState(nalgebra::Matrix4::from_fn(|i, j| {
                self.probe[(i, j)]
            }))),
            Scheme::SingleQubit => None,
        }
    }
}

fn validate(omega_0: f64, t: f64) -> Result<()> {
    ensure(omega_0.is_finite() && omega_0 > 0.0, || {
        format!("qubit splitting must be > 0, got {omega_0}")
    })?;
    ensure(t.is_finite() && t >= 0.0, || format!("time must be >= 0, got {t}"))
}

/// Evolve the `|+⟩` probe with the given initial bath for time `t`.
pub fn evolve(
    db: &DiscreteBath,
    prepared: &PreparedBath,
    scheme: Scheme,
    omega_0: f64,
    t: f64,
) -> Result<ExactState> {
    validate(omega_0, t)?;
    let proj = basis_projections(scheme);
    let spectra = SectorSpectra::new(db, proj.iter().copied());
    let mut props: BTreeMap<i32, Vec<DMatrix<Complex64>>> = BTreeMap::new();
    for (&k, specs) in &spectra.by_sector {
        props.insert(k, specs.iter().map(|s| s.propagator(t)).collect());
    }
    let last = db.n_max;
    let mut tail = prepared.tail();
    for us in props.values() {
        for (_, states) in &prepared.components {
            for (u, s) in us.iter().zip(states) {
                let r = s.map(|x| Complex64::new(x, 0.0));
                tail = tail.max((u * r * u.adjoint())[(last, last)].re);
            }
        }
    }
    // bath overlap for each pair of sectors
    let mut overlap: BTreeMap<(i32, i32), Complex64> = BTreeMap::new();
    for &np in proj {
        for &n in proj {
            overlap.entry((key(np), key(n))).or_insert_with(|| {
                let (ua, ub) = (&props[&key(np)], &props[&key(n)]);
                prepared
                    .components
                    .iter()
                    .map(|(p, states)| {
                        states
                            .iter()
                            .enumerate()
                            .map(|(r, s)| sandwich_trace(&ua[r], s, &ub[r]))
                            .product::<Complex64>()
                            * *p
                    })
                    .sum()
            });
        }
    }
    let dim = proj.len();
    let amp = 1.0 / dim as f64;
    let probe = DMatrix::from_fn(dim, dim, |i, j| {
        let (np, n) = (proj[i], proj[j]);
        overlap[&(key(np), key(n))] * Complex64::from_polar(amp, -0.5 * omega_0 * (np - n) * t)
    });
    Ok(ExactState { scheme, probe, tail })
}

pub fn evolve_factorized(
    db: &DiscreteBath,
    scheme: Scheme,
    omega_0: f64,
    bath: &BathState,
    t: f64,
) -> Result<ExactState> {
    evolve(db, &prepare_factorized(db, bath), scheme, omega_0, t)
}

pub fn evolve_correlated(
    db: &DiscreteBath,
    scheme: Scheme,
    omega_0: f64,
    bath: &BathState,
    t: f64,
) -> Result<ExactState> {
    evolve(db, &prepare_correlated(db, scheme, omega_0, bath), scheme, omega_0, t)
}

/// Gap between the displacement-form propagator and exact diagonalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnusCheck {
    /// Largest entry-wise gap over every sector and mode.
    pub max_gap: f64,
    /// Fock levels compared, `0..keep`.
    pub keep: usize,
}

/// Compare both propagators on the lowest third of the Fock space, where
/// truncation of the exact one is negligible.
pub fn magnus_unitary(db: &DiscreteBath, scheme: Scheme, t: f64) -> MagnusCheck {
    let keep = (db.n_max / 3).max(1);
    let mut max_gap: f64 = 0.0;
    for &(n, _) in sector_values(scheme) {
        for m in &db.modes {
            let exact = Spectrum::new(sector_hamiltonian(m.omega, m.g, n, db.dim())).propagator(t);
            let magnus = magnus_mode(m.omega, m.g, n, t, db.dim());
            max_gap = max_gap.max(low_block_gap(&exact, &magnus, keep));
        }
    }
    MagnusCheck { max_gap, keep }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{discrete_factors, Mode};

    fn one_mode() -> DiscreteBath {
        DiscreteBath::new(vec![Mode { omega: 1.0, g: 0.1 }], 30).unwrap()
    }

    #[test]
    fn evolved_probe_has_unit_trace() {
        let db = one_mode();
        let bath = BathState::new(1.0).unwrap();
        for scheme in Scheme::ALL {
            let s = evolve_correlated(&db, scheme, 1.0, &bath, 2.0).unwrap();
            assert!((s.probe.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            let h = &s.probe - s.probe.adjoint();
            assert!(h.norm() < 1e-12);
        }
    }

    #[test]
    fn single_qubit_vacuum_coherence() {
        let db = one_mode();
        let t = 1.7;
        let s = evolve_factorized(&db, Scheme::SingleQubit, 1.0, &BathState::zero(), t).unwrap();
        let f = discrete_factors(&db, &BathState::zero(), t);
        let expected = Complex64::from_polar(0.5 * (-f.gamma()).exp(), -t);
        assert!((s.rho01() - expected).norm() < 1e-12);
    }

    #[test]
    fn correlated_weights_sum_to_one() {
        let db = one_mode();
        let p = prepare_correlated(&db, Scheme::TwoQubitTraced, 1.0, &BathState::new(0.7).unwrap());
        let total: f64 = p.components.iter().map(|c| c.0).sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!((p.mode_state(0).trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partition_function_matches_closed_form() {
        let db = one_mode();
        for scheme in Scheme::ALL {
            let p = prepare_correlated(&db, scheme, 1.0, &BathState::new(1.0).unwrap());
            let closed = log_partition_closed_form(&db, scheme, 1.0, 1.0);
            assert!((p.log_partition.unwrap() - closed).abs() < 1e-9);
        }
    }

    #[test]
    fn magnus_agrees_for_all_sectors() {
        let db = one_mode();
        assert!(magnus_unitary(&db, Scheme::TwoQubitTraced, 3.0).max_gap < 1e-10);
    }
}
