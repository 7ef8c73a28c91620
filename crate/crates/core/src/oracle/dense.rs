//! Full diagonalization of probe ⊗ mode, for baths with a single mode.
//!
//! Nothing here uses the sector structure; the Hamiltonian is built and
//! exponentiated as one matrix.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::evolve::basis_projections;
use super::fock::{annihilation, Spectrum};
use super::DiscreteBath;
use crate::dynamics::Scheme;
use crate::error::{ensure, Result};
use crate::spectral::BathState;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Probe and mode on one dense space, basis index `q·(n_max+1) + k`.
pub struct DenseSystem {
    pub scheme: Scheme,
    pub omega_0: f64,
    pub omega: f64,
    pub g: f64,
    pub d: usize,
    spectrum: Spectrum,
}

impl DenseSystem {
    pub fn new(db: &DiscreteBath, scheme: Scheme, omega_0: f64) -> Result<Self> {
        ensure(db.modes.len() == 1, || {
            format!("dense route takes one mode, got {}", db.modes.len())
        })?;
        let m = db.modes[0];
        let d = db.dim();
        let proj = basis_projections(scheme);
        let b = annihilation(d);
        let x = &b + b.transpose();
        let nq = proj.len();
        let mut h = DMatrix::zeros(nq * d, nq * d);
        for (q, &n) in proj.iter().enumerate() {
            for i in 0..d {
                h[(q * d + i, q * d + i)] = 0.5 * omega_0 * n + m.omega * i as f64;
                for j in 0..d {
                    h[(q * d + i, q * d + j)] += n * m.g * x[(i, j)];
                }
            }
        }
        Ok(DenseSystem {
            scheme,
            omega_0,
            omega: m.omega,
            g: m.g,
            d,
            spectrum: Spectrum::new(h),
        })
    }

    fn nq(&self) -> usize {
        basis_projections(self.scheme).len()
    }

    pub fn propagator(&self, t: f64) -> DMatrix<Complex64> {
        self.spectrum.propagator(t)
    }

    /// `ln Tr e^{-βH}`.
    pub fn log_partition(&self, beta: f64) -> f64 {
        let e0 = self.spectrum.energies[0];
        let sum: f64 = self.spectrum.energies.iter().map(|e| (-beta * (e - e0)).exp()).sum();
        sum.ln() - beta * e0
    }

    /// Mode state `⟨+|ρ|+⟩ / Tr` for the joint Gibbs state, or for the joint
    /// ground state at `T = 0`.
    pub fn projected_bath(&self, bath: &BathState) -> DMatrix<f64> {
        let joint = match bath.beta() {
            Some(beta) => self.spectrum.boltzmann(beta).0,
            None => self.spectrum.ground(),
        };
        let (nq, d) = (self.nq(), self.d);
        let mut out = DMatrix::zeros(d, d);
        for qa in 0..nq {
            for qb in 0..nq {
                out += joint.view((qa * d, qb * d), (d, d));
            }
        }
        let tr = out.trace();
        out / tr
    }

    /// Evolve `|+⟩⟨+| ⊗ ρ_E` and trace out the mode.
    pub fn evolve(&self, bath_state: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
        let (nq, d) = (self.nq(), self.d);
        let amp = 1.0 / nq as f64;
        let mut rho = DMatrix::zeros(nq * d, nq * d);
        for qa in 0..nq {
            for qb in 0..nq {
                rho.view_mut((qa * d, qb * d), (d, d))
                    .copy_from(&bath_state.map(|x| c(amp * x)));
            }
        }
        let u = self.propagator(t);
        let out = &u * rho * u.adjoint();
        DMatrix::from_fn(nq, nq, |qa, qb| out.view((qa * d, qb * d), (d, d)).trace())
    }

    /// `e^{-i(H_S + H_E)t} · exp{½ S ⊗ (αb† - α*b) - ¼ i S² Δ_r}`, with `S`
    /// the total spin projection, exponentiated on the full space.
    pub fn magnus_propagator(&self, t: f64) -> DMatrix<Complex64> {
        let (nq, d) = (self.nq(), self.d);
        let proj = basis_projections(self.scheme);
        let (w, g) = (self.omega, self.g);
        let alpha = c(2.0 * g / w) * (c(1.0) - Complex64::from_polar(1.0, w * t));
        let b = annihilation(d).map(c);
        let disp = b.adjoint() * alpha - &b * alpha.conj();
        let delta_r = 4.0 * g * g / (w * w) * ((w * t).sin() - w * t);
        let mut gen = DMatrix::zeros(nq * d, nq * d);
        let mut free = DVector::zeros(nq * d);
        for (q, &n) in proj.iter().enumerate() {
            let mut block = &disp * c(0.5 * n);
            for i in 0..d {
                block[(i, i)] += Complex64::new(0.0, -0.25 * n * n * delta_r);
                free[q * d + i] = Complex64::from_polar(1.0, -(0.5 * self.omega_0 * n + w * i as f64) * t);
            }
            gen.view_mut((q * d, q * d), (d, d)).copy_from(&block);
        }
        DMatrix::from_diagonal(&free) * gen.exp()
    }

    /// Largest gap between exact and Magnus propagators over mode levels
    /// `0..keep` of every probe block.
    pub fn magnus_gap(&self, t: f64, keep: usize) -> f64 {
        let (nq, d) = (self.nq(), self.d);
        let (a, b) = (self.propagator(t), self.magnus_propagator(t));
        let mut worst: f64 = 0.0;
        for qa in 0..nq {
            for qb in 0..nq {
                for i in 0..keep.min(d) {
                    for j in 0..keep.min(d) {
                        let (r, col) = (qa * d + i, qb * d + j);
                        worst = worst.max((a[(r, col)] - b[(r, col)]).norm());
                    }
                }
            }
        }
        worst
    }
}

/// Trace distance `½ Σ |λ|` of the difference of two real symmetric states.
pub fn trace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    0.5 * (a - b).symmetric_eigenvalues().iter().map(|x| x.abs()).sum::<f64>()
}
