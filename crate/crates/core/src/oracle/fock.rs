//! Single-mode operators in a truncated Fock space.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Annihilation operator on levels `0..dim`.
pub fn annihilation(dim: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(dim, dim);
    for k in 1..dim {
        b[(k - 1, k)] = (k as f64).sqrt();
    }
    b
}

/// `ω b†b + n g (b + b†)`: the mode Hamiltonian seen by spin sector `n`.
pub fn sector_hamiltonian(omega: f64, g: f64, n: f64, dim: usize) -> DMatrix<f64> {
    let mut h = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        h[(k, k)] = omega * k as f64;
        if k + 1 < dim {
            let off = n * g * ((k + 1) as f64).sqrt();
            h[(k, k + 1)] = off;
            h[(k + 1, k)] = off;
        }
    }
    h
}

/// Eigen-decomposition of a real symmetric Hamiltonian, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub energies: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn new(h: DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
        let vectors = DMatrix::from_columns(
            &order
                .iter()
                .map(|&i| eig.eigenvectors.column(i).into_owned())
                .collect::<Vec<_>>(),
        );
        Spectrum { energies, vectors }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    fn apply_diagonal(&self, diag: impl Fn(f64) -> Complex64) -> DMatrix<Complex64> {
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        let mut scaled = v.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= diag(self.energies[j]);
        }
        scaled * v.transpose()
    }

    /// `e^{-iHt}`.
    pub fn propagator(&self, t: f64) -> DMatrix<Complex64> {
        self.apply_diagonal(|e| Complex64::from_polar(1.0, -e * t))
    }

    /// `e^{-β(H - E₀)}` and `ln Tr e^{-βH}`, with `E₀` the ground energy.
    pub fn boltzmann(&self, beta: f64) -> (DMatrix<f64>, f64) {
        let e0 = self.energies[0];
        let weights: Vec<f64> = self.energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
        let sum: f64 = weights.iter().sum();
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= weights[j];
        }
        (scaled * self.vectors.transpose(), sum.ln() - beta * e0)
    }

    /// Normalized Gibbs state and `ln Z`.
    pub fn gibbs(&self, beta: f64) -> (DMatrix<f64>, f64) {
        let (unnorm, log_z) = self.boltzmann(beta);
        let tr = unnorm.trace();
        (unnorm / tr, log_z)
    }

    /// Projector on the ground state.
    pub fn ground(&self) -> DMatrix<f64> {
        let v = self.vectors.column(0);
        v * v.transpose()
    }
}

/// Displacement-form propagator of one mode in sector `n`:
/// `e^{-iωb†b t} · exp{(n/2)(α b† - α* b)} · e^{-i n² Δ_r/4}` with
/// `α = 2g(1 - e^{iωt})/ω` and `Δ_r = 4g²(sin ωt - ωt)/ω²`.
pub fn magnus_mode(omega: f64, g: f64, n: f64, t: f64, dim: usize) -> DMatrix<Complex64> {
    let alpha = Complex64::new(2.0 * g / omega, 0.0) * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, omega * t));
    let b = annihilation(dim).map(|x| Complex64::new(x, 0.0));
    let generator = (b.adjoint() * alpha - &b * alpha.conj()) * Complex64::new(0.5 * n, 0.0);
    let displacement = generator.exp();
    let free = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        (0..dim).map(|k| Complex64::from_polar(1.0, -omega * k as f64 * t)),
    ));
    let delta_r = 4.0 * g * g / (omega * omega) * ((omega * t).sin() - omega * t);
    free * displacement * Complex64::from_polar(1.0, -0.25 * n * n * delta_r)
}

/// `Tr[U_a ρ U_b†]`.
pub fn sandwich_trace(ua: &DMatrix<Complex64>, rho: &DMatrix<f64>, ub: &DMatrix<Complex64>) -> Complex64 {
    let r = rho.map(|x| Complex64::new(x, 0.0));
    (ua * r * ub.adjoint()).trace()
}

/// Largest entry-wise difference restricted to levels `0..keep`.
pub fn low_block_gap(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, keep: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..keep {
        for j in 0..keep {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}
