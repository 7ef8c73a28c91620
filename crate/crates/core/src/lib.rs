//! Pure-dephasing dynamics of one- and two-qubit probes in a bosonic bath,
//! and the Fisher information they carry about the bath's cutoff frequency,
//! coupling strength and temperature.
//!
//! Units: the qubit splitting sets the frequency scale, `ħ = k_B = 1`.

pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod estimand;
pub mod fisher;
pub mod oracle;
pub mod gamma;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use estimand::Estimand;
pub use quadrature::{QuadEstimate, QuadSettings};
pub use spectral::{BathState, FactorKind, SpectralDensity};
pub use correlations::CorrelationFactors;
pub use dynamics::{
    DephasingFactors, Effective, FactorDerivatives, InitialState, Model, ProbeConfig, QubitState,
    Scheme, TwoQubitState,
};
pub use fisher::{FisherCurve, FisherOptimum};
