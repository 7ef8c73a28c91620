use std::f64::consts::PI;

use proptest::prelude::*;
use qprobe::correlations::corr_factors;
use qprobe::fisher::{cfi, qfi_closed};
use qprobe::spectral::{c_shift, delta_factor, gamma_th, gamma_vac, phi_factor};
use qprobe::{BathState, Estimand, InitialState, Model, ProbeConfig, QuadSettings, Scheme, SpectralDensity};

fn ohmicity() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), 0.2f64..3.0]
}

fn scheme() -> impl Strategy<Value = Scheme> {
    prop_oneof![Just(Scheme::TwoQubitTraced), Just(Scheme::SingleQubit)]
}

fn initial() -> impl Strategy<Value = InitialState> {
    prop_oneof![Just(InitialState::Factorized), Just(InitialState::Correlated)]
}

fn estimand() -> impl Strategy<Value = Estimand> {
    prop_oneof![
        Just(Estimand::CutoffFrequency),
        Just(Estimand::CouplingStrength),
        Just(Estimand::Temperature)
    ]
}

fn model(scheme: Scheme, init: InitialState, g: f64, s: f64, wc: f64, temp: f64) -> Model {
    Model::new(
        ProbeConfig::new(1.0, scheme, init).unwrap(),
        SpectralDensity::new(g, s, wc).unwrap(),
        BathState::new(temp).unwrap(),
        QuadSettings::default(),
    )
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn factors_are_linear_in_coupling(
        s in ohmicity(), wc in 0.5f64..5.0, g in 0.01f64..2.0, lambda in 0.1f64..10.0,
        t in 0.01f64..20.0, temp in 0.1f64..3.0,
    ) {
        let a = SpectralDensity::new(g, s, wc).unwrap();
        let b = a.with_coupling(lambda * g).unwrap();
        let bath = BathState::new(temp).unwrap();
        let q = QuadSettings::default();
        prop_assert!(close(lambda * gamma_vac(&a, t), gamma_vac(&b, t), 1e-12));
        prop_assert!(close(lambda * delta_factor(&a, t), delta_factor(&b, t), 1e-12));
        prop_assert!(close(lambda * phi_factor(&a, t), phi_factor(&b, t), 1e-12));
        prop_assert!(close(lambda * c_shift(&a), c_shift(&b), 1e-12));
        let (ta, tb) = (gamma_th(&a, &bath, t, &q).unwrap(), gamma_th(&b, &bath, t, &q).unwrap());
        prop_assert!(close(lambda * ta, tb, 1e-12), "{ta} {tb}");
    }

    #[test]
    fn induced_phase_is_nonpositive_and_decreasing(
        s in ohmicity(), wc in 0.5f64..5.0, g in 0.01f64..2.0, t in 0.0f64..30.0, dt in 1e-3f64..1.0,
    ) {
        let sd = SpectralDensity::new(g, s, wc).unwrap();
        let (d0, d1) = (delta_factor(&sd, t), delta_factor(&sd, t + dt));
        prop_assert!(d0 <= 0.0);
        prop_assert!(d1 <= d0 + 1e-14 * d0.abs());
    }

    #[test]
    fn decay_is_nonnegative(
        s in ohmicity(), wc in 0.5f64..5.0, g in 0.01f64..2.0, t in 0.0f64..30.0, temp in 0.0f64..3.0,
    ) {
        let sd = SpectralDensity::new(g, s, wc).unwrap();
        let bath = BathState::new(temp).unwrap();
        prop_assert!(gamma_vac(&sd, t) >= 0.0);
        prop_assert!(gamma_th(&sd, &bath, t, &QuadSettings::default()).unwrap() >= 0.0);
    }

    #[test]
    fn two_qubit_state_is_physical(
        init in initial(), s in ohmicity(), wc in 0.5f64..5.0, g in 0.01f64..2.0,
        t in 0.0f64..20.0, temp in 0.0f64..3.0,
    ) {
        let m = model(Scheme::TwoQubitTraced, init, g, s, wc, temp);
        let rho = m.two_qubit_state(t).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12 && rho.trace().im.abs() < 1e-12);
        prop_assert!((rho.0 - rho.0.adjoint()).norm() < 1e-12);
        prop_assert!(rho.eigenvalues()[0] > -1e-12);
        let reduced = rho.partial_trace_second();
        let direct = m.reduced_qubit_state(t).unwrap();
        prop_assert!((reduced.0 - direct.0).norm() < 1e-12);
    }

    #[test]
    fn classical_information_never_exceeds_quantum(
        sc in scheme(), init in initial(), x in estimand(), s in ohmicity(),
        wc in 0.5f64..5.0, g in 0.05f64..2.0, t in 0.05f64..10.0, temp in 0.2f64..2.0, angle in 0.0f64..(2.0 * PI),
    ) {
        let m = model(sc, init, g, s, wc, temp);
        let q = qfi_closed(&m, x, t).unwrap();
        let c = cfi(&m, x, t, angle).unwrap();
        prop_assert!(q >= 0.0 && c >= 0.0);
        prop_assert!(c <= q * (1.0 + 1e-10) + 1e-300);
    }

    #[test]
    fn level_shift_is_continuous(
        sc in scheme(), s in ohmicity(), wc in 0.5f64..5.0, g in 0.1f64..3.0, temp in 0.0f64..2.0,
    ) {
        let sd = SpectralDensity::new(g, s, wc).unwrap();
        let bath = BathState::new(temp).unwrap();
        let step = 0.01 / wc;
        let mut prev = corr_factors(sc, &sd, &bath, 1.0, 0.0).unwrap().chi;
        prop_assert_eq!(prev, 0.0);
        for k in 1..=2000 {
            let chi = corr_factors(sc, &sd, &bath, 1.0, k as f64 * step).unwrap().chi;
            prop_assert!((chi - prev).abs() < PI / 2.0, "jump at step {}", k);
            prev = chi;
        }
    }
}

#[test]
fn estimand_names_round_trip() {
    for x in Estimand::ALL {
        assert_eq!(x.as_str().parse::<Estimand>().unwrap(), x);
    }
}
