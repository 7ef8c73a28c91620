use qprobe::oracle::evolve::{evolve_correlated, evolve_factorized};
use qprobe::oracle::report::{closed_factors, closed_rho01};
use qprobe::oracle::{compare_report, Check, DiscreteBath, Fixture, Mode};
use qprobe::{BathState, InitialState, Scheme};

const TIMES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

#[test]
fn three_mode_fixture_matches_closed_forms() {
    let r = compare_report(Fixture::ThreeMode, 1.0, &[0.0, 1.0], &TIMES).unwrap();
    assert!(r.pass, "{:#?}", r.failures().collect::<Vec<_>>());
    let t0_worst = r
        .entries
        .iter()
        .filter(|e| e.temperature == 0.0 && e.check != Check::PartitionFunction)
        .map(|e| e.abs_discrepancy)
        .fold(0.0, f64::max);
    assert!(t0_worst < 1e-8);
}

#[test]
fn uncoupled_fixture_is_exact() {
    let r = compare_report(Fixture::Uncoupled, 1.0, &[0.0, 1.0], &TIMES).unwrap();
    assert!(r.pass);
    assert!(r.max_abs_discrepancy < 1e-12);
}

#[test]
fn undersized_truncation_fails() {
    let r = compare_report(Fixture::Truncated, 1.0, &[0.0], &TIMES).unwrap();
    assert!(!r.pass);
    assert!(r.truncation[0].flagged);
    assert!(r.failures().count() > 0);
}

#[test]
fn correlated_single_mode_at_low_temperature() {
    let db = DiscreteBath::new(vec![Mode { omega: 1.0, g: 0.2 }], 40).unwrap();
    let bath = BathState::from_beta(2.0).unwrap();
    for scheme in Scheme::ALL {
        let exact = evolve_correlated(&db, scheme, 1.0, &bath, 1.0).unwrap();
        let f = closed_factors(&db, &bath, scheme, InitialState::Correlated, 1.0, 1.0);
        let closed = closed_rho01(&f, scheme, 1.0, 1.0);
        assert!((exact.rho01() - closed).norm() < 1e-6);
    }
}

#[test]
fn prepared_probe_starts_in_plus_state() {
    let db = DiscreteBath::new(vec![Mode { omega: 1.0, g: 0.2 }], 30).unwrap();
    let bath = BathState::new(0.8).unwrap();
    for scheme in Scheme::ALL {
        let rho = evolve_correlated(&db, scheme, 1.0, &bath, 0.0).unwrap().qubit();
        assert!((rho.rho01().re - 0.5).abs() < 1e-12 && rho.rho01().im.abs() < 1e-12);
    }
}

#[test]
fn evolved_states_are_positive() {
    let db = Fixture::ThreeMode.bath_for(&BathState::zero()).unwrap();
    for scheme in Scheme::ALL {
        for t in TIMES {
            let s = evolve_factorized(&db, scheme, 1.0, &BathState::zero(), t).unwrap();
            let h = (&s.probe + s.probe.adjoint()) * num_complex::Complex64::new(0.5, 0.0);
            let min = h.symmetric_eigenvalues().min();
            assert!(min > -1e-10, "{min}");
            assert!((s.probe.trace().re - 1.0).abs() < 1e-10);
        }
    }
}
