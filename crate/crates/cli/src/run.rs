//! Runners behind each subcommand. Every runner returns typed rows; the
//! `*_csv` functions render them with a `#` header carrying the scenario.

use std::fmt::Write as _;

use qprobe::fisher::{cfi_curve, optimize_variants, qfi_curve, FisherOptimum};
use qprobe::oracle::{compare_report, CompareReport, DiscreteBath, Fixture};
use qprobe::{BathState, Estimand, ProbeConfig, Scheme};
use rayon::prelude::*;
use serde::Serialize;

use crate::scenario::Scenario;

pub type Result<T> = anyhow::Result<T>;

/// Times, temperatures and splitting used by oracle validation runs.
pub const ORACLE_TIMES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const ORACLE_TEMPERATURES: [f64; 2] = [0.0, 1.0];
pub const ORACLE_OMEGA_0: f64 = 1.0;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(scenario: &Scenario, what: &str, columns: &[&str]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# qprobe {what}: {}", scenario.name);
    let _ = writeln!(out, "# units: qubit splitting = 1; times in inverse splitting");
    for line in scenario.to_toml().lines().filter(|l| !l.trim().is_empty()) {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "{}", columns.join(","));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorRow {
    pub t: f64,
    pub gamma_vac: f64,
    pub gamma_th: f64,
    pub gamma_corr: f64,
    /// Zero for a single-qubit probe.
    pub delta: f64,
    pub phi: f64,
    pub chi: f64,
    pub coherence: f64,
}

pub fn run_factors(scenario: &Scenario) -> Result<Vec<FactorRow>> {
    let model = scenario.model()?;
    scenario
        .time
        .samples()
        .par_iter()
        .map(|&t| {
            let f = model.factors(t)?;
            let eff = model.effective_from(&f, t);
            Ok(FactorRow {
                t,
                gamma_vac: f.gamma_vac,
                gamma_th: f.gamma_th,
                gamma_corr: f.gamma_corr,
                delta: eff.delta,
                phi: f.phi,
                chi: f.chi,
                coherence: eff.coherence_factor(),
            })
        })
        .collect()
}

pub fn factors_csv(scenario: &Scenario, rows: &[FactorRow]) -> String {
    let cols = ["t", "gamma_vac", "gamma_th", "gamma_corr", "delta", "phi", "chi", "coherence"];
    let mut out = header(scenario, "factors", &cols);
    for r in rows {
        let vals = [r.t, r.gamma_vac, r.gamma_th, r.gamma_corr, r.delta, r.phi, r.chi, r.coherence];
        let _ = writeln!(out, "{}", vals.map(num).join(","));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub variant: String,
    pub scheme: Scheme,
    pub initial_state: qprobe::InitialState,
    pub optimum: FisherOptimum,
}

fn sweep_values(scenario: &Scenario) -> (Estimand, Vec<f64>) {
    match &scenario.sweep {
        Some(sw) => (sw.variable, sw.values()),
        None => (scenario.estimand, vec![scenario.parameter(scenario.estimand)]),
    }
}

fn sweep_row(x: f64, p: &ProbeConfig, optimum: FisherOptimum) -> SweepRow {
    SweepRow {
        x,
        variant: p.label(),
        scheme: p.scheme,
        initial_state: p.initial_state,
        optimum,
    }
}

/// Time-optimized QFI of all four variants at every sweep value.
pub fn run_qfi_sweep(scenario: &Scenario) -> Result<Vec<SweepRow>> {
    let (var, values) = sweep_values(scenario);
    let per_point = values
        .par_iter()
        .map(|&x| -> Result<Vec<SweepRow>> {
            let s = scenario.with_parameter(var, x);
            s.validate()?;
            let models = s.variant_models()?;
            let opts = optimize_variants(&models, s.estimand, s.time.t_max, s.time.grid_size)?;
            Ok(models.iter().zip(opts).map(|(m, o)| sweep_row(x, &m.probe, o)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

pub fn qfi_sweep_csv(scenario: &Scenario, rows: &[SweepRow]) -> String {
    let cols = ["x", "variant", "t_star", "f_star", "boundary_hit", "flat"];
    let mut out = header(scenario, "qfi-sweep", &cols);
    for r in rows {
        let o = &r.optimum;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(r.x),
            r.variant,
            num(o.t_star),
            num(o.f_star),
            o.boundary_hit,
            o.flat
        );
    }
    out
}

/// Time-optimized QFI of all four variants at the scenario's parameters.
pub fn run_optimize(scenario: &Scenario) -> Result<Vec<SweepRow>> {
    let mut s = scenario.clone();
    s.sweep = None;
    run_qfi_sweep(&s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub t: f64,
    /// In the order of [`ProbeConfig::variants`].
    pub qfi: Vec<f64>,
}

/// QFI of all four variants on the sampled times.
pub fn run_qfi_curve(scenario: &Scenario) -> Result<Vec<CurveRow>> {
    let times = scenario.time.samples();
    let curves = scenario
        .variant_models()?
        .iter()
        .map(|m| qfi_curve(m, scenario.estimand, &times))
        .collect::<qprobe::Result<Vec<_>>>()?;
    Ok(times
        .iter()
        .enumerate()
        .map(|(i, &t)| CurveRow {
            t,
            qfi: curves.iter().map(|c| c.qfi[i]).collect(),
        })
        .collect())
}

pub fn qfi_curve_csv(scenario: &Scenario, rows: &[CurveRow]) -> Result<String> {
    let labels: Vec<String> = ProbeConfig::variants(scenario.probe.omega_0)?
        .iter()
        .map(|p| format!("qfi:{}", p.label()))
        .collect();
    let mut cols = vec!["t"];
    cols.extend(labels.iter().map(String::as_str));
    let mut out = header(scenario, "qfi-curve", &cols);
    for r in rows {
        let vals: Vec<String> = std::iter::once(r.t).chain(r.qfi.iter().copied()).map(num).collect();
        let _ = writeln!(out, "{}", vals.join(","));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CfiRow {
    pub variant: String,
    pub x: f64,
    pub t: f64,
    pub phi_star: f64,
    pub cfi: f64,
    pub qfi: f64,
    /// `|CFI - QFI| / max(QFI, 1e-300)`.
    pub gap: f64,
}

/// Optimal-angle CFI against QFI for every variant, sweep value and time.
pub fn run_cfi(scenario: &Scenario) -> Result<Vec<CfiRow>> {
    let (var, values) = sweep_values(scenario);
    let times = scenario.time.samples();
    let blocks = values
        .par_iter()
        .map(|&x| -> Result<Vec<CfiRow>> {
            let s = scenario.with_parameter(var, x);
            s.validate()?;
            let mut rows = Vec::new();
            for m in s.variant_models()? {
                let c = cfi_curve(&m, s.estimand, &times)?;
                let (cfi, angles) = (c.cfi.unwrap_or_default(), c.angles.unwrap_or_default());
                for (i, &t) in times.iter().enumerate() {
                    let q = c.qfi[i];
                    rows.push(CfiRow {
                        variant: m.probe.label(),
                        x,
                        t,
                        phi_star: angles[i],
                        cfi: cfi[i],
                        qfi: q,
                        gap: (cfi[i] - q).abs() / q.max(1e-300),
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

pub fn cfi_csv(scenario: &Scenario, rows: &[CfiRow]) -> String {
    let cols = ["variant", "x", "t", "phi_star", "cfi", "qfi", "gap"];
    let mut out = header(scenario, "cfi", &cols);
    for r in rows {
        let vals = [r.x, r.t, r.phi_star, r.cfi, r.qfi, r.gap].map(num).join(",");
        let _ = writeln!(out, "{},{vals}", r.variant);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuggestedTruncation {
    pub temperature: f64,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation {
    pub report: CompareReport,
    /// Automatic truncations, listed when the report flags truncation.
    pub suggested: Vec<SuggestedTruncation>,
}

pub fn run_oracle_validation(fixture: Fixture) -> Result<Validation> {
    let report = compare_report(fixture, ORACLE_OMEGA_0, &ORACLE_TEMPERATURES, &ORACLE_TIMES)?;
    let mut suggested = Vec::new();
    for status in report.truncation.iter().filter(|s| s.flagged) {
        let bath = BathState::new(status.temperature)?;
        let db = DiscreteBath::with_auto_truncation(fixture.modes(), &bath)?;
        suggested.push(SuggestedTruncation {
            temperature: status.temperature,
            n_max: db.n_max,
        });
    }
    Ok(Validation { report, suggested })
}

pub fn validation_json(v: &Validation) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}
