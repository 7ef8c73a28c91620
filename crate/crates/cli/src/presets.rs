//! Pinned parameter sets for each published figure. The qubit splitting is
//! the unit throughout.

use std::fmt;
use std::str::FromStr;

use qprobe::{Estimand, InitialState, Scheme};

use crate::scenario::{
    BathSection, DensitySection, OutputSection, ProbeSection, QuadratureSection, Scenario, Spacing, Sweep,
    TimeSettings,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
        }
    }

    pub fn preset(self) -> FigurePreset {
        FigurePreset {
            id: self,
            runs: runs(self),
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig1 to fig9)"))
    }
}

/// What a preset run emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    /// Time-optimized QFI of all four variants along the sweep.
    QfiSweep,
    /// QFI of all four variants on the sampled times.
    QfiCurve,
    /// Optimal-angle CFI against QFI on the sampled times, per sweep value.
    Cfi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PresetRun {
    pub tag: &'static str,
    pub task: Task,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: FigureId,
    pub runs: Vec<PresetRun>,
}

struct Params {
    g: f64,
    s: f64,
    wc: f64,
    temp: f64,
    x: Estimand,
}

fn scenario(name: &str, p: Params, sweep: Option<Sweep>, time: TimeSettings) -> Scenario {
    Scenario {
        name: name.to_string(),
        estimand: p.x,
        probe: ProbeSection {
            omega_0: 1.0,
            scheme: Scheme::TwoQubitTraced,
            initial_state: InitialState::Factorized,
        },
        density: DensitySection {
            coupling: p.g,
            ohmicity: p.s,
            cutoff: p.wc,
        },
        bath: BathSection { temperature: p.temp },
        sweep,
        time,
        quadrature: QuadratureSection { rel_tol: 1e-8 },
        output: OutputSection {
            dir: None,
            stem: name.to_string(),
        },
    }
}

fn sweep(variable: Estimand, min: f64, max: f64, points: usize, spacing: Spacing) -> Option<Sweep> {
    Some(Sweep {
        variable,
        min,
        max,
        points,
        spacing,
    })
}

fn window(t_max: f64, grid_size: usize) -> TimeSettings {
    TimeSettings {
        t_max,
        grid_size,
        t_min: 0.01,
        samples: 100,
        spacing: Spacing::Log,
    }
}

fn samples(t_min: f64, t_max: f64, n: usize, spacing: Spacing) -> TimeSettings {
    TimeSettings {
        t_max,
        grid_size: 1000,
        t_min,
        samples: n,
        spacing,
    }
}

fn run(tag: &'static str, task: Task, scenario: Scenario) -> PresetRun {
    PresetRun { tag, task, scenario }
}

use Estimand::{CouplingStrength as G, CutoffFrequency as Wc, Temperature as T};

fn cutoff_sweep(name: &str, g: f64, s: f64, t_max: f64, grid: usize) -> Scenario {
    scenario(
        name,
        Params { g, s, wc: 1.0, temp: 0.0, x: Wc },
        sweep(Wc, 0.5, 3.0, 6, Spacing::Linear),
        window(t_max, grid),
    )
}

fn coupling_sweep(name: &str, s: f64) -> Scenario {
    scenario(
        name,
        Params { g: 1.0, s, wc: 5.0, temp: 0.0, x: G },
        sweep(G, 0.2, 2.0, 8, Spacing::Log),
        window(1e3, 3000),
    )
}

fn runs(id: FigureId) -> Vec<PresetRun> {
    match id {
        FigureId::Fig1 => vec![run("sweep", Task::QfiSweep, cutoff_sweep("fig1", 0.01, 0.5, 1e5, 4000))],
        FigureId::Fig2 => vec![run("sweep", Task::QfiSweep, cutoff_sweep("fig2", 1.0, 0.5, 1e5, 4000))],
        FigureId::Fig3 => vec![
            run("sweep", Task::QfiSweep, cutoff_sweep("fig3", 1.0, 1.0, 20.0, 2000)),
            run(
                "inset",
                Task::QfiCurve,
                scenario(
                    "fig3-inset",
                    Params { g: 0.1, s: 1.0, wc: 1.0, temp: 0.0, x: Wc },
                    None,
                    samples(5.0, 20.0, 16, Spacing::Linear),
                ),
            ),
        ],
        FigureId::Fig4 => vec![
            run("sweep", Task::QfiSweep, cutoff_sweep("fig4", 2.0, 2.0, 20.0, 2000)),
            run(
                "curve",
                Task::QfiCurve,
                scenario(
                    "fig4-curve",
                    Params { g: 2.0, s: 2.0, wc: 1.0, temp: 0.0, x: Wc },
                    None,
                    samples(0.01, 20.0, 200, Spacing::Log),
                ),
            ),
        ],
        FigureId::Fig5 => vec![run("sweep", Task::QfiSweep, coupling_sweep("fig5", 0.1))],
        FigureId::Fig6 => vec![run("sweep", Task::QfiSweep, coupling_sweep("fig6", 1.0))],
        FigureId::Fig7 => vec![run("sweep", Task::QfiSweep, coupling_sweep("fig7", 2.0))],
        FigureId::Fig8 => [("s0.5", "fig8-s0.5", 0.5), ("s1", "fig8-s1", 1.0), ("s2", "fig8-s2", 2.0)]
            .into_iter()
            .map(|(tag, name, s)| {
                run(
                    tag,
                    Task::QfiSweep,
                    scenario(
                        name,
                        Params { g: 1.0, s, wc: 5.0, temp: 1.0, x: T },
                        sweep(T, 0.5, 2.0, 7, Spacing::Linear),
                        window(50.0, 200),
                    ),
                )
            })
            .collect(),
        FigureId::Fig9 => {
            let times = samples(0.01, 20.0, 50, Spacing::Log);
            vec![
                run(
                    "coupling",
                    Task::Cfi,
                    scenario(
                        "fig9-coupling",
                        Params { g: 1.0, s: 0.1, wc: 5.0, temp: 0.0, x: G },
                        sweep(G, 0.2, 2.0, 4, Spacing::Log),
                        times,
                    ),
                ),
                run(
                    "temperature",
                    Task::Cfi,
                    scenario(
                        "fig9-temperature",
                        Params { g: 1.0, s: 1.0, wc: 5.0, temp: 1.0, x: T },
                        sweep(T, 0.5, 2.0, 4, Spacing::Linear),
                        times,
                    ),
                ),
                run(
                    "cutoff",
                    Task::Cfi,
                    scenario(
                        "fig9-cutoff",
                        Params { g: 0.01, s: 0.5, wc: 1.0, temp: 0.0, x: Wc },
                        sweep(Wc, 0.5, 3.0, 4, Spacing::Linear),
                        times,
                    ),
                ),
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid() {
        for id in FigureId::ALL {
            let p = id.preset();
            assert!(!p.runs.is_empty());
            for r in &p.runs {
                r.scenario.validate().unwrap();
            }
            assert_eq!(id.as_str().parse::<FigureId>().unwrap(), id);
        }
    }

    #[test]
    fn caption_parameters() {
        let fig1 = &FigureId::Fig1.preset().runs[0].scenario;
        assert_eq!((fig1.density.coupling, fig1.density.ohmicity, fig1.bath.temperature), (0.01, 0.5, 0.0));
        assert_eq!(FigureId::Fig2.preset().runs[0].scenario.density.coupling, 1.0);
        let fig3 = FigureId::Fig3.preset();
        assert_eq!(fig3.runs[0].scenario.density.ohmicity, 1.0);
        assert_eq!(fig3.runs[1].scenario.density.coupling, 0.1);
        let fig4 = &FigureId::Fig4.preset().runs[0].scenario;
        assert_eq!((fig4.density.ohmicity, fig4.density.coupling), (2.0, 2.0));
        for id in [FigureId::Fig5, FigureId::Fig6, FigureId::Fig7] {
            assert_eq!(id.preset().runs[0].scenario.density.cutoff, 5.0);
        }
        for r in FigureId::Fig8.preset().runs {
            assert_eq!((r.scenario.density.cutoff, r.scenario.density.coupling), (5.0, 1.0));
        }
    }
}
