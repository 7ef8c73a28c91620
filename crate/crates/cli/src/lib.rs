//! Scenario runner for the `qprobe` library: TOML scenarios, figure
//! presets, parameter sweeps and oracle validation, written as CSV and JSON.

pub mod presets;
pub mod run;
pub mod scenario;

use std::path::{Path, PathBuf};

use anyhow::Context;

use presets::{FigureId, Task};
use scenario::Scenario;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QPROBE_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "qprobe-out";

/// Command-line values that replace scenario fields.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub t_max: Option<f64>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, s: &mut Scenario) -> anyhow::Result<()> {
        if let Some(t) = self.t_max {
            s.time.t_max = t;
        }
        if let Some(g) = self.grid {
            s.time.grid_size = g;
        }
        if let Some(tol) = self.tol {
            s.quadrature.rel_tol = tol;
        }
        s.validate().context("after applying command-line overrides")?;
        Ok(())
    }
}

/// `--out`, then the scenario's own directory, then the environment, then
/// [`DEFAULT_OUT_DIR`].
pub fn output_dir(flag: Option<&Path>, scenario: Option<&Scenario>, env: Option<PathBuf>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| scenario.and_then(|s| s.output.dir.clone()))
        .or(env)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

pub fn write_output(dir: &Path, file: &str, contents: &str) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(file);
    std::fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

/// Run every part of a figure preset, returning `(file name, contents)`.
pub fn render_figure(id: FigureId, overrides: &Overrides) -> anyhow::Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    for r in id.preset().runs {
        let mut s = r.scenario;
        overrides.apply(&mut s)?;
        let (suffix, body) = match r.task {
            Task::QfiSweep => ("qfi_sweep", run::qfi_sweep_csv(&s, &run::run_qfi_sweep(&s)?)),
            Task::QfiCurve => ("qfi_curve", run::qfi_curve_csv(&s, &run::run_qfi_curve(&s)?)?),
            Task::Cfi => ("cfi", run::cfi_csv(&s, &run::run_cfi(&s)?)),
        };
        files.push((format!("{}_{}.csv", s.output.stem, suffix), body));
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_dir_precedence() {
        let mut s = FigureId::Fig1.preset().runs[0].scenario.clone();
        let env = Some(PathBuf::from("env"));
        assert_eq!(output_dir(None, Some(&s), env.clone()), PathBuf::from("env"));
        s.output.dir = Some("cfg".into());
        assert_eq!(output_dir(None, Some(&s), env.clone()), PathBuf::from("cfg"));
        assert_eq!(output_dir(Some(Path::new("flag")), Some(&s), env), PathBuf::from("flag"));
        assert_eq!(output_dir(None, None, None), PathBuf::from(DEFAULT_OUT_DIR));
    }

    #[test]
    fn overrides_are_validated() {
        let mut s = FigureId::Fig1.preset().runs[0].scenario.clone();
        let bad = Overrides {
            grid: Some(10),
            ..Default::default()
        };
        assert!(bad.apply(&mut s).is_err());
    }
}
