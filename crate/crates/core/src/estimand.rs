use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Bath parameter being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimand {
    CutoffFrequency,
    CouplingStrength,
    Temperature,
}

impl Estimand {
    pub const ALL: [Estimand; 3] = [
        Estimand::CutoffFrequency,
        Estimand::CouplingStrength,
        Estimand::Temperature,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Estimand::CutoffFrequency => "cutoff-frequency",
            Estimand::CouplingStrength => "coupling-strength",
            Estimand::Temperature => "temperature",
        }
    }
}

impl fmt::Display for Estimand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Estimand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cutoff-frequency" | "omega-c" | "wc" => Ok(Estimand::CutoffFrequency),
            "coupling-strength" | "coupling" | "g" => Ok(Estimand::CouplingStrength),
            "temperature" | "t" => Ok(Estimand::Temperature),
            other => Err(format!("unknown estimand `{other}`")),
        }
    }
}
