//! TOML run configuration. Every field is optional except `experiment`;
//! omitted fields fall back to the bench defaults and unknown keys are
//! rejected so a typo can't silently revert a knob to its default.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::detection::DetectorWiring;
use crate::elements::ElementOp;
use crate::error::{Error, Result};
use crate::experiments::{Counting, ScanGrid, Setup, StateKind};
use crate::source::SourceParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ScanDelay,
    ScanMirror,
    ScanPlate,
    ScanHyper,
    Falsify,
    OracleCheck,
    PolCorrelation,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::ScanDelay => "scan-delay",
            ExperimentKind::ScanMirror => "scan-mirror",
            ExperimentKind::ScanPlate => "scan-plate",
            ExperimentKind::ScanHyper => "scan-hyper",
            ExperimentKind::Falsify => "falsify",
            ExperimentKind::OracleCheck => "oracle-check",
            ExperimentKind::PolCorrelation => "pol-correlation",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateConfig {
    pub kind: StateKind,
    pub theta: f64,
    pub phi: f64,
}

impl Default for StateConfig {
    fn default() -> StateConfig {
        StateConfig { kind: StateKind::Momentum, theta: 0.0, phi: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub state: StateConfig,
    #[serde(default)]
    pub source: SourceParams,
    /// Quartz compensation plate in place.
    #[serde(default = "default_true")]
    pub compensate: bool,
    #[serde(default)]
    pub elements: Vec<ElementOp>,
    #[serde(default)]
    pub wiring: DetectorWiring,
    pub scan: Option<ScanGrid>,
    /// Enables Poisson counts on every curve point.
    pub seed: Option<u64>,
    #[serde(default = "default_mean_pairs")]
    pub mean_pairs: f64,
    /// Output directory for CSV/JSON artifacts.
    pub output: Option<PathBuf>,
    /// Random states drawn for `oracle-check`.
    #[serde(default = "default_oracle_states")]
    pub oracle_states: u32,
    /// Analyzer angles (radians) for `pol-correlation`.
    #[serde(default)]
    pub angles: [f64; 2],
}

fn default_true() -> bool {
    true
}

fn default_mean_pairs() -> f64 {
    1e4
}

fn default_oracle_states() -> u32 {
    100
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            experiment: ExperimentKind::ScanDelay,
            state: StateConfig::default(),
            source: SourceParams::default(),
            compensate: true,
            elements: Vec::new(),
            wiring: DetectorWiring::default(),
            scan: None,
            seed: None,
            mean_pairs: default_mean_pairs(),
            output: None,
            oracle_states: default_oracle_states(),
            angles: [0.0; 2],
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.source.validate()?;
        self.wiring.validate()?;
        if let Some(scan) = &self.scan {
            scan.validate()?;
        }
        if !(self.mean_pairs > 0.0) || !self.mean_pairs.is_finite() {
            return Err(Error::invalid_parameter("mean_pairs", "must be > 0"));
        }
        if self.oracle_states == 0 {
            return Err(Error::invalid_parameter("oracle_states", "must be >= 1"));
        }
        Ok(())
    }

    /// Grid to use, falling back to the experiment's natural default.
    pub fn grid(&self) -> ScanGrid {
        self.scan.unwrap_or(match self.experiment {
            ExperimentKind::ScanDelay | ExperimentKind::Falsify => ScanGrid::default_delay(),
            ExperimentKind::ScanMirror => ScanGrid::default_mirror(),
            _ => ScanGrid::default_phase(),
        })
    }

    pub fn setup(&self) -> Setup {
        Setup {
            state: self.state.kind,
            theta: self.state.theta,
            phi: self.state.phi,
            params: self.source,
            compensate: self.compensate,
            elements: self.elements.clone(),
            wiring: self.wiring.clone(),
            counting: self.seed.map(|seed| Counting { seed, mean_pairs: self.mean_pairs }),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Parse and validate a TOML configuration. Syntax errors keep the
/// parser's span information in the message.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = parse_config("experiment = \"scan_delay\"").unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::ScanDelay);
        assert!(cfg.compensate);
        assert_eq!(cfg.source, SourceParams::default());
        assert_eq!(cfg.grid(), ScanGrid::default_delay());
        assert!(cfg.seed.is_none());
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = parse_config("experiment = \"falsify\"\nvisibilty = 0.9\n").unwrap_err();
        assert!(err.to_string().contains("visibilty"), "{err}");
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_config("experiment = \"scan_delay\"\nseed = =\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn invalid_physics_is_rejected() {
        let err = parse_config(
            "experiment = \"scan_mirror\"\n[source]\nv_pol = 1.5\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { .. }), "{err}");
    }

    #[test]
    fn round_trip_preserves_config() {
        let text = r#"
experiment = "scan_hyper"
seed = 42
mean_pairs = 5000.0

[state]
kind = "hyper"
theta = 0.5
phi = 1.25

[source]
v_pol = 0.9

[scan]
start = 0.0
stop = 6.28
step = 0.1

[[elements]]
kind = "phase_shift"
phi = 0.3
selector = [{ path = "b" }]
"#;
        let cfg = parse_config(text).unwrap();
        let emitted = cfg.to_toml().unwrap();
        let reparsed = parse_config(&emitted).unwrap();
        assert_eq!(cfg, reparsed);
    }
}
