use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TYPE_DETERMINISTIC: u8 = 0;
pub const TYPE_ACTION_DEPENDENT: u8 = 1;
pub const TYPE_ACTION_INDEPENDENT: u8 = 2;
pub const TYPE_CONCEPT_DRIFT: u8 = 3;
pub const TYPE_PIXELS: u8 = 4;
pub const TYPE_MISSING_STATE: u8 = 5;

/// Type 1 modes.
pub const ACTION_REPLACE: u8 = 0;
pub const ACTION_STICKY: u8 = 1;

/// Which observation-modification mechanism a type 5 config uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartialKind {
    Crop,
    Blackout,
    Ram,
}

impl PartialKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PartialKind::Crop => "crop",
            PartialKind::Blackout => "blackout",
            PartialKind::Ram => "ram",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "crop" => Some(PartialKind::Crop),
            "blackout" => Some(PartialKind::Blackout),
            "ram" => Some(PartialKind::Ram),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftMode {
    Sudden,
    Cyclic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftConfig {
    pub mode: DriftMode,
    /// First step index run under concept 2 (sudden mode).
    pub switch_step: u64,
    /// Length of each concept window (cyclic mode).
    pub period: u64,
    pub concept2: Box<StochasticityConfig>,
}

/// Full description of one environment variant's stochasticity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StochasticityConfig {
    pub type_id: u8,
    pub mode: u8,
    pub probability: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial: Option<PartialKind>,
    /// Pugilist type 2 mode 3: displace to the ring corners instead of
    /// uniform positions.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub corners: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftConfig>,
}

impl StochasticityConfig {
    fn plain(type_id: u8, mode: u8, probability: f64) -> Self {
        Self { type_id, mode, probability, partial: None, corners: false, drift: None }
    }

    /// Labelled-state observation, no stochasticity.
    pub fn deterministic() -> Self {
        Self::plain(TYPE_DETERMINISTIC, 0, 0.0)
    }

    /// Raw pixel environment.
    pub fn pixels() -> Self {
        Self::plain(TYPE_PIXELS, 0, 0.0)
    }

    pub fn random_action(p: f64) -> Self {
        Self::plain(TYPE_ACTION_DEPENDENT, ACTION_REPLACE, p)
    }

    pub fn sticky_action(p: f64) -> Self {
        Self::plain(TYPE_ACTION_DEPENDENT, ACTION_STICKY, p)
    }

    pub fn random_event(mode: u8, p: f64) -> Self {
        Self::plain(TYPE_ACTION_INDEPENDENT, mode, p)
    }

    pub fn partial(kind: PartialKind, mode: u8, p: f64) -> Self {
        Self { partial: Some(kind), ..Self::plain(TYPE_MISSING_STATE, mode, p) }
    }

    pub fn crop(mode: u8, p: f64) -> Self {
        Self::partial(PartialKind::Crop, mode, p)
    }

    pub fn blackout(mode: u8, p: f64) -> Self {
        Self::partial(PartialKind::Blackout, mode, p)
    }

    pub fn ram(mode: u8, p: f64) -> Self {
        Self::partial(PartialKind::Ram, mode, p)
    }

    pub fn sudden_drift(switch_step: u64, concept2: StochasticityConfig) -> Self {
        Self {
            drift: Some(DriftConfig { mode: DriftMode::Sudden, switch_step, period: 1, concept2: Box::new(concept2) }),
            ..Self::plain(TYPE_CONCEPT_DRIFT, 0, 0.0)
        }
    }

    pub fn cyclic_drift(period: u64, concept2: StochasticityConfig) -> Self {
        Self {
            drift: Some(DriftConfig { mode: DriftMode::Cyclic, switch_step: 1, period, concept2: Box::new(concept2) }),
            ..Self::plain(TYPE_CONCEPT_DRIFT, 0, 0.0)
        }
    }

    pub fn with_corners(mut self, corners: bool) -> Self {
        self.corners = corners;
        self
    }
}

impl fmt::Display for StochasticityConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {}", self.type_id)?;
        if let Some(kind) = self.partial {
            write!(f, " {}", kind.as_str())?;
        }
        write!(f, " mode {} p={}", self.mode, self.probability)?;
        if let Some(d) = &self.drift {
            match d.mode {
                DriftMode::Sudden => write!(f, " sudden@{}", d.switch_step)?,
                DriftMode::Cyclic => write!(f, " cyclic/{}", d.period)?,
            }
            write!(f, " -> [{}]", d.concept2)?;
        }
        Ok(())
    }
}

/// A configuration rejected at construction time.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid configuration field `{field}`: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { field: field.into(), reason: reason.into() }
    }

    pub(crate) fn nested(self, prefix: &str) -> Self {
        Self { field: format!("{prefix}.{}", self.field), reason: self.reason }
    }
}
