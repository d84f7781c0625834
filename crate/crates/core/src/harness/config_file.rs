//! JSON run configuration files and the named experiment presets.
//!
//! A file looks like
//!
//! ```json
//! {
//!   "game": "brickout",
//!   "stochasticity": { "type_id": 1, "mode": 0, "probability": 0.3 },
//!   "run": { "agent": "scripted", "episodes": 100, "seed": 7 }
//! }
//! ```
//!
//! `"preset": "breakout/type1"` may replace `stochasticity` (and implies the
//! game). Every key is checked; unknown keys are errors.

use serde_json::{Map, Value};
use thiserror::Error;

use crate::games::GameId;
use crate::wrappers::config::{DriftConfig, DriftMode, PartialKind, StochasticityConfig};
use crate::wrappers::{ConfigError, WrapperRegistry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigFileError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: expected {expected}")]
    InvalidValue { key: String, expected: String },
    #[error("value out of range for `{key}`: {message}")]
    Range { key: String, message: String },
    #[error("unknown preset `{0}` (run list-presets)")]
    UnknownPreset(String),
    #[error(transparent)]
    Validation(#[from] ConfigError),
}

/// Harness parameters a file may set; the command line can override each.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunParams {
    pub agent: Option<String>,
    pub episodes: Option<u64>,
    pub seed: Option<u64>,
    pub frameskip: Option<u32>,
    pub parallel: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoadedConfig {
    pub game: GameId,
    pub config: StochasticityConfig,
    pub run: RunParams,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub game: GameId,
    pub config: StochasticityConfig,
    pub summary: &'static str,
}

/// The named experiment configurations. `breakout/` presets run on Brickout
/// and `boxing/` presets on Pugilist.
pub fn list_presets() -> Vec<Preset> {
    use StochasticityConfig as C;
    let b = GameId::Brickout;
    let p = GameId::Pugilist;
    let preset = |name, game, config, summary| Preset { name, game, config, summary };
    vec![
        preset("breakout/type0", b, C::deterministic(), "labelled state observation"),
        preset("breakout/type1", b, C::random_action(0.3), "random action with p=0.3"),
        preset("breakout/type2", b, C::random_event(1, 0.25), "block hit canceled with p=0.25"),
        preset(
            "breakout/type3",
            b,
            C::sudden_drift(300, C::blackout(10, 1.0)),
            "switches to breakout/type5a after 300 steps",
        ),
        preset("breakout/type4", b, C::pixels(), "raw pixels"),
        preset("breakout/type5a", b, C::blackout(10, 1.0), "ball only visible in the middle band"),
        preset("breakout/type5b", b, C::crop(1, 0.75), "left half hidden on 75% of frames"),
        preset("breakout/type5c", b, C::crop(5, 1.0), "moving circular window"),
        preset("boxing/type0", p, C::deterministic(), "labelled state observation"),
        preset("boxing/type1", p, C::random_action(0.3), "random action with p=0.3"),
        preset("boxing/type2", p, C::random_event(1, 0.001), "colorflip with p=0.001"),
        preset("boxing/type3", p, C::sudden_drift(300, C::ram(2, 0.7)), "switches to boxing/type5c after 300 steps"),
        preset("boxing/type4", p, C::pixels(), "raw pixels"),
        preset("boxing/type5a", p, C::blackout(9, 1.0), "scores and clock hidden"),
        preset("boxing/type5b", p, C::crop(2, 0.75), "right half hidden on 75% of frames"),
        preset("boxing/type5c", p, C::ram(2, 0.7), "enemy hidden on 70% of frames"),
    ]
}

pub fn preset(name: &str) -> Result<Preset, ConfigFileError> {
    list_presets().into_iter().find(|p| p.name == name).ok_or_else(|| ConfigFileError::UnknownPreset(name.to_owned()))
}

fn invalid(key: &str, expected: &str) -> ConfigFileError {
    ConfigFileError::InvalidValue { key: key.to_owned(), expected: expected.to_owned() }
}

fn check_keys(obj: &Map<String, Value>, prefix: &str, allowed: &[&str]) -> Result<(), ConfigFileError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ConfigFileError::UnknownKey(join(prefix, key)));
        }
    }
    Ok(())
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_owned()
    } else {
        format!("{prefix}.{key}")
    }
}

fn object<'a>(v: &'a Value, key: &str) -> Result<&'a Map<String, Value>, ConfigFileError> {
    v.as_object().ok_or_else(|| invalid(key, "an object"))
}

fn uint(v: &Value, key: &str, max: u64) -> Result<u64, ConfigFileError> {
    if let Some(n) = v.as_u64() {
        if n > max {
            return Err(ConfigFileError::Range { key: key.to_owned(), message: format!("{n} exceeds {max}") });
        }
        return Ok(n);
    }
    match v.as_i64() {
        Some(n) => Err(ConfigFileError::Range { key: key.to_owned(), message: format!("{n} is negative") }),
        None => Err(invalid(key, "a non-negative integer")),
    }
}

fn string<'a>(v: &'a Value, key: &str) -> Result<&'a str, ConfigFileError> {
    v.as_str().ok_or_else(|| invalid(key, "a string"))
}

fn parse_stochasticity(v: &Value, prefix: &str) -> Result<StochasticityConfig, ConfigFileError> {
    let obj = object(v, prefix)?;
    check_keys(obj, prefix, &["type_id", "mode", "probability", "partial", "corners", "drift"])?;
    let key = |k: &str| join(prefix, k);
    let type_id = match obj.get("type_id") {
        Some(v) => uint(v, &key("type_id"), 255)? as u8,
        None => return Err(invalid(&key("type_id"), "a stochasticity type 0-5 (required)")),
    };
    let mode = obj.get("mode").map(|v| uint(v, &key("mode"), 255)).transpose()?.unwrap_or(0) as u8;
    let probability = match obj.get("probability") {
        None => 0.0,
        Some(v) => {
            let p = v.as_f64().ok_or_else(|| invalid(&key("probability"), "a number"))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigFileError::Range {
                    key: key("probability"),
                    message: format!("{p} is outside [0, 1]"),
                });
            }
            p
        }
    };
    let partial = obj
        .get("partial")
        .map(|v| {
            let s = string(v, &key("partial"))?;
            PartialKind::parse(s).ok_or_else(|| invalid(&key("partial"), "one of crop, blackout, ram"))
        })
        .transpose()?;
    let corners = match obj.get("corners") {
        None => false,
        Some(v) => v.as_bool().ok_or_else(|| invalid(&key("corners"), "true or false"))?,
    };
    let drift = obj.get("drift").map(|v| parse_drift(v, &key("drift"))).transpose()?;
    Ok(StochasticityConfig { type_id, mode, probability, partial, corners, drift })
}

fn parse_drift(v: &Value, prefix: &str) -> Result<DriftConfig, ConfigFileError> {
    let obj = object(v, prefix)?;
    check_keys(obj, prefix, &["mode", "switch_step", "period", "concept2"])?;
    let key = |k: &str| join(prefix, k);
    let mode = match obj.get("mode").map(|v| string(v, &key("mode"))).transpose()? {
        None | Some("sudden") => DriftMode::Sudden,
        Some("cyclic") => DriftMode::Cyclic,
        Some(_) => return Err(invalid(&key("mode"), "sudden or cyclic")),
    };
    let positive = |k: &str| -> Result<u64, ConfigFileError> {
        match obj.get(k) {
            None => Ok(1),
            Some(v) => {
                let n = uint(v, &key(k), u64::MAX)?;
                if n == 0 {
                    return Err(ConfigFileError::Range { key: key(k), message: "must be positive".to_owned() });
                }
                Ok(n)
            }
        }
    };
    let switch_step = positive("switch_step")?;
    let period = positive("period")?;
    let concept2 = match obj.get("concept2") {
        Some(v) => parse_stochasticity(v, &key("concept2"))?,
        None => return Err(invalid(&key("concept2"), "a nested stochasticity object (required)")),
    };
    Ok(DriftConfig { mode, switch_step, period, concept2: Box::new(concept2) })
}

fn parse_run(v: &Value) -> Result<RunParams, ConfigFileError> {
    let obj = object(v, "run")?;
    check_keys(obj, "run", &["agent", "episodes", "seed", "frameskip", "parallel"])?;
    let mut run = RunParams::default();
    if let Some(v) = obj.get("agent") {
        run.agent = Some(string(v, "run.agent")?.to_owned());
    }
    if let Some(v) = obj.get("episodes") {
        let n = uint(v, "run.episodes", u64::MAX)?;
        if n == 0 {
            return Err(ConfigFileError::Range { key: "run.episodes".into(), message: "must be at least 1".into() });
        }
        run.episodes = Some(n);
    }
    if let Some(v) = obj.get("seed") {
        run.seed = Some(uint(v, "run.seed", u64::MAX)?);
    }
    if let Some(v) = obj.get("frameskip") {
        let k = uint(v, "run.frameskip", 64)?;
        if k == 0 {
            return Err(ConfigFileError::Range { key: "run.frameskip".into(), message: "must be at least 1".into() });
        }
        run.frameskip = Some(k as u32);
    }
    if let Some(v) = obj.get("parallel") {
        run.parallel = Some(uint(v, "run.parallel", 1024)? as usize);
    }
    Ok(run)
}

/// Parse and validate a configuration document.
pub fn load_config(text: &str) -> Result<LoadedConfig, ConfigFileError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ConfigFileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = object(&doc, "document")?;
    check_keys(obj, "", &["game", "preset", "stochasticity", "run"])?;
    let game = obj
        .get("game")
        .map(|v| string(v, "game")?.parse::<GameId>().map_err(|_| invalid("game", "brickout or pugilist")))
        .transpose()?;
    let (game, config) = match (obj.get("preset"), obj.get("stochasticity")) {
        (Some(_), Some(_)) => return Err(invalid("preset", "either a preset or a stochasticity block, not both")),
        (Some(v), None) => {
            let p = preset(string(v, "preset")?)?;
            if game.is_some_and(|g| g != p.game) {
                return Err(invalid("game", &format!("{} (preset {} runs on it)", p.game, p.name)));
            }
            (p.game, p.config)
        }
        (None, Some(v)) => {
            let game = game.ok_or_else(|| invalid("game", "brickout or pugilist (required without a preset)"))?;
            (game, parse_stochasticity(v, "stochasticity")?)
        }
        (None, None) => return Err(invalid("stochasticity", "a stochasticity block or a preset (required)")),
    };
    WrapperRegistry::standard().validate(game, &config)?;
    let run = obj.get("run").map(parse_run).transpose()?.unwrap_or_default();
    Ok(LoadedConfig { game, config, run })
}
