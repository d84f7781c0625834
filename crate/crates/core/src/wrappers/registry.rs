//! Catalog of wrappers per (game, type) and their valid modes.

use crate::games::GameId;
use crate::wrappers::config::{
    ConfigError, PartialKind, StochasticityConfig, TYPE_ACTION_DEPENDENT, TYPE_ACTION_INDEPENDENT, TYPE_CONCEPT_DRIFT,
    TYPE_DETERMINISTIC, TYPE_MISSING_STATE, TYPE_PIXELS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeInfo {
    pub mode: u8,
    pub description: &'static str,
}

const fn m(mode: u8, description: &'static str) -> ModeInfo {
    ModeInfo { mode, description }
}

#[derive(Clone, Copy, Debug)]
pub struct RegistryEntry {
    pub game: GameId,
    pub type_id: u8,
    pub partial: Option<PartialKind>,
    pub wrapper: &'static str,
    pub modes: &'static [ModeInfo],
}

const OBSERVATION_ONLY: &[ModeInfo] = &[m(0, "Default")];
const ACTION_MODES: &[ModeInfo] =
    &[m(0, "Replace the action with a uniform random one"), m(1, "Repeat the previous action (sticky)")];
const DRIFT_MODES: &[ModeInfo] = &[m(0, "Two concepts; schedule set by the drift block")];
const CROP_MODES: &[ModeInfo] = &[
    m(0, "No crop"),
    m(1, "Left half hidden"),
    m(2, "Right half hidden"),
    m(3, "Top half hidden"),
    m(4, "Bottom half hidden"),
    m(5, "Only a moving circular window is visible"),
];

const BRICKOUT_EVENTS: &[ModeInfo] = &[
    m(0, "No stochasticity"),
    m(1, "Block hit cancel"),
    m(2, "Block hit cancel (reward reverted)"),
    m(3, "Regenerate hit block"),
];
const BRICKOUT_BLACKOUT: &[ModeInfo] = &[
    m(0, "No blackout"),
    m(1, "Blocks, paddle, score and the ball in every band"),
    m(2, "Blocks only"),
    m(3, "Paddle only"),
    m(4, "Score only"),
    m(5, "Ball missing top"),
    m(6, "Ball missing middle"),
    m(7, "Ball missing bottom"),
    m(8, "Blocks and paddle"),
    m(9, "Blocks and score"),
    m(10, "Ball missing top and bottom"),
    m(11, "Ball missing in all bands"),
];
const BRICKOUT_RAM: &[ModeInfo] = &[m(0, "No modification"), m(1, "Hide the odd brick columns"), m(2, "Hide the ball")];

const PUGILIST_EVENTS: &[ModeInfo] = &[
    m(0, "No stochasticity"),
    m(1, "Colorflip: swap player and enemy colors"),
    m(2, "Hit cancel: revert score changes"),
    m(3, "Displace both boxers to random positions"),
];
const PUGILIST_BLACKOUT: &[ModeInfo] = &[
    m(0, "No blackout"),
    m(1, "Ring, both scores and clock"),
    m(2, "Left half of the ring"),
    m(3, "Right half of the ring"),
    m(4, "Full ring"),
    m(5, "Enemy score"),
    m(6, "Player score"),
    m(7, "Both scores"),
    m(8, "Clock"),
    m(9, "Both scores and clock"),
];
const PUGILIST_RAM: &[ModeInfo] =
    &[m(0, "No modification"), m(1, "Hide the ring"), m(2, "Hide the enemy"), m(3, "Hide the player")];

#[derive(Clone, Debug)]
pub struct WrapperRegistry {
    entries: Vec<RegistryEntry>,
}

impl WrapperRegistry {
    pub fn standard() -> Self {
        let mut entries = Vec::new();
        for game in GameId::ALL {
            let mut add = |type_id, partial, wrapper, modes| {
                entries.push(RegistryEntry { game, type_id, partial, wrapper, modes })
            };
            let (events, blackout, ram) = match game {
                GameId::Brickout => (BRICKOUT_EVENTS, BRICKOUT_BLACKOUT, BRICKOUT_RAM),
                GameId::Pugilist => (PUGILIST_EVENTS, PUGILIST_BLACKOUT, PUGILIST_RAM),
            };
            add(TYPE_DETERMINISTIC, None, "AnnotatedStateObservation", OBSERVATION_ONLY);
            add(TYPE_ACTION_DEPENDENT, None, "ActionDependentWrapper", ACTION_MODES);
            add(TYPE_ACTION_INDEPENDENT, None, "RandomEventWrapper", events);
            add(TYPE_CONCEPT_DRIFT, None, "ConceptDriftWrapper", DRIFT_MODES);
            add(TYPE_PIXELS, None, "PixelObservation", OBSERVATION_ONLY);
            add(TYPE_MISSING_STATE, Some(PartialKind::Crop), "CropWrapper", CROP_MODES);
            add(TYPE_MISSING_STATE, Some(PartialKind::Blackout), "BlackoutWrapper", blackout);
            add(TYPE_MISSING_STATE, Some(PartialKind::Ram), "RamModificationWrapper", ram);
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn lookup(&self, game: GameId, type_id: u8, partial: Option<PartialKind>) -> Option<&RegistryEntry> {
        self.entries.iter().find(|e| e.game == game && e.type_id == type_id && e.partial == partial)
    }

    /// Check `config` for `game`, naming the first offending field.
    pub fn validate(&self, game: GameId, config: &StochasticityConfig) -> Result<(), ConfigError> {
        let p = config.probability;
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(ConfigError::new("probability", format!("{p} is outside [0, 1]")));
        }
        if config.type_id > TYPE_MISSING_STATE {
            return Err(ConfigError::new("type_id", format!("{} is not a stochasticity type (0-5)", config.type_id)));
        }
        match (config.type_id, config.partial) {
            (TYPE_MISSING_STATE, None) => {
                return Err(ConfigError::new("partial", "type 5 needs one of crop, blackout, ram"));
            }
            (t, Some(kind)) if t != TYPE_MISSING_STATE => {
                return Err(ConfigError::new(
                    "partial",
                    format!("`{}` only applies to type 5, not type {t}", kind.as_str()),
                ));
            }
            _ => {}
        }
        let entry = self
            .lookup(game, config.type_id, config.partial)
            .ok_or_else(|| ConfigError::new("type_id", format!("no wrapper for type {} on {game}", config.type_id)))?;
        if !entry.modes.iter().any(|info| info.mode == config.mode) {
            let max = entry.modes.iter().map(|info| info.mode).max().unwrap_or(0);
            return Err(ConfigError::new(
                "mode",
                format!("{} is not a {} mode for {game} (valid: 0-{max})", config.mode, entry.wrapper),
            ));
        }
        if config.corners
            && !(game == GameId::Pugilist && config.type_id == TYPE_ACTION_INDEPENDENT && config.mode == 3)
        {
            return Err(ConfigError::new("corners", "only meaningful for pugilist type 2 mode 3"));
        }
        match (&config.drift, config.type_id) {
            (None, TYPE_CONCEPT_DRIFT) => Err(ConfigError::new("drift", "type 3 needs a drift block")),
            (Some(_), t) if t != TYPE_CONCEPT_DRIFT => {
                Err(ConfigError::new("drift", format!("a drift block is only allowed with type 3, not type {t}")))
            }
            (Some(drift), _) => {
                if drift.switch_step == 0 {
                    return Err(ConfigError::new("drift.switch_step", "must be a positive integer"));
                }
                if drift.period == 0 {
                    return Err(ConfigError::new("drift.period", "must be a positive integer"));
                }
                let c2 = &drift.concept2;
                if ![TYPE_ACTION_DEPENDENT, TYPE_ACTION_INDEPENDENT, TYPE_MISSING_STATE].contains(&c2.type_id) {
                    return Err(ConfigError::new(
                        "drift.concept2.type_id",
                        format!("concept 2 must be type 1, 2 or 5, not {}", c2.type_id),
                    ));
                }
                self.validate(game, c2).map_err(|e| e.nested("drift.concept2"))
            }
            (None, _) => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(game: GameId, c: &StochasticityConfig) -> String {
        WrapperRegistry::standard().validate(game, c).unwrap_err().field
    }

    #[test]
    fn mode_tables_have_published_sizes() {
        let r = WrapperRegistry::standard();
        let count = |g, t, k| r.lookup(g, t, k).unwrap().modes.len();
        assert_eq!(count(GameId::Brickout, 2, None), 4);
        assert_eq!(count(GameId::Pugilist, 2, None), 4);
        assert_eq!(count(GameId::Brickout, 5, Some(PartialKind::Crop)), 6);
        assert_eq!(count(GameId::Brickout, 5, Some(PartialKind::Blackout)), 12);
        assert_eq!(count(GameId::Pugilist, 5, Some(PartialKind::Blackout)), 10);
        assert_eq!(count(GameId::Brickout, 5, Some(PartialKind::Ram)), 3);
        assert_eq!(count(GameId::Pugilist, 5, Some(PartialKind::Ram)), 4);
    }

    #[test]
    fn invalid_fields_are_named() {
        use StochasticityConfig as C;
        assert_eq!(field(GameId::Pugilist, &C::random_event(99, 0.1)), "mode");
        assert_eq!(field(GameId::Brickout, &C::random_action(1.5)), "probability");
        assert_eq!(field(GameId::Brickout, &C::random_action(f64::NAN)), "probability");
        assert_eq!(field(GameId::Brickout, &C::blackout(12, 1.0)), "mode");
        assert_eq!(field(GameId::Pugilist, &C::blackout(10, 1.0)), "mode");
        assert_eq!(field(GameId::Brickout, &C::random_event(3, 0.1).with_corners(true)), "corners");
        let mut c = C::random_action(0.3);
        c.type_id = 9;
        assert_eq!(field(GameId::Brickout, &c), "type_id");
        c.type_id = 5;
        assert_eq!(field(GameId::Brickout, &c), "partial");
        let nested = C::sudden_drift(300, C::pixels());
        assert_eq!(field(GameId::Brickout, &nested), "drift.concept2.type_id");
        let nested = C::sudden_drift(300, C::crop(7, 1.0));
        assert_eq!(field(GameId::Brickout, &nested), "drift.concept2.mode");
        assert_eq!(field(GameId::Brickout, &C::sudden_drift(0, C::crop(1, 1.0))), "drift.switch_step");
        assert_eq!(field(GameId::Brickout, &C::cyclic_drift(0, C::crop(1, 1.0))), "drift.period");
        let mut c = C::crop(1, 1.0);
        c.drift = C::sudden_drift(10, C::crop(1, 1.0)).drift;
        assert_eq!(field(GameId::Brickout, &c), "drift");
    }

    #[test]
    fn every_table_mode_validates() {
        let r = WrapperRegistry::standard();
        for e in r.entries() {
            for info in e.modes {
                let mut c = StochasticityConfig {
                    type_id: e.type_id,
                    mode: info.mode,
                    partial: e.partial,
                    ..StochasticityConfig::deterministic()
                };
                if e.type_id == TYPE_CONCEPT_DRIFT {
                    c.drift = StochasticityConfig::sudden_drift(1, StochasticityConfig::random_action(0.5)).drift;
                }
                assert!(r.validate(e.game, &c).is_ok(), "{:?} {c}", e.game);
            }
        }
    }
}
