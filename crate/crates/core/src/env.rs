//! The environment contract shared by the games, the wrappers and the harness.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::Frame;
use crate::games::{self, GameId, GameState, RenderFlags};
use crate::rng::RngStream;

/// Index into a game's discrete action set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionId(pub u8);

impl ActionId {
    pub const NOOP: ActionId = ActionId(0);
    pub const FIRE: ActionId = ActionId(1);

    pub fn index(self) -> usize {
        usize::from(self.0)
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One named field of a game's published state schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateField {
    pub label: &'static str,
    pub min: i64,
    pub max: i64,
    pub meaning: &'static str,
}

/// Ordered `(label, value)` vector describing a game's internal state.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnnotatedState {
    entries: Vec<(String, i64)>,
}

impl AnnotatedState {
    pub fn from_entries(entries: Vec<(String, i64)>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[(String, i64)] {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Option<i64> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }

    /// Overwrite an existing field. Returns `false` if the label is absent.
    pub fn set(&mut self, label: &str, value: i64) -> bool {
        match self.entries.iter_mut().find(|(l, _)| l == label) {
            Some(entry) => {
                entry.1 = value;
                true
            }
            None => false,
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.iter().map(|(_, v)| *v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Check labels, order and ranges against `schema`.
    pub fn validate(&self, schema: &[StateField]) -> Result<(), StateError> {
        let found: Vec<&str> = self.labels().collect();
        let expected: Vec<&str> = schema.iter().map(|f| f.label).collect();
        if found != expected {
            return Err(StateError::SchemaMismatch { expected: expected.join(","), found: found.join(",") });
        }
        for (field, value) in schema.iter().zip(self.values()) {
            if value < field.min || value > field.max {
                return Err(StateError::OutOfRange { label: field.label, value, min: field.min, max: field.max });
            }
        }
        Ok(())
    }
}

/// What the agent sees after reset or step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observation {
    Pixels(Frame),
    State(AnnotatedState),
}

impl Observation {
    pub fn frame(&self) -> Option<&Frame> {
        match self {
            Observation::Pixels(f) => Some(f),
            Observation::State(_) => None,
        }
    }

    pub fn state(&self) -> Option<&AnnotatedState> {
        match self {
            Observation::State(s) => Some(s),
            Observation::Pixels(_) => None,
        }
    }
}

/// Which observation an environment produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservationKind {
    Pixels,
    State,
}

/// Every event name a wrapper may report.
pub const EVENT_NAMES: &[&str] = &[
    "type1.replaced",
    "type2.canceled",
    "type2.reverted",
    "type2.regenerated",
    "type2.colorflip",
    "type2.hit_canceled",
    "type2.displaced",
    "type5.masked",
];

/// Per-step counts of stochastic triggers, keyed by registered event name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Events(BTreeMap<&'static str, u64>);

impl Events {
    pub fn new() -> Self {
        Self::default()
    }

    /// Count one trigger of `name`.
    ///
    /// Panics if `name` is not in [`EVENT_NAMES`]; that is a programming error.
    pub fn record(&mut self, name: &'static str) {
        self.add(name, 1);
    }

    pub fn add(&mut self, name: &'static str, n: u64) {
        assert!(EVENT_NAMES.contains(&name), "unregistered event {name}");
        if n > 0 {
            *self.0.entry(name).or_insert(0) += n;
        }
    }

    pub fn get(&self, name: &str) -> u64 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, u64)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn merge(&mut self, other: &Events) {
        for (k, v) in other.iter() {
            self.add(k, v);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepResult {
    pub observation: Observation,
    pub reward: i64,
    pub terminated: bool,
    pub truncated: bool,
    pub events: Events,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("state schema mismatch: expected [{expected}], found [{found}]")]
    SchemaMismatch { expected: String, found: String },
    #[error("state field {label}={value} outside [{min}, {max}]")]
    OutOfRange { label: &'static str, value: i64, min: i64, max: i64 },
    #[error("state field {label}={value} is not allowed: {reason}")]
    Invalid { label: &'static str, value: i64, reason: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("episode over")]
    EpisodeOver,
    #[error("environment has not been reset")]
    NotReset,
    #[error("action {action} outside action space of size {action_count}")]
    InvalidAction { action: u8, action_count: usize },
    #[error(transparent)]
    State(#[from] StateError),
}

/// Reset/step/render contract every environment honours.
pub trait Environment: Send {
    fn game(&self) -> GameId;

    fn action_count(&self) -> usize {
        self.game().action_count()
    }

    fn observation_kind(&self) -> ObservationKind;

    /// Restore the initial state and re-derive every random substream from `seed`.
    fn reset(&mut self, seed: u64) -> Observation;

    fn step(&mut self, action: ActionId) -> Result<StepResult, EnvError>;

    /// Unmodified screen for the current state and persistent render flags.
    fn render(&self) -> Frame;

    fn read_state(&self) -> AnnotatedState;

    fn write_state(&mut self, state: &AnnotatedState) -> Result<(), EnvError>;

    fn is_terminated(&self) -> bool;
}

/// A bare game: the unwrapped pixel (or labelled-state) environment.
#[derive(Clone, Debug)]
pub struct GameEnv {
    state: GameState,
    flags: RenderFlags,
    rng: RngStream,
    kind: ObservationKind,
    ready: bool,
    terminated: bool,
}

impl GameEnv {
    pub fn new(game: GameId, kind: ObservationKind) -> Self {
        Self {
            state: GameState::initial(game),
            flags: RenderFlags::default(),
            rng: RngStream::new(0, "game"),
            kind,
            ready: false,
            terminated: false,
        }
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn flags(&self) -> RenderFlags {
        self.flags
    }

    pub fn flags_mut(&mut self) -> &mut RenderFlags {
        &mut self.flags
    }

    /// Replace the typed state, returning the previous one. No validation.
    pub fn swap_state(&mut self, state: GameState) -> GameState {
        std::mem::replace(&mut self.state, state)
    }

    pub(crate) fn check_steppable(&self, action: ActionId) -> Result<(), EnvError> {
        if !self.ready {
            return Err(EnvError::NotReset);
        }
        if self.terminated {
            return Err(EnvError::EpisodeOver);
        }
        let action_count = self.state.game().action_count();
        if action.index() >= action_count {
            return Err(EnvError::InvalidAction { action: action.0, action_count });
        }
        Ok(())
    }

    /// Run the game's own transition, leaving termination to
    /// [`GameEnv::settle`] so wrappers can edit the state first.
    pub(crate) fn advance(&mut self, action: ActionId) -> (GameState, i64) {
        games::transition(&self.state, action, &mut self.rng)
    }

    /// Commit a post-step state and recompute termination from it.
    pub(crate) fn settle(&mut self, state: GameState) -> bool {
        self.terminated = state.is_terminal();
        self.state = state;
        self.terminated
    }

    pub(crate) fn observe_state(&self) -> Observation {
        match self.kind {
            ObservationKind::Pixels => Observation::Pixels(self.render()),
            ObservationKind::State => Observation::State(self.read_state()),
        }
    }
}

impl Environment for GameEnv {
    fn game(&self) -> GameId {
        self.state.game()
    }

    fn observation_kind(&self) -> ObservationKind {
        self.kind
    }

    fn reset(&mut self, seed: u64) -> Observation {
        self.state = GameState::initial(self.game());
        self.flags = RenderFlags::default();
        self.rng = RngStream::new(seed, "game");
        self.ready = true;
        self.terminated = false;
        self.observe_state()
    }

    fn step(&mut self, action: ActionId) -> Result<StepResult, EnvError> {
        self.check_steppable(action)?;
        let (next, reward) = self.advance(action);
        let terminated = self.settle(next);
        Ok(StepResult {
            observation: self.observe_state(),
            reward,
            terminated,
            truncated: false,
            events: Events::new(),
        })
    }

    fn render(&self) -> Frame {
        self.state.render(self.flags)
    }

    fn read_state(&self) -> AnnotatedState {
        self.state.to_annotated()
    }

    fn write_state(&mut self, state: &AnnotatedState) -> Result<(), EnvError> {
        let next = GameState::from_annotated(self.game(), state)?;
        self.terminated = self.ready && next.is_terminal();
        self.state = next;
        Ok(())
    }

    fn is_terminated(&self) -> bool {
        self.terminated
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rollout(env: &mut GameEnv, seed: u64, actions: impl Fn(usize) -> u8, n: usize) -> Vec<(i64, Frame)> {
        env.reset(seed);
        let mut out = Vec::new();
        for t in 0..n {
            if env.is_terminated() {
                break;
            }
            let r = env.step(ActionId(actions(t))).unwrap();
            out.push((r.reward, r.observation.frame().unwrap().clone()));
        }
        out
    }

    #[test]
    fn reset_twice_is_bit_identical() {
        let mut env = GameEnv::new(GameId::Brickout, ObservationKind::Pixels);
        let a = env.reset(7);
        env.step(ActionId(1)).unwrap();
        let b = env.reset(7);
        assert_eq!(a, b);
    }

    #[test]
    fn stepping_before_reset_or_after_end_fails() {
        let mut env = GameEnv::new(GameId::Brickout, ObservationKind::Pixels);
        assert_eq!(env.step(ActionId(0)), Err(EnvError::NotReset));
        env.reset(1);
        let mut s = env.read_state();
        s.set("lives", 0);
        env.write_state(&s).unwrap();
        let err = env.step(ActionId(0)).unwrap_err();
        assert_eq!(err, EnvError::EpisodeOver);
        assert_eq!(err.to_string(), "episode over");
    }

    #[test]
    fn out_of_range_action_rejected() {
        let mut env = GameEnv::new(GameId::Brickout, ObservationKind::Pixels);
        env.reset(1);
        assert!(matches!(env.step(ActionId(4)), Err(EnvError::InvalidAction { action: 4, action_count: 4 })));
        let mut env = GameEnv::new(GameId::Pugilist, ObservationKind::Pixels);
        env.reset(1);
        assert!(env.step(ActionId(17)).is_ok());
        assert!(env.step(ActionId(18)).is_err());
    }

    #[test]
    fn render_is_pure() {
        let mut env = GameEnv::new(GameId::Pugilist, ObservationKind::Pixels);
        env.reset(3);
        for _ in 0..20 {
            env.step(ActionId(3)).unwrap();
        }
        assert_eq!(env.render(), env.render());
    }

    #[test]
    fn interleaved_renders_do_not_change_trajectory() {
        let policy = |t: usize| [1u8, 2, 2, 3, 0, 1, 3][t % 7];
        let mut plain = GameEnv::new(GameId::Brickout, ObservationKind::Pixels);
        let a = rollout(&mut plain, 11, policy, 2000);

        let mut probed = GameEnv::new(GameId::Brickout, ObservationKind::Pixels);
        probed.reset(11);
        let mut b = Vec::new();
        for t in 0..2000 {
            if probed.is_terminated() {
                break;
            }
            let _ = probed.render();
            let _ = probed.read_state();
            let r = probed.step(ActionId(policy(t))).unwrap();
            b.push((r.reward, r.observation.frame().unwrap().clone()));
        }
        assert_eq!(a, b);
    }

    #[test]
    fn state_round_trip_preserves_future() {
        let policy = |t: usize| [1u8, 2, 3, 2, 0][t % 5];
        let mut a = GameEnv::new(GameId::Brickout, ObservationKind::Pixels);
        let mut b = GameEnv::new(GameId::Brickout, ObservationKind::Pixels);
        a.reset(5);
        b.reset(5);
        for t in 0..300 {
            a.step(ActionId(policy(t))).unwrap();
            b.step(ActionId(policy(t))).unwrap();
        }
        let snap = b.read_state();
        b.write_state(&snap).unwrap();
        for t in 300..1500 {
            if a.is_terminated() {
                assert!(b.is_terminated());
                break;
            }
            let ra = a.step(ActionId(policy(t))).unwrap();
            let rb = b.step(ActionId(policy(t))).unwrap();
            assert_eq!(ra, rb);
        }
    }

    #[test]
    fn read_state_is_a_copy() {
        let mut env = GameEnv::new(GameId::Brickout, ObservationKind::Pixels);
        env.reset(2);
        let mut snap = env.read_state();
        snap.set("paddle_x", 8);
        assert_eq!(env.read_state().get("paddle_x"), Some(72));
    }

    #[test]
    fn write_state_validates() {
        let mut env = GameEnv::new(GameId::Brickout, ObservationKind::Pixels);
        env.reset(2);
        let mut s = env.read_state();
        s.set("lives", 255);
        assert!(matches!(env.write_state(&s), Err(EnvError::State(StateError::OutOfRange { label: "lives", .. }))));
        let pug = GameEnv::new(GameId::Pugilist, ObservationKind::Pixels).read_state();
        assert!(matches!(env.write_state(&pug), Err(EnvError::State(StateError::SchemaMismatch { .. }))));
    }

    #[test]
    fn state_observation_kind() {
        let mut env = GameEnv::new(GameId::Brickout, ObservationKind::State);
        let obs = env.reset(0);
        assert_eq!(obs.state().unwrap().get("lives"), Some(5));
    }

    #[test]
    #[should_panic(expected = "unregistered event")]
    fn unregistered_event_panics() {
        Events::new().record("type9.bogus");
    }
}
