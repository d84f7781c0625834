//! Stochasticity wrappers over a bare [`GameEnv`] and the factory that
//! assembles them from a [`StochasticityConfig`].
//!
//! Per step the stack runs, outermost first: the drift selector picks the
//! active concept, the action layer may override the action, the base game
//! advances, the dynamics layer edits the outcome, then the observation layer
//! masks the rendered frame.

pub mod action;
pub mod config;
pub mod drift;
pub mod dynamics;
pub mod mask;
pub mod ram;
pub mod registry;

use crate::env::{
    ActionId, AnnotatedState, EnvError, Environment, Events, GameEnv, Observation, ObservationKind, StepResult,
};
use crate::frame::Frame;
use crate::games::GameId;
use crate::rng::RngStream;

pub use action::{apply_type1, ActionLayer, ActionNoise};
pub use config::{ConfigError, DriftConfig, DriftMode, PartialKind, StochasticityConfig};
pub use drift::drift_active_concept;
pub use dynamics::{apply_type2_brickout, apply_type2_pugilist, DynamicsLayer};
pub use mask::{apply_blackout, apply_crop, BlackoutSpec, Disc, MaskSpec, Torch};
pub use ram::apply_ram_mod;
pub use registry::{ModeInfo, RegistryEntry, WrapperRegistry};

use config::{
    TYPE_ACTION_DEPENDENT, TYPE_ACTION_INDEPENDENT, TYPE_CONCEPT_DRIFT, TYPE_DETERMINISTIC, TYPE_MISSING_STATE,
};

/// Per-frame Bernoulli trigger. Always consumes exactly one draw.
pub fn gate(p: f64, rng: &mut RngStream) -> bool {
    rng.bernoulli(p)
}

#[derive(Clone, Debug)]
enum ObservationOp {
    Crop(u8),
    Blackout(BlackoutSpec),
    Ram(u8),
}

/// Type 5 layer: gates each step's frame and masks it when triggered.
#[derive(Clone, Debug)]
pub struct ObservationLayer {
    op: ObservationOp,
    probability: f64,
    gate_rng: RngStream,
    torch_rng: RngStream,
    torch: Torch,
    frames: u64,
}

impl ObservationLayer {
    fn new(game: GameId, kind: PartialKind, mode: u8, probability: f64) -> Self {
        let op = match kind {
            PartialKind::Crop => ObservationOp::Crop(mode),
            PartialKind::Blackout => {
                ObservationOp::Blackout(mask::blackout_spec(game, mode).expect("mode validated at construction"))
            }
            PartialKind::Ram => ObservationOp::Ram(mode),
        };
        Self {
            op,
            probability,
            gate_rng: RngStream::new(0, "type5"),
            torch_rng: RngStream::new(0, "type5.torch"),
            torch: Torch::default(),
            frames: 0,
        }
    }

    fn reset(&mut self, seed: u64) {
        self.gate_rng = RngStream::new(seed, "type5");
        self.torch_rng = RngStream::new(seed, "type5.torch");
        self.torch = Torch::default();
    }

    fn observe(&mut self, base: &mut GameEnv, frame: Frame, events: &mut Events) -> Frame {
        if let ObservationOp::Crop(mask::CROP_TORCH) = self.op {
            self.torch.walk(&mut self.torch_rng);
        }
        self.frames += 1;
        if !gate(self.probability, &mut self.gate_rng) {
            return frame;
        }
        events.record("type5.masked");
        let mut frame = frame;
        match &self.op {
            ObservationOp::Crop(mode) => apply_crop(&mut frame, *mode, &self.torch),
            ObservationOp::Blackout(spec) => spec.apply(&mut frame),
            ObservationOp::Ram(mode) => frame = apply_ram_mod(base, *mode),
        }
        frame
    }
}

/// The layers a single (non-drift) config contributes. Mode 0 of types 2
/// and 5 builds no layer at all, so it makes no draws.
#[derive(Clone, Debug, Default)]
struct Layers {
    action: Option<ActionLayer>,
    dynamics: Option<DynamicsLayer>,
    observation: Option<ObservationLayer>,
}

impl Layers {
    fn build(game: GameId, config: &StochasticityConfig) -> Self {
        let mut layers = Layers::default();
        match config.type_id {
            TYPE_ACTION_DEPENDENT => {
                layers.action =
                    Some(ActionLayer::new(config.probability, ActionNoise::from_mode(config.mode), game.action_count()))
            }
            TYPE_ACTION_INDEPENDENT if config.mode != 0 => {
                layers.dynamics = Some(DynamicsLayer::new(game, config.mode, config.probability, config.corners))
            }
            TYPE_MISSING_STATE if config.mode != 0 => {
                let kind = config.partial.expect("type 5 validated with a kind");
                layers.observation = Some(ObservationLayer::new(game, kind, config.mode, config.probability))
            }
            _ => {}
        }
        layers
    }

    fn reset(&mut self, seed: u64) {
        if let Some(l) = &mut self.action {
            l.reset(seed);
        }
        if let Some(l) = &mut self.dynamics {
            l.reset(seed);
        }
        if let Some(l) = &mut self.observation {
            l.reset(seed);
        }
    }
}

/// Gate opportunities seen by each layer since the environment was built.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Trials {
    pub type1: u64,
    pub type2: u64,
    pub type5: u64,
}

/// A base game with a configured wrapper stack.
#[derive(Clone, Debug)]
pub struct StochasticEnv {
    base: GameEnv,
    config: StochasticityConfig,
    layers: Layers,
    drift: Option<DriftConfig>,
    step_index: u64,
    type1_trials: u64,
}

impl StochasticEnv {
    /// Validate `config` and assemble the stack, without resetting.
    pub fn new(game: GameId, config: StochasticityConfig) -> Result<Self, ConfigError> {
        WrapperRegistry::standard().validate(game, &config)?;
        let kind = if config.type_id == TYPE_DETERMINISTIC { ObservationKind::State } else { ObservationKind::Pixels };
        let (layers, drift) = match &config.drift {
            Some(d) if config.type_id == TYPE_CONCEPT_DRIFT => (Layers::build(game, &d.concept2), Some(d.clone())),
            _ => (Layers::build(game, &config), None),
        };
        Ok(Self { base: GameEnv::new(game, kind), config, layers, drift, step_index: 0, type1_trials: 0 })
    }

    pub fn base(&self) -> &GameEnv {
        &self.base
    }

    pub fn config(&self) -> &StochasticityConfig {
        &self.config
    }

    /// Steps taken since the last reset.
    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    /// Concept governing the next step: 1 (plain pixels) or 2. A config
    /// without drift is its own concept and always reports 2.
    pub fn active_concept(&self) -> u8 {
        match &self.drift {
            Some(d) => drift_active_concept(self.step_index, d),
            None => drift::CONCEPT_DRIFTED,
        }
    }

    pub fn torch_center(&self) -> Option<(i32, i32)> {
        self.layers.observation.as_ref().and_then(|l| match l.op {
            ObservationOp::Crop(mask::CROP_TORCH) => Some(l.torch.center()),
            _ => None,
        })
    }

    pub fn trials(&self) -> Trials {
        Trials {
            type1: self.type1_trials,
            type2: self.layers.dynamics.as_ref().map_or(0, DynamicsLayer::opportunities),
            type5: self.layers.observation.as_ref().map_or(0, |l| l.frames),
        }
    }

    fn layers_active(&self) -> bool {
        self.active_concept() == drift::CONCEPT_DRIFTED
    }
}

/// Build, validate, and reset a wrapped environment.
pub fn make_stochastic_env(game: GameId, config: StochasticityConfig, seed: u64) -> Result<StochasticEnv, ConfigError> {
    let mut env = StochasticEnv::new(game, config)?;
    env.reset(seed);
    Ok(env)
}

impl Environment for StochasticEnv {
    fn game(&self) -> GameId {
        self.base.game()
    }

    fn observation_kind(&self) -> ObservationKind {
        self.base.observation_kind()
    }

    /// The reset observation is never masked; layers act on step observations.
    fn reset(&mut self, seed: u64) -> Observation {
        self.layers.reset(seed);
        self.step_index = 0;
        self.base.reset(seed)
    }

    fn step(&mut self, action: ActionId) -> Result<StepResult, EnvError> {
        self.base.check_steppable(action)?;
        let active = self.layers_active();
        let mut events = Events::new();

        if let Some(dynamics) = &mut self.layers.dynamics {
            let mut state = self.base.state().clone();
            dynamics.before_step(&mut state);
            self.base.swap_state(state);
        }

        let executed = match &mut self.layers.action {
            Some(layer) if active => {
                self.type1_trials += 1;
                layer.apply(action, &mut events)
            }
            Some(layer) => {
                layer.note(action);
                action
            }
            None => action,
        };

        let pre = self.base.state().clone();
        let (post, reward) = self.base.advance(executed);
        let (post, reward, shown) = match &mut self.layers.dynamics {
            Some(dynamics) if active => {
                let mut flags = self.base.flags();
                let out = dynamics.after_step(&pre, post, reward, &mut flags, &mut events);
                *self.base.flags_mut() = flags;
                out
            }
            _ => (post, reward, None),
        };
        let terminated = self.base.settle(post);

        let observation = match self.base.observation_kind() {
            ObservationKind::State => self.base.observe_state(),
            ObservationKind::Pixels => {
                let frame = match shown {
                    Some(shown) => {
                        let actual = self.base.swap_state(shown);
                        let frame = self.base.render();
                        self.base.swap_state(actual);
                        frame
                    }
                    None => self.base.render(),
                };
                match &mut self.layers.observation {
                    Some(layer) if active => Observation::Pixels(layer.observe(&mut self.base, frame, &mut events)),
                    _ => Observation::Pixels(frame),
                }
            }
        };
        self.step_index += 1;

        Ok(StepResult { observation, reward, terminated, truncated: false, events })
    }

    fn render(&self) -> Frame {
        self.base.render()
    }

    fn read_state(&self) -> AnnotatedState {
        self.base.read_state()
    }

    fn write_state(&mut self, state: &AnnotatedState) -> Result<(), EnvError> {
        self.base.write_state(state)
    }

    fn is_terminated(&self) -> bool {
        self.base.is_terminated()
    }
}
