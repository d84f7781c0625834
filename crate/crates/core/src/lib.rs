//! Two small arcade games, Brickout and Pugilist, with wrappers that add six
//! kinds of stochasticity and partial observability on top of them, and an
//! evaluation harness that runs seeded baseline agents.
//!
//! ```
//! use stoch_arcade::{make_stochastic_env, ActionId, Environment, GameId, StochasticityConfig};
//!
//! let mut env = make_stochastic_env(GameId::Brickout, StochasticityConfig::random_action(0.3), 7).unwrap();
//! let step = env.step(ActionId::FIRE).unwrap();
//! assert!(step.observation.frame().is_some());
//! ```

pub mod env;
pub mod frame;
pub mod games;
pub mod harness;
pub mod rng;
pub mod wrappers;

pub use env::{
    ActionId, AnnotatedState, EnvError, Environment, Events, GameEnv, Observation, ObservationKind, StateError,
    StateField, StepResult,
};
pub use frame::{Frame, Rect, FRAME_HEIGHT, FRAME_WIDTH};
pub use games::{GameId, GameState, RegionMap, RenderFlags};
pub use rng::{rng_substream, RngStream};
pub use wrappers::{make_stochastic_env, ConfigError, StochasticEnv, StochasticityConfig, WrapperRegistry};
