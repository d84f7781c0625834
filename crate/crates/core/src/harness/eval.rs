//! Episode runner and report aggregation.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{ActionId, AnnotatedState, EnvError, Environment, Events, Observation, ObservationKind, StepResult};
use crate::frame::Frame;
use crate::games::GameId;
use crate::harness::agents::{Agent, AgentError, AgentId};
use crate::rng::rng_substream;
use crate::wrappers::{ConfigError, StochasticEnv, StochasticityConfig};

pub const DEFAULT_STEP_CAP: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error("episode count must be at least 1")]
    NoEpisodes,
    #[error("frameskip must be at least 1")]
    BadFrameskip,
    #[error("failed to start {0} worker threads")]
    ThreadPool(usize),
    #[error(transparent)]
    Env(#[from] EnvError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; 0 or 1 runs serially.
    pub parallel: usize,
    /// Ticks per agent decision. 1 disables frame skipping.
    pub frameskip: u32,
    /// Agent decisions per episode before truncation.
    pub step_cap: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { parallel: 1, frameskip: 1, step_cap: DEFAULT_STEP_CAP }
    }
}

/// Repeat each action `k` times, summing rewards and events. The pixel
/// observation is the channel-wise max of the last two frames.
pub struct FrameSkip<E> {
    inner: E,
    k: u32,
}

impl<E: Environment> FrameSkip<E> {
    pub fn new(inner: E, k: u32) -> Self {
        assert!(k >= 1, "frameskip must be at least 1");
        Self { inner, k }
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn into_inner(self) -> E {
        self.inner
    }
}

impl<E: Environment> Environment for FrameSkip<E> {
    fn game(&self) -> GameId {
        self.inner.game()
    }

    fn observation_kind(&self) -> ObservationKind {
        self.inner.observation_kind()
    }

    fn reset(&mut self, seed: u64) -> Observation {
        self.inner.reset(seed)
    }

    fn step(&mut self, action: ActionId) -> Result<StepResult, EnvError> {
        let mut reward = 0;
        let mut events = Events::new();
        let mut previous: Option<Frame> = None;
        let mut last: Option<StepResult> = None;
        for _ in 0..self.k {
            if let Some(Observation::Pixels(frame)) = last.take().map(|l| l.observation) {
                previous = Some(frame);
            }
            let r = self.inner.step(action)?;
            reward += r.reward;
            events.merge(&r.events);
            let done = r.terminated || r.truncated;
            last = Some(r);
            if done {
                break;
            }
        }
        let mut result = last.expect("k >= 1");
        if let (Some(prev), Observation::Pixels(frame)) = (previous, &result.observation) {
            result.observation = Observation::Pixels(frame.channel_max(&prev));
        }
        result.reward = reward;
        result.events = events;
        Ok(result)
    }

    fn render(&self) -> Frame {
        self.inner.render()
    }

    fn read_state(&self) -> AnnotatedState {
        self.inner.read_state()
    }

    fn write_state(&mut self, state: &AnnotatedState) -> Result<(), EnvError> {
        self.inner.write_state(state)
    }

    fn is_terminated(&self) -> bool {
        self.inner.is_terminated()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpisodeResult {
    pub episode_return: i64,
    pub length: u64,
    pub truncated: bool,
    pub events: BTreeMap<String, u64>,
}

/// Seed of episode `index` within a run seeded with `run_seed`.
pub fn episode_seed(run_seed: u64, index: u64) -> u64 {
    rng_substream(run_seed, &format!("ep/{index}")).next_u64()
}

/// Run one episode, calling `on_step` with every step result.
pub fn run_episode_with(
    game: GameId,
    config: &StochasticityConfig,
    agent: AgentId,
    seed: u64,
    options: &RunOptions,
    mut on_step: impl FnMut(&StepResult),
) -> Result<EpisodeResult, RunError> {
    if options.frameskip == 0 {
        return Err(RunError::BadFrameskip);
    }
    let mut agent = Agent::new(agent, game, seed)?;
    let mut env = FrameSkip::new(StochasticEnv::new(game, config.clone())?, options.frameskip);
    env.reset(seed);
    let mut result = EpisodeResult { episode_return: 0, length: 0, truncated: false, events: BTreeMap::new() };
    loop {
        if result.length >= options.step_cap {
            result.truncated = true;
            break;
        }
        let action = agent.act(&env.read_state());
        let step = env.step(action)?;
        result.length += 1;
        result.episode_return += step.reward;
        for (name, n) in step.events.iter() {
            *result.events.entry(name.to_owned()).or_default() += n;
        }
        on_step(&step);
        if step.terminated {
            break;
        }
    }
    Ok(result)
}

pub fn run_episode(
    game: GameId,
    config: &StochasticityConfig,
    agent: AgentId,
    seed: u64,
    options: &RunOptions,
) -> Result<EpisodeResult, RunError> {
    run_episode_with(game, config, agent, seed, options, |_| {})
}

/// Aggregate results of a multi-episode run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub game: GameId,
    pub config: StochasticityConfig,
    pub agent: AgentId,
    pub seed: u64,
    pub episodes: u64,
    pub frameskip: u32,
    pub returns: Vec<i64>,
    pub episode_lengths: Vec<u64>,
    pub truncated: Vec<bool>,
    pub mean_return: f64,
    pub std_return: f64,
    pub event_totals: BTreeMap<String, u64>,
    pub wall_time_seconds: f64,
}

/// Arithmetic mean and sample standard deviation (n - 1 denominator; 0 for
/// a single value).
pub fn mean_std(values: &[i64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

fn run_all(
    game: GameId,
    config: &StochasticityConfig,
    agent: AgentId,
    seed: u64,
    episodes: u64,
    options: &RunOptions,
) -> Result<Vec<EpisodeResult>, RunError> {
    let one = |i: u64| run_episode(game, config, agent, episode_seed(seed, i), options);
    #[cfg(feature = "parallel")]
    if options.parallel > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.parallel)
            .build()
            .map_err(|_| RunError::ThreadPool(options.parallel))?;
        return pool.install(|| (0..episodes).into_par_iter().map(one).collect());
    }
    (0..episodes).map(one).collect()
}

/// Run `episodes` episodes with seeds derived from `seed` and aggregate them.
/// Output is identical for every `options.parallel` value.
pub fn run_episodes(
    game: GameId,
    config: &StochasticityConfig,
    agent: AgentId,
    episodes: u64,
    seed: u64,
    options: &RunOptions,
) -> Result<EvalReport, RunError> {
    if episodes == 0 {
        return Err(RunError::NoEpisodes);
    }
    crate::wrappers::WrapperRegistry::standard().validate(game, config)?;
    agent.check_game(game)?;
    let start = Instant::now();
    let results = run_all(game, config, agent, seed, episodes, options)?;

    let returns: Vec<i64> = results.iter().map(|r| r.episode_return).collect();
    let (mean_return, std_return) = mean_std(&returns);
    let mut event_totals = BTreeMap::new();
    for r in &results {
        for (name, n) in &r.events {
            *event_totals.entry(name.clone()).or_default() += n;
        }
    }
    Ok(EvalReport {
        game,
        config: config.clone(),
        agent,
        seed,
        episodes,
        frameskip: options.frameskip,
        episode_lengths: results.iter().map(|r| r.length).collect(),
        truncated: results.iter().map(|r| r.truncated).collect(),
        returns,
        mean_return,
        std_return,
        event_totals,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}
