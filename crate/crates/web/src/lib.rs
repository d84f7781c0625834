//! Browser demo: play a preset on a canvas, preview what its mask hides, and
//! chart when a drifting preset switches concepts.
//!
//! [`Session`] and the free functions hold all the logic and build natively;
//! [`Demo`] is the thin wasm-bindgen face the page talks to.

use stoch_arcade::harness::{episode_seed, list_presets, preset, Agent, AgentId, DEFAULT_STEP_CAP};
use stoch_arcade::wrappers::drift::CONCEPT_DRIFTED;
use stoch_arcade::wrappers::drift_active_concept;
use stoch_arcade::{
    ActionId, Environment, Frame, GameId, StochasticEnv, StochasticityConfig, FRAME_HEIGHT, FRAME_WIDTH,
};
use wasm_bindgen::prelude::*;

/// Tint for pixels the observation hides (masked to black or removed).
pub const HIDDEN_TINT: [u8; 3] = [255, 0, 160];

/// One running game with its agent and episode bookkeeping.
pub struct Session {
    game: GameId,
    env: StochasticEnv,
    agent_id: AgentId,
    agent: Agent,
    seed: u64,
    episode: u64,
    length: u64,
    episode_return: i64,
    last_frame: Frame,
    last_events: Vec<(String, u64)>,
    finished_returns: Vec<i64>,
}

impl Session {
    /// `agent` is any name the CLI accepts; `scripted` picks the game's script.
    pub fn new(preset_name: &str, agent: &str, seed: u64) -> Result<Self, String> {
        let p = preset(preset_name).map_err(|e| e.to_string())?;
        Self::from_config(p.game, p.config, agent, seed)
    }

    pub fn from_config(game: GameId, config: StochasticityConfig, agent: &str, seed: u64) -> Result<Self, String> {
        let agent_id = AgentId::parse(agent, game).map_err(|e| e.to_string())?;
        let env = StochasticEnv::new(game, config).map_err(|e| e.to_string())?;
        let first = episode_seed(seed, 0);
        let mut session = Self {
            game,
            agent: Agent::new(agent_id, game, first).map_err(|e| e.to_string())?,
            env,
            agent_id,
            seed,
            episode: 0,
            length: 0,
            episode_return: 0,
            last_frame: Frame::black(),
            last_events: Vec::new(),
            finished_returns: Vec::new(),
        };
        session.start_episode();
        Ok(session)
    }

    fn start_episode(&mut self) {
        let s = episode_seed(self.seed, self.episode);
        self.agent = Agent::new(self.agent_id, self.game, s).expect("agent already checked against the game");
        let obs = self.env.reset(s);
        self.last_frame = obs.frame().cloned().unwrap_or_else(|| self.env.render());
        self.length = 0;
        self.episode_return = 0;
    }

    /// Advance one step. `None` lets the agent choose; an explicit action
    /// leaves the agent's random stream untouched.
    pub fn step(&mut self, action: Option<u8>) -> i64 {
        let action = match action {
            Some(a) => ActionId(a % self.game.action_count() as u8),
            None => self.agent.act(&self.env.read_state()),
        };
        let step = self.env.step(action).expect("session never steps a terminated episode");
        self.length += 1;
        self.episode_return += step.reward;
        self.last_events = step.events.iter().map(|(k, n)| (k.to_owned(), n)).collect();
        self.last_frame = step.observation.frame().cloned().unwrap_or_else(|| self.env.render());
        if step.terminated || self.length >= DEFAULT_STEP_CAP {
            self.finished_returns.push(self.episode_return);
            self.episode += 1;
            self.start_episode();
        }
        step.reward
    }

    pub fn game(&self) -> GameId {
        self.game
    }

    /// What the agent would see, or the plain screen for state observations.
    pub fn observation(&self) -> &Frame {
        &self.last_frame
    }

    /// The unmasked screen of the current state.
    pub fn screen(&self) -> Frame {
        self.env.render()
    }

    pub fn episode(&self) -> u64 {
        self.episode
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn episode_return(&self) -> i64 {
        self.episode_return
    }

    pub fn finished_returns(&self) -> &[i64] {
        &self.finished_returns
    }

    pub fn last_events(&self) -> &[(String, u64)] {
        &self.last_events
    }

    pub fn active_concept(&self) -> u8 {
        self.env.active_concept()
    }
}

/// RGBA image of `screen` with every pixel that differs in `observed` tinted.
pub fn mask_overlay(screen: &Frame, observed: &Frame) -> Vec<u8> {
    let mut out = screen.to_rgba();
    for (row, col) in screen.differing_pixels(observed) {
        let i = (row * FRAME_WIDTH + col) * 4;
        out[i..i + 3].copy_from_slice(&HIDDEN_TINT);
    }
    out
}

/// Concept (1 or 2) in force at each of the first `steps` step indices.
/// A preset without drift applies its own layers, concept 2, throughout.
pub fn drift_timeline(config: &StochasticityConfig, steps: u64) -> Vec<u8> {
    match &config.drift {
        Some(d) => (0..steps).map(|i| drift_active_concept(i, d)).collect(),
        None => vec![CONCEPT_DRIFTED; steps as usize],
    }
}

/// `name<TAB>game<TAB>summary` lines for the preset picker.
pub fn preset_lines() -> String {
    list_presets().iter().map(|p| format!("{}\t{}\t{}\n", p.name, p.game, p.summary)).collect()
}

#[wasm_bindgen]
pub struct Demo {
    session: Session,
    timeline: Vec<u8>,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(preset_name: &str, agent: &str, seed: u64, timeline_steps: u32) -> Result<Demo, JsError> {
        let config = preset(preset_name).map_err(|e| JsError::new(&e.to_string()))?.config;
        let session = Session::new(preset_name, agent, seed).map_err(|e| JsError::new(&e))?;
        Ok(Demo { session, timeline: drift_timeline(&config, u64::from(timeline_steps)) })
    }

    /// Step with a key-pressed action, or with the agent when `action < 0`.
    pub fn step(&mut self, action: i32) -> i64 {
        let action = u8::try_from(action).ok();
        self.session.step(action)
    }

    pub fn run(&mut self, steps: u32) -> i64 {
        (0..steps).map(|_| self.session.step(None)).sum()
    }

    pub fn frame_rgba(&self) -> Vec<u8> {
        self.session.observation().to_rgba()
    }

    pub fn mask_rgba(&self) -> Vec<u8> {
        mask_overlay(&self.session.screen(), self.session.observation())
    }

    pub fn timeline(&self) -> Vec<u8> {
        self.timeline.clone()
    }

    /// Events of the last step as `name=count` pairs separated by spaces.
    pub fn events(&self) -> String {
        let parts: Vec<String> = self.session.last_events().iter().map(|(k, n)| format!("{k}={n}")).collect();
        parts.join(" ")
    }

    pub fn episode(&self) -> u64 {
        self.session.episode()
    }

    pub fn step_in_episode(&self) -> u64 {
        self.session.length()
    }

    pub fn episode_return(&self) -> i64 {
        self.session.episode_return()
    }

    pub fn active_concept(&self) -> u8 {
        self.session.active_concept()
    }

    pub fn action_count(&self) -> u32 {
        self.session.game().action_count() as u32
    }

    pub fn width() -> u32 {
        FRAME_WIDTH as u32
    }

    pub fn height() -> u32 {
        FRAME_HEIGHT as u32
    }
}

#[wasm_bindgen]
pub fn presets() -> String {
    preset_lines()
}
