//! Type 1: action-dependent noise on the agent's action channel.

use crate::env::{ActionId, Events};
use crate::rng::RngStream;
use crate::wrappers::config::ACTION_STICKY;
use crate::wrappers::gate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionNoise {
    /// Substitute a uniform draw from the action space.
    Replace,
    /// Repeat the previously executed action.
    Sticky,
}

impl ActionNoise {
    pub fn from_mode(mode: u8) -> Self {
        if mode == ACTION_STICKY {
            ActionNoise::Sticky
        } else {
            ActionNoise::Replace
        }
    }
}

/// With probability `p`, override `action`. The flag reports the Bernoulli
/// trigger, even when a uniform replacement happens to equal `action`.
pub fn apply_type1(
    action: ActionId,
    p: f64,
    noise: ActionNoise,
    rng: &mut RngStream,
    prev_action: ActionId,
    action_count: usize,
) -> (ActionId, bool) {
    if !gate(p, rng) {
        return (action, false);
    }
    let chosen = match noise {
        ActionNoise::Replace => ActionId(rng.below(action_count as u64) as u8),
        ActionNoise::Sticky => prev_action,
    };
    (chosen, true)
}

#[derive(Clone, Debug)]
pub struct ActionLayer {
    probability: f64,
    noise: ActionNoise,
    action_count: usize,
    rng: RngStream,
    prev: ActionId,
}

impl ActionLayer {
    pub fn new(probability: f64, noise: ActionNoise, action_count: usize) -> Self {
        Self { probability, noise, action_count, rng: RngStream::new(0, "type1"), prev: ActionId::NOOP }
    }

    pub fn reset(&mut self, seed: u64) {
        self.rng = RngStream::new(seed, "type1");
        self.prev = ActionId::NOOP;
    }

    /// Record an action executed while this layer is inactive, so sticky
    /// mode repeats the right one once it switches on.
    pub fn note(&mut self, action: ActionId) {
        self.prev = action;
    }

    pub fn apply(&mut self, action: ActionId, events: &mut Events) -> ActionId {
        let (executed, replaced) =
            apply_type1(action, self.probability, self.noise, &mut self.rng, self.prev, self.action_count);
        if replaced {
            events.record("type1.replaced");
        }
        self.prev = executed;
        executed
    }
}
