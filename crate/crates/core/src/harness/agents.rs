//! Baseline agents. Scripted agents read the true game state, not the
//! (possibly masked) observation, so they measure what the wrappers do to
//! dynamics rather than to perception.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{ActionId, AnnotatedState};
use crate::games::{brickout, pugilist, GameId};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentId {
    Random,
    Noop,
    ScriptedBrickout,
    ScriptedPugilist,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgentError {
    #[error("unknown agent `{0}` (expected random, noop, scripted, scripted_brickout or scripted_pugilist)")]
    Unknown(String),
    #[error("agent `{agent}` cannot play {game}")]
    WrongGame { agent: AgentId, game: GameId },
}

impl AgentId {
    pub const ALL: [AgentId; 4] =
        [AgentId::Random, AgentId::Noop, AgentId::ScriptedBrickout, AgentId::ScriptedPugilist];

    pub fn as_str(self) -> &'static str {
        match self {
            AgentId::Random => "random",
            AgentId::Noop => "noop",
            AgentId::ScriptedBrickout => "scripted_brickout",
            AgentId::ScriptedPugilist => "scripted_pugilist",
        }
    }

    /// The scripted agent for `game`.
    pub fn scripted(game: GameId) -> Self {
        match game {
            GameId::Brickout => AgentId::ScriptedBrickout,
            GameId::Pugilist => AgentId::ScriptedPugilist,
        }
    }

    /// Parse an agent name for `game`; `scripted` picks that game's script.
    pub fn parse(name: &str, game: GameId) -> Result<Self, AgentError> {
        let id = match name {
            "scripted" => AgentId::scripted(game),
            other => AgentId::ALL
                .into_iter()
                .find(|a| a.as_str() == other)
                .ok_or_else(|| AgentError::Unknown(other.to_owned()))?,
        };
        id.check_game(game)?;
        Ok(id)
    }

    pub fn check_game(self, game: GameId) -> Result<(), AgentError> {
        match (self, game) {
            (AgentId::ScriptedBrickout, GameId::Pugilist) | (AgentId::ScriptedPugilist, GameId::Brickout) => {
                Err(AgentError::WrongGame { agent: self, game })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn field(state: &AnnotatedState, label: &str) -> i64 {
    state.get(label).unwrap_or_else(|| panic!("state has no `{label}` field"))
}

/// Serve when the ball is dead, otherwise keep the paddle centre under the ball.
pub fn scripted_brickout_agent(state: &AnnotatedState) -> ActionId {
    if field(state, "ball_in_play") == 0 {
        return brickout::FIRE;
    }
    let center = field(state, "paddle_x") + field(state, "paddle_width") / 2;
    let ball = field(state, "ball_x");
    match center.cmp(&ball) {
        std::cmp::Ordering::Less => brickout::RIGHT,
        std::cmp::Ordering::Greater => brickout::LEFT,
        std::cmp::Ordering::Equal => brickout::NOOP,
    }
}

/// Close in on the opponent and punch whenever it is in range.
pub fn scripted_pugilist_agent(state: &AnnotatedState) -> ActionId {
    let player = (field(state, "player_x") as i32, field(state, "player_y") as i32);
    let enemy = (field(state, "enemy_x") as i32, field(state, "enemy_y") as i32);
    let fire = pugilist::in_punch_range(player, enemy);
    let (dx, dy) = (enemy.0 - player.0, enemy.1 - player.1);
    // Stand level with the opponent; no need to walk into it once in range.
    let dx = if fire { 0 } else { dx };
    let dy = if dy.abs() <= 1 { 0 } else { dy };
    let action = pugilist::encode(dx, dy, fire);
    if action == ActionId::NOOP {
        ActionId::FIRE
    } else {
        action
    }
}

/// A bound, seeded agent instance.
#[derive(Clone, Debug)]
pub struct Agent {
    id: AgentId,
    action_count: u64,
    rng: RngStream,
}

impl Agent {
    pub fn new(id: AgentId, game: GameId, seed: u64) -> Result<Self, AgentError> {
        id.check_game(game)?;
        Ok(Self { id, action_count: game.action_count() as u64, rng: RngStream::new(seed, "agent") })
    }

    pub fn id(&self) -> AgentId {
        self.id
    }

    pub fn act(&mut self, state: &AnnotatedState) -> ActionId {
        match self.id {
            AgentId::Random => ActionId(self.rng.below(self.action_count) as u8),
            AgentId::Noop => ActionId::NOOP,
            AgentId::ScriptedBrickout => scripted_brickout_agent(state),
            AgentId::ScriptedPugilist => scripted_pugilist_agent(state),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{BrickoutState, PugilistState};

    #[test]
    fn brickout_script_rules() {
        let mut s = BrickoutState::default();
        assert_eq!(scripted_brickout_agent(&s.to_annotated()), brickout::FIRE);
        s.ball_in_play = true;
        s.ball_x = 100;
        s.paddle_x = 52;
        assert_eq!(scripted_brickout_agent(&s.to_annotated()), brickout::RIGHT);
        s.ball_x = 20;
        assert_eq!(scripted_brickout_agent(&s.to_annotated()), brickout::LEFT);
        s.ball_x = 60;
        assert_eq!(scripted_brickout_agent(&s.to_annotated()), brickout::NOOP);
    }

    #[test]
    fn pugilist_script_rules() {
        let s = PugilistState { player_x: 100, player_y: 120, enemy_x: 50, enemy_y: 60, ..PugilistState::default() };
        let a = scripted_pugilist_agent(&s.to_annotated());
        assert_eq!(pugilist::ACTION_NAMES[a.index()], "UPLEFT");

        let s = PugilistState { player_x: 60, player_y: 100, enemy_x: 80, enemy_y: 100, ..PugilistState::default() };
        let a = scripted_pugilist_agent(&s.to_annotated());
        assert!(pugilist::decode(a).fire);
    }

    #[test]
    fn alias_and_game_binding() {
        assert_eq!(AgentId::parse("scripted", GameId::Pugilist), Ok(AgentId::ScriptedPugilist));
        assert!(matches!(AgentId::parse("scripted_brickout", GameId::Pugilist), Err(AgentError::WrongGame { .. })));
        assert!(matches!(AgentId::parse("dqn", GameId::Brickout), Err(AgentError::Unknown(_))));
    }

    #[test]
    fn random_agent_stays_in_action_space() {
        let mut agent = Agent::new(AgentId::Random, GameId::Pugilist, 3).unwrap();
        let s = PugilistState::default().to_annotated();
        assert!((0..10_000).all(|_| agent.act(&s).index() < 18));
    }
}
