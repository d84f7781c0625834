//! The two reference games and the dispatch layer over them.

pub mod brickout;
pub mod pugilist;
pub mod regions;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::env::{ActionId, AnnotatedState, StateError, StateField};
use crate::frame::Frame;
use crate::rng::RngStream;

pub use brickout::BrickoutState;
pub use pugilist::PugilistState;
pub use regions::RegionMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameId {
    Brickout,
    Pugilist,
}

impl GameId {
    pub const ALL: [GameId; 2] = [GameId::Brickout, GameId::Pugilist];

    pub fn as_str(self) -> &'static str {
        match self {
            GameId::Brickout => "brickout",
            GameId::Pugilist => "pugilist",
        }
    }

    pub fn action_count(self) -> usize {
        match self {
            GameId::Brickout => brickout::ACTION_COUNT,
            GameId::Pugilist => pugilist::ACTION_COUNT,
        }
    }

    pub fn action_names(self) -> &'static [&'static str] {
        match self {
            GameId::Brickout => &brickout::ACTION_NAMES,
            GameId::Pugilist => &pugilist::ACTION_NAMES,
        }
    }

    pub fn schema(self) -> &'static [StateField] {
        match self {
            GameId::Brickout => brickout::SCHEMA,
            GameId::Pugilist => pugilist::SCHEMA,
        }
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown game `{0}` (expected brickout or pugilist)")]
pub struct UnknownGame(pub String);

impl FromStr for GameId {
    type Err = UnknownGame;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brickout" => Ok(GameId::Brickout),
            "pugilist" => Ok(GameId::Pugilist),
            other => Err(UnknownGame(other.to_owned())),
        }
    }
}

/// Render-time flags that persist across steps but are not game state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RenderFlags {
    pub colorflip: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GameState {
    Brickout(BrickoutState),
    Pugilist(PugilistState),
}

impl GameState {
    pub fn initial(game: GameId) -> Self {
        match game {
            GameId::Brickout => GameState::Brickout(BrickoutState::default()),
            GameId::Pugilist => GameState::Pugilist(PugilistState::default()),
        }
    }

    pub fn game(&self) -> GameId {
        match self {
            GameState::Brickout(_) => GameId::Brickout,
            GameState::Pugilist(_) => GameId::Pugilist,
        }
    }

    pub fn is_terminal(&self) -> bool {
        match self {
            GameState::Brickout(s) => s.is_terminal(),
            GameState::Pugilist(s) => s.is_terminal(),
        }
    }

    pub fn render(&self, flags: RenderFlags) -> Frame {
        match self {
            GameState::Brickout(s) => brickout::render(s),
            GameState::Pugilist(s) => pugilist::render(s, flags.colorflip),
        }
    }

    pub fn to_annotated(&self) -> AnnotatedState {
        match self {
            GameState::Brickout(s) => s.to_annotated(),
            GameState::Pugilist(s) => s.to_annotated(),
        }
    }

    pub fn from_annotated(game: GameId, state: &AnnotatedState) -> Result<Self, StateError> {
        Ok(match game {
            GameId::Brickout => GameState::Brickout(BrickoutState::from_annotated(state)?),
            GameId::Pugilist => GameState::Pugilist(PugilistState::from_annotated(state)?),
        })
    }

    pub fn as_brickout(&self) -> Option<&BrickoutState> {
        match self {
            GameState::Brickout(s) => Some(s),
            GameState::Pugilist(_) => None,
        }
    }

    pub fn as_pugilist(&self) -> Option<&PugilistState> {
        match self {
            GameState::Pugilist(s) => Some(s),
            GameState::Brickout(_) => None,
        }
    }
}

/// Apply one tick of the game's own dynamics. Returns the next state and reward.
pub fn transition(state: &GameState, action: ActionId, rng: &mut RngStream) -> (GameState, i64) {
    match state {
        GameState::Brickout(s) => {
            let (next, reward, _) = brickout::transition(s, action, rng);
            (GameState::Brickout(next), reward)
        }
        GameState::Pugilist(s) => {
            let (next, reward, _) = pugilist::transition(s, action);
            (GameState::Pugilist(next), reward)
        }
    }
}
