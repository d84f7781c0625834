//! Type 5 RAM modification: render from a doctored copy of the state.

use crate::env::GameEnv;
use crate::frame::Frame;
use crate::games::brickout::BLOCK_COLS;
use crate::games::pugilist::{DISPLAY_ENEMY, DISPLAY_PLAYER, DISPLAY_RING};
use crate::games::{GameId, GameState};

pub const BRICKOUT_RAM_MODES: u8 = 3;
pub const PUGILIST_RAM_MODES: u8 = 4;

/// Bit mask of the brick columns hidden by Brickout RAM mode 1.
pub const HIDDEN_COLUMNS: u32 = {
    let mut bits = 0;
    let mut col = 1;
    while col < BLOCK_COLS {
        bits |= 1 << col;
        col += 2;
    }
    bits
};

/// The state written before rendering for `mode`, or `None` for mode 0.
pub fn sentinel_state(state: &GameState, mode: u8) -> Option<GameState> {
    let mut s = state.clone();
    match (&mut s, mode) {
        (_, 0) => return None,
        (GameState::Brickout(b), 1) => {
            for row in b.blocks.iter_mut() {
                *row &= !HIDDEN_COLUMNS;
            }
        }
        (GameState::Brickout(b), 2) => {
            b.ball_x = 0;
            b.ball_y = 0;
        }
        (GameState::Pugilist(p), 1) => p.display &= !DISPLAY_RING,
        (GameState::Pugilist(p), 2) => p.display &= !DISPLAY_ENEMY,
        (GameState::Pugilist(p), 3) => p.display &= !DISPLAY_PLAYER,
        _ => return None,
    }
    Some(s)
}

pub fn mode_count(game: GameId) -> u8 {
    match game {
        GameId::Brickout => BRICKOUT_RAM_MODES,
        GameId::Pugilist => PUGILIST_RAM_MODES,
    }
}

/// Snapshot, write the sentinel, render, restore. The environment comes back
/// bit-identical.
pub fn apply_ram_mod(env: &mut GameEnv, mode: u8) -> Frame {
    use crate::env::Environment;
    match sentinel_state(env.state(), mode) {
        None => env.render(),
        Some(sentinel) => {
            let saved = env.swap_state(sentinel);
            let frame = env.render();
            env.swap_state(saved);
            frame
        }
    }
}
