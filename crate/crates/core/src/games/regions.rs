//! Published screen-region tables. Masking wrappers and tests address the
//! screen only through these names.

use crate::frame::Rect;
use crate::games::GameId;

pub mod brickout {
    use super::Rect;

    pub const SCORE: Rect = Rect::rows(0, 15);
    pub const BLOCKS: Rect = Rect::new(57, 92, 8, 151);
    pub const PADDLE: Rect = Rect::rows(189, 192);
    pub const BAND_TOP: Rect = Rect::rows(93, 124);
    pub const BAND_MIDDLE: Rect = Rect::rows(125, 156);
    pub const BAND_BOTTOM: Rect = Rect::rows(157, 188);
}

pub mod pugilist {
    use super::Rect;

    pub const RING: Rect = Rect::new(35, 180, 30, 130);
    pub const RING_LEFT: Rect = Rect::new(35, 180, 30, 80);
    pub const RING_RIGHT: Rect = Rect::new(35, 180, 81, 130);
    pub const PLAYER_SCORE: Rect = Rect::new(3, 20, 14, 47);
    pub const CLOCK: Rect = Rect::new(3, 20, 58, 101);
    pub const ENEMY_SCORE: Rect = Rect::new(3, 20, 112, 145);
}

/// Label → rectangle table for one game.
#[derive(Clone, Copy, Debug)]
pub struct RegionMap {
    pub game: GameId,
    pub regions: &'static [(&'static str, Rect)],
}

const BRICKOUT_REGIONS: &[(&str, Rect)] = &[
    ("score", brickout::SCORE),
    ("blocks", brickout::BLOCKS),
    ("paddle", brickout::PADDLE),
    ("band_top", brickout::BAND_TOP),
    ("band_middle", brickout::BAND_MIDDLE),
    ("band_bottom", brickout::BAND_BOTTOM),
];

const PUGILIST_REGIONS: &[(&str, Rect)] = &[
    ("ring", pugilist::RING),
    ("ring_left", pugilist::RING_LEFT),
    ("ring_right", pugilist::RING_RIGHT),
    ("player_score", pugilist::PLAYER_SCORE),
    ("clock", pugilist::CLOCK),
    ("enemy_score", pugilist::ENEMY_SCORE),
];

impl RegionMap {
    pub fn of(game: GameId) -> Self {
        let regions = match game {
            GameId::Brickout => BRICKOUT_REGIONS,
            GameId::Pugilist => PUGILIST_REGIONS,
        };
        Self { game, regions }
    }

    pub fn get(&self, label: &str) -> Option<Rect> {
        self.regions.iter().find(|(l, _)| *l == label).map(|(_, r)| *r)
    }
}
