//! Type 5 pixel masks: crops, the moving torch disc, and region blackouts.

use crate::frame::{Frame, Rect, Rgb, FRAME_HEIGHT, FRAME_WIDTH};
use crate::games::regions::{brickout as br, pugilist as pg};
use crate::games::{brickout, GameId};
use crate::rng::RngStream;

pub const CROP_MODES: u8 = 6;
pub const CROP_TORCH: u8 = 5;
pub const TORCH_RADIUS: i32 = 30;
pub const TORCH_STEP: i32 = 8;

pub const BRICKOUT_BLACKOUT_MODES: u8 = 12;
pub const PUGILIST_BLACKOUT_MODES: u8 = 10;

/// Rectangle zeroed by crop modes 1 through 4.
pub fn crop_rect(mode: u8) -> Option<Rect> {
    let half_w = FRAME_WIDTH / 2;
    let half_h = FRAME_HEIGHT / 2;
    match mode {
        1 => Some(Rect::cols(0, half_w - 1)),
        2 => Some(Rect::cols(half_w, FRAME_WIDTH - 1)),
        3 => Some(Rect::rows(0, half_h - 1)),
        4 => Some(Rect::rows(half_h, FRAME_HEIGHT - 1)),
        _ => None,
    }
}

/// Visible disc of the torch crop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Disc {
    pub row: i32,
    pub col: i32,
    pub radius: i32,
}

impl Disc {
    pub fn contains(&self, row: usize, col: usize) -> bool {
        let dr = row as i32 - self.row;
        let dc = col as i32 - self.col;
        dr * dr + dc * dc <= self.radius * self.radius
    }
}

/// Random-walk centre of the torch disc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torch {
    row: i32,
    col: i32,
}

impl Default for Torch {
    fn default() -> Self {
        Self { row: FRAME_HEIGHT as i32 / 2, col: FRAME_WIDTH as i32 / 2 }
    }
}

fn reflect(v: i32, max: i32) -> i32 {
    if v < 0 {
        -v
    } else if v > max {
        2 * max - v
    } else {
        v
    }
}

impl Torch {
    pub fn at(row: i32, col: i32) -> Self {
        Self { row, col }
    }

    pub fn center(&self) -> (i32, i32) {
        (self.row, self.col)
    }

    pub fn disc(&self) -> Disc {
        Disc { row: self.row, col: self.col, radius: TORCH_RADIUS }
    }

    /// Move each axis by -8, 0 or +8, reflecting off the frame edges.
    pub fn walk(&mut self, rng: &mut RngStream) {
        let mut delta = || (rng.below(3) as i32 - 1) * TORCH_STEP;
        let (dr, dc) = (delta(), delta());
        self.row = reflect(self.row + dr, FRAME_HEIGHT as i32 - 1);
        self.col = reflect(self.col + dc, FRAME_WIDTH as i32 - 1);
    }
}

/// What a blackout mode removes: whole rectangles, plus ball pixels inside
/// some bands.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlackoutSpec {
    pub rects: Vec<Rect>,
    pub ball_bands: Vec<Rect>,
}

pub fn blackout_spec(game: GameId, mode: u8) -> Option<BlackoutSpec> {
    let (rects, ball_bands) = match game {
        GameId::Brickout => {
            let all_bands = vec![br::BAND_TOP, br::BAND_MIDDLE, br::BAND_BOTTOM];
            match mode {
                0 => (vec![], vec![]),
                1 => (vec![br::BLOCKS, br::PADDLE, br::SCORE], all_bands),
                2 => (vec![br::BLOCKS], vec![]),
                3 => (vec![br::PADDLE], vec![]),
                4 => (vec![br::SCORE], vec![]),
                5 => (vec![], vec![br::BAND_TOP]),
                6 => (vec![], vec![br::BAND_MIDDLE]),
                7 => (vec![], vec![br::BAND_BOTTOM]),
                8 => (vec![br::BLOCKS, br::PADDLE], vec![]),
                9 => (vec![br::BLOCKS, br::SCORE], vec![]),
                10 => (vec![], vec![br::BAND_TOP, br::BAND_BOTTOM]),
                11 => (vec![], all_bands),
                _ => return None,
            }
        }
        GameId::Pugilist => {
            let rects = match mode {
                0 => vec![],
                1 => vec![pg::RING, pg::ENEMY_SCORE, pg::PLAYER_SCORE, pg::CLOCK],
                2 => vec![pg::RING_LEFT],
                3 => vec![pg::RING_RIGHT],
                4 => vec![pg::RING],
                5 => vec![pg::ENEMY_SCORE],
                6 => vec![pg::PLAYER_SCORE],
                7 => vec![pg::ENEMY_SCORE, pg::PLAYER_SCORE],
                8 => vec![pg::CLOCK],
                9 => vec![pg::ENEMY_SCORE, pg::PLAYER_SCORE, pg::CLOCK],
                _ => return None,
            };
            (rects, vec![])
        }
    };
    Some(BlackoutSpec { rects, ball_bands })
}

const BALL: Rgb = brickout::BALL_COLOR;

impl BlackoutSpec {
    pub fn apply(&self, frame: &mut Frame) {
        for rect in &self.rects {
            frame.fill_rect(*rect, [0, 0, 0]);
        }
        for band in &self.ball_bands {
            for row in band.top..=band.bottom {
                for col in band.left..=band.right {
                    if frame.pixel(row, col) == BALL {
                        frame.set_pixel(row, col, [0, 0, 0]);
                    }
                }
            }
        }
    }
}

/// A resolved pixel mask, ready to apply to frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaskSpec {
    Crop(Rect),
    Circular(Disc),
    Blackout(BlackoutSpec),
}

impl MaskSpec {
    pub fn apply(&self, frame: &mut Frame) {
        match self {
            MaskSpec::Crop(rect) => frame.fill_rect(*rect, [0, 0, 0]),
            MaskSpec::Circular(disc) => {
                for row in 0..FRAME_HEIGHT {
                    for col in 0..FRAME_WIDTH {
                        if !disc.contains(row, col) {
                            frame.set_pixel(row, col, [0, 0, 0]);
                        }
                    }
                }
            }
            MaskSpec::Blackout(spec) => spec.apply(frame),
        }
    }
}

/// Crop `frame` in place. Mode 0 is the identity; mode 5 keeps the torch disc.
pub fn apply_crop(frame: &mut Frame, mode: u8, torch: &Torch) {
    if mode == CROP_TORCH {
        MaskSpec::Circular(torch.disc()).apply(frame);
    } else if let Some(rect) = crop_rect(mode) {
        MaskSpec::Crop(rect).apply(frame);
    }
}

/// Black out the regions named by `mode`. Unknown modes leave the frame as is;
/// the registry rejects them before an environment exists.
pub fn apply_blackout(frame: &mut Frame, game: GameId, mode: u8) {
    if let Some(spec) = blackout_spec(game, mode) {
        spec.apply(frame);
    }
}
