//! Brickout: a six-row brick-breaking game with a 4-action paddle.
//!
//! Playfield columns 8..=151, ball ceiling at row 17, paddle on rows
//! 189..=191. Bricks are 8×6 px cells in an 18×6 grid whose rows are worth
//! `[7, 7, 4, 4, 1, 1]` from top to bottom. The only intrinsic randomness is
//! the horizontal serve speed, drawn from the `game` substream on FIRE.
//!
//! As in the Atari original, the paddle shrinks to half width once the ball
//! reaches the ceiling, and grows back on the next serve.

use serde::{Deserialize, Serialize};

use crate::env::{ActionId, AnnotatedState, StateError, StateField};
use crate::frame::{draw_text, Frame, Rect, Rgb};
use crate::rng::RngStream;

pub const ACTION_COUNT: usize = 4;
pub const NOOP: ActionId = ActionId(0);
pub const FIRE: ActionId = ActionId(1);
pub const RIGHT: ActionId = ActionId(2);
pub const LEFT: ActionId = ActionId(3);
pub const ACTION_NAMES: [&str; ACTION_COUNT] = ["NOOP", "FIRE", "RIGHT", "LEFT"];

pub const BLOCK_ROWS: usize = 6;
pub const BLOCK_COLS: usize = 18;
pub const FULL_ROW: u32 = (1 << BLOCK_COLS) - 1;
pub const ROW_VALUES: [i64; BLOCK_ROWS] = [7, 7, 4, 4, 1, 1];
pub const MAX_WALL_SCORE: i64 = 432;

pub const BLOCK_TOP: i32 = 57;
pub const BLOCK_HEIGHT: i32 = 6;
pub const BLOCK_LEFT: i32 = 8;
pub const BLOCK_WIDTH: i32 = 8;

pub const PADDLE_SPEED: i32 = 4;
pub const PADDLE_WIDTH: i32 = 16;
pub const PADDLE_HEIGHT: i32 = 3;
pub const PADDLE_MIN_X: i32 = 8;
pub const PADDLE_MAX_X: i32 = 136;
pub const PADDLE_SMALL_WIDTH: i32 = 8;
/// Rightmost column the paddle may cover.
pub const PLAYFIELD_RIGHT: i32 = 151;
pub const PADDLE_TOP: i32 = 189;
pub const PADDLE_START_X: i32 = 72;

pub const BALL_WIDTH: i32 = 2;
pub const BALL_HEIGHT: i32 = 4;
pub const BALL_MIN_X: i32 = 8;
pub const BALL_MAX_X: i32 = 150;
pub const BALL_MIN_Y: i32 = 17;
/// A ball whose top row passes this line is lost.
pub const BALL_LOST_Y: i32 = 200;
pub const SERVE_X: i32 = 79;
pub const SERVE_Y: i32 = 95;

pub const START_LIVES: u8 = 5;
pub const MAX_SCORE: u16 = 9999;

pub const BALL_COLOR: Rgb = [200, 72, 72];
pub const PADDLE_COLOR: Rgb = [200, 72, 72];
pub const TEXT_COLOR: Rgb = [142, 142, 142];
pub const ROW_COLORS: [Rgb; BLOCK_ROWS] =
    [[200, 72, 72], [198, 108, 58], [180, 122, 48], [162, 162, 42], [72, 160, 72], [66, 72, 200]];

pub const SCHEMA: &[StateField] = &[
    StateField { label: "ball_x", min: 0, max: 159, meaning: "ball left column; 0 with ball_y 0 means hidden" },
    StateField { label: "ball_y", min: 0, max: 209, meaning: "ball top row; 0 with ball_x 0 means hidden" },
    StateField { label: "ball_vx", min: -2, max: 2, meaning: "horizontal velocity, one of -2,-1,1,2" },
    StateField { label: "ball_vy", min: -2, max: 2, meaning: "vertical velocity, one of -2,-1,1,2 (positive is down)" },
    StateField { label: "ball_in_play", min: 0, max: 1, meaning: "1 once served, 0 after a life is lost" },
    StateField { label: "paddle_x", min: 8, max: 144, meaning: "paddle left column; at most 152 - paddle_width" },
    StateField { label: "paddle_width", min: 8, max: 16, meaning: "16, or 8 after the ball has reached the ceiling" },
    StateField { label: "lives", min: 0, max: 5, meaning: "remaining lives" },
    StateField { label: "score", min: 0, max: 9999, meaning: "points scored this episode" },
    StateField {
        label: "blocks_row0",
        min: 0,
        max: FULL_ROW as i64,
        meaning: "top brick row, bit c = column c present",
    },
    StateField { label: "blocks_row1", min: 0, max: FULL_ROW as i64, meaning: "brick row 1" },
    StateField { label: "blocks_row2", min: 0, max: FULL_ROW as i64, meaning: "brick row 2" },
    StateField { label: "blocks_row3", min: 0, max: FULL_ROW as i64, meaning: "brick row 3" },
    StateField { label: "blocks_row4", min: 0, max: FULL_ROW as i64, meaning: "brick row 4" },
    StateField { label: "blocks_row5", min: 0, max: FULL_ROW as i64, meaning: "bottom brick row" },
];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BrickoutState {
    pub ball_x: u8,
    pub ball_y: u8,
    pub ball_vx: i8,
    pub ball_vy: i8,
    pub ball_in_play: bool,
    pub paddle_x: u8,
    pub paddle_width: u8,
    pub lives: u8,
    pub score: u16,
    pub blocks: [u32; BLOCK_ROWS],
}

impl Default for BrickoutState {
    fn default() -> Self {
        Self {
            ball_x: 0,
            ball_y: 0,
            ball_vx: 1,
            ball_vy: 1,
            ball_in_play: false,
            paddle_x: PADDLE_START_X as u8,
            paddle_width: PADDLE_WIDTH as u8,
            lives: START_LIVES,
            score: 0,
            blocks: [FULL_ROW; BLOCK_ROWS],
        }
    }
}

impl BrickoutState {
    pub fn block(&self, row: usize, col: usize) -> bool {
        self.blocks[row] & (1 << col) != 0
    }

    pub fn set_block(&mut self, row: usize, col: usize, present: bool) {
        if present {
            self.blocks[row] |= 1 << col;
        } else {
            self.blocks[row] &= !(1 << col);
        }
    }

    pub fn block_count(&self) -> u32 {
        self.blocks.iter().map(|r| r.count_ones()).sum()
    }

    /// Sum of row values over bricks still standing.
    pub fn remaining_value(&self) -> i64 {
        self.blocks.iter().zip(ROW_VALUES).map(|(r, v)| i64::from(r.count_ones()) * v).sum()
    }

    pub fn ball_hidden(&self) -> bool {
        self.ball_x == 0 && self.ball_y == 0
    }

    pub fn is_terminal(&self) -> bool {
        self.lives == 0 || self.block_count() == 0
    }

    pub fn to_annotated(&self) -> AnnotatedState {
        let mut entries = vec![
            ("ball_x".to_owned(), i64::from(self.ball_x)),
            ("ball_y".to_owned(), i64::from(self.ball_y)),
            ("ball_vx".to_owned(), i64::from(self.ball_vx)),
            ("ball_vy".to_owned(), i64::from(self.ball_vy)),
            ("ball_in_play".to_owned(), i64::from(self.ball_in_play)),
            ("paddle_x".to_owned(), i64::from(self.paddle_x)),
            ("paddle_width".to_owned(), i64::from(self.paddle_width)),
            ("lives".to_owned(), i64::from(self.lives)),
            ("score".to_owned(), i64::from(self.score)),
        ];
        for (i, row) in self.blocks.iter().enumerate() {
            entries.push((format!("blocks_row{i}"), i64::from(*row)));
        }
        AnnotatedState::from_entries(entries)
    }

    pub fn from_annotated(state: &AnnotatedState) -> Result<Self, StateError> {
        state.validate(SCHEMA)?;
        let v: Vec<i64> = state.values().collect();
        for (label, value) in [("ball_vx", v[2]), ("ball_vy", v[3])] {
            if value == 0 {
                return Err(StateError::Invalid { label, value, reason: "velocity components are never zero" });
            }
        }
        if v[6] != i64::from(PADDLE_WIDTH) && v[6] != i64::from(PADDLE_SMALL_WIDTH) {
            return Err(StateError::Invalid {
                label: "paddle_width",
                value: v[6],
                reason: "the paddle is 8 or 16 px wide",
            });
        }
        if v[5] > i64::from(paddle_max_x(v[6] as i32)) {
            return Err(StateError::Invalid {
                label: "paddle_x",
                value: v[5],
                reason: "paddle would extend past the right wall",
            });
        }
        let mut blocks = [0u32; BLOCK_ROWS];
        for (i, b) in blocks.iter_mut().enumerate() {
            *b = v[9 + i] as u32;
        }
        Ok(Self {
            ball_x: v[0] as u8,
            ball_y: v[1] as u8,
            ball_vx: v[2] as i8,
            ball_vy: v[3] as i8,
            ball_in_play: v[4] == 1,
            paddle_x: v[5] as u8,
            paddle_width: v[6] as u8,
            lives: v[7] as u8,
            score: v[8] as u16,
            blocks,
        })
    }
}

/// Row/column of the first standing brick overlapped by a ball at `(x, y)`,
/// scanning from the side the ball is coming from.
fn brick_under_ball(state: &BrickoutState, x: i32, y: i32, vy: i32) -> Option<(usize, usize)> {
    let wall_bottom = BLOCK_TOP + BLOCK_HEIGHT * BLOCK_ROWS as i32 - 1;
    let ball_bottom = y + BALL_HEIGHT - 1;
    if ball_bottom < BLOCK_TOP || y > wall_bottom {
        return None;
    }
    let r0 = ((y.max(BLOCK_TOP) - BLOCK_TOP) / BLOCK_HEIGHT) as usize;
    let r1 = ((ball_bottom.min(wall_bottom) - BLOCK_TOP) / BLOCK_HEIGHT) as usize;
    let c0 = ((x - BLOCK_LEFT) / BLOCK_WIDTH) as usize;
    let c1 = ((x + BALL_WIDTH - 1 - BLOCK_LEFT) / BLOCK_WIDTH) as usize;
    let rows: Vec<usize> = if vy < 0 { (r0..=r1).rev().collect() } else { (r0..=r1).collect() };
    rows.into_iter().flat_map(|r| (c0..=c1.min(BLOCK_COLS - 1)).map(move |c| (r, c))).find(|&(r, c)| state.block(r, c))
}

/// Largest `paddle_x` for a paddle `width` px wide.
pub fn paddle_max_x(width: i32) -> i32 {
    PLAYFIELD_RIGHT + 1 - width
}

/// Horizontal speed after a paddle bounce, by where the ball met the paddle.
fn paddle_english(offset: i32, incoming_vx: i32) -> i32 {
    match offset {
        i32::MIN..=3 => -2,
        4..=7 => -1,
        8 => incoming_vx.signum(),
        9..=12 => 1,
        _ => 2,
    }
}

/// One tick of Brickout. `action` must already be validated.
pub fn transition(state: &BrickoutState, action: ActionId, rng: &mut RngStream) -> (BrickoutState, i64, bool) {
    let mut s = state.clone();
    let mut reward = 0;

    let paddle = i32::from(s.paddle_x);
    let width = i32::from(s.paddle_width);
    s.paddle_x = match action {
        RIGHT => (paddle + PADDLE_SPEED).min(paddle_max_x(width)),
        LEFT => (paddle - PADDLE_SPEED).max(PADDLE_MIN_X),
        _ => paddle,
    } as u8;

    if !s.ball_in_play {
        if action == FIRE {
            const SERVE_VX: [i8; 4] = [-2, -1, 1, 2];
            s.ball_in_play = true;
            s.ball_x = SERVE_X as u8;
            s.ball_y = SERVE_Y as u8;
            s.ball_vx = SERVE_VX[rng.below(4) as usize];
            s.ball_vy = 1;
            s.paddle_width = PADDLE_WIDTH as u8;
            s.paddle_x = s.paddle_x.min(PADDLE_MAX_X as u8);
        }
        let terminated = s.is_terminal();
        return (s, reward, terminated);
    }

    let (mut vx, mut vy) = (i32::from(s.ball_vx), i32::from(s.ball_vy));
    let prev_y = i32::from(s.ball_y);
    let mut x = i32::from(s.ball_x) + vx;
    let mut y = prev_y + vy;

    if x < BALL_MIN_X {
        x = 2 * BALL_MIN_X - x;
        vx = -vx;
    } else if x > BALL_MAX_X {
        x = 2 * BALL_MAX_X - x;
        vx = -vx;
    }
    if y < BALL_MIN_Y {
        y = 2 * BALL_MIN_Y - y;
        vy = -vy;
        s.paddle_width = PADDLE_SMALL_WIDTH as u8;
    }

    if let Some((row, col)) = brick_under_ball(&s, x, y, vy) {
        s.set_block(row, col, false);
        reward += ROW_VALUES[row];
        s.score = (i64::from(s.score) + ROW_VALUES[row]).min(i64::from(MAX_SCORE)) as u16;
        vy = -vy;
        // The two top rows speed the ball up vertically.
        if row <= 1 {
            vy = 2 * vy.signum();
        }
    }

    let paddle_x = i32::from(s.paddle_x);
    let crossed_paddle = vy > 0 && prev_y + BALL_HEIGHT <= PADDLE_TOP && y + BALL_HEIGHT > PADDLE_TOP;
    let width = i32::from(s.paddle_width);
    let over_paddle = x + BALL_WIDTH > paddle_x && x < paddle_x + width;
    if crossed_paddle && over_paddle {
        y = PADDLE_TOP - BALL_HEIGHT;
        vy = -vy.abs();
        vx = paddle_english((x + 1 - paddle_x) * PADDLE_WIDTH / width, vx);
    }

    if y > BALL_LOST_Y {
        s.lives -= 1;
        s.ball_in_play = false;
        s.ball_x = 0;
        s.ball_y = 0;
    } else {
        s.ball_x = x as u8;
        s.ball_y = y as u8;
    }
    s.ball_vx = vx as i8;
    s.ball_vy = vy as i8;

    let terminated = s.is_terminal();
    (s, reward, terminated)
}

pub fn block_rect(row: usize, col: usize) -> Rect {
    let top = (BLOCK_TOP + BLOCK_HEIGHT * row as i32) as usize;
    let left = (BLOCK_LEFT + BLOCK_WIDTH * col as i32) as usize;
    Rect::new(top, top + BLOCK_HEIGHT as usize - 1, left, left + BLOCK_WIDTH as usize - 1)
}

pub fn ball_rect(state: &BrickoutState) -> Rect {
    let (x, y) = (usize::from(state.ball_x), usize::from(state.ball_y));
    Rect::new(y, y + BALL_HEIGHT as usize - 1, x, x + BALL_WIDTH as usize - 1)
}

pub fn render(state: &BrickoutState) -> Frame {
    let mut frame = Frame::black();
    draw_text(&mut frame, &format!("{:04}", state.score), 1, 16, TEXT_COLOR);
    draw_text(&mut frame, &state.lives.to_string(), 1, 128, TEXT_COLOR);

    for (row, color) in ROW_COLORS.iter().enumerate() {
        for col in 0..BLOCK_COLS {
            if state.block(row, col) {
                frame.fill_rect(block_rect(row, col), *color);
            }
        }
    }

    let px = usize::from(state.paddle_x);
    let top = PADDLE_TOP as usize;
    frame.fill_rect(
        Rect::new(top, top + PADDLE_HEIGHT as usize - 1, px, px + usize::from(state.paddle_width) - 1),
        PADDLE_COLOR,
    );

    if !state.ball_hidden() {
        frame.fill_rect(ball_rect(state), BALL_COLOR);
    }
    frame
}
