//! Pugilist: a top-down two-boxer round on an 18-action pad.
//!
//! Coordinates are sprite centres. Boxers are 12×20 px and cannot overlap;
//! the player moves 2 px per tick, the built-in opponent 1 px every fourth
//! tick. A punch lands when the target is within 12 px of the puncher's
//! sprite edge horizontally and within 8 px vertically; a landed punch
//! scores one point and knocks the target 24 px away. The round lasts
//! 7200 ticks (two minutes at 60 Hz) or until a boxer reaches 100.

use serde::{Deserialize, Serialize};

use crate::env::{ActionId, AnnotatedState, StateError, StateField};
use crate::frame::{draw_text, Frame, Rect, Rgb};
use crate::games::regions::pugilist as region;

pub const ACTION_COUNT: usize = 18;
pub const ACTION_NAMES: [&str; ACTION_COUNT] = [
    "NOOP",
    "FIRE",
    "UP",
    "RIGHT",
    "LEFT",
    "DOWN",
    "UPRIGHT",
    "UPLEFT",
    "DOWNRIGHT",
    "DOWNLEFT",
    "UPFIRE",
    "RIGHTFIRE",
    "LEFTFIRE",
    "DOWNFIRE",
    "UPRIGHTFIRE",
    "UPLEFTFIRE",
    "DOWNRIGHTFIRE",
    "DOWNLEFTFIRE",
];

/// `(dx, dy)` of directions 2..=9; actions 10..=17 repeat them with FIRE.
const DIRECTIONS: [(i32, i32); 8] = [(0, -1), (1, 0), (-1, 0), (0, 1), (1, -1), (-1, -1), (1, 1), (-1, 1)];

pub const SPRITE_WIDTH: i32 = 12;
pub const SPRITE_HEIGHT: i32 = 20;
pub const ROPE_WIDTH: i32 = 2;
pub const MIN_X: i32 = region::RING.left as i32 + ROPE_WIDTH + SPRITE_WIDTH / 2;
pub const MAX_X: i32 = region::RING.right as i32 - ROPE_WIDTH - SPRITE_WIDTH / 2;
pub const MIN_Y: i32 = region::RING.top as i32 + ROPE_WIDTH + SPRITE_HEIGHT / 2;
pub const MAX_Y: i32 = region::RING.bottom as i32 - ROPE_WIDTH - SPRITE_HEIGHT / 2;
pub const CENTER_X: i32 = (MIN_X + MAX_X) / 2;

pub const PLAYER_SPEED: i32 = 2;
pub const ENEMY_SPEED: i32 = 1;
/// The opponent only moves on ticks where `clock_frames % ENEMY_CADENCE == 0`.
pub const ENEMY_CADENCE: u16 = 4;
pub const PUNCH_RANGE: i32 = 12;
pub const FRONT_TOLERANCE: i32 = 8;
pub const KNOCKBACK: i32 = 24;
pub const COOLDOWN: u8 = 15;
pub const KO_SCORE: u8 = 100;
pub const ROUND_FRAMES: u16 = 7200;
pub const FRAMES_PER_SECOND: u16 = 60;

pub const DISPLAY_RING: u8 = 1;
pub const DISPLAY_PLAYER: u8 = 2;
pub const DISPLAY_ENEMY: u8 = 4;
pub const DISPLAY_ALL: u8 = DISPLAY_RING | DISPLAY_PLAYER | DISPLAY_ENEMY;

pub const BACKGROUND: Rgb = [110, 156, 66];
pub const ROPE_COLOR: Rgb = [188, 144, 252];
pub const LIGHT: Rgb = [214, 214, 214];
pub const DARK: Rgb = [0, 0, 0];
pub const CLOCK_COLOR: Rgb = [236, 236, 236];

pub const PLAYER_START: (u8, u8) = (50, 107);
pub const ENEMY_START: (u8, u8) = (110, 107);

pub const SCHEMA: &[StateField] = &[
    StateField { label: "player_x", min: MIN_X as i64, max: MAX_X as i64, meaning: "player sprite centre column" },
    StateField { label: "player_y", min: MIN_Y as i64, max: MAX_Y as i64, meaning: "player sprite centre row" },
    StateField { label: "enemy_x", min: MIN_X as i64, max: MAX_X as i64, meaning: "opponent sprite centre column" },
    StateField { label: "enemy_y", min: MIN_Y as i64, max: MAX_Y as i64, meaning: "opponent sprite centre row" },
    StateField { label: "player_score", min: 0, max: 100, meaning: "punches landed by the player" },
    StateField { label: "enemy_score", min: 0, max: 100, meaning: "punches landed by the opponent" },
    StateField { label: "clock_frames", min: 0, max: 7200, meaning: "ticks left in the round" },
    StateField { label: "player_cooldown", min: 0, max: 15, meaning: "ticks until the player may punch" },
    StateField { label: "enemy_cooldown", min: 0, max: 15, meaning: "ticks until the opponent may punch" },
    StateField { label: "display", min: 0, max: 7, meaning: "draw bits: 1 ring, 2 player, 4 opponent" },
];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PugilistState {
    pub player_x: u8,
    pub player_y: u8,
    pub enemy_x: u8,
    pub enemy_y: u8,
    pub player_score: u8,
    pub enemy_score: u8,
    pub clock_frames: u16,
    pub player_cooldown: u8,
    pub enemy_cooldown: u8,
    pub display: u8,
}

impl Default for PugilistState {
    fn default() -> Self {
        Self {
            player_x: PLAYER_START.0,
            player_y: PLAYER_START.1,
            enemy_x: ENEMY_START.0,
            enemy_y: ENEMY_START.1,
            player_score: 0,
            enemy_score: 0,
            clock_frames: ROUND_FRAMES,
            player_cooldown: 0,
            enemy_cooldown: 0,
            display: DISPLAY_ALL,
        }
    }
}

/// Decoded joystick input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Input {
    pub dx: i32,
    pub dy: i32,
    pub fire: bool,
}

pub fn decode(action: ActionId) -> Input {
    match action.0 {
        0 => Input { dx: 0, dy: 0, fire: false },
        1 => Input { dx: 0, dy: 0, fire: true },
        a @ 2..=17 => {
            let (dx, dy) = DIRECTIONS[usize::from((a - 2) % 8)];
            Input { dx, dy, fire: a >= 10 }
        }
        _ => Input { dx: 0, dy: 0, fire: false },
    }
}

/// Inverse of [`decode`]; `dx`/`dy` are reduced to their signs.
pub fn encode(dx: i32, dy: i32, fire: bool) -> ActionId {
    let dir = (dx.signum(), dy.signum());
    if dir == (0, 0) {
        return ActionId(u8::from(fire));
    }
    let i = DIRECTIONS.iter().position(|d| *d == dir).expect("unit direction") as u8;
    ActionId(2 + i + if fire { 8 } else { 0 })
}

/// Sprite centre `(x, y)`.
pub type Pos = (i32, i32);

/// Whether sprites centred at `a` and `b` intersect.
pub fn overlaps(a: Pos, b: Pos) -> bool {
    (a.0 - b.0).abs() < SPRITE_WIDTH && (a.1 - b.1).abs() < SPRITE_HEIGHT
}

/// Whether a boxer at `attacker` can land a punch on one at `target`.
pub fn in_punch_range(attacker: Pos, target: Pos) -> bool {
    (attacker.0 - target.0).abs() - SPRITE_WIDTH <= PUNCH_RANGE && (attacker.1 - target.1).abs() <= FRONT_TOLERANCE
}

fn clamp_pos(p: Pos) -> Pos {
    (p.0.clamp(MIN_X, MAX_X), p.1.clamp(MIN_Y, MAX_Y))
}

/// Move by `speed` along `(dx, dy)`, sliding along one axis if the full
/// move would run into `other`.
fn step_towards(from: Pos, dx: i32, dy: i32, speed: i32, other: Pos) -> Pos {
    if dx == 0 && dy == 0 {
        return from;
    }
    let already_overlapping = overlaps(from, other);
    let candidates = [
        clamp_pos((from.0 + dx * speed, from.1 + dy * speed)),
        clamp_pos((from.0 + dx * speed, from.1)),
        clamp_pos((from.0, from.1 + dy * speed)),
    ];
    candidates.into_iter().find(|c| already_overlapping || !overlaps(*c, other)).unwrap_or(from)
}

/// Push `victim` `KNOCKBACK` px away from `attacker`; whatever the ropes
/// absorb pushes the attacker back instead.
fn knock_back(victim: &mut Pos, attacker: &mut Pos) {
    let dir = match (victim.0 - attacker.0).signum() {
        0 if victim.0 >= CENTER_X => -1,
        0 => 1,
        d => d,
    };
    let target = (victim.0 + dir * KNOCKBACK).clamp(MIN_X, MAX_X);
    let moved = (target - victim.0).abs();
    victim.0 = target;
    attacker.0 = (attacker.0 - dir * (KNOCKBACK - moved)).clamp(MIN_X, MAX_X);
}

impl PugilistState {
    pub fn player(&self) -> Pos {
        (i32::from(self.player_x), i32::from(self.player_y))
    }

    pub fn enemy(&self) -> Pos {
        (i32::from(self.enemy_x), i32::from(self.enemy_y))
    }

    fn set_player(&mut self, p: Pos) {
        self.player_x = p.0 as u8;
        self.player_y = p.1 as u8;
    }

    fn set_enemy(&mut self, p: Pos) {
        self.enemy_x = p.0 as u8;
        self.enemy_y = p.1 as u8;
    }

    pub fn is_terminal(&self) -> bool {
        self.clock_frames == 0 || self.player_score >= KO_SCORE || self.enemy_score >= KO_SCORE
    }

    /// Clock text as `m:ss`, counting whole seconds up.
    pub fn clock_text(&self) -> String {
        let secs = self.clock_frames.div_ceil(FRAMES_PER_SECOND);
        format!("{}:{:02}", secs / 60, secs % 60)
    }

    pub fn to_annotated(&self) -> AnnotatedState {
        AnnotatedState::from_entries(vec![
            ("player_x".to_owned(), i64::from(self.player_x)),
            ("player_y".to_owned(), i64::from(self.player_y)),
            ("enemy_x".to_owned(), i64::from(self.enemy_x)),
            ("enemy_y".to_owned(), i64::from(self.enemy_y)),
            ("player_score".to_owned(), i64::from(self.player_score)),
            ("enemy_score".to_owned(), i64::from(self.enemy_score)),
            ("clock_frames".to_owned(), i64::from(self.clock_frames)),
            ("player_cooldown".to_owned(), i64::from(self.player_cooldown)),
            ("enemy_cooldown".to_owned(), i64::from(self.enemy_cooldown)),
            ("display".to_owned(), i64::from(self.display)),
        ])
    }

    pub fn from_annotated(state: &AnnotatedState) -> Result<Self, StateError> {
        state.validate(SCHEMA)?;
        let v: Vec<i64> = state.values().collect();
        Ok(Self {
            player_x: v[0] as u8,
            player_y: v[1] as u8,
            enemy_x: v[2] as u8,
            enemy_y: v[3] as u8,
            player_score: v[4] as u8,
            enemy_score: v[5] as u8,
            clock_frames: v[6] as u16,
            player_cooldown: v[7] as u8,
            enemy_cooldown: v[8] as u8,
            display: v[9] as u8,
        })
    }
}

/// The built-in opponent: close in on the player, punch when able.
pub fn enemy_policy(state: &PugilistState) -> ActionId {
    let (player, enemy) = (state.player(), state.enemy());
    let fire = state.enemy_cooldown == 0 && in_punch_range(enemy, player);
    encode(player.0 - enemy.0, player.1 - enemy.1, fire)
}

/// One tick of Pugilist. `action` must already be validated.
pub fn transition(state: &PugilistState, action: ActionId) -> (PugilistState, i64, bool) {
    let enemy_input = decode(enemy_policy(state));
    let input = decode(action);
    let mut s = state.clone();
    s.player_cooldown = s.player_cooldown.saturating_sub(1);
    s.enemy_cooldown = s.enemy_cooldown.saturating_sub(1);

    let mut player = step_towards(s.player(), input.dx, input.dy, PLAYER_SPEED, s.enemy());
    let mut enemy = s.enemy();
    if state.clock_frames.is_multiple_of(ENEMY_CADENCE) {
        enemy = step_towards(enemy, enemy_input.dx, enemy_input.dy, ENEMY_SPEED, player);
    }

    let throw = |fire: bool, cooldown: &mut u8, from: Pos, to: Pos| {
        let thrown = fire && *cooldown == 0;
        if thrown {
            *cooldown = COOLDOWN;
        }
        thrown && in_punch_range(from, to)
    };
    let player_lands = throw(input.fire, &mut s.player_cooldown, player, enemy);
    let enemy_lands = throw(enemy_input.fire, &mut s.enemy_cooldown, enemy, player);

    let mut reward = 0;
    if player_lands {
        s.player_score = (s.player_score + 1).min(KO_SCORE);
        reward += 1;
        knock_back(&mut enemy, &mut player);
    }
    if enemy_lands {
        s.enemy_score = (s.enemy_score + 1).min(KO_SCORE);
        reward -= 1;
        knock_back(&mut player, &mut enemy);
    }
    s.set_player(player);
    s.set_enemy(enemy);
    s.clock_frames = s.clock_frames.saturating_sub(1);

    let terminated = s.is_terminal();
    (s, reward, terminated)
}

/// Bounding box of a boxer sprite centred at `(x, y)`.
pub fn sprite_rect(x: u8, y: u8) -> Rect {
    let (x, y) = (i32::from(x), i32::from(y));
    Rect::new(
        (y - SPRITE_HEIGHT / 2) as usize,
        (y + SPRITE_HEIGHT / 2 - 1) as usize,
        (x - SPRITE_WIDTH / 2) as usize,
        (x + SPRITE_WIDTH / 2 - 1) as usize,
    )
}

/// `(player colour, enemy colour)` under the given colorflip flag.
pub fn boxer_colors(colorflip: bool) -> (Rgb, Rgb) {
    if colorflip {
        (DARK, LIGHT)
    } else {
        (LIGHT, DARK)
    }
}

pub fn render(state: &PugilistState, colorflip: bool) -> Frame {
    let mut frame = Frame::filled(BACKGROUND);
    let (player_color, enemy_color) = boxer_colors(colorflip);

    if state.display & DISPLAY_RING != 0 {
        let r = region::RING;
        let w = ROPE_WIDTH as usize;
        frame.fill_rect(Rect::new(r.top, r.top + w - 1, r.left, r.right), ROPE_COLOR);
        frame.fill_rect(Rect::new(r.bottom + 1 - w, r.bottom, r.left, r.right), ROPE_COLOR);
        frame.fill_rect(Rect::new(r.top, r.bottom, r.left, r.left + w - 1), ROPE_COLOR);
        frame.fill_rect(Rect::new(r.top, r.bottom, r.right + 1 - w, r.right), ROPE_COLOR);
    }
    if state.display & DISPLAY_PLAYER != 0 {
        frame.fill_rect(sprite_rect(state.player_x, state.player_y), player_color);
    }
    if state.display & DISPLAY_ENEMY != 0 {
        frame.fill_rect(sprite_rect(state.enemy_x, state.enemy_y), enemy_color);
    }

    draw_text(&mut frame, &format!("{:>3}", state.player_score), 5, 16, player_color);
    draw_text(&mut frame, &state.clock_text(), 5, 60, CLOCK_COLOR);
    draw_text(&mut frame, &format!("{:>3}", state.enemy_score), 5, 114, enemy_color);
    frame
}
