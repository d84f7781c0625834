//! Type 2: random game events layered on top of the base transition.

use crate::env::Events;
use crate::games::brickout::{BrickoutState, BLOCK_COLS, BLOCK_ROWS, ROW_VALUES};
use crate::games::pugilist::{self, PugilistState, MAX_X, MAX_Y, MIN_X, MIN_Y};
use crate::games::{GameId, GameState, RenderFlags};
use crate::rng::RngStream;
use crate::wrappers::gate;

pub const MODE_OFF: u8 = 0;

pub const BRICKOUT_CANCEL: u8 = 1;
pub const BRICKOUT_REVERT: u8 = 2;
pub const BRICKOUT_REGENERATE: u8 = 3;

pub const PUGILIST_COLORFLIP: u8 = 1;
pub const PUGILIST_HIT_CANCEL: u8 = 2;
pub const PUGILIST_DISPLACE: u8 = 3;

/// Result of post-processing one Brickout step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrickoutOutcome {
    pub state: BrickoutState,
    pub reward: i64,
    /// How many destroyed blocks the gate selected.
    pub triggered: u32,
    /// How many blocks were destroyed by the base transition.
    pub opportunities: u32,
    /// State to render instead of `state` (the hit is shown, then undone).
    pub shown: Option<BrickoutState>,
    /// Block bits to put back before the next step.
    pub regenerate: [u32; BLOCK_ROWS],
}

/// Apply a Brickout type 2 mode to the transition `pre -> post`.
///
/// Every block destroyed by the step is an independent opportunity with one
/// Bernoulli draw. Mode 0 draws nothing.
pub fn apply_type2_brickout(
    pre: &BrickoutState,
    post: BrickoutState,
    reward: i64,
    mode: u8,
    p: f64,
    rng: &mut RngStream,
) -> BrickoutOutcome {
    let mut out = BrickoutOutcome {
        shown: None,
        reward,
        triggered: 0,
        opportunities: 0,
        regenerate: [0; BLOCK_ROWS],
        state: post,
    };
    if mode == MODE_OFF {
        return out;
    }
    let before_restore = out.state.clone();
    #[allow(clippy::needless_range_loop)]
    for row in 0..BLOCK_ROWS {
        let destroyed = pre.blocks[row] & !before_restore.blocks[row];
        for col in (0..BLOCK_COLS).filter(|c| destroyed & (1 << c) != 0) {
            out.opportunities += 1;
            if !gate(p, rng) {
                continue;
            }
            out.triggered += 1;
            match mode {
                BRICKOUT_CANCEL | BRICKOUT_REVERT => {
                    let value = ROW_VALUES[row];
                    out.state.set_block(row, col, true);
                    out.state.score = out.state.score.saturating_sub(value as u16);
                    out.reward -= value;
                }
                BRICKOUT_REGENERATE => out.regenerate[row] |= 1 << col,
                _ => unreachable!("mode validated at construction"),
            }
        }
    }
    if mode == BRICKOUT_REVERT && out.triggered > 0 {
        out.shown = Some(before_restore);
    }
    out
}

/// A uniformly random pair of non-overlapping boxer positions.
fn displaced_positions(rng: &mut RngStream, corners: bool) -> (pugilist::Pos, pugilist::Pos) {
    if corners {
        const CORNERS: [pugilist::Pos; 4] = [(MIN_X, MIN_Y), (MAX_X, MIN_Y), (MIN_X, MAX_Y), (MAX_X, MAX_Y)];
        let a = rng.below(4) as usize;
        let b = (a + 1 + rng.below(3) as usize) % 4;
        return (CORNERS[a], CORNERS[b]);
    }
    let uniform = |rng: &mut RngStream| {
        (MIN_X + rng.below((MAX_X - MIN_X + 1) as u64) as i32, MIN_Y + rng.below((MAX_Y - MIN_Y + 1) as u64) as i32)
    };
    let player = uniform(rng);
    loop {
        let enemy = uniform(rng);
        if !pugilist::overlaps(player, enemy) {
            return (player, enemy);
        }
    }
}

/// Result of post-processing one Pugilist step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PugilistOutcome {
    pub state: PugilistState,
    pub reward: i64,
    pub triggered: bool,
    /// Whether this step offered the gate a chance to fire.
    pub opportunity: bool,
}

/// Apply a Pugilist type 2 mode. Colorflip and displacement draw once per
/// step; hit cancel draws only on steps where a score changed.
#[allow(clippy::too_many_arguments)]
pub fn apply_type2_pugilist(
    pre: &PugilistState,
    post: PugilistState,
    reward: i64,
    mode: u8,
    p: f64,
    rng: &mut RngStream,
    corners: bool,
    flags: &mut RenderFlags,
) -> PugilistOutcome {
    let mut out = PugilistOutcome { state: post, reward, triggered: false, opportunity: false };
    match mode {
        MODE_OFF => {}
        PUGILIST_COLORFLIP => {
            out.opportunity = true;
            if gate(p, rng) {
                out.triggered = true;
                flags.colorflip = !flags.colorflip;
            }
        }
        PUGILIST_HIT_CANCEL => {
            let scored = out.state.player_score != pre.player_score || out.state.enemy_score != pre.enemy_score;
            if scored {
                out.opportunity = true;
                if gate(p, rng) {
                    out.triggered = true;
                    out.state.player_score = pre.player_score;
                    out.state.enemy_score = pre.enemy_score;
                    out.reward = 0;
                }
            }
        }
        PUGILIST_DISPLACE => {
            out.opportunity = true;
            if gate(p, rng) {
                out.triggered = true;
                let (player, enemy) = displaced_positions(rng, corners);
                out.state.player_x = player.0 as u8;
                out.state.player_y = player.1 as u8;
                out.state.enemy_x = enemy.0 as u8;
                out.state.enemy_y = enemy.1 as u8;
            }
        }
        _ => unreachable!("mode validated at construction"),
    }
    out
}

/// Per-episode type 2 state: the substream and any pending regeneration.
#[derive(Clone, Debug)]
pub struct DynamicsLayer {
    game: GameId,
    mode: u8,
    probability: f64,
    corners: bool,
    rng: RngStream,
    pending: [u32; BLOCK_ROWS],
    opportunities: u64,
}

impl DynamicsLayer {
    pub fn new(game: GameId, mode: u8, probability: f64, corners: bool) -> Self {
        Self {
            game,
            mode,
            probability,
            corners,
            rng: RngStream::new(0, "type2"),
            pending: [0; BLOCK_ROWS],
            opportunities: 0,
        }
    }

    pub fn reset(&mut self, seed: u64) {
        self.rng = RngStream::new(seed, "type2");
        self.pending = [0; BLOCK_ROWS];
    }

    /// Opportunities seen since construction.
    pub fn opportunities(&self) -> u64 {
        self.opportunities
    }

    /// Put back blocks scheduled for regeneration by the previous step.
    pub fn before_step(&mut self, state: &mut GameState) {
        if let GameState::Brickout(s) = state {
            for (row, bits) in self.pending.iter_mut().enumerate() {
                s.blocks[row] |= *bits;
                *bits = 0;
            }
        }
    }

    /// Post-process a transition. Returns the state to commit, the reward, and
    /// an optional different state to render this step.
    pub fn after_step(
        &mut self,
        pre: &GameState,
        post: GameState,
        reward: i64,
        flags: &mut RenderFlags,
        events: &mut Events,
    ) -> (GameState, i64, Option<GameState>) {
        match (pre, post) {
            (GameState::Brickout(pre), GameState::Brickout(post)) => {
                let out = apply_type2_brickout(pre, post, reward, self.mode, self.probability, &mut self.rng);
                self.opportunities += u64::from(out.opportunities);
                let name = match self.mode {
                    BRICKOUT_CANCEL => "type2.canceled",
                    BRICKOUT_REVERT => "type2.reverted",
                    _ => "type2.regenerated",
                };
                if out.triggered > 0 {
                    events.add(name, u64::from(out.triggered));
                }
                for (row, bits) in out.regenerate.iter().enumerate() {
                    self.pending[row] |= bits;
                }
                (GameState::Brickout(out.state), out.reward, out.shown.map(GameState::Brickout))
            }
            (GameState::Pugilist(pre), GameState::Pugilist(post)) => {
                let out = apply_type2_pugilist(
                    pre,
                    post,
                    reward,
                    self.mode,
                    self.probability,
                    &mut self.rng,
                    self.corners,
                    flags,
                );
                self.opportunities += u64::from(out.opportunity);
                if out.triggered {
                    events.record(match self.mode {
                        PUGILIST_COLORFLIP => "type2.colorflip",
                        PUGILIST_HIT_CANCEL => "type2.hit_canceled",
                        _ => "type2.displaced",
                    });
                }
                (GameState::Pugilist(out.state), out.reward, None)
            }
            (_, post) => {
                debug_assert!(false, "state game mismatch for {:?}", self.game);
                (post, reward, None)
            }
        }
    }
}
