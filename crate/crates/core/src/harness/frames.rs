//! Dumping observation frames as binary PPM files.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::env::{Environment, Observation};
use crate::games::GameId;
use crate::harness::agents::{Agent, AgentId};
use crate::harness::eval::{episode_seed, FrameSkip, RunError};
use crate::harness::report::IoError;
use crate::wrappers::{StochasticEnv, StochasticityConfig};

#[derive(Debug, Error)]
pub enum DumpError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Io(#[from] IoError),
}

pub fn frame_file_name(step: u64) -> String {
    format!("frame_{step:06}.ppm")
}

/// Write the observation of each of `steps` steps to `dir`. When an episode
/// ends, the next one starts with the following episode seed. Labelled-state
/// configs dump the unmasked render instead.
pub fn dump_frames(
    game: GameId,
    config: &StochasticityConfig,
    agent: AgentId,
    steps: u64,
    seed: u64,
    frameskip: u32,
    dir: &Path,
) -> Result<Vec<PathBuf>, DumpError> {
    if frameskip == 0 {
        return Err(RunError::BadFrameskip.into());
    }
    let env = StochasticEnv::new(game, config.clone()).map_err(RunError::from)?;
    fs::create_dir_all(dir).map_err(|e| IoError::new(dir, e))?;
    let mut env = FrameSkip::new(env, frameskip);
    let mut episode = 0;
    let mut ep_seed = episode_seed(seed, episode);
    let mut agent = Agent::new(agent, game, ep_seed).map_err(RunError::from)?;
    env.reset(ep_seed);
    let mut written = Vec::with_capacity(steps as usize);
    for step in 0..steps {
        let action = agent.act(&env.read_state());
        let result = env.step(action).map_err(RunError::from)?;
        let frame = match &result.observation {
            Observation::Pixels(frame) => frame.clone(),
            Observation::State(_) => env.render(),
        };
        let path = dir.join(frame_file_name(step));
        fs::write(&path, frame.to_ppm()).map_err(|e| IoError::new(&path, e))?;
        written.push(path);
        if result.terminated {
            episode += 1;
            ep_seed = episode_seed(seed, episode);
            agent = Agent::new(agent.id(), game, ep_seed).map_err(RunError::from)?;
            env.reset(ep_seed);
        }
    }
    Ok(written)
}
