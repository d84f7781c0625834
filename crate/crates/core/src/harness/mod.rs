//! Evaluation harness: baseline agents, the episode runner, configuration
//! files, presets, and report and frame output.

pub mod agents;
pub mod config_file;
pub mod eval;
pub mod frames;
pub mod report;

pub use agents::{scripted_brickout_agent, scripted_pugilist_agent, Agent, AgentError, AgentId};
pub use config_file::{list_presets, load_config, preset, ConfigFileError, LoadedConfig, Preset, RunParams};
pub use eval::{
    episode_seed, mean_std, run_episode, run_episode_with, run_episodes, EpisodeResult, EvalReport, FrameSkip,
    RunError, RunOptions, DEFAULT_STEP_CAP,
};
pub use frames::{dump_frames, frame_file_name, DumpError};
pub use report::{read_report_json, report_csv, report_json, write_report, IoError, ReportFormat};
