//! Print mean returns of the baseline agents on every preset.
//!
//! cargo run --release -p stoch-arcade --example baselines -- [episodes] [seed]

use stoch_arcade::harness::{list_presets, run_episodes, AgentId, RunOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let episodes: u64 = args.next().map_or(100, |s| s.parse().expect("episodes"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));
    let options =
        RunOptions { parallel: std::thread::available_parallelism().map_or(1, |n| n.get()), ..RunOptions::default() };
    println!("{:<18} {:<18} {:>10} {:>10} {:>10} {:>6}", "preset", "agent", "mean", "std", "mean_len", "trunc");
    for preset in list_presets() {
        for agent in [AgentId::Noop, AgentId::Random, AgentId::scripted(preset.game)] {
            let r = run_episodes(preset.game, &preset.config, agent, episodes, seed, &options).expect("run");
            let mean_len = r.episode_lengths.iter().sum::<u64>() as f64 / episodes as f64;
            let trunc = r.truncated.iter().filter(|&&t| t).count();
            println!(
                "{:<18} {:<18} {:>10.2} {:>10.2} {:>10.1} {:>6}",
                preset.name, agent, r.mean_return, r.std_return, mean_len, trunc
            );
        }
    }
}
