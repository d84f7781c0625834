use std::collections::BTreeMap;
use std::fs;

use stoch_arcade::harness::{
    dump_frames, episode_seed, frame_file_name, preset, read_report_json, report_csv, run_episode_with, run_episodes,
    write_report, AgentId, ReportFormat, RunOptions,
};
use stoch_arcade::{GameId, StochasticityConfig};

fn quick() -> RunOptions {
    RunOptions { step_cap: 3000, ..RunOptions::default() }
}

#[test]
fn event_totals_match_a_per_step_recount() {
    let cases = [
        ("breakout/type1", AgentId::Random),
        ("breakout/type2", AgentId::ScriptedBrickout),
        ("breakout/type3", AgentId::ScriptedBrickout),
        ("breakout/type5b", AgentId::Random),
        ("boxing/type2", AgentId::Random),
        ("boxing/type5c", AgentId::ScriptedPugilist),
    ];
    for (name, agent) in cases {
        let p = preset(name).unwrap();
        let report = run_episodes(p.game, &p.config, agent, 4, 9, &quick()).unwrap();
        let mut recount: BTreeMap<String, u64> = BTreeMap::new();
        let mut returns = Vec::new();
        for i in 0..4 {
            let mut ret = 0;
            run_episode_with(p.game, &p.config, agent, episode_seed(9, i), &quick(), |step| {
                ret += step.reward;
                for (k, n) in step.events.iter() {
                    *recount.entry(k.to_owned()).or_default() += n;
                }
            })
            .unwrap();
            returns.push(ret);
        }
        assert_eq!(report.event_totals, recount, "{name}");
        assert_eq!(report.returns, returns, "{name}");
        assert!(!recount.is_empty(), "{name} fired no events");
    }
}

#[test]
fn noop_on_plain_brickout_scores_nothing() {
    let r = run_episodes(GameId::Brickout, &StochasticityConfig::pixels(), AgentId::Noop, 5, 7, &quick()).unwrap();
    assert_eq!(r.mean_return, 0.0);
    assert!(r.truncated.iter().all(|&t| t));
}

#[test]
fn certain_cancel_leaves_scripted_brickout_at_zero() {
    let r = run_episodes(
        GameId::Brickout,
        &StochasticityConfig::random_event(1, 1.0),
        AgentId::ScriptedBrickout,
        5,
        7,
        &quick(),
    )
    .unwrap();
    assert_eq!(r.returns, vec![0; 5]);
    assert!(r.event_totals["type2.canceled"] > 0);
}

#[test]
fn baseline_ordering_on_pixels() {
    // scripted > random >= noop, 100 episodes each.
    for game in GameId::ALL {
        let mean = |agent| {
            run_episodes(game, &StochasticityConfig::pixels(), agent, 100, 7, &RunOptions::default())
                .unwrap()
                .mean_return
        };
        let (noop, random, scripted) = (mean(AgentId::Noop), mean(AgentId::Random), mean(AgentId::scripted(game)));
        assert!(scripted > random && random >= noop, "{game}: {scripted} {random} {noop}");
    }
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let p = preset("boxing/type1").unwrap();
    let report = run_episodes(p.game, &p.config, AgentId::Random, 3, 2, &quick()).unwrap();
    let path = dir.path().join("r.json");
    write_report(&report, ReportFormat::Json, &path).unwrap();
    assert_eq!(read_report_json(&path).unwrap(), report);
}

#[test]
fn csv_rows_recompute_the_summary() {
    let p = preset("breakout/type1").unwrap();
    let report = run_episodes(p.game, &p.config, AgentId::ScriptedBrickout, 6, 4, &quick()).unwrap();
    let text = report_csv(&report);
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let rows: Vec<(u64, i64, u64)> = reader.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    let returns: Vec<f64> = rows.iter().map(|r| r.1 as f64).collect();
    let n = returns.len() as f64;
    let mean = returns.iter().sum::<f64>() / n;
    let var = returns.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean - report.mean_return).abs() < 1e-9);
    assert!((var.sqrt() - report.std_return).abs() < 1e-9);
    assert_eq!(rows.iter().map(|r| r.2).collect::<Vec<_>>(), report.episode_lengths);
    let summary = text.lines().find(|l| l.starts_with("# mean_return=")).unwrap();
    assert_eq!(summary, format!("# mean_return={:?} std_return={:?}", report.mean_return, report.std_return));
}

#[test]
fn parallel_report_equals_serial() {
    let p = preset("breakout/type5c").unwrap();
    let serial = run_episodes(p.game, &p.config, AgentId::Random, 6, 3, &quick()).unwrap();
    let parallel =
        run_episodes(p.game, &p.config, AgentId::Random, 6, 3, &RunOptions { parallel: 4, ..quick() }).unwrap();
    assert_eq!(
        (serial.returns, serial.episode_lengths, serial.event_totals),
        (parallel.returns, parallel.episode_lengths, parallel.event_totals)
    );
}

#[test]
fn frame_dumps_are_ppm_and_respect_the_crop() {
    let dir = tempfile::tempdir().unwrap();
    let config = StochasticityConfig::crop(1, 1.0);
    let files = dump_frames(GameId::Brickout, &config, AgentId::Random, 40, 1, 1, dir.path()).unwrap();
    assert_eq!(files.len(), 40);
    assert_eq!(files[7], dir.path().join(frame_file_name(7)));
    let header = b"P6\n160 210\n255\n";
    for f in &files {
        let bytes = fs::read(f).unwrap();
        assert_eq!(&bytes[..header.len()], header);
        let pixels = &bytes[header.len()..];
        assert_eq!(pixels.len(), 210 * 160 * 3);
        for row in pixels.chunks_exact(160 * 3) {
            assert!(row[..80 * 3].iter().all(|&b| b == 0));
        }
    }
    let again = tempfile::tempdir().unwrap();
    dump_frames(GameId::Brickout, &config, AgentId::Random, 40, 1, 1, again.path()).unwrap();
    for i in 0..40 {
        let name = frame_file_name(i);
        assert_eq!(fs::read(dir.path().join(&name)).unwrap(), fs::read(again.path().join(&name)).unwrap());
    }
}

#[test]
fn frame_dumps_continue_across_episodes() {
    let dir = tempfile::tempdir().unwrap();
    let config = StochasticityConfig::pixels();
    let first = run_episodes(GameId::Brickout, &config, AgentId::Random, 1, 3, &RunOptions::default()).unwrap();
    let len = first.episode_lengths[0];
    assert!(!first.truncated[0] && len < 5000);
    let files = dump_frames(GameId::Brickout, &config, AgentId::Random, len + 50, 3, 1, dir.path()).unwrap();
    assert_eq!(files.len() as u64, len + 50);
    // The step after the last one of episode 0 shows a fresh wall.
    let fresh = fs::read(dir.path().join(frame_file_name(len))).unwrap();
    let wall = stoch_arcade::GameState::initial(GameId::Brickout).render(Default::default()).to_ppm();
    let block_rows = 15 + 57 * 160 * 3..15 + 93 * 160 * 3;
    assert_eq!(fresh[block_rows.clone()], wall[block_rows]);
}
