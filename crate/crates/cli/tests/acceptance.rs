//! Acceptance checks. Each criterion prints one PASS or FAIL line; the
//! process exits non-zero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use stoch_arcade::harness::{episode_seed, run_episodes, Agent, AgentId, EvalReport, RunOptions, DEFAULT_STEP_CAP};
use stoch_arcade::{Environment, Frame, GameId, Rect, StepResult, StochasticEnv, StochasticityConfig};

type Check = fn() -> Result<String, String>;

/// An environment plus agent that rolls straight into the next episode when
/// one ends or hits the step cap, so long step counts can span episodes.
struct Roller {
    env: StochasticEnv,
    agent: Agent,
    seed: u64,
    episode: u64,
    length: u64,
}

impl Roller {
    fn new(game: GameId, config: StochasticityConfig, agent: AgentId, seed: u64) -> Self {
        let mut env = StochasticEnv::new(game, config).expect("valid config");
        let ep_seed = episode_seed(seed, 0);
        env.reset(ep_seed);
        Self { env, agent: Agent::new(agent, game, ep_seed).expect("agent fits game"), seed, episode: 0, length: 0 }
    }

    fn step(&mut self) -> StepResult {
        let action = self.agent.act(&self.env.read_state());
        let result = self.env.step(action).expect("legal action");
        self.length += 1;
        if result.terminated || self.length == DEFAULT_STEP_CAP {
            self.length = 0;
            self.episode += 1;
            let ep_seed = episode_seed(self.seed, self.episode);
            self.env.reset(ep_seed);
            self.agent = Agent::new(self.agent.id(), self.env.game(), ep_seed).unwrap();
        }
        result
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("took {:.1}s, budget {}s", t.as_secs_f64(), budget.as_secs()))
}

// ---------------------------------------------------------------- identity

fn zero_probability_configs(game: GameId) -> Vec<StochasticityConfig> {
    use StochasticityConfig as C;
    let (blackouts, rams) = match game {
        GameId::Brickout => (12u8, 3u8),
        GameId::Pugilist => (10, 4),
    };
    let mut out = vec![C::random_action(0.0), C::sticky_action(0.0)];
    out.extend((1..=3).map(|m| C::random_event(m, 0.0)));
    if game == GameId::Pugilist {
        out.push(C::random_event(3, 0.0).with_corners(true));
    }
    out.push(C::sudden_drift(20_000, C::random_action(0.3)));
    out.push(C::sudden_drift(20_000, C::blackout(1, 1.0)));
    out.push(C::cyclic_drift(20_000, C::crop(5, 1.0)));
    out.extend((0..6).map(|m| C::crop(m, 0.0)));
    out.extend((0..blackouts).map(|m| C::blackout(m, 0.0)));
    out.extend((0..rams).map(|m| C::ram(m, 0.0)));
    out
}

fn p0_identity() -> Result<String, String> {
    let start = Instant::now();
    let mut compared = 0;
    for game in GameId::ALL {
        for config in zero_probability_configs(game) {
            let mut plain = Roller::new(game, StochasticityConfig::pixels(), AgentId::Random, 31);
            let mut wrapped = Roller::new(game, config.clone(), AgentId::Random, 31);
            for step in 0..10_000 {
                let (a, b) = (plain.step(), wrapped.step());
                ensure(a == b, || format!("{game} {config:?} diverges at step {step}"))?;
            }
            ensure(plain.env.read_state() == wrapped.env.read_state(), || format!("{game} {config:?} final state"))?;
            compared += 1;
        }
    }
    within_budget(start, Duration::from_secs(60))?;
    Ok(format!("{compared} configs x 10000 steps identical to pixels"))
}

// ------------------------------------------------------------- frequencies

fn type1_frequency() -> Result<f64, String> {
    let mut r = Roller::new(GameId::Brickout, StochasticityConfig::random_action(0.3), AgentId::Random, 11);
    let mut replaced = 0u64;
    for _ in 0..100_000 {
        replaced += r.step().events.get("type1.replaced");
    }
    ensure(r.env.trials().type1 == 100_000, || format!("trial count {}", r.env.trials().type1))?;
    let f = replaced as f64 / 1e5;
    ensure((0.2957..=0.3043).contains(&f), || format!("type1 frequency {f}"))?;
    Ok(f)
}

fn type2_cancel_rate() -> Result<(f64, u64), String> {
    let mut r =
        Roller::new(GameId::Brickout, StochasticityConfig::random_event(1, 0.25), AgentId::ScriptedBrickout, 12);
    let (mut canceled, mut destroyed) = (0u64, 0u64);
    while canceled + destroyed < 10_000 {
        let before = r.env.base().state().as_brickout().unwrap().block_count();
        let result = r.step();
        canceled += result.events.get("type2.canceled");
        // A standing hit scores; a canceled one scores nothing.
        let scored = u64::from(result.reward > 0);
        if r.length != 0 {
            let after = r.env.base().state().as_brickout().unwrap().block_count();
            ensure(u64::from(before - after) == scored, || "brick count and reward disagree".into())?;
        }
        destroyed += scored;
    }
    let collisions = canceled + destroyed;
    let rate = canceled as f64 / collisions as f64;
    ensure((0.237..=0.263).contains(&rate), || format!("cancel rate {rate} over {collisions}"))?;
    Ok((rate, collisions))
}

fn type5_masked_fraction() -> Result<f64, String> {
    let mut r = Roller::new(GameId::Brickout, StochasticityConfig::crop(3, 0.75), AgentId::Random, 13);
    let (mut events, mut differing) = (0u64, 0u64);
    for _ in 0..100_000 {
        let result = r.step();
        events += result.events.get("type5.masked");
        // The top half always holds score digits and bricks, so a masked frame
        // always differs from the plain render.
        let plain = if r.length == 0 { None } else { Some(r.env.render()) };
        if let (Some(plain), Some(frame)) = (plain, result.observation.frame()) {
            differing += u64::from(*frame != plain);
        } else {
            differing += result.events.get("type5.masked");
        }
    }
    ensure(events == differing, || format!("{events} masked events but {differing} masked frames"))?;
    let f = events as f64 / 1e5;
    ensure((0.746..=0.754).contains(&f), || format!("masked fraction {f}"))?;
    Ok(f)
}

fn frequency_calibration() -> Result<String, String> {
    let start = Instant::now();
    let f1 = type1_frequency()?;
    let (f2, n2) = type2_cancel_rate()?;
    let f5 = type5_masked_fraction()?;
    within_budget(start, Duration::from_secs(120))?;
    Ok(format!("type1 {f1:.4}, type2 {f2:.4} over {n2} collisions, type5 {f5:.4}"))
}

// --------------------------------------------------------------- colorflip

fn colorflip_rate() -> Result<String, String> {
    let start = Instant::now();
    let config = StochasticityConfig::random_event(1, 0.001);
    let mut flips = Vec::new();
    for i in 0..100 {
        let seed = episode_seed(21, i);
        let mut env = StochasticEnv::new(GameId::Pugilist, config.clone()).unwrap();
        env.reset(seed);
        let (mut toggles, mut events, mut len) = (0u64, 0u64, 0u64);
        let mut shown = env.base().flags().colorflip;
        loop {
            let result = env.step(stoch_arcade::ActionId::NOOP).unwrap();
            len += 1;
            events += result.events.get("type2.colorflip");
            let now = env.base().flags().colorflip;
            toggles += u64::from(now != shown);
            shown = now;
            if result.terminated {
                break;
            }
        }
        ensure(len == 7200, || format!("episode {i} lasted {len} steps"))?;
        ensure(toggles == events, || format!("episode {i}: {events} events, {toggles} toggles"))?;
        flips.push(events);
    }
    let mean = flips.iter().sum::<u64>() as f64 / flips.len() as f64;
    ensure((5.5..=9.0).contains(&mean), || format!("mean flips {mean}"))?;
    within_budget(start, Duration::from_secs(120))?;
    Ok(format!("mean {mean:.2} flips per 7200-step episode"))
}

// ------------------------------------------------------------------- drift

fn drift_boundary() -> Result<String, String> {
    let start = Instant::now();
    let cases = [
        (GameId::Brickout, StochasticityConfig::blackout(9, 1.0), AgentId::ScriptedBrickout),
        (GameId::Brickout, StochasticityConfig::crop(3, 1.0), AgentId::ScriptedBrickout),
        (GameId::Pugilist, StochasticityConfig::blackout(1, 1.0), AgentId::Random),
        (GameId::Pugilist, StochasticityConfig::ram(2, 1.0), AgentId::ScriptedPugilist),
    ];
    for (game, mask, agent) in cases.iter().cloned() {
        for seed in 0..10 {
            let drift = StochasticityConfig::sudden_drift(300, mask.clone());
            let mut plain = Roller::new(game, StochasticityConfig::pixels(), agent, seed);
            let mut drifted = Roller::new(game, drift, agent, seed);
            let mut first_difference = None;
            for step in 0..400u64 {
                let (a, b) = (plain.step(), drifted.step());
                ensure(!a.terminated, || format!("{game} seed {seed} ended at step {step}"))?;
                ensure(a.reward == b.reward && plain.env.read_state() == drifted.env.read_state(), || {
                    format!("{game} seed {seed}: dynamics diverge at step {step}")
                })?;
                if first_difference.is_none() && a.observation != b.observation {
                    first_difference = Some(step);
                }
            }
            ensure(first_difference == Some(300), || {
                format!("{game} {mask:?} seed {seed}: first differing frame {first_difference:?}")
            })?;
        }
    }
    within_budget(start, Duration::from_secs(60))?;
    Ok(format!("{} masks x 10 seeds switch exactly at step 300", cases.len()))
}

// ----------------------------------------------------------- mask geometry

fn full_rows(top: usize, bottom: usize) -> Rect {
    Rect::new(top, bottom, 0, 159)
}

fn brickout_regions(mode: u8) -> (Vec<Rect>, Vec<Rect>) {
    let score = full_rows(0, 15);
    let blocks = Rect::new(57, 92, 8, 151);
    let paddle = full_rows(189, 192);
    let (top, middle, bottom) = (full_rows(93, 124), full_rows(125, 156), full_rows(157, 188));
    match mode {
        0 => (vec![], vec![]),
        1 => (vec![blocks, paddle, score], vec![top, middle, bottom]),
        2 => (vec![blocks], vec![]),
        3 => (vec![paddle], vec![]),
        4 => (vec![score], vec![]),
        5 => (vec![], vec![top]),
        6 => (vec![], vec![middle]),
        7 => (vec![], vec![bottom]),
        8 => (vec![blocks, paddle], vec![]),
        9 => (vec![blocks, score], vec![]),
        10 => (vec![], vec![top, bottom]),
        11 => (vec![], vec![top, middle, bottom]),
        _ => unreachable!(),
    }
}

fn pugilist_regions(mode: u8) -> Vec<Rect> {
    let ring = Rect::new(35, 180, 30, 130);
    let (left, right) = (Rect::new(35, 180, 30, 80), Rect::new(35, 180, 81, 130));
    let player = Rect::new(3, 20, 14, 47);
    let clock = Rect::new(3, 20, 58, 101);
    let enemy = Rect::new(3, 20, 112, 145);
    match mode {
        0 => vec![],
        1 => vec![ring, enemy, player, clock],
        2 => vec![left],
        3 => vec![right],
        4 => vec![ring],
        5 => vec![enemy],
        6 => vec![player],
        7 => vec![enemy, player],
        8 => vec![clock],
        9 => vec![enemy, player, clock],
        _ => unreachable!(),
    }
}

fn crop_region(mode: u8) -> Rect {
    match mode {
        1 => Rect::new(0, 209, 0, 79),
        2 => Rect::new(0, 209, 80, 159),
        3 => Rect::new(0, 104, 0, 159),
        4 => Rect::new(105, 209, 0, 159),
        _ => unreachable!(),
    }
}

const BALL: [u8; 3] = [200, 72, 72];

/// Pixels a mask over `rects` (plus ball pixels in `bands`) must change:
/// every non-black pixel inside them.
fn expected_changes(frame: &Frame, rects: &[Rect], bands: &[Rect]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for row in 0..210 {
        for col in 0..160 {
            let px = frame.pixel(row, col);
            let lit = px != [0, 0, 0];
            let in_rect = rects.iter().any(|r| r.contains(row, col));
            let ball_in_band = px == BALL && bands.iter().any(|b| b.contains(row, col));
            if lit && (in_rect || ball_in_band) {
                out.insert((row, col));
            }
        }
    }
    out
}

fn mask_cases(game: GameId) -> Vec<(StochasticityConfig, Vec<Rect>, Vec<Rect>)> {
    let mut cases: Vec<_> =
        (1..=4).map(|m| (StochasticityConfig::crop(m, 1.0), vec![crop_region(m)], vec![])).collect();
    match game {
        GameId::Brickout => cases.extend((0..12).map(|m| {
            let (rects, bands) = brickout_regions(m);
            (StochasticityConfig::blackout(m, 1.0), rects, bands)
        })),
        GameId::Pugilist => {
            cases.extend((0..10).map(|m| (StochasticityConfig::blackout(m, 1.0), pugilist_regions(m), vec![])))
        }
    }
    cases
}

fn mask_geometry() -> Result<String, String> {
    let start = Instant::now();
    let mut checked = 0;
    for game in GameId::ALL {
        let agent = AgentId::Random;
        for (config, rects, bands) in mask_cases(game) {
            let mut plain = Roller::new(game, StochasticityConfig::pixels(), agent, 41);
            let mut masked = Roller::new(game, config.clone(), agent, 41);
            let mut frames = 0;
            let mut step = 0u64;
            while frames < 100 {
                let (a, b) = (plain.step(), masked.step());
                step += 1;
                if !step.is_multiple_of(23) {
                    continue;
                }
                let (fa, fb) = (a.observation.frame().unwrap(), b.observation.frame().unwrap());
                let got: BTreeSet<_> = fa.differing_pixels(fb).into_iter().collect();
                let want = expected_changes(fa, &rects, &bands);
                ensure(got == want, || {
                    format!("{game} {config:?} step {step}: {} pixels changed, {} expected", got.len(), want.len())
                })?;
                ensure(got.iter().all(|&(r, c)| fb.pixel(r, c) == [0, 0, 0]), || {
                    format!("{game} {config:?}: not black")
                })?;
                frames += 1;
            }
            checked += 1;
        }
    }
    within_budget(start, Duration::from_secs(60))?;
    Ok(format!("{checked} masks x 100 frames match their regions"))
}

// ------------------------------------------------------------ RAM isolation

fn ram_isolation() -> Result<String, String> {
    let mut total_steps = 0;
    for (p, agent) in [(1.0, AgentId::ScriptedPugilist), (0.7, AgentId::Random)] {
        for seed in 0..10 {
            let mut envs = [
                StochasticEnv::new(GameId::Pugilist, StochasticityConfig::pixels()).unwrap(),
                StochasticEnv::new(GameId::Pugilist, StochasticityConfig::ram(2, p)).unwrap(),
            ];
            let mut agents = [
                Agent::new(agent, GameId::Pugilist, seed).unwrap(),
                Agent::new(agent, GameId::Pugilist, seed).unwrap(),
            ];
            let mut traces: [Vec<i64>; 2] = [vec![], vec![]];
            let mut hidden_frames = 0;
            for (i, env) in envs.iter_mut().enumerate() {
                env.reset(seed);
                loop {
                    let action = agents[i].act(&env.read_state());
                    let r = env.step(action).unwrap();
                    traces[i].push(r.reward);
                    hidden_frames += r.events.get("type5.masked");
                    if r.terminated {
                        break;
                    }
                }
            }
            ensure(hidden_frames > 0, || format!("seed {seed}: the mod never fired"))?;
            ensure(traces[0].len() == traces[1].len(), || {
                format!("seed {seed}: terminated at {} vs {}", traces[0].len(), traces[1].len())
            })?;
            ensure(traces[0] == traces[1], || format!("seed {seed}: reward sequences differ"))?;
            total_steps += traces[0].len();
        }
    }
    Ok(format!("20 paired episodes ({total_steps} steps) unchanged by hiding the enemy"))
}

// --------------------------------------------------------- total cancel

fn total_cancellation() -> Result<String, String> {
    let opts = RunOptions::default();
    let report = run_episodes(
        GameId::Brickout,
        &StochasticityConfig::random_event(1, 1.0),
        AgentId::ScriptedBrickout,
        100,
        7,
        &opts,
    )
    .map_err(|e| e.to_string())?;
    ensure(report.mean_return == 0.0 && report.returns.iter().all(|&r| r == 0), || {
        format!("Brickout mean return {}", report.mean_return)
    })?;

    let config = StochasticityConfig::random_event(2, 1.0);
    let mut hits = 0;
    for i in 0..100 {
        let seed = episode_seed(7, i);
        let mut env = StochasticEnv::new(GameId::Pugilist, config.clone()).unwrap();
        let mut agent = Agent::new(AgentId::ScriptedPugilist, GameId::Pugilist, seed).unwrap();
        env.reset(seed);
        loop {
            let r = env.step(agent.act(&env.read_state())).unwrap();
            hits += r.events.get("type2.hit_canceled");
            let s = env.read_state();
            ensure(s.get("player_score") == Some(0) && s.get("enemy_score") == Some(0) && r.reward == 0, || {
                format!("episode {i}: scores {:?}/{:?}", s.get("player_score"), s.get("enemy_score"))
            })?;
            if r.terminated {
                break;
            }
        }
    }
    Ok(format!("Brickout returns all 0; Pugilist scores stay 0 through {hits} canceled hits"))
}

// ------------------------------------------------------------- direction

fn summary(r: &EvalReport) -> (f64, f64) {
    (r.mean_return, r.std_return / (r.episodes as f64).sqrt())
}

fn directional_degradation() -> Result<String, String> {
    let start = Instant::now();
    let run = |config: StochasticityConfig| {
        run_episodes(GameId::Brickout, &config, AgentId::ScriptedBrickout, 100, 7, &RunOptions::default())
            .map(|r| summary(&r))
            .map_err(|e| e.to_string())
    };
    let (m4, se4) = run(StochasticityConfig::pixels())?;
    let (m1, se1) = run(StochasticityConfig::random_action(0.3))?;
    let (m2, se2) = run(StochasticityConfig::random_event(1, 0.25))?;
    let pooled1 = (se4 * se4 + se1 * se1).sqrt();
    let pooled2 = (se4 * se4 + se2 * se2).sqrt();
    let detail = format!(
        "type4 {m4:.2}±{se4:.2}, type1 {m1:.2}±{se1:.2} (gap {:.2}, need > {:.2}), type2 {m2:.2}±{se2:.2} (gap {:.2}, need > {:.2})",
        m4 - m1,
        2.0 * pooled1,
        m4 - m2,
        2.0 * pooled2
    );
    ensure(m4 - m1 > 2.0 * pooled1 && m4 - m2 > 2.0 * pooled2, || detail.clone())?;
    within_budget(start, Duration::from_secs(300))?;
    Ok(detail)
}

// ------------------------------------------------------------ determinism

fn cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_stoch-arcade")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn without_wall_time(path: &Path) -> Result<Vec<u8>, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    Ok(text
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_time_seconds\""))
        .flat_map(|l| l.bytes().chain(*b"\n"))
        .collect())
}

fn dir_bytes(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    Ok(files)
}

fn end_to_end_determinism() -> Result<String, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| tmp.path().join(name).to_string_lossy().into_owned();
    let mut compared = 0;
    for (preset, agent) in [("breakout/type1", "scripted"), ("boxing/type2", "random"), ("breakout/type5c", "random")] {
        let base = ["run", "--preset", preset, "--agent", agent, "--episodes", "12", "--seed", "5"];
        let mut reports = Vec::new();
        for (tag, extra) in [("a", vec![]), ("b", vec![]), ("par", vec!["--parallel", "8"])] {
            let out = p(&format!("{}-{tag}.json", preset.replace('/', "-")));
            let mut args = base.to_vec();
            args.extend(["--out", &out]);
            args.extend(extra.iter().copied());
            cli(&args)?;
            reports.push(without_wall_time(Path::new(&out))?);
        }
        ensure(reports[0] == reports[1], || format!("{preset}: repeated JSON reports differ"))?;
        ensure(reports[0] == reports[2], || format!("{preset}: --parallel 8 differs from serial"))?;

        let csv: Vec<_> = ["c1", "c2"]
            .iter()
            .map(|tag| {
                let out = p(&format!("{}-{tag}.csv", preset.replace('/', "-")));
                let mut args = base.to_vec();
                args.extend(["--format", "csv", "--out", &out]);
                cli(&args).and_then(|_| fs::read(&out).map_err(|e| e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        ensure(csv[0] == csv[1], || format!("{preset}: CSV reports differ"))?;

        let dirs = [p(&format!("{}-d1", preset.replace('/', "-"))), p(&format!("{}-d2", preset.replace('/', "-")))];
        for dir in &dirs {
            cli(&["dump-frames", "--preset", preset, "--agent", agent, "--steps", "150", "--seed", "5", "--dir", dir])?;
        }
        let (d1, d2) = (dir_bytes(Path::new(&dirs[0]))?, dir_bytes(Path::new(&dirs[1]))?);
        ensure(d1.len() == 150 && d1 == d2, || format!("{preset}: frame dumps differ"))?;
        compared += 1;
    }
    Ok(format!("{compared} presets: JSON, CSV, parallel and frame dumps byte-identical"))
}

fn main() {
    let checks: [(&str, Check); 9] = [
        ("p=0 identity", p0_identity),
        ("frequency calibration", frequency_calibration),
        ("colorflip rate", colorflip_rate),
        ("drift boundary", drift_boundary),
        ("mask geometry", mask_geometry),
        ("RAM-mod isolation", ram_isolation),
        ("total cancellation", total_cancellation),
        ("directional degradation", directional_degradation),
        ("end-to-end determinism", end_to_end_determinism),
    ];
    let mut failures = 0;
    for (name, check) in checks {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name:<24} {detail} [{secs:.1}s]"),
            Err(why) => {
                failures += 1;
                println!("FAIL  {name:<24} {why} [{secs:.1}s]");
            }
        }
    }
    println!("{} of {} acceptance criteria passed", checks.len() - failures, checks.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
